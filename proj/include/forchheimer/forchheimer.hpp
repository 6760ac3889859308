#pragma once

#include "forchheimer/assembly.hpp"
#include "forchheimer/errors.hpp"
#include "forchheimer/law.hpp"
#include "forchheimer/manufactured.hpp"
#include "forchheimer/mesh.hpp"
#include "forchheimer/quadrature.hpp"
#include "forchheimer/solver.hpp"
#include "forchheimer/spaces.hpp"
#include "forchheimer/verification.hpp"
