#pragma once

/**
 * @file manufactured.hpp
 * @brief Manufactured solution on the unit square with zero normal flux:
 *
 *   p(x, t) = e^{-5t} [ (x1^2 + x2^2)/2 - (x1^3 + x2^3)/3 ]
 *   s(x, t) = grad p = e^{-5t} ( x1 (1 - x1), x2 (1 - x2) )
 *   u(x, t) = -K(|s|) s
 *   f(x, t) = p_t + div u
 *
 * The forcing is derived here from the convention u = -K(|s|) s. Each
 * component of s vanishes on the two faces normal to it, so u.n = 0 on the
 * whole boundary.
 */

#include "forchheimer/law.hpp"
#include "forchheimer/mesh.hpp"

#include <cmath>

namespace forchheimer {

class ManufacturedSolution {
public:
  explicit ManufacturedSolution(ForchheimerLaw law) : law_(std::move(law)) {}

  const ForchheimerLaw& law() const noexcept { return law_; }

  double p(const Point& x, double t) const {
    const double x1 = x.x(), x2 = x.y();
    return std::exp(-5.0 * t) *
           (0.5 * (x1 * x1 + x2 * x2) - (x1 * x1 * x1 + x2 * x2 * x2) / 3.0);
  }

  double p_t(const Point& x, double t) const { return -5.0 * p(x, t); }

  Point s(const Point& x, double t) const {
    return std::exp(-5.0 * t) * Point(x.x() * (1.0 - x.x()), x.y() * (1.0 - x.y()));
  }

  Point u(const Point& x, double t) const {
    const Point sv = s(x, t);
    return -law_.K(sv.norm()) * sv;
  }

  /// div u = -[ K'(|s|) (s1^2 ds1/dx1 + s2^2 ds2/dx2) / |s| + K(|s|) (ds1/dx1 + ds2/dx2) ],
  /// using that s_i depends on x_i only. At s = 0 the first term vanishes in the limit.
  double div_u(const Point& x, double t) const {
    const double decay = std::exp(-5.0 * t);
    const Point sv = s(x, t);
    const double d1 = decay * (1.0 - 2.0 * x.x());
    const double d2 = decay * (1.0 - 2.0 * x.y());
    const double xi = sv.norm();
    double value = law_.K(xi) * (d1 + d2);
    if (xi > 0.0)
      value += law_.K_prime(xi) * (sv.x() * sv.x() * d1 + sv.y() * sv.y() * d2) / xi;
    return -value;
  }

  double f(const Point& x, double t) const { return p_t(x, t) + div_u(x, t); }

private:
  ForchheimerLaw law_;
};

}  // namespace forchheimer
