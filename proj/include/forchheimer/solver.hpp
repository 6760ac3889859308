#pragma once

/**
 * @file solver.hpp
 * @brief Backward Euler in time for the expanded mixed system
 *
 *   (p^n - p^{n-1}) / dt + div u^n = f^n
 *   u^n + K(|s^n|) s^n = 0
 *   s^n - grad p^n = 0
 *
 * with the nonlinearity resolved by Picard iteration: freeze the cellwise
 * conductivity at the current gradient iterate, solve the linear system,
 * repeat. The velocity convention is u = -K(|s|) s throughout.
 */

#include "forchheimer/assembly.hpp"
#include "forchheimer/errors.hpp"
#include "forchheimer/law.hpp"
#include "forchheimer/spaces.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace forchheimer {

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<Point(const Point&)>;
using SpaceTimeField = std::function<double(const Point&, double)>;

struct DiscreteState {
  Vector p;  // pressure, one value per cell
  Vector s;  // pressure gradient, two values per cell
  Vector u;  // velocity, one flux per interior edge
  double t = 0.0;
};

enum class LinearSolverKind {
  /// Eliminate p and s cellwise; sparse LDL^T on the SPD velocity system.
  condensed,
  /// Sparse LU on the full (p, s, u) saddle-point system.
  monolithic,
};

struct SolverConfig {
  double dt = 1e-2;
  double t_final = 1.0;
  double picard_tol = 1e-6;
  int picard_max = 50;
  LinearSolverKind linear_solver = LinearSolverKind::condensed;

  void validate() const {
    if (!(dt > 0.0)) throw DomainError("SolverConfig: dt must be positive");
    if (!(t_final >= 0.0)) throw DomainError("SolverConfig: t_final must be non-negative");
    if (!(picard_tol > 0.0)) throw DomainError("SolverConfig: picard_tol must be positive");
    if (picard_max < 1) throw DomainError("SolverConfig: picard_max must be at least 1");
  }
};

struct StepResult {
  DiscreteState state;
  int iterations = 0;
  /// max-norm of successive gradient iterates, one entry per Picard iterate
  std::vector<double> increments;
  /// max over cells of |mean(u_h) + K(|s_h|) s_h| at exit
  double residual = 0.0;
  /// int p^n - int p^{n-1} - dt int f^n
  double mass_residual = 0.0;
  /// dt int f^n
  double forcing_integral = 0.0;
  /// ||f^n||_{L2}
  double forcing_norm = 0.0;
};

struct StepDiagnostics {
  double t = 0.0;
  int iterations = 0;
  std::vector<double> increments;
  double residual = 0.0;
  double mass_residual = 0.0;
  double forcing_integral = 0.0;
  double p_norm = 0.0;
  double p_max = 0.0;
  /// ||p^0|| + sum_k dt ||f^k||, an upper bound for p_norm
  double p_norm_bound = 0.0;
};

struct RunResult {
  DiscreteState final_state;
  std::vector<StepDiagnostics> steps;
};

/// Number of backward Euler steps; t_final must be an integer multiple of dt.
inline int step_count(const SolverConfig& cfg) {
  const double ratio = cfg.t_final / cfg.dt;
  const double n = std::round(ratio);
  if (std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio))
    throw DomainError("t_final must be an integer multiple of dt");
  return static_cast<int>(n);
}

class ExpandedMixedSolver {
public:
  ExpandedMixedSolver(const DofMap& dofs, ForchheimerLaw law, SolverConfig cfg)
      : dofs_(&dofs), law_(std::move(law)), cfg_(cfg) {
    cfg_.validate();
  }

  const DofMap& dofs() const noexcept { return *dofs_; }
  const ForchheimerLaw& law() const noexcept { return law_; }
  const SolverConfig& config() const noexcept { return cfg_; }

  /// p = pi p0, s = pi s0. The velocity is the edge-flux interpolant of @p u0
  /// when given; otherwise the least-squares fit of mean(u) = -K(|s|) s.
  DiscreteState initial_state(const ScalarField& p0, const VectorField& s0,
                              const std::optional<VectorField>& u0 = std::nullopt) const {
    DiscreteState state;
    state.t = 0.0;
    state.p = dofs().l2_project_scalar(p0);
    state.s = dofs().l2_project_vector(s0);
    if (u0) {
      state.u = dofs().hdiv_interpolate(*u0);
      return state;
    }
    // minimise sum_T |T| / K_T |mean_T(u) + K_T s_T|^2
    const Vector kbar = frozen_conductivity(state.s);
    const SparseMatrix a = condensed_velocity_matrix(dofs(), kbar, 0.0);
    Vector rhs = Vector::Zero(static_cast<Eigen::Index>(dofs().num_velocity()));
    for (std::size_t t = 0; t < dofs().num_cells(); ++t) {
      const CellData& c = dofs().cell(t);
      const Point st = dofs().gradient_value(state.s, t);
      for (int k = 0; k < 3; ++k)
        if (c.dofs[k] != DofMap::npos)
          rhs[static_cast<Eigen::Index>(c.dofs[k])] -= rt0_cell_integral(c, k).dot(st);
    }
    Eigen::SimplicialLDLT<SparseMatrix> ldlt(a);
    if (ldlt.info() != Eigen::Success)
      throw LinearSolverError("initial_state: velocity fit is singular", 0.0);
    state.u = ldlt.solve(rhs);
    return state;
  }

  /// One backward Euler step from @p prev to time @p t_n.
  StepResult step(const DiscreteState& prev, double t_n, const SpaceTimeField& f) {
    const DofMap& d = dofs();
    const auto nc = static_cast<Eigen::Index>(d.num_cells());
    const double dt = cfg_.dt;

    StepResult result;
    Vector forcing(nc);
    double f_sq = 0.0;
    const QuadratureRule& rule = triangle_rule_degree4();
    for (Eigen::Index t = 0; t < nc; ++t) {
      const CellData& c = d.cell(static_cast<std::size_t>(t));
      const Eigen::Vector2d moments =
          rule.integrate(c.vertices[0], c.vertices[1], c.vertices[2], c.area,
                         [&](const Point& x) {
                           const double v = f(x, t_n);
                           return Eigen::Vector2d(v, v * v);
                         });
      forcing[t] = moments[0];
      f_sq += moments[1];
    }
    result.forcing_norm = std::sqrt(f_sq);
    result.forcing_integral = dt * forcing.sum();

    // (1/dt) M_p p_prev + F
    Vector rhs_p(nc);
    for (Eigen::Index t = 0; t < nc; ++t)
      rhs_p[t] = d.cell(static_cast<std::size_t>(t)).area * prev.p[t] / dt + forcing[t];

    Vector s_iter = prev.s;
    for (int it = 1; it <= cfg_.picard_max; ++it) {
      const Vector kbar = frozen_conductivity(s_iter);
      DiscreteState next = solve_linear(kbar, rhs_p);
      next.t = t_n;

      const double increment = (next.s - s_iter).lpNorm<Eigen::Infinity>();
      const double scale = 1.0 + s_iter.lpNorm<Eigen::Infinity>();
      result.increments.push_back(increment);
      result.residual = constitutive_residual(next);
      result.iterations = it;
      const bool converged = increment <= cfg_.picard_tol * scale ||
                             result.residual <= cfg_.picard_tol * (1.0 + next.s.lpNorm<Eigen::Infinity>());
      s_iter = next.s;
      if (converged) {
        result.mass_residual = integral(next.p) - integral(prev.p) - result.forcing_integral;
        result.state = std::move(next);
        return result;
      }
    }
    throw PicardNonConvergence("Picard iteration did not converge in " +
                                   std::to_string(cfg_.picard_max) + " iterations at t=" +
                                   std::to_string(t_n),
                               result.residual, cfg_.picard_max);
  }

  /// Steps from @p initial to t_final; @p observer sees every new state.
  RunResult run(const DiscreteState& initial, const SpaceTimeField& f,
                const std::function<void(const DiscreteState&, const StepDiagnostics&)>& observer =
                    {}) {
    const int steps = step_count(cfg_);
    RunResult out;
    out.final_state = initial;
    double bound = l2_norm(initial.p);
    for (int n = 1; n <= steps; ++n) {
      const double t_n = cfg_.t_final * n / steps;
      StepResult r = step(out.final_state, t_n, f);
      bound += cfg_.dt * r.forcing_norm;
      StepDiagnostics diag;
      diag.t = t_n;
      diag.iterations = r.iterations;
      diag.increments = std::move(r.increments);
      diag.residual = r.residual;
      diag.mass_residual = r.mass_residual;
      diag.forcing_integral = r.forcing_integral;
      diag.p_norm = l2_norm(r.state.p);
      diag.p_max = r.state.p.lpNorm<Eigen::Infinity>();
      diag.p_norm_bound = bound;
      out.final_state = std::move(r.state);
      if (observer) observer(out.final_state, diag);
      out.steps.push_back(std::move(diag));
    }
    return out;
  }

  /// K(|s_T|) per cell.
  Vector frozen_conductivity(const Vector& s) const {
    const auto nc = static_cast<Eigen::Index>(dofs().num_cells());
    Vector k(nc);
    for (Eigen::Index t = 0; t < nc; ++t)
      k[t] = law_.K(Point(s[2 * t], s[2 * t + 1]).norm());
    return k;
  }

  /// max over cells of |mean(u) + K(|s|) s|.
  double constitutive_residual(const DiscreteState& state) const {
    double worst = 0.0;
    for (std::size_t t = 0; t < dofs().num_cells(); ++t) {
      const Point st = dofs().gradient_value(state.s, t);
      const Point r = dofs().velocity_mean(state.u, t) + law_.K(st.norm()) * st;
      worst = std::max(worst, r.lpNorm<Eigen::Infinity>());
    }
    return worst;
  }

  double integral(const Vector& p) const {
    double sum = 0.0;
    for (std::size_t t = 0; t < dofs().num_cells(); ++t)
      sum += dofs().cell(t).area * p[static_cast<Eigen::Index>(t)];
    return sum;
  }

  double l2_norm(const Vector& p) const {
    double sum = 0.0;
    for (std::size_t t = 0; t < dofs().num_cells(); ++t)
      sum += dofs().cell(t).area * p[static_cast<Eigen::Index>(t)] * p[static_cast<Eigen::Index>(t)];
    return std::sqrt(sum);
  }

private:
  DiscreteState solve_linear(const Vector& kbar, const Vector& rhs_p) {
    return cfg_.linear_solver == LinearSolverKind::condensed ? solve_condensed(kbar, rhs_p)
                                                             : solve_monolithic(kbar, rhs_p);
  }

  DiscreteState solve_condensed(const Vector& kbar, const Vector& rhs_p) {
    const DofMap& d = dofs();
    const double dt = cfg_.dt;
    const SparseMatrix a = condensed_velocity_matrix(d, kbar, dt);
    if (!pattern_ready_) {
      ldlt_.analyzePattern(a);
      pattern_ready_ = true;
    }
    ldlt_.factorize(a);
    if (ldlt_.info() != Eigen::Success || !(ldlt_.vectorD().minCoeff() > 0.0))
      throw LinearSolverError("condensed velocity system is not positive definite",
                              ldlt_.info() == Eigen::Success ? ldlt_.vectorD().minCoeff() : 0.0);

    Vector rhs = Vector::Zero(static_cast<Eigen::Index>(d.num_velocity()));
    for (std::size_t t = 0; t < d.num_cells(); ++t) {
      const CellData& c = d.cell(t);
      for (int k = 0; k < 3; ++k)
        if (c.dofs[k] != DofMap::npos)
          rhs[static_cast<Eigen::Index>(c.dofs[k])] +=
              dt * c.signs[k] * c.edge_lengths[k] * rhs_p[static_cast<Eigen::Index>(t)] / c.area;
    }

    DiscreteState st;
    st.u = ldlt_.solve(rhs);
    st.p.resize(static_cast<Eigen::Index>(d.num_cells()));
    st.s.resize(static_cast<Eigen::Index>(d.num_gradient()));
    for (std::size_t t = 0; t < d.num_cells(); ++t) {
      const CellData& c = d.cell(t);
      const auto ti = static_cast<Eigen::Index>(t);
      const double flux = d.divergence_mean(st.u, t) * c.area;
      st.p[ti] = dt * (rhs_p[ti] - flux) / c.area;
      const Point s = -d.velocity_mean(st.u, t) / kbar[ti];
      st.s[2 * ti] = s.x();
      st.s[2 * ti + 1] = s.y();
    }
    return st;
  }

  DiscreteState solve_monolithic(const Vector& kbar, const Vector& rhs_p) {
    const DofMap& d = dofs();
    const SystemBlocks blocks = assemble_forms(d, kbar);
    const SparseMatrix a = monolithic_matrix(blocks, cfg_.dt);
    const auto np = static_cast<Eigen::Index>(d.num_pressure());
    const auto ns = static_cast<Eigen::Index>(d.num_gradient());
    const auto nu = static_cast<Eigen::Index>(d.num_velocity());
    Vector rhs = Vector::Zero(np + ns + nu);
    rhs.head(np) = rhs_p;
    Eigen::SparseLU<SparseMatrix> lu;
    lu.analyzePattern(a);
    lu.factorize(a);
    if (lu.info() != Eigen::Success)
      throw LinearSolverError("saddle-point factorization failed: " + lu.lastErrorMessage(), 0.0);
    const Vector x = lu.solve(rhs);
    DiscreteState st;
    st.p = x.head(np);
    st.s = x.segment(np, ns);
    st.u = x.tail(nu);
    return st;
  }

  const DofMap* dofs_;
  ForchheimerLaw law_;
  SolverConfig cfg_;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt_;
  bool pattern_ready_ = false;
};

}  // namespace forchheimer
