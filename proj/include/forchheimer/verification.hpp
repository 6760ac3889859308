#pragma once

/**
 * @file verification.hpp
 * @brief Error norms against a manufactured solution and the mesh-refinement
 * convergence study with CSV / Markdown reports.
 */

#include "forchheimer/errors.hpp"
#include "forchheimer/manufactured.hpp"
#include "forchheimer/mesh.hpp"
#include "forchheimer/quadrature.hpp"
#include "forchheimer/solver.hpp"
#include "forchheimer/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace forchheimer {

struct ErrorNorms {
  double p = 0.0;  ///< ||p - p_h||_{L2}
  double s = 0.0;  ///< ||s - s_h||_{L^beta}
  double u = 0.0;  ///< ||u - u_h||_{L^beta}, u_h evaluated pointwise
  double p_projected = 0.0;  ///< ||pi p - p_h||_{L2}
  double p_max = 0.0;        ///< max |p - p_h| over quadrature points
};

/// Errors of @p state against exact fields at time @p t, using @p rule on every cell.
template <class PressureField, class GradientField, class VelocityField>
ErrorNorms error_norms(const DofMap& dofs, const DiscreteState& state, PressureField&& p_exact,
                       GradientField&& s_exact, VelocityField&& u_exact, double beta,
                       const QuadratureRule& rule = triangle_rule_degree4()) {
  if (!(beta >= 1.0)) throw DomainError("error_norms: beta must be at least 1");
  double sum_p = 0.0, sum_s = 0.0, sum_u = 0.0, sum_proj = 0.0, max_p = 0.0;
  for (std::size_t t = 0; t < dofs.num_cells(); ++t) {
    const CellData& c = dofs.cell(t);
    const double ph = state.p[static_cast<Eigen::Index>(t)];
    const Point sh = dofs.gradient_value(state.s, t);
    double mean_p = 0.0;
    for (const auto& qp : rule.points) {
      const Point x = QuadratureRule::map(c.vertices[0], c.vertices[1], c.vertices[2], qp);
      const double w = qp.weight * c.area;
      const double pe = p_exact(x);
      const double dp = ph - pe;
      sum_p += w * dp * dp;
      max_p = std::max(max_p, std::abs(dp));
      mean_p += qp.weight * pe;
      sum_s += w * std::pow((sh - Point(s_exact(x))).norm(), beta);
      sum_u += w * std::pow((dofs.velocity_at(state.u, t, x) - Point(u_exact(x))).norm(), beta);
    }
    sum_proj += c.area * (ph - mean_p) * (ph - mean_p);
  }
  ErrorNorms e;
  e.p = std::sqrt(sum_p);
  e.s = std::pow(sum_s, 1.0 / beta);
  e.u = std::pow(sum_u, 1.0 / beta);
  e.p_projected = std::sqrt(sum_proj);
  e.p_max = max_p;
  return e;
}

inline ErrorNorms error_norms(const DofMap& dofs, const DiscreteState& state,
                              const ManufacturedSolution& exact, double t,
                              const QuadratureRule& rule = triangle_rule_degree4()) {
  return error_norms(
      dofs, state, [&](const Point& x) { return exact.p(x, t); },
      [&](const Point& x) { return exact.s(x, t); }, [&](const Point& x) { return exact.u(x, t); },
      exact.law().degeneracy().beta, rule);
}

/// Observed order between two refinement levels.
inline double observed_rate(double err_coarse, double err_fine, double h_coarse, double h_fine) {
  return std::log(err_coarse / err_fine) / std::log(h_coarse / h_fine);
}

/// Time step choice: a fixed value, or min(cap, h^2). Either way the value is
/// shrunk so that t_final is an integer number of steps.
struct TimeStepPolicy {
  std::optional<double> fixed;
  double cap = 1e-2;

  double select(double h, double t_final) const {
    const double target = fixed ? *fixed : std::min(cap, h * h);
    if (!(target > 0.0)) throw DomainError("time step must be positive");
    if (t_final == 0.0) return target;
    const double steps = std::ceil(t_final / target * (1.0 - 1e-12));
    return t_final / steps;
  }
};

struct StudyConfig {
  TimeStepPolicy dt_policy;
  double t_final = 1.0;
  double picard_tol = 1e-6;
  int picard_max = 50;
  LinearSolverKind linear_solver = LinearSolverKind::condensed;
};

struct ConvergenceRow {
  int n = 0;
  double h = 0.0;
  double dt = 0.0;
  int steps = 0;
  ErrorNorms errors;
  double rate_p = std::numeric_limits<double>::quiet_NaN();
  double rate_s = std::numeric_limits<double>::quiet_NaN();
  double rate_u = std::numeric_limits<double>::quiet_NaN();
  double picard_avg = 0.0;
  int picard_max = 0;
  /// largest per-step mass-balance defect
  double mass_residual = 0.0;
};

struct ConvergenceReport {
  double beta = 2.0;
  std::vector<ConvergenceRow> rows;
};

/// Fills in the rate columns from consecutive rows.
inline void compute_rates(ConvergenceReport& report) {
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    const auto& a = report.rows[i - 1];
    auto& b = report.rows[i];
    b.rate_p = observed_rate(a.errors.p, b.errors.p, a.h, b.h);
    b.rate_s = observed_rate(a.errors.s, b.errors.s, a.h, b.h);
    b.rate_u = observed_rate(a.errors.u, b.errors.u, a.h, b.h);
  }
}

/// Solves the manufactured problem on one structured mesh and measures the errors at t_final.
inline ConvergenceRow run_manufactured(const ForchheimerLaw& law, int n, const StudyConfig& cfg) {
  const TriMesh mesh = unit_square_mesh(n);
  const DofMap dofs(mesh);
  const ManufacturedSolution exact(law);

  SolverConfig solver_cfg;
  solver_cfg.t_final = cfg.t_final;
  solver_cfg.dt = cfg.dt_policy.select(mesh.h(), cfg.t_final);
  solver_cfg.picard_tol = cfg.picard_tol;
  solver_cfg.picard_max = cfg.picard_max;
  solver_cfg.linear_solver = cfg.linear_solver;
  ExpandedMixedSolver solver(dofs, law, solver_cfg);

  const DiscreteState initial = solver.initial_state(
      [&](const Point& x) { return exact.p(x, 0.0); },
      [&](const Point& x) { return exact.s(x, 0.0); },
      VectorField([&](const Point& x) { return exact.u(x, 0.0); }));

  ConvergenceRow row;
  row.n = n;
  row.h = mesh.h();
  row.dt = solver_cfg.dt;
  long total_iterations = 0;
  const RunResult result = solver.run(
      initial, [&](const Point& x, double t) { return exact.f(x, t); },
      [&](const DiscreteState&, const StepDiagnostics& d) {
        total_iterations += d.iterations;
        row.picard_max = std::max(row.picard_max, d.iterations);
        row.mass_residual = std::max(row.mass_residual, std::abs(d.mass_residual));
      });
  row.steps = static_cast<int>(result.steps.size());
  row.picard_avg = row.steps > 0 ? static_cast<double>(total_iterations) / row.steps : 0.0;
  row.errors = error_norms(dofs, result.final_state, exact, cfg.t_final);
  return row;
}

inline ConvergenceReport convergence_study(
    const ForchheimerLaw& law, const std::vector<int>& meshes, const StudyConfig& cfg,
    const std::function<void(const ConvergenceRow&)>& on_row = {}) {
  if (meshes.empty()) throw DomainError("convergence_study: no meshes given");
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    if (meshes[i] < 1) throw DomainError("convergence_study: mesh sizes must be positive");
    if (i > 0 && meshes[i] <= meshes[i - 1])
      throw DomainError("convergence_study: mesh sizes must be strictly increasing");
  }
  ConvergenceReport report;
  report.beta = law.degeneracy().beta;
  for (int n : meshes) {
    report.rows.push_back(run_manufactured(law, n, cfg));
    compute_rates(report);
    if (on_row) on_row(report.rows.back());
  }
  return report;
}

namespace detail {

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

inline std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace detail

inline constexpr const char* kCsvHeader =
    "n,h,dt,err_p,rate_p,err_s,rate_s,err_u,rate_u,picard_avg";

/// One line per mesh; rate fields of the first row are empty.
inline void write_csv(std::ostream& os, const ConvergenceReport& report) {
  os << kCsvHeader << '\n';
  const auto rate = [](double r) { return std::isnan(r) ? std::string() : detail::sci(r); };
  for (const auto& r : report.rows)
    os << r.n << ',' << detail::sci(r.h) << ',' << detail::sci(r.dt) << ','
       << detail::sci(r.errors.p) << ',' << rate(r.rate_p) << ',' << detail::sci(r.errors.s) << ','
       << rate(r.rate_s) << ',' << detail::sci(r.errors.u) << ',' << rate(r.rate_u) << ','
       << detail::sci(r.picard_avg) << '\n';
}

inline void write_markdown(std::ostream& os, const ConvergenceReport& report) {
  const std::string beta = detail::fixed(report.beta, 2);
  // double bars as U+2016 so that they do not split Markdown table cells
  os << "| N | dt | \u2016p-p_h\u2016 | Rates | \u2016s-s_h\u2016_{L^" << beta
     << "} | Rates | \u2016u-u_h\u2016_{L^" << beta << "} | Rates | Picard avg |\n";
  os << "|---|---|---|---|---|---|---|---|---|\n";
  const auto rate = [](double r) { return std::isnan(r) ? std::string("-") : detail::fixed(r, 2); };
  for (const auto& r : report.rows)
    os << "| " << r.n << " | " << detail::sci(r.dt) << " | " << detail::sci(r.errors.p) << " | "
       << rate(r.rate_p) << " | " << detail::sci(r.errors.s) << " | " << rate(r.rate_s) << " | "
       << detail::sci(r.errors.u) << " | " << rate(r.rate_u) << " | "
       << detail::fixed(r.picard_avg, 2) << " |\n";
}

}  // namespace forchheimer
