#pragma once

/**
 * @file law.hpp
 * @brief Generalized Forchheimer laws g(s) = sum_i a_i s^alpha_i and the
 * degenerate conductivity K(xi) = 1 / g(s(xi)), where s(xi) >= 0 solves
 * s g(s) = xi.
 */

#include "forchheimer/errors.hpp"

#include <Eigen/Core>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace forchheimer {

/// Exponents describing how fast K decays: K(xi) ~ xi^{-a}, beta = 2 - a.
struct DegeneracyExponents {
  double a;
  double beta;
};

class ForchheimerLaw {
public:
  /// @p coefficients a_0..a_N, @p exponents alpha_0..alpha_N.
  /// Requires N >= 1, alpha_0 = 0 < alpha_1 < ... < alpha_N, a_i >= 0 and a_0, a_N > 0.
  ForchheimerLaw(std::vector<double> coefficients, std::vector<double> exponents)
      : coeffs_(std::move(coefficients)), exps_(std::move(exponents)) {
    if (coeffs_.size() != exps_.size())
      throw DomainError("ForchheimerLaw: coefficient and exponent counts differ");
    if (coeffs_.size() < 2)
      throw DomainError("ForchheimerLaw: at least two terms are required");
    if (exps_.front() != 0.0)
      throw DomainError("ForchheimerLaw: the leading exponent must be 0");
    for (std::size_t i = 1; i < exps_.size(); ++i)
      if (!(exps_[i] > exps_[i - 1]))
        throw DomainError("ForchheimerLaw: exponents must be strictly increasing");
    for (double c : coeffs_)
      if (!(c >= 0.0) || !std::isfinite(c))
        throw DomainError("ForchheimerLaw: coefficients must be finite and non-negative");
    if (!(coeffs_.front() > 0.0) || !(coeffs_.back() > 0.0))
      throw DomainError("ForchheimerLaw: a_0 and a_N must be positive");
    two_term_linear_ = coeffs_.size() == 2 && exps_[1] == 1.0;
  }

  /// g(s) = 1 + s, the two-term law used in the convergence study.
  static ForchheimerLaw two_term() { return ForchheimerLaw({1.0, 1.0}, {0.0, 1.0}); }

  const std::vector<double>& coefficients() const noexcept { return coeffs_; }
  const std::vector<double>& exponents() const noexcept { return exps_; }
  double degree() const noexcept { return exps_.back(); }

  DegeneracyExponents degeneracy() const noexcept {
    const double a = degree() / (degree() + 1.0);
    return {a, 2.0 - a};
  }

  double g(double s) const {
    if (!(s >= 0.0)) throw DomainError("g: argument must be non-negative");
    double sum = 0.0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      sum += coeffs_[i] * (exps_[i] == 0.0 ? 1.0 : std::pow(s, exps_[i]));
    return sum;
  }

  /// d/ds [s g(s)] = sum_i a_i (alpha_i + 1) s^alpha_i, strictly positive.
  double sg_prime(double s) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      sum += coeffs_[i] * (exps_[i] + 1.0) * (exps_[i] == 0.0 ? 1.0 : std::pow(s, exps_[i]));
    return sum;
  }

  /// Unique s >= 0 with s g(s) = xi. Uses the quadratic formula for g = a_0 + a_1 s.
  double s_of_xi(double xi) const {
    if (!(xi >= 0.0)) throw DomainError("s_of_xi: argument must be non-negative");
    if (two_term_linear_) {
      // a_1 s^2 + a_0 s - xi = 0, cancellation-free root
      const double a0 = coeffs_[0], a1 = coeffs_[1];
      return 2.0 * xi / (a0 + std::sqrt(a0 * a0 + 4.0 * a1 * xi));
    }
    return s_of_xi_newton(xi);
  }

  /// Safeguarded Newton on s g(s) - xi over the bracket [0, xi / a_0], with
  /// bisection whenever the Newton step leaves the bracket.
  double s_of_xi_newton(double xi, int max_iterations = 100, double rel_tol = 1e-13) const {
    if (!(xi >= 0.0)) throw DomainError("s_of_xi: argument must be non-negative");
    if (xi == 0.0) return 0.0;
    double lo = 0.0;
    double hi = xi / coeffs_.front();
    // leading-order guess from the top-degree term
    double s = std::min(hi, std::pow(xi / coeffs_.back(), 1.0 / (degree() + 1.0)));
    double residual = 0.0;
    for (int it = 0; it < max_iterations; ++it) {
      residual = s * g(s) - xi;
      if (residual == 0.0) return s;
      if (residual > 0.0) hi = s; else lo = s;
      double next = s - residual / sg_prime(s);
      if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
      const double step = std::abs(next - s);
      s = next;
      if (step <= rel_tol * s || hi - lo <= rel_tol * s) return s;
    }
    throw NumericalError("s_of_xi: Newton iteration did not converge", residual);
  }

  /// K(xi) = 1 / g(s(xi)), in (0, 1/a_0] and nonincreasing.
  double K(double xi) const { return 1.0 / g(s_of_xi(xi)); }

  /// K'(xi) by implicit differentiation of s g(s) = xi.
  double K_prime(double xi) const {
    const double s = s_of_xi(xi);
    const double gs = g(s);
    double g_prime = 0.0;
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
      if (coeffs_[i] != 0.0)
        g_prime += coeffs_[i] * exps_[i] * std::pow(s, exps_[i] - 1.0);
    return -g_prime / (gs * gs * sg_prime(s));
  }

  /// K(|y|) y. The sign convention u = -K(|s|) s lives with the caller.
  template <int D>
  Eigen::Matrix<double, D, 1> flux(const Eigen::Matrix<double, D, 1>& y) const {
    return K(y.norm()) * y;
  }

  /// H(xi) = int_0^{xi^2} K(sqrt(r)) dr, evaluated as int_0^xi 2 t K(t) dt.
  double H(double xi, double rel_tol = 1e-10) const {
    if (!(xi >= 0.0)) throw DomainError("H: argument must be non-negative");
    if (xi == 0.0) return 0.0;
    double error = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
        [this](double t) { return 2.0 * t * K(t); }, 0.0, xi, 20, rel_tol, &error);
    if (!(error <= rel_tol * std::abs(value) * 10.0))
      throw NumericalError("H: adaptive quadrature did not reach tolerance", error);
    return value;
  }

private:
  std::vector<double> coeffs_;
  std::vector<double> exps_;
  bool two_term_linear_ = false;
};

/// Parses "a_0:alpha_0,a_1:alpha_1,..." e.g. "1:0,1:1" for g(s) = 1 + s.
inline ForchheimerLaw parse_law(std::string_view text) {
  std::vector<double> coeffs, exps;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw DomainError("law term '" + item + "' is not of the form coefficient:exponent");
    try {
      std::size_t used_a = 0, used_e = 0;
      const std::string a_str = item.substr(0, colon), e_str = item.substr(colon + 1);
      coeffs.push_back(std::stod(a_str, &used_a));
      exps.push_back(std::stod(e_str, &used_e));
      if (used_a != a_str.size() || used_e != e_str.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw DomainError("law term '" + item + "' is not numeric");
    }
  }
  return ForchheimerLaw(std::move(coeffs), std::move(exps));
}

}  // namespace forchheimer
