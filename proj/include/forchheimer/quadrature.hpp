#pragma once

/**
 * @file quadrature.hpp
 * @brief Quadrature on triangles (barycentric points, weights summing to 1)
 * and Gauss-Legendre rules on [0, 1].
 */

#include "forchheimer/errors.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace forchheimer {

struct QuadraturePoint {
  std::array<double, 3> barycentric;
  double weight;  // fraction of the triangle area
};

struct QuadratureRule {
  std::vector<QuadraturePoint> points;
  int degree = 0;

  /// Integral of @p f over triangle (a, b, c) with the given area.
  template <class F>
  auto integrate(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c,
                 double area, F&& f) const {
    using R = decltype(f(Eigen::Vector2d{}));
    R sum = f(map(a, b, c, points.front())) * points.front().weight;
    for (std::size_t q = 1; q < points.size(); ++q) sum += f(map(a, b, c, points[q])) * points[q].weight;
    return R(sum * area);
  }

  static Eigen::Vector2d map(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                             const Eigen::Vector2d& c, const QuadraturePoint& qp) {
    return qp.barycentric[0] * a + qp.barycentric[1] * b + qp.barycentric[2] * c;
  }
};

namespace detail {

inline void add_orbit3(QuadratureRule& rule, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  rule.points.push_back({{a, a, b}, w});
  rule.points.push_back({{a, b, a}, w});
  rule.points.push_back({{b, a, a}, w});
}

inline void add_orbit6(QuadratureRule& rule, double a, double b, double w) {
  const double c = 1.0 - a - b;
  rule.points.push_back({{a, b, c}, w});
  rule.points.push_back({{a, c, b}, w});
  rule.points.push_back({{b, a, c}, w});
  rule.points.push_back({{b, c, a}, w});
  rule.points.push_back({{c, a, b}, w});
  rule.points.push_back({{c, b, a}, w});
}

}  // namespace detail

/// Six-point symmetric rule, exact for total degree 4.
inline const QuadratureRule& triangle_rule_degree4() {
  static const QuadratureRule rule = [] {
    QuadratureRule r;
    r.degree = 4;
    detail::add_orbit3(r, 0.44594849091596488631832925388305, 0.22338158967801146569500700843312);
    detail::add_orbit3(r, 0.09157621350977074345957146340220, 0.10995174365532186763832632490021);
    return r;
  }();
  return rule;
}

namespace detail {

inline QuadratureRule degree7_from(const Eigen::Matrix<double, 8, 1>& p) {
  QuadratureRule r;
  r.degree = 7;
  r.points.push_back({{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, p[0]});
  add_orbit3(r, p[1], p[2]);
  add_orbit3(r, p[3], p[4]);
  add_orbit6(r, p[5], p[6], p[7]);
  return r;
}

// Defects of the rule against exact monomial integrals over the reference
// triangle, int x^i y^j = i! j! / (i + j + 2)!, for i + j <= 7.
inline Eigen::VectorXd degree7_defects(const Eigen::Matrix<double, 8, 1>& p) {
  const QuadratureRule r = degree7_from(p);
  Eigen::VectorXd d(36);
  int row = 0;
  for (int i = 0; i <= 7; ++i)
    for (int j = 0; i + j <= 7; ++j) {
      double q = 0.0;
      for (const auto& qp : r.points)
        q += qp.weight * std::pow(qp.barycentric[1], i) * std::pow(qp.barycentric[2], j);
      d[row++] = 0.5 * q - std::tgamma(i + 1.0) * std::tgamma(j + 1.0) / std::tgamma(i + j + 3.0);
    }
  return d;
}

}  // namespace detail

/// Thirteen-point symmetric rule, exact for total degree 7 (negative centroid weight).
/// The tabulated parameters are polished by a few Gauss-Newton steps on the
/// moment equations so that the rule is exact to rounding.
inline const QuadratureRule& triangle_rule_degree7() {
  static const QuadratureRule rule = [] {
    Eigen::Matrix<double, 8, 1> p;
    p << -0.149570044467682, 0.260345966079040, 0.175615257433208, 0.065130102902216,
        0.053347235608838, 0.312865496004874, 0.638444188569810, 0.077113760890257;
    for (int it = 0; it < 4; ++it) {
      const Eigen::VectorXd d = detail::degree7_defects(p);
      Eigen::Matrix<double, 36, 8> jac;
      for (int k = 0; k < 8; ++k) {
        Eigen::Matrix<double, 8, 1> hi = p, lo = p;
        hi[k] += 1e-6;
        lo[k] -= 1e-6;
        jac.col(k) = (detail::degree7_defects(hi) - detail::degree7_defects(lo)) / 2e-6;
      }
      p -= jac.colPivHouseholderQr().solve(d);
    }
    return detail::degree7_from(p);
  }();
  return rule;
}

/// Gauss-Legendre nodes and weights on [0, 1], weights summing to 1.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: need at least one point");
  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton on P_n from the Chebyshev-like initial guess
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-15) break;
    }
    gl.nodes[i] = 0.5 * (1.0 - x);
    gl.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return gl;
}

/// Collapsed (Duffy) tensor Gauss rule with @p n points per direction,
/// exact for total degree 2n - 2; all weights positive.
inline QuadratureRule triangle_rule_collapsed(int n) {
  const GaussLegendre gl = gauss_legendre(n);
  QuadratureRule r;
  r.degree = 2 * n - 2;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double u = gl.nodes[i], v = gl.nodes[j];
      // (u, v) in the unit square -> (x, y) = (u, v (1 - u)), Jacobian (1 - u)
      const double x = u, y = v * (1.0 - u);
      r.points.push_back({{1.0 - x - y, x, y}, 2.0 * gl.weights[i] * gl.weights[j] * (1.0 - u)});
    }
  return r;
}

}  // namespace forchheimer
