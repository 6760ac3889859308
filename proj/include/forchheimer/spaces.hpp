#pragma once

/**
 * @file spaces.hpp
 * @brief Lowest-order Raviart-Thomas velocities (interior edges only, so
 * u.n = 0 holds strongly), piecewise-constant pressures and piecewise-constant
 * vector gradients on a TriMesh, together with the cellwise L2 projection and
 * the edge-flux H(div) interpolant.
 *
 * RT0 basis for local edge k of triangle T (opposite vertex p_k):
 *   phi(x) = sigma |e| / (2 |T|) (x - p_k),   div phi = sigma |e| / |T|,
 * so its normal component along the global edge normal is 1 on edge e and 0
 * on the other two edges of T.
 */

#include "forchheimer/errors.hpp"
#include "forchheimer/mesh.hpp"
#include "forchheimer/quadrature.hpp"

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace forchheimer {

using Vector = Eigen::VectorXd;

struct CellData {
  double area;
  Point centroid;
  std::array<Point, 3> vertices;
  std::array<double, 3> edge_lengths;
  std::array<int, 3> signs;
  /// Velocity dof of each local edge, or npos for boundary edges.
  std::array<std::size_t, 3> dofs;
};

/// Degree-of-freedom layout. Gradient dofs are interleaved per cell:
/// (s_x, s_y) of cell T live at 2T and 2T + 1.
class DofMap {
public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  explicit DofMap(const TriMesh& mesh) : mesh_(&mesh) {
    edge_dof_.assign(mesh.num_edges(), npos);
    for (std::size_t e = 0; e < mesh.num_edges(); ++e)
      if (!mesh.edge(e).boundary) {
        edge_dof_[e] = dof_edge_.size();
        dof_edge_.push_back(e);
      }
    cells_.reserve(mesh.num_triangles());
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
      const auto geo = mesh.geometry(t);
      CellData cell;
      cell.area = geo.area;
      cell.centroid = geo.centroid;
      for (int k = 0; k < 3; ++k) {
        cell.vertices[k] = mesh.vertex_of(t, k);
        cell.edge_lengths[k] = geo.edge_lengths[k];
        cell.signs[k] = mesh.edge_sign(t, k);
        cell.dofs[k] = edge_dof_[mesh.triangle_edge(t, k)];
      }
      cells_.push_back(cell);
    }
  }

  const TriMesh& mesh() const noexcept { return *mesh_; }
  std::size_t num_cells() const noexcept { return cells_.size(); }
  std::size_t num_pressure() const noexcept { return cells_.size(); }
  std::size_t num_gradient() const noexcept { return 2 * cells_.size(); }
  std::size_t num_velocity() const noexcept { return dof_edge_.size(); }

  const CellData& cell(std::size_t t) const { return cells_.at(t); }
  std::size_t edge_dof(std::size_t edge) const { return edge_dof_.at(edge); }
  std::size_t dof_edge(std::size_t dof) const { return dof_edge_.at(dof); }

  /// RT0 basis function of local edge k on cell t, evaluated at x.
  Point rt0_eval(std::size_t t, int k, const Point& x) const {
    const CellData& c = cell(t);
    check_local(k);
    return c.signs[k] * c.edge_lengths[k] / (2.0 * c.area) * (x - c.vertices[k]);
  }

  double rt0_div(std::size_t t, int k) const {
    const CellData& c = cell(t);
    check_local(k);
    return c.signs[k] * c.edge_lengths[k] / c.area;
  }

  /// Pointwise value of the discrete velocity on cell t.
  Point velocity_at(const Vector& u, std::size_t t, const Point& x) const {
    const CellData& c = cell(t);
    Point v = Point::Zero();
    for (int k = 0; k < 3; ++k)
      if (c.dofs[k] != npos)
        v += u[static_cast<Eigen::Index>(c.dofs[k])] * c.signs[k] * c.edge_lengths[k] /
             (2.0 * c.area) * (x - c.vertices[k]);
    return v;
  }

  /// Cell mean of a discrete velocity (exact: RT0 fields are affine).
  Point velocity_mean(const Vector& u, std::size_t t) const {
    return velocity_at(u, t, cell(t).centroid);
  }

  /// Cell mean of div u.
  double divergence_mean(const Vector& u, std::size_t t) const {
    const CellData& c = cell(t);
    double flux = 0.0;
    for (int k = 0; k < 3; ++k)
      if (c.dofs[k] != npos)
        flux += u[static_cast<Eigen::Index>(c.dofs[k])] * c.signs[k] * c.edge_lengths[k];
    return flux / c.area;
  }

  Point gradient_value(const Vector& s, std::size_t t) const {
    return {s[static_cast<Eigen::Index>(2 * t)], s[static_cast<Eigen::Index>(2 * t + 1)]};
  }

  /// Cellwise L2 projection onto piecewise constants.
  template <class ScalarField>
  Vector l2_project_scalar(ScalarField&& f,
                           const QuadratureRule& rule = triangle_rule_degree4()) const {
    Vector out(static_cast<Eigen::Index>(num_cells()));
    for (std::size_t t = 0; t < num_cells(); ++t) {
      const CellData& c = cells_[t];
      out[static_cast<Eigen::Index>(t)] =
          rule.integrate(c.vertices[0], c.vertices[1], c.vertices[2], c.area,
                         [&](const Point& x) { return static_cast<double>(f(x)); }) /
          c.area;
    }
    return out;
  }

  /// Componentwise cell averaging of a vector field.
  template <class VectorField>
  Vector l2_project_vector(VectorField&& z,
                           const QuadratureRule& rule = triangle_rule_degree4()) const {
    Vector out(static_cast<Eigen::Index>(num_gradient()));
    for (std::size_t t = 0; t < num_cells(); ++t) {
      const CellData& c = cells_[t];
      const Point mean = rule.integrate(c.vertices[0], c.vertices[1], c.vertices[2], c.area,
                                        [&](const Point& x) { return Point(z(x)); }) /
                         c.area;
      out[static_cast<Eigen::Index>(2 * t)] = mean.x();
      out[static_cast<Eigen::Index>(2 * t + 1)] = mean.y();
    }
    return out;
  }

  /// Edge-flux interpolant: dof_e = (1/|e|) int_e v.n ds with five-point Gauss
  /// on kEdgePanels equal sub-segments. A single panel loses accuracy when a
  /// velocity such as K(|s|) s is evaluated on edges close to a zero of s.
  /// Throws ConstraintViolation if the mean normal flux through a boundary edge
  /// exceeds @p boundary_tol.
  static constexpr int kEdgePanels = 4;

  template <class VectorField>
  Vector hdiv_interpolate(VectorField&& v, double boundary_tol = 1e-10) const {
    static const GaussLegendre gl = gauss_legendre(5);
    const TriMesh& m = mesh();
    Vector out(static_cast<Eigen::Index>(num_velocity()));
    for (std::size_t e = 0; e < m.num_edges(); ++e) {
      const Edge& edge = m.edge(e);
      const Point& a = m.vertices()[edge.vertices[0]];
      const Point& b = m.vertices()[edge.vertices[1]];
      double mean_flux = 0.0;
      for (int panel = 0; panel < kEdgePanels; ++panel)
        for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
          const double r = (panel + gl.nodes[q]) / kEdgePanels;
          mean_flux += gl.weights[q] * Point(v(Point(a + r * (b - a)))).dot(edge.normal);
        }
      mean_flux /= kEdgePanels;
      if (edge.boundary) {
        if (std::abs(mean_flux) > boundary_tol)
          throw ConstraintViolation("hdiv_interpolate: nonzero normal flux " +
                                    std::to_string(mean_flux) + " on boundary edge " +
                                    std::to_string(e));
        continue;
      }
      out[static_cast<Eigen::Index>(edge_dof_[e])] = mean_flux;
    }
    return out;
  }

private:
  static void check_local(int k) {
    if (k < 0 || k > 2) throw DomainError("local edge index must be 0, 1 or 2");
  }

  const TriMesh* mesh_;
  std::vector<std::size_t> edge_dof_;
  std::vector<std::size_t> dof_edge_;
  std::vector<CellData> cells_;
};

}  // namespace forchheimer
