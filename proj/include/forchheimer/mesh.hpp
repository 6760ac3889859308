#pragma once

/**
 * @file mesh.hpp
 * @brief Conforming triangulations of the unit square with oriented edges.
 *
 * Local edge k of a triangle is the edge opposite its local vertex k. Each
 * edge carries a global unit normal: on interior edges it points from the
 * lower-indexed incident triangle into the higher-indexed one, on boundary
 * edges it points outward. A triangle's incidence sign on an edge is +1 when
 * its outward normal there agrees with the global normal.
 */

#include "forchheimer/errors.hpp"

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <ostream>
#include <utility>
#include <vector>

namespace forchheimer {

using Point = Eigen::Vector2d;

struct Edge {
  std::array<std::size_t, 2> vertices;
  /// Incident triangles; second entry is npos on the boundary.
  std::array<std::size_t, 2> triangles;
  Point normal;
  double length = 0.0;
  bool boundary = false;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

struct TriangleGeometry {
  double area;
  Point centroid;
  std::array<double, 3> edge_lengths;
  std::array<Point, 3> outward_normals;
};

class TriMesh {
public:
  /// @p triangles must be counterclockwise.
  TriMesh(std::vector<Point> vertices, std::vector<std::array<std::size_t, 3>> triangles)
      : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
    build_edges();
  }

  std::size_t num_vertices() const noexcept { return vertices_.size(); }
  std::size_t num_triangles() const noexcept { return triangles_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  const std::vector<Point>& vertices() const noexcept { return vertices_; }
  const std::array<std::size_t, 3>& triangle(std::size_t t) const { return triangles_.at(t); }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// Global edge index of local edge k of triangle t.
  std::size_t triangle_edge(std::size_t t, int k) const { return tri_edges_.at(t)[k]; }
  /// +1 if the outward normal of t on local edge k equals the global edge normal.
  int edge_sign(std::size_t t, int k) const { return tri_signs_.at(t)[k]; }

  Point vertex_of(std::size_t t, int k) const { return vertices_[triangles_.at(t)[k]]; }

  TriangleGeometry geometry(std::size_t t) const {
    if (t >= triangles_.size()) throw DomainError("geometry: triangle index out of range");
    const auto& tri = triangles_[t];
    const Point& a = vertices_[tri[0]];
    const Point& b = vertices_[tri[1]];
    const Point& c = vertices_[tri[2]];
    TriangleGeometry geo;
    geo.area = signed_area(a, b, c);
    geo.centroid = (a + b + c) / 3.0;
    for (int k = 0; k < 3; ++k) {
      const Point& p = vertices_[tri[(k + 1) % 3]];
      const Point& q = vertices_[tri[(k + 2) % 3]];
      const Point d = q - p;
      geo.edge_lengths[k] = d.norm();
      // counterclockwise order: the outward normal is the tangent rotated clockwise
      geo.outward_normals[k] = Point(d.y(), -d.x()) / geo.edge_lengths[k];
    }
    return geo;
  }

  double area(std::size_t t) const {
    const auto& tri = triangles_.at(t);
    return signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
  }

  /// Maximum element diameter.
  double h() const {
    double hmax = 0.0;
    for (const auto& e : edges_) hmax = std::max(hmax, e.length);
    return hmax;
  }

  std::size_t num_boundary_edges() const {
    std::size_t count = 0;
    for (const auto& e : edges_) count += e.boundary ? 1 : 0;
    return count;
  }

  /// Plain-text listing for debugging.
  void dump(std::ostream& os) const {
    os << "vertices " << vertices_.size() << '\n';
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      os << i << ' ' << vertices_[i].x() << ' ' << vertices_[i].y() << '\n';
    os << "triangles " << triangles_.size() << '\n';
    for (std::size_t t = 0; t < triangles_.size(); ++t)
      os << t << ' ' << triangles_[t][0] << ' ' << triangles_[t][1] << ' ' << triangles_[t][2]
         << " edges " << tri_edges_[t][0] << ' ' << tri_edges_[t][1] << ' ' << tri_edges_[t][2]
         << " signs " << tri_signs_[t][0] << ' ' << tri_signs_[t][1] << ' ' << tri_signs_[t][2]
         << '\n';
    os << "edges " << edges_.size() << '\n';
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const auto& ed = edges_[e];
      os << e << ' ' << ed.vertices[0] << ' ' << ed.vertices[1] << " normal " << ed.normal.x()
         << ' ' << ed.normal.y() << (ed.boundary ? " boundary" : " interior") << '\n';
    }
  }

private:
  static double signed_area(const Point& a, const Point& b, const Point& c) {
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
  }

  void build_edges() {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> lookup;
    tri_edges_.resize(triangles_.size());
    tri_signs_.resize(triangles_.size());
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
      const auto& tri = triangles_[t];
      if (!(area(t) > 0.0)) throw DomainError("TriMesh: triangle is not counterclockwise");
      for (int k = 0; k < 3; ++k) {
        std::size_t v0 = tri[(k + 1) % 3], v1 = tri[(k + 2) % 3];
        const auto key = std::minmax(v0, v1);
        auto [it, inserted] = lookup.try_emplace(std::pair{key.first, key.second}, edges_.size());
        if (inserted) {
          Edge e;
          e.vertices = {key.first, key.second};
          e.triangles = {t, Edge::npos};
          e.length = (vertices_[v1] - vertices_[v0]).norm();
          edges_.push_back(e);
        } else {
          Edge& e = edges_[it->second];
          if (e.triangles[1] != Edge::npos)
            throw DomainError("TriMesh: edge shared by more than two triangles");
          e.triangles[1] = t;
        }
        tri_edges_[t][k] = it->second;
      }
    }
    // Triangles are visited in increasing index order, so triangles[0] is the
    // lower-indexed neighbour; its outward normal fixes the global normal.
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
      const auto geo = geometry(t);
      for (int k = 0; k < 3; ++k) {
        Edge& e = edges_[tri_edges_[t][k]];
        if (e.triangles[0] == t) {
          e.normal = geo.outward_normals[k];
          e.boundary = e.triangles[1] == Edge::npos;
          tri_signs_[t][k] = 1;
        } else {
          tri_signs_[t][k] = -1;
        }
      }
    }
  }

  std::vector<Point> vertices_;
  std::vector<std::array<std::size_t, 3>> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<std::size_t, 3>> tri_edges_;
  std::vector<std::array<int, 3>> tri_signs_;
};

/// Structured n x n mesh of the unit square, each square split along its
/// lower-left to upper-right diagonal into two counterclockwise triangles.
inline TriMesh unit_square_mesh(int n) {
  if (n < 1) throw DomainError("unit_square_mesh: n must be positive");
  const auto un = static_cast<std::size_t>(n);
  std::vector<Point> vertices;
  vertices.reserve((un + 1) * (un + 1));
  for (std::size_t j = 0; j <= un; ++j)
    for (std::size_t i = 0; i <= un; ++i)
      vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
  std::vector<std::array<std::size_t, 3>> triangles;
  triangles.reserve(2 * un * un);
  const auto id = [un](std::size_t i, std::size_t j) { return j * (un + 1) + i; };
  for (std::size_t j = 0; j < un; ++j)
    for (std::size_t i = 0; i < un; ++i) {
      triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return TriMesh(std::move(vertices), std::move(triangles));
}

}  // namespace forchheimer
