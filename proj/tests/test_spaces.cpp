#include "forchheimer/law.hpp"
#include "forchheimer/manufactured.hpp"
#include "forchheimer/spaces.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace forchheimer;
using forchheimer::testing::locate_structured;

namespace {

// Mean normal component of v along edge (a, b) with unit normal nrm, composite
// three-point Gauss with many panels.
template <class F>
double edge_mean_flux(F v, const Point& a, const Point& b, const Point& nrm, int panels = 200) {
  static const double x[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  static const double w[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  double sum = 0.0;
  for (int p = 0; p < panels; ++p)
    for (int q = 0; q < 3; ++q) {
      const double s = (p + 0.5 * (1.0 + x[q])) / panels;
      sum += w[q] * Point(v(Point(a + s * (b - a)))).dot(nrm);
    }
  return sum / (2.0 * panels);
}

// Exact cell mean of x_c (1 - x_c) for a straight triangle.
double mean_bubble(const CellData& c, int comp) {
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < 3; ++i) {
    s1 += c.vertices[i][comp];
    for (int j = i; j < 3; ++j) s2 += c.vertices[i][comp] * c.vertices[j][comp];
  }
  return s1 / 3.0 - s2 / 6.0;
}

struct RandomField {
  double c[3], d[3];
  Point operator()(const Point& x) const {
    return {x.x() * (1.0 - x.x()) * (c[0] + c[1] * x.x() + c[2] * x.y()),
            x.y() * (1.0 - x.y()) * (d[0] + d[1] * x.x() + d[2] * x.y())};
  }
  double div(const Point& x) const {
    return (1.0 - 2.0 * x.x()) * (c[0] + c[1] * x.x() + c[2] * x.y()) +
           x.x() * (1.0 - x.x()) * c[1] + (1.0 - 2.0 * x.y()) * (d[0] + d[1] * x.x() + d[2] * x.y()) +
           x.y() * (1.0 - x.y()) * d[2];
  }
};

}  // namespace

TEST(DofMap, Counts) {
  for (int n : {1, 2, 4, 9}) {
    const TriMesh mesh = unit_square_mesh(n);
    const DofMap dofs(mesh);
    EXPECT_EQ(dofs.num_velocity(), mesh.num_edges() - 4 * static_cast<std::size_t>(n));
    EXPECT_EQ(dofs.num_pressure(), mesh.num_triangles());
    EXPECT_EQ(dofs.num_gradient(), 2 * mesh.num_triangles());
    for (std::size_t d = 0; d < dofs.num_velocity(); ++d)
      EXPECT_EQ(dofs.edge_dof(dofs.dof_edge(d)), d);
  }
}

TEST(RT0Basis, NormalTraceAndDivergence) {
  const TriMesh mesh({Point(0, 0), Point(1, 0), Point(0, 1)}, {{0, 1, 2}});
  const DofMap dofs(mesh);
  for (int k = 0; k < 3; ++k) {
    for (int j = 0; j < 3; ++j) {
      const Edge& e = mesh.edge(mesh.triangle_edge(0, j));
      const Point a = mesh.vertices()[e.vertices[0]], b = mesh.vertices()[e.vertices[1]];
      const double trace =
          edge_mean_flux([&](const Point& x) { return dofs.rt0_eval(0, k, x); }, a, b, e.normal, 4);
      EXPECT_NEAR(trace, k == j ? 1.0 : 0.0, 1e-14) << "basis " << k << " edge " << j;
      // pointwise, not only on average
      EXPECT_NEAR(dofs.rt0_eval(0, k, 0.3 * a + 0.7 * b).dot(e.normal), k == j ? 1.0 : 0.0, 1e-14);
    }
  }
  // legs have length 1 and |T| = 1/2
  EXPECT_DOUBLE_EQ(std::abs(dofs.rt0_div(0, 1)), 2.0);
  EXPECT_DOUBLE_EQ(std::abs(dofs.rt0_div(0, 2)), 2.0);
  EXPECT_NEAR(std::abs(dofs.rt0_div(0, 0)), 2.0 * std::sqrt(2.0), 1e-14);
  EXPECT_THROW(dofs.rt0_eval(0, 3, Point(0.1, 0.1)), DomainError);
}

TEST(RT0Basis, NormalTraceIsContinuousAcrossInteriorEdges) {
  const TriMesh mesh = unit_square_mesh(3);
  const DofMap dofs(mesh);
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    if (edge.boundary) continue;
    const Point mid = 0.5 * (mesh.vertices()[edge.vertices[0]] + mesh.vertices()[edge.vertices[1]]);
    for (std::size_t side = 0; side < 2; ++side) {
      const std::size_t t = edge.triangles[side];
      int k = 0;
      while (mesh.triangle_edge(t, k) != e) ++k;
      EXPECT_NEAR(dofs.rt0_eval(t, k, mid).dot(edge.normal), 1.0, 1e-13);
    }
  }
}

TEST(L2Projection, Scalars) {
  const TriMesh tri({Point(0, 0), Point(1, 0), Point(0, 1)}, {{0, 1, 2}});
  const DofMap dofs(tri);
  EXPECT_NEAR(dofs.l2_project_scalar([](const Point&) { return 3.5; })[0], 3.5, 1e-15);
  EXPECT_NEAR(dofs.l2_project_scalar([](const Point& x) { return x.x(); })[0], 1.0 / 3.0, 1e-15);
  // int_T x^2 = 1/12 over |T| = 1/2
  EXPECT_NEAR(dofs.l2_project_scalar([](const Point& x) { return x.x() * x.x(); })[0], 1.0 / 6.0,
              1e-15);
}

TEST(L2Projection, Vectors) {
  const TriMesh mesh = unit_square_mesh(2);
  const DofMap dofs(mesh);
  const Vector c = dofs.l2_project_vector([](const Point&) { return Point(1.5, -2.0); });
  for (std::size_t t = 0; t < dofs.num_cells(); ++t) {
    EXPECT_NEAR(dofs.gradient_value(c, t).x(), 1.5, 1e-14);
    EXPECT_NEAR(dofs.gradient_value(c, t).y(), -2.0, 1e-14);
  }
  const Vector z = dofs.l2_project_vector([](const Point& x) { return Point(0.0, x.x() * x.y()); });
  for (std::size_t t = 0; t < dofs.num_cells(); ++t) EXPECT_EQ(dofs.gradient_value(z, t).x(), 0.0);

  // grad p of the manufactured solution at t = 0 has quadratic components
  const ManufacturedSolution exact(ForchheimerLaw::two_term());
  const Vector g = dofs.l2_project_vector([&](const Point& x) { return exact.s(x, 0.0); });
  for (std::size_t t = 0; t < dofs.num_cells(); ++t) {
    EXPECT_NEAR(g[static_cast<Eigen::Index>(2 * t)], mean_bubble(dofs.cell(t), 0), 1e-15);
    EXPECT_NEAR(g[static_cast<Eigen::Index>(2 * t + 1)], mean_bubble(dofs.cell(t), 1), 1e-15);
  }
}

TEST(HdivInterpolation, ZeroAndConstraint) {
  const TriMesh mesh = unit_square_mesh(2);
  const DofMap dofs(mesh);
  const Vector zero = dofs.hdiv_interpolate([](const Point&) { return Point(0.0, 0.0); });
  EXPECT_EQ(zero.size(), static_cast<Eigen::Index>(dofs.num_velocity()));
  EXPECT_EQ(zero.lpNorm<Eigen::Infinity>(), 0.0);
  EXPECT_THROW(dofs.hdiv_interpolate([](const Point&) { return Point(1.0, 0.0); }),
               ConstraintViolation);
}

TEST(HdivInterpolation, ManufacturedVelocity) {
  const TriMesh mesh = unit_square_mesh(2);
  const DofMap dofs(mesh);
  const ManufacturedSolution exact(ForchheimerLaw::two_term());
  const auto u0 = [&](const Point& x) { return exact.u(x, 0.0); };
  const Vector pu = dofs.hdiv_interpolate(u0);
  for (std::size_t d = 0; d < dofs.num_velocity(); ++d) {
    const Edge& e = mesh.edge(dofs.dof_edge(d));
    const double oracle = edge_mean_flux(u0, mesh.vertices()[e.vertices[0]],
                                         mesh.vertices()[e.vertices[1]], e.normal);
    EXPECT_NEAR(pu[static_cast<Eigen::Index>(d)], oracle, 1e-10);
  }
  // divergence theorem: |T| mean div(Pi u) equals the outward flux of u
  for (std::size_t t = 0; t < dofs.num_cells(); ++t) {
    const auto geo = mesh.geometry(t);
    double flux = 0.0;
    for (int k = 0; k < 3; ++k)
      flux += geo.edge_lengths[k] * edge_mean_flux(u0, mesh.vertex_of(t, (k + 1) % 3),
                                                   mesh.vertex_of(t, (k + 2) % 3),
                                                   geo.outward_normals[k]);
    EXPECT_NEAR(dofs.divergence_mean(pu, t) * geo.area, flux, 1e-10);
  }
}

TEST(Projections, CommuteWithDivergence) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (int n : {2, 4, 8}) {
    const TriMesh mesh = unit_square_mesh(n);
    const DofMap dofs(mesh);
    for (int trial = 0; trial < 100; ++trial) {
      RandomField v{{coef(rng), coef(rng), coef(rng)}, {coef(rng), coef(rng), coef(rng)}};
      const Vector pv = dofs.hdiv_interpolate(v);
      const Vector pdiv = dofs.l2_project_scalar([&](const Point& x) { return v.div(x); });
      for (std::size_t t = 0; t < dofs.num_cells(); ++t)
        EXPECT_NEAR(dofs.divergence_mean(pv, t), pdiv[static_cast<Eigen::Index>(t)], 1e-10);
    }
  }
}

TEST(Projections, Idempotent) {
  const int n = 5;
  const TriMesh mesh = unit_square_mesh(n);
  const DofMap dofs(mesh);
  const ManufacturedSolution exact(ForchheimerLaw::two_term());

  const Vector p1 = dofs.l2_project_scalar([&](const Point& x) { return exact.p(x, 0.3); });
  const Vector p2 =
      dofs.l2_project_scalar([&](const Point& x) { return p1[static_cast<Eigen::Index>(locate_structured(n, x))]; });
  EXPECT_LT((p1 - p2).lpNorm<Eigen::Infinity>(), 1e-15);

  const Vector u1 = dofs.hdiv_interpolate([&](const Point& x) { return exact.u(x, 0.3); });
  const Vector u2 = dofs.hdiv_interpolate(
      [&](const Point& x) { return dofs.velocity_at(u1, locate_structured(n, x), x); });
  EXPECT_LT((u1 - u2).lpNorm<Eigen::Infinity>(), 1e-13);
}

TEST(Projections, FirstOrderApproximation) {
  const ManufacturedSolution exact(ForchheimerLaw::two_term());
  const auto& rule = triangle_rule_degree4();
  double prev_p = 0.0, prev_u = 0.0;
  for (int n : {4, 8, 16, 32}) {
    const TriMesh mesh = unit_square_mesh(n);
    const DofMap dofs(mesh);
    const Vector pp = dofs.l2_project_scalar([&](const Point& x) { return exact.p(x, 0.0); });
    const Vector pu = dofs.hdiv_interpolate([&](const Point& x) { return exact.u(x, 0.0); });
    double ep = 0.0, eu = 0.0;
    for (std::size_t t = 0; t < dofs.num_cells(); ++t) {
      const CellData& c = dofs.cell(t);
      ep += rule.integrate(c.vertices[0], c.vertices[1], c.vertices[2], c.area, [&](const Point& x) {
        const double d = pp[static_cast<Eigen::Index>(t)] - exact.p(x, 0.0);
        return d * d;
      });
      eu += rule.integrate(c.vertices[0], c.vertices[1], c.vertices[2], c.area, [&](const Point& x) {
        return (dofs.velocity_at(pu, t, x) - exact.u(x, 0.0)).squaredNorm();
      });
    }
    ep = std::sqrt(ep);
    eu = std::sqrt(eu);
    if (n > 4) {
      EXPECT_GE(std::log2(prev_p / ep), 0.9) << "n=" << n;
      EXPECT_GE(std::log2(prev_u / eu), 0.9) << "n=" << n;
    }
    prev_p = ep;
    prev_u = eu;
  }
}
