#pragma once

/**
 * @file assembly.hpp
 * @brief Sparse blocks of the expanded mixed system with the conductivity
 * frozen cellwise. With piecewise-constant pressures and gradients and RT0
 * velocities every entry is a closed-form cell integral.
 *
 *   M_p  (p, w)            F  x F     diagonal, cell areas
 *   B    (div u, w)        F  x E     sigma |e|
 *   M_uz (u, z)            2F x E     |T| phi_e(centroid)
 *   M_sz (Kbar s, z)       2F x 2F    diagonal, Kbar_T |T|
 *   C_sv (s, v)            E  x 2F    transpose of M_uz
 *   C_pv (p, div v)        E  x F     transpose of B
 */

#include "forchheimer/errors.hpp"
#include "forchheimer/spaces.hpp"

#include <Eigen/Sparse>

#include <vector>

namespace forchheimer {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

struct SystemBlocks {
  SparseMatrix M_p;
  SparseMatrix B_div;
  SparseMatrix M_uz;
  SparseMatrix M_sz;
  SparseMatrix C_sv;
  SparseMatrix C_pv;
};

/// Per-cell velocity coupling of local edge k: integral of phi over the cell.
inline Point rt0_cell_integral(const CellData& c, int k) {
  return c.signs[k] * c.edge_lengths[k] / 2.0 * (c.centroid - c.vertices[k]);
}

/// All blocks for a cellwise-frozen conductivity.
inline SystemBlocks assemble_forms(const DofMap& dofs, const Vector& frozen_K) {
  const auto nc = static_cast<Eigen::Index>(dofs.num_cells());
  const auto nu = static_cast<Eigen::Index>(dofs.num_velocity());
  if (frozen_K.size() != nc) throw DomainError("assemble_forms: one conductivity per cell expected");

  std::vector<Triplet> mp, b, muz, msz;
  mp.reserve(nc);
  msz.reserve(2 * nc);
  b.reserve(3 * nc);
  muz.reserve(6 * nc);
  for (Eigen::Index t = 0; t < nc; ++t) {
    const CellData& c = dofs.cell(static_cast<std::size_t>(t));
    const double kbar = frozen_K[t];
    if (!(kbar > 0.0)) throw DomainError("assemble_forms: conductivity must be positive");
    mp.emplace_back(t, t, c.area);
    msz.emplace_back(2 * t, 2 * t, kbar * c.area);
    msz.emplace_back(2 * t + 1, 2 * t + 1, kbar * c.area);
    for (int k = 0; k < 3; ++k) {
      if (c.dofs[k] == DofMap::npos) continue;
      const auto e = static_cast<Eigen::Index>(c.dofs[k]);
      b.emplace_back(t, e, c.signs[k] * c.edge_lengths[k]);
      const Point m = rt0_cell_integral(c, k);
      muz.emplace_back(2 * t, e, m.x());
      muz.emplace_back(2 * t + 1, e, m.y());
    }
  }
  SystemBlocks blocks;
  blocks.M_p.resize(nc, nc);
  blocks.M_p.setFromTriplets(mp.begin(), mp.end());
  blocks.B_div.resize(nc, nu);
  blocks.B_div.setFromTriplets(b.begin(), b.end());
  blocks.M_uz.resize(2 * nc, nu);
  blocks.M_uz.setFromTriplets(muz.begin(), muz.end());
  blocks.M_sz.resize(2 * nc, 2 * nc);
  blocks.M_sz.setFromTriplets(msz.begin(), msz.end());
  blocks.C_sv = blocks.M_uz.transpose();
  blocks.C_pv = blocks.B_div.transpose();
  return blocks;
}

/// Full symmetric saddle-point matrix over (p, s, u) for one backward Euler step:
///
///   [ M_p/dt   0      B    ]
///   [ 0        M_sz   M_uz ]
///   [ C_pv     C_sv   0    ]
inline SparseMatrix monolithic_matrix(const SystemBlocks& blocks, double dt) {
  const Eigen::Index np = blocks.M_p.rows(), ns = blocks.M_sz.rows(), nu = blocks.B_div.cols();
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(blocks.M_p.nonZeros() + blocks.M_sz.nonZeros() +
                                         2 * blocks.B_div.nonZeros() + 2 * blocks.M_uz.nonZeros()));
  const auto append = [&trips](const SparseMatrix& m, Eigen::Index row0, Eigen::Index col0,
                               double scale) {
    for (Eigen::Index j = 0; j < m.outerSize(); ++j)
      for (SparseMatrix::InnerIterator it(m, j); it; ++it)
        trips.emplace_back(row0 + it.row(), col0 + it.col(), scale * it.value());
  };
  append(blocks.M_p, 0, 0, 1.0 / dt);
  append(blocks.B_div, 0, np + ns, 1.0);
  append(blocks.M_sz, np, np, 1.0);
  append(blocks.M_uz, np, np + ns, 1.0);
  append(blocks.C_pv, np + ns, 0, 1.0);
  append(blocks.C_sv, np + ns, np, 1.0);
  SparseMatrix a(np + ns + nu, np + ns + nu);
  a.setFromTriplets(trips.begin(), trips.end());
  return a;
}

/// Velocity Schur complement after eliminating s and p cellwise:
///   C_sv M_sz^{-1} M_uz + dt C_pv M_p^{-1} B,
/// symmetric positive definite. Assembled cell by cell in cell order.
inline SparseMatrix condensed_velocity_matrix(const DofMap& dofs, const Vector& frozen_K,
                                              double dt) {
  const auto nu = static_cast<Eigen::Index>(dofs.num_velocity());
  std::vector<Triplet> trips;
  trips.reserve(9 * dofs.num_cells());
  for (std::size_t t = 0; t < dofs.num_cells(); ++t) {
    const CellData& c = dofs.cell(t);
    const double kbar = frozen_K[static_cast<Eigen::Index>(t)];
    std::array<Point, 3> m;
    std::array<double, 3> b;
    for (int k = 0; k < 3; ++k) {
      m[k] = rt0_cell_integral(c, k);
      b[k] = c.signs[k] * c.edge_lengths[k];
    }
    for (int i = 0; i < 3; ++i) {
      if (c.dofs[i] == DofMap::npos) continue;
      for (int j = 0; j < 3; ++j) {
        if (c.dofs[j] == DofMap::npos) continue;
        const double value = m[i].dot(m[j]) / (kbar * c.area) + dt * b[i] * b[j] / c.area;
        trips.emplace_back(static_cast<Eigen::Index>(c.dofs[i]),
                           static_cast<Eigen::Index>(c.dofs[j]), value);
      }
    }
  }
  SparseMatrix a(nu, nu);
  a.setFromTriplets(trips.begin(), trips.end());
  return a;
}

}  // namespace forchheimer
