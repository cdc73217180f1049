#pragma once

// Assembly of the complex-scaled one- and two-electron Hamiltonians.
//
// H_theta(1e) = e^{-2i theta} (-1/2 d^2/dx^2) + v(x e^{i theta})
// H_theta(2e) = e^{-2i theta} (-1/2 d^2/dx1^2 - 1/2 d^2/dx2^2)
//             + v(x1 e^{i theta}) + v(x2 e^{i theta})
//             + lambda / sqrt(1 + (x1-x2)^2 e^{2i theta})
//
// The two-electron operator is restricted to the spatially symmetric
// (singlet) sector on the half grid x1 <= x2, with 1/sqrt(2) weights on the
// off-diagonal pair basis so the restriction is an orthonormal projection.
// Both assembled matrices are complex symmetric by construction.

#include <Eigen/Sparse>
#include <cstdint>
#include <utility>
#include <vector>

#include "dfrt/grid.hpp"
#include "dfrt/model.hpp"
#include "dfrt/stencil.hpp"

namespace dfrt {

struct ScaledHamiltonian {
  SparseC matrix;
  int particle_count = 1;
  ModelSystem system;
  int stencil_order = 4;
  // For 2e: half-grid basis, pair_index[k] = (i, j) with i <= j.
  std::vector<std::pair<int, int>> pair_index;

  Eigen::Index dimension() const { return matrix.rows(); }
};

inline ScaledHamiltonian build_hamiltonian_1e(const ModelSystem& sys, int order = 4) {
  sys.validate();
  const int n = sys.grid.n_points;
  const Complex phase = std::exp(Complex(0.0, -2.0 * sys.theta.theta));
  const Complex eith = std::exp(Complex(0.0, sys.theta.theta));

  const SparseD L = build_laplacian(sys.grid, order);
  SparseC H(n, n);
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(static_cast<size_t>(L.nonZeros()) + n);
  for (int col = 0; col < L.outerSize(); ++col)
    for (SparseD::InnerIterator it(L, col); it; ++it)
      trip.emplace_back(it.row(), it.col(), -0.5 * phase * it.value());
  for (int i = 0; i < n; ++i)
    trip.emplace_back(i, i, external_potential(sys.params, sys.grid.x(i) * eith));
  H.setFromTriplets(trip.begin(), trip.end());

  return ScaledHamiltonian{std::move(H), 1, sys, order, {}};
}

namespace detail {

inline size_t half_dim(int n) { return static_cast<size_t>(n) * (n + 1) / 2; }

// k(i,j) for i <= j, row-major over i.
inline size_t half_index(int i, int j, int n) {
  return static_cast<size_t>(i) * n - static_cast<size_t>(i) * (i - 1) / 2 + (j - i);
}

}  // namespace detail

/// Symmetric-sector two-electron Hamiltonian on the x1 <= x2 half grid.
/// `memory_cap_mb` bounds a rough estimate of the factorization footprint a
/// shift-invert solve of this matrix will need.
inline ScaledHamiltonian build_hamiltonian_2e(const ModelSystem& sys, int order = 4,
                                              double memory_cap_mb = 3500.0) {
  sys.validate();
  const int n = sys.grid.n_points;
  const size_t dim = detail::half_dim(n);

  // Empirical fill model for the sparse LU of the folded 2D stencil.
  const double est_mb = static_cast<double>(dim) * n * 16.0 * 1.5 / 1.0e6;
  if (est_mb > memory_cap_mb) {
    const int n_ok = static_cast<int>(std::cbrt(memory_cap_mb * 1.0e6 / (16.0 * 1.5 * 0.5)));
    throw Error("build_hamiltonian_2e: estimated solver memory " +
                std::to_string(static_cast<long>(est_mb)) + " MB exceeds cap; reduce n_points to about " +
                std::to_string(n_ok));
  }

  const Complex phase = std::exp(Complex(0.0, -2.0 * sys.theta.theta));
  const Complex eith = std::exp(Complex(0.0, sys.theta.theta));
  const Complex e2ith = eith * eith;

  // 1e operator as banded taps.
  const SparseD L = build_laplacian(sys.grid, order);
  std::vector<std::vector<std::pair<int, Complex>>> kin(n);  // column -> (row, val)
  for (int col = 0; col < L.outerSize(); ++col)
    for (SparseD::InnerIterator it(L, col); it; ++it)
      kin[static_cast<size_t>(it.col())].emplace_back(static_cast<int>(it.row()),
                                                      -0.5 * phase * it.value());

  std::vector<Complex> vext(n);
  for (int i = 0; i < n; ++i)
    vext[i] = external_potential(sys.params, sys.grid.x(i) * eith);

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  auto fold_weight = [&](int p, int q) { return p == q ? 1.0 : inv_sqrt2; };

  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(dim * (2 * static_cast<size_t>(order) + 3));

  std::vector<std::pair<int, int>> pairs(dim);
  for (int i = 0, k = 0; i < n; ++i)
    for (int j = i; j < n; ++j, ++k) pairs[static_cast<size_t>(k)] = {i, j};

  for (size_t k = 0; k < dim; ++k) {
    const auto [i, j] = pairs[k];
    const double w_src = fold_weight(i, j);

    // Representatives of the source basis vector: (i,j) with weight w_src
    // and, when i != j, (j,i) with the same weight.  Kinetic taps act on one
    // coordinate of a representative; fold each full-grid target back.
    auto add_kinetic = [&](int r, int s) {
      // (A ⊗ I): tap on the first coordinate.
      for (const auto& [p, val] : kin[static_cast<size_t>(r)]) {
        const int t1 = std::min(p, s), t2 = std::max(p, s);
        trip.emplace_back(static_cast<Eigen::Index>(detail::half_index(t1, t2, n)),
                          static_cast<Eigen::Index>(k), val * w_src * fold_weight(p, s));
      }
      // (I ⊗ A): tap on the second coordinate.
      for (const auto& [q, val] : kin[static_cast<size_t>(s)]) {
        const int t1 = std::min(r, q), t2 = std::max(r, q);
        trip.emplace_back(static_cast<Eigen::Index>(detail::half_index(t1, t2, n)),
                          static_cast<Eigen::Index>(k), val * w_src * fold_weight(r, q));
      }
    };
    add_kinetic(i, j);
    if (i != j) add_kinetic(j, i);

    // Local part: external potentials plus scaled soft-Coulomb, identical on
    // both representatives, so it folds to a plain diagonal entry.
    const double dx = sys.grid.x(i) - sys.grid.x(j);
    const Complex w12 = sys.lambda == 0.0
                            ? Complex(0.0)
                            : sys.lambda / std::sqrt(1.0 + dx * dx * e2ith);
    trip.emplace_back(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k),
                      vext[i] + vext[j] + w12);
  }

  SparseC H(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  H.setFromTriplets(trip.begin(), trip.end());

  ScaledHamiltonian out{std::move(H), 2, sys, order, std::move(pairs)};
  return out;
}

}  // namespace dfrt
