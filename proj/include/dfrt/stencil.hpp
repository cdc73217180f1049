#pragma once

// Finite-difference operators on the uniform grid, Dirichlet ends
// (values outside the box are zero, so boundary rows just drop the
// out-of-range taps).

#include <Eigen/Sparse>
#include <vector>

#include "dfrt/grid.hpp"

namespace dfrt {

using SparseD = Eigen::SparseMatrix<double>;
using SparseC = Eigen::SparseMatrix<Complex>;

/// Second-derivative operator d^2/dx^2; order 2 or 4 central stencil.
inline SparseD build_laplacian(const Grid& grid, int order = 4) {
  if (order != 2 && order != 4) throw Error("build_laplacian: order must be 2 or 4");
  const int n = grid.n_points;
  const int reach = order / 2;
  if (n < 2 * reach + 1) throw Error("build_laplacian: grid too small for stencil");
  const double h2 = grid.h() * grid.h();

  std::vector<double> w;
  if (order == 2)
    w = {1.0, -2.0, 1.0};
  else
    w = {-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0};

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(n) * (2 * reach + 1));
  for (int i = 0; i < n; ++i)
    for (int k = -reach; k <= reach; ++k) {
      const int j = i + k;
      if (j < 0 || j >= n) continue;
      trip.emplace_back(i, j, w[k + reach] / h2);
    }
  SparseD L(n, n);
  L.setFromTriplets(trip.begin(), trip.end());
  return L;
}

/// First-derivative operator d/dx, same order family, antisymmetric interior.
inline SparseD build_gradient(const Grid& grid, int order = 4) {
  if (order != 2 && order != 4) throw Error("build_gradient: order must be 2 or 4");
  const int n = grid.n_points;
  const int reach = order / 2;
  const double h = grid.h();

  std::vector<double> w;
  if (order == 2)
    w = {-0.5, 0.0, 0.5};
  else
    w = {1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0};

  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < n; ++i)
    for (int k = -reach; k <= reach; ++k) {
      const int j = i + k;
      if (j < 0 || j >= n || w[k + reach] == 0.0) continue;
      trip.emplace_back(i, j, w[k + reach] / h);
    }
  SparseD D(n, n);
  D.setFromTriplets(trip.begin(), trip.end());
  return D;
}

/// Apply a real sparse operator to a complex field.
inline std::vector<Complex> apply_operator(const SparseD& A, const std::vector<Complex>& v) {
  std::vector<Complex> out(static_cast<size_t>(A.rows()), Complex(0.0));
  for (int col = 0; col < A.outerSize(); ++col)
    for (SparseD::InnerIterator it(A, col); it; ++it)
      out[static_cast<size_t>(it.row())] += it.value() * v[static_cast<size_t>(col)];
  return out;
}

}  // namespace dfrt
