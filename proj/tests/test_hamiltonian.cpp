#include <catch2/catch_amalgamated.hpp>
#include <Eigen/Dense>

#include "dfrt/hamiltonian.hpp"

using namespace dfrt;

TEST_CASE("1e hamiltonian is complex symmetric") {
  ModelSystem sys = preset("paper-B", 0.35);
  sys.grid = Grid(-5.0, 5.0, 41);
  const ScaledHamiltonian ham = build_hamiltonian_1e(sys);
  Eigen::MatrixXcd A(ham.dimension(), ham.dimension());
  A.setZero();
  for (int c = 0; c < ham.matrix.outerSize(); ++c)
    for (SparseC::InnerIterator it(ham.matrix, c); it; ++it) A(it.row(), it.col()) = it.value();
  REQUIRE((A - A.transpose()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("2e hamiltonian is complex symmetric in the folded basis") {
  ModelSystem sys = preset("paper-B", 0.35);
  sys.grid = Grid(-3.0, 3.0, 13);
  const ScaledHamiltonian ham = build_hamiltonian_2e(sys);
  REQUIRE(ham.dimension() == 13 * 14 / 2);
  Eigen::MatrixXcd A(ham.dimension(), ham.dimension());
  A.setZero();
  for (int c = 0; c < ham.matrix.outerSize(); ++c)
    for (SparseC::InnerIterator it(ham.matrix, c); it; ++it) A(it.row(), it.col()) += it.value();
  REQUIRE((A - A.transpose()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("folded 2e assembly agrees with the brute-force tensor product") {
  // build the full n^2 x n^2 operator, project onto the symmetric subspace
  // with explicit basis vectors, and compare matrix elements
  ModelSystem sys = preset("paper-A", 0.2);
  sys.grid = Grid(-2.0, 2.0, 9);
  const int n = sys.grid.n_points;
  const ScaledHamiltonian folded = build_hamiltonian_2e(sys);

  const Complex phase = std::exp(Complex(0.0, -2.0 * sys.theta.theta));
  const Complex eith = std::exp(Complex(0.0, sys.theta.theta));
  const SparseD L = build_laplacian(sys.grid, 4);
  Eigen::MatrixXcd one = Eigen::MatrixXcd::Zero(n, n);
  for (int c = 0; c < L.outerSize(); ++c)
    for (SparseD::InnerIterator it(L, c); it; ++it)
      one(it.row(), it.col()) = -0.5 * phase * it.value();
  for (int i = 0; i < n; ++i)
    one(i, i) += external_potential(sys.params, sys.grid.x(i) * eith);

  const int full = n * n;
  Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(full, full);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  for (int r1 = 0; r1 < n; ++r1)
    for (int c1 = 0; c1 < n; ++c1)
      for (int r2 = 0; r2 < n; ++r2)
        for (int c2 = 0; c2 < n; ++c2)
          big(r1 * n + r2, c1 * n + c2) = one(r1, c1) * id(r2, c2) + id(r1, c1) * one(r2, c2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double dx = sys.grid.x(i) - sys.grid.x(j);
      big(i * n + j, i * n + j) += sys.lambda / std::sqrt(1.0 + dx * dx * eith * eith);
    }

  // symmetric basis vectors in the full space
  const int half = n * (n + 1) / 2;
  Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(full, half);
  int k = 0;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j, ++k) {
      if (i == j) {
        B(i * n + j, k) = 1.0;
      } else {
        B(i * n + j, k) = inv_sqrt2;
        B(j * n + i, k) = inv_sqrt2;
      }
    }
  const Eigen::MatrixXcd projected = B.transpose() * big * B;

  Eigen::MatrixXcd F = Eigen::MatrixXcd::Zero(half, half);
  for (int c = 0; c < folded.matrix.outerSize(); ++c)
    for (SparseC::InnerIterator it(folded.matrix, c); it; ++it) F(it.row(), it.col()) += it.value();

  REQUIRE((F - projected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("2e memory cap raises a sizing error") {
  ModelSystem sys = preset("paper-B", 0.35);
  sys.grid = Grid(-25.0, 25.0, 2001);
  try {
    build_hamiltonian_2e(sys, 4, 100.0);
    FAIL("expected a memory-cap error");
  } catch (const Error& e) {
    REQUIRE(std::string(e.what()).find("reduce n_points") != std::string::npos);
  }
}

TEST_CASE("pair index mapping is consistent") {
  ModelSystem sys = preset("paper-A");
  sys.grid = Grid(-2.0, 2.0, 7);
  const ScaledHamiltonian ham = build_hamiltonian_2e(sys);
  REQUIRE(ham.pair_index.size() == static_cast<size_t>(ham.dimension()));
  for (size_t k = 0; k < ham.pair_index.size(); ++k) {
    const auto [i, j] = ham.pair_index[k];
    REQUIRE(i <= j);
    REQUIRE(detail::half_index(i, j, 7) == k);
  }
}
