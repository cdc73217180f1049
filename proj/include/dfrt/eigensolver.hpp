#pragma once

// Eigensolvers for the complex-symmetric Hamiltonians.
//
// Three paths:
//  * solve_real_symmetric: unscaled (theta = 0) operator, dense
//    self-adjoint solve.  Used as an independent reference for the
//    complex paths.
//  * solve_dense: full nonsymmetric complex solve (zgeev); dimensions
//    up to 3000.
//  * solve_shift_invert: Arnoldi on (H - sigma)^-1 with c-product
//    (bilinear, no conjugation) orthogonalization, backed by a sparse LU.
//    Used for the two-electron problems.
//
// Eigenvectors are c-normalized: sum_k v_k^2 * w = 1 with w the quadrature
// weight h^d of the underlying d-dimensional grid.  The global sign is fixed
// by making the entry of largest magnitude have positive real part.

#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <complex>
#include <lapacke.h>
#include <random>
#include <vector>

#include "dfrt/hamiltonian.hpp"

namespace dfrt {

struct Eigenpair {
  Complex value;
  std::vector<Complex> vector;  // c-normalized on the grid
  double residual = 0.0;        // ||H v - E v||_2 / ||v||_2
};

namespace detail {

inline double quadrature_weight(const ScaledHamiltonian& ham) {
  return std::pow(ham.system.grid.h(), ham.particle_count);
}

/// c-product <u|v> = sum u_k v_k (no conjugation), unit quadrature weight.
inline Complex c_dot(const std::vector<Complex>& u, const std::vector<Complex>& v) {
  Complex s = 0.0;
  for (size_t k = 0; k < u.size(); ++k) s += u[k] * v[k];
  return s;
}

inline void c_normalize(std::vector<Complex>& v, double weight) {
  Complex s = c_dot(v, v) * weight;
  Complex scale = 1.0 / std::sqrt(s);
  size_t imax = 0;
  double amax = 0.0;
  for (size_t k = 0; k < v.size(); ++k) {
    const double a = std::abs(v[k]);
    if (a > amax) { amax = a; imax = k; }
  }
  if ((v[imax] * scale).real() < 0.0) scale = -scale;
  for (auto& c : v) c *= scale;
}

inline double residual_norm(const SparseC& H, const std::vector<Complex>& v, Complex E) {
  Eigen::Map<const Eigen::VectorXcd> vm(v.data(), static_cast<Eigen::Index>(v.size()));
  Eigen::VectorXcd r = H * vm - E * vm;
  return r.norm() / vm.norm();
}

/// Dense nonsymmetric complex eigensolve, column-major input, right vectors.
inline void zgeev_all(std::vector<Complex>& a, int n, std::vector<Complex>& values,
                      std::vector<Complex>& vectors) {
  values.assign(static_cast<size_t>(n), 0.0);
  vectors.assign(static_cast<size_t>(n) * n, 0.0);
  const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, a.data(), n,
                                        values.data(), nullptr, 1, vectors.data(), n);
  if (info != 0) throw Error("zgeev failed, info = " + std::to_string(info));
}

}  // namespace detail

/// Dense solve of the unscaled (theta = 0) operator.  Returns the lowest
/// `n_states` eigenpairs by energy.
inline std::vector<Eigenpair> solve_real_symmetric(const ScaledHamiltonian& ham, int n_states) {
  if (ham.system.theta.theta != 0.0)
    throw Error("solve_real_symmetric: requires theta = 0");
  const Eigen::Index n = ham.dimension();
  Eigen::MatrixXd A(n, n);
  A.setZero();
  for (int col = 0; col < ham.matrix.outerSize(); ++col)
    for (SparseC::InnerIterator it(ham.matrix, col); it; ++it)
      A(it.row(), it.col()) = it.value().real();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success) throw Error("solve_real_symmetric: eigensolve failed");

  const double w = detail::quadrature_weight(ham);
  std::vector<Eigenpair> out;
  n_states = std::min<int>(n_states, static_cast<int>(n));
  for (int s = 0; s < n_states; ++s) {
    Eigenpair p;
    p.value = es.eigenvalues()(s);
    p.vector.resize(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) p.vector[static_cast<size_t>(i)] = es.eigenvectors()(i, s);
    detail::c_normalize(p.vector, w);
    p.residual = detail::residual_norm(ham.matrix, p.vector, p.value);
    out.push_back(std::move(p));
  }
  return out;
}

/// Full dense complex eigensolve; all eigenvalues, vectors for the lowest
/// `n_vectors` states by real part.
inline std::vector<Eigenpair> solve_dense(const ScaledHamiltonian& ham, int n_vectors,
                                          Eigen::Index max_dim = 3000) {
  const Eigen::Index n = ham.dimension();
  if (n > max_dim)
    throw Error("solve_dense: dimension " + std::to_string(n) + " exceeds dense limit " +
                std::to_string(max_dim));

  std::vector<Complex> a(static_cast<size_t>(n) * n, 0.0);
  for (int col = 0; col < ham.matrix.outerSize(); ++col)
    for (SparseC::InnerIterator it(ham.matrix, col); it; ++it)
      a[static_cast<size_t>(it.col()) * n + it.row()] = it.value();

  std::vector<Complex> values, vectors;
  detail::zgeev_all(a, static_cast<int>(n), values, vectors);

  std::vector<int> idx(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
  std::sort(idx.begin(), idx.end(),
            [&](int p, int q) { return values[static_cast<size_t>(p)].real() < values[static_cast<size_t>(q)].real(); });

  const double w = detail::quadrature_weight(ham);
  std::vector<Eigenpair> out;
  for (Eigen::Index s = 0; s < n; ++s) {
    Eigenpair p;
    p.value = values[static_cast<size_t>(idx[static_cast<size_t>(s)])];
    if (s < n_vectors) {
      const size_t col = static_cast<size_t>(idx[static_cast<size_t>(s)]) * n;
      p.vector.assign(vectors.begin() + col, vectors.begin() + col + n);
      detail::c_normalize(p.vector, w);
      p.residual = detail::residual_norm(ham.matrix, p.vector, p.value);
    }
    out.push_back(std::move(p));
  }
  return out;
}

struct ShiftInvertOptions {
  int krylov_dim = 60;
  int max_restarts = 6;
  double tol = 1e-9;         // residual tolerance on requested pairs
  unsigned rng_seed = 12345;  // deterministic start vector
};

/// Shift-invert Arnoldi about `shift`; returns `n_states` eigenpairs nearest
/// the shift, sorted by distance from it.
inline std::vector<Eigenpair> solve_shift_invert(const ScaledHamiltonian& ham, Complex shift,
                                                 int n_states,
                                                 const ShiftInvertOptions& opt = {}) {
  const Eigen::Index n = ham.dimension();
  const int m = std::min<int>(opt.krylov_dim, static_cast<int>(n));
  if (n_states > m) throw Error("solve_shift_invert: n_states exceeds krylov_dim");

  SparseC M = ham.matrix;
  for (Eigen::Index i = 0; i < n; ++i) M.coeffRef(i, i) -= shift;
  M.makeCompressed();
  Eigen::SparseLU<SparseC> lu;
  lu.compute(M);
  if (lu.info() != Eigen::Success)
    throw Error("solve_shift_invert: LU factorization failed (shift may equal an eigenvalue)");

  std::mt19937 rng(opt.rng_seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::VectorXcd v0(n);
  for (Eigen::Index i = 0; i < n; ++i) v0(i) = Complex(uni(rng), uni(rng));

  auto c_dot_v = [](const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) {
    return (u.transpose() * v)(0);  // bilinear, no conjugation
  };

  const double w = detail::quadrature_weight(ham);
  std::vector<Eigenpair> best;

  for (int restart = 0; restart < opt.max_restarts; ++restart) {
    std::vector<Eigen::VectorXcd> V;
    Eigen::MatrixXcd Hk = Eigen::MatrixXcd::Zero(m + 1, m);

    Complex nrm0 = std::sqrt(c_dot_v(v0, v0));
    if (std::abs(nrm0) < 1e-14) throw Error("solve_shift_invert: degenerate start vector");
    V.push_back(v0 / nrm0);

    int built = m;
    for (int j = 0; j < m; ++j) {
      Eigen::VectorXcd t = lu.solve(V[static_cast<size_t>(j)]);
      // modified Gram-Schmidt in the c-product, with one reorthogonalization
      for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i <= j; ++i) {
          const Complex c = c_dot_v(V[static_cast<size_t>(i)], t);
          Hk(i, j) += c;
          t -= c * V[static_cast<size_t>(i)];
        }
      const Complex beta = std::sqrt(c_dot_v(t, t));
      Hk(j + 1, j) = beta;
      if (std::abs(beta) < 1e-13) { built = j + 1; break; }
      V.push_back(t / beta);
    }

    // Ritz pairs of the projected operator.
    std::vector<Complex> hsmall(static_cast<size_t>(built) * built);
    for (int c = 0; c < built; ++c)
      for (int r = 0; r < built; ++r)
        hsmall[static_cast<size_t>(c) * built + r] = Hk(r, c);
    std::vector<Complex> mu, y;
    detail::zgeev_all(hsmall, built, mu, y);

    std::vector<int> order(static_cast<size_t>(built));
    for (int i = 0; i < built; ++i) order[static_cast<size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int p, int q) {
      return std::abs(mu[static_cast<size_t>(p)]) > std::abs(mu[static_cast<size_t>(q)]);
    });

    best.clear();
    double worst = 0.0;
    const int take = std::min(n_states, built);
    for (int s = 0; s < take; ++s) {
      const int c = order[static_cast<size_t>(s)];
      if (std::abs(mu[static_cast<size_t>(c)]) < 1e-14)
        throw Error("solve_shift_invert: Ritz value at infinity");
      Eigen::VectorXcd vec = Eigen::VectorXcd::Zero(n);
      for (int i = 0; i < built; ++i)
        vec += y[static_cast<size_t>(c) * built + i] * V[static_cast<size_t>(i)];

      Eigenpair p;
      p.value = shift + 1.0 / mu[static_cast<size_t>(c)];
      p.vector.assign(vec.data(), vec.data() + n);
      detail::c_normalize(p.vector, w);
      p.residual = detail::residual_norm(ham.matrix, p.vector, p.value);
      worst = std::max(worst, p.residual);
      best.push_back(std::move(p));
    }
    if (worst < opt.tol || best.empty()) break;

    // Restart from the current best Ritz vector.
    for (Eigen::Index i = 0; i < n; ++i) v0(i) = best[0].vector[static_cast<size_t>(i)];
  }

  std::sort(best.begin(), best.end(), [&](const Eigenpair& p, const Eigenpair& q) {
    return std::abs(p.value - shift) < std::abs(q.value - shift);
  });
  return best;
}

/// Dispatch on size: dense below `dense_limit`, shift-invert above.
inline std::vector<Eigenpair> solve(const ScaledHamiltonian& ham, int n_states, Complex shift,
                                    Eigen::Index dense_limit = 3000) {
  if (ham.dimension() <= dense_limit) {
    auto all = solve_dense(ham, n_states, dense_limit);
    if (static_cast<int>(all.size()) > n_states) all.resize(static_cast<size_t>(n_states));
    return all;
  }
  return solve_shift_invert(ham, shift, n_states);
}

}  // namespace dfrt
