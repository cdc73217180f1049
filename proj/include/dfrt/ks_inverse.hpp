#pragma once

// Inversion of complex densities to the exact Kohn-Sham potential, its
// Hartree/XC split, energy components, HOMO and threshold relations, the
// forward KS solve (with the Hermitian 2x2-block form as a cross-check),
// and density-tail analysis.
//
// Everything here assumes the single-spatial-orbital model valid for
// 0 < N <= 2: phi = sqrt(n/N) occupied N times.  That makes
//   v_s(x) = e^{-2i theta} lap(sqrt(n)) / (2 sqrt(n)) + eps_homo
// exact, and the inversion a pure formula.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "dfrt/density.hpp"
#include "dfrt/eigensolver.hpp"
#include "dfrt/model.hpp"
#include "dfrt/stencil.hpp"

namespace dfrt {

struct KSDecomposition {
  std::vector<Complex> v_s;
  std::vector<Complex> v_ext_scaled;
  std::vector<Complex> v_hartree;
  std::vector<Complex> v_xc;
  Complex epsilon_homo;
  std::vector<bool> valid_mask;  // density above floor, stencil fully inside
};

struct EnergyComponents {
  Complex T_s, E_ext, E_H, E_xc, E_total;
};

struct ThresholdReport {
  Complex xi;
  Complex epsilon_th;
  Complex homo_predicted;
  double affinity = 0.0;  // hartree
  double width = 0.0;     // hartree
};

constexpr double kDensityFloor = 1e-12;

namespace detail {

/// Complex sqrt of a density on a continuously tracked branch: the phase is
/// unwrapped along the grid outward from the point of largest |n|, then
/// halved.  Points below the floor are masked and end the unwrap walk.
inline std::pair<std::vector<Complex>, std::vector<bool>> sqrt_density(const ComplexDensity& n) {
  const size_t m = n.values.size();
  std::vector<bool> mask(m, false);
  size_t imax = 0;
  double amax = 0.0;
  for (size_t i = 0; i < m; ++i) {
    const double a = std::abs(n.values[i]);
    if (a >= kDensityFloor) mask[i] = true;
    if (a > amax) { amax = a; imax = i; }
  }
  if (amax < kDensityFloor) throw Error("sqrt_density: density below floor everywhere");

  std::vector<double> phase(m, 0.0);
  phase[imax] = std::arg(n.values[imax]);
  auto walk = [&](size_t from, int step, size_t end) {
    double prev = phase[from];
    for (size_t i = from; i != end;) {
      i = static_cast<size_t>(static_cast<long>(i) + step);
      if (!mask[i]) break;
      double d = std::arg(n.values[i]) - std::fmod(prev, 2.0 * M_PI);
      while (d > M_PI) d -= 2.0 * M_PI;
      while (d <= -M_PI) d += 2.0 * M_PI;
      if (std::abs(d) >= M_PI - 1e-9) {
        std::ostringstream msg;
        msg << "sqrt_density: branch ambiguity (phase step " << d << ") at grid point " << i;
        throw Error(msg.str());
      }
      prev += d;
      phase[i] = prev;
    }
  };
  if (imax + 1 < m) walk(imax, +1, m - 1);
  if (imax > 0) walk(imax, -1, 0);

  std::vector<Complex> root(m, Complex(0.0));
  for (size_t i = 0; i < m; ++i)
    if (mask[i]) root[i] = std::sqrt(std::abs(n.values[i])) * std::exp(Complex(0.0, 0.5 * phase[i]));
  return {root, mask};
}

/// Shrink a mask so every surviving point has `reach` valid neighbors on
/// both sides (the finite-difference stencil must not touch masked points).
inline std::vector<bool> shrink_mask(const std::vector<bool>& mask, int reach) {
  const long m = static_cast<long>(mask.size());
  std::vector<bool> out(mask.size(), false);
  for (long i = 0; i < m; ++i) {
    bool ok = mask[static_cast<size_t>(i)];
    for (long k = -reach; ok && k <= reach; ++k) {
      const long j = i + k;
      ok = j >= 0 && j < m && mask[static_cast<size_t>(j)];
    }
    out[static_cast<size_t>(i)] = ok;
  }
  return out;
}

}  // namespace detail

/// v_s from the density alone: kinetic inversion term plus the supplied
/// orbital-energy constant.  Only v_s and the mask are filled here; use
/// xc_potential for the full split.
inline KSDecomposition invert_ks(const ComplexDensity& density, double theta,
                                 Complex epsilon_homo, int order = 4) {
  auto [root, mask] = detail::sqrt_density(density);
  const SparseD L = build_laplacian(density.grid, order);
  const std::vector<Complex> lap = apply_operator(L, root);
  const Complex phase = std::exp(Complex(0.0, -2.0 * theta));

  KSDecomposition out;
  out.epsilon_homo = epsilon_homo;
  out.valid_mask = detail::shrink_mask(mask, order / 2);
  out.v_s.assign(root.size(), Complex(0.0));
  for (size_t i = 0; i < root.size(); ++i)
    if (out.valid_mask[i]) out.v_s[i] = phase * lap[i] / (2.0 * root[i]) + epsilon_homo;
  return out;
}

/// v_H(x) = sum_x' v_ee(x' e^{i theta}, x e^{i theta}) n(x') h
inline std::vector<Complex> hartree_potential(const ComplexDensity& density, double lambda,
                                              double theta) {
  const size_t m = density.values.size();
  std::vector<Complex> v(m, Complex(0.0));
  if (lambda == 0.0) return v;
  const Complex eith = std::exp(Complex(0.0, theta));
  const double h = density.grid.h();
  for (size_t i = 0; i < m; ++i) {
    Complex s = 0.0;
    const double xi = density.grid.x(static_cast<int>(i));
    for (size_t j = 0; j < m; ++j)
      s += interaction_potential(lambda, density.grid.x(static_cast<int>(j)) * eith, xi * eith) *
           density.values[j];
    v[i] = s * h;
  }
  return v;
}

/// Full decomposition v_s = v_ext_scaled + v_H + v_xc (v_xc by difference).
inline KSDecomposition xc_potential(const ComplexDensity& density, const ModelSystem& sys,
                                    Complex epsilon_homo, int order = 4) {
  KSDecomposition out = invert_ks(density, sys.theta.theta, epsilon_homo, order);
  const size_t m = density.values.size();
  const Complex eith = std::exp(Complex(0.0, sys.theta.theta));

  out.v_ext_scaled.resize(m);
  for (size_t i = 0; i < m; ++i)
    out.v_ext_scaled[i] = external_potential(sys.params, density.grid.x(static_cast<int>(i)) * eith);
  out.v_hartree = hartree_potential(density, sys.lambda, sys.theta.theta);

  out.v_xc.assign(m, Complex(0.0));
  for (size_t i = 0; i < m; ++i)
    if (out.valid_mask[i]) out.v_xc[i] = out.v_s[i] - out.v_ext_scaled[i] - out.v_hartree[i];
  return out;
}

/// Scaled KS energy pieces for the single-orbital model; E_xc closes the
/// budget against the supplied total energy.
inline EnergyComponents energy_components(const ComplexDensity& density, const ModelSystem& sys,
                                          Complex E_total, int order = 4) {
  const double N = density.particle_number;
  if (N <= 0.0) throw Error("energy_components: particle_number must be positive");
  const double theta = sys.theta.theta;
  const Complex eith = std::exp(Complex(0.0, theta));
  const double h = density.grid.h();

  ComplexDensity per_particle = density;
  for (auto& v : per_particle.values) v /= N;
  per_particle.particle_number = 1.0;
  auto [phi, mask] = detail::sqrt_density(per_particle);

  const SparseD D = build_gradient(density.grid, order);
  const std::vector<Complex> dphi = apply_operator(D, phi);
  const std::vector<bool> mk = detail::shrink_mask(mask, order / 2);

  EnergyComponents e;
  Complex t = 0.0;
  for (size_t i = 0; i < dphi.size(); ++i)
    if (mk[i]) t += 0.5 * dphi[i] * dphi[i];  // plain square, c-product
  e.T_s = std::exp(Complex(0.0, -2.0 * theta)) * N * t * h;

  Complex ext = 0.0;
  for (size_t i = 0; i < density.values.size(); ++i)
    ext += density.values[i] *
           external_potential(sys.params, density.grid.x(static_cast<int>(i)) * eith);
  e.E_ext = ext * h;

  Complex hart = 0.0;
  if (sys.lambda != 0.0) {
    const size_t m = density.values.size();
    for (size_t i = 0; i < m; ++i)
      for (size_t j = 0; j < m; ++j)
        hart += density.values[i] * density.values[j] *
                interaction_potential(sys.lambda, Complex(density.grid.x(static_cast<int>(i))),
                                      Complex(density.grid.x(static_cast<int>(j))));
    hart *= 0.5 * h * h;
  }
  e.E_H = std::exp(Complex(0.0, -theta)) * hart;

  e.E_total = E_total;
  e.E_xc = E_total - e.T_s - e.E_ext - e.E_H;
  return e;
}

enum class HomoCase { Bound, Metastable, MultiChannel };

/// HOMO orbital energy from interacting quantities: bound J-electron system
/// uses -I; a metastable (J+1)-electron system with one decay channel uses
/// (-A - Gamma/2 i) shifted by the threshold energy.
inline Complex homo_energy(HomoCase c, double ionization, double affinity, double width,
                           Complex epsilon_th) {
  switch (c) {
    case HomoCase::Bound:
      return Complex(-ionization, 0.0);
    case HomoCase::Metastable:
      return Complex(-affinity, -0.5 * width) + epsilon_th;
    case HomoCase::MultiChannel:
      throw Error("homo_energy: dependent on partial widths / branching ratios");
  }
  throw Error("homo_energy: unknown case");
}

/// xi = sum of occupied orbital energies below the HOMO + E_HXC
///      - integral of v_HXC times the density.
inline Complex xi_functional(Complex sum_occ_below_homo, Complex E_hxc,
                             const std::vector<Complex>& v_hxc, const ComplexDensity& density) {
  if (v_hxc.size() != density.values.size())
    throw Error("xi_functional: field/density size mismatch");
  Complex integ = 0.0;
  for (size_t i = 0; i < v_hxc.size(); ++i) integ += v_hxc[i] * density.values[i];
  return sum_occ_below_homo + E_hxc - integ * density.grid.h();
}

inline Complex threshold_energy(Complex E_J, Complex xi) { return E_J - xi; }

/// Extend v_s beyond its valid mask by the asymptote v_ext_scaled + v_H so
/// the forward solve sees a finite potential everywhere.
inline std::vector<Complex> extend_potential(const KSDecomposition& dec) {
  if (dec.v_ext_scaled.empty() || dec.v_hartree.empty())
    throw Error("extend_potential: need the full decomposition (use xc_potential)");
  std::vector<Complex> v = dec.v_s;
  for (size_t i = 0; i < v.size(); ++i)
    if (!dec.valid_mask[i]) v[i] = dec.v_ext_scaled[i] + dec.v_hartree[i];
  return v;
}

/// Forward KS solve: eigenpairs of e^{-2i theta}(-1/2 lap) + v_s, lowest
/// `n_orbitals` by real part, c-normalized.
inline std::vector<Eigenpair> solve_ks_forward(const std::vector<Complex>& v_s, double theta,
                                               const Grid& grid, int n_orbitals, int order = 4) {
  const int n = grid.n_points;
  if (v_s.size() != static_cast<size_t>(n)) throw Error("solve_ks_forward: field/grid mismatch");

  const Complex phase = std::exp(Complex(0.0, -2.0 * theta));
  const SparseD L = build_laplacian(grid, order);
  SparseC H(n, n);
  std::vector<Eigen::Triplet<Complex>> trip;
  for (int col = 0; col < L.outerSize(); ++col)
    for (SparseD::InnerIterator it(L, col); it; ++it)
      trip.emplace_back(it.row(), it.col(), -0.5 * phase * it.value());
  for (int i = 0; i < n; ++i) trip.emplace_back(i, i, v_s[static_cast<size_t>(i)]);
  H.setFromTriplets(trip.begin(), trip.end());

  ScaledHamiltonian ham{std::move(H), 1, ModelSystem{grid, {}, 0.0, ScalingAngle(theta)}, order, {}};
  auto all = solve_dense(ham, n_orbitals);
  if (static_cast<int>(all.size()) > n_orbitals) all.resize(static_cast<size_t>(n_orbitals));
  return all;
}

/// The same forward solve in the Hermitian 2x2-block real representation:
///   h1 = -1/2 cos(2 theta) lap + Re(v_s),  h2 = +1/2 sin(2 theta) lap + Im(v_s)
/// assembled as the real 2n x 2n block matrix [[h1, -h2], [h2, h1]].
/// Returns eigenvalues only, sorted by real part; used as an equivalence
/// check against the direct complex assembly.
inline std::vector<Complex> solve_ks_forward_block(const std::vector<Complex>& v_s, double theta,
                                                   const Grid& grid, int order = 4) {
  const int n = grid.n_points;
  if (v_s.size() != static_cast<size_t>(n))
    throw Error("solve_ks_forward_block: field/grid mismatch");

  const SparseD L = build_laplacian(grid, order);
  Eigen::MatrixXd h1 = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd h2 = Eigen::MatrixXd::Zero(n, n);
  const double c2 = std::cos(2.0 * theta), s2 = std::sin(2.0 * theta);
  for (int col = 0; col < L.outerSize(); ++col)
    for (SparseD::InnerIterator it(L, col); it; ++it) {
      h1(it.row(), it.col()) += -0.5 * c2 * it.value();
      h2(it.row(), it.col()) += 0.5 * s2 * it.value();
    }
  for (int i = 0; i < n; ++i) {
    h1(i, i) += v_s[static_cast<size_t>(i)].real();
    h2(i, i) += v_s[static_cast<size_t>(i)].imag();
  }

  Eigen::MatrixXd B(2 * n, 2 * n);
  B.topLeftCorner(n, n) = h1;
  B.topRightCorner(n, n) = -h2;
  B.bottomLeftCorner(n, n) = h2;
  B.bottomRightCorner(n, n) = h1;

  Eigen::EigenSolver<Eigen::MatrixXd> es(B, false);
  if (es.info() != Eigen::Success) throw Error("solve_ks_forward_block: eigensolve failed");

  // Each complex eigenvalue of h1 + i h2 appears here together with its
  // conjugate; keep the Im <= 0 representative of every pair.  Real
  // eigenvalues are their own conjugates and show up twice, so de-duplicate
  // those (the 1D spectrum is non-degenerate).
  std::vector<Complex> vals, real_vals;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const Complex e = es.eigenvalues()(i);
    if (std::abs(e.imag()) <= 1e-10)
      real_vals.push_back(e);
    else if (e.imag() < 0.0)
      vals.push_back(e);
  }
  std::sort(real_vals.begin(), real_vals.end(),
            [](Complex a, Complex b) { return a.real() < b.real(); });
  for (size_t i = 0; i + 1 < real_vals.size(); i += 2)
    vals.push_back(0.5 * (real_vals[i] + real_vals[i + 1]));
  std::sort(vals.begin(), vals.end(),
            [](Complex a, Complex b) { return a.real() < b.real(); });
  return vals;
}

/// Fit log n(x) = log C^2 + 2 i k e^{i theta} x over [x_lo, x_hi] and
/// return the complex wavenumber k of the density tail.
inline Complex tail_wavenumber(const ComplexDensity& density, double theta, double x_lo,
                               double x_hi, double residual_tol = 0.05) {
  std::vector<double> xs;
  std::vector<Complex> ys;
  double prev_phase = 0.0;
  bool first = true;
  for (int i = 0; i < density.grid.n_points; ++i) {
    const double x = density.grid.x(i);
    if (x < x_lo || x > x_hi) continue;
    const Complex nv = density.values[static_cast<size_t>(i)];
    if (std::abs(nv) < kDensityFloor)
      throw Error("tail_wavenumber: density below floor inside fit window");
    double ph = std::arg(nv);
    if (!first) {
      while (ph - prev_phase > M_PI) ph -= 2.0 * M_PI;
      while (ph - prev_phase <= -M_PI) ph += 2.0 * M_PI;
    }
    first = false;
    prev_phase = ph;
    xs.push_back(x);
    ys.push_back(Complex(std::log(std::abs(nv)), ph));
  }
  if (xs.size() < 4) throw Error("tail_wavenumber: fit window holds fewer than 4 points");

  // complex least squares for y = a + b x
  const double m = static_cast<double>(xs.size());
  double sx = 0.0, sxx = 0.0;
  Complex sy = 0.0, sxy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sxx += xs[i] * xs[i];
    sy += ys[i];
    sxy += xs[i] * ys[i];
  }
  const double det = m * sxx - sx * sx;
  const Complex b = (m * sxy - sx * sy) / det;
  const Complex a = (sy - b * sx) / m;

  double rss = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) rss += std::norm(ys[i] - a - b * xs[i]);
  const double rms = std::sqrt(rss / m);
  if (rms > residual_tol)
    throw Error("tail_wavenumber: fit residual " + std::to_string(rms) +
                " exceeds tolerance; the tail is not asymptotic, enlarge the box");

  return b / (2.0 * Complex(0.0, 1.0) * std::exp(Complex(0.0, theta)));
}

}  // namespace dfrt
