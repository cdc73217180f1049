#pragma once

// Discontinuity analysis: XC-potential jumps across integer particle
// numbers, plateau radii, and continuity scaling of the Hartree and
// kinetic inversion terms.

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "dfrt/density.hpp"
#include "dfrt/ks_inverse.hpp"

namespace dfrt {

/// Everything needed to study the N in [0, 2] ensemble of one system:
/// the two integer states and their energies (E0 = 0 by convention).
struct IntegerStates {
  ModelSystem system;  // theta set to the reporting angle
  ComplexDensity n1;
  ComplexDensity n2;
  Complex E1;
  Complex E2;
};

/// HOMO constant for the ensemble branch holding N: E1 on (0, 1],
/// E2 - E1 on (1, 2].
inline Complex branch_homo(const IntegerStates& st, double N) {
  if (N <= 0.0 || N > 2.0) throw Error("branch_homo: N must lie in (0, 2]");
  return N <= 1.0 ? st.E1 : st.E2 - st.E1;
}

/// Ensemble density at fractional N built from the two integer states.
inline ComplexDensity ensemble_density_at(const IntegerStates& st, double N) {
  if (N <= 0.0 || N > 2.0) throw Error("ensemble_density_at: N must lie in (0, 2]");
  if (N <= 1.0) {
    ComplexDensity zero{st.n1.grid, std::vector<Complex>(st.n1.values.size(), Complex(0.0)), 0.0};
    EnsembleSpec spec{N, 0, zero, st.n1, Complex(0.0), st.E1};
    return ensemble_density(spec);
  }
  EnsembleSpec spec{N, 1, st.n1, st.n2, st.E1, st.E2};
  return ensemble_density(spec);
}

/// Full KS decomposition of the ensemble density at N, with the branch HOMO
/// constant fed to the inversion.
inline KSDecomposition ensemble_xc(const IntegerStates& st, double N, int order = 4) {
  return xc_potential(ensemble_density_at(st, N), st.system, branch_homo(st, N), order);
}

struct JumpReport {
  int J = 1;
  Complex delta_mu;             // measured plateau constant
  Complex delta_mu_predicted;   // (E_{J+1} - E_J) - (E_J - E_{J-1})
  std::map<double, double> plateau_radii;  // delta -> radius (bohr)
};

namespace detail {

inline double median(std::vector<double> v) {
  if (v.empty()) throw Error("median: empty sample");
  std::sort(v.begin(), v.end());
  const size_t m = v.size();
  return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

inline double interquartile_range(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t m = v.size();
  if (m < 4) return 0.0;
  return v[(3 * m) / 4] - v[m / 4];
}

}  // namespace detail

/// Measure the XC-potential jump across N = J as the component-wise median
/// of v_xc(J + delta) - v_xc(J - delta) over the central `region_fraction`
/// of the grid.  An interquartile spread above 10x `tolerance` means there
/// is no plateau.
inline JumpReport jump_scan(const IntegerStates& st, int J, double delta,
                            double region_fraction = 0.2, double tolerance = 0.02) {
  if (J != 1) throw Error("jump_scan: only J = 1 is supported (two-electron maximum)");
  if (delta <= 0.0 || delta >= 1.0) throw Error("jump_scan: delta must lie in (0, 1)");

  const KSDecomposition above = ensemble_xc(st, J + delta);
  const KSDecomposition below = ensemble_xc(st, J - delta);

  const Grid& g = st.n1.grid;
  const double half_width = 0.5 * (g.x_max - g.x_min);
  const double x_cut = region_fraction * half_width;
  const double x_mid = 0.5 * (g.x_max + g.x_min);

  std::vector<double> dre, dim;
  for (int i = 0; i < g.n_points; ++i) {
    const size_t k = static_cast<size_t>(i);
    if (!above.valid_mask[k] || !below.valid_mask[k]) continue;
    if (std::abs(g.x(i) - x_mid) > x_cut) continue;
    const Complex d = above.v_xc[k] - below.v_xc[k];
    dre.push_back(d.real());
    dim.push_back(d.imag());
  }
  if (dre.size() < 8) throw Error("jump_scan: too few valid points in the central region");

  JumpReport rep;
  rep.J = J;
  rep.delta_mu = Complex(detail::median(dre), detail::median(dim));
  rep.delta_mu_predicted = (st.E2 - st.E1) - (st.E1 - Complex(0.0));

  const double spread =
      std::max(detail::interquartile_range(dre), detail::interquartile_range(dim));
  if (spread > 10.0 * tolerance)
    throw Error("jump_scan: no plateau (central spread " + std::to_string(spread) + ")");
  return rep;
}

/// Largest |x - x_mid| such that every valid point closer to the center
/// satisfies |(v_above - v_below) - jump| < tol.  Returns 0 when even the
/// innermost point misses.
inline double plateau_radius(const std::vector<Complex>& v_above,
                             const std::vector<Complex>& v_below,
                             const std::vector<bool>& mask_above,
                             const std::vector<bool>& mask_below, const Grid& grid, Complex jump,
                             double tol) {
  if (v_above.size() != v_below.size() || v_above.size() != static_cast<size_t>(grid.n_points))
    throw Error("plateau_radius: field sizes do not match grid");

  const double x_mid = 0.5 * (grid.x_max + grid.x_min);
  std::vector<int> order(static_cast<size_t>(grid.n_points));
  for (int i = 0; i < grid.n_points; ++i) order[static_cast<size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(grid.x(a) - x_mid) < std::abs(grid.x(b) - x_mid);
  });

  double radius = 0.0;
  for (int i : order) {
    const size_t k = static_cast<size_t>(i);
    const bool ok = mask_above[k] && mask_below[k] &&
                    std::abs((v_above[k] - v_below[k]) - jump) < tol;
    if (!ok) break;
    radius = std::abs(grid.x(i) - x_mid);
  }
  return radius;
}

struct ContinuityReport {
  double hartree_diff = 0.0;  // max pointwise |v_H(J+d) - v_H(J-d)| in region
  double kinetic_diff = 0.0;  // same for the constant-free inversion term
};

/// Pointwise continuity of the Hartree and kinetic inversion terms across
/// N = J, measured inside |x| <= x_limit (the region where the lower-state
/// density still dominates the ensemble).
inline ContinuityReport continuity_diffs(const IntegerStates& st, int J, double delta,
                                         double x_limit = 1.5, int order = 4) {
  const ComplexDensity na = ensemble_density_at(st, J + delta);
  const ComplexDensity nb = ensemble_density_at(st, J - delta);
  const double theta = st.system.theta.theta;

  const std::vector<Complex> ha = hartree_potential(na, st.system.lambda, theta);
  const std::vector<Complex> hb = hartree_potential(nb, st.system.lambda, theta);
  const KSDecomposition ka = invert_ks(na, theta, Complex(0.0), order);
  const KSDecomposition kb = invert_ks(nb, theta, Complex(0.0), order);

  const Grid& g = st.n1.grid;
  const double x_mid = 0.5 * (g.x_max + g.x_min);
  ContinuityReport rep;
  for (int i = 0; i < g.n_points; ++i) {
    if (std::abs(g.x(i) - x_mid) > x_limit) continue;
    const size_t k = static_cast<size_t>(i);
    rep.hartree_diff = std::max(rep.hartree_diff, std::abs(ha[k] - hb[k]));
    if (ka.valid_mask[k] && kb.valid_mask[k])
      rep.kinetic_diff = std::max(rep.kinetic_diff, std::abs(ka.v_s[k] - kb.v_s[k]));
  }
  return rep;
}

/// Least-squares slope of log(value) against log(delta); a result near 1
/// means the quantity vanishes linearly with delta.
inline double scaling_exponent(const std::vector<double>& deltas,
                               const std::vector<double>& values) {
  if (deltas.size() != values.size() || deltas.size() < 2)
    throw Error("scaling_exponent: need matching samples, at least two");
  const double m = static_cast<double>(deltas.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < deltas.size(); ++i) {
    if (deltas[i] <= 0.0 || values[i] <= 0.0)
      throw Error("scaling_exponent: samples must be positive");
    const double x = std::log(deltas[i]), y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace dfrt
