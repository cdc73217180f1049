#pragma once

// Complex one-body densities, fractional-N ensembles, and E(N) curves.
//
// Densities follow the c-product convention used everywhere in this
// library: the left state is the plain transpose of the right one, so a
// density is a plain square (no conjugation) and is complex in general.

#include <cmath>
#include <map>
#include <vector>

#include "dfrt/grid.hpp"
#include "dfrt/resonance.hpp"

namespace dfrt {

struct ComplexDensity {
  Grid grid;
  std::vector<Complex> values;  // 1/bohr
  double particle_number = 0.0;

  Complex integral() const {
    Complex s = 0.0;
    for (const auto& v : values) s += v;
    return s * grid.h();
  }
};

namespace detail {

inline void check_norm(const ComplexDensity& n, const char* who, double tol = 1e-8) {
  const Complex I = n.integral();
  if (std::abs(I.real() - n.particle_number) > tol || std::abs(I.imag()) > tol)
    throw Error(std::string(who) + ": density norm off (got " + std::to_string(I.real()) + " + " +
                std::to_string(I.imag()) + "i, want " + std::to_string(n.particle_number) + ")");
}

}  // namespace detail

/// n(x) = phi(x)^2 for a c-normalized one-electron state.
inline ComplexDensity density_1e(const std::vector<Complex>& orbital, const Grid& grid) {
  if (orbital.size() != static_cast<size_t>(grid.n_points))
    throw Error("density_1e: orbital length does not match grid");
  ComplexDensity n{grid, {}, 1.0};
  n.values.resize(orbital.size());
  for (size_t i = 0; i < orbital.size(); ++i) n.values[i] = orbital[i] * orbital[i];
  detail::check_norm(n, "density_1e");
  return n;
}

/// n(x) = 2 h sum_{x'} Psi(x, x')^2 for a c-normalized symmetric pair state
/// given in the folded half-grid basis (diagonal entries carry weight 1,
/// off-diagonal 1/sqrt(2)).
inline ComplexDensity density_2e(const std::vector<Complex>& pair_state, const Grid& grid) {
  const int ng = grid.n_points;
  if (pair_state.size() != detail::half_dim(ng))
    throw Error("density_2e: pair state length does not match half grid");

  ComplexDensity n{grid, std::vector<Complex>(static_cast<size_t>(ng), Complex(0.0)), 2.0};
  const double h = grid.h();
  size_t k = 0;
  for (int i = 0; i < ng; ++i)
    for (int j = i; j < ng; ++j, ++k) {
      const Complex v2 = pair_state[k] * pair_state[k];
      if (i == j) {
        n.values[static_cast<size_t>(i)] += 2.0 * h * v2;
      } else {
        // Psi(i,j)^2 = v^2 / 2 on each of the two unfolded entries
        n.values[static_cast<size_t>(i)] += h * v2;
        n.values[static_cast<size_t>(j)] += h * v2;
      }
    }
  detail::check_norm(n, "density_2e");
  return n;
}

/// Two-state ensemble between adjacent integer particle numbers.
struct EnsembleSpec {
  double N = 1.0;
  int J = 1;
  ComplexDensity density_J;
  ComplexDensity density_J1;
  Complex energy_J;
  Complex energy_J1;

  void validate() const {
    if (J < 0) throw Error("EnsembleSpec: J must be nonnegative");
    if (N < J || N > J + 1)
      throw Error("EnsembleSpec: N must lie in [J, J+1]");
    if (!(density_J.grid == density_J1.grid))
      throw Error("EnsembleSpec: endpoint densities on different grids");
  }

  double weight_upper() const { return N - J; }
};

/// n^N = [1 - (N-J)] n^J + (N-J) n^{J+1}
inline ComplexDensity ensemble_density(const EnsembleSpec& spec) {
  spec.validate();
  const double w = spec.weight_upper();
  ComplexDensity n{spec.density_J.grid, {}, spec.N};
  n.values.resize(spec.density_J.values.size());
  for (size_t i = 0; i < n.values.size(); ++i)
    n.values[i] = (1.0 - w) * spec.density_J.values[i] + w * spec.density_J1.values[i];
  detail::check_norm(n, "ensemble_density");
  return n;
}

/// E(N) = [1 - (N-J)] E_J + (N-J) E_{J+1}
inline Complex ensemble_energy(const EnsembleSpec& spec) {
  spec.validate();
  const double w = spec.weight_upper();
  return (1.0 - w) * spec.energy_J + w * spec.energy_J1;
}

struct ENCurve {
  std::vector<double> N_samples;
  std::vector<Complex> energies;
  std::vector<int> breakpoints;  // integer particle numbers inside the range
};

/// Piecewise-linear E(N) through the supplied integer-N energies.
/// Every integer in [N_min, N_max] must be present in `energies`.
inline ENCurve en_curve(const std::map<int, Complex>& energies, double N_min, double N_max,
                        int samples) {
  if (samples < 2) throw Error("en_curve: need at least two samples");
  if (!(N_max > N_min)) throw Error("en_curve: empty range");

  const int j_lo = static_cast<int>(std::floor(N_min));
  const int j_hi = static_cast<int>(std::ceil(N_max));
  for (int j = j_lo; j <= j_hi; ++j)
    if (!energies.count(j))
      throw Error("en_curve: missing state for N = " + std::to_string(j));

  ENCurve curve;
  for (int j = j_lo; j <= j_hi; ++j)
    if (j >= N_min && j <= N_max) curve.breakpoints.push_back(j);

  for (int s = 0; s < samples; ++s) {
    const double N = N_min + (N_max - N_min) * s / (samples - 1);
    int J = static_cast<int>(std::floor(N));
    if (J == j_hi) --J;  // right endpoint belongs to the last segment
    const double w = N - J;
    curve.N_samples.push_back(N);
    curve.energies.push_back((1.0 - w) * energies.at(J) + w * energies.at(J + 1));
  }
  return curve;
}

}  // namespace dfrt
