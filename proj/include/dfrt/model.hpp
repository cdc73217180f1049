#pragma once

// Pointwise evaluation of the model potentials at complex-scaled coordinates.

#include <complex>

#include "dfrt/grid.hpp"

namespace dfrt {

namespace detail {

// exp with the real part of the exponent clamped so an overflowing sigmoid
// saturates to 0/1 instead of producing inf.
inline Complex exp_clamped(Complex z) {
  double re = z.real();
  if (re > 700.0) re = 700.0;
  if (re < -700.0) re = -700.0;
  return std::exp(Complex(re, z.imag()));
}

}  // namespace detail

/// v(z) = a*[sum_{j=1,2} (1+e^{-2c(z+(-1)^j d)})^{-1}] - alpha*e^{-z^2/b}
inline Complex external_potential(const PotentialParams& p, Complex z) {
  Complex steps = 0.0;
  for (int j = 1; j <= 2; ++j) {
    const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
    steps += 1.0 / (1.0 + detail::exp_clamped(-2.0 * p.c * (z + sgn * p.d)));
  }
  return p.a * steps - p.alpha * detail::exp_clamped(-z * z / p.b);
}

/// Soft-Coulomb repulsion lambda / sqrt(1 + (z1-z2)^2), principal branch.
/// The scaled separations used here keep the sqrt argument away from the
/// negative real axis; crossing it is a hard error rather than a silent
/// branch flip.
inline Complex interaction_potential(double lambda, Complex z1, Complex z2) {
  if (lambda == 0.0) return 0.0;
  const Complex dz = z1 - z2;
  const Complex arg = 1.0 + dz * dz;
  if (arg.real() < 0.0 && std::abs(arg.imag()) < 1e-14 * std::abs(arg.real()))
    throw Error("interaction_potential: sqrt branch cut crossed at separation");
  return lambda / std::sqrt(arg);
}

}  // namespace dfrt
