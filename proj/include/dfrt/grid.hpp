#pragma once

// Real-space grid and model-system definitions.  Hartree atomic units
// throughout: energies in hartree, lengths in bohr.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace dfrt {

using Complex = std::complex<double>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Uniform 1D mesh with hard-wall (Dirichlet) ends.
struct Grid {
  double x_min = -12.0;
  double x_max = 12.0;
  int n_points = 241;

  Grid() = default;
  Grid(double xmin, double xmax, int n) : x_min(xmin), x_max(xmax), n_points(n) {
    if (n_points < 5) throw Error("Grid: n_points must be >= 5");
    if (!(x_max > x_min)) throw Error("Grid: x_max must exceed x_min");
  }

  double h() const { return (x_max - x_min) / (n_points - 1); }
  double x(int i) const { return x_min + i * h(); }

  std::vector<double> points() const {
    std::vector<double> xs(n_points);
    for (int i = 0; i < n_points; ++i) xs[i] = x(i);
    return xs;
  }

  bool operator==(const Grid& o) const {
    return x_min == o.x_min && x_max == o.x_max && n_points == o.n_points;
  }
};

/// Constants of the external potential
///   v(x) = a*[sum_{j=1,2} (1+exp(-2c(x+(-1)^j d)))^-1] - alpha*exp(-x^2/b)
struct PotentialParams {
  double a = 0.0;
  double alpha = 0.0;
  double b = 1.0;   // Gaussian width^2, bohr^2
  double c = 0.0;   // sigmoid steepness, 1/bohr
  double d = 0.0;   // sigmoid offset, bohr

  void validate() const {
    if (!(b > 0.0)) throw Error("PotentialParams: b must be positive");
  }
};

/// Complex-scaling angle, x -> x e^{i theta}.
struct ScalingAngle {
  double theta = 0.0;

  ScalingAngle() = default;
  explicit ScalingAngle(double t) : theta(t) {
    if (t < 0.0 || t >= std::atan(1.0))  // pi/4
      throw Error("ScalingAngle: theta must lie in [0, pi/4)");
  }
};

struct ModelSystem {
  Grid grid;
  PotentialParams params;
  double lambda = 0.0;  // soft-Coulomb strength
  ScalingAngle theta;

  void validate() const {
    params.validate();
    if (lambda < 0.0) throw Error("ModelSystem: lambda must be >= 0");
  }
};

// Built-in parameter sets from the two model potentials studied here.
// "paper-A" binds one and two electrons; "paper-B" binds one electron and
// holds a metastable two-electron state behind its potential steps.
inline ModelSystem preset(const std::string& name, double theta = 0.0) {
  ModelSystem sys;
  sys.theta = ScalingAngle(theta);
  if (name == "paper-A") {
    sys.params = {0.0, 9.0, 0.5, 0.0, 0.0};
    sys.grid = Grid(-12.0, 12.0, 241);
    sys.lambda = 1.0;
  } else if (name == "paper-B") {
    sys.params = {0.75, 6.0, 0.05, 4.0, 3.0};
    sys.grid = Grid(-25.0, 25.0, 501);
    sys.lambda = 1.0;
  } else {
    throw Error("unknown preset: " + name);
  }
  return sys;
}

}  // namespace dfrt
