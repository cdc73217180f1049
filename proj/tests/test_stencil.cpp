#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "dfrt/stencil.hpp"

using namespace dfrt;

namespace {

// Apply a real operator to a real field through the complex helper.
std::vector<double> apply_real(const SparseD& A, const std::vector<double>& v) {
  std::vector<Complex> vc(v.begin(), v.end());
  const std::vector<Complex> out = apply_operator(A, vc);
  std::vector<double> res(out.size());
  for (size_t i = 0; i < out.size(); ++i) res[i] = out[i].real();
  return res;
}

}  // namespace

TEST_CASE("laplacian of sin(k x) approaches -k^2 sin(k x)") {
  // interior of a box mode: f = sin(pi (x + L/2) / L) vanishes at both ends,
  // so Dirichlet truncation is exact for this function
  const double L = 4.0;
  const Grid g(-L / 2, L / 2, 201);
  const double k = M_PI / L;
  std::vector<double> f(static_cast<size_t>(g.n_points));
  for (int i = 0; i < g.n_points; ++i) f[static_cast<size_t>(i)] = std::sin(k * (g.x(i) + L / 2));

  // interior rows only; the outermost rows assume the function vanishes
  // beyond the walls, which a sine does not
  for (int order : {2, 4}) {
    const auto lap = apply_real(build_laplacian(g, order), f);
    double err = 0.0;
    for (int i = 2; i < g.n_points - 2; ++i)
      err = std::max(err, std::abs(lap[static_cast<size_t>(i)] + k * k * f[static_cast<size_t>(i)]));
    const double bound = order == 2 ? 1e-4 : 1e-7;
    REQUIRE(err < bound);
  }
}

TEST_CASE("fourth order laplacian converges faster than second") {
  const double L = 4.0;
  const double k = M_PI / L;
  auto max_err = [&](int n, int order) {
    const Grid g(-L / 2, L / 2, n);
    std::vector<double> f(static_cast<size_t>(g.n_points));
    for (int i = 0; i < g.n_points; ++i)
      f[static_cast<size_t>(i)] = std::sin(k * (g.x(i) + L / 2));
    const auto lap = apply_real(build_laplacian(g, order), f);
    double err = 0.0;
    for (int i = 2; i < g.n_points - 2; ++i)
      err = std::max(err,
                     std::abs(lap[static_cast<size_t>(i)] + k * k * f[static_cast<size_t>(i)]));
    return err;
  };
  // halving h should gain ~4x (order 2) and ~16x (order 4)
  REQUIRE(max_err(101, 2) / max_err(201, 2) > 3.0);
  REQUIRE(max_err(101, 4) / max_err(201, 4) > 12.0);
}

TEST_CASE("gradient of a cubic is exact for the 4th-order stencil") {
  const Grid g(-1.0, 1.0, 41);
  std::vector<double> f(static_cast<size_t>(g.n_points));
  for (int i = 0; i < g.n_points; ++i) {
    const double x = g.x(i);
    f[static_cast<size_t>(i)] = x * x * x - 2.0 * x;
  }
  const auto df = apply_real(build_gradient(g, 4), f);
  // interior rows only; boundary rows are Dirichlet-truncated
  for (int i = 2; i < g.n_points - 2; ++i) {
    const double x = g.x(i);
    REQUIRE(df[static_cast<size_t>(i)] == Catch::Approx(3.0 * x * x - 2.0).margin(1e-12));
  }
}

TEST_CASE("stencil rejections") {
  const Grid g(-1.0, 1.0, 21);
  REQUIRE_THROWS_AS(build_laplacian(g, 6), Error);
  REQUIRE_THROWS_AS(build_gradient(g, 3), Error);
}
