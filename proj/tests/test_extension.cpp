#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "polyfrac/extension.hpp"

using namespace polyfrac;

namespace {
constexpr double kPi = 3.14159265358979323846;

ScalarField gaussian(double cx, double width) {
  return ScalarField::from_function([cx, width](const Vec3& x) {
    double t = (x.x - cx) / width;
    return std::exp(-t * t);
  });
}

ScalarField gaussian3(double width) {
  return ScalarField::from_function(
      [width](const Vec3& x) { return std::exp(-norm2(x) / (width * width)); });
}
}  // namespace

TEST_CASE("normalization constants at the classical checkpoints") {
  // s = 1/2 in d = 1 reduces to the half-plane Poisson problem
  CHECK(C_ds(1, 0.5) == doctest::Approx(1.0 / kPi).epsilon(1e-13));
  CHECK(d_s_constant(0.5) == doctest::Approx(1.0).epsilon(1e-13));
  // Gamma wrapper against exact values
  CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-14));
  CHECK(gamma_fn(-0.5) == doctest::Approx(-2.0 * std::sqrt(kPi)).epsilon(1e-14));
  CHECK(gamma_fn(4.0) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK_THROWS_AS(gamma_fn(-2.0), ExtensionError);
  // the singular-integral constant is positive throughout (0,1), both dims
  for (double s : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    CHECK(C_ds(1, s) > 0.0);
    CHECK(C_ds(3, s) > 0.0);
    CHECK(d_s_constant(s) > 0.0);
  }
  CHECK_THROWS_AS(C_ds(1, 1.5), ExtensionError);
  CHECK_THROWS_AS(C_ds(2, 0.5), ExtensionError);
  CHECK_THROWS_AS(d_s_constant(0.0), ExtensionError);
}

TEST_CASE("extension attains its trace and preserves constants") {
  ScalarField u = gaussian(0.0, 1.0);
  HarmonicExtension U(u, 1, 0.3);
  CHECK(U.value({0.4, 0, 0}, 0.0) == doctest::Approx(u.value({0.4, 0, 0})));
  HarmonicExtension one(ScalarField::constant(1.0), 3, 0.6);
  CHECK(one.value({0.1, -0.2, 0.3}, 0.7) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(U.value({0, 0, 0}, -0.1), ExtensionError);
}

TEST_CASE("s = 1/2 extension matches the classical harmonic lift") {
  // The half-plane Poisson integral of u(x) = 1/(1+x^2) is
  // U(x,y) = (1+y) / (x^2 + (1+y)^2).
  ScalarField u =
      ScalarField::from_function([](const Vec3& x) { return 1.0 / (1.0 + x.x * x.x); });
  HarmonicExtension U(u, 1, 0.5);
  auto exact = [](double x, double y) {
    return (1.0 + y) / (x * x + (1.0 + y) * (1.0 + y));
  };
  for (auto [x, y] : {std::pair{0.3, 0.7}, {0.0, 0.05}, {-1.2, 0.4}, {2.0, 1.3}})
    CHECK(U.value({x, 0, 0}, y) == doctest::Approx(exact(x, y)).epsilon(1e-8));
}

TEST_CASE("direct fractional Laplacian of the Gaussian at the origin") {
  // Fourier side: (-Delta)^s exp(-|x|^2) at 0 equals
  // 2^{2s} Gamma(s + d/2) / Gamma(d/2)  (exact, both dimensions).
  for (double s : {0.25, 0.5, 0.75}) {
    double exact = std::pow(2.0, 2.0 * s) * gamma_fn(s + 0.5) / gamma_fn(0.5);
    double got = frac_laplacian_direct(gaussian(0.0, 1.0), {0, 0, 0}, 1, s);
    CHECK(got == doctest::Approx(exact).epsilon(5e-3));
  }
  double exact3 = std::pow(2.0, 2.0 * 0.5) * gamma_fn(0.5 + 1.5) / gamma_fn(1.5);
  double got3 = frac_laplacian_direct(gaussian3(1.0), {0, 0, 0}, 3, 0.5);
  CHECK(got3 == doctest::Approx(exact3).epsilon(5e-3));
}

TEST_CASE("Dirichlet-to-Neumann limit agrees with the direct integral") {
  ScalarField u = gaussian(0.2, 0.8);
  Vec3 x{0.1, 0, 0};
  for (double s : {0.25, 0.5, 0.75}) {
    double direct = frac_laplacian_direct(u, x, 1, s);
    double viaDtn = dtn(u, x, 1, s);
    CHECK(viaDtn == doctest::Approx(direct).epsilon(2e-2));
  }
  // one 3-d spot check
  ScalarField u3 = gaussian3(1.2);
  Vec3 x3{0.2, -0.1, 0.05};
  double d3 = frac_laplacian_direct(u3, x3, 3, 0.5);
  double n3 = dtn(u3, x3, 3, 0.5);
  CHECK(n3 == doctest::Approx(d3).epsilon(2e-2));
}

TEST_CASE("half Laplacian of the sqrt profile is constant one inside") {
  // (-Delta)^{1/2} (1-x^2)_+^{1/2} = 1 on (-1,1)
  ScalarField u = ScalarField::from_function(
      [](const Vec3& x) { return std::sqrt(std::max(0.0, 1.0 - x.x * x.x)); });
  for (double x : {0.0, 0.3, -0.3}) {
    FracDirectOptions opt;
    opt.kinks = {std::abs(1.0 - x), std::abs(1.0 + x)};
    double got = frac_laplacian_direct(u, {x, 0, 0}, 1, 0.5, opt);
    CHECK(got == doctest::Approx(1.0).epsilon(1e-2));
  }
}

TEST_CASE("weighted Dirichlet energy vanishes iff the trace is flat") {
  double s = 0.4;
  HarmonicExtension flat(ScalarField::constant(2.5), 1, s);
  Aabb box{{-1, 0, 0}, {1, 0, 0}};
  CHECK(dirichlet_energy(flat, box, 1.0) == doctest::Approx(0.0).epsilon(1e-10));
  HarmonicExtension bump(gaussian(0.0, 0.5), 1, s);
  CHECK(dirichlet_energy(bump, box, 1.0) > 1e-3);
}
