#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "polyfrac/quadrature.hpp"

#include <cmath>
#include <string>

using namespace polyfrac;

static std::string data_path(const char* name) {
  return std::string(POLYFRAC_DATA_DIR) + "/" + name;
}

TEST_CASE("gauss-legendre basics") {
  GaussRule g = gauss_legendre(4, 0.0, 1.0);
  double s = 0.0, s3 = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    s += g.weights[i];
    s3 += g.weights[i] * std::pow(g.nodes[i], 7.0);  // degree 2n-1
  }
  CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s3 == doctest::Approx(1.0 / 8.0).epsilon(1e-13));
}

TEST_CASE("jacobi rule: examples") {
  JacobiRule r = jacobi_rule(0.5, 1.0, 3);
  CHECK(r.integrate([](double) { return 1.0; }) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-14));

  JacobiRule r2 = jacobi_rule(0.0, 2.0, 2);
  CHECK(r2.integrate([](double y) { return y * y * y; }) ==
        doctest::Approx(4.0).epsilon(1e-13));

  // reference value from adaptive quadrature: int_0^1 y^{-1/2} e^y dy
  JacobiRule r3 = jacobi_rule(-0.5, 1.0, 8);
  CHECK(r3.integrate([](double y) { return std::exp(y); }) ==
        doctest::Approx(2.925303491814369).epsilon(1e-10));

  CHECK_THROWS_AS(jacobi_rule(-1.0, 1.0, 4), QuadratureError);
}

TEST_CASE("jacobi rule: moment reproduction") {
  for (double alpha : {-0.5, 0.0, 0.3, 0.9}) {
    for (int n : {1, 2, 5, 9}) {
      JacobiRule r = jacobi_rule(alpha, 1.7, n);
      for (double w : r.weights) CHECK(w > 0.0);
      for (double y : r.nodes) {
        CHECK(y > 0.0);
        CHECK(y < 1.7);
      }
      for (int k = 0; k < 2 * n; ++k) {
        double got = r.integrate([k](double y) { return std::pow(y, double(k)); });
        double exact = std::pow(1.7, alpha + k + 1.0) / (alpha + k + 1.0);
        CHECK(got == doctest::Approx(exact).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("directional derivatives") {
  Frame axes;  // g_par = e1, g_parperp = e2, g_perp = e3
  ScalarField u1 = ScalarField::from_function([](const Vec3& x) { return x.x * x.x; });
  CHECK(dir_derivative(u1, axes, {0, 0, 2}, {0.3, 0, 0}) ==
        doctest::Approx(2.0).epsilon(1e-6));

  ScalarField u2 = ScalarField::from_function([](const Vec3& x) { return x.x * x.y; });
  CHECK(dir_derivative(u2, axes, {0, 1, 1}, {0.3, 0.7, 0}) ==
        doctest::Approx(1.0).epsilon(1e-6));

  // registered analytic derivative of a singular power of the face distance
  ScalarField rf = ScalarField::plane_power({0, 0, 1}, 0.0, 0.5);
  CHECK(dir_derivative(rf, axes, {1, 0, 0}, {0.2, 0.3, 0.04}) ==
        doctest::Approx(0.5 * std::pow(0.04, -0.5)).epsilon(1e-13));
  CHECK(dir_derivative(rf, axes, {1, 0, 0}, {0.2, 0.3, 0.04}) ==
        doctest::Approx(2.5).epsilon(1e-13));
}

TEST_CASE("frac-power polynomials differentiate exactly") {
  FracPowerPoly p({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1});
  p.add_term(2.0, 1, 2, 0, 0.5);  // 2 x1 x2^2 x3^{1/2}
  Vec3 x{0.5, 2.0, 0.25};
  CHECK(p.value(x) == doctest::Approx(2.0 * 0.5 * 4.0 * 0.5).epsilon(1e-14));
  // d/dx3: 2 x1 x2^2 * 0.5 x3^{-1/2} = 4 * 0.5 * 2 = 4
  CHECK(p.deriv(x, {{0, 0, 1}}) == doctest::Approx(4.0).epsilon(1e-13));
  // mixed third derivative d1 d2 d3: 2*1*2*x2*0.5*x3^{-1/2} = 2*2*2*0.5*2 = 8 at x2=2
  CHECK(p.deriv(x, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}) ==
        doctest::Approx(2.0 * 2.0 * 2.0 * 0.5 * 2.0).epsilon(1e-13));
  CHECK(p.value({0.5, 2.0, -0.1}) == 0.0);  // supported on x3 > 0

  FracPowerPoly q({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1});
  q.add_term(3.0, 0, 0, 1, 0.0);
  FracPowerPoly pq = p * q;  // 6 x1 x2^2 x3^{3/2}
  CHECK(pq.value(x) == doctest::Approx(6.0 * 0.5 * 4.0 * 0.125).epsilon(1e-13));
}

TEST_CASE("weighted norm: constant over the unit cube") {
  Region cube = Region::make_box({{0, 0, 0}, {1, 1, 1}});
  WeightSpec w;
  NormResult r = weighted_norm(ScalarField::constant(1.0), cube, w);
  CHECK(!r.divergent);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("weighted norm: |r_v| over the unit ball") {
  Region ball = Region::ball({0, 0, 0}, 1.0);
  WeightSpec w;
  w.a_v = 1.0;
  w.vertex = Vec3{0, 0, 0};
  QuadOptions opt;
  opt.tol = 1e-9;
  NormResult r = weighted_norm(ScalarField::constant(1.0), ball, w, {}, {}, opt);
  CHECK(!r.divergent);
  CHECK(r.value == doctest::Approx(std::sqrt(4.0 * M_PI / 5.0)).epsilon(1e-8));
}

TEST_CASE("weighted norm: homogeneity and monotonicity") {
  Region ball = Region::ball({0, 0, 0}, 1.0);
  WeightSpec w;
  w.a_v = 0.7;
  w.vertex = Vec3{0, 0, 0};
  ScalarField u = ScalarField::from_function([](const Vec3& x) { return 1.0 + x.x; });
  double n1 = weighted_norm(u, ball, w).value;
  ScalarField u5 = ScalarField::from_function([](const Vec3& x) { return 5.0 * (1.0 + x.x); });
  double n5 = weighted_norm(u5, ball, w).value;
  CHECK(n5 == doctest::Approx(5.0 * n1).epsilon(1e-12));

  Region half = Region::ball({0, 0, 0}, 0.5);
  double nh = weighted_norm(u, half, w).value;
  CHECK(nh <= n1 * (1.0 + 1e-6));
}

TEST_CASE("integrability frontier across t = 1/2") {
  Polytope P = Polytope::from_json_file(data_path("cube.json"));
  int fz = P.find_face({0, 0, -1});
  NeighborhoodSpec spec{RegionKind::f, 0.1, -1, -1, fz};
  Region reg = Region::neighborhood(P, spec);
  Frame frame = P.frame_for(spec);

  const double s = 0.5;
  ScalarField u = ScalarField::plane_power({0, 0, 1}, 0.0, s);

  auto run = [&](double t) {
    WeightSpec w;
    w.s = s;
    w.t = t;
    w.a_f = 1.0;
    w.face = std::make_pair(Vec3{0, 0, 1}, 0.0);
    w.d_bnd = -t - s;
    w.r_bnd = [&P](const Vec3& x) { return P.dist_boundary(x); };
    return weighted_norm(u, reg, w, {1, 0, 0}, frame);
  };

  NormResult fin = run(0.45);
  CHECK(!fin.divergent);
  CHECK(std::isfinite(fin.value));
  NormResult div = run(0.55);
  CHECK(div.divergent);
  CHECK(std::isinf(div.value));
}

TEST_CASE("slobodeckij: constant field") {
  Region cube = Region::make_box({{0, 0, 0}, {1, 1, 1}});
  CounterRng rng(11u);
  MonteCarloResult r = slobodeckij(ScalarField::constant(3.0), cube, 0.5, 20000, rng);
  CHECK(r.value == 0.0);
}

TEST_CASE("slobodeckij: linear field on the interval, t = 1/2") {
  Region iv = Region::make_box({{0, 0, 0}, {1, 1, 1}});
  ScalarField u = ScalarField::from_function([](const Vec3& x) { return x.x; });
  CounterRng rng(12u);
  MonteCarloResult r = slobodeckij(u, iv, 0.5, 200000, rng, 1);
  // integrand is identically 1 on (0,1)^2
  CHECK(r.value == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("slobodeckij: linear field on the cube vs deterministic oracle") {
  Region cube = Region::make_box({{0, 0, 0}, {1, 1, 1}});
  ScalarField u = ScalarField::from_function([](const Vec3& x) { return x.x; });
  CounterRng rng(13u);
  MonteCarloResult r = slobodeckij(u, cube, 0.5, 400000, rng);
  // iint (x1-z1)^2/|x-z|^4 over the unit cube squared, adaptive reference
  const double oracle = 1.8779050527118684;
  CHECK(r.value == doctest::Approx(oracle).epsilon(0.05));
  CHECK(std::abs(r.value - oracle) <= 4.0 * r.std_error + 0.01 * oracle);
}

TEST_CASE("slobodeckij: error bar shrinks like 1/sqrt(budget)") {
  Region cube = Region::make_box({{0, 0, 0}, {1, 1, 1}});
  ScalarField u = ScalarField::from_function([](const Vec3& x) { return x.x; });
  CounterRng rng(14u);
  MonteCarloResult a = slobodeckij(u, cube, 0.3, 100000, rng);
  MonteCarloResult b = slobodeckij(u, cube, 0.3, 200000, rng);
  double ratio = b.std_error / a.std_error;
  CHECK(ratio == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.2));
}
