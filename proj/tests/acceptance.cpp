// Acceptance gate: one pass/fail line per criterion, exit code = #failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <algorithm>
#include <string>
#include <vector>

#include "polyfrac/covering.hpp"
#include "polyfrac/extension.hpp"
#include "polyfrac/fracsolve.hpp"
#include "polyfrac/polytope.hpp"
#include "polyfrac/quadrature.hpp"
#include "polyfrac/rng.hpp"
#include "polyfrac/verify.hpp"

using namespace polyfrac;

namespace {

const std::string kData = POLYFRAC_DATA_DIR;

QuadOptions fast_opts() {
  QuadOptions q;
  q.tol = 1e-3;
  q.max_shells = 120;
  q.radial_order = 6;
  q.angular_order = 8;
  q.box_cells = 6;
  return q;
}

NeighborhoodSpec spec_for_kind(const Polytope& P, RegionKind kind, double xi) {
  NeighborhoodSpec spec;
  spec.kind = kind;
  spec.xi = xi;
  bool nv = kind == RegionKind::v || kind == RegionKind::ve ||
            kind == RegionKind::vf || kind == RegionKind::vef;
  bool ne = kind == RegionKind::e || kind == RegionKind::ve ||
            kind == RegionKind::ef || kind == RegionKind::vef;
  bool nf = kind == RegionKind::f || kind == RegionKind::vf ||
            kind == RegionKind::ef || kind == RegionKind::vef;
  if (nv) spec.vertex = 0;
  if (ne) spec.edge = nv ? P.edges_at_vertex(0).front() : 0;
  if (nf) {
    if (ne)
      spec.face = P.faces_of_edge(spec.edge).front();
    else if (nv)
      spec.face = P.faces_at_vertex(0).front();
    else
      spec.face = 0;
  }
  return spec;
}

// --- criterion 1: partition soundness on cube and L-prism -------------------
bool partition_sound(const Polytope& P, double xi, int n_samples,
                     std::uint64_t seed) {
  CounterRng rng(seed);
  Aabb box = P.bounding_box();
  int kept = 0;
  while (kept < n_samples) {
    Vec3 x = rng.in_box(box);
    if (!P.contains(x)) continue;
    ++kept;
    std::vector<NeighborhoodSpec> hits = P.classify(x, xi);
    if (hits.empty()) return false;
    for (const NeighborhoodSpec& h : hits) {
      // each hit names one coherent feature chain: the indices exist, are
      // mutually adjacent, and their distances are ordered r_f <= r_e <= r_v
      if (h.vertex >= 0 && h.edge >= 0) {
        const auto& es = P.edges_at_vertex(h.vertex);
        if (std::find(es.begin(), es.end(), h.edge) == es.end()) return false;
      }
      if (h.vertex >= 0 && h.face >= 0) {
        const auto& fs = P.faces_at_vertex(h.vertex);
        if (std::find(fs.begin(), fs.end(), h.face) == fs.end()) return false;
      }
      if (h.edge >= 0 && h.face >= 0) {
        const auto& fs = P.faces_of_edge(h.edge);
        if (std::find(fs.begin(), fs.end(), h.face) == fs.end()) return false;
      }
      double rv = h.vertex >= 0 ? P.dist_vertex(h.vertex, x) : 0.0;
      double re = h.edge >= 0 ? P.dist_edge(h.edge, x) : 0.0;
      double rf = h.face >= 0 ? P.dist_face(h.face, x) : 0.0;
      if (h.edge >= 0 && h.vertex >= 0 && re > rv + 1e-15) return false;
      if (h.face >= 0 && h.edge >= 0 && rf > re + 1e-15) return false;
      if (h.face >= 0 && h.vertex >= 0 && rf > rv + 1e-15) return false;
    }
    // no duplicated spec: same kind + same features appearing twice
    for (size_t i = 0; i < hits.size(); ++i)
      for (size_t j = i + 1; j < hits.size(); ++j)
        if (hits[i] == hits[j]) return false;
  }
  return true;
}

bool criterion1() {
  Polytope cube = Polytope::from_json_file(kData + "/cube.json");
  Polytope lshape = Polytope::from_json_file(kData + "/lshape.json");
  return partition_sound(cube, 0.1, 100000, 11) &&
         partition_sound(lshape, 0.1, 100000, 12);
}

// --- criterion 2: covering certificates, all 7 kinds, depth 4 vs 6 ----------
bool criterion2() {
  Polytope cube = Polytope::from_json_file(kData + "/cube.json");
  const RegionKind kinds[] = {RegionKind::v,  RegionKind::e,  RegionKind::f,
                              RegionKind::ve, RegionKind::vf, RegionKind::ef,
                              RegionKind::vef};
  for (RegionKind k : kinds) {
    NeighborhoodSpec spec = spec_for_kind(cube, k, 0.1);
    Covering c4 = cover(cube, spec, 0.25, 0.5, 4);
    Covering c6 = cover(cube, spec, 0.25, 0.5, 6);
    CoverageReport r4 = certify_coverage(cube, c4, 3000, CounterRng(21));
    CoverageReport r6 = certify_coverage(cube, c6, 3000, CounterRng(22));
    if (r4.misses != 0 || r6.misses != 0) return false;
    OverlapCertificate o4 = certify_overlap(cube, c4, 4000, CounterRng(33));
    OverlapCertificate o6 = certify_overlap(cube, c6, 4000, CounterRng(33));
    if (o4.N_emp != o6.N_emp) return false;
  }
  return true;
}

// --- criterion 3: weighted-norm oracle + Jacobi monomials -------------------
bool criterion3() {
  WeightSpec ws;
  ws.vertex = Vec3{0, 0, 0};
  ws.a_v = 1.0;
  QuadOptions q;
  q.tol = 1e-10;
  q.max_shells = 400;
  q.radial_order = 12;
  q.angular_order = 20;
  NormResult n = weighted_norm(ScalarField::constant(1.0),
                               Region::ball({0, 0, 0}, 1.0), ws, {}, {}, q);
  double exact = std::sqrt(4.0 * 3.14159265358979323846 / 5.0);
  if (std::abs(n.value - exact) > 1e-6) return false;
  for (double alpha : {-0.5, 0.0, 0.5}) {
    for (double Y : {0.5, 1.0, 2.0}) {
      JacobiRule rule = jacobi_rule(alpha, Y, 16);
      for (int k = 0; k <= 5; ++k) {
        double got = rule.integrate([k](double y) { return std::pow(y, k); });
        double ex = std::pow(Y, alpha + k + 1) / (alpha + k + 1);
        if (std::abs(got - ex) > 1e-12 * std::max(1.0, ex)) return false;
      }
    }
  }
  return true;
}

// --- criterion 4: frontier of the weighted growth table ---------------------
bool criterion4() {
  Polytope cube = Polytope::from_json_file(kData + "/cube.json");
  NeighborhoodSpec spec;
  spec.kind = RegionKind::f;
  spec.xi = 0.1;
  spec.face = cube.find_face({0, 0, -1});
  Frame fr = cube.frame_for(spec);
  FracPowerPoly u({0.5, 0.5, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1});
  u.add_term(1.0, 0, 0, 0, 0.5);  // dist-to-face^s with s = 0.5
  GrowthProfile g45 =
      growth_profile(u.as_field(), cube, spec, fr, 4, 0.45, 0.5, fast_opts());
  if (g45.table.empty() || g45.table[0].divergent || g45.violation) return false;
  if (!g45.stable) return false;  // fit at k=4 within 25% of fit at k=3
  GrowthProfile g55 =
      growth_profile(u.as_field(), cube, spec, fr, 0, 0.55, 0.5, fast_opts());
  return g55.table[0].divergent && g55.violation;
}

// --- criterion 5: DtN vs direct operator, and the closed-form profile -------
bool criterion5() {
  struct Bump { double c, w; };
  const Bump bumps[] = {{0, 1}, {0.2, 0.8}, {-0.3, 0.6}, {0.1, 1.2}, {0.4, 0.9}};
  for (const Bump& b : bumps) {
    ScalarField u = ScalarField::from_function([b](const Vec3& x) {
      double t = (x.x - b.c) / b.w;
      return std::exp(-t * t);
    });
    for (double s : {0.25, 0.5, 0.75}) {
      double direct = frac_laplacian_direct(u, {b.c, 0, 0}, 1, s);
      double via = dtn(u, {b.c, 0, 0}, 1, s);
      if (std::abs(via - direct) > 0.02 * std::abs(direct)) return false;
    }
  }
  ScalarField prof = ScalarField::from_function([](const Vec3& x) {
    return std::sqrt(std::max(0.0, 1.0 - x.x * x.x));
  });
  for (double x : {0.0, 0.3, -0.3}) {
    FracDirectOptions opt;
    opt.kinks = {std::abs(1.0 - x), std::abs(1.0 + x)};
    double got = frac_laplacian_direct(prof, {x, 0, 0}, 1, 0.5, opt);
    if (std::abs(got - 1.0) > 1e-2) return false;
  }
  return true;
}

// --- criterion 6: Galerkin solver validation --------------------------------
double solver_error_1d(int n, double s) {
  Mesh m = Mesh::interval(-1.0, 1.0, n);
  FracSolution u = solve_dirichlet(m, s, ScalarField::constant(1.0));
  double lam = std::pow(2.0, 2.0 * s) * gamma_fn(s + 0.5) * gamma_fn(s + 1.0) /
               std::sqrt(3.14159265358979323846);
  double worst = 0.0;
  for (size_t i = 0; i < m.nodes.size(); ++i) {
    double x = m.nodes[i].x;
    double ex = std::pow(std::max(0.0, 1.0 - x * x), s) / lam;
    worst = std::max(worst, std::abs(u.node_values[i] - ex));
  }
  return worst * lam;  // relative to the peak value 1/lam
}

bool criterion6() {
  double e32 = solver_error_1d(32, 0.5);
  double e64 = solver_error_1d(64, 0.5);
  double e128 = solver_error_1d(128, 0.5);
  if (!(e32 <= 0.10 && e64 < e32 && e128 < e64)) return false;

  Polytope cube = Polytope::from_json_file(kData + "/cube.json");
  Mesh m3 = Mesh::kuhn_cube({0, 0, 0}, {1, 1, 1}, 3);   // 162 tets
  Mesh m6 = Mesh::kuhn_cube({0, 0, 0}, {1, 1, 1}, 6);   // 1296 tets
  std::vector<double> A = assemble_stiffness(m3, 0.5, &cube);
  int n = m3.n_dofs;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::abs(A[i * n + j] - A[j * n + i]) > 1e-10) return false;
  FracSolution u3 = solve_dirichlet(m3, 0.5, ScalarField::constant(1.0), &cube);
  FracSolution u6 = solve_dirichlet(m6, 0.5, ScalarField::constant(1.0), &cube);
  for (double v : u3.node_values)
    if (v < -1e-12) return false;
  for (double v : u6.node_values)
    if (v < -1e-12) return false;
  Vec3 c{0.5, 0.5, 0.5};
  double v3 = u3.value(c), v6 = u6.value(c);
  return std::abs(v6 - v3) <= 0.25 * std::abs(v6);
}

// --- criterion 7: bounded-ratio inequality harness --------------------------
std::vector<RatioReport> ratio_suite() {
  QuadOptions q = fast_opts();
  BallSpec ball{CoveringElement::Shape::ball, {0, 0, 0}, 0.5};
  ManufacturedTriple flat = make_homogeneous_triple(0.5, 2, 9);
  ManufacturedTriple poly3 = make_polynomial_triple(0.5, 3, 11);
  ManufacturedTriple harm3 = make_harmonic_triple(0.5, 3);
  ManufacturedTriple harm5 = make_harmonic_triple(0.5, 5);

  std::vector<RatioReport> reps;
  reps.push_back(caccioppoli_ratio(flat, ball, 0.5, 0.2, 0.5, {1, 0, 0}, q));
  reps.push_back(high_order_caccioppoli(harm3, ball, {0, 1, 1}, q));    // p = 2
  reps.push_back(high_order_caccioppoli(harm5, ball, {0, 2, 2}, q));    // p = 4
  for (double t : {0.0, 0.25, 0.45})
    reps.push_back(shift_ratio(poly3, ball, t, {0, 0, 0}, 20000, q));
  YProfileField expf{[](const Vec3& x, double y) {
                       return std::exp(-y) * (1.0 + 0.1 * std::sin(x.x));
                     },
                     [](const Vec3& x, double y) {
                       return -std::exp(-y) * (1.0 + 0.1 * std::sin(x.x));
                     }};
  reps.push_back(trace_ratio(
      expf, {{0, 0, 0}, {0.5, 0, 0}, {-0.5, 0, 0}, {1, 0, 0}}, 1.0, 0.5));
  CutoffProfile eta = make_mollifier({0, 0, 0}, 0.1);
  reps.push_back(localization_ratio(eta, ScalarField::constant(1.0), {0, 0, 0},
                                    0.2, 0.5, 0.5, 20000, q));
  FracPowerPoly lin({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1});
  lin.add_term(1.0, 0, 0, 1);
  reps.push_back(hardy_ratio(lin.as_field(), 0.5, 0.3, 0.25, 0.5));
  return reps;
}

bool criterion7() {
  std::vector<RatioReport> a = ratio_suite();
  std::vector<RatioReport> b = ratio_suite();
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].verdict != "bounded") return false;
    if (a[i].to_json() != b[i].to_json()) return false;  // bit-identical rerun
  }
  return true;
}

// --- criterion 8: normalization constants -----------------------------------
bool criterion8() {
  const double pi = 3.14159265358979323846;
  return std::abs(C_ds(1, 0.5) - 1.0 / pi) <= 1e-12 &&
         std::abs(d_s_constant(0.5) - 1.0) <= 1e-12;
}

}  // namespace

int main() {
  struct Item {
    const char* name;
    bool (*fn)();
    double budget_s;  // 0 = no runtime limit
  };
  const Item items[] = {
      {"partition soundness (cube + L-prism, 1e5 samples each)", criterion1, 30},
      {"covering certificates (7 kinds, depth 4 vs 6)", criterion2, 120},
      {"weighted-norm oracle + Jacobi monomials", criterion3, 0},
      {"growth-table frontier (t = 0.45 vs 0.55, gamma fit)", criterion4, 300},
      {"DtN vs direct operator + closed-form profile", criterion5, 0},
      {"Galerkin solver validation (1-d chain, 3-d cube)", criterion6, 600},
      {"bounded-ratio inequality harness + determinism", criterion7, 0},
      {"normalization constants C(1,1/2), d_{1/2}", criterion8, 0},
  };
  int failures = 0, idx = 0;
  for (const Item& it : items) {
    ++idx;
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = it.fn();
    } catch (const std::exception& e) {
      std::printf("[%d] %s: FAIL (exception: %s)\n", idx, it.name, e.what());
      ++failures;
      continue;
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
    if (it.budget_s > 0 && dt > it.budget_s) ok = false;
    std::printf("[%d] %s: %s (%.1f s)\n", idx, it.name, ok ? "PASS" : "FAIL", dt);
    if (!ok) ++failures;
  }
  return failures;
}
