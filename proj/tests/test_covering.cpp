#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "polyfrac/covering.hpp"

#include <cmath>
#include <string>
#include <vector>

using namespace polyfrac;

static std::string data_path(const char* name) {
  return std::string(POLYFRAC_DATA_DIR) + "/" + name;
}

static Polytope load_cube() { return Polytope::from_json_file(data_path("cube.json")); }

static NeighborhoodSpec cube_spec(const Polytope& P, RegionKind kind) {
  int v0 = P.find_vertex({0, 0, 0});
  int ex = P.find_edge({0, 0, 0}, {1, 0, 0});
  int fz = P.find_face({0, 0, -1});
  NeighborhoodSpec s;
  s.kind = kind;
  s.xi = 0.1;
  switch (kind) {
    case RegionKind::v: s.vertex = v0; break;
    case RegionKind::e: s.edge = ex; break;
    case RegionKind::f: s.face = fz; break;
    case RegionKind::ve: s.vertex = v0; s.edge = ex; break;
    case RegionKind::vf: s.vertex = v0; s.face = fz; break;
    case RegionKind::ef: s.edge = ex; s.face = fz; break;
    case RegionKind::vef: s.vertex = v0; s.edge = ex; s.face = fz; break;
    default: break;
  }
  return s;
}

TEST_CASE("vertex covering on the cube: construction rule") {
  Polytope P = load_cube();
  NeighborhoodSpec spec = cube_spec(P, RegionKind::v);
  Covering cov = cover(P, spec, 0.25, 0.5, 4);
  CHECK(cov.elements.size() > 0);
  for (const auto& el : cov.elements) {
    CHECK(el.shape == CoveringElement::Shape::ball);
    double d = P.dist_vertex(spec.vertex, el.center);
    CHECK(el.R == doctest::Approx(0.25 * d).epsilon(1e-12));
    CHECK(P.contains(el.center));
  }
}

TEST_CASE("half-ball covering for the edge-face neighborhood") {
  Polytope P = load_cube();
  NeighborhoodSpec spec = cube_spec(P, RegionKind::ef);
  Covering cov = cover(P, spec, 0.25, 0.5, 4);
  CHECK(cov.elements.size() > 0);
  for (const auto& el : cov.elements) {
    CHECK(el.shape == CoveringElement::Shape::half_ball);
    // center on the face, and only that face within the inflated radius
    CHECK(P.dist_face(spec.face, el.center) <= 1e-9);
    double d = P.dist_edge(spec.edge, el.center);
    CHECK(el.R == doctest::Approx(0.25 * d).epsilon(1e-12));
    int close_faces = 0;
    for (int g = 0; g < P.num_faces(); ++g)
      if (P.dist_face(g, el.center) < el.chat_radius()) ++close_faces;
    CHECK(close_faces == 1);
  }
}

TEST_CASE("wedge covering centers sit on the edge") {
  Polytope P = load_cube();
  for (RegionKind kind : {RegionKind::ve, RegionKind::vef}) {
    NeighborhoodSpec spec = cube_spec(P, kind);
    Covering cov = cover(P, spec, 0.25, 0.5, 4);
    CHECK(cov.elements.size() > 0);
    for (const auto& el : cov.elements) {
      CHECK(el.shape == CoveringElement::Shape::wedge);
      CHECK(P.dist_edge(spec.edge, el.center) <= 1e-9);
      // both faces at the edge pass through the center's edge
      for (int f : P.faces_of_edge(spec.edge))
        CHECK(P.dist_face(f, el.center) <= 1e-9);
    }
  }
}

TEST_CASE("coverage certificates for all seven kinds on the cube") {
  Polytope P = load_cube();
  CounterRng rng(31u);
  for (RegionKind kind : {RegionKind::v, RegionKind::e, RegionKind::f, RegionKind::ve,
                          RegionKind::vf, RegionKind::ef, RegionKind::vef}) {
    CAPTURE((int)kind);
    NeighborhoodSpec spec = cube_spec(P, kind);
    Covering cov = cover(P, spec, 0.25, 0.5, 4);
    CoverageReport rep = certify_coverage(P, cov, 4000, rng);
    CHECK(rep.misses == 0);
    CHECK(rep.C_B < 50.0);
  }
}

TEST_CASE("coverage on the L-shaped prism") {
  Polytope P = Polytope::from_json_file(data_path("lshape.json"));
  CounterRng rng(32u);
  // vertex at the re-entrant corner and one convex corner
  for (Vec3 vpos : {Vec3{1, 1, 0}, Vec3{0, 0, 0}}) {
    NeighborhoodSpec spec;
    spec.kind = RegionKind::v;
    spec.xi = 0.05;
    spec.vertex = P.find_vertex(vpos);
    Covering cov = cover(P, spec, 0.25, 0.5, 4);
    CoverageReport rep = certify_coverage(P, cov, 3000, rng);
    CHECK(rep.misses == 0);
  }
}

TEST_CASE("overlap certificate basics") {
  Polytope P = load_cube();
  NeighborhoodSpec spec = cube_spec(P, RegionKind::v);
  Covering cov = cover(P, spec, 0.25, 0.5, 4);

  Covering single = cov;
  single.elements.resize(1);
  // for a one-element family no point lies in two inflated balls
  CounterRng rng(33u);
  OverlapCertificate c1 = certify_overlap(P, single, 2000, rng);
  CHECK(c1.N_emp <= 1);

  OverlapCertificate full = certify_overlap(P, cov, 4000, rng);
  CHECK(full.N_emp >= 1);
  std::uint64_t total = 0;
  for (auto h : full.histogram) total += h;
  CHECK(total == full.samples);
}

TEST_CASE("overlap bound is stable under refinement") {
  Polytope P = load_cube();
  CounterRng rng(34u);
  for (RegionKind kind : {RegionKind::v, RegionKind::ef, RegionKind::vef}) {
    CAPTURE((int)kind);
    NeighborhoodSpec spec = cube_spec(P, kind);
    Covering c4 = cover(P, spec, 0.25, 0.5, 4);
    Covering c6 = refine_toward_feature(P, c4, 2);
    CHECK(c6.elements.size() > c4.elements.size());
    OverlapCertificate o4 = certify_overlap(P, c4, 4000, rng);
    OverlapCertificate o6 = certify_overlap(P, c6, 4000, rng);
    CHECK(o4.N_emp == o6.N_emp);
  }
}

TEST_CASE("generation radii halve") {
  Polytope P = load_cube();
  NeighborhoodSpec spec = cube_spec(P, RegionKind::v);
  Covering cov = cover(P, spec, 0.25, 0.5, 5);
  std::vector<std::vector<double>> by_gen(5);
  for (const auto& el : cov.elements) by_gen[el.generation].push_back(el.R);
  for (auto& g : by_gen) {
    REQUIRE(!g.empty());
    std::sort(g.begin(), g.end());
  }
  for (int k = 0; k + 1 < 5; ++k) {
    double m0 = by_gen[k][by_gen[k].size() / 2];
    double m1 = by_gen[k + 1][by_gen[k + 1].size() / 2];
    double ratio = m1 / m0;
    CHECK(ratio > 0.4);
    CHECK(ratio < 0.6);
  }
}

TEST_CASE("refinement preserves previous coverage and construction") {
  Polytope P = load_cube();
  NeighborhoodSpec spec = cube_spec(P, RegionKind::v);
  Covering c4 = cover(P, spec, 0.25, 0.5, 4);
  Covering c6 = refine_toward_feature(P, c4, 2);
  // old elements are a prefix of the refined family
  for (std::size_t i = 0; i < c4.elements.size(); ++i) {
    CHECK(norm(c6.elements[i].center - c4.elements[i].center) == 0.0);
    CHECK(c6.elements[i].R == c4.elements[i].R);
  }
  CHECK(c6.trunc_dist < c4.trunc_dist);
}

TEST_CASE("bad scale pair rejected") {
  Polytope P = load_cube();
  NeighborhoodSpec spec = cube_spec(P, RegionKind::v);
  CHECK_THROWS_AS(cover(P, spec, 0.5, 0.25, 3), GeometryError);
  CHECK_THROWS_AS(cover(P, spec, 0.25, 1.5, 3), GeometryError);
}

TEST_CASE("jsonl export") {
  Polytope P = load_cube();
  NeighborhoodSpec spec = cube_spec(P, RegionKind::vef);
  Covering cov = cover(P, spec, 0.25, 0.5, 3);
  std::string path = "/tmp/cov_test.jsonl";
  export_jsonl(cov, path);
  std::ifstream is(path);
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    if (!line.empty()) {
      CHECK(line.find("\"shape\"") != std::string::npos);
      ++n;
    }
  }
  CHECK(n == cov.elements.size());
}
