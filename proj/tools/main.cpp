// Batch front-end: load geometry, run partition / covering / norm / extension
// / solve / verification tasks, emit CSV + JSON artifacts and a manifest.
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "polyfrac/covering.hpp"
#include "polyfrac/extension.hpp"
#include "polyfrac/fracsolve.hpp"
#include "polyfrac/polytope.hpp"
#include "polyfrac/quadrature.hpp"
#include "polyfrac/rng.hpp"
#include "polyfrac/verify.hpp"

namespace fs = std::filesystem;
using namespace polyfrac;
using nlohmann::json;

namespace {

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

struct ArtifactWriter {
  fs::path dir;
  json manifest_files = json::array();

  explicit ArtifactWriter(const std::string& out) : dir(out) {
    fs::create_directories(dir);
  }

  void write(const std::string& name, const std::string& content) {
    fs::path p = dir / name;
    std::ofstream os(p, std::ios::binary);
    os << content;
    os.close();
    std::ostringstream hex;
    hex << std::hex << fnv1a(content);
    manifest_files.push_back(
        {{"name", name}, {"bytes", content.size()}, {"fnv1a64", hex.str()}});
  }

  void finish(const json& config, double wall_s) {
    json m;
    m["tool"] = "polyfrac";
    m["version"] = "0.1.0";
    m["config"] = config;
    m["wall_seconds"] = wall_s;
    m["artifacts"] = manifest_files;
    std::ofstream os(dir / "manifest.json", std::ios::binary);
    os << m.dump(2) << "\n";
  }
};

// RFC-4180: CRLF line endings, comma separated; numeric cells need no quoting
std::string csv_join(const std::vector<std::string>& cells) {
  std::string line;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ",";
    line += cells[i];
  }
  return line + "\r\n";
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

QuadOptions cli_quad_opts() {
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

int run_partition(const std::string& poly, double xi, int samples,
                  std::uint64_t seed, const std::string& out) {
  auto t0 = std::chrono::steady_clock::now();
  Polytope P = Polytope::from_json_file(poly);
  CounterRng rng(seed);
  Aabb box = P.bounding_box();
  std::map<std::string, long> counts;
  long unclassified = 0, kept = 0;
  while (kept < samples) {
    Vec3 x = rng.in_box(box);
    if (!P.contains(x)) continue;
    ++kept;
    std::vector<NeighborhoodSpec> hits = P.classify(x, xi);
    if (hits.empty()) ++unclassified;
    for (const NeighborhoodSpec& h : hits) counts[to_string(h.kind)]++;
  }
  ArtifactWriter w(out);
  std::string csv = csv_join({"kind", "count"});
  for (const auto& [k, v] : counts) csv += csv_join({k, std::to_string(v)});
  csv += csv_join({"unclassified", std::to_string(unclassified)});
  w.write("partition.csv", csv);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
  w.finish({{"task", "partition"},
            {"polytope", poly},
            {"xi", xi},
            {"samples", samples},
            {"seed", seed}},
           wall);
  return unclassified == 0 ? 0 : 2;
}

int run_cover(const std::string& poly, const std::string& kind_s, double xi,
              double c, double chat, int depth, std::uint64_t seed,
              const std::string& out) {
  auto t0 = std::chrono::steady_clock::now();
  Polytope P = Polytope::from_json_file(poly);
  RegionKind kind = region_kind_from_string(kind_s);
  NeighborhoodSpec spec = spec_for_kind(P, kind, xi);
  Covering cov = cover(P, spec, c, chat, depth);
  ArtifactWriter w(out);
  export_jsonl(cov, (w.dir / "covering.jsonl").string());
  {
    std::ifstream is(w.dir / "covering.jsonl", std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    w.write("covering.jsonl", ss.str());
  }
  OverlapCertificate oc = certify_overlap(P, cov, 4000, CounterRng(seed));
  CoverageReport cr = certify_coverage(P, cov, 4000, CounterRng(seed + 1));
  json rep{{"kind", kind_s},
           {"elements", cov.elements.size()},
           {"depth", depth},
           {"overlap_bound", oc.N_emp},
           {"coverage_fraction", cr.fraction()},
           {"misses", cr.misses}};
  w.write("certificates.json", rep.dump(2) + "\n");
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
  w.finish({{"task", "cover"}, {"polytope", poly}, {"kind", kind_s}, {"xi", xi},
            {"c", c}, {"chat", chat}, {"depth", depth}, {"seed", seed}},
           wall);
  return cr.misses == 0 ? 0 : 2;
}

int run_norms(const std::string& poly, const std::string& out) {
  auto t0 = std::chrono::steady_clock::now();
  Polytope P = Polytope::from_json_file(poly);
  Vec3 v0 = P.vertex(0);
  WeightSpec ws;
  ws.vertex = v0;
  ws.a_v = 1.0;
  NormResult n = weighted_norm(ScalarField::constant(1.0),
                               Region::ball(v0, 1.0), ws);
  ArtifactWriter w(out);
  std::string csv = csv_join({"quantity", "value", "error_estimate"});
  csv += csv_join({"rv_l2_unit_ball", fmt(n.value), fmt(n.error_estimate)});
  w.write("norms.csv", csv);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
  w.finish({{"task", "norms"}, {"polytope", poly}}, wall);
  return 0;
}

int run_extend(double s, const std::string& out) {
  auto t0 = std::chrono::steady_clock::now();
  ScalarField bump = ScalarField::from_function(
      [](const Vec3& x) { return std::exp(-x.x * x.x); });
  double via_dtn = dtn(bump, {0, 0, 0}, 1, s);
  double direct = frac_laplacian_direct(bump, {0, 0, 0}, 1, s);
  ArtifactWriter w(out);
  json rep{{"s", s},
           {"dtn", via_dtn},
           {"direct", direct},
           {"rel_diff", std::abs(via_dtn - direct) / std::abs(direct)}};
  w.write("extend.json", rep.dump(2) + "\n");
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
  w.finish({{"task", "extend"}, {"s", s}}, wall);
  return 0;
}

int run_solve(int n, double s, const std::string& out) {
  auto t0 = std::chrono::steady_clock::now();
  Mesh m = Mesh::interval(-1.0, 1.0, n);
  FracSolution u = solve_dirichlet(m, s, ScalarField::constant(1.0));
  double lam = std::pow(2.0, 2.0 * s) * gamma_fn(s + 0.5) * gamma_fn(s + 1.0) /
               std::sqrt(3.14159265358979323846);
  double worst = 0.0;
  std::string csv = csv_join({"x", "u_h", "u_exact"});
  for (size_t i = 0; i < m.nodes.size(); ++i) {
    double x = m.nodes[i].x;
    double ex = std::pow(std::max(0.0, 1.0 - x * x), s) / lam;
    csv += csv_join({fmt(x), fmt(u.node_values[i]), fmt(ex)});
    worst = std::max(worst, std::abs(u.node_values[i] - ex));
  }
  ArtifactWriter w(out);
  w.write("solution.csv", csv);
  json rep{{"n", n}, {"s", s}, {"energy", u.energy},
           {"nodal_max_error", worst},
           {"nodal_max_error_rel", worst * lam}};
  w.write("solve_summary.json", rep.dump(2) + "\n");
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
  w.finish({{"task", "solve"}, {"n", n}, {"s", s}}, wall);
  return 0;
}

int run_verify(double s, double t, std::uint64_t budget, const std::string& out) {
  auto t0 = std::chrono::steady_clock::now();
  QuadOptions q = cli_quad_opts();
  BallSpec ball{CoveringElement::Shape::ball, {0, 0, 0}, 0.5};
  ManufacturedTriple flat = make_homogeneous_triple(s, 2, 9);
  ManufacturedTriple poly3 = make_polynomial_triple(s, 3, 11);
  ManufacturedTriple harmonic = make_harmonic_triple(s, 3);

  std::vector<RatioReport> reps;
  reps.push_back(caccioppoli_ratio(flat, ball, 0.5, 0.2, 0.5, {1, 0, 0}, q));
  reps.push_back(high_order_caccioppoli(harmonic, ball, {0, 1, 1}, q));
  reps.push_back(shift_ratio(poly3, ball, t, {0, 0, 0}, budget, q));
  YProfileField expf{[](const Vec3& x, double y) {
                       return std::exp(-y) * (1.0 + 0.1 * std::sin(x.x));
                     },
                     [](const Vec3& x, double y) {
                       return -std::exp(-y) * (1.0 + 0.1 * std::sin(x.x));
                     }};
  reps.push_back(trace_ratio(
      expf, {{0, 0, 0}, {0.5, 0, 0}, {-0.5, 0, 0}, {1, 0, 0}}, 1.0, s));
  CutoffProfile eta = make_mollifier({0, 0, 0}, 0.1);
  reps.push_back(localization_ratio(eta, ScalarField::constant(1.0), {0, 0, 0},
                                    0.2, 0.5, s, budget, q));
  FracPowerPoly lin({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1});
  lin.add_term(1.0, 0, 0, 1);
  reps.push_back(hardy_ratio(lin.as_field(), 0.5, 0.3, t, s));

  ArtifactWriter w(out);
  json summary = json::array();
  bool inconclusive = false, failed = false;
  for (const RatioReport& r : reps) {
    w.write(r.id + ".csv", r.to_csv());
    w.write(r.id + ".json", r.to_json());
    summary.push_back({{"id", r.id}, {"verdict", r.verdict}, {"slope", r.slope}});
    if (r.verdict == "inconclusive") inconclusive = true;
    if (r.verdict == "unbounded") failed = true;
  }
  w.write("verdicts.json", summary.dump(2) + "\n");
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
  w.finish({{"task", "verify"}, {"s", s}, {"t", t}, {"budget", budget}}, wall);
  if (failed) return 1;
  return inconclusive ? 2 : 0;
}

int run_growth(const std::string& poly, int pmax, double t, double s,
               const std::string& out) {
  auto t0 = std::chrono::steady_clock::now();
  Polytope P = Polytope::from_json_file(poly);
  NeighborhoodSpec spec = spec_for_kind(P, RegionKind::f, 0.1);
  Frame fr = P.frame_for(spec);
  const Face& fc = P.face(spec.face);
  // model field r_f^s anchored at the face centroid
  Vec3 c0{0, 0, 0};
  for (int vi : fc.loop) c0 += P.vertex(vi);
  c0 = c0 / double(fc.loop.size());
  Vec3 inward = -fc.normal;
  Vec3 t1 = fr.g_par, t2 = fr.g_parperp;
  FracPowerPoly u(c0, t1, t2, inward);
  u.add_term(1.0, 0, 0, 0, s);
  GrowthProfile gp =
      growth_profile(u.as_field(), P, spec, fr, pmax, t, s, cli_quad_opts());
  ArtifactWriter w(out);
  w.write("growth.csv", gp.to_csv());
  w.write("growth.json", gp.to_json() + "\n");
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
  w.finish({{"task", "growth"}, {"polytope", poly}, {"pmax", pmax}, {"t", t},
            {"s", s}},
           wall);
  if (gp.violation) return 2;
  return gp.stable ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted-regularity toolkit for the fractional Laplacian"};
  app.set_config("--config");
  app.require_subcommand(1);

  std::string poly, out = "artifacts", kind = "v";
  double xi = 0.1, c = 0.25, chat = 0.5, s = 0.5, t = 0.25;
  int samples = 100000, depth = 4, n = 64, pmax = 3;
  std::uint64_t seed = 0, budget = 20000;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out, "output directory");
    cmd->add_option("--seed", seed, "root seed (counter-based streams)");
  };

  CLI::App* cp = app.add_subcommand("partition", "classification histogram");
  cp->add_option("--polytope", poly, "geometry JSON")->required();
  cp->add_option("--xi", xi, "neighborhood parameter")->check(CLI::PositiveNumber);
  cp->add_option("--samples", samples, "interior sample count");
  add_common(cp);

  CLI::App* cc = app.add_subcommand("cover", "covering + certificates");
  cc->add_option("--polytope", poly)->required();
  cc->add_option("--kind", kind, "neighborhood kind (v,e,f,ve,vf,ef,vef)");
  cc->add_option("--xi", xi)->check(CLI::PositiveNumber);
  cc->add_option("--c", c)->check(CLI::Range(0.0, 1.0));
  cc->add_option("--chat", chat)->check(CLI::Range(0.0, 1.0));
  cc->add_option("--depth", depth)->check(CLI::Range(2, 12));
  add_common(cc);

  CLI::App* cn = app.add_subcommand("norms", "weighted norm checkpoints");
  cn->add_option("--polytope", poly)->required();
  add_common(cn);

  CLI::App* ce = app.add_subcommand("extend", "dtn vs direct operator");
  ce->add_option("--s", s)->check(CLI::Range(0.01, 0.99));
  add_common(ce);

  CLI::App* cs = app.add_subcommand("solve", "1-d Galerkin solve, f = 1");
  cs->add_option("--n", n, "elements")->check(CLI::Range(2, 4096));
  cs->add_option("--s", s)->check(CLI::Range(0.01, 0.99));
  add_common(cs);

  CLI::App* cv = app.add_subcommand("verify", "bounded-ratio inequality suite");
  cv->add_option("--s", s)->check(CLI::Range(0.01, 0.99));
  cv->add_option("--t", t)->check(CLI::Range(0.0, 0.4999));
  cv->add_option("--budget", budget, "Monte-Carlo budget");
  add_common(cv);

  CLI::App* cg = app.add_subcommand("growth", "derivative growth table");
  cg->add_option("--polytope", poly)->required();
  cg->add_option("--pmax", pmax)->check(CLI::Range(0, 6));
  cg->add_option("--t", t, "may cross 1/2 to probe the frontier");
  cg->add_option("--s", s)->check(CLI::Range(0.01, 0.99));
  add_common(cg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cp->parsed()) return run_partition(poly, xi, samples, seed, out);
    if (cc->parsed()) return run_cover(poly, kind, xi, c, chat, depth, seed, out);
    if (cn->parsed()) return run_norms(poly, out);
    if (ce->parsed()) return run_extend(s, out);
    if (cs->parsed()) return run_solve(n, s, out);
    if (cv->parsed()) return run_verify(s, t, budget, out);
    if (cg->parsed()) return run_growth(poly, pmax, t, s, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
