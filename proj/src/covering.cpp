#include "polyfrac/covering.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

namespace polyfrac {

namespace {

bool is_vertex_graded(RegionKind k) {
  return k == RegionKind::v || k == RegionKind::ve || k == RegionKind::vf ||
         k == RegionKind::vef;
}

double kind_scale(RegionKind k, double xi, double diam) {
  switch (k) {
    case RegionKind::v:
    case RegionKind::ve:
    case RegionKind::vf:
    case RegionKind::vef:
      return xi * diam;
    case RegionKind::e:
    case RegionKind::ef:
      return xi * xi * diam;
    case RegionKind::f:
      return xi * xi * xi * diam;
    default:
      return diam;
  }
}

double window_kappa_for(RegionKind k) {
  return (k == RegionKind::e || k == RegionKind::ef || k == RegionKind::f) ? 2.0 : 0.0;
}

// Anchor of the self-similar structure: the point on the singular feature
// that deep generations contract toward.  Also the apex of the lateral
// window for the translation-invariant kinds.
Vec3 anchor_for(const Polytope& P, const NeighborhoodSpec& spec) {
  if (is_vertex_graded(spec.kind)) return P.vertex(spec.vertex);
  if (spec.kind == RegionKind::e || spec.kind == RegionKind::ef) {
    const Edge& E = P.edge(spec.edge);
    return 0.5 * (P.vertex(E.v0) + P.vertex(E.v1));
  }
  if (spec.kind == RegionKind::f) {
    // area centroid (vertex averages can fall outside non-convex faces)
    const Face& F = P.face(spec.face);
    Vec3 c{0, 0, 0};
    double area = 0.0;
    for (const auto& tri : F.tris) {
      Vec3 a = P.vertex(tri[0]), b = P.vertex(tri[1]), d = P.vertex(tri[2]);
      double A = 0.5 * norm(cross(b - a, d - a));
      c += A / 3.0 * (a + b + d);
      area += A;
    }
    return c / area;
  }
  throw GeometryError("no covering construction for the interior region");
}

// offset along the singular feature, measured from the window base
double lateral_offset(const Polytope& P, const NeighborhoodSpec& spec, const Vec3& x,
                      const Vec3& base) {
  if (spec.kind == RegionKind::e || spec.kind == RegionKind::ef)
    return std::abs(dot(x - base, P.edge(spec.edge).dir));
  if (spec.kind == RegionKind::f) {
    Vec3 n = P.face(spec.face).normal;
    Vec3 y = x - base;
    return norm(y - dot(y, n) * n);
  }
  return 0.0;
}

CoveringElement::Shape shape_for(RegionKind k) {
  switch (k) {
    case RegionKind::v:
    case RegionKind::e:
    case RegionKind::f:
      return CoveringElement::Shape::ball;
    case RegionKind::ef:
    case RegionKind::vf:
      return CoveringElement::Shape::half_ball;
    case RegionKind::ve:
    case RegionKind::vef:
      return CoveringElement::Shape::wedge;
    default:
      throw GeometryError("no covering construction for the interior region");
  }
}

bool spec_member(const Polytope& P, const NeighborhoodSpec& spec, const Vec3& x) {
  if (!P.contains(x)) return false;
  for (const auto& got : P.classify(x, spec.xi))
    if (got == spec) return true;
  return false;
}

void face_basis(const Polytope& P, int f, Vec3& u1, Vec3& u2, Vec3& inward) {
  const Face& F = P.face(f);
  u1 = normalized(P.vertex(F.loop[1]) - P.vertex(F.loop[0]));
  u2 = cross(F.normal, u1);
  inward = -F.normal;
}

Vec3 edge_dir_from(const Polytope& P, int e, int v) {
  const Edge& E = P.edge(e);
  return E.v0 == v ? E.dir : -E.dir;
}

// One proposal point adapted to the kind at length scale `hi`; for the
// windowed kinds the lateral extent is kappa*hi about `base`.  Every draw is
// proportional to hi, so the proposal cloud is exactly self-similar in the
// scale.
Vec3 propose_point(const Polytope& P, const NeighborhoodSpec& spec, double hi,
                   const Vec3& base, double kappa, CounterRng& rng) {
  const double xi = spec.xi;
  const double pad = 1.1;
  switch (spec.kind) {
    case RegionKind::v: {
      Vec3 v = P.vertex(spec.vertex);
      return v + pad * hi *
                 Vec3{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    }
    case RegionKind::ve:
    case RegionKind::vef: {
      // thin tube: transverse extent shrinks linearly with the axial position
      Vec3 v = P.vertex(spec.vertex);
      Vec3 d = edge_dir_from(P, spec.edge, spec.vertex);
      Vec3 u1 = any_orthogonal(d), u2 = cross(d, u1);
      double t = rng.uniform(0, pad) * hi;
      double rho = pad * xi * t * std::sqrt(rng.uniform());
      double th = 6.283185307179586 * rng.uniform();
      return v + t * d + rho * (std::cos(th) * u1 + std::sin(th) * u2);
    }
    case RegionKind::vf: {
      // thin slab: admissible height shrinks linearly with in-plane distance
      Vec3 v = P.vertex(spec.vertex);
      Vec3 u1, u2, inward;
      face_basis(P, spec.face, u1, u2, inward);
      Vec3 ip = pad * hi * (rng.uniform(-1, 1) * u1 + rng.uniform(-1, 1) * u2);
      return v + ip + pad * xi * norm(ip) * rng.uniform(0, 1) * inward;
    }
    case RegionKind::e: {
      const Edge& E = P.edge(spec.edge);
      Vec3 u1 = any_orthogonal(E.dir), u2 = cross(E.dir, u1);
      return base + pad * kappa * hi * rng.uniform(-1, 1) * E.dir +
             pad * hi * (rng.uniform(-1, 1) * u1 + rng.uniform(-1, 1) * u2);
    }
    case RegionKind::ef: {
      const Edge& E = P.edge(spec.edge);
      Vec3 w = cross(P.face(spec.face).normal, E.dir);
      Vec3 u1, u2, inward;
      face_basis(P, spec.face, u1, u2, inward);
      return base + pad * kappa * hi * rng.uniform(-1, 1) * E.dir +
             pad * hi * rng.uniform(-1, 1) * w +
             pad * xi * hi * rng.uniform(0, 1) * inward;
    }
    case RegionKind::f: {
      Vec3 u1, u2, inward;
      face_basis(P, spec.face, u1, u2, inward);
      return base +
             pad * kappa * hi * (rng.uniform(-1, 1) * u1 + rng.uniform(-1, 1) * u2) +
             pad * hi * rng.uniform(0, 1) * inward;
    }
    default:
      return rng.in_box(P.bounding_box());
  }
}

}  // namespace

int grading_feature_dim(RegionKind kind) {
  if (is_vertex_graded(kind)) return 0;
  if (kind == RegionKind::e || kind == RegionKind::ef) return 1;
  if (kind == RegionKind::f) return 2;
  return -1;
}

double feature_distance(const Polytope& P, const NeighborhoodSpec& spec, const Vec3& x) {
  switch (grading_feature_dim(spec.kind)) {
    case 0:
      return P.dist_vertex(spec.vertex, x);
    case 1:
      return P.dist_edge(spec.edge, x);
    case 2:
      return P.dist_face(spec.face, x);
    default:
      throw GeometryError("interior region has no singular feature");
  }
}

bool region_trace_contains(const Polytope& P, const NeighborhoodSpec& spec,
                           const Vec3& x) {
  if (!P.on_closure(x, 1e-9)) return false;
  FeatureDistances d = P.dist_features(x);
  const double diam = P.diameter(), xi = spec.xi;
  auto nd = [&](double r) { return r / diam; };
  switch (spec.kind) {
    case RegionKind::ef: {
      if (nd(d.r_e[spec.edge]) >= xi * xi) return false;
      for (int v : P.vertices_of_edge(spec.edge))
        if (nd(d.r_v[v]) < xi) return false;
      return true;
    }
    case RegionKind::vf: {
      if (nd(d.r_v[spec.vertex]) >= xi) return false;
      for (int e : P.edges_at_vertex(spec.vertex))
        if (d.r_v[spec.vertex] > 0.0 && d.r_e[e] / d.r_v[spec.vertex] < xi) return false;
      return true;
    }
    case RegionKind::ve:
    case RegionKind::vef:
      return nd(d.r_v[spec.vertex]) < xi;
    default:
      return spec_member(P, spec, x);
  }
}

bool covered_region_contains(const Polytope& P, const Covering& cov, const Vec3& x) {
  if (!spec_member(P, cov.target, x)) return false;
  double d = feature_distance(P, cov.target, x);
  if (d < cov.trunc_dist) return false;
  if (cov.window_kappa > 0.0 &&
      lateral_offset(P, cov.target, x, cov.window_base) > cov.window_kappa * d)
    return false;
  return true;
}

Vec3 sample_region_point(const Polytope& P, const NeighborhoodSpec& spec, double trunc,
                         CounterRng& rng) {
  const double D0 = kind_scale(spec.kind, spec.xi, P.diameter());
  Vec3 base = anchor_for(P, spec);
  double kappa = window_kappa_for(spec.kind);
  for (int tries = 0; tries < 400000; ++tries) {
    Vec3 x = propose_point(P, spec, D0, base, kappa > 0 ? kappa : 1.0, rng);
    double d = feature_distance(P, spec, x);  // cheap checks before classification
    if (d < trunc) continue;
    if (kappa > 0.0 && lateral_offset(P, spec, x, base) > kappa * d) continue;
    if (!spec_member(P, spec, x)) continue;
    return x;
  }
  throw GeometryError("sample_region_point: rejection sampling failed");
}

namespace {

// sample a point of the covered set restricted to one dyadic shell
Vec3 sample_shell(const Polytope& P, const NeighborhoodSpec& spec, double lo, double hi,
                  const Vec3& base, double kappa, CounterRng& rng) {
  for (int tries = 0; tries < 400000; ++tries) {
    Vec3 x = propose_point(P, spec, hi, base, kappa > 0 ? kappa : 1.0, rng);
    double d = feature_distance(P, spec, x);  // cheap checks before classification
    if (d < lo || d > hi) continue;
    if (kappa > 0.0 && lateral_offset(P, spec, x, base) > kappa * d) continue;
    if (!spec_member(P, spec, x)) continue;
    return x;
  }
  throw GeometryError("covering certificate: rejection sampling failed");
}

// spatial hash over points/balls
struct SpatialHash {
  double cell = 1.0;
  std::unordered_map<std::uint64_t, std::vector<int>> cells;

  static std::uint64_t key(long long i, long long j, long long k) {
    return CounterRng::mix(std::uint64_t(i) * 0x9E3779B1u +
                           std::uint64_t(j) * 0x85EBCA77u +
                           std::uint64_t(k) * 0xC2B2AE3Du + 0x12345u);
  }
  void insert(const Vec3& p, double r, int idx) {
    long long i0 = (long long)std::floor((p.x - r) / cell),
              i1 = (long long)std::floor((p.x + r) / cell);
    long long j0 = (long long)std::floor((p.y - r) / cell),
              j1 = (long long)std::floor((p.y + r) / cell);
    long long k0 = (long long)std::floor((p.z - r) / cell),
              k1 = (long long)std::floor((p.z + r) / cell);
    for (long long i = i0; i <= i1; ++i)
      for (long long j = j0; j <= j1; ++j)
        for (long long k = k0; k <= k1; ++k) cells[key(i, j, k)].push_back(idx);
  }
  const std::vector<int>* query(const Vec3& p) const {
    auto it = cells.find(key((long long)std::floor(p.x / cell),
                             (long long)std::floor(p.y / cell),
                             (long long)std::floor(p.z / cell)));
    return it == cells.end() ? nullptr : &it->second;
  }
};

// Half-balls/wedges: the inflated ball may only meet boundary faces that pass
// through the element's own local model (the carrier face and faces through
// the graded feature); anything else means (c, chat) is inadmissible.
void check_admissible(const Polytope& P, const NeighborhoodSpec& spec,
                      const CoveringElement& el) {
  double d = el.R / el.c;
  if (el.shape == CoveringElement::Shape::half_ball) {
    for (int g = 0; g < P.num_faces(); ++g) {
      if (g == spec.face) continue;
      if (spec.kind == RegionKind::ef) {
        const auto& fe = P.faces_of_edge(spec.edge);
        if (std::find(fe.begin(), fe.end(), g) != fe.end()) continue;
      } else {  // vf
        const auto& fv = P.faces_at_vertex(spec.vertex);
        if (std::find(fv.begin(), fv.end(), g) != fv.end()) continue;
      }
      if (P.dist_face(g, el.center) < el.chat * d - 1e-12)
        throw GeometryError("inadmissible (c, chat): half-ball hits a second feature");
    }
  } else if (el.shape == CoveringElement::Shape::wedge) {
    const auto& fv = P.faces_at_vertex(spec.vertex);
    const auto& fe = P.faces_of_edge(spec.edge);
    for (int g = 0; g < P.num_faces(); ++g) {
      if (std::find(fe.begin(), fe.end(), g) != fe.end()) continue;
      if (std::find(fv.begin(), fv.end(), g) != fv.end()) continue;
      if (P.dist_face(g, el.center) < el.chat * d - 1e-12)
        throw GeometryError("inadmissible (c, chat): wedge hits a third face");
    }
  }
}

CoveringElement make_element(const Polytope& P, const NeighborhoodSpec& spec, double c,
                             double chat, int gen, const Vec3& x) {
  CoveringElement el;
  el.shape = shape_for(spec.kind);
  el.center = x;
  el.c = c;
  el.chat = chat;
  el.generation = gen;
  double d = feature_distance(P, spec, x);
  el.R = c * d;
  el.inflated_inside = el.shape == CoveringElement::Shape::ball &&
                       P.dist_boundary(x) >= chat * d - 1e-12;
  check_admissible(P, spec, el);
  return el;
}

// carrier-adapted candidate centers with pairwise spacing >= `spacing`
std::vector<Vec3> net_candidates(const Polytope& P, const NeighborhoodSpec& spec,
                                 double lo, double hi, const Vec3& base, double kappa,
                                 double spacing, CounterRng& rng) {
  std::vector<Vec3> kept;
  SpatialHash h;
  h.cell = spacing;
  auto try_keep = [&](const Vec3& x) {
    long long i = (long long)std::floor(x.x / spacing);
    long long j = (long long)std::floor(x.y / spacing);
    long long k = (long long)std::floor(x.z / spacing);
    for (long long a = i - 1; a <= i + 1; ++a)
      for (long long b = j - 1; b <= j + 1; ++b)
        for (long long cc = k - 1; cc <= k + 1; ++cc) {
          auto it = h.cells.find(SpatialHash::key(a, b, cc));
          if (it == h.cells.end()) continue;
          for (int idx : it->second)
            if (norm(x - kept[idx]) < spacing) return;
        }
    kept.push_back(x);
    h.cells[SpatialHash::key(i, j, k)].push_back((int)kept.size() - 1);
  };

  CoveringElement::Shape shape = shape_for(spec.kind);
  if (shape == CoveringElement::Shape::wedge) {
    // centers on the edge, distance to the vertex in [lo, hi]
    Vec3 v = P.vertex(spec.vertex);
    Vec3 d = edge_dir_from(P, spec.edge, spec.vertex);
    const int M = 600;
    for (int i = 0; i < M; ++i) {
      double t = lo + (hi - lo) * (i + 0.5) / M;
      Vec3 x = v + t * d;
      if (region_trace_contains(P, spec, x)) try_keep(x);
    }
    return kept;
  }
  if (shape == CoveringElement::Shape::half_ball) {
    Vec3 u1, u2, inward;
    face_basis(P, spec.face, u1, u2, inward);
    const int M = 12000;
    if (spec.kind == RegionKind::vf) {
      Vec3 v = P.vertex(spec.vertex);
      for (int i = 0; i < M; ++i) {
        Vec3 x = v + hi * (rng.uniform(-1, 1) * u1 + rng.uniform(-1, 1) * u2);
        double dist = norm(x - v);
        if (dist < lo || dist > hi) continue;
        if (region_trace_contains(P, spec, x)) try_keep(x);
      }
    } else {  // ef: centers on f graded toward e, axial window about the base
      const Edge& E = P.edge(spec.edge);
      Vec3 w = cross(P.face(spec.face).normal, E.dir);
      for (int i = 0; i < M; ++i) {
        Vec3 axial = base + 1.1 * kappa * hi * rng.uniform(-1, 1) * E.dir;
        double sgn = rng.uniform() < 0.5 ? 1.0 : -1.0;
        Vec3 x = axial + sgn * rng.uniform(lo, hi) * w;
        double dist = P.dist_edge(spec.edge, x);
        if (dist < lo || dist > hi) continue;
        if (lateral_offset(P, spec, x, base) > 1.1 * kappa * dist) continue;
        if (region_trace_contains(P, spec, x)) try_keep(x);
      }
    }
    return kept;
  }
  // ball kinds: interior centers, proposals scaled to the shell
  const int M = 40000;
  int accepted = 0;
  for (int i = 0; i < 30 * M && accepted < M; ++i) {
    Vec3 x = propose_point(P, spec, hi, base, kappa > 0 ? kappa : 1.0, rng);
    double dist = feature_distance(P, spec, x);  // cheap checks first
    if (dist < lo || dist > hi) continue;
    if (kappa > 0.0 && lateral_offset(P, spec, x, base) > 1.05 * kappa * dist) continue;
    if (!spec_member(P, spec, x)) continue;
    ++accepted;
    try_keep(x);
  }
  return kept;
}

// snap an interior miss onto the carrier of a lower-dimensional element
Vec3 snap_to_carrier(const Polytope& P, const NeighborhoodSpec& spec, const Vec3& x) {
  CoveringElement::Shape shape = shape_for(spec.kind);
  if (shape == CoveringElement::Shape::half_ball) {
    const Face& F = P.face(spec.face);
    return x - (dot(x, F.normal) - F.offset) * F.normal;
  }
  if (shape == CoveringElement::Shape::wedge) {
    const Edge& E = P.edge(spec.edge);
    Vec3 a = P.vertex(E.v0);
    double len = norm(P.vertex(E.v1) - a);
    double t = std::clamp(dot(x - a, E.dir), 0.0, len);
    return a + t * E.dir;
  }
  return x;
}

// Build one generation: greedy net over carrier candidates, then patch any
// empirically uncovered shell point with an element snapped onto the carrier.
// Only generations 0 and 1 are built this way; deeper ones are scaled copies
// of generation 1.
std::vector<CoveringElement> build_generation(const Polytope& P,
                                              const NeighborhoodSpec& spec, double c,
                                              double chat, int k, double D0,
                                              const Vec3& base, double kappa) {
  double hi = D0 * std::pow(0.5, k), lo = hi / 2.0;
  double spacing = 0.5 * c * lo;
  CounterRng rng = CounterRng(0xC0FFEEu).substream(1000 * (int)spec.kind);
  std::vector<CoveringElement> gen;
  for (const Vec3& x : net_candidates(P, spec, lo, hi, base, kappa, spacing, rng))
    gen.push_back(make_element(P, spec, c, chat, k, x));
  if (gen.empty())
    throw GeometryError("cover: construction produced no elements in a shell");

  // repair loop: the generation must cover its own shell
  SpatialHash h;
  h.cell = hi;
  for (int i = 0; i < (int)gen.size(); ++i) h.insert(gen[i].center, gen[i].R, i);
  auto covered = [&](const Vec3& x) {
    const std::vector<int>* lst = h.query(x);
    if (!lst) return false;
    for (int i : *lst)
      if (norm(x - gen[i].center) < gen[i].R) return true;
    return false;
  };
  const int rounds_max = 40, per_round = 30000;
  bool clean = false;
  for (int round = 0; round < rounds_max && !clean; ++round) {
    CounterRng rr = CounterRng(0xBEEFu).substream(1000 * (int)spec.kind + round);
    clean = true;
    for (int sNo = 0; sNo < per_round; ++sNo) {
      Vec3 x = sample_shell(P, spec, lo, hi, base, kappa, rr);
      if (covered(x)) continue;
      clean = false;
      Vec3 y = snap_to_carrier(P, spec, x);
      gen.push_back(make_element(P, spec, c, chat, k, y));
      h.insert(gen.back().center, gen.back().R, (int)gen.size() - 1);
      if (!covered(x))
        throw GeometryError("cover: repair element does not reach its target point");
    }
  }
  if (!clean) throw GeometryError("cover: shell repair did not converge");
  return gen;
}

CoveringElement scaled_copy(const Polytope& P, const NeighborhoodSpec& spec,
                            const CoveringElement& el, const Vec3& anchor, double f,
                            int gen) {
  CoveringElement out = el;
  out.center = anchor + f * (el.center - anchor);
  out.R = f * el.R;
  out.generation = gen;
  double d = out.R / out.c;
  out.inflated_inside = out.shape == CoveringElement::Shape::ball &&
                        P.dist_boundary(out.center) >= out.chat * d - 1e-12;
  check_admissible(P, spec, out);
  return out;
}

std::vector<SpatialHash> hash_elements(const Covering& cov, bool inflated) {
  int maxgen = 0;
  for (const auto& el : cov.elements) maxgen = std::max(maxgen, el.generation);
  std::vector<SpatialHash> h(maxgen + 1);
  for (int g = 0; g <= maxgen; ++g)
    h[g].cell = std::max(cov.grading_scale * std::pow(0.5, g), 1e-12);
  for (int i = 0; i < (int)cov.elements.size(); ++i) {
    const auto& el = cov.elements[i];
    double r = inflated ? el.chat_radius() : el.R;
    h[el.generation].insert(el.center, r, i);
  }
  return h;
}

// Certificate sampling schedule: block b contributes one sample in each of
// four depth-independent slots — the outermost shell, the first interior
// shell, a rotating deep interior shell, and the innermost shell.  Random
// draws depend on (b, slot) only, never on the depth, and deep shells are
// scaled copies of each other, so certificates at different depths probe
// identical scaled point patterns and report the same extremes.
int slot_generation(int b, int slot, int depth) {
  switch (slot) {
    case 0:
      return 0;
    case 1:
      return std::min(1, depth - 1);
    case 2:
      return depth >= 4 ? 2 + (b % (depth - 3)) : depth - 1;
    default:
      return depth - 1;
  }
}

Vec3 certificate_sample(const Polytope& P, const Covering& cov, int b, int slot,
                        const CounterRng& base_rng) {
  int gen = slot_generation(b, slot, cov.depth);
  double hi = cov.grading_scale * std::pow(0.5, gen);
  CounterRng rg = base_rng.substream(std::uint64_t(b) * 8 + slot);
  return sample_shell(P, cov.target, hi / 2.0, hi, cov.window_base, cov.window_kappa,
                      rg);
}

}  // namespace

Covering cover(const Polytope& P, const NeighborhoodSpec& spec, double c, double chat,
               int depth) {
  if (!(0.0 < c && c < chat && chat < 1.0))
    throw GeometryError("cover: need 0 < c < chat < 1");
  if (spec.xi > P.max_admissible_xi())
    throw GeometryError("cover: xi too large for this polytope");
  if (depth < 2) throw GeometryError("cover: depth must be at least 2");
  Covering cov;
  cov.target = spec;
  cov.c = c;
  cov.chat = chat;
  cov.depth = depth;
  cov.grading_scale = kind_scale(spec.kind, spec.xi, P.diameter());
  cov.trunc_dist = cov.grading_scale * std::pow(0.5, depth);
  cov.window_base = anchor_for(P, spec);
  cov.window_kappa = window_kappa_for(spec.kind);

  std::vector<CoveringElement> gen1;
  for (int k = 0; k <= 1; ++k)
    for (const auto& el : build_generation(P, spec, c, chat, k, cov.grading_scale,
                                           cov.window_base, cov.window_kappa)) {
      cov.elements.push_back(el);
      if (k == 1) gen1.push_back(el);
    }
  for (int k = 2; k < depth; ++k) {
    double f = std::pow(0.5, k - 1);
    for (const auto& el : gen1)
      cov.elements.push_back(scaled_copy(P, spec, el, cov.window_base, f, k));
  }
  return cov;
}

Covering refine_toward_feature(const Polytope& P, const Covering& cov, int extra_depth) {
  Covering out = cov;
  std::vector<CoveringElement> gen1;
  for (const auto& el : cov.elements)
    if (el.generation == 1) gen1.push_back(el);
  for (int k = cov.depth; k < cov.depth + extra_depth; ++k) {
    double f = std::pow(0.5, k - 1);
    for (const auto& el : gen1)
      out.elements.push_back(scaled_copy(P, cov.target, el, cov.window_base, f, k));
  }
  out.depth = cov.depth + extra_depth;
  out.trunc_dist = cov.grading_scale * std::pow(0.5, out.depth);
  return out;
}

OverlapCertificate certify_overlap(const Polytope& P, const Covering& cov,
                                   std::uint64_t samples, const CounterRng& rng) {
  std::vector<SpatialHash> hash = hash_elements(cov, /*inflated=*/true);
  OverlapCertificate cert;
  CounterRng r = rng.substream(7001);
  std::uint64_t blocks = std::max<std::uint64_t>(1, samples / 4);
  cert.samples = 4 * blocks;
  for (std::uint64_t b = 0; b < blocks; ++b)
    for (int slot = 0; slot < 4; ++slot) {
      Vec3 x = certificate_sample(P, cov, (int)b, slot, r);
      int count = 0;
      for (const auto& gh : hash) {
        const std::vector<int>* lst = gh.query(x);
        if (!lst) continue;
        for (int i : *lst)
          if (norm(x - cov.elements[i].center) < cov.elements[i].chat_radius()) ++count;
      }
      if ((int)cert.histogram.size() <= count) cert.histogram.resize(count + 1, 0);
      cert.histogram[count]++;
      cert.N_emp = std::max(cert.N_emp, count);
    }
  return cert;
}

CoverageReport certify_coverage(const Polytope& P, const Covering& cov,
                                std::uint64_t samples, const CounterRng& rng) {
  std::vector<SpatialHash> hash = hash_elements(cov, /*inflated=*/false);
  std::vector<SpatialHash> hash_big = hash_elements(cov, /*inflated=*/true);
  CoverageReport rep;
  CounterRng r = rng.substream(7002);
  std::uint64_t blocks = std::max<std::uint64_t>(1, samples / 4);
  rep.samples = 4 * blocks;
  double CB = 1.0;
  for (std::uint64_t b = 0; b < blocks; ++b)
    for (int slot = 0; slot < 4; ++slot) {
      Vec3 x = certificate_sample(P, cov, (int)b, slot, r);
      bool hit = false;
      for (const auto& gh : hash) {
        const std::vector<int>* lst = gh.query(x);
        if (!lst) continue;
        for (int i : *lst)
          if (norm(x - cov.elements[i].center) < cov.elements[i].R) {
            hit = true;
            break;
          }
        if (hit) break;
      }
      if (!hit) ++rep.misses;
      double rx = feature_distance(P, cov.target, x);
      for (const auto& gh : hash_big) {
        const std::vector<int>* lst = gh.query(x);
        if (!lst) continue;
        for (int i : *lst)
          if (norm(x - cov.elements[i].center) < cov.elements[i].chat_radius()) {
            double ratio = rx / cov.elements[i].R;
            CB = std::max({CB, ratio, 1.0 / ratio});
          }
      }
    }
  rep.C_B = CB;
  return rep;
}

void export_jsonl(const Covering& cov, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw GeometryError("export_jsonl: cannot open " + path);
  for (const auto& el : cov.elements) {
    const char* shape = el.shape == CoveringElement::Shape::ball        ? "ball"
                        : el.shape == CoveringElement::Shape::half_ball ? "half_ball"
                                                                        : "wedge";
    os << "{\"shape\":\"" << shape << "\",\"center\":[" << el.center.x << ","
       << el.center.y << "," << el.center.z << "],\"R\":" << el.R << ",\"c\":" << el.c
       << ",\"chat\":" << el.chat << ",\"generation\":" << el.generation << "}\n";
  }
}

}  // namespace polyfrac
