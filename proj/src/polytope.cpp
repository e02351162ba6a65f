#include "polyfrac/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

namespace polyfrac {

namespace {

constexpr double kPlanarityTol = 1e-10;

// Newell's method; robust for non-convex planar loops.
Vec3 loop_normal(const std::vector<Vec3>& pts, const std::vector<int>& loop) {
  Vec3 n{0, 0, 0};
  for (size_t i = 0; i < loop.size(); ++i) {
    const Vec3& a = pts[loop[i]];
    const Vec3& b = pts[loop[(i + 1) % loop.size()]];
    n.x += (a.y - b.y) * (a.z + b.z);
    n.y += (a.z - b.z) * (a.x + b.x);
    n.z += (a.x - b.x) * (a.y + b.y);
  }
  return n;
}

// Ear clipping in the face plane; handles simple non-convex polygons.
std::vector<std::array<int, 3>> triangulate_loop(const std::vector<Vec3>& pts,
                                                 const std::vector<int>& loop,
                                                 const Vec3& normal) {
  std::vector<int> poly = loop;
  std::vector<std::array<int, 3>> tris;
  Vec3 u = any_orthogonal(normal);
  Vec3 v = cross(normal, u);
  auto p2 = [&](int idx) {
    return std::pair<double, double>{dot(pts[idx], u), dot(pts[idx], v)};
  };
  auto cross2 = [](std::pair<double, double> a, std::pair<double, double> b,
                   std::pair<double, double> c) {
    return (b.first - a.first) * (c.second - a.second) -
           (b.second - a.second) * (c.first - a.first);
  };
  int guard = 0;
  while (poly.size() > 3) {
    if (++guard > 10000) throw GeometryError("triangulation failed (degenerate face?)");
    bool clipped = false;
    for (size_t i = 0; i < poly.size(); ++i) {
      int ia = poly[(i + poly.size() - 1) % poly.size()];
      int ib = poly[i];
      int ic = poly[(i + 1) % poly.size()];
      auto a = p2(ia), b = p2(ib), c = p2(ic);
      if (cross2(a, b, c) <= 1e-14) continue;  // reflex or collinear
      bool contains_other = false;
      for (int j : poly) {
        if (j == ia || j == ib || j == ic) continue;
        auto q = p2(j);
        if (cross2(a, b, q) >= -1e-14 && cross2(b, c, q) >= -1e-14 &&
            cross2(c, a, q) >= -1e-14) {
          contains_other = true;
          break;
        }
      }
      if (contains_other) continue;
      tris.push_back({ia, ib, ic});
      poly.erase(poly.begin() + static_cast<long>(i));
      clipped = true;
      break;
    }
    if (!clipped) throw GeometryError("triangulation failed (non-simple face loop?)");
  }
  tris.push_back({poly[0], poly[1], poly[2]});
  return tris;
}

}  // namespace

std::string to_string(RegionKind k) {
  switch (k) {
    case RegionKind::v: return "v";
    case RegionKind::e: return "e";
    case RegionKind::f: return "f";
    case RegionKind::ve: return "ve";
    case RegionKind::vf: return "vf";
    case RegionKind::ef: return "ef";
    case RegionKind::vef: return "vef";
    case RegionKind::interior: return "int";
  }
  return "?";
}

RegionKind region_kind_from_string(const std::string& s) {
  if (s == "v") return RegionKind::v;
  if (s == "e") return RegionKind::e;
  if (s == "f") return RegionKind::f;
  if (s == "ve") return RegionKind::ve;
  if (s == "vf") return RegionKind::vf;
  if (s == "ef") return RegionKind::ef;
  if (s == "vef") return RegionKind::vef;
  if (s == "int") return RegionKind::interior;
  throw GeometryError("unknown region kind: " + s);
}

Polytope Polytope::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GeometryError("cannot open polytope file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw GeometryError("polytope parse error in " + path + ": " + e.what());
  }
  if (!j.contains("vertices") || !j.contains("faces"))
    throw GeometryError("polytope file needs 'vertices' and 'faces': " + path);
  std::vector<Vec3> verts;
  for (const auto& row : j["vertices"]) {
    if (row.size() != 3) throw GeometryError("vertex is not a 3D point");
    verts.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
  }
  std::vector<std::vector<int>> loops;
  for (const auto& row : j["faces"]) loops.push_back(row.get<std::vector<int>>());
  return from_lists(verts, loops);
}

Polytope Polytope::from_lists(const std::vector<Vec3>& vertices,
                              const std::vector<std::vector<int>>& faces) {
  Polytope p;
  p.build(vertices, faces);
  p.validate();
  return p;
}

void Polytope::build(const std::vector<Vec3>& vertices,
                     const std::vector<std::vector<int>>& face_loops) {
  vertices_ = vertices;
  bbox_.lo = bbox_.hi = vertices_.at(0);
  for (const Vec3& v : vertices_) {
    for (int i = 0; i < 3; ++i) {
      bbox_.lo[i] = std::min(bbox_.lo[i], v[i]);
      bbox_.hi[i] = std::max(bbox_.hi[i], v[i]);
    }
  }
  diameter_ = 0.0;
  for (size_t i = 0; i < vertices_.size(); ++i)
    for (size_t j = i + 1; j < vertices_.size(); ++j)
      diameter_ = std::max(diameter_, norm(vertices_[i] - vertices_[j]));

  std::map<std::pair<int, int>, int> edge_index;
  for (const auto& loop : face_loops) {
    if (loop.size() < 3) throw GeometryError("face loop with fewer than 3 vertices");
    Face f;
    f.loop = loop;
    Vec3 n = loop_normal(vertices_, loop);
    double a2 = norm(n);
    if (a2 < 1e-14) throw GeometryError("degenerate face (zero area)");
    f.area = 0.5 * a2;
    f.normal = n / a2;
    f.offset = dot(f.normal, vertices_[loop[0]]);
    f.tris = triangulate_loop(vertices_, loop, f.normal);
    int fi = static_cast<int>(faces_.size());
    for (size_t i = 0; i < loop.size(); ++i) {
      int a = loop[i], b = loop[(i + 1) % loop.size()];
      auto key = std::minmax(a, b);
      auto it = edge_index.find(key);
      int ei;
      if (it == edge_index.end()) {
        Edge e;
        e.v0 = key.first;
        e.v1 = key.second;
        Vec3 d = vertices_[e.v1] - vertices_[e.v0];
        if (norm(d) < 1e-14) throw GeometryError("zero-length edge");
        e.dir = normalized(d);
        ei = static_cast<int>(edges_.size());
        edges_.push_back(e);
        edge_index[key] = ei;
      } else {
        ei = it->second;
      }
      edges_[ei].faces.push_back(fi);
      f.edges.push_back(ei);
    }
    faces_.push_back(std::move(f));
  }

  e_v_.assign(vertices_.size(), {});
  f_v_.assign(vertices_.size(), {});
  v_e_.assign(edges_.size(), {});
  v_f_.assign(faces_.size(), {});
  for (size_t e = 0; e < edges_.size(); ++e) {
    v_e_[e] = {edges_[e].v0, edges_[e].v1};
    e_v_[edges_[e].v0].push_back(static_cast<int>(e));
    e_v_[edges_[e].v1].push_back(static_cast<int>(e));
  }
  for (size_t f = 0; f < faces_.size(); ++f) {
    std::set<int> vs(faces_[f].loop.begin(), faces_[f].loop.end());
    for (int v : vs) {
      v_f_[f].push_back(v);
      f_v_[v].push_back(static_cast<int>(f));
    }
  }
}

void Polytope::validate() const {
  for (const Edge& e : edges_) {
    if (std::abs(norm(e.dir) - 1.0) > 1e-12) throw GeometryError("edge direction not unit");
    if (e.faces.size() != 2)
      throw GeometryError("boundary not closed: edge (" + std::to_string(e.v0) + "," +
                          std::to_string(e.v1) + ") belongs to " +
                          std::to_string(e.faces.size()) + " faces");
  }
  for (const Face& f : faces_) {
    if (std::abs(norm(f.normal) - 1.0) > 1e-12) throw GeometryError("face normal not unit");
    for (int vi : f.loop)
      if (std::abs(dot(f.normal, vertices_[vi]) - f.offset) > kPlanarityTol)
        throw GeometryError("face loop not coplanar");
  }
  // mutual adjacency consistency
  for (size_t v = 0; v < vertices_.size(); ++v)
    for (int e : e_v_[v])
      if (edges_[e].v0 != static_cast<int>(v) && edges_[e].v1 != static_cast<int>(v))
        throw GeometryError("inconsistent vertex/edge adjacency");
}

double Polytope::volume() const {
  // divergence theorem over boundary triangles
  double vol = 0.0;
  for (const Face& f : faces_)
    for (const auto& t : f.tris)
      vol += dot(vertices_[t[0]], cross(vertices_[t[1]], vertices_[t[2]])) / 6.0;
  return vol;
}

double dist_point_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
  Vec3 d = b - a;
  double t = dot(p - a, d) / norm2(d);
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * d));
}

double dist_point_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  // project onto plane; if projection has nonnegative barycentrics, done,
  // otherwise fall back to nearest edge
  Vec3 n = cross(b - a, c - a);
  double nn = norm2(n);
  if (nn < 1e-28) return std::min(dist_point_segment(p, a, b), dist_point_segment(p, a, c));
  double h = dot(p - a, n) / nn;
  Vec3 q = p - h * n;
  Vec3 v0 = b - a, v1 = c - a, v2 = q - a;
  double d00 = dot(v0, v0), d01 = dot(v0, v1), d11 = dot(v1, v1);
  double d20 = dot(v2, v0), d21 = dot(v2, v1);
  double den = d00 * d11 - d01 * d01;
  double l1 = (d11 * d20 - d01 * d21) / den;
  double l2 = (d00 * d21 - d01 * d20) / den;
  if (l1 >= 0 && l2 >= 0 && l1 + l2 <= 1) return std::abs(h) * std::sqrt(nn);
  return std::min({dist_point_segment(p, a, b), dist_point_segment(p, b, c),
                   dist_point_segment(p, c, a)});
}

double Polytope::dist_edge(int e, const Vec3& x) const {
  return dist_point_segment(x, vertices_[edges_[e].v0], vertices_[edges_[e].v1]);
}

double Polytope::dist_face(int f, const Vec3& x) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& t : faces_[f].tris)
    d = std::min(d, dist_point_triangle(x, vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]));
  return d;
}

double Polytope::dist_boundary(const Vec3& x) const {
  double d = std::numeric_limits<double>::infinity();
  for (size_t f = 0; f < faces_.size(); ++f) d = std::min(d, dist_face(static_cast<int>(f), x));
  return d;
}

bool Polytope::contains(const Vec3& x) const {
  if (!bbox_.contains(x)) return false;
  // ray casting along a fixed slightly-irrational direction
  const Vec3 w = normalized(Vec3{0.5773502691896258, 0.7071067811865476, 0.4142135623730951});
  int crossings = 0;
  for (const Face& f : faces_) {
    for (const auto& t : f.tris) {
      const Vec3 &a = vertices_[t[0]], &b = vertices_[t[1]], &c = vertices_[t[2]];
      Vec3 e1 = b - a, e2 = c - a;
      Vec3 pv = cross(w, e2);
      double det = dot(e1, pv);
      if (std::abs(det) < 1e-14) continue;
      Vec3 tv = x - a;
      double u = dot(tv, pv) / det;
      if (u < 0 || u > 1) continue;
      Vec3 qv = cross(tv, e1);
      double v = dot(w, qv) / det;
      if (v < 0 || u + v > 1) continue;
      double tt = dot(e2, qv) / det;
      if (tt > 1e-13) ++crossings;
    }
  }
  return (crossings % 2) == 1;
}

bool Polytope::on_closure(const Vec3& x, double tol) const {
  return contains(x) || dist_boundary(x) <= tol;
}

double Polytope::ray_exit(const Vec3& x, const Vec3& w) const {
  double t_exit = std::numeric_limits<double>::infinity();
  for (const Face& f : faces_) {
    for (const auto& t : f.tris) {
      const Vec3 &a = vertices_[t[0]], &b = vertices_[t[1]], &c = vertices_[t[2]];
      Vec3 e1 = b - a, e2 = c - a;
      Vec3 pv = cross(w, e2);
      double det = dot(e1, pv);
      if (std::abs(det) < 1e-14) continue;
      Vec3 tv = x - a;
      double u = dot(tv, pv) / det;
      if (u < -1e-12 || u > 1 + 1e-12) continue;
      Vec3 qv = cross(tv, e1);
      double v = dot(w, qv) / det;
      if (v < -1e-12 || u + v > 1 + 1e-12) continue;
      double tt = dot(e2, qv) / det;
      if (tt > 1e-13) t_exit = std::min(t_exit, tt);
    }
  }
  return t_exit;
}

FeatureDistances Polytope::dist_features(const Vec3& x) const {
  if (!on_closure(x, 1e-10))
    throw GeometryError("point outside the closure of the polytope");
  FeatureDistances d;
  d.r_v.resize(vertices_.size());
  d.r_e.resize(edges_.size());
  d.r_f.resize(faces_.size());
  for (size_t v = 0; v < vertices_.size(); ++v) d.r_v[v] = dist_vertex(static_cast<int>(v), x);
  for (size_t e = 0; e < edges_.size(); ++e) d.r_e[e] = dist_edge(static_cast<int>(e), x);
  double mn = std::numeric_limits<double>::infinity();
  for (size_t f = 0; f < faces_.size(); ++f) {
    d.r_f[f] = dist_face(static_cast<int>(f), x);
    mn = std::min(mn, d.r_f[f]);
  }
  d.r_bnd = mn;
  return d;
}

std::pair<double, double> Polytope::rho(const Vec3& x, int v, int e, int f) const {
  double rv = dist_vertex(v, x);
  double re = dist_edge(e, x);
  double rf = dist_face(f, x);
  if (rv == 0.0) throw GeometryError("rho_ve singular: point coincides with the vertex");
  // On the edge both r_f and r_e vanish (f adjacent to e); the limit of
  // r_f/r_e along the face is 0, so resolve 0/0 that way.
  double rho_ef = (re == 0.0) ? 0.0 : rf / re;
  if (re == 0.0 && rf > 0.0)
    throw GeometryError("rho_ef singular: r_e = 0 with r_f > 0");
  return {re / rv, rho_ef};
}

std::vector<NeighborhoodSpec> Polytope::classify(const Vec3& x, double xi) const {
  if (xi <= 0) throw GeometryError("xi must be positive");
  if (xi > max_admissible_xi())
    throw GeometryError("xi too large for this polytope's feature separation");
  FeatureDistances d = dist_features(x);
  // The threshold tests compare nondimensional distances, so rescaling the
  // polytope leaves the classification unchanged.
  for (double& r : d.r_v) r /= diameter_;
  for (double& r : d.r_e) r /= diameter_;
  for (double& r : d.r_f) r /= diameter_;
  std::vector<NeighborhoodSpec> out;
  auto add = [&](RegionKind k, int v, int e, int f) {
    out.push_back({k, xi, v, e, f});
  };

  const double xi2 = xi * xi, xi3 = xi * xi * xi;

  // vertex sectors
  for (int v = 0; v < static_cast<int>(vertices_.size()); ++v) {
    if (d.r_v[v] >= xi) continue;
    bool some_edge_close = false;
    for (int e : e_v_[v]) {
      double rho_ve = d.r_e[e] / d.r_v[v];
      if (rho_ve >= xi) continue;
      some_edge_close = true;
      bool some_face_close = false;
      for (int f : edges_[e].faces) {
        double rho_ef = d.r_f[f] / d.r_e[e];
        if (rho_ef < xi) {
          some_face_close = true;
          add(RegionKind::vef, v, e, f);
        }
      }
      if (!some_face_close) add(RegionKind::ve, v, e, -1);
    }
    if (!some_edge_close) {
      bool all_pairs_far = true;
      for (int f : f_v_[v]) {
        // edges shared by v and f
        bool any_close = false;
        for (int e : e_v_[v]) {
          const auto& fe = edges_[e].faces;
          if (std::find(fe.begin(), fe.end(), f) == fe.end()) continue;
          if (d.r_f[f] / d.r_e[e] < xi) any_close = true;
        }
        if (any_close) {
          all_pairs_far = false;
          add(RegionKind::vf, v, -1, f);
        }
      }
      if (all_pairs_far) add(RegionKind::v, v, -1, -1);
    }
  }

  // edge tubes away from vertices
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    if (d.r_e[e] >= xi2) continue;
    bool vertices_far = true;
    for (int v : v_e_[e])
      if (d.r_v[v] < xi) vertices_far = false;
    if (!vertices_far) continue;
    bool some_face_close = false;
    for (int f : edges_[e].faces) {
      if (d.r_f[f] / d.r_e[e] < xi) {
        some_face_close = true;
        add(RegionKind::ef, -1, e, f);
      }
    }
    if (!some_face_close) add(RegionKind::e, -1, e, -1);
  }

  // face slabs away from vertices/edges
  for (int f = 0; f < static_cast<int>(faces_.size()); ++f) {
    if (d.r_f[f] >= xi3) continue;
    bool far = true;
    for (int v : v_f_[f])
      if (d.r_v[v] < xi) far = false;
    for (int e : faces_[f].edges)
      if (d.r_e[e] < xi2) far = false;
    if (far) add(RegionKind::f, -1, -1, f);
  }

  // interior
  bool interior = true;
  for (double rv : d.r_v)
    if (rv < xi) interior = false;
  for (double re : d.r_e)
    if (re < xi2) interior = false;
  for (double rf : d.r_f)
    if (rf < xi3) interior = false;
  if (interior) add(RegionKind::interior, -1, -1, -1);

  return out;
}

double Polytope::max_admissible_xi() const {
  // distance between non-adjacent feature pairs (vertex/vertex, vertex/edge,
  // vertex/face, edge/edge, edge/face)
  double sep = std::numeric_limits<double>::infinity();
  auto adjacent_ve = [&](int v, int e) {
    return edges_[e].v0 == v || edges_[e].v1 == v;
  };
  auto adjacent_vf = [&](int v, int f) {
    return std::find(v_f_[f].begin(), v_f_[f].end(), v) != v_f_[f].end();
  };
  size_t nv = vertices_.size(), ne = edges_.size(), nf = faces_.size();
  for (size_t a = 0; a < nv; ++a)
    for (size_t b = a + 1; b < nv; ++b)
      sep = std::min(sep, norm(vertices_[a] - vertices_[b]));
  for (size_t v = 0; v < nv; ++v) {
    for (size_t e = 0; e < ne; ++e)
      if (!adjacent_ve(static_cast<int>(v), static_cast<int>(e)))
        sep = std::min(sep, dist_edge(static_cast<int>(e), vertices_[v]));
    for (size_t f = 0; f < nf; ++f)
      if (!adjacent_vf(static_cast<int>(v), static_cast<int>(f)))
        sep = std::min(sep, dist_face(static_cast<int>(f), vertices_[v]));
  }
  for (size_t a = 0; a < ne; ++a) {
    for (size_t b = a + 1; b < ne; ++b) {
      const Edge &ea = edges_[a], &eb = edges_[b];
      if (ea.v0 == eb.v0 || ea.v0 == eb.v1 || ea.v1 == eb.v0 || ea.v1 == eb.v1) continue;
      double d = std::min({dist_edge(static_cast<int>(b), vertices_[ea.v0]),
                           dist_edge(static_cast<int>(b), vertices_[ea.v1]),
                           dist_edge(static_cast<int>(a), vertices_[eb.v0]),
                           dist_edge(static_cast<int>(a), vertices_[eb.v1])});
      // segment midpoint refinement (coarse but sufficient for admissibility)
      Vec3 ma = 0.5 * (vertices_[ea.v0] + vertices_[ea.v1]);
      Vec3 mb = 0.5 * (vertices_[eb.v0] + vertices_[eb.v1]);
      d = std::min({d, dist_edge(static_cast<int>(b), ma), dist_edge(static_cast<int>(a), mb)});
      sep = std::min(sep, d);
    }
  }
  return sep / (2.0 * diameter_);
}

Frame Polytope::frame_for(const NeighborhoodSpec& spec) const {
  Frame fr;
  switch (spec.kind) {
    case RegionKind::interior:
    case RegionKind::v:
      // canonical axes: g_par = e1, g_parperp = e2, g_perp = e3
      fr.g_par = {1, 0, 0};
      fr.g_parperp = {0, 1, 0};
      fr.g_perp = {0, 0, 1};
      break;
    case RegionKind::f:
    case RegionKind::vf: {
      if (spec.face < 0) throw GeometryError("spec lacks a face");
      const Face& f = faces_[spec.face];
      fr.g_perp = f.normal;
      // g_par along the face's first edge, positively oriented
      Vec3 t = normalized(vertices_[f.loop[1]] - vertices_[f.loop[0]]);
      fr.g_par = t;
      fr.g_parperp = cross(fr.g_perp, fr.g_par);
      break;
    }
    case RegionKind::e:
    case RegionKind::ve: {
      if (spec.edge < 0) throw GeometryError("spec lacks an edge");
      const Edge& e = edges_[spec.edge];
      fr.g_par = e.dir;
      fr.g_parperp = any_orthogonal(e.dir);
      fr.g_perp = cross(fr.g_par, fr.g_parperp);
      break;
    }
    case RegionKind::ef:
    case RegionKind::vef: {
      if (spec.edge < 0 || spec.face < 0) throw GeometryError("spec lacks edge/face");
      const Edge& e = edges_[spec.edge];
      const Face& f = faces_[spec.face];
      Vec3 gpar = e.dir;
      if (dot(gpar, e.dir) < 0) gpar = -gpar;
      Vec3 gperp = f.normal;  // perpendicular to f, and to e since e lies in f
      Vec3 gpp = cross(gperp, gpar);  // parallel to f, perpendicular to e
      fr.g_par = gpar;
      fr.g_parperp = gpp;
      fr.g_perp = gperp;
      break;
    }
  }
  // enforce right-handedness of (g_perp, g_parperp, g_par)
  if (dot(cross(fr.g_perp, fr.g_parperp), fr.g_par) < 0) fr.g_parperp = -fr.g_parperp;
  return fr;
}


int Polytope::find_vertex(const Vec3& p, double tol) const {
  for (int i = 0; i < num_vertices(); ++i)
    if (norm(vertices_[i] - p) <= tol) return i;
  throw GeometryError("find_vertex: no vertex at the given point");
}

int Polytope::find_edge(const Vec3& a, const Vec3& b, double tol) const {
  for (int i = 0; i < num_edges(); ++i) {
    const Vec3& p = vertices_[edges_[i].v0];
    const Vec3& q = vertices_[edges_[i].v1];
    if ((norm(p - a) <= tol && norm(q - b) <= tol) ||
        (norm(p - b) <= tol && norm(q - a) <= tol))
      return i;
  }
  throw GeometryError("find_edge: no edge with the given endpoints");
}

int Polytope::find_face(const Vec3& outward_normal, double tol) const {
  Vec3 n = normalized(outward_normal);
  for (int i = 0; i < num_faces(); ++i)
    if (norm(faces_[i].normal - n) <= tol) return i;
  throw GeometryError("find_face: no face with the given normal");
}

Polytope Polytope::scaled(double lam) const {
  std::vector<Vec3> vs;
  vs.reserve(vertices_.size());
  for (const Vec3& v : vertices_) vs.push_back(lam * v);
  std::vector<std::vector<int>> loops;
  loops.reserve(faces_.size());
  for (const Face& f : faces_) loops.push_back(f.loop);
  return from_lists(vs, loops);
}

}  // namespace polyfrac
