#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyfrac/vec3.hpp"

namespace polyfrac {

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Edge {
  int v0 = -1, v1 = -1;   // vertex indices, v0 < v1
  Vec3 dir;               // unit direction v0 -> v1
  std::vector<int> faces; // exactly two for a closed boundary
};

struct Face {
  std::vector<int> loop;  // vertex indices, counter-clockwise seen from outside
  Vec3 normal;            // outward unit normal
  double offset = 0.0;    // plane equation: dot(normal, x) = offset
  std::vector<int> edges;
  std::vector<std::array<int, 3>> tris;  // triangulation (vertex indices)
  double area = 0.0;
};

enum class RegionKind { v, e, f, ve, vf, ef, vef, interior };

std::string to_string(RegionKind k);
RegionKind region_kind_from_string(const std::string& s);

/// One neighborhood omega_*^xi: its kind plus the abutted feature indices.
struct NeighborhoodSpec {
  RegionKind kind = RegionKind::interior;
  double xi = 0.0;
  int vertex = -1;
  int edge = -1;
  int face = -1;

  bool operator==(const NeighborhoodSpec& o) const {
    return kind == o.kind && vertex == o.vertex && edge == o.edge && face == o.face;
  }
};

/// Local orthonormal frame (g_perp, g_parperp, g_par), right-handed.
struct Frame {
  Vec3 g_perp{0, 0, 1};
  Vec3 g_parperp{0, 1, 0};
  Vec3 g_par{1, 0, 0};

  Vec3 axis(int i) const { return i == 0 ? g_perp : (i == 1 ? g_parperp : g_par); }
};

struct FeatureDistances {
  std::vector<double> r_v;
  std::vector<double> r_e;
  std::vector<double> r_f;
  double r_bnd = 0.0;
};

class Polytope {
 public:
  static Polytope from_json_file(const std::string& path);
  static Polytope from_lists(const std::vector<Vec3>& vertices,
                             const std::vector<std::vector<int>>& faces);

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Face>& faces() const { return faces_; }

  int num_vertices() const { return (int)vertices_.size(); }
  int num_edges() const { return (int)edges_.size(); }
  int num_faces() const { return (int)faces_.size(); }
  const Vec3& vertex(int i) const { return vertices_[i]; }
  const Edge& edge(int i) const { return edges_[i]; }
  const Face& face(int i) const { return faces_[i]; }

  // lookup helpers, mostly for tests and CLI feature selection
  int find_vertex(const Vec3& p, double tol = 1e-9) const;
  int find_edge(const Vec3& a, const Vec3& b, double tol = 1e-9) const;
  int find_face(const Vec3& outward_normal, double tol = 1e-9) const;

  Polytope scaled(double lam) const;

  // adjacency sets
  const std::vector<int>& edges_at_vertex(int v) const { return e_v_[v]; }
  const std::vector<int>& faces_at_vertex(int v) const { return f_v_[v]; }
  const std::vector<int>& vertices_of_edge(int e) const { return v_e_[e]; }
  const std::vector<int>& faces_of_edge(int e) const { return edges_[e].faces; }
  const std::vector<int>& edges_of_face(int f) const { return faces_[f].edges; }
  const std::vector<int>& vertices_of_face(int f) const { return v_f_[f]; }

  double diameter() const { return diameter_; }
  Aabb bounding_box() const { return bbox_; }
  double volume() const;

  bool contains(const Vec3& x) const;  // open interior, via ray casting
  bool on_closure(const Vec3& x, double tol = 1e-12) const;

  double dist_vertex(int v, const Vec3& x) const { return norm(x - vertices_[v]); }
  double dist_edge(int e, const Vec3& x) const;
  double dist_face(int f, const Vec3& x) const;
  double dist_boundary(const Vec3& x) const;  // min over faces/edges/vertices

  /// All r_v, r_e, r_f and r_bnd at once. Throws if x is outside the closure.
  FeatureDistances dist_features(const Vec3& x) const;

  /// rho_ve = r_e/r_v and rho_ef = r_f/r_e. Throws on division by zero
  /// (x sitting on the feature).
  std::pair<double, double> rho(const Vec3& x, int v, int e, int f) const;

  /// All neighborhoods containing x, by the per-feature threshold tests.
  std::vector<NeighborhoodSpec> classify(const Vec3& x, double xi) const;

  /// Largest admissible xi: 2*xi*diam below the minimum distance between
  /// non-adjacent features.
  double max_admissible_xi() const;

  /// First exit parameter of the ray x + t*w, t > 0 (x interior).
  double ray_exit(const Vec3& x, const Vec3& w) const;

  Frame frame_for(const NeighborhoodSpec& spec) const;

 private:
  void build(const std::vector<Vec3>& vertices,
             const std::vector<std::vector<int>>& face_loops);
  void validate() const;

  std::vector<Vec3> vertices_;
  std::vector<Edge> edges_;
  std::vector<Face> faces_;
  std::vector<std::vector<int>> e_v_, f_v_, v_e_, v_f_;
  Aabb bbox_;
  double diameter_ = 0.0;
};

/// Distance from p to the closed segment [a, b].
double dist_point_segment(const Vec3& p, const Vec3& a, const Vec3& b);

/// Distance from p to the closed triangle (a, b, c).
double dist_point_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace polyfrac
