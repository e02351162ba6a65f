#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "polyfrac/field.hpp"
#include "polyfrac/polytope.hpp"
#include "polyfrac/rng.hpp"
#include "polyfrac/vec3.hpp"

namespace polyfrac {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Gauss-Legendre nodes/weights on (a, b).
struct GaussRule {
  std::vector<double> nodes, weights;
};
GaussRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Gauss rule for the weight y^alpha on (0, Y).
struct JacobiRule {
  double alpha = 0.0;
  double Y = 1.0;
  std::vector<double> nodes, weights;

  double integrate(const std::function<double(double)>& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};
JacobiRule jacobi_rule(double alpha, double Y, int n);

struct MultiIndex {
  int b_perp = 0, b_parperp = 0, b_par = 0;
  int order() const { return b_perp + b_parperp + b_par; }
};

/// D^beta u at x in the given frame; analytic when the field registers
/// derivatives, otherwise Richardson-extrapolated central differences.
double dir_derivative(const ScalarField& u, const Frame& frame, const MultiIndex& beta,
                      const Vec3& x, double h = 0.0);

/// Weight  r_bnd^d_bnd * r_v^a_v * r_e^a_e * r_f^a_f  with explicit anchors.
/// Only the anchors that are set contribute.
struct WeightSpec {
  double s = 0.5;
  double t = 0.0;
  double a_v = 0.0, a_e = 0.0, a_f = 0.0, d_bnd = 0.0;
  std::optional<Vec3> vertex;
  std::optional<std::pair<Vec3, Vec3>> edge;       // point on line, unit direction
  std::optional<std::pair<Vec3, double>> face;     // unit normal, plane offset
  std::function<double(const Vec3&)> r_bnd;        // required iff d_bnd != 0

  double weight(const Vec3& x) const;
};

/// Integration region: membership test + bounding box + the feature the
/// dyadic shells grade toward (dim -1: none, 0: point, 1: line, 2: plane).
struct Region {
  std::function<bool(const Vec3&)> contains;
  Aabb box;
  int feature_dim = -1;
  Vec3 feature_point{0, 0, 0};
  Vec3 feature_dir{0, 0, 1};  // line direction or plane normal
  double grading_scale = 0.0; // outer shell radius; 0 -> box diameter

  static Region make_box(const Aabb& b);
  static Region ball(const Vec3& center, double R, bool grade_to_center = true);
  /// All points of P classified into the given neighborhood; shells grade
  /// toward the most singular feature of the spec.
  static Region neighborhood(const Polytope& P, const NeighborhoodSpec& spec);
};

struct QuadOptions {
  double tol = 1e-3;        // stop when tail estimate < tol * accumulated sum
  int max_shells = 160;
  int radial_order = 8;     // Gauss order across each shell
  int angular_order = 12;   // angular / in-plane resolution
  int box_cells = 8;        // cells per axis for featureless regions
};

struct NormResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool divergent = false;
};

/// L^2 norm of  weight * D^beta u  over the region, feature-graded dyadic
/// shells.  Divergent integrands are flagged and reported as +inf.
NormResult weighted_norm(const ScalarField& u, const Region& region, const WeightSpec& w,
                         const MultiIndex& beta = {}, const Frame& frame = {},
                         const QuadOptions& opt = {});

/// Plain integral of f over the region with the same shell machinery.
NormResult region_integral(const std::function<double(const Vec3&)>& f,
                           const Region& region, const QuadOptions& opt = {});

struct MonteCarloResult {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

/// Monte-Carlo estimate of the squared Aronstein-Slobodeckij seminorm
///   |u|^2_{H^t} = iint |u(x)-u(z)|^2 / |x-z|^{d+2t}
/// over region x region, with power-law importance sampling of the offset.
/// d = 3 uses the region's 3D box; d = 1 integrates over (box.lo.x, box.hi.x)
/// and evaluates u at (x, 0, 0).
MonteCarloResult slobodeckij(const ScalarField& u, const Region& region, double t,
                             std::uint64_t budget, const CounterRng& rng, int d = 3);

}  // namespace polyfrac
