#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyfrac/covering.hpp"
#include "polyfrac/extension.hpp"
#include "polyfrac/field.hpp"
#include "polyfrac/quadrature.hpp"

namespace polyfrac {

class VerifyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One rung of a bounded-ratio experiment.
struct RatioPoint {
  double scale = 0.0;
  double lhs = 0.0;
  double rhs0 = 0.0;  ///< right-hand side without the unknown constant
  double ratio = 0.0;
};

/// Outcome of a bounded-ratio experiment over a dyadic scale ladder.  An
/// inequality with an unspecified constant is "verified" when the ratio does
/// not grow toward fine scales: log-log slope of ratio vs scale >= -0.2.  On
/// matching-order (homogeneous) test fields the ladder is scale-flat and the
/// slope also stays below +0.2; it is never scored against an invented
/// constant.
struct RatioReport {
  std::string id;
  std::vector<RatioPoint> points;
  double slope = 0.0;
  std::string verdict = "bounded";  ///< bounded | unbounded | inconclusive
  std::string note;

  std::string to_json() const;
  std::string to_csv() const;  ///< columns: id,scale,lhs,rhs0,ratio,verdict
};

/// Fits the slope and derives the verdict from the stated rule.  Points with
/// lhs == 0 are kept in the table but excluded from the fit; a non-finite
/// ratio forces verdict "unbounded".
RatioReport finalize_report(const std::string& id, std::vector<RatioPoint> pts,
                            const std::string& note = "");

/// Manufactured consistent triple  U(x,y) = u(x) * (g0 - c y^{2s}).
/// With alpha = 1 - 2s the profile g is alpha-harmonic in y, so
///   F = div(y^alpha grad U) = y^alpha (Delta u)(x) g(y)   (analytic), and
///   f = -d_s lim_{y->0} y^alpha dU/dy = d_s 2s c u(x).
/// u must carry registered analytic derivatives (high orders are exact).
struct ManufacturedTriple {
  double s = 0.5;
  double g0 = 1.0;
  double c = 1.0;
  ScalarField u;

  double alpha() const { return 1.0 - 2.0 * s; }
  double g(double y) const;
  double gp(double y) const;  ///< g'
  double U(const Vec3& x, double y) const;
  double dyU(const Vec3& x, double y) const;
  Vec3 grad_u(const Vec3& x) const;
  /// gradient of the directional derivative d_e u
  Vec3 grad_du(const Vec3& x, const Vec3& e) const;
  double lap_u(const Vec3& x) const;
  double F(const Vec3& x, double y) const;
  ScalarField trace_f() const;
};

/// Random polynomial x-part of the given total degree (exact derivatives).
ManufacturedTriple make_polynomial_triple(double s, int degree, unsigned seed);
/// Homogeneous polynomial x-part: only total degree == degree terms.  These
/// make the two sides of the ratio experiments scale alike (a matching-order
/// field), giving scale-flat ladders.
ManufacturedTriple make_homogeneous_triple(double s, int degree, unsigned seed);
/// Harmonic homogeneous x-part Re((x1 + i x2)^degree): additionally kills the
/// Laplacian data term, flattening the high-order ladders.
ManufacturedTriple make_harmonic_triple(double s, int degree);
/// The model case U = x1 * g(y).
ManufacturedTriple make_axis_triple(double s);

/// Geometry the ratio experiments run on: a ball, a half-ball whose flat side
/// has normal `axis`, or a wedge along edge direction `axis`.
struct BallSpec {
  CoveringElement::Shape shape = CoveringElement::Shape::ball;
  Vec3 center{0, 0, 0};
  double R = 1.0;
  Vec3 axis{0, 0, 1};
};

/// Data norm bundle: the weighted sum over derivative orders
///   sum_{j=1}^{p+1} (g p)^{-2j} (3^j   max_{|b|=j}   ||d^b f||^2_{L^2(B_R)}
///                              + 3^{j-1} max_{|b|=j-1} ||d^b F||^2_{L^2_{-a}}),
/// with (g p) read as 1 when p = 0.
struct DataNormBundle {
  int p = 0;
  double gamma = 1.0;
  double R = 1.0, Y = 1.0;
  std::vector<double> f_terms;  ///< max_{|b|=j} ||d^b f||^2,   j = 1..p+1
  std::vector<double> F_terms;  ///< max_{|b|=j-1} ||d^b F||^2, j = 1..p+1
  double value = 0.0;
};

DataNormBundle data_norm_bundle(const ManufacturedTriple& T, const BallSpec& ball,
                                double Y, int p, double gamma,
                                const QuadOptions& qopt = {});
/// Independent re-summation (reversed loop order, separated sums); agrees
/// with DataNormBundle::value to 1e-12 relative.
double data_norm_resum(const DataNormBundle& b);

/// Caccioppoli ratio for first tangential differences of grad U:
///   LHS  = ||D_e grad U||^2_{L^2_alpha(B^theta_{cR})}
///   RHS0 = (((1-c)R)^-2 + (theta2-theta)^-2) ||grad U||^2_{L^2_alpha(B^theta2_R)}
///          + ||D_e f||^2_{L^2(B_R)} + ||F||^2_{L^2_{-alpha}(B^theta2_R)}.
/// Ladder R_k = R 2^{-k}, k = 0..4, heights scaled along.  The direction must
/// be admissible for the shape: any axis for balls, face-tangential for
/// half-balls, edge-parallel for wedges.
RatioReport caccioppoli_ratio(const ManufacturedTriple& T, const BallSpec& ball,
                              double c, double theta, double theta2,
                              const Vec3& direction, const QuadOptions& qopt = {});

/// High-order analogue for D^beta grad U (beta in the canonical frame):
///   RHS0 = (gp)^{2p} R^{-2p} ||grad U||^2 +
///          sum_j (gp)^{2(p-j)} R^{2(j-p)} (max ||d^eta f||^2 + max ||d^eta F||^2)
/// with p = |beta| and the report's own fitted gamma; 3 dyadic scales.
RatioReport high_order_caccioppoli(const ManufacturedTriple& T, const BallSpec& ball,
                                   const MultiIndex& beta,
                                   const QuadOptions& qopt = {});

/// Shift ratio at differentiability t in [0, 1/2).  For |beta| = 0,
///   LHS = int_0^Y y^alpha ||grad U(.,y)||^2_{H^t(B_{cR})} dy  (Monte-Carlo
/// Slobodeckij part, fixed seed); otherwise
///   LHS = || r^{-t} D^beta grad U ||^2_{L^2_alpha(B^{Y/2}_{cR})}
/// with r the distance to the flat side (1 for interior balls).  RHS0 is the
/// localized shift bound R^{-2p-1}(gp)^{2p}(1+gp)(||grad U||^2 + R^{s+1} Ntilde).
RatioReport shift_ratio(const ManufacturedTriple& T, const BallSpec& ball, double t,
                        const MultiIndex& beta, std::uint64_t mc_budget = 20000,
                        const QuadOptions& qopt = {});

/// Field on a vertical segment {x} x (0, Y) with its y-derivative.
struct YProfileField {
  std::function<double(const Vec3&, double)> value;
  std::function<double(const Vec3&, double)> dy;
};

/// Trace ratio: per sample point,
///   |V(x,0)|^2  vs  ||V||^{1-alpha} ||d_y V||^{1+alpha} + ||V||^2
/// (norms in L^2_alpha(0,Y)); the scale column is the sample ordinal.
RatioReport trace_ratio(const YProfileField& V, const std::vector<Vec3>& xs,
                        double Y, double s, int n_quad = 32);

/// Smooth radial bump supported in the ball of the given radius with its
/// recorded sup norms (used as the localization cutoff).
struct CutoffProfile {
  ScalarField eta;
  Vec3 center{0, 0, 0};
  double radius = 1.0;
  double sup = 1.0;
  double grad_sup = 1.0;
};
CutoffProfile make_mollifier(const Vec3& center, double radius);

/// Localization ratio for the product eta*f in H^{1-s}:
///   LHS  = ||eta f||_{L^2} + |eta f|_{H^{1-s}(B_R)}
///   RHS0 = (R^s ||grad eta||_inf + (R^{s-1}+1) ||eta||_inf) ||f||_{L^2(B_R)}
///          + ||eta||_inf |f|_{H^{1-s}(B_R)}.
/// The cutoff is rebuilt with support B_{cR_k} at each ladder scale; the
/// Slobodeckij seminorms are Monte-Carlo with a fixed seed.
RatioReport localization_ratio(const CutoffProfile& eta, const ScalarField& f,
                               const Vec3& center, double R, double c, double s,
                               std::uint64_t mc_budget = 20000,
                               const QuadOptions& qopt = {});

/// Hardy ratio on the model vertex-edge-face wedge
///   {0 < x1 < mu, 0 < x2 < xi x1, 0 < x3 < xi x2}:
///   || x3^{-t-s} u ||_{L^2}  vs  || x3^{1-t-s} d_{x3} u ||_{L^2},
/// ladder over mu dyadics.  A divergent left side is reported, not thrown.
RatioReport hardy_ratio(const ScalarField& u, double mu, double xi, double t,
                        double s);

struct GrowthEntry {
  MultiIndex beta;
  double A = 0.0;
  bool divergent = false;
};

/// Weighted derivative growth table on a neighborhood:
///   A_beta = || r_bnd^{-t-s} r_v^{b_par} r_e^{b_parperp} r_f^{b_perp}
///              D^beta u ||_{L^2(omega)},
/// only the weights whose feature exists for the kind contribute.
struct GrowthProfile {
  std::vector<GrowthEntry> table;
  double gamma_fit = 0.0;       ///< max_{|b|>=1} (A_b/A_0)^{1/|b|} / |b|
  double gamma_fit_prev = 0.0;  ///< same fit restricted to |b| <= p_max - 1
  bool stable = false;          ///< fits agree within 25%
  bool violation = false;       ///< some A_beta diverged

  std::string to_json() const;
  std::string to_csv() const;
};

GrowthProfile growth_profile(const ScalarField& u, const Polytope& P,
                             const NeighborhoodSpec& spec, const Frame& frame,
                             int p_max, double t, double s,
                             const QuadOptions& qopt = {});

}  // namespace polyfrac
