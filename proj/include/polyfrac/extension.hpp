#pragma once

#include <stdexcept>
#include <vector>

#include "polyfrac/field.hpp"
#include "polyfrac/quadrature.hpp"
#include "polyfrac/vec3.hpp"

namespace polyfrac {

class ExtensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Gamma function with explicit pole detection.
double gamma_fn(double x);

/// Normalization d_s = 2^{2s-1} Gamma(s) / Gamma(1-s) of the
/// Dirichlet-to-Neumann limit of the degenerate harmonic extension.
double d_s_constant(double s);

/// Positive normalization constant of the singular-integral form of the
/// fractional Laplacian in dimension d:
///   C(d,s) = -2^{2s} Gamma(s + d/2) / (pi^{d/2} Gamma(-s))  > 0.
double C_ds(int d, double s);

struct ExtensionOptions {
  int n_radial = 48;    ///< radial kernel nodes per panel
  int n_polar = 12;     ///< polar sphere nodes (d = 3)
  int n_azimuth = 24;   ///< azimuthal sphere nodes (d = 3)
};

/// Degenerate-harmonic extension of u to the upper half space, realized by
/// convolution with the Poisson kernel of the extension problem,
///   U(x, y) = int u(x - y w) (1 + |w|^2)^{-(d+2s)/2} dw / (same with u = 1).
/// The kernel quadrature (tan substitution with endpoint-weight rules) is
/// precomputed once per (d, s).
class HarmonicExtension {
 public:
  HarmonicExtension(ScalarField u, int d, double s, ExtensionOptions opt = {});

  double value(const Vec3& x, double y) const;
  /// d/dy by central differencing at relative step `rel`
  double dy(const Vec3& x, double y, double rel = 1e-3) const;
  /// spatial gradient (first d components) by central differencing
  Vec3 grad_x(const Vec3& x, double y, double h = 1e-5) const;

  int dim() const { return d_; }
  double order() const { return s_; }
  const ScalarField& trace() const { return u_; }

 private:
  ScalarField u_;
  int d_;
  double s_;
  std::vector<double> t_;        ///< kernel offsets u(x - y t w)
  std::vector<double> w_;        ///< kernel weights, normalized to unit mass
  std::vector<Vec3> dirs_;       ///< sphere directions (d = 3), {e1} for d = 1
  std::vector<double> dirw_;     ///< sphere weights
};

struct DtnOptions {
  double y0 = 0.5;        ///< top of the geometric ladder
  int levels = 14;        ///< ladder depth, y_j = y0 2^{-j}
  int n_polar = 12;       ///< sphere quadrature (d = 3)
  int n_azimuth = 24;
};

/// Dirichlet-to-Neumann value at x: the limit
///   -d_s lim_{y->0} y^{1-2s} dU/dy (x, y),
/// which equals the fractional Laplacian (-Delta)^s u(x).  Estimated from
/// (U - u) / y^{2s} on a geometric ladder with one-term elimination of the
/// y^{2-2s} correction.
double dtn(const ScalarField& u, const Vec3& x, int d, double s,
           DtnOptions opt = {});

struct FracDirectOptions {
  double r0 = 1.0;          ///< base radius of the dyadic radial panels
  int inner_levels = 27;    ///< dyadic panels toward r = 0 (deeper panels only
                            ///< amplify second-difference rounding noise)
  int outer_levels = 40;    ///< dyadic panels toward r = infinity
  int gauss_n = 12;         ///< Gauss order per radial panel
  int n_polar = 12;
  int n_azimuth = 24;
  std::vector<double> kinks;  ///< radii |z| where the second difference kinks
};

/// Fractional Laplacian by the second-difference singular integral
///   (-Delta)^s u(x) = C(d,s)/2 int (2u(x) - u(x+z) - u(x-z)) |z|^{-d-2s} dz.
double frac_laplacian_direct(const ScalarField& u, const Vec3& x, int d, double s,
                             FracDirectOptions opt = {});

/// Weighted Dirichlet energy of the extension over box x (0, Y):
///   int_box int_0^Y y^{1-2s} |grad U|^2 dy dx.
double dirichlet_energy(const HarmonicExtension& U, const Aabb& xbox, double Y,
                        int nx = 12, int ny = 16);

}  // namespace polyfrac
