#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "polyfrac/vec3.hpp"

namespace polyfrac {

/// Scalar field on R^3. `value` is required; `deriv`, when set, returns the
/// iterated directional derivative D_{d1}...D_{dk} u(x) analytically and lets
/// consumers skip finite differences.
struct ScalarField {
  std::function<double(const Vec3&)> value;
  std::function<double(const Vec3&, const std::vector<Vec3>&)> deriv;

  double operator()(const Vec3& x) const { return value(x); }

  static ScalarField constant(double c) {
    ScalarField f;
    f.value = [c](const Vec3&) { return c; };
    f.deriv = [c](const Vec3&, const std::vector<Vec3>& dirs) {
      return dirs.empty() ? c : 0.0;
    };
    return f;
  }

  static ScalarField from_function(std::function<double(const Vec3&)> v) {
    ScalarField f;
    f.value = std::move(v);
    return f;
  }

  /// (dot(n, x) - offset)^p on the halfspace dot(n,x) >= offset, 0 elsewhere.
  /// n need not be unit; p may be fractional.
  static ScalarField plane_power(const Vec3& n, double offset, double p);

  /// |x - c|^p. Analytic derivatives up to order 2; beyond that callers fall
  /// back to finite differences.
  static ScalarField radial_power(const Vec3& c, double p);
};

/// Sum of terms  coef * xi1^p1 * xi2^p2 * xi3^(p3 + mu)  in an orthonormal
/// local frame xi_i = dot(a_i, x - origin).  mu is a fixed real exponent
/// shared per term; the class is closed under directional differentiation,
/// addition and multiplication, which keeps arbitrary-order derivatives exact.
/// Terms with fractional total exponent on xi3 vanish for xi3 < 0.
class FracPowerPoly {
 public:
  struct Term {
    double coef = 0.0;
    int p1 = 0, p2 = 0, p3 = 0;
    double mu = 0.0;  // extra real exponent on xi3
  };

  FracPowerPoly() = default;
  FracPowerPoly(Vec3 origin, Vec3 a1, Vec3 a2, Vec3 a3)
      : origin_(origin), a1_(a1), a2_(a2), a3_(a3) {}

  void add_term(double coef, int p1, int p2, int p3, double mu = 0.0) {
    if (coef != 0.0) terms_.push_back({coef, p1, p2, p3, mu});
  }

  const std::vector<Term>& terms() const { return terms_; }

  double value(const Vec3& x) const;
  FracPowerPoly differentiate(const Vec3& dir) const;
  double deriv(const Vec3& x, const std::vector<Vec3>& dirs) const;

  FracPowerPoly operator+(const FracPowerPoly& o) const;
  FracPowerPoly operator*(const FracPowerPoly& o) const;  // same frame required
  FracPowerPoly scaled(double c) const;

  ScalarField as_field() const;

 private:
  Vec3 origin_{0, 0, 0};
  Vec3 a1_{1, 0, 0}, a2_{0, 1, 0}, a3_{0, 0, 1};
  std::vector<Term> terms_;
};

}  // namespace polyfrac
