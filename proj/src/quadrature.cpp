#include "polyfrac/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

namespace polyfrac {

namespace {

double ipow(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

// Nested central differences along dirs with one Richardson level.
double fd_derivative(const std::function<double(const Vec3&)>& f, const Vec3& x,
                     const std::vector<Vec3>& dirs, double h) {
  std::function<double(const Vec3&, std::size_t, double)> rec =
      [&](const Vec3& p, std::size_t i, double step) -> double {
    if (i == dirs.size()) return f(p);
    return (rec(p + step * dirs[i], i + 1, step) - rec(p - step * dirs[i], i + 1, step)) /
           (2.0 * step);
  };
  double c = rec(x, 0, h);
  double fine = rec(x, 0, h / 2.0);
  return (4.0 * fine - c) / 3.0;
}

}  // namespace

// ---------------------------------------------------------------------------
// fields

ScalarField ScalarField::plane_power(const Vec3& n, double offset, double p) {
  ScalarField f;
  f.value = [n, offset, p](const Vec3& x) {
    double a = dot(n, x) - offset;
    return a > 0.0 ? std::pow(a, p) : 0.0;
  };
  f.deriv = [n, offset, p](const Vec3& x, const std::vector<Vec3>& dirs) {
    double a = dot(n, x) - offset;
    if (a <= 0.0) return 0.0;
    double c = 1.0, e = p;
    for (const Vec3& d : dirs) {
      c *= e * dot(n, d);
      e -= 1.0;
    }
    return c * std::pow(a, e);
  };
  return f;
}

ScalarField ScalarField::radial_power(const Vec3& c, double p) {
  ScalarField f;
  f.value = [c, p](const Vec3& x) { return std::pow(norm(x - c), p); };
  auto val = f.value;
  f.deriv = [c, p, val](const Vec3& x, const std::vector<Vec3>& dirs) -> double {
    Vec3 y = x - c;
    double r = norm(y);
    if (dirs.empty()) return std::pow(r, p);
    if (dirs.size() == 1) return p * std::pow(r, p - 2.0) * dot(y, dirs[0]);
    if (dirs.size() == 2)
      return p * (p - 2.0) * std::pow(r, p - 4.0) * dot(y, dirs[0]) * dot(y, dirs[1]) +
             p * std::pow(r, p - 2.0) * dot(dirs[0], dirs[1]);
    double h = std::pow(std::numeric_limits<double>::epsilon(),
                        1.0 / double(dirs.size() + 2)) * std::max(r, 1.0);
    return fd_derivative(val, x, dirs, h);
  };
  return f;
}

double FracPowerPoly::value(const Vec3& x) const {
  Vec3 y = x - origin_;
  double x1 = dot(a1_, y), x2 = dot(a2_, y), x3 = dot(a3_, y);
  double s = 0.0;
  for (const Term& t : terms_) {
    double f3;
    if (t.mu != 0.0) {
      if (x3 <= 0.0) continue;  // supported on xi3 > 0
      f3 = std::pow(x3, t.p3 + t.mu);
    } else {
      f3 = ipow(x3, t.p3);
    }
    s += t.coef * ipow(x1, t.p1) * ipow(x2, t.p2) * f3;
  }
  return s;
}

FracPowerPoly FracPowerPoly::differentiate(const Vec3& dir) const {
  double d1 = dot(a1_, dir), d2 = dot(a2_, dir), d3 = dot(a3_, dir);
  FracPowerPoly out(origin_, a1_, a2_, a3_);
  std::map<std::tuple<int, int, int, double>, double> acc;
  auto push = [&](double c, int p1, int p2, int p3, double mu) {
    if (c != 0.0) acc[{p1, p2, p3, mu}] += c;
  };
  for (const Term& t : terms_) {
    if (t.p1 > 0) push(t.coef * t.p1 * d1, t.p1 - 1, t.p2, t.p3, t.mu);
    if (t.p2 > 0) push(t.coef * t.p2 * d2, t.p1, t.p2 - 1, t.p3, t.mu);
    double e3 = t.p3 + t.mu;
    if (e3 != 0.0 && d3 != 0.0) {
      if (t.p3 > 0)
        push(t.coef * e3 * d3, t.p1, t.p2, t.p3 - 1, t.mu);
      else
        push(t.coef * e3 * d3, t.p1, t.p2, 0, t.mu - 1.0);
    }
  }
  for (const auto& [k, c] : acc)
    out.add_term(c, std::get<0>(k), std::get<1>(k), std::get<2>(k), std::get<3>(k));
  return out;
}

double FracPowerPoly::deriv(const Vec3& x, const std::vector<Vec3>& dirs) const {
  FracPowerPoly g = *this;
  for (const Vec3& d : dirs) g = g.differentiate(d);
  return g.value(x);
}

FracPowerPoly FracPowerPoly::operator+(const FracPowerPoly& o) const {
  FracPowerPoly out = *this;
  for (const Term& t : o.terms_) out.terms_.push_back(t);
  return out;
}

FracPowerPoly FracPowerPoly::operator*(const FracPowerPoly& o) const {
  FracPowerPoly out(origin_, a1_, a2_, a3_);
  for (const Term& a : terms_)
    for (const Term& b : o.terms_)
      out.add_term(a.coef * b.coef, a.p1 + b.p1, a.p2 + b.p2, a.p3 + b.p3, a.mu + b.mu);
  return out;
}

FracPowerPoly FracPowerPoly::scaled(double c) const {
  FracPowerPoly out(origin_, a1_, a2_, a3_);
  for (const Term& t : terms_) out.add_term(c * t.coef, t.p1, t.p2, t.p3, t.mu);
  return out;
}

ScalarField FracPowerPoly::as_field() const {
  FracPowerPoly copy = *this;
  ScalarField f;
  f.value = [copy](const Vec3& x) { return copy.value(x); };
  f.deriv = [copy](const Vec3& x, const std::vector<Vec3>& dirs) {
    return copy.deriv(x, dirs);
  };
  return f;
}

// ---------------------------------------------------------------------------
// Gauss rules (Golub-Welsch)

namespace {

GaussRule golub_welsch(const std::vector<double>& diag, const std::vector<double>& offdiag,
                       double mu0) {
  int n = (int)diag.size();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    J(i, i) = diag[i];
    if (i + 1 < n) J(i, i + 1) = J(i + 1, i) = offdiag[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = es.eigenvalues()(i);
    double v0 = es.eigenvectors()(0, i);
    r.weights[i] = mu0 * v0 * v0;
  }
  return r;
}

}  // namespace

GaussRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw QuadratureError("gauss_legendre: n must be >= 1");
  std::vector<double> diag(n, 0.0), off(n - 1 > 0 ? n - 1 : 0);
  for (int k = 1; k < n; ++k) off[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
  GaussRule r = golub_welsch(diag, off, 2.0);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = a + (b - a) * (r.nodes[i] + 1.0) / 2.0;
    r.weights[i] *= (b - a) / 2.0;
  }
  return r;
}

JacobiRule jacobi_rule(double alpha, double Y, int n) {
  if (alpha <= -1.0) throw QuadratureError("jacobi_rule: weight y^alpha not integrable");
  if (n < 1) throw QuadratureError("jacobi_rule: n must be >= 1");
  if (Y <= 0.0) throw QuadratureError("jacobi_rule: Y must be positive");
  // weight (1+x)^alpha on (-1,1), i.e. Jacobi with a = 0, b = alpha
  const double a = 0.0, b = alpha;
  std::vector<double> diag(n), off(n > 1 ? n - 1 : 0);
  diag[0] = (b - a) / (a + b + 2.0);
  for (int k = 1; k < n; ++k) {
    double s = 2.0 * k + a + b;
    diag[k] = (b * b - a * a) / (s * (s + 2.0));
    double num = 4.0 * k * (k + a) * (k + b) * (k + a + b);
    double den = s * s * (s + 1.0) * (s - 1.0);
    off[k - 1] = std::sqrt(num / den);
  }
  double mu0 = std::pow(2.0, a + b + 1.0) / (alpha + 1.0);  // Beta(1, alpha+1) factor
  GaussRule g = golub_welsch(diag, off, mu0);
  JacobiRule r;
  r.alpha = alpha;
  r.Y = Y;
  r.nodes.resize(n);
  r.weights.resize(n);
  double scale = std::pow(Y / 2.0, alpha + 1.0);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = Y * (g.nodes[i] + 1.0) / 2.0;
    r.weights[i] = g.weights[i] * scale;
  }
  double check = 0.0;
  for (double w : r.weights) check += w;
  double exact = std::pow(Y, alpha + 1.0) / (alpha + 1.0);
  if (std::abs(check - exact) > 1e-12 * std::max(1.0, exact))
    throw QuadratureError("jacobi_rule: moment check failed");
  return r;
}

// ---------------------------------------------------------------------------
// derivatives

double dir_derivative(const ScalarField& u, const Frame& frame, const MultiIndex& beta,
                      const Vec3& x, double h) {
  std::vector<Vec3> dirs;
  for (int i = 0; i < beta.b_perp; ++i) dirs.push_back(frame.g_perp);
  for (int i = 0; i < beta.b_parperp; ++i) dirs.push_back(frame.g_parperp);
  for (int i = 0; i < beta.b_par; ++i) dirs.push_back(frame.g_par);
  if (dirs.empty()) return u.value(x);
  if (u.deriv) return u.deriv(x, dirs);
  double step = h > 0.0 ? h
                        : std::pow(std::numeric_limits<double>::epsilon(),
                                   1.0 / double(beta.order() + 2));
  return fd_derivative(u.value, x, dirs, step);
}

// ---------------------------------------------------------------------------
// weights and regions

double WeightSpec::weight(const Vec3& x) const {
  double w = 1.0;
  if (vertex && a_v != 0.0) w *= std::pow(norm(x - *vertex), a_v);
  if (edge && a_e != 0.0) {
    Vec3 y = x - edge->first;
    Vec3 perp = y - dot(y, edge->second) * edge->second;
    w *= std::pow(norm(perp), a_e);
  }
  if (face && a_f != 0.0) w *= std::pow(std::abs(dot(face->first, x) - face->second), a_f);
  if (d_bnd != 0.0) {
    if (!r_bnd) throw QuadratureError("WeightSpec: d_bnd set but no r_bnd function");
    w *= std::pow(r_bnd(x), d_bnd);
  }
  return w;
}

Region Region::make_box(const Aabb& b) {
  Region r;
  r.box = b;
  r.contains = [b](const Vec3& x) { return b.contains(x); };
  return r;
}

Region Region::ball(const Vec3& center, double R, bool grade_to_center) {
  Region r;
  r.box = {center - Vec3{R, R, R}, center + Vec3{R, R, R}};
  r.contains = [center, R](const Vec3& x) { return norm(x - center) <= R; };
  if (grade_to_center) {
    r.feature_dim = 0;
    r.feature_point = center;
    r.grading_scale = R;
  }
  return r;
}

Region Region::neighborhood(const Polytope& P, const NeighborhoodSpec& spec) {
  Region r;
  r.box = P.bounding_box();
  const Polytope* Pp = &P;
  NeighborhoodSpec want = spec;
  r.contains = [Pp, want](const Vec3& x) {
    if (!Pp->contains(x)) return false;
    for (const auto& got : Pp->classify(x, want.xi))
      if (got == want) return true;
    return false;
  };
  const double xi = spec.xi, diam = P.diameter();
  switch (spec.kind) {
    case RegionKind::v:
    case RegionKind::ve:
    case RegionKind::vf:
    case RegionKind::vef:
      r.feature_dim = 0;
      r.feature_point = P.vertex(spec.vertex);
      r.grading_scale = xi * diam;  // r_v/diam < xi defines the region
      break;
    case RegionKind::e:
    case RegionKind::ef:
      r.feature_dim = 1;
      r.feature_point = P.vertex(P.edge(spec.edge).v0);
      r.feature_dir = P.edge(spec.edge).dir;
      r.grading_scale = xi * xi * diam;
      break;
    case RegionKind::f:
      r.feature_dim = 2;
      r.feature_point = P.vertex(P.face(spec.face).loop[0]);
      r.feature_dir = P.face(spec.face).normal;
      r.grading_scale = xi * xi * xi * diam;
      break;
    case RegionKind::interior:
      break;
  }
  return r;
}

// ---------------------------------------------------------------------------
// shell integration

namespace {

struct ShellAccum {
  double total = 0.0;
  double tail = 0.0;
  bool divergent = false;
};

// Sum f over one spherical/cylindrical/slab shell of the region.
double shell_sum(const std::function<double(const Vec3&)>& f, const Region& reg,
                 double r_lo, double r_hi, const QuadOptions& opt) {
  GaussRule rad = gauss_legendre(opt.radial_order, r_lo, r_hi);
  double s = 0.0;
  if (reg.feature_dim == 0) {
    GaussRule mu = gauss_legendre(opt.angular_order, -1.0, 1.0);  // cos(theta)
    int nphi = 2 * opt.angular_order;
    double wphi = 2.0 * M_PI / nphi;
    for (std::size_t i = 0; i < rad.nodes.size(); ++i) {
      double r = rad.nodes[i];
      for (std::size_t j = 0; j < mu.nodes.size(); ++j) {
        double c = mu.nodes[j], sn = std::sqrt(std::max(0.0, 1.0 - c * c));
        for (int k = 0; k < nphi; ++k) {
          double phi = (k + 0.5) * wphi;
          Vec3 x = reg.feature_point +
                   r * Vec3{sn * std::cos(phi), sn * std::sin(phi), c};
          if (!reg.contains(x)) continue;
          s += rad.weights[i] * mu.weights[j] * wphi * r * r * f(x);
        }
      }
    }
  } else if (reg.feature_dim == 1) {
    Vec3 d = normalized(reg.feature_dir);
    Vec3 u1 = any_orthogonal(d), u2 = cross(d, u1);
    double t_lo = 1e300, t_hi = -1e300;
    for (int cx = 0; cx < 2; ++cx)
      for (int cy = 0; cy < 2; ++cy)
        for (int cz = 0; cz < 2; ++cz) {
          Vec3 corner{cx ? reg.box.hi.x : reg.box.lo.x, cy ? reg.box.hi.y : reg.box.lo.y,
                      cz ? reg.box.hi.z : reg.box.lo.z};
          double t = dot(corner - reg.feature_point, d);
          t_lo = std::min(t_lo, t);
          t_hi = std::max(t_hi, t);
        }
    GaussRule ax = gauss_legendre(opt.angular_order, t_lo, t_hi);
    int nphi = 2 * opt.angular_order;
    double wphi = 2.0 * M_PI / nphi;
    for (std::size_t i = 0; i < rad.nodes.size(); ++i) {
      double rho = rad.nodes[i];
      for (std::size_t j = 0; j < ax.nodes.size(); ++j) {
        for (int k = 0; k < nphi; ++k) {
          double phi = (k + 0.5) * wphi;
          Vec3 x = reg.feature_point + ax.nodes[j] * d +
                   rho * (std::cos(phi) * u1 + std::sin(phi) * u2);
          if (!reg.contains(x)) continue;
          s += rad.weights[i] * ax.weights[j] * wphi * rho * f(x);
        }
      }
    }
  } else {  // plane slab, both sides
    Vec3 n = normalized(reg.feature_dir);
    Vec3 u1 = any_orthogonal(n), u2 = cross(n, u1);
    double u_lo = 1e300, u_hi = -1e300, v_lo = 1e300, v_hi = -1e300;
    for (int cx = 0; cx < 2; ++cx)
      for (int cy = 0; cy < 2; ++cy)
        for (int cz = 0; cz < 2; ++cz) {
          Vec3 corner{cx ? reg.box.hi.x : reg.box.lo.x, cy ? reg.box.hi.y : reg.box.lo.y,
                      cz ? reg.box.hi.z : reg.box.lo.z};
          Vec3 y = corner - reg.feature_point;
          u_lo = std::min(u_lo, dot(y, u1));
          u_hi = std::max(u_hi, dot(y, u1));
          v_lo = std::min(v_lo, dot(y, u2));
          v_hi = std::max(v_hi, dot(y, u2));
        }
    GaussRule gu = gauss_legendre(opt.angular_order, u_lo, u_hi);
    GaussRule gv = gauss_legendre(opt.angular_order, v_lo, v_hi);
    for (std::size_t i = 0; i < rad.nodes.size(); ++i) {
      for (int side = -1; side <= 1; side += 2) {
        double hgt = side * rad.nodes[i];
        for (std::size_t j = 0; j < gu.nodes.size(); ++j)
          for (std::size_t k = 0; k < gv.nodes.size(); ++k) {
            Vec3 x = reg.feature_point + hgt * n + gu.nodes[j] * u1 + gv.nodes[k] * u2;
            if (!reg.contains(x)) continue;
            s += rad.weights[i] * gu.weights[j] * gv.weights[k] * f(x);
          }
      }
    }
  }
  return s;
}

ShellAccum shell_integrate(const std::function<double(const Vec3&)>& f, const Region& reg,
                           const QuadOptions& opt) {
  ShellAccum acc;
  if (reg.feature_dim < 0) {
    // plain tensor cells over the bounding box
    int m = opt.box_cells;
    GaussRule g = gauss_legendre(4, 0.0, 1.0);
    Vec3 ext = reg.box.extent();
    Vec3 cell{ext.x / m, ext.y / m, ext.z / m};
    double jac = cell.x * cell.y * cell.z;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c)
          for (std::size_t i = 0; i < g.nodes.size(); ++i)
            for (std::size_t j = 0; j < g.nodes.size(); ++j)
              for (std::size_t k = 0; k < g.nodes.size(); ++k) {
                Vec3 x = reg.box.lo + Vec3{(a + g.nodes[i]) * cell.x,
                                           (b + g.nodes[j]) * cell.y,
                                           (c + g.nodes[k]) * cell.z};
                if (!reg.contains(x)) continue;
                acc.total += jac * g.weights[i] * g.weights[j] * g.weights[k] * f(x);
              }
    return acc;
  }

  double D0 = reg.grading_scale;
  if (D0 <= 0.0) {
    // outermost distance from the feature to the box
    for (int cx = 0; cx < 2; ++cx)
      for (int cy = 0; cy < 2; ++cy)
        for (int cz = 0; cz < 2; ++cz) {
          Vec3 corner{cx ? reg.box.hi.x : reg.box.lo.x, cy ? reg.box.hi.y : reg.box.lo.y,
                      cz ? reg.box.hi.z : reg.box.lo.z};
          Vec3 y = corner - reg.feature_point;
          double dist;
          if (reg.feature_dim == 0)
            dist = norm(y);
          else if (reg.feature_dim == 1) {
            Vec3 d = normalized(reg.feature_dir);
            dist = norm(y - dot(y, d) * d);
          } else
            dist = std::abs(dot(y, normalized(reg.feature_dir)));
          D0 = std::max(D0, dist);
        }
  }

  double prev = -1.0, prev2 = -1.0;
  bool seen_mass = false;
  for (int k = 0; k < opt.max_shells; ++k) {
    double hi = D0 * std::pow(0.5, k), lo = hi / 2.0;
    double S = shell_sum(f, reg, lo, hi, opt);
    acc.total += S;
    if (S > 0.0) seen_mass = true;
    if (seen_mass && k >= 4 && prev2 > 0.0 && S >= prev && prev >= prev2) {
      acc.divergent = true;   // shell sums stopped decaying toward the feature
      return acc;
    }
    if (seen_mass && prev > 0.0 && S > 0.0 && S < prev) {
      double q = S / prev;
      double tail = S * q / (1.0 - q);
      if (tail < opt.tol * acc.total) {
        acc.total += tail;
        acc.tail = tail;
        return acc;
      }
    }
    if (seen_mass && S == 0.0 && prev == 0.0) return acc;
    prev2 = prev;
    prev = S;
  }
  // ran out of shells; extrapolate what is left
  if (prev > 0.0 && prev2 > prev) {
    double q = prev / prev2;
    acc.tail = prev * q / (1.0 - q);
    acc.total += acc.tail;
  }
  return acc;
}

}  // namespace

NormResult region_integral(const std::function<double(const Vec3&)>& f,
                           const Region& region, const QuadOptions& opt) {
  ShellAccum acc = shell_integrate(f, region, opt);
  NormResult r;
  r.divergent = acc.divergent;
  r.value = acc.divergent ? std::numeric_limits<double>::infinity() : acc.total;
  r.error_estimate = acc.tail;
  return r;
}

NormResult weighted_norm(const ScalarField& u, const Region& region, const WeightSpec& w,
                         const MultiIndex& beta, const Frame& frame,
                         const QuadOptions& opt) {
  auto integrand = [&](const Vec3& x) {
    double g = w.weight(x) * dir_derivative(u, frame, beta, x);
    return g * g;
  };
  ShellAccum acc = shell_integrate(integrand, region, opt);
  NormResult r;
  r.divergent = acc.divergent;
  if (acc.divergent) {
    r.value = std::numeric_limits<double>::infinity();
  } else {
    r.value = std::sqrt(acc.total);
    r.error_estimate = acc.total > 0.0 ? acc.tail / (2.0 * std::sqrt(acc.total)) : 0.0;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Slobodeckij seminorm

MonteCarloResult slobodeckij(const ScalarField& u, const Region& region, double t,
                             std::uint64_t budget, const CounterRng& rng, int d) {
  if (t <= 0.0 || t >= 1.0) throw QuadratureError("slobodeckij: t must be in (0,1)");
  CounterRng vol_rng = rng.substream(1);
  CounterRng pair_rng = rng.substream(2);

  double box_vol, D;
  if (d == 1) {
    box_vol = region.box.hi.x - region.box.lo.x;
    D = box_vol;
  } else {
    Vec3 e = region.box.extent();
    box_vol = e.x * e.y * e.z;
    D = region.box.diameter();
  }
  auto sample_x = [&](CounterRng& r, bool& ok) -> Vec3 {
    for (int tries = 0; tries < 1000; ++tries) {
      Vec3 x = d == 1 ? Vec3{r.uniform(region.box.lo.x, region.box.hi.x), 0, 0}
                      : r.in_box(region.box);
      if (region.contains(x)) {
        ok = true;
        return x;
      }
    }
    ok = false;
    return {};
  };

  // volume of the region by acceptance rate
  std::uint64_t vtrials = std::max<std::uint64_t>(budget / 10, 2000), vhits = 0;
  for (std::uint64_t i = 0; i < vtrials; ++i) {
    Vec3 x = d == 1 ? Vec3{vol_rng.uniform(region.box.lo.x, region.box.hi.x), 0, 0}
                    : vol_rng.in_box(region.box);
    if (region.contains(x)) ++vhits;
  }
  double V = box_vol * double(vhits) / double(vtrials);

  // offset radius ~ c*r^(1-2t) on (0, D); keeps the estimator variance finite
  double pexp = 2.0 - 2.0 * t;
  double c_norm = pexp / std::pow(D, pexp);

  double sum = 0.0, sum2 = 0.0;
  std::uint64_t n = 0;
  for (std::uint64_t i = 0; i < budget; ++i) {
    bool ok = false;
    Vec3 x = sample_x(pair_rng, ok);
    if (!ok) continue;
    double r = D * std::pow(pair_rng.uniform(), 1.0 / pexp);
    Vec3 h;
    if (d == 1) {
      h = {pair_rng.uniform() < 0.5 ? r : -r, 0, 0};
    } else {
      double mu = pair_rng.uniform(-1.0, 1.0);
      double phi = pair_rng.uniform(0.0, 2.0 * M_PI);
      double sn = std::sqrt(std::max(0.0, 1.0 - mu * mu));
      h = r * Vec3{sn * std::cos(phi), sn * std::sin(phi), mu};
    }
    Vec3 z = x + h;
    double contrib = 0.0;
    if (region.contains(z)) {
      double du = u.value(x) - u.value(z);
      double geom = d == 1 ? 2.0 : 4.0 * M_PI;
      contrib = V * geom * du * du / (c_norm * r * r);
    }
    sum += contrib;
    sum2 += contrib * contrib;
    ++n;
  }
  MonteCarloResult res;
  res.samples = n;
  if (n > 1) {
    res.value = sum / n;
    double var = (sum2 / n - res.value * res.value) / double(n - 1);
    res.std_error = std::sqrt(std::max(0.0, var));
  }
  return res;
}

}  // namespace polyfrac
