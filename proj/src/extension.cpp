#include "polyfrac/extension.hpp"

#include <algorithm>
#include <cmath>

namespace polyfrac {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double gamma_fn(double x) {
  if (x <= 0.0 && x == std::floor(x))
    throw ExtensionError("gamma_fn: pole at non-positive integer");
  return std::tgamma(x);
}

double d_s_constant(double s) {
  if (!(0.0 < s && s < 1.0)) throw ExtensionError("d_s_constant: need s in (0,1)");
  return std::pow(2.0, 2.0 * s - 1.0) * gamma_fn(s) / gamma_fn(1.0 - s);
}

double C_ds(int d, double s) {
  if (!(0.0 < s && s < 1.0)) throw ExtensionError("C_ds: need s in (0,1)");
  if (d != 1 && d != 3) throw ExtensionError("C_ds: d must be 1 or 3");
  return -std::pow(2.0, 2.0 * s) * gamma_fn(s + 0.5 * d) /
         (std::pow(kPi, 0.5 * d) * gamma_fn(-s));
}

HarmonicExtension::HarmonicExtension(ScalarField u, int d, double s,
                                     ExtensionOptions opt)
    : u_(std::move(u)), d_(d), s_(s) {
  if (d != 1 && d != 3) throw ExtensionError("HarmonicExtension: d must be 1 or 3");
  if (!(0.0 < s && s < 1.0))
    throw ExtensionError("HarmonicExtension: need s in (0,1)");

  // Kernel in the substitution w = tan(phi) * omega:
  //   d=1: int_{-pi/2}^{pi/2} u(x - y tan phi) cos^{2s-1}(phi) dphi
  //   d=3: int_0^{pi/2} sin^2(phi) cos^{2s-1}(phi) [sphere average] dphi
  // The endpoint phi = pi/2 carries the cos^{2s-1} weight; substitute
  // psi = pi/2 - phi and integrate psi^{2s-1} times a smooth factor with the
  // matching endpoint-weight rule.
  const double alpha = 2.0 * s - 1.0;
  auto push = [&](double t, double w) {
    t_.push_back(t);
    w_.push_back(w);
  };
  if (d_ == 1) {
    GaussRule mid = gauss_legendre(opt.n_radial, -kPi / 4.0, kPi / 4.0);
    for (int i = 0; i < (int)mid.nodes.size(); ++i)
      push(std::tan(mid.nodes[i]),
           mid.weights[i] * std::pow(std::cos(mid.nodes[i]), alpha));
    JacobiRule end = jacobi_rule(alpha, kPi / 4.0, opt.n_radial);
    for (int i = 0; i < (int)end.nodes.size(); ++i) {
      double psi = end.nodes[i];
      double w = end.weights[i] * std::pow(std::sin(psi) / psi, alpha);
      push(1.0 / std::tan(psi), w);
      push(-1.0 / std::tan(psi), w);
    }
    dirs_ = {Vec3{1, 0, 0}};
    dirw_ = {1.0};
  } else {
    GaussRule mid = gauss_legendre(opt.n_radial, 0.0, kPi / 4.0);
    for (int i = 0; i < (int)mid.nodes.size(); ++i) {
      double phi = mid.nodes[i], sp = std::sin(phi);
      push(std::tan(phi), mid.weights[i] * sp * sp * std::pow(std::cos(phi), alpha));
    }
    JacobiRule end = jacobi_rule(alpha, kPi / 4.0, opt.n_radial);
    for (int i = 0; i < (int)end.nodes.size(); ++i) {
      double psi = end.nodes[i], cp = std::cos(psi);
      push(1.0 / std::tan(psi),
           end.weights[i] * std::pow(std::sin(psi) / psi, alpha) * cp * cp);
    }
    GaussRule polar = gauss_legendre(opt.n_polar, -1.0, 1.0);
    for (int i = 0; i < (int)polar.nodes.size(); ++i) {
      double mu = polar.nodes[i], rho = std::sqrt(std::max(0.0, 1.0 - mu * mu));
      for (int m = 0; m < opt.n_azimuth; ++m) {
        double ph = 2.0 * kPi * (m + 0.5) / opt.n_azimuth;
        dirs_.push_back(Vec3{rho * std::cos(ph), rho * std::sin(ph), mu});
        dirw_.push_back(polar.weights[i] * 2.0 * kPi / opt.n_azimuth);
      }
    }
  }
  double mass = 0.0;
  for (double w : w_) mass += w;
  for (double& w : w_) w /= mass;
  double dmass = 0.0;
  for (double w : dirw_) dmass += w;
  for (double& w : dirw_) w /= dmass;
}

double HarmonicExtension::value(const Vec3& x, double y) const {
  if (y == 0.0) return u_.value(x);
  if (y < 0.0) throw ExtensionError("HarmonicExtension: y must be >= 0");
  double acc = 0.0;
  for (int j = 0; j < (int)t_.size(); ++j) {
    double inner = 0.0;
    for (int k = 0; k < (int)dirs_.size(); ++k)
      inner += dirw_[k] * u_.value(x - (y * t_[j]) * dirs_[k]);
    acc += w_[j] * inner;
  }
  return acc;
}

double HarmonicExtension::dy(const Vec3& x, double y, double rel) const {
  double h = std::max(y * rel, 1e-12);
  return (value(x, y + h) - value(x, std::max(0.0, y - h))) /
         (y - h >= 0.0 ? 2.0 * h : h + y);
}

Vec3 HarmonicExtension::grad_x(const Vec3& x, double y, double h) const {
  Vec3 g{0, 0, 0};
  Vec3 es[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (int i = 0; i < d_; ++i) {
    double gp = value(x + h * es[i], y), gm = value(x - h * es[i], y);
    double gi = (gp - gm) / (2.0 * h);
    if (i == 0) g.x = gi;
    if (i == 1) g.y = gi;
    if (i == 2) g.z = gi;
  }
  return g;
}

namespace {

// second difference averaged over the direction set, at radius r
double second_difference(const ScalarField& u, const Vec3& x, double r,
                         const std::vector<Vec3>& dirs,
                         const std::vector<double>& dirw, double u0) {
  double acc = 0.0;
  for (int k = 0; k < (int)dirs.size(); ++k)
    acc += dirw[k] * (2.0 * u0 - u.value(x + r * dirs[k]) - u.value(x - r * dirs[k]));
  return acc;
}

// direction set shared by the singular-integral style quadratures
void direction_set(int d, int n_polar, int n_azimuth, std::vector<Vec3>& dirs,
                   std::vector<double>& dirw) {
  if (d == 1) {
    dirs = {Vec3{1, 0, 0}};
    dirw = {1.0};
    return;
  }
  GaussRule polar = gauss_legendre(n_polar, -1.0, 1.0);
  for (int i = 0; i < (int)polar.nodes.size(); ++i) {
    double mu = polar.nodes[i], rho = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    for (int m = 0; m < n_azimuth; ++m) {
      double ph = 2.0 * kPi * (m + 0.5) / n_azimuth;
      dirs.push_back(Vec3{rho * std::cos(ph), rho * std::sin(ph), mu});
      dirw.push_back(polar.weights[i] * 2.0 * kPi / n_azimuth);
    }
  }
}

}  // namespace

double dtn(const ScalarField& u, const Vec3& x, int d, double s, DtnOptions opt) {
  if (d != 1 && d != 3) throw ExtensionError("dtn: d must be 1 or 3");
  // In the unsubstituted variable z = y w the Neumann quotient reads
  //   (U(x,y) - u(x)) / y^{2s}
  //     = c int (u(x+z) + u(x-z) - 2 u(x))/2 (y^2 + |z|^2)^{-(d+2s)/2} dz
  // with c the kernel mass 1 / int (1+|w|^2)^{-(d+2s)/2} dw.  This form stays
  // resolvable by dyadic radial panels uniformly as y -> 0, unlike the
  // angle-substituted kernel of HarmonicExtension.
  double c = gamma_fn(0.5 * (d + 2.0 * s)) / (std::pow(kPi, 0.5 * d) * gamma_fn(s));
  std::vector<Vec3> dirs;
  std::vector<double> dirw;
  direction_set(d, opt.n_polar, opt.n_azimuth, dirs, dirw);
  double halving = d == 1 ? 1.0 : 0.5;
  double u0 = u.value(x);

  auto quotient = [&](double y) {
    std::vector<double> edges;
    for (int k = 27; k >= 0; --k) edges.push_back(std::pow(0.5, k));
    for (int k = 1; k <= 40; ++k) edges.push_back(std::pow(2.0, k));
    edges.push_back(y);
    std::sort(edges.begin(), edges.end());
    double acc = 0.0;
    for (size_t p = 0; p + 1 < edges.size(); ++p) {
      GaussRule g = gauss_legendre(12, edges[p], edges[p + 1]);
      for (int i = 0; i < (int)g.nodes.size(); ++i) {
        double r = g.nodes[i];
        double kern = std::pow(y * y + r * r, -0.5 * (d + 2.0 * s)) *
                      std::pow(r, d - 1.0);
        acc -= g.weights[i] * kern *
               second_difference(u, x, r, dirs, dirw, u0);
      }
    }
    return c * halving * acc;
  };

  // quotient(y) = c1 + c2 y^{2-2s} + c3 y^2 + ...; eliminate the two leading
  // corrections along the geometric ladder.
  std::vector<double> L;
  for (int j = 0; j < opt.levels; ++j)
    L.push_back(quotient(opt.y0 * std::pow(0.5, j)));
  auto eliminate = [](const std::vector<double>& a, double q) {
    std::vector<double> out;
    double r = std::pow(0.5, q);
    for (size_t j = 0; j + 1 < a.size(); ++j)
      out.push_back((a[j + 1] - r * a[j]) / (1.0 - r));
    return out;
  };
  std::vector<double> A = eliminate(L, 2.0 - 2.0 * s);
  std::vector<double> B = eliminate(A, 2.0);
  double c1 = B.back();
  return -d_s_constant(s) * 2.0 * s * c1;
}

double frac_laplacian_direct(const ScalarField& u, const Vec3& x, int d, double s,
                             FracDirectOptions opt) {
  if (d != 1 && d != 3)
    throw ExtensionError("frac_laplacian_direct: d must be 1 or 3");
  std::vector<Vec3> dirs;
  std::vector<double> dirw;
  direction_set(d, opt.n_polar, opt.n_azimuth, dirs, dirw);
  double halving = d == 1 ? 1.0 : 0.5;  // +/- omega double counting

  // radial panel edges: dyadic toward 0 and infinity, split (and then
  // geometrically refined) at user-declared kink radii
  std::vector<double> edges;
  for (int k = opt.inner_levels; k >= 0; --k) edges.push_back(opt.r0 * std::pow(0.5, k));
  for (int k = 1; k <= opt.outer_levels; ++k) edges.push_back(opt.r0 * std::pow(2.0, k));
  for (double K : opt.kinks) {
    if (K <= 0.0) continue;
    edges.push_back(K);
    // geometric refinement into the kink from both sides
    for (int j = 1; j <= 30; ++j) {
      double h = K * std::pow(0.5, j);
      edges.push_back(K - h);
      edges.push_back(K + h);
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-300; }),
              edges.end());

  double u0 = u.value(x);
  double acc = 0.0;
  for (size_t p = 0; p + 1 < edges.size(); ++p) {
    if (edges[p] <= 0.0) continue;
    GaussRule g = gauss_legendre(opt.gauss_n, edges[p], edges[p + 1]);
    for (int i = 0; i < (int)g.nodes.size(); ++i) {
      double r = g.nodes[i];
      acc += g.weights[i] * second_difference(u, x, r, dirs, dirw, u0) *
             std::pow(r, -1.0 - 2.0 * s);
    }
  }
  // analytic remainder beyond the last edge, freezing the second difference
  double R = edges.back();
  acc += second_difference(u, x, R, dirs, dirw, u0) * std::pow(R, -2.0 * s) /
         (2.0 * s);
  return C_ds(d, s) * halving * acc;
}

double dirichlet_energy(const HarmonicExtension& U, const Aabb& xbox, double Y,
                        int nx, int ny) {
  double s = U.order();
  JacobiRule yr = jacobi_rule(1.0 - 2.0 * s, Y, ny);
  GaussRule gx = gauss_legendre(nx, xbox.lo.x, xbox.hi.x);
  GaussRule gy = gauss_legendre(nx, xbox.lo.y, xbox.hi.y);
  GaussRule gz = gauss_legendre(nx, xbox.lo.z, xbox.hi.z);
  double acc = 0.0;
  auto density = [&](const Vec3& x, double y) {
    Vec3 g = U.grad_x(x, y);
    double uy = U.dy(x, y);
    return norm2(g) + uy * uy;
  };
  for (int iy = 0; iy < (int)yr.nodes.size(); ++iy) {
    double y = yr.nodes[iy], wy = yr.weights[iy];
    if (U.dim() == 1) {
      for (int i = 0; i < nx; ++i)
        acc += wy * gx.weights[i] * density(Vec3{gx.nodes[i], 0, 0}, y);
    } else {
      for (int i = 0; i < nx; ++i)
        for (int j = 0; j < nx; ++j)
          for (int k = 0; k < nx; ++k)
            acc += wy * gx.weights[i] * gy.weights[j] * gz.weights[k] *
                   density(Vec3{gx.nodes[i], gy.nodes[j], gz.nodes[k]}, y);
    }
  }
  return acc;
}

}  // namespace polyfrac
