#include "polyfrac/fracsolve.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>

#include "polyfrac/quadrature.hpp"

namespace polyfrac {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Mesh Mesh::interval(double a, double b, int n) {
  if (n < 2 || b <= a) throw SolveError("Mesh::interval: bad parameters");
  Mesh m;
  m.d = 1;
  double h = (b - a) / n;
  for (int i = 0; i <= n; ++i) m.nodes.push_back({a + i * h, 0, 0});
  for (int i = 0; i < n; ++i) m.cells.push_back({i, i + 1, -1, -1});
  m.dof.assign(m.nodes.size(), -1);
  for (int i = 1; i < n; ++i) m.dof[i] = m.n_dofs++;
  return m;
}

Mesh Mesh::kuhn_cube(const Vec3& lo, const Vec3& hi, int n) {
  if (n < 1) throw SolveError("Mesh::kuhn_cube: need n >= 1");
  Mesh m;
  m.d = 3;
  auto idx = [n](int i, int j, int k) { return (i * (n + 1) + j) * (n + 1) + k; };
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      for (int k = 0; k <= n; ++k)
        m.nodes.push_back({lo.x + (hi.x - lo.x) * i / n, lo.y + (hi.y - lo.y) * j / n,
                           lo.z + (hi.z - lo.z) * k / n});
  // Kuhn: each subcube splits along vertex-ordering chains, one per
  // permutation of the axes; the resulting mesh is conforming.
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                           {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (const auto& p : perms) {
          int corner[3] = {i, j, k};
          std::array<int, 4> tet{};
          tet[0] = idx(corner[0], corner[1], corner[2]);
          for (int step = 0; step < 3; ++step) {
            corner[p[step]] += 1;
            tet[step + 1] = idx(corner[0], corner[1], corner[2]);
          }
          m.cells.push_back(tet);
        }
  m.kuhn_n = n;
  m.dof.assign(m.nodes.size(), -1);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      for (int k = 0; k <= n; ++k)
        if (i > 0 && i < n && j > 0 && j < n && k > 0 && k < n)
          m.dof[idx(i, j, k)] = m.n_dofs++;
  return m;
}

double Mesh::cell_measure(int c) const {
  const auto& t = cells[c];
  if (d == 1) return std::abs(nodes[t[1]].x - nodes[t[0]].x);
  Vec3 a = nodes[t[1]] - nodes[t[0]], b = nodes[t[2]] - nodes[t[0]],
       e = nodes[t[3]] - nodes[t[0]];
  return std::abs(dot(a, cross(b, e))) / 6.0;
}

Vec3 Mesh::centroid(int c) const {
  const auto& t = cells[c];
  Vec3 s{0, 0, 0};
  for (int m = 0; m <= d; ++m) s += nodes[t[m]];
  return s / double(d + 1);
}

double Mesh::cell_radius(int c) const {
  Vec3 ctr = centroid(c);
  double r = 0.0;
  for (int m = 0; m <= d; ++m) r = std::max(r, norm(nodes[cells[c][m]] - ctr));
  return r;
}

double exterior_weight(const Polytope& omega, const Vec3& x, double s, int n_polar,
                       int n_azimuth) {
  GaussRule polar = gauss_legendre(n_polar, -1.0, 1.0);
  double acc = 0.0;
  for (int i = 0; i < (int)polar.nodes.size(); ++i) {
    double mu = polar.nodes[i], rho = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    for (int m = 0; m < n_azimuth; ++m) {
      double ph = 2.0 * kPi * (m + 0.5) / n_azimuth;
      Vec3 w{rho * std::cos(ph), rho * std::sin(ph), mu};
      double tau = omega.ray_exit(x, w);
      acc += polar.weights[i] * (2.0 * kPi / n_azimuth) * std::pow(tau, -2.0 * s);
    }
  }
  return acc / (2.0 * s);
}

namespace {

// geometric simplex carried through the pair recursion
struct Simp {
  Vec3 v[4];
  int nv = 2;

  Vec3 centroid() const {
    Vec3 s{0, 0, 0};
    for (int i = 0; i < nv; ++i) s += v[i];
    return s / double(nv);
  }
  double radius() const {
    Vec3 c = centroid();
    double r = 0.0;
    for (int i = 0; i < nv; ++i) r = std::max(r, norm(v[i] - c));
    return r;
  }
  double measure() const {
    if (nv == 2) return norm(v[1] - v[0]);
    return std::abs(dot(v[1] - v[0], cross(v[2] - v[0], v[3] - v[0]))) / 6.0;
  }
  // red refinement: 2 halves (d=1) or 8 children via edge midpoints (d=3);
  // returns the child count (allocation-free, the recursion is hot)
  int children(Simp out[8]) const {
    if (nv == 2) {
      Vec3 m = 0.5 * (v[0] + v[1]);
      out[0] = {{v[0], m}, 2};
      out[1] = {{m, v[1]}, 2};
      return 2;
    }
    Vec3 a = v[0], b = v[1], c = v[2], d = v[3];
    Vec3 ab = 0.5 * (a + b), ac = 0.5 * (a + c), ad = 0.5 * (a + d);
    Vec3 bc = 0.5 * (b + c), bd = 0.5 * (b + d), cd = 0.5 * (c + d);
    int n = 0;
    auto add = [&](Vec3 p, Vec3 q, Vec3 r, Vec3 t) {
      out[n].nv = 4;
      out[n].v[0] = p; out[n].v[1] = q; out[n].v[2] = r; out[n].v[3] = t;
      ++n;
    };
    add(a, ab, ac, ad);
    add(ab, b, bc, bd);
    add(ac, bc, c, cd);
    add(ad, bd, cd, d);
    add(ab, ac, ad, bd);
    add(ab, ac, bc, bd);
    add(ac, ad, bd, cd);
    add(ac, bc, bd, cd);
    return n;
  }
};

// quadrature on a simplex (2-pt Gauss / 4-pt degree-2 rule); returns count
int simp_quad(const Simp& S, Vec3 pts[4], double wts[4]) {
  if (S.nv == 2) {
    double g = 0.5 / std::sqrt(3.0);
    Vec3 m = 0.5 * (S.v[0] + S.v[1]), h = 0.5 * (S.v[1] - S.v[0]);
    double L = S.measure();
    pts[0] = m - 2.0 * g * h;
    pts[1] = m + 2.0 * g * h;
    wts[0] = wts[1] = 0.5 * L;
    return 2;
  }
  const double A = 0.5854101966249685, B = 0.1381966011250105;
  double V = S.measure();
  for (int q = 0; q < 4; ++q) {
    double bc[4] = {B, B, B, B};
    bc[q] = A;
    Vec3 p{0, 0, 0};
    for (int m = 0; m < 4; ++m) p += bc[m] * S.v[m];
    pts[q] = p;
    wts[q] = 0.25 * V;
  }
  return 4;
}

// affine P1 basis data: phi_m(x) = dot(g[m], x) + b[m] on the parent cell
struct CellBasis {
  std::array<Vec3, 4> g{};
  std::array<double, 4> b{};
  std::array<int, 4> nodes{};
  int nv = 2;

  double eval(int m, const Vec3& x) const { return dot(g[m], x) + b[m]; }
};

CellBasis cell_basis(const Mesh& mesh, int c) {
  CellBasis cb;
  cb.nv = mesh.d + 1;
  const auto& t = mesh.cells[c];
  for (int m = 0; m < cb.nv; ++m) cb.nodes[m] = t[m];
  if (mesh.d == 1) {
    double x0 = mesh.nodes[t[0]].x, x1 = mesh.nodes[t[1]].x, h = x1 - x0;
    cb.g[0] = {-1.0 / h, 0, 0};
    cb.b[0] = x1 / h;
    cb.g[1] = {1.0 / h, 0, 0};
    cb.b[1] = -x0 / h;
  } else {
    Eigen::Matrix4d M;
    for (int m = 0; m < 4; ++m) {
      const Vec3& p = mesh.nodes[t[m]];
      M(m, 0) = p.x;
      M(m, 1) = p.y;
      M(m, 2) = p.z;
      M(m, 3) = 1.0;
    }
    Eigen::Matrix4d inv = M.inverse();
    for (int m = 0; m < 4; ++m) {
      cb.g[m] = {inv(0, m), inv(1, m), inv(2, m)};
      cb.b[m] = inv(3, m);
    }
  }
  return cb;
}

// pair state for the nonlocal assembly of one (cell, cell) interaction.
// The local matrix uses a fixed slot layout [a0..a_{nva-1}, b0..b_{nvb-1}]
// (stride 8); duplicate nodes of adjacent cells simply scatter twice, which
// is the same sum by bilinearity.  Only the upper triangle is accumulated.
struct PairContext {
  const CellBasis* ca;
  const CellBasis* cb;
  double exponent;  // d + 2s
  double* acc;      // 8 x 8 slot matrix
};

void pair_leaf(const PairContext& ctx, const Simp& A, const Simp& B) {
  Vec3 xa[4], xb[4];
  double wa[4], wb[4];
  int na = simp_quad(A, xa, wa);
  int nb = simp_quad(B, xb, wb);
  int nva = ctx.ca->nv, nvb = ctx.cb->nv, nl = nva + nvb;
  double da[8];
  for (int qa = 0; qa < na; ++qa) {
    for (int m = 0; m < nva; ++m) da[m] = ctx.ca->eval(m, xa[qa]);
    for (int qb = 0; qb < nb; ++qb) {
      double r2 = norm2(xa[qa] - xb[qb]);
      if (r2 == 0.0) continue;
      double k = wa[qa] * wb[qb] * std::pow(r2, -0.5 * ctx.exponent);
      for (int m = 0; m < nvb; ++m) da[nva + m] = -ctx.cb->eval(m, xb[qb]);
      for (int i = 0; i < nl; ++i) {
        double kdi = k * da[i];
        for (int j = i; j < nl; ++j) ctx.acc[i * 8 + j] += kdi * da[j];
      }
    }
  }
}

void pair_recurse(const PairContext& ctx, const Simp& A, const Simp& B, double eta,
                  int depth) {
  double gap = norm(A.centroid() - B.centroid()) - A.radius() - B.radius();
  if (gap > eta * std::max(A.radius(), B.radius())) {
    pair_leaf(ctx, A, B);
    return;
  }
  if (depth == 0) return;  // integrable remainder, dropped at the finest level
  Simp kidsA[8], kidsB[8];
  int na = A.children(kidsA), nb = B.children(kidsB);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j)
      pair_recurse(ctx, kidsA[i], kidsB[j], eta, depth - 1);
}

Simp cell_simp(const Mesh& mesh, int c) {
  Simp s;
  s.nv = mesh.d + 1;
  for (int m = 0; m < s.nv; ++m) s.v[m] = mesh.nodes[mesh.cells[c][m]];
  return s;
}

// exterior weight for the 1-d interval (a, b)
double rho_interval(double a, double b, double x, double s) {
  return (std::pow(x - a, -2.0 * s) + std::pow(b - x, -2.0 * s)) / (2.0 * s);
}

}  // namespace

std::vector<double> assemble_stiffness(const Mesh& mesh, double s,
                                       const Polytope* omega, SolveOptions opt) {
  if (mesh.d == 3 && omega == nullptr)
    throw SolveError("assemble_stiffness: d = 3 needs the exterior geometry");
  const int n = mesh.n_dofs;
  std::vector<double> A(std::size_t(n) * n, 0.0);
  const double Cds = C_ds(mesh.d, s);
  const double expo = mesh.d + 2.0 * s;

  std::vector<CellBasis> basis;
  for (int c = 0; c < mesh.num_cells(); ++c) basis.push_back(cell_basis(mesh, c));

  // interaction part over Omega x Omega.  Touching pairs are expensive
  // (graded subdivision), so go deep only in 1-d where it is cheap.
  const int depth = opt.max_depth > 0 ? opt.max_depth : (mesh.d == 1 ? 12 : 4);
  const int nv = mesh.d + 1;
  auto compute_pair = [&](int ca, int cb, double* acc) {
    std::fill(acc, acc + 64, 0.0);
    PairContext ctx{&basis[ca], &basis[cb], expo, acc};
    pair_recurse(ctx, cell_simp(mesh, ca), cell_simp(mesh, cb), opt.eta, depth);
    for (int i = 0; i < 2 * nv; ++i)
      for (int j = i + 1; j < 2 * nv; ++j) acc[j * 8 + i] = acc[i * 8 + j];
  };
  // On the uniform Kuhn lattice the pair integral depends only on the two
  // tetrahedron types and the subcube offset (the kernel is translation
  // invariant and the hat functions translate), so each interaction class
  // is integrated once and reused across the mesh.
  const int kn = mesh.d == 3 ? mesh.kuhn_n : 0;
  std::unordered_map<long long, std::array<double, 64>> classes;
  std::array<double, 64> scratch;
  for (int ca = 0; ca < mesh.num_cells(); ++ca)
    for (int cb = ca; cb < mesh.num_cells(); ++cb) {
      const double* lm;
      if (kn > 0) {
        int sa = ca / 6, ta = ca % 6, sb = cb / 6, tb = cb % 6;
        int dk = sb % kn - sa % kn;
        int dj = (sb / kn) % kn - (sa / kn) % kn;
        int di = sb / (kn * kn) - sa / (kn * kn);
        long long base = 2 * kn - 1;
        long long key = ((((long long)ta * 6 + tb) * base + (di + kn - 1)) * base +
                         (dj + kn - 1)) * base + (dk + kn - 1);
        auto [it, fresh] = classes.try_emplace(key);
        if (fresh) compute_pair(ca, cb, it->second.data());
        lm = it->second.data();
      } else {
        compute_pair(ca, cb, scratch.data());
        lm = scratch.data();
      }
      double factor = 0.5 * Cds * (ca == cb ? 1.0 : 2.0);
      for (int i = 0; i < 2 * nv; ++i) {
        int node_i = i < nv ? mesh.cells[ca][i] : mesh.cells[cb][i - nv];
        int gi = mesh.dof[node_i];
        if (gi < 0) continue;
        for (int j = 0; j < 2 * nv; ++j) {
          int node_j = j < nv ? mesh.cells[ca][j] : mesh.cells[cb][j - nv];
          int gj = mesh.dof[node_j];
          if (gj < 0) continue;
          A[std::size_t(gi) * n + gj] += factor * lm[i * 8 + j];
        }
      }
    }

  // exterior part: C * int_Omega phi_i phi_j rho
  double a1 = mesh.nodes.front().x, b1 = mesh.nodes.back().x;
  auto rho = [&](const Vec3& x) {
    return mesh.d == 1 ? rho_interval(a1, b1, x.x, s)
                       : exterior_weight(*omega, x, s, opt.sphere_polar,
                                         opt.sphere_azimuth);
  };
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellBasis& cb = basis[c];
    // graded subdivision toward the boundary keeps the rho singularity tame
    std::vector<Simp> panels;
    std::function<void(const Simp&, int)> split = [&](const Simp& S, int lvl) {
      bool near_bnd;
      if (mesh.d == 1) {
        double lo = std::min(S.v[0].x, S.v[1].x), hi = std::max(S.v[0].x, S.v[1].x);
        near_bnd = std::min(lo - a1, b1 - hi) < 0.5 * (hi - lo);
      } else {
        near_bnd = false;
        for (int m = 0; m < S.nv; ++m)
          if (omega->dist_boundary(S.v[m]) < 1e-12) near_bnd = true;
      }
      int cap = mesh.d == 1 ? opt.boundary_levels : 2;
      if (!near_bnd || lvl >= cap) {
        panels.push_back(S);
        return;
      }
      Simp kids[8];
      int nk = S.children(kids);
      for (int m = 0; m < nk; ++m) split(kids[m], lvl + 1);
    };
    split(cell_simp(mesh, c), 0);
    Vec3 pts[4];
    double wts[4];
    for (const Simp& S : panels) {
      int nq = simp_quad(S, pts, wts);
      for (int q = 0; q < nq; ++q) {
        double w = wts[q] * rho(pts[q]);
        for (int i = 0; i < cb.nv; ++i) {
          int gi = mesh.dof[cb.nodes[i]];
          if (gi < 0) continue;
          double pi = cb.eval(i, pts[q]);
          for (int j = 0; j < cb.nv; ++j) {
            int gj = mesh.dof[cb.nodes[j]];
            if (gj < 0) continue;
            A[std::size_t(gi) * n + gj] += Cds * w * pi * cb.eval(j, pts[q]);
          }
        }
      }
    }
  }
  return A;
}

std::vector<double> assemble_load(const Mesh& mesh, const ScalarField& f) {
  std::vector<double> b(mesh.n_dofs, 0.0);
  Vec3 pts[4];
  double wts[4];
  for (int c = 0; c < mesh.num_cells(); ++c) {
    CellBasis cb = cell_basis(mesh, c);
    int nq = simp_quad(cell_simp(mesh, c), pts, wts);
    for (int q = 0; q < nq; ++q) {
      double w = wts[q] * f.value(pts[q]);
      for (int m = 0; m < cb.nv; ++m) {
        int gi = mesh.dof[cb.nodes[m]];
        if (gi >= 0) b[gi] += w * cb.eval(m, pts[q]);
      }
    }
  }
  return b;
}

double FracSolution::value(const Vec3& x) const {
  if (mesh.d == 1) {
    double a = mesh.nodes.front().x, b = mesh.nodes.back().x;
    if (x.x <= a || x.x >= b) return 0.0;
    double h = (b - a) / (mesh.nodes.size() - 1);
    int c = std::min((int)((x.x - a) / h), (int)mesh.nodes.size() - 2);
    double t = (x.x - mesh.nodes[c].x) / (mesh.nodes[c + 1].x - mesh.nodes[c].x);
    return (1.0 - t) * node_values[c] + t * node_values[c + 1];
  }
  for (int c = 0; c < mesh.num_cells(); ++c) {
    CellBasis cb = cell_basis(mesh, c);
    double val = 0.0;
    bool inside = true;
    for (int m = 0; m < 4; ++m) {
      double lam = cb.eval(m, x);
      if (lam < -1e-10) {
        inside = false;
        break;
      }
      val += lam * node_values[cb.nodes[m]];
    }
    if (inside) return val;
  }
  return 0.0;
}

FracSolution solve_dirichlet(const Mesh& mesh, double s, const ScalarField& f,
                             const Polytope* omega, SolveOptions opt) {
  std::vector<double> A = assemble_stiffness(mesh, s, omega, opt);
  std::vector<double> b = assemble_load(mesh, f);
  const int n = mesh.n_dofs;
  Eigen::Map<const Eigen::MatrixXd> Am(A.data(), n, n);  // symmetric, order moot
  Eigen::Map<const Eigen::VectorXd> bm(b.data(), n);
  Eigen::VectorXd x = Eigen::MatrixXd(Am).ldlt().solve(bm);
  FracSolution sol;
  sol.mesh = mesh;
  sol.s = s;
  sol.node_values.assign(mesh.nodes.size(), 0.0);
  for (size_t i = 0; i < mesh.nodes.size(); ++i)
    if (mesh.dof[i] >= 0) sol.node_values[i] = x[mesh.dof[i]];
  sol.energy = x.dot(Am * x);
  return sol;
}

}  // namespace polyfrac
