#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "polyfrac/extension.hpp"
#include "polyfrac/field.hpp"
#include "polyfrac/polytope.hpp"

namespace polyfrac {

class SolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Simplicial mesh in dimension 1 (intervals) or 3 (tetrahedra) with
/// homogeneous exterior condition: boundary nodes carry no degree of freedom.
struct Mesh {
  int d = 1;
  std::vector<Vec3> nodes;
  std::vector<std::array<int, 4>> cells;  ///< d+1 valid entries, rest -1
  std::vector<int> dof;                   ///< node -> free index, -1 on boundary
  int n_dofs = 0;
  int kuhn_n = 0;  ///< lattice resolution when built by kuhn_cube, else 0

  static Mesh interval(double a, double b, int n);
  /// Kuhn triangulation: n^3 subcubes, six tetrahedra each.
  static Mesh kuhn_cube(const Vec3& lo, const Vec3& hi, int n);

  double cell_measure(int c) const;
  Vec3 centroid(int c) const;
  double cell_radius(int c) const;
  int num_cells() const { return (int)cells.size(); }
};

struct SolveOptions {
  double eta = 1.0;        ///< admissibility: separated if gap > eta*(r+r')
  int max_depth = 0;       ///< subdivision depth for touching pairs; 0 = auto
  int sphere_polar = 6;    ///< exterior-weight sphere rule (d = 3)
  int sphere_azimuth = 12;
  int boundary_levels = 20;  ///< graded panels for the exterior weight (d = 1)
};

/// Exterior weight rho(x) = int_{Omega^c} |x-y|^{-d-2s} dy, evaluated as
/// (1/2s) int_{S^{d-1}} tau(x,w)^{-2s} dsigma with tau the exit length.
double exterior_weight(const Polytope& omega, const Vec3& x, double s,
                       int n_polar = 8, int n_azimuth = 16);

/// Symmetric stiffness matrix (row-major, n_dofs x n_dofs) of the bilinear
/// form
///   a(u,v) = C(d,s)/2 iint_{Omega x Omega} (du)(dv) |x-y|^{-d-2s} dy dx
///            + C(d,s) int_Omega u v rho dx.
/// For d = 3 `omega` supplies the exterior geometry; for d = 1 the interval
/// endpoints do.
std::vector<double> assemble_stiffness(const Mesh& mesh, double s,
                                       const Polytope* omega,
                                       SolveOptions opt = {});

std::vector<double> assemble_load(const Mesh& mesh, const ScalarField& f);

struct FracSolution {
  Mesh mesh;
  double s = 0.5;
  std::vector<double> node_values;  ///< one per node, 0 on boundary
  double energy = 0.0;              ///< a(u_h, u_h)

  double value(const Vec3& x) const;  ///< 0 outside the mesh
};

FracSolution solve_dirichlet(const Mesh& mesh, double s, const ScalarField& f,
                             const Polytope* omega = nullptr,
                             SolveOptions opt = {});

}  // namespace polyfrac
