// Python bindings for the main operations: geometry classification, covering
// certificates, weighted norms, the extension operators, the Galerkin solver,
// and the inequality-verification harness.
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "polyfrac/covering.hpp"
#include "polyfrac/extension.hpp"
#include "polyfrac/fracsolve.hpp"
#include "polyfrac/polytope.hpp"
#include "polyfrac/quadrature.hpp"
#include "polyfrac/rng.hpp"
#include "polyfrac/verify.hpp"

namespace py = pybind11;
using namespace polyfrac;

namespace {

Vec3 to_vec(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }

ScalarField field_from_py(const std::function<double(double, double, double)>& f) {
  return ScalarField::from_function(
      [f](const Vec3& x) { return f(x.x, x.y, x.z); });
}

NeighborhoodSpec spec_for_kind(const Polytope& P, RegionKind kind, double xi) {
  NeighborhoodSpec spec;
  spec.kind = kind;
  spec.xi = xi;
  bool nv = kind == RegionKind::v || kind == RegionKind::ve ||
            kind == RegionKind::vf || kind == RegionKind::vef;
  bool ne = kind == RegionKind::e || kind == RegionKind::ve ||
            kind == RegionKind::ef || kind == RegionKind::vef;
  bool nf = kind == RegionKind::f || kind == RegionKind::vf ||
            kind == RegionKind::ef || kind == RegionKind::vef;
  if (nv) spec.vertex = 0;
  if (ne) spec.edge = nv ? P.edges_at_vertex(0).front() : 0;
  if (nf) {
    if (ne)
      spec.face = P.faces_of_edge(spec.edge).front();
    else if (nv)
      spec.face = P.faces_at_vertex(0).front();
    else
      spec.face = 0;
  }
  return spec;
}

py::dict report_to_dict(const RatioReport& r) {
  py::dict d;
  d["id"] = r.id;
  d["verdict"] = r.verdict;
  d["slope"] = r.slope;
  py::list pts;
  for (const RatioPoint& p : r.points) {
    py::dict q;
    q["scale"] = p.scale;
    q["lhs"] = p.lhs;
    q["rhs0"] = p.rhs0;
    q["ratio"] = p.ratio;
    pts.append(q);
  }
  d["points"] = pts;
  d["json"] = r.to_json();
  return d;
}

}  // namespace

PYBIND11_MODULE(_polyfrac, m) {
  m.doc() = "weighted analytic regularity toolkit for the fractional Laplacian";

  py::class_<NeighborhoodSpec>(m, "NeighborhoodSpec")
      .def_readonly("vertex", &NeighborhoodSpec::vertex)
      .def_readonly("edge", &NeighborhoodSpec::edge)
      .def_readonly("face", &NeighborhoodSpec::face)
      .def_property_readonly(
          "kind", [](const NeighborhoodSpec& s) { return to_string(s.kind); })
      .def("__repr__", [](const NeighborhoodSpec& s) {
        return "<NeighborhoodSpec " + to_string(s.kind) + ">";
      });

  py::class_<Polytope>(m, "Polytope")
      .def_static("from_json_file", &Polytope::from_json_file)
      .def_property_readonly("num_vertices", &Polytope::num_vertices)
      .def_property_readonly("num_edges", &Polytope::num_edges)
      .def_property_readonly("num_faces", &Polytope::num_faces)
      .def("volume", &Polytope::volume)
      .def("diameter", &Polytope::diameter)
      .def("contains",
           [](const Polytope& P, std::array<double, 3> x) {
             return P.contains(to_vec(x));
           })
      .def("dist_boundary",
           [](const Polytope& P, std::array<double, 3> x) {
             return P.dist_boundary(to_vec(x));
           })
      .def("classify",
           [](const Polytope& P, std::array<double, 3> x, double xi) {
             return P.classify(to_vec(x), xi);
           })
      .def("max_admissible_xi", &Polytope::max_admissible_xi);

  m.def("cover_certify",
        [](const Polytope& P, const std::string& kind, double xi, double c,
           double chat, int depth, std::uint64_t samples, std::uint64_t seed) {
          NeighborhoodSpec spec =
              spec_for_kind(P, region_kind_from_string(kind), xi);
          Covering cov = cover(P, spec, c, chat, depth);
          CoverageReport cr = certify_coverage(P, cov, samples, CounterRng(seed));
          OverlapCertificate oc =
              certify_overlap(P, cov, samples, CounterRng(seed + 1));
          py::dict d;
          d["elements"] = cov.elements.size();
          d["misses"] = cr.misses;
          d["coverage_fraction"] = cr.fraction();
          d["N_emp"] = oc.N_emp;
          return d;
        },
        py::arg("polytope"), py::arg("kind"), py::arg("xi") = 0.1,
        py::arg("c") = 0.25, py::arg("chat") = 0.5, py::arg("depth") = 4,
        py::arg("samples") = 2000, py::arg("seed") = 0);

  m.def("weighted_norm_ball",
        [](const std::function<double(double, double, double)>& f,
           std::array<double, 3> center, double R, double a_v) {
          WeightSpec w;
          w.vertex = to_vec(center);
          w.a_v = a_v;
          NormResult n =
              weighted_norm(field_from_py(f), Region::ball(to_vec(center), R), w);
          py::dict d;
          d["value"] = n.value;
          d["error_estimate"] = n.error_estimate;
          d["divergent"] = n.divergent;
          return d;
        },
        py::arg("f"), py::arg("center"), py::arg("R"), py::arg("a_v") = 0.0);

  m.def("gamma_fn", &gamma_fn);
  m.def("d_s_constant", &d_s_constant);
  m.def("C_ds", &C_ds, py::arg("d"), py::arg("s"));

  m.def("dtn",
        [](const std::function<double(double, double, double)>& u,
           std::array<double, 3> x, int d, double s) {
          return dtn(field_from_py(u), to_vec(x), d, s);
        },
        py::arg("u"), py::arg("x"), py::arg("d"), py::arg("s"));
  m.def("frac_laplacian_direct",
        [](const std::function<double(double, double, double)>& u,
           std::array<double, 3> x, int d, double s,
           std::vector<double> kinks) {
          FracDirectOptions opt;
          opt.kinks = std::move(kinks);
          return frac_laplacian_direct(field_from_py(u), to_vec(x), d, s, opt);
        },
        py::arg("u"), py::arg("x"), py::arg("d"), py::arg("s"),
        py::arg("kinks") = std::vector<double>{});

  py::class_<Mesh>(m, "Mesh")
      .def_static("interval", &Mesh::interval, py::arg("a"), py::arg("b"),
                  py::arg("n"))
      .def_static("kuhn_cube",
                  [](std::array<double, 3> lo, std::array<double, 3> hi, int n) {
                    return Mesh::kuhn_cube(to_vec(lo), to_vec(hi), n);
                  })
      .def_readonly("d", &Mesh::d)
      .def_readonly("n_dofs", &Mesh::n_dofs)
      .def_property_readonly("num_nodes",
                             [](const Mesh& m) { return m.nodes.size(); });

  m.def("solve_dirichlet",
        [](const Mesh& mesh, double s,
           const std::function<double(double, double, double)>& f,
           const Polytope* omega) {
          FracSolution u = solve_dirichlet(mesh, s, field_from_py(f), omega);
          py::dict d;
          d["node_values"] = u.node_values;
          d["energy"] = u.energy;
          return d;
        },
        py::arg("mesh"), py::arg("s"), py::arg("f"),
        py::arg("omega") = nullptr);

  m.def("verify_suite",
        [](double s, double t, std::uint64_t budget) {
          QuadOptions q;
          q.tol = 1e-3;
          q.max_shells = 120;
          q.radial_order = 6;
          q.angular_order = 8;
          q.box_cells = 6;
          BallSpec ball{CoveringElement::Shape::ball, {0, 0, 0}, 0.5};
          ManufacturedTriple flat = make_homogeneous_triple(s, 2, 9);
          ManufacturedTriple poly3 = make_polynomial_triple(s, 3, 11);
          ManufacturedTriple harm = make_harmonic_triple(s, 3);
          py::list out;
          out.append(report_to_dict(
              caccioppoli_ratio(flat, ball, 0.5, 0.2, 0.5, {1, 0, 0}, q)));
          out.append(
              report_to_dict(high_order_caccioppoli(harm, ball, {0, 1, 1}, q)));
          out.append(report_to_dict(
              shift_ratio(poly3, ball, t, {0, 0, 0}, budget, q)));
          YProfileField expf{[](const Vec3& x, double y) {
                               return std::exp(-y) * (1.0 + 0.1 * std::sin(x.x));
                             },
                             [](const Vec3& x, double y) {
                               return -std::exp(-y) *
                                      (1.0 + 0.1 * std::sin(x.x));
                             }};
          out.append(report_to_dict(trace_ratio(
              expf, {{0, 0, 0}, {0.5, 0, 0}, {-0.5, 0, 0}, {1, 0, 0}}, 1.0, s)));
          CutoffProfile eta = make_mollifier({0, 0, 0}, 0.1);
          out.append(report_to_dict(
              localization_ratio(eta, ScalarField::constant(1.0), {0, 0, 0},
                                 0.2, 0.5, s, budget, q)));
          FracPowerPoly lin({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1});
          lin.add_term(1.0, 0, 0, 1);
          out.append(report_to_dict(hardy_ratio(lin.as_field(), 0.5, 0.3, t, s)));
          return out;
        },
        py::arg("s") = 0.5, py::arg("t") = 0.25, py::arg("budget") = 20000);

  m.def("growth_table",
        [](const Polytope& P, int pmax, double t, double s) {
          NeighborhoodSpec spec = spec_for_kind(P, RegionKind::f, 0.1);
          Frame fr = P.frame_for(spec);
          const Face& fc = P.face(spec.face);
          Vec3 c0{0, 0, 0};
          for (int vi : fc.loop) c0 += P.vertex(vi);
          c0 = c0 / double(fc.loop.size());
          FracPowerPoly u(c0, fr.g_par, fr.g_parperp, -fc.normal);
          u.add_term(1.0, 0, 0, 0, s);
          QuadOptions q;
          q.tol = 1e-3;
          q.max_shells = 120;
          q.radial_order = 6;
          q.angular_order = 8;
          q.box_cells = 6;
          GrowthProfile g = growth_profile(u.as_field(), P, spec, fr, pmax, t, s, q);
          py::dict d;
          d["gamma_fit"] = g.gamma_fit;
          d["gamma_fit_prev"] = g.gamma_fit_prev;
          d["stable"] = g.stable;
          d["violation"] = g.violation;
          d["json"] = g.to_json();
          return d;
        },
        py::arg("polytope"), py::arg("pmax") = 3, py::arg("t") = 0.45,
        py::arg("s") = 0.5);
}
