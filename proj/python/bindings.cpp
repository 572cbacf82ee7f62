#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "isolab/forests.hpp"
#include "isolab/harmonic.hpp"
#include "isolab/isoperimetry.hpp"
#include "isolab/relsim.hpp"
#include "isolab/report.hpp"
#include "isolab/run.hpp"

namespace py = pybind11;
using namespace isolab;

namespace {

std::pair<long long, long long> rat(const Rational& r) { return {r.num, r.den}; }

GeneratingSet gens_for(const GroupSpec& spec, const std::string& gens) {
  return gens.empty() ? default_generators(spec) : parse_generating_set(spec, gens);
}

py::dict stats_dict(const DegreeStats& s) {
  py::dict d;
  d["samples"] = s.samples;
  d["mean_degree"] = s.mean_degree;
  d["variance"] = s.variance;
  d["ci99"] = s.ci99_half;
  d["cost_estimate"] = s.cost_estimate;
  d["beta1_estimate"] = s.beta1_estimate;
  d["beta1_ci99"] = s.beta1_ci99_half;
  return d;
}

}  // namespace

PYBIND11_MODULE(_isolab, m) {
  m.doc() = "isoperimetric constants, spanning forests and finite relation models";
  m.attr("__version__") = kToolVersion;

  py::class_<GroupSpec>(m, "Group")
      .def_property_readonly("text", [](const GroupSpec& g) { return g.text; })
      .def_property_readonly("n_generators", &GroupSpec::total_rank)
      .def_property_readonly("generator_names",
                             [](const GroupSpec& g) { return g.generator_names; })
      .def("__repr__", [](const GroupSpec& g) { return "<Group " + g.text + ">"; });

  m.def("parse_group", &parse_group_spec, py::arg("text"),
        "Parse a group spec: F<k> | Z[^d] | Zmod<m>[^d] | (A) x (B)");

  py::class_<CayleyBall>(m, "Ball")
      .def_property_readonly("radius", [](const CayleyBall& b) { return b.radius; })
      .def_property_readonly("n_vertices", [](const CayleyBall& b) { return b.vertices.size(); })
      .def_property_readonly("n_edges", [](const CayleyBall& b) { return b.edges.size(); })
      .def_property_readonly("sphere", [](const CayleyBall& b) { return b.sphere; })
      .def_property_readonly("interior_count",
                             [](const CayleyBall& b) { return b.interior_count; })
      .def("labels",
           [](const CayleyBall& b) {
             std::vector<std::string> out;
             for (const auto& v : b.vertices) out.push_back(element_label(b.spec, v));
             return out;
           })
      .def("edges",
           [](const CayleyBall& b) {
             std::vector<std::tuple<int, int, int>> out;
             for (const auto& e : b.edges) out.emplace_back(e.u, e.v, e.label);
             return out;
           })
      .def("to_json", [](const CayleyBall& b) { return dump_json(ball_to_json(b)); })
      .def("__repr__", [](const CayleyBall& b) {
        return "<Ball " + b.spec.text + " r=" + std::to_string(b.radius) + " |V|=" +
               std::to_string(b.vertices.size()) + ">";
      });

  m.def(
      "ball",
      [](const GroupSpec& g, int radius, const std::string& gens) {
        return cayley_ball(g, gens_for(g, gens), radius);
      },
      py::arg("group"), py::arg("radius"), py::arg("gens") = "");

  m.def(
      "edge_boundary",
      [](const CayleyBall& b, const std::vector<int>& members) {
        return edge_boundary(make_vertex_set(b, members));
      },
      py::arg("ball"), py::arg("members"));
  m.def(
      "inner_boundary",
      [](const CayleyBall& b, const std::vector<int>& members) {
        return inner_boundary(make_vertex_set(b, members));
      },
      py::arg("ball"), py::arg("members"));
  m.def(
      "kazhdan_ratio",
      [](const CayleyBall& b, const std::vector<int>& members) {
        return kazhdan_ratio(make_vertex_set(b, members));
      },
      py::arg("ball"), py::arg("members"));

  m.def(
      "min_ratio",
      [](const CayleyBall& b, int max_size, long long budget, int jobs) {
        MinRatioResult r = min_ratio_exact(b, max_size, budget, jobs);
        py::dict d;
        d["ratio"] = rat(r.ratio);
        d["members"] = r.members;
        d["sets_visited"] = r.sets_visited;
        return d;
      },
      py::arg("ball"), py::arg("max_size"), py::arg("budget") = 20'000'000LL,
      py::arg("jobs") = 1);

  m.def(
      "profile",
      [](const GroupSpec& g, int r_max, const std::string& gens) {
        std::vector<py::dict> rows;
        for (const auto& row : ratio_profile(g, gens_for(g, gens), r_max)) {
          py::dict d;
          d["n"] = row.n;
          d["ball"] = row.ball_size;
          d["boundary"] = row.boundary;
          d["ratio"] = rat(row.ratio);
          d["ratio_float"] = row.ratio.value();
          rows.push_back(std::move(d));
        }
        return rows;
      },
      py::arg("group"), py::arg("r_max"), py::arg("gens") = "");

  m.def(
      "growth",
      [](const GroupSpec& g, int r_max, const std::string& gens) {
        CayleyBall ball = cayley_ball(g, gens_for(g, gens), r_max);
        std::vector<long long> sizes(r_max + 1, 0);
        for (int s : ball.sphere) ++sizes[s];
        for (int i = 1; i <= r_max; ++i) sizes[i] += sizes[i - 1];
        GrowthEstimate est = growth_rate(sizes);
        py::dict d;
        d["estimate"] = est.estimate;
        d["nth_root"] = est.nth_root;
        d["ball_sizes"] = sizes;
        d["sphere_ratios"] = est.sphere_ratios;
        return d;
      },
      py::arg("group"), py::arg("r_max"), py::arg("gens") = "");

  m.def(
      "beta1_estimate",
      [](const GroupSpec& g, int radius, const std::string& mode, long long samples,
         std::uint64_t seed, const std::string& gens, int jobs) {
        return stats_dict(estimate_beta1(g, gens_for(g, gens), radius, parse_forest_mode(mode),
                                         samples, seed, jobs));
      },
      py::arg("group"), py::arg("radius"), py::arg("mode") = "free",
      py::arg("samples") = 1000, py::arg("seed") = kDefaultSeed, py::arg("gens") = "",
      py::arg("jobs") = 1);

  m.def(
      "wilson_tree",
      [](int n, const std::vector<std::pair<int, int>>& edges, int root, std::uint64_t seed) {
        FiniteGraph g(n);
        for (auto [u, v] : edges) g.add_edge(u, v);
        return wilson_ust(g, root, seed).edge_ids;
      },
      py::arg("n"), py::arg("edges"), py::arg("root") = 0, py::arg("seed") = kDefaultSeed);

  m.def(
      "center_trace_sweep",
      [](const GroupSpec& g, const std::vector<int>& radii, const std::string& gens) {
        std::vector<py::dict> rows;
        for (int r : radii) {
          ChainComplex cc = make_chain_complex(cayley_ball(g, gens_for(g, gens), r));
          HarmonicOptions opts;
          opts.build_basis = false;
          HarmonicSpace h = harmonic_projector(cc, opts);
          py::dict d;
          d["radius"] = r;
          d["trace"] = h.center_trace();
          d["dim"] = h.dim();
          rows.push_back(std::move(d));
        }
        return rows;
      },
      py::arg("group"), py::arg("radii"), py::arg("gens") = "");

  m.def(
      "hzero",
      [](int N, int n, const std::string& eps) {
        HzeroGraphing hz = build_hzero_graphing(N, n, parse_rational(eps));
        WitnessFamily w = cycle_power_witnesses(N, n);
        MainIneqReport main = check_main_inequality(hz.graphing, w);
        py::dict d;
        d["cost"] = rat(hz.graphing.cost());
        d["cost_treeing"] = rat(main.cost_treeing);
        d["witness_ratio"] = rat(main.ratio);
        d["bound"] = rat(Rational(4, n + 1));
        d["segment_ok"] = segment_intersection_ok(hz, n);
        d["main_inequality_ok"] = main.inequality_ok;
        return d;
      },
      py::arg("N"), py::arg("n"), py::arg("eps") = "0.01");

  m.def(
      "run_report",
      [](const py::dict& kwargs) {
        RunConfig c;
        for (auto item : kwargs) {
          std::string key = py::cast<std::string>(item.first);
          if (key == "command") c.command = py::cast<std::string>(item.second);
          else if (key == "subcommand") c.subcommand = py::cast<std::string>(item.second);
          else if (key == "group") c.group = py::cast<std::string>(item.second);
          else if (key == "gens") c.gens = py::cast<std::string>(item.second);
          else if (key == "radius") c.radius = py::cast<int>(item.second);
          else if (key == "max_size") c.max_size = py::cast<int>(item.second);
          else if (key == "mode") c.mode = py::cast<std::string>(item.second);
          else if (key == "samples") c.samples = py::cast<long long>(item.second);
          else if (key == "seed") c.seed = py::cast<std::uint64_t>(item.second);
          else if (key == "sweep") c.sweep = py::cast<std::string>(item.second);
          else if (key == "N") c.N = py::cast<long long>(item.second);
          else if (key == "n") c.n = py::cast<int>(item.second);
          else if (key == "eps") c.eps = py::cast<std::string>(item.second);
          else throw std::invalid_argument("run_report: unknown key '" + key + "'");
        }
        Report rep = run(c);
        py::dict d;
        d["json"] = emit(rep, c);
        d["all_passed"] = rep.all_asserted_passed();
        return d;
      },
      py::arg("config"), "Run a CLI command in-process and return the serialized report.");
}
