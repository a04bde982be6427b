#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nagata/config.hpp"
#include "nagata/cremona.hpp"
#include "nagata/errors.hpp"
#include "nagata/forms.hpp"
#include "nagata/json_io.hpp"
#include "nagata/mpoly.hpp"
#include "nagata/picard.hpp"
#include "nagata/repkit.hpp"
#include "nagata/verify.hpp"

namespace py = pybind11;
using namespace nagata;

namespace {

py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

json from_py(const py::handle& o) {
  std::string s = py::str(py::module_::import("json").attr("dumps")(o));
  return json::parse(s);
}

// a dict in the dataset format, or the name of a bundled dataset
json input_json(const py::object& config) {
  if (py::isinstance<py::str>(config)) return load_dataset(config.cast<std::string>());
  return from_py(config);
}

PointConfig input_config(const py::object& config) { return config_from_json(input_json(config)); }

json point_json(const std::vector<Elem>& p) {
  json a = json::array();
  for (auto& x : p) a.push_back(x.to_string());
  return a;
}

GaRepresentation input_rep(const json& j) {
  Matrix m = representation_matrix_from_json(j);
  if (j.contains("subgroup_rows")) return representation_from_rows(m, matrix_from_json(m.field(), j.at("subgroup_rows")));
  return build_representation(m);
}

Verdict run_analysis(const PointConfig& cfg, bool dim5) {
  if (dim5) return certify_dim5(cfg);
  if (cfg.r() == 3 && cfg.n() == 9) return analyze_cubic_config(cfg);
  if (cfg.r() == 4 && cfg.n() == 8) return analyze_quadric_config(cfg);
  throw std::invalid_argument("expected 9 points of P^2 or 8 points of P^3");
}

FormSystem input_system(const json& j) {
  if (!j.contains("forms")) throw std::invalid_argument("dataset has no forms");
  return system_from_json(field_from_json(j.at("field")), j);
}

}  // namespace

PYBIND11_MODULE(_nagata, m) {
  m.doc() = "Exact point configurations, Picard lattices and unipotent representations";
  py::register_exception<InconsistencyError>(m, "InconsistencyError");
  py::register_exception<OrbitGuardError>(m, "OrbitGuardError");

  m.def("load_dataset", [](const std::string& name) { return to_py(load_dataset(name)); }, py::arg("name"));

  m.def(
      "analyze",
      [](const py::object& config, bool dim5) { return to_py(run_analysis(input_config(config), dim5).to_json()); },
      py::arg("config"), py::arg("dim5") = false);

  m.def(
      "rho",
      [](const py::object& config) -> std::optional<int> { return run_analysis(input_config(config), false).rho; },
      py::arg("config"));

  m.def(
      "h0", [](const py::object& config, int a, const std::vector<int>& b) { return h0(input_config(config), a, b); },
      py::arg("config"), py::arg("a"), py::arg("b"));

  m.def(
      "orbit",
      [](int r, int n, int depth, std::optional<std::int64_t> degree_cap, std::uint64_t max_classes) {
        CremonaLattice lat(r, n);
        std::vector<PicClass> seeds;
        for (int i = 0; i < n; ++i) seeds.push_back(exceptional_class(lat, i));
        OrbitReport res;
        {
          py::gil_scoped_release release;
          res = orbit_bfs(lat, seeds, depth, degree_cap, max_classes);
        }
        json cls = json::array();
        for (auto& c : res.classes()) cls.push_back(json{{"d", c.d}, {"m", c.m}});
        return to_py(json{{"new_classes", res.per_depth_new_classes},
                          {"max_degree", res.per_depth_max_degree},
                          {"total_classes", res.total_classes},
                          {"closed", res.closed},
                          {"classes", cls}});
      },
      py::arg("r"), py::arg("n"), py::arg("depth"), py::arg("degree_cap") = std::nullopt,
      py::arg("max_classes") = kDefaultMaxClasses);

  m.def(
      "is_minus_one_class",
      [](int r, int n, std::int64_t d, const std::vector<std::int64_t>& mult) {
        return is_minus_one_class(CremonaLattice(r, n), PicClass{d, mult});
      },
      py::arg("r"), py::arg("n"), py::arg("d"), py::arg("m"));

  m.def("weyl_is_infinite", &weyl_is_infinite, py::arg("r"), py::arg("n"));

  m.def(
      "base_locus",
      [](const py::object& config, unsigned max_ext) {
        auto sys = input_system(input_json(config));
        auto sm = is_smooth_zero_dim(sys);
        json pts = json::array();
        for (auto& bp : base_locus(sys, max_ext))
          pts.push_back(json{{"coords", point_json(bp.coords)},
                             {"degree", bp.degree},
                             {"multiplicity", bp.multiplicity},
                             {"field", field_to_json(bp.field)}});
        return to_py(json{{"smooth", sm.smooth}, {"geometric_points", sm.geometric_points}, {"points", pts}});
      },
      py::arg("config"), py::arg("max_ext") = 6);

  m.def(
      "irreducible",
      [](const py::object& config) {
        json j = input_json(config);
        auto sys = input_system(j);
        if (sys.dim() == 1) return is_absolutely_irreducible(sys.basis()[0]);
        std::optional<PointConfig> cfg;
        if (j.contains("points")) cfg = config_from_json(j);
        return pencil_net_irreducible(sys, cfg ? &*cfg : nullptr).all_irreducible;
      },
      py::arg("config"));

  m.def(
      "ninth_point", [](const py::object& config) { return to_py(point_json(ninth_base_point(input_config(config)))); },
      py::arg("config"));
  m.def(
      "eighth_point", [](const py::object& config) { return to_py(point_json(eighth_base_point(input_config(config)))); },
      py::arg("config"));

  m.def(
      "dualize", [](const py::object& config) { return to_py(config_to_json(dualize(input_config(config)))); },
      py::arg("config"));

  m.def(
      "in_linear_general_position",
      [](const py::object& config) { return in_linear_general_position(input_config(config)).in_general_position; },
      py::arg("config"));

  m.def(
      "equivalent",
      [](const py::object& a, const py::object& b, bool allow_permutation) {
        return config_equivalent(input_config(a), input_config(b), allow_permutation).has_value();
      },
      py::arg("a"), py::arg("b"), py::arg("allow_permutation") = true);

  m.def(
      "cremona_walk",
      [](const py::object& config, int depth, const std::string& strategy, std::uint64_t seed) {
        WalkStrategy st;
        if (strategy == "exhaustive")
          st = WalkStrategy::exhaustive;
        else if (strategy == "random")
          st = WalkStrategy::random;
        else
          throw std::invalid_argument("strategy must be exhaustive or random");
        auto res = cremona_walk(input_config(config), depth, st, seed);
        json out{{"survived", res.survived},
                 {"mode", res.mode},
                 {"configs_per_depth", res.configs_per_depth},
                 {"steps_applied", res.steps_applied},
                 {"steps_skipped", res.steps_skipped},
                 {"rho", res.rho ? json(*res.rho) : json(nullptr)}};
        if (res.failure) out["failure"] = json{{"depth", res.failure->depth}, {"reason", res.failure->reason}};
        return to_py(out);
      },
      py::arg("config"), py::arg("depth"), py::arg("strategy") = "exhaustive", py::arg("seed") = 1);

  m.def(
      "rep_build",
      [](const py::object& config) {
        auto rep = input_rep(input_json(config));
        json out = rep.to_json();
        out["generators_commute"] = generators_commute(rep.generators());
        out["generators_unipotent"] = generators_unipotent(rep.generators());
        return to_py(out);
      },
      py::arg("config"));

  m.def(
      "rep_twist",
      [](const py::object& config, std::uint64_t p) {
        auto rep = input_rep(input_json(config));
        auto tw = twist_representation(rep, prime_field(p));
        json out = tw.to_json();
        json blocks = json::array();
        for (std::size_t k = 0; k < rep.group_rank(); ++k)
          blocks.push_back(block_format(tw, twisted_block(tw, rep.subgroup_basis.row(k))));
        out["blocks_for_subgroup_rows"] = blocks;
        out["generators_commute"] = generators_commute(tw.generators());
        out["generators_unipotent"] = generators_unipotent(tw.generators());
        out["conjugate_to_diagonal_form"] = twist_matches_diagonal(tw, rep);
        return to_py(out);
      },
      py::arg("config"), py::arg("p"));

  m.def(
      "is_invariant",
      [](const py::object& config, const std::string& poly) {
        auto rep = input_rep(input_json(config));
        return is_invariant(rep, parse_mpoly(rep.field, pair_var_names(rep.n), poly));
      },
      py::arg("config"), py::arg("poly"));

  m.def(
      "invariant_dimension",
      [](const py::object& config, const std::vector<int>& c, int a) {
        return invariant_dimension(input_rep(input_json(config)), c, a);
      },
      py::arg("config"), py::arg("c"), py::arg("a"));

  m.def(
      "cross_check",
      [](const py::object& config, int amax, int cmax, std::size_t basis_limit) {
        json j = input_json(config);
        auto rep = input_rep(j);
        auto cfg = PointConfig::from_matrix(representation_matrix_from_json(j));
        CrossCheckReport res;
        {
          py::gil_scoped_release release;
          res = mukai_cross_check(rep, cfg, amax, cmax, basis_limit, false);
        }
        return to_py(json{{"cells", res.cells},
                          {"equal_cells", res.equal_cells},
                          {"skipped_cells", res.skipped_cells},
                          {"all_equal", res.all_equal()}});
      },
      py::arg("config"), py::arg("amax"), py::arg("cmax"), py::arg("basis_limit") = 10000);

  m.def(
      "verify",
      [](const std::string& filter) {
        std::vector<CriterionResult> results;
        {
          py::gil_scoped_release release;
          results = run_acceptance(filter, "");
        }
        json out = json::array();
        for (auto& r : results) out.push_back(r.to_json());
        return to_py(out);
      },
      py::arg("filter") = "");
}
