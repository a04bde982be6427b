#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "nagata/config.hpp"
#include "nagata/cremona.hpp"
#include "nagata/errors.hpp"
#include "nagata/forms.hpp"
#include "nagata/json_io.hpp"
#include "nagata/picard.hpp"
#include "nagata/repkit.hpp"
#include "nagata/verify.hpp"

using namespace nagata;

namespace {

enum Exit { kOk = 0, kInput = 1, kUndetermined = 2, kInconsistent = 3 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  bool json_out = false;
  std::uint64_t seed = 1;
  std::uint64_t max_classes = kDefaultMaxClasses;
  std::string data_dir;
};

struct Report {
  std::string command;
  json inputs = json::object();
  json results = json::object();
  std::vector<std::string> citations;
  int status = kOk;
};

std::string fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  std::string hex = os.str();
  return std::string(16 - hex.size(), '0') + hex;
}

// arrays of flat objects with equal keys print as a table
bool print_table(const json& j, const std::string& pad, std::ostream& os) {
  if (!j.is_array() || j.empty() || !j[0].is_object()) return false;
  std::vector<std::string> keys;
  for (auto& [k, v] : j[0].items()) keys.push_back(k);
  for (auto& row : j) {
    if (!row.is_object() || row.size() != keys.size()) return false;
    for (auto& k : keys)
      if (!row.contains(k) || row[k].is_object() || row[k].is_array()) return false;
  }
  std::vector<std::vector<std::string>> cells(1, keys);
  for (auto& row : j) {
    std::vector<std::string> c;
    for (auto& k : keys) c.push_back(row[k].is_string() ? row[k].get<std::string>() : row[k].dump());
    cells.push_back(c);
  }
  std::vector<std::size_t> w(keys.size(), 0);
  for (auto& c : cells)
    for (std::size_t i = 0; i < c.size(); ++i) w[i] = std::max(w[i], c[i].size());
  for (auto& c : cells) {
    os << pad;
    for (std::size_t i = 0; i < c.size(); ++i)
      os << std::string(w[i] - c[i].size(), ' ') << c[i] << (i + 1 < c.size() ? "  " : "\n");
  }
  return true;
}

void print_text(const json& j, int indent, std::ostream& os) {
  std::string pad(indent, ' ');
  if (print_table(j, pad, os)) return;
  auto inline_ok = [](const json& v) {
    if (!v.is_array()) return !v.is_object();
    for (auto& x : v)
      if (x.is_object() || (x.is_array() && !x.empty() && x[0].is_object())) return false;
    return v.dump().size() < 100;
  };
  if (j.is_object()) {
    for (auto& [k, v] : j.items()) {
      if (inline_ok(v)) {
        os << pad << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      } else {
        os << pad << k << ":\n";
        print_text(v, indent + 2, os);
      }
    }
  } else if (j.is_array()) {
    for (auto& v : j) {
      if (inline_ok(v)) {
        os << pad << "- " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      } else {
        os << pad << "-\n";
        print_text(v, indent + 2, os);
      }
    }
  } else {
    os << pad << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

int emit(const Globals& g, const Report& r) {
  std::string digest = fnv1a(r.command + "\n" + r.inputs.dump());
  if (g.json_out) {
    json out{{"command", r.command},
             {"inputs", r.inputs},
             {"inputs_digest", digest},
             {"results", r.results},
             {"citations", r.citations},
             {"exit_status", r.status}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "command: " << r.command << "\n";
    json shown = r.results;
    if (shown.is_object()) shown.erase("citations");
    print_text(shown, 0, std::cout);
    for (auto& c : r.citations) std::cout << "cite: " << c << "\n";
  }
  return r.status;
}

// a path, or the name of a bundled dataset
json load_input(const Globals& g, const std::string& spec, Report& rep) {
  json j;
  std::string name = spec;
  if (std::filesystem::exists(spec)) {
    j = read_json_file(spec);
    name = std::filesystem::path(spec).stem().string();
  } else {
    name = std::filesystem::path(spec).filename().string();
    if (name.size() > 5 && name.substr(name.size() - 5) == ".json") name = name.substr(0, name.size() - 5);
    try {
      j = load_dataset(name, g.data_dir);
    } catch (const std::exception&) {
      throw InputError("no such file or bundled dataset: " + spec);
    }
  }
  rep.inputs["config"] = j;
  std::string desc = j.value("description", std::string());
  rep.citations.push_back("dataset " + j.value("name", name) + (desc.empty() ? "" : ": " + desc));
  return j;
}

Field parse_field(const std::string& s) {
  if (s == "Q" || s == "q" || s == "QQ") return rational_field();
  auto caret = s.find('^');
  try {
    std::uint64_t p = std::stoull(s.substr(0, caret));
    unsigned d = caret == std::string::npos ? 1 : static_cast<unsigned>(std::stoul(s.substr(caret + 1)));
    if (!is_prime_u64(p)) throw InputError("field characteristic must be prime: " + s);
    return d == 1 ? prime_field(p) : galois_field(p, d);
  } catch (const std::logic_error&) {
    throw InputError("cannot parse field: " + s);
  }
}

std::vector<std::int64_t> parse_ints(const std::string& s) {
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      out.push_back(std::stoll(tok));
    } catch (const std::logic_error&) {
      throw InputError("not an integer: " + tok);
    }
  }
  return out;
}

std::vector<std::size_t> parse_indices(const std::string& s, std::size_t n) {
  std::vector<std::size_t> out;
  for (auto v : parse_ints(s)) {
    if (v < 1 || static_cast<std::size_t>(v) > n) throw InputError("index out of range: " + std::to_string(v));
    out.push_back(static_cast<std::size_t>(v - 1));
  }
  return out;
}

json one_based(const std::vector<std::size_t>& v) {
  json a = json::array();
  for (auto i : v) a.push_back(i + 1);
  return a;
}

json point_json(const std::vector<Elem>& p) {
  json a = json::array();
  for (auto& x : p) a.push_back(x.to_string());
  return a;
}

PointConfig select_points(const PointConfig& cfg, const std::string& sel) {
  if (sel.empty()) return cfg;
  auto all = cfg.points();
  std::vector<std::vector<Elem>> pts;
  for (auto i : parse_indices(sel, cfg.n())) pts.push_back(all[i]);
  return PointConfig::create(cfg.field(), cfg.r(), pts);
}

// ---- commands

int cmd_analyze(const Globals& g, const std::string& cfg_spec, bool dim5, bool rho_only) {
  Report rep;
  rep.command = rho_only ? "rho" : "analyze";
  auto cfg = config_from_json(load_input(g, cfg_spec, rep));
  Verdict v;
  if (dim5)
    v = certify_dim5(cfg);
  else if (cfg.r() == 3 && cfg.n() == 9)
    v = analyze_cubic_config(cfg);
  else if (cfg.r() == 4 && cfg.n() == 8)
    v = analyze_quadric_config(cfg);
  else
    throw InputError("expected 9 points of P^2 or 8 points of P^3");
  if (rho_only) {
    rep.results = json{{"status", to_string(v.status)}, {"rho", v.rho ? json(*v.rho) : json(nullptr)},
                       {"a", v.a ? json(*v.a) : json(nullptr)}, {"b", v.b ? json(*v.b) : json(nullptr)}};
    if (!v.reason.empty()) rep.results["reason"] = v.reason;
  } else {
    rep.results = v.to_json();
  }
  for (auto& c : v.citations) rep.citations.push_back(c);
  rep.status = v.status == VerdictStatus::undetermined ? kUndetermined : kOk;
  return emit(g, rep);
}

PicClass parse_class(const CremonaLattice& lat, const std::string& tok) {
  if (tok == "H") return hyperplane_class(lat);
  if (tok == "K") return canonical_class(lat);
  if (tok == "-K") return anticanonical_class(lat);
  if (tok.size() > 1 && tok[0] == 'E') {
    int i = std::stoi(tok.substr(1));
    if (i < 1 || i > lat.n) throw InputError("no exceptional class " + tok);
    return exceptional_class(lat, i - 1);
  }
  // d;m1,...,mn
  auto semi = tok.find(';');
  if (semi == std::string::npos) throw InputError("cannot parse class " + tok);
  PicClass x{std::stoll(tok.substr(0, semi)), parse_ints(tok.substr(semi + 1))};
  if (static_cast<int>(x.m.size()) != lat.n) throw InputError("class has the wrong number of multiplicities");
  return x;
}

int cmd_orbit(const Globals& g, int r, int n, int depth, std::optional<std::int64_t> cap, const std::string& seeds,
              bool list) {
  Report rep;
  rep.command = "orbit";
  rep.inputs = json{{"r", r}, {"n", n}, {"depth", depth}, {"seeds", seeds}, {"max_classes", g.max_classes}};
  if (cap) rep.inputs["degree_cap"] = *cap;
  CremonaLattice lat(r, n);
  std::vector<PicClass> s;
  if (seeds == "all") {
    for (int i = 0; i < n; ++i) s.push_back(exceptional_class(lat, i));
  } else {
    std::stringstream ss(seeds);
    std::string tok;
    while (std::getline(ss, tok, ' '))
      if (!tok.empty()) s.push_back(parse_class(lat, tok));
  }
  auto res = orbit_bfs(lat, s, depth, cap, g.max_classes);
  json table = json::array();
  for (std::size_t k = 0; k < res.levels.size(); ++k)
    table.push_back(json{{"depth", k},
                         {"new_classes", res.per_depth_new_classes[k]},
                         {"max_degree", res.per_depth_max_degree[k]},
                         {"representatives", res.levels[k].size()}});
  rep.results = json{{"lattice", json{{"r", r}, {"n", n}}},
                     {"weyl_group_infinite", weyl_is_infinite(r, n)},
                     {"per_depth", table},
                     {"total_classes", res.total_classes},
                     {"closed", res.closed}};
  if (list) {
    json cls = json::array();
    for (auto& c : res.classes()) cls.push_back(c.to_string());
    rep.results["classes"] = cls;
  }
  rep.citations.push_back("Weyl group of the lattice with H^2 = r-2, E_i^2 = -1, generated by transpositions and s_n");
  return emit(g, rep);
}

int cmd_h0(const Globals& g, const std::string& cfg_spec, int a, const std::string& b) {
  Report rep;
  rep.command = "h0";
  auto cfg = config_from_json(load_input(g, cfg_spec, rep));
  std::vector<int> bv;
  for (auto x : parse_ints(b)) bv.push_back(static_cast<int>(x));
  if (bv.size() == 1 && cfg.n() > 1) bv.assign(cfg.n(), bv[0]);
  if (bv.size() != cfg.n()) throw InputError("b needs one entry per point");
  rep.inputs["a"] = a;
  rep.inputs["b"] = bv;
  rep.results = json{{"a", a}, {"b", bv}, {"h0", h0(cfg, a, bv)}};
  return emit(g, rep);
}

FormSystem system_for(const Globals& g, const std::string& cfg_spec, const std::string& forms, const std::string& field,
                      unsigned nvars, Report& rep, std::optional<PointConfig>* cfg_out) {
  if (!cfg_spec.empty()) {
    json j = load_input(g, cfg_spec, rep);
    Field f = field.empty() ? (j.contains("field") ? field_from_json(j.at("field")) : throw InputError("--field is required"))
                            : parse_field(field);
    if (!field.empty()) rep.inputs["field"] = field;
    if (cfg_out && j.contains("points") && field.empty()) *cfg_out = config_from_json(j);
    if (!j.contains("forms")) throw InputError("dataset has no forms");
    return system_from_json(f, j);
  }
  if (forms.empty() || field.empty()) throw InputError("give --config, or --forms with --field");
  Field f = parse_field(field);
  rep.inputs = json{{"forms", forms}, {"field", field}, {"nvars", nvars}};
  std::vector<MPoly> basis;
  std::stringstream ss(forms);
  std::string tok;
  while (std::getline(ss, tok, ';'))
    if (!tok.empty()) basis.push_back(parse_mpoly(f, default_var_names(nvars), tok));
  if (basis.empty()) throw InputError("no forms given");
  int d = basis[0].total_degree();
  if (d <= 0) throw InputError("forms must be nonconstant");
  return FormSystem(f, nvars, static_cast<unsigned>(d), basis);
}

int cmd_irreducible(const Globals& g, const std::string& cfg_spec, const std::string& forms, const std::string& field,
                    unsigned nvars) {
  Report rep;
  rep.command = "irreducible";
  std::optional<PointConfig> cfg;
  auto sys = system_for(g, cfg_spec, forms, field, nvars, rep, &cfg);
  if (sys.dim() == 1) {
    const MPoly& f = sys.basis()[0];
    bool irr = is_absolutely_irreducible(f);
    rep.results = json{{"form", f.to_string(default_var_names(sys.nvars()))}, {"absolutely_irreducible", irr}};
    if (!irr && sys.degree() == 3 && sys.nvars() == 3)
      if (auto lf = find_linear_factor_cubic(f)) {
        json c = json::array();
        for (auto& x : lf->coeffs) c.push_back(x.to_string());
        rep.results["linear_factor"] = json{{"field", field_to_json(lf->field)}, {"coefficients", c}};
      }
    return emit(g, rep);
  }
  auto ir = pencil_net_irreducible(sys, cfg ? &*cfg : nullptr);
  json red = json::array();
  for (auto& m : ir.reducible_members) {
    json c = json::array();
    for (auto& x : m.coefficients) c.push_back(x.to_string());
    red.push_back(json{{"coefficients", c}, {"form", m.form.to_string(default_var_names(sys.nvars()))}});
  }
  rep.results = json{{"all_irreducible", ir.all_irreducible},
                     {"members_tested", ir.members_tested},
                     {"route", ir.route},
                     {"reducible_members", red}};
  return emit(g, rep);
}

int cmd_base_locus(const Globals& g, const std::string& cfg_spec, const std::string& forms, const std::string& field,
                   unsigned nvars, unsigned max_ext) {
  Report rep;
  rep.command = "base-locus";
  auto sys = system_for(g, cfg_spec, forms, field, nvars, rep, nullptr);
  rep.inputs["max_ext"] = max_ext;
  auto sm = is_smooth_zero_dim(sys);
  json pts = json::array();
  for (auto& bp : base_locus(sys, max_ext))
    pts.push_back(json{{"coords", point_json(bp.coords)},
                       {"degree", bp.degree},
                       {"multiplicity", bp.multiplicity},
                       {"field", field_to_json(bp.field)}});
  rep.results = json{{"smooth", sm.smooth}, {"geometric_points", sm.geometric_points}, {"points", pts}};
  if (!sm.reason.empty()) rep.results["reason"] = sm.reason;
  return emit(g, rep);
}

int cmd_complete(const Globals& g, const std::string& cfg_spec, const std::string& sel, bool ninth) {
  Report rep;
  rep.command = ninth ? "ninth-point" : "eighth-point";
  auto cfg = select_points(config_from_json(load_input(g, cfg_spec, rep)), sel);
  if (!sel.empty()) rep.inputs["points"] = sel;
  auto p = ninth ? ninth_base_point(cfg) : eighth_base_point(cfg);
  rep.results = json{{"point", point_json(p)}};
  return emit(g, rep);
}

int cmd_dualize(const Globals& g, const std::string& cfg_spec, bool veronese) {
  Report rep;
  rep.command = "dualize";
  auto cfg = config_from_json(load_input(g, cfg_spec, rep));
  auto d = dualize(cfg);
  auto lgp = in_linear_general_position(d);
  rep.results = json{{"dual", config_to_json(d)}, {"in_linear_general_position", lgp.in_general_position}};
  if (!lgp.in_general_position) rep.results["dependent_subset"] = one_based(lgp.witness);
  rep.results["self_associated"] = config_equivalent(cfg, d, true).has_value();
  if (veronese) {
    if (cfg.r() != 3) throw InputError("the Veronese comparison needs points of P^2");
    rep.results["equivalent_to_veronese_image"] = config_equivalent(d, veronese_embed(cfg), true).has_value();
  }
  return emit(g, rep);
}

int cmd_cremona_apply(const Globals& g, const std::string& cfg_spec, const std::string& subset) {
  Report rep;
  rep.command = "cremona apply";
  auto cfg = config_from_json(load_input(g, cfg_spec, rep));
  auto idx = parse_indices(subset, cfg.n());
  rep.inputs["subset"] = one_based(idx);
  Matrix t(cfg.field(), 0, 0);
  auto out = standard_cremona(cfg, idx, &t);
  rep.results = json{{"legal", cremona_step_legal(cfg, idx)},
                     {"transform", matrix_to_json(t)},
                     {"image", config_to_json(out)},
                     {"in_linear_general_position", in_linear_general_position(out).in_general_position}};
  return emit(g, rep);
}

int cmd_cremona_walk(const Globals& g, const std::string& cfg_spec, int depth, const std::string& strategy) {
  Report rep;
  rep.command = "cremona walk";
  auto cfg = config_from_json(load_input(g, cfg_spec, rep));
  WalkStrategy st;
  if (strategy == "exhaustive")
    st = WalkStrategy::exhaustive;
  else if (strategy == "random")
    st = WalkStrategy::random;
  else
    throw InputError("strategy must be exhaustive or random");
  rep.inputs["depth"] = depth;
  rep.inputs["strategy"] = strategy;
  rep.inputs["seed"] = g.seed;
  auto res = cremona_walk(cfg, depth, st, g.seed);
  json log = json::array();
  for (auto& s : res.log) log.push_back(one_based(s.subset));
  rep.results = json{{"survived", res.survived},
                     {"mode", res.mode},
                     {"seed", g.seed},
                     {"configs_per_depth", res.configs_per_depth},
                     {"steps_applied", res.steps_applied},
                     {"steps_skipped", res.steps_skipped},
                     {"rho", res.rho ? json(*res.rho) : json(nullptr)},
                     {"log", log}};
  if (res.failure) {
    json path = json::array();
    for (auto& s : res.failure->path) path.push_back(one_based(s));
    rep.results["failure"] = json{{"depth", res.failure->depth}, {"path", path}, {"reason", res.failure->reason}};
  }
  return emit(g, rep);
}

struct RepInput {
  json data;
  Matrix matrix;
  GaRepresentation rep;
  PointConfig cfg;
};

RepInput rep_input(const Globals& g, const std::string& cfg_spec, Report& rep) {
  json j = load_input(g, cfg_spec, rep);
  Matrix m = representation_matrix_from_json(j);
  GaRepresentation r = j.contains("subgroup_rows")
                           ? representation_from_rows(m, matrix_from_json(m.field(), j.at("subgroup_rows")))
                           : build_representation(m);
  return RepInput{j, m, r, PointConfig::from_matrix(m)};
}

int cmd_rep_build(const Globals& g, const std::string& cfg_spec) {
  Report rep;
  rep.command = "rep build";
  auto in = rep_input(g, cfg_spec, rep);
  rep.results = in.rep.to_json();
  rep.results["generators_commute"] = generators_commute(in.rep.generators());
  rep.results["generators_unipotent"] = generators_unipotent(in.rep.generators());
  return emit(g, rep);
}

int cmd_rep_twist(const Globals& g, const std::string& cfg_spec, const std::string& base) {
  Report rep;
  rep.command = "rep twist";
  auto in = rep_input(g, cfg_spec, rep);
  rep.inputs["base"] = base;
  auto tw = twist_representation(in.rep, parse_field(base));
  rep.results = tw.to_json();
  json blocks = json::array();
  for (std::size_t k = 0; k < in.rep.group_rank(); ++k)
    blocks.push_back(block_format(tw, twisted_block(tw, in.rep.subgroup_basis.row(k))));
  rep.results["blocks_for_subgroup_rows"] = blocks;
  rep.results["generators_commute"] = generators_commute(tw.generators());
  rep.results["generators_unipotent"] = generators_unipotent(tw.generators());
  rep.results["conjugate_to_diagonal_form"] = twist_matches_diagonal(tw, in.rep);
  rep.citations.push_back("Galois descent of the diagonal representation along Frobenius orbits of the points");
  return emit(g, rep);
}

int cmd_rep_check(const Globals& g, const std::string& cfg_spec, const std::string& poly) {
  Report rep;
  rep.command = "rep check";
  auto in = rep_input(g, cfg_spec, rep);
  rep.inputs["poly"] = poly;
  auto f = parse_mpoly(in.rep.field, pair_var_names(in.rep.n), poly);
  bool inv = is_invariant(in.rep, f);
  rep.results = json{{"poly", f.to_string(pair_var_names(in.rep.n))}, {"invariant", inv}};
  return emit(g, rep);
}

int cmd_rep_dims(const Globals& g, const std::string& cfg_spec, const std::string& c, int a) {
  Report rep;
  rep.command = "rep dims";
  auto in = rep_input(g, cfg_spec, rep);
  std::vector<int> cv;
  for (auto x : parse_ints(c)) cv.push_back(static_cast<int>(x));
  if (cv.size() == 1 && in.rep.n > 1) cv.assign(in.rep.n, cv[0]);
  if (cv.size() != in.rep.n) throw InputError("c needs one entry per point");
  std::vector<int> b;
  for (int x : cv) b.push_back(a - x);
  rep.inputs["c"] = cv;
  rep.inputs["a"] = a;
  auto inv = invariant_dimension(in.rep, cv, a);
  auto h = h0(in.cfg, a, b);
  rep.results = json{{"c", cv}, {"a", a}, {"b", b}, {"invariant_dim", inv}, {"h0", h}, {"equal", inv == h}};
  rep.status = inv == h ? kOk : kInconsistent;
  return emit(g, rep);
}

int cmd_rep_crosscheck(const Globals& g, const std::string& cfg_spec, int amax, int cmax, std::size_t limit,
                       bool rows) {
  Report rep;
  rep.command = "rep crosscheck";
  auto in = rep_input(g, cfg_spec, rep);
  rep.inputs["amax"] = amax;
  rep.inputs["cmax"] = cmax;
  rep.inputs["basis_limit"] = limit;
  auto res = mukai_cross_check(in.rep, in.cfg, amax, cmax, limit, rows);
  auto cell = [](const CrossCheckCell& c) {
    return json{{"c", c.c}, {"a", c.a}, {"invariant_dim", c.invariant_dim}, {"h0", c.h0_dim}, {"equal", c.equal()}};
  };
  json mism = json::array();
  for (auto& c : res.mismatches) mism.push_back(cell(c));
  rep.results = json{{"cells", res.cells},
                     {"equal_cells", res.equal_cells},
                     {"skipped_cells", res.skipped_cells},
                     {"all_equal", res.all_equal()},
                     {"mismatches", mism}};
  if (rows) {
    json all = json::array();
    for (auto& c : res.rows) all.push_back(cell(c));
    rep.results["rows"] = all;
  }
  rep.status = res.mismatches.empty() ? kOk : kInconsistent;
  return emit(g, rep);
}

int cmd_verify(const Globals& g, const std::string& filter) {
  auto results = run_acceptance(filter, g.data_dir);
  bool all = !results.empty();
  for (auto& r : results) all = all && r.passed;
  if (g.json_out) {
    Report rep;
    rep.command = "verify-paper";
    rep.inputs = json{{"filter", filter}};
    json a = json::array();
    for (auto& r : results) a.push_back(r.to_json());
    rep.results = json{{"criteria", a}, {"all_passed", all}};
    rep.status = all ? kOk : kInput;
    return emit(g, rep);
  }
  for (auto& r : results) {
    std::cout << (r.passed ? "PASS" : "FAIL") << "  " << r.info.id << "  " << r.info.key << "  " << r.info.title << "\n";
    for (auto& l : r.checks)
      std::cout << "      " << (l.passed ? "ok   " : "FAIL ") << l.name << (l.detail.empty() ? "" : "  (" + l.detail + ")")
                << "\n";
  }
  std::size_t passed = 0;
  for (auto& r : results) passed += r.passed;
  std::cout << passed << "/" << results.size() << " criteria passed\n";
  return all ? kOk : kInput;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact checks for point configurations, Weyl orbits and G_a representations"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  g.data_dir = default_data_dir();
  app.add_flag("--json", g.json_out, "Print the full JSON report");
  app.add_option("--seed", g.seed, "Seed for random walks");
  app.add_option("--max-classes", g.max_classes, "Abort orbit searches beyond this many classes");
  app.add_option("--data-dir", g.data_dir, "Directory of bundled datasets");

  std::function<int()> run;
  std::string cfg, rep_cfg = "grid_f5", forms, field, sel, subset, strategy = "exhaustive", seeds = "all", base, poly, cvec, bvec, filter;
  unsigned nvars = 3, max_ext = 6;
  int depth = -1, a = 0, r = 3, n = 9, amax = 3, cmax = 3, walk_depth = 2;
  std::optional<std::int64_t> cap;
  std::size_t limit = 10000;
  bool dim5 = false, veronese = false, list = false, rows = false;

  auto* analyze = app.add_subcommand("analyze", "Verdict for 9 points of P^2 or 8 points of P^3");
  analyze->add_option("config,--config", cfg, "Config file or bundled dataset")->required();
  analyze->add_flag("--dim5", dim5, "Certificate for the association to P^5");
  analyze->callback([&] { run = [&] { return cmd_analyze(g, cfg, dim5, false); }; });

  auto* rho = app.add_subcommand("rho", "Mordell-Weil rank only");
  rho->add_option("config,--config", cfg, "Config file or bundled dataset")->required();
  rho->callback([&] { run = [&] { return cmd_analyze(g, cfg, false, true); }; });

  auto* orbit = app.add_subcommand("orbit", "Weyl orbit search");
  orbit->add_option("--r", r, "Dimension of the projective space plus one");
  orbit->add_option("--n", n, "Number of points");
  orbit->add_option("--depth", depth, "Cremona reflections to apply; negative runs to closure");
  orbit->add_option("--cap", cap, "Degree cap");
  orbit->add_option("--seeds", seeds, "all, or classes such as \"E1 H 2;1,1,1,1,1,0,0,0,0\"");
  orbit->add_flag("--list", list, "List every class");
  orbit->callback([&] { run = [&] { return cmd_orbit(g, r, n, depth, cap, seeds, list); }; });

  auto* h0c = app.add_subcommand("h0", "Dimension of degree a forms with multiplicities b");
  h0c->add_option("config,--config", cfg, "Config file or bundled dataset")->required();
  h0c->add_option("--a", a, "Degree")->required();
  h0c->add_option("--b", bvec, "Multiplicities, comma separated (one value applies to all)")->required();
  h0c->callback([&] { run = [&] { return cmd_h0(g, cfg, a, bvec); }; });

  auto* irr = app.add_subcommand("irreducible", "Absolute irreducibility of a form or of all members of a system");
  irr->add_option("--config", cfg, "Dataset with forms");
  irr->add_option("--forms", forms, "Forms separated by ';'");
  irr->add_option("--field", field, "Q, p or p^d");
  irr->add_option("--nvars", nvars, "Number of variables");
  irr->callback([&] { run = [&] { return cmd_irreducible(g, cfg, forms, field, nvars); }; });

  auto* bl = app.add_subcommand("base-locus", "Common zeros of a pencil or net");
  bl->add_option("--config", cfg, "Dataset with forms");
  bl->add_option("--forms", forms, "Forms separated by ';'");
  bl->add_option("--field", field, "Q, p or p^d");
  bl->add_option("--nvars", nvars, "Number of variables");
  bl->add_option("--max-ext", max_ext, "Largest extension degree searched");
  bl->callback([&] { run = [&] { return cmd_base_locus(g, cfg, forms, field, nvars, max_ext); }; });

  auto* ninth = app.add_subcommand("ninth-point", "Ninth base point of the cubic pencil through 8 points");
  ninth->add_option("config,--config", cfg, "Config file or bundled dataset")->required();
  ninth->add_option("--points", sel, "Points to use, 1-based and comma separated");
  ninth->callback([&] { run = [&] { return cmd_complete(g, cfg, sel, true); }; });

  auto* eighth = app.add_subcommand("eighth-point", "Eighth base point of the quadric net through 7 points");
  eighth->add_option("config,--config", cfg, "Config file or bundled dataset")->required();
  eighth->add_option("--points", sel, "Points to use, 1-based and comma separated");
  eighth->callback([&] { run = [&] { return cmd_complete(g, cfg, sel, false); }; });

  auto* dual = app.add_subcommand("dualize", "Associated configuration");
  dual->add_option("config,--config", cfg, "Config file or bundled dataset")->required();
  dual->add_flag("--veronese", veronese, "Compare with the Veronese image");
  dual->callback([&] { run = [&] { return cmd_dualize(g, cfg, veronese); }; });

  auto* crem = app.add_subcommand("cremona", "Standard Cremona transformations");
  crem->require_subcommand(1);
  auto* capply = crem->add_subcommand("apply", "One Cremona step");
  capply->add_option("config,--config", cfg, "Config file or bundled dataset")->required();
  capply->add_option("--subset", subset, "Chosen points, 1-based")->required();
  capply->callback([&] { run = [&] { return cmd_cremona_apply(g, cfg, subset); }; });
  auto* cwalk = crem->add_subcommand("walk", "Walk of Cremona steps");
  cwalk->add_option("config,--config", cfg, "Config file or bundled dataset")->required();
  cwalk->add_option("--depth", walk_depth, "Number of steps");
  cwalk->add_option("--strategy", strategy, "exhaustive or random");
  cwalk->callback([&] { run = [&] { return cmd_cremona_walk(g, cfg, walk_depth, strategy); }; });

  auto* repc = app.add_subcommand("rep", "G_a representations attached to a configuration");
  repc->require_subcommand(1);
  auto* rbuild = repc->add_subcommand("build", "Subgroup and generators");
  rbuild->add_option("config,--config", rep_cfg, "Config file or bundled dataset (default grid_f5)");
  rbuild->callback([&] { run = [&] { return cmd_rep_build(g, rep_cfg); }; });
  auto* rtwist = repc->add_subcommand("twist", "Form over the prime field");
  rtwist->add_option("config,--config", rep_cfg, "Config file or bundled dataset (default grid_f5)");
  rtwist->add_option("--base", base, "Prime base field")->required();
  rtwist->callback([&] { run = [&] { return cmd_rep_twist(g, rep_cfg, base); }; });
  auto* rcheck = repc->add_subcommand("check", "Is a polynomial in x1..xn, y1..yn invariant");
  rcheck->add_option("config,--config", rep_cfg, "Config file or bundled dataset (default grid_f5)");
  rcheck->add_option("--poly", poly, "Polynomial")->required();
  rcheck->callback([&] { run = [&] { return cmd_rep_check(g, rep_cfg, poly); }; });
  auto* rdims = repc->add_subcommand("dims", "Invariant dimension and h0 for one cell");
  rdims->add_option("config,--config", rep_cfg, "Config file or bundled dataset (default grid_f5)");
  rdims->add_option("--c", cvec, "Pair degrees, comma separated (one value applies to all)")->required();
  rdims->add_option("--a", a, "y-degree")->required();
  rdims->callback([&] { run = [&] { return cmd_rep_dims(g, rep_cfg, cvec, a); }; });
  auto* rcross = repc->add_subcommand("crosscheck", "Compare invariant dimensions with h0 over a box");
  rcross->add_option("config,--config", rep_cfg, "Config file or bundled dataset (default grid_f5)");
  rcross->add_option("--amax", amax, "Largest y-degree");
  rcross->add_option("--cmax", cmax, "Largest pair degree");
  rcross->add_option("--basis-limit", limit, "Skip cells with larger monomial bases");
  rcross->add_flag("--rows", rows, "Report every cell");
  rcross->callback([&] { run = [&] { return cmd_rep_crosscheck(g, rep_cfg, amax, cmax, limit, rows); }; });

  auto* ver = app.add_subcommand("verify-paper", "Run the acceptance criteria");
  ver->add_option("--filter", filter, "Criterion ids, keys or tags, comma separated");
  ver->callback([&] { run = [&] { return cmd_verify(g, filter); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }
  try {
    return run();
  } catch (const InconsistencyError& e) {
    std::cerr << "internal inconsistency: " << e.what() << "\n";
    return kInconsistent;
  } catch (const OrbitGuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
}
