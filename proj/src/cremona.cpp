#include "nagata/cremona.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "nagata/errors.hpp"
#include "nagata/json_io.hpp"
#include "nagata/picard.hpp"

namespace nagata {

namespace {

using json = nlohmann::json;

std::vector<std::vector<std::size_t>> all_subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> c(k);
  std::iota(c.begin(), c.end(), 0);
  for (;;) {
    out.push_back(c);
    std::size_t i = k;
    while (i > 0 && c[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++c[i - 1];
    for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
  }
  return out;
}

json one_based(const std::vector<std::size_t>& v) {
  json a = json::array();
  for (auto i : v) a.push_back(i + 1);
  return a;
}

struct BaseLocusCheck {
  bool ok = false;
  std::string reason;
  std::optional<FormSystem> sys;
};

// cfg is exactly the base locus of a smooth pencil of cubics (r=3, n=9) or net of quadrics (r=4, n=8)
BaseLocusCheck check_base_locus(const PointConfig& cfg) {
  BaseLocusCheck out;
  unsigned deg;
  std::size_t want;
  if (cfg.r() == 3 && cfg.n() == 9) {
    deg = 3;
    want = 2;
  } else if (cfg.r() == 4 && cfg.n() == 8) {
    deg = 2;
    want = 3;
  } else {
    out.reason = "expected 9 points of P^2 or 8 points of P^3";
    return out;
  }
  auto sys = forms_through_points(cfg.field(), static_cast<unsigned>(cfg.r()), deg, cfg.points(),
                                  std::vector<int>(cfg.n(), 1));
  if (sys.dim() != want) {
    out.reason = "forms of degree " + std::to_string(deg) + " through the points have dimension " +
                 std::to_string(sys.dim()) + ", expected " + std::to_string(want);
    return out;
  }
  auto sm = is_smooth_zero_dim(sys);
  if (!sm.smooth) {
    out.reason = "base locus is not smooth of dimension 0: " + sm.reason;
    return out;
  }
  out.ok = true;
  out.sys = sys;
  return out;
}

int rho_of(const PointConfig& cfg, const IncidenceReport& inc) {
  if (cfg.r() == 3) return mw_rank_cubic(static_cast<int>(inc.a), static_cast<int>(inc.b));
  return mw_rank_quadric(static_cast<int>(inc.a));
}

// cheap projective invariant used to bucket configurations before config_equivalent
std::vector<std::size_t> fingerprint(const PointConfig& cfg, const IncidenceReport& inc) {
  std::vector<std::size_t> per(cfg.n(), 0);
  for (auto& s : inc.dependent_subsets)
    for (auto i : s) ++per[i];
  std::sort(per.begin(), per.end());
  std::vector<std::size_t> fp{static_cast<std::size_t>(cfg.field()->order()), inc.a, inc.b};
  fp.insert(fp.end(), per.begin(), per.end());
  return fp;
}

class Dedup {
 public:
  // true if cfg is new
  bool insert(const PointConfig& cfg, const IncidenceReport& inc) {
    auto& bucket = seen_[fingerprint(cfg, inc)];
    for (auto& other : bucket)
      if (equivalent(other, cfg)) return false;
    bucket.push_back(cfg);
    return true;
  }

 private:
  static bool equivalent(const PointConfig& a, const PointConfig& b) {
    try {
      return config_equivalent(a, b, true).has_value();
    } catch (const std::invalid_argument&) {
      return a.coords() == b.coords();
    }
  }
  std::map<std::vector<std::size_t>, std::vector<PointConfig>> seen_;
};

}  // namespace

bool cremona_step_legal(const PointConfig& cfg, const std::vector<std::size_t>& subset) {
  try {
    standard_cremona(cfg, subset);
    return true;
  } catch (const CremonaError&) {
    return false;
  }
}

PointConfig standard_cremona(const PointConfig& cfg, const std::vector<std::size_t>& subset, Matrix* transform) {
  std::size_t r = cfg.r();
  if (subset.size() != r) throw std::invalid_argument("a Cremona step needs exactly r points");
  std::set<std::size_t> uniq(subset.begin(), subset.end());
  if (uniq.size() != r) throw std::invalid_argument("subset indices must be distinct");
  for (auto i : subset)
    if (i >= cfg.n()) throw std::out_of_range("point index out of range");
  auto inv = cfg.coords().select_columns(subset).inverse();
  if (!inv) throw CremonaError("chosen points are linearly dependent");
  const Field& f = cfg.field();
  Matrix out(f, r, cfg.n());
  for (std::size_t k = 0; k < r; ++k) out(k, subset[k]) = f->one();
  for (std::size_t j = 0; j < cfg.n(); ++j) {
    if (uniq.count(j)) continue;
    auto y = inv->apply(cfg.point(j));
    for (std::size_t i = 0; i < r; ++i) {
      if (y[i].is_zero())
        throw CremonaError("point " + std::to_string(j + 1) +
                           " lies on a hyperplane spanned by r-1 chosen points");
    }
    for (std::size_t i = 0; i < r; ++i) out(i, j) = y[i].inv();
  }
  if (transform) *transform = *inv;
  return PointConfig::from_matrix(out);
}

WalkResult cremona_walk(const PointConfig& cfg, int depth, WalkStrategy strategy, std::uint64_t seed) {
  if (depth < 1) throw std::invalid_argument("walk depth must be at least 1");
  WalkResult res;
  auto inc0 = incidences(cfg);
  std::optional<int> rho0;
  if (inc0.a == 0) {
    res.mode = "lgp";
  } else {
    auto chk = check_base_locus(cfg);
    if (!chk.ok) {
      res.failure = WalkFailure{0, {}, "not in linear general position (points " + one_based(in_linear_general_position(cfg).witness).dump() +
                                           ") and not a smooth base locus: " + chk.reason};
      res.configs_per_depth.push_back(1);
      return res;
    }
    res.mode = "base_locus";
    rho0 = rho_of(cfg, inc0);
    res.rho = rho0;
  }
  if (res.mode == "lgp" && ((cfg.r() == 3 && cfg.n() == 9) || (cfg.r() == 4 && cfg.n() == 8))) {
    if (check_base_locus(cfg).ok) res.rho = rho_of(cfg, inc0);
  }

  // nullopt: fine; otherwise the reason for failure
  auto judge = [&](const PointConfig& c, const IncidenceReport& inc) -> std::optional<std::string> {
    if (res.mode == "lgp") {
      if (inc.a != 0)
        return "image is not in linear general position (points " +
               one_based(in_linear_general_position(c).witness).dump() + ")";
      return std::nullopt;
    }
    auto chk = check_base_locus(c);
    if (!chk.ok) return "image is not a smooth base locus: " + chk.reason;
    int rho = rho_of(c, inc);
    if (rho != *rho0) return "rho changed from " + std::to_string(*rho0) + " to " + std::to_string(rho);
    return std::nullopt;
  };

  auto subsets = all_subsets(cfg.n(), cfg.r());
  res.configs_per_depth.push_back(1);

  if (strategy == WalkStrategy::random) {
    std::mt19937_64 rng(seed);
    PointConfig cur = cfg;
    std::vector<std::vector<std::size_t>> path;
    for (int k = 1; k <= depth; ++k) {
      std::vector<std::vector<std::size_t>> legal;
      for (auto& s : subsets) {
        if (cremona_step_legal(cur, s))
          legal.push_back(s);
        else
          ++res.steps_skipped;
      }
      if (legal.empty()) {
        res.failure = WalkFailure{static_cast<std::size_t>(k), path, "no legal Cremona step"};
        return res;
      }
      std::uniform_int_distribution<std::size_t> pick(0, legal.size() - 1);
      auto s = legal[pick(rng)];
      Matrix t(cfg.field(), cfg.r(), cfg.r());
      PointConfig next = standard_cremona(cur, s, &t);
      ++res.steps_applied;
      path.push_back(s);
      res.log.push_back(CremonaStep{s, t});
      auto why = judge(next, incidences(next));
      if (why) {
        res.failure = WalkFailure{static_cast<std::size_t>(k), path, *why};
        return res;
      }
      res.configs_per_depth.push_back(1);
      cur = next;
    }
    res.survived = true;
    return res;
  }

  struct Node {
    PointConfig cfg;
    std::vector<std::vector<std::size_t>> path;
  };
  Dedup dedup;
  dedup.insert(cfg, inc0);
  std::vector<Node> frontier{{cfg, {}}};
  for (int k = 1; k <= depth; ++k) {
    std::vector<Node> next;
    for (auto& node : frontier) {
      for (auto& s : subsets) {
        std::optional<PointConfig> img;
        try {
          img = standard_cremona(node.cfg, s);
        } catch (const CremonaError& ex) {
          if (res.mode == "lgp") {
            auto p = node.path;
            p.push_back(s);
            res.failure = WalkFailure{static_cast<std::size_t>(k), p, ex.what()};
            return res;
          }
          ++res.steps_skipped;
          continue;
        }
        ++res.steps_applied;
        auto inc = incidences(*img);
        auto p = node.path;
        p.push_back(s);
        auto why = judge(*img, inc);
        if (why) {
          res.failure = WalkFailure{static_cast<std::size_t>(k), p, *why};
          return res;
        }
        if (dedup.insert(*img, inc)) next.push_back({*img, p});
      }
    }
    res.configs_per_depth.push_back(next.size());
    frontier = std::move(next);
  }
  res.survived = true;
  return res;
}

std::string to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::infinite_generation:
      return "infinite_generation";
    case VerdictStatus::finite_generation:
      return "finite_generation";
    case VerdictStatus::undetermined:
      return "undetermined";
  }
  return "undetermined";
}

json Verdict::to_json() const {
  json j{{"status", to_string(status)}, {"certificate", certificate}, {"citations", citations}};
  j["rho"] = rho ? json(*rho) : json(nullptr);
  j["a"] = a ? json(*a) : json(nullptr);
  j["b"] = b ? json(*b) : json(nullptr);
  if (!reason.empty()) j["reason"] = reason;
  return j;
}

namespace {

json subsets_json(const std::vector<std::vector<std::size_t>>& s) {
  json a = json::array();
  for (auto& v : s) a.push_back(one_based(v));
  return a;
}

json forms_json(const FormSystem& sys) {
  json a = json::array();
  for (auto& g : sys.basis()) a.push_back(g.to_string(default_var_names(sys.nvars())));
  return a;
}

}  // namespace

Verdict analyze_cubic_config(const PointConfig& cfg) {
  Verdict v;
  v.citations = {"Mordell-Weil rank rho = 8 - a + b of the elliptic fibration given by the cubic pencil",
                 "infinitely many (-1)-curves when rho > 0; finite generation when rho = 0"};
  if (cfg.r() != 3 || cfg.n() != 9) {
    v.reason = "expected 9 points of P^2";
    return v;
  }
  auto chk = check_base_locus(cfg);
  if (!chk.ok) {
    v.reason = chk.reason;
    return v;
  }
  auto inc = incidences(cfg);
  v.a = static_cast<int>(inc.a);
  v.b = static_cast<int>(inc.b);
  v.rho = mw_rank_cubic(*v.a, *v.b);
  v.status = *v.rho > 0 ? VerdictStatus::infinite_generation : VerdictStatus::finite_generation;
  json partitions = json::array();
  for (auto& w : inc.partition_witnesses) {
    json part = json::array();
    for (auto t : w) part.push_back(one_based(inc.dependent_subsets[t]));
    partitions.push_back(part);
  }
  v.certificate = {{"route", "mordell_weil_rank"},
                   {"pencil", forms_json(*chk.sys)},
                   {"smooth_base_locus", true},
                   {"collinear_triples", subsets_json(inc.dependent_subsets)},
                   {"triple_partitions", partitions},
                   {"reducible_fibers_rank_sum", inc.a - inc.b}};
  if (inc.a == 0) {
    v.certificate["cremona_general_position"] =
        "no three points collinear: a smooth pencil base locus in linear general position is in Cremona general position";
  }
  return v;
}

Verdict analyze_quadric_config(const PointConfig& cfg) {
  Verdict v;
  v.citations = {"Mordell-Weil rank rho = 7 - a/2 of the quasi-elliptic fibration given by the quadric net"};
  if (cfg.r() != 4 || cfg.n() != 8) {
    v.reason = "expected 8 points of P^3";
    return v;
  }
  auto chk = check_base_locus(cfg);
  if (!chk.ok) {
    v.reason = chk.reason;
    return v;
  }
  auto inc = incidences(cfg);
  v.a = static_cast<int>(inc.a);
  v.rho = mw_rank_quadric(*v.a);
  auto red = pencil_net_irreducible(*chk.sys, &cfg);
  json members = json::array();
  for (auto& m : red.reducible_members) members.push_back(m.form.to_string(default_var_names(4)));
  v.certificate = {{"route", "mordell_weil_rank"},
                   {"net", forms_json(*chk.sys)},
                   {"smooth_base_locus", true},
                   {"coplanar_quadruples", subsets_json(inc.dependent_subsets)},
                   {"reducible_quadrics", members}};
  if (*v.rho > 0) {
    v.status = VerdictStatus::infinite_generation;
  } else {
    v.status = VerdictStatus::finite_generation;
    v.certificate["relies_on_strengthening"] = true;
    v.citations.push_back("finite generation for rho = 0 uses the converse for quadric nets, not proved here");
  }
  return v;
}

Verdict certify_dim5(const PointConfig& cfg) {
  if (cfg.r() != 3 || cfg.n() != 9) throw std::invalid_argument("expected 9 points of P^2");
  auto chk = check_base_locus(cfg);
  if (!chk.ok) throw std::invalid_argument("hypothesis failure: " + chk.reason);
  auto inc = incidences(cfg);
  if (inc.a != 0)
    throw std::invalid_argument("hypothesis failure: " + std::to_string(inc.a) + " collinear triples (first " +
                                one_based(inc.dependent_subsets.front()).dump() + ")");
  auto dual = dualize(cfg);
  Verdict v;
  v.status = VerdictStatus::infinite_generation;
  v.citations = {"association of 9 points: the dual of a pencil base locus in P^2 is a configuration in P^5",
                 "Cremona general position of the dual from that of the original points"};
  v.certificate = {{"route", "duality"},
                   {"dual_points", config_to_json(dual)},
                   {"group", "(G_a)^3"},
                   {"representation_dimension", 18},
                   {"index_note", "Cremona steps on p1..p6 in P^2 correspond to steps on p9..p4 in P^5"},
                   {"pencil", forms_json(*chk.sys)}};
  return v;
}

PointConfig split_base_locus(const FormSystem& sys) {
  auto pts = base_locus(sys, 64);
  if (pts.empty()) throw std::domain_error("empty base locus");
  unsigned L = 1;
  for (auto& p : pts) {
    if (p.multiplicity != 1) throw std::domain_error("base locus is not reduced");
    L = std::lcm(L, p.degree);
  }
  const Field& F = sys.field();
  Field big = L == 1 ? F : galois_field(F->characteristic(), F->degree() * L);
  std::vector<std::vector<Elem>> coords;
  for (auto& p : pts) {
    Embedding e(p.field, big);
    std::vector<Elem> v;
    for (auto& x : p.coords) v.push_back(e.map(x));
    coords.push_back(v);
  }
  return PointConfig::create(big, sys.nvars(), coords);
}

}  // namespace nagata
