#include "nagata/verify.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "nagata/config.hpp"
#include "nagata/cremona.hpp"
#include "nagata/forms.hpp"
#include "nagata/json_io.hpp"
#include "nagata/picard.hpp"
#include "nagata/repkit.hpp"

namespace nagata {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
}

class Checks {
 public:
  explicit Checks(std::string data_dir) : dir_(std::move(data_dir)) {}

  void check(const std::string& name, bool ok, const std::string& detail = "") { lines_.push_back({name, ok, detail}); }
  // run a block; an exception becomes a failed line
  void guarded(const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      check(name, false, std::string("exception: ") + e.what());
    }
  }
  json dataset(const std::string& name) const { return load_dataset(name, dir_); }
  PointConfig config(const std::string& name) const { return config_from_json(dataset(name)); }
  std::vector<CheckLine> take() { return std::move(lines_); }

 private:
  std::string dir_;
  std::vector<CheckLine> lines_;
};

template <class T>
std::string str(const std::optional<T>& v) {
  return v ? std::to_string(*v) : std::string("none");
}

bool same_projective_point(const std::vector<Elem>& a, const std::vector<Elem>& b) {
  if (a.size() != b.size()) return false;
  return normalize_point(a) == normalize_point(b);
}

PointConfig reduce_mod(const PointConfig& c, std::uint64_t p) {
  auto f = prime_field(p);
  std::vector<std::vector<Elem>> pts;
  for (auto& pt : c.points()) {
    std::vector<Elem> v;
    for (auto& x : pt) v.push_back(f->parse(x.to_string()));
    pts.push_back(v);
  }
  return PointConfig::create(f, c.r(), pts);
}

PointConfig ints(const Field& f, std::size_t r, const std::vector<std::vector<std::int64_t>>& pts) {
  std::vector<std::vector<Elem>> out;
  for (auto& p : pts) {
    std::vector<Elem> v;
    for (auto x : p) v.push_back(f->from_int(x));
    out.push_back(v);
  }
  return PointConfig::create(f, r, out);
}

// forms up to scalars
bool same_form_up_to_scalar(const MPoly& a, const MPoly& b) {
  if (a.is_zero() || b.is_zero() || a.nvars() != b.nvars() || a.total_degree() != b.total_degree()) return false;
  auto mons = monomials(a.nvars(), static_cast<unsigned>(a.total_degree()));
  return Matrix::from_rows(a.field(), {a.dense(mons), b.dense(mons)}).rank() == 1;
}

// classes with x.x = x.K = -1 for r = 3, by exhaustive search with integer pruning
std::vector<PicClass> enumerate_minus_one_r3(int n, int dmax) {
  std::vector<PicClass> out;
  for (int d = 0; d <= dmax; ++d) {
    std::int64_t want_sum = 3 * static_cast<std::int64_t>(d) - 1;
    std::int64_t want_sq = static_cast<std::int64_t>(d) * d + 1;
    int bound = 0;
    while (static_cast<std::int64_t>(bound + 1) * (bound + 1) <= want_sq) ++bound;
    std::vector<std::int64_t> m(n);
    std::function<void(int, std::int64_t, std::int64_t)> rec = [&](int i, std::int64_t sum, std::int64_t sq) {
      if (sq > want_sq) return;
      std::int64_t rest = n - i, gap = want_sum - sum;
      if (gap * gap > rest * (want_sq - sq)) return;
      if (i == n) {
        if (sum == want_sum && sq == want_sq) out.push_back(PicClass{d, m});
        return;
      }
      for (int v = -bound; v <= bound; ++v) {
        m[i] = v;
        rec(i + 1, sum + v, sq + static_cast<std::int64_t>(v) * v);
      }
    };
    rec(0, 0, 0);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void rho_cubic(Checks& c) {
  struct Case {
    const char* name;
    int a, b, rho;
  };
  for (auto cs : {Case{"grid_f5", 8, 2, 2}, Case{"f4_cubic", 9, 3, 2}, Case{"f9_cubic", 7, 2, 3}}) {
    c.guarded(cs.name, [&] {
      auto t0 = Clock::now();
      auto v = analyze_cubic_config(c.config(cs.name));
      auto ms = elapsed_ms(t0);
      bool ok = v.a == cs.a && v.b == cs.b && v.rho == cs.rho && v.status == VerdictStatus::infinite_generation;
      c.check(std::string(cs.name) + " (a,b,rho)", ok,
              "(" + str(v.a) + "," + str(v.b) + "," + str(v.rho) + ") " + to_string(v.status) +
                  (v.reason.empty() ? "" : ": " + v.reason));
      c.check(std::string(cs.name) + " under 1 s", ms < 1000, std::to_string(ms) + " ms");
    });
  }
}

void rho_quadric(Checks& c) {
  struct Case {
    const char* name;
    int a, rho;
    std::size_t reducible;
  };
  for (auto cs : {Case{"cube_f5", 12, 1, 6}, Case{"f4_quadric", 10, 2, 5}}) {
    c.guarded(cs.name, [&] {
      auto ds = c.dataset(cs.name);
      auto cfg = config_from_json(ds);
      auto v = analyze_quadric_config(cfg);
      c.check(std::string(cs.name) + " (a,rho)", v.a == cs.a && v.rho == cs.rho,
              "(" + str(v.a) + "," + str(v.rho) + ") " + to_string(v.status) + (v.reason.empty() ? "" : ": " + v.reason));
      auto sys = system_from_json(cfg.field(), ds);
      auto red = pencil_net_irreducible(sys, &cfg);
      c.check(std::string(cs.name) + " reducible quadrics", red.reducible_members.size() == cs.reducible,
              std::to_string(red.reducible_members.size()) + " found");
      if (ds.contains("reducible_members")) {
        std::size_t matched = 0;
        for (auto& s : ds.at("reducible_members")) {
          auto target = form_from_json(cfg.field(), 4, s);
          for (auto& m : red.reducible_members)
            if (same_form_up_to_scalar(m.form, target)) {
              ++matched;
              break;
            }
        }
        c.check(std::string(cs.name) + " listed quadrics found", matched == ds.at("reducible_members").size(),
                std::to_string(matched) + "/" + std::to_string(ds.at("reducible_members").size()));
      }
    });
  }
}

void sweeps(Checks& c) {
  auto t0 = Clock::now();
  struct Sweep {
    const char* name;
    int nets;  // 1 pencil, 2 net
  };
  for (auto sw : {Sweep{"cuspidal_pencil", 1}, Sweep{"quadric_net", 2}}) {
    c.guarded(sw.name, [&] {
      auto ds = c.dataset(sw.name);
      for (auto& pj : ds.at("primes")) {
        std::uint64_t p = pj.get<std::uint64_t>();
        auto sys = system_from_json(prime_field(p), ds);
        auto sm = is_smooth_zero_dim(sys);
        auto ir = pencil_net_irreducible(sys, nullptr);
        std::uint64_t members = sw.nets == 1 ? p + 1 : p * p + p + 1;
        c.check(std::string(sw.name) + " p=" + std::to_string(p),
                sm.smooth && ir.all_irreducible && ir.members_tested == members,
                std::string(sm.smooth ? "smooth" : "not smooth: " + sm.reason) + ", " +
                    std::to_string(ir.members_tested) + " members, " +
                    std::to_string(ir.reducible_members.size()) + " reducible");
      }
    });
  }
  auto ms = elapsed_ms(t0);
  c.check("sweeps under 60 s", ms < 60000, std::to_string(ms) + " ms");
}

void base_points(Checks& c) {
  c.guarded("ninth point", [&] {
    auto cfg = c.config("rational_3x9");
    auto all = cfg.points();
    std::vector<std::vector<Elem>> pts(all.begin(), all.begin() + 8);
    auto q = cfg.field();
    auto ninth = ninth_base_point(PointConfig::create(q, 3, pts));
    std::vector<Elem> want = {q->from_int(-7), q->from_int(2), q->from_int(-1)};
    c.check("ninth point (-7,2,-1)", same_projective_point(ninth, want), point_to_string(ninth));
    c.check("ninth point is the listed column", same_projective_point(ninth, cfg.point(8)), point_to_string(cfg.point(8)));
    c.check("3x9 in LGP over Q", in_linear_general_position(cfg).in_general_position);
    for (std::uint64_t p : {29, 31})
      c.check("3x9 in LGP over F_" + std::to_string(p), in_linear_general_position(reduce_mod(cfg, p)).in_general_position);
  });
  c.guarded("eighth point", [&] {
    auto cfg = c.config("rational_4x8");
    auto all = cfg.points();
    std::vector<std::vector<Elem>> pts(all.begin(), all.begin() + 7);
    auto q = cfg.field();
    auto eighth = eighth_base_point(PointConfig::create(q, 4, pts));
    std::vector<Elem> want = {q->from_int(-6), q->from_int(-8), q->from_int(-7), q->from_int(-4)};
    c.check("eighth point (-6,-8,-7,-4)", same_projective_point(eighth, want), point_to_string(eighth));
    c.check("4x8 in LGP over Q", in_linear_general_position(cfg).in_general_position);
    for (std::uint64_t p : {11, 13})
      c.check("4x8 in LGP over F_" + std::to_string(p), in_linear_general_position(reduce_mod(cfg, p)).in_general_position);
  });
}

void weyl(Checks& c) {
  c.guarded("weyl_is_infinite", [&] {
    std::vector<std::pair<int, int>> cases;
    for (int n = 4; n <= 9; ++n) cases.push_back({3, n});
    cases.push_back({4, 8});
    cases.push_back({6, 9});
    std::string got;
    bool ok = true;
    for (auto [r, n] : cases) {
      bool expect = (r == 3 && n == 9) || (r == 4 && n == 8) || (r == 6 && n == 9);
      bool inf = weyl_is_infinite(r, n);
      ok = ok && inf == expect;
      if (inf) got += "(" + std::to_string(r) + "," + std::to_string(n) + ")";
    }
    c.check("infinite exactly for (3,9),(4,8),(6,9)", ok, "infinite: " + got);
  });
  for (auto [n, expect] : {std::pair{6, 27}, std::pair{7, 56}, std::pair{8, 240}}) {
    c.guarded("closure n=" + std::to_string(n), [&, n = n, expect = expect] {
      auto oracle = enumerate_minus_one_r3(n, 12);
      CremonaLattice lat(3, n);
      std::vector<PicClass> seeds;
      for (int i = 0; i < n; ++i) seeds.push_back(exceptional_class(lat, i));
      auto rep = orbit_bfs(lat, seeds, -1);
      c.check("(3," + std::to_string(n) + ") oracle count " + std::to_string(expect),
              oracle.size() == static_cast<std::size_t>(expect), std::to_string(oracle.size()) + " by enumeration");
      c.check("(3," + std::to_string(n) + ") orbit closure equals oracle", rep.closed && rep.classes() == oracle,
              std::to_string(rep.total_classes) + " classes");
    });
  }
  c.guarded("(3,9) degrees", [&] {
    CremonaLattice lat(3, 9);
    auto rep = orbit_bfs(lat, {exceptional_class(lat, 0)}, 8);
    bool ok = rep.per_depth_max_degree.size() == 9;
    std::string degs;
    for (std::size_t k = 1; k < rep.per_depth_max_degree.size(); ++k) {
      degs += std::to_string(rep.per_depth_max_degree[k]) + " ";
      if (k >= 2) ok = ok && rep.per_depth_max_degree[k] > rep.per_depth_max_degree[k - 1];
    }
    c.check("(3,9) max degree strictly increasing over depths 1..8", ok, degs);
  });
}

void reflections(Checks& c) {
  std::mt19937_64 rng(20061);
  for (auto [r, n] : {std::pair{3, 9}, std::pair{4, 8}, std::pair{6, 9}}) {
    c.guarded("lattice", [&, r = r, n = n] {
      CremonaLattice lat(r, n);
      std::uniform_int_distribution<int> dd(-20, 20), mm(-10, 10);
      auto sample = [&] {
        PicClass x{dd(rng), {}};
        for (int i = 0; i < n; ++i) x.m.push_back(mm(rng));
        return x;
      };
      auto K = canonical_class(lat);
      bool half = r % 2 == 0;
      PicClass hK = half ? half_anticanonical(lat) : K;
      std::size_t bad_inv = 0, bad_dot = 0, bad_k = 0, bad_half = 0;
      for (int t = 0; t < 1000; ++t) {
        auto x = sample(), y = sample();
        for (int i = 0; i < n; ++i) {
          auto sx = reflection(lat, i, x);
          if (!(reflection(lat, i, sx) == x)) ++bad_inv;
          if (dot(lat, sx, reflection(lat, i, y)) != dot(lat, x, y)) ++bad_dot;
        }
      }
      for (int i = 0; i < n; ++i) {
        if (!(reflection(lat, i, K) == K)) ++bad_k;
        if (half && !(reflection(lat, i, hK) == hK)) ++bad_half;
      }
      std::string tag = "(" + std::to_string(r) + "," + std::to_string(n) + ")";
      c.check(tag + " s_i^2 = id", bad_inv == 0, std::to_string(bad_inv) + " violations");
      c.check(tag + " dot preserved", bad_dot == 0, std::to_string(bad_dot) + " violations");
      c.check(tag + " K fixed", bad_k == 0);
      if (half) c.check(tag + " -K/2 fixed", bad_half == 0);
    });
  }
}

void mukai(Checks& c) {
  auto run = [&](const std::string& name, const PointConfig& cfg) {
    c.guarded(name, [&] {
      auto rep = build_representation(cfg);
      auto res = mukai_cross_check(rep, cfg, 3, 3, 10000);
      std::string detail = std::to_string(res.equal_cells) + "/" + std::to_string(res.cells) + " cells equal, " +
                           std::to_string(res.skipped_cells) + " skipped";
      if (!res.mismatches.empty()) {
        auto& m = res.mismatches.front();
        std::ostringstream os;
        os << "; first mismatch a=" << m.a << " c=";
        for (int x : m.c) os << x;
        os << " invariants " << m.invariant_dim << " vs h0 " << m.h0_dim;
        detail += os.str();
      }
      c.check(name + " all cells equal", res.all_equal() && res.skipped_cells == 0, detail);
    });
  };
  run("grid over F_5", c.config("grid_f5"));
  auto f7 = prime_field(7);
  auto five = ints(f7, 3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}, {1, 2, 3}});
  c.check("5 points over F_7 in LGP", in_linear_general_position(five).in_general_position);
  run("5 points over F_7", five);
}

void appendix(Checks& c) {
  struct Case {
    const char* name;
    std::uint64_t p;
    std::int64_t c0, c1;  // lambda^2 + c1 lambda + c0
  };
  for (auto cs : {Case{"f4_cubic", 2, 1, 1}, Case{"f9_cubic", 3, -1, 1}, Case{"f4_quadric", 2, 1, 1}}) {
    c.guarded(cs.name, [&] {
      std::string nm = cs.name;
      auto ds = c.dataset(nm);
      Matrix M = representation_matrix_from_json(ds);
      Matrix rows = matrix_from_json(M.field(), ds.at("subgroup_rows"));
      c.check(nm + " subgroup rows in kernel", (M * rows.transpose()).is_zero() && rows.rank() == M.cols() - M.rank());
      auto diag = representation_from_rows(M, rows);
      c.check(nm + " diagonal generators commute", generators_commute(diag.generators()));
      Field base = prime_field(cs.p);
      auto tw = twist_representation(diag, base);
      auto gens = tw.generators();
      c.check(nm + " twisted generators commute and are unipotent",
              generators_commute(gens) && generators_unipotent(gens),
              std::to_string(gens.size()) + " maps of size " + std::to_string(2 * tw.n));
      c.check(nm + " base change conjugate to the diagonal form", twist_matches_diagonal(tw, diag));
      bool poly_ok = true, block_ok = true;
      for (std::size_t oi = 0; oi < tw.orbits.size(); ++oi) {
        if (tw.orbits[oi].size() != 2) continue;
        const Matrix& C = tw.companions[oi];
        Matrix I = Matrix::identity(base, 2);
        poly_ok = poly_ok && (C * C + C.scale(base->from_int(cs.c1)) + I.scale(base->from_int(cs.c0))).is_zero();
        Matrix want(base, 2, 2);
        want(0, 1) = want(1, 0) = base->one();
        want(1, 1) = base->from_int(-cs.c1);
        want(0, 0) = base->zero();
        block_ok = block_ok && C == want;
      }
      c.check(nm + " companion blocks", poly_ok && block_ok,
              cs.p == 2 ? "[[0,1],[1,1]], lambda^2+lambda+1" : "[[0,1],[1,-1]], lambda^2+lambda-1");
      if (ds.contains("twisted_blocks")) {
        bool ok = true;
        const json& printed = ds.at("twisted_blocks");
        for (std::size_t k = 0; k < rows.rows() && k < printed.size(); ++k) {
          Matrix expect(base, tw.n, tw.n);
          std::size_t pos = 0;
          for (auto& entry : printed[k]) {
            if (entry.is_array()) {
              for (std::size_t i = 0; i < entry.size(); ++i)
                for (std::size_t j = 0; j < entry.size(); ++j) expect(pos + i, pos + j) = elem_from_json(base, entry[i][j]);
              pos += entry.size();
            } else {
              expect(pos, pos) = elem_from_json(base, entry);
              ++pos;
            }
          }
          ok = ok && pos == tw.n && twisted_block(tw, rows.row(k)) == expect;
        }
        c.check(nm + " printed F_" + std::to_string(cs.p) + " matrices reproduced", ok && printed.size() == rows.rows());
      }
    });
  }
}

void duality(Checks& c) {
  c.guarded("grid", [&] {
    auto grid = c.config("grid_f5");
    auto d = dualize(grid);
    auto lgp = in_linear_general_position(d);
    std::string w;
    for (auto i : lgp.witness) w += std::to_string(i + 1) + " ";
    c.check("dual of the grid in LGP in P^5", lgp.in_general_position,
            lgp.in_general_position ? "" : "dependent 6-subset: " + w);
    c.check("dual of the grid equivalent to its Veronese image",
            config_equivalent(d, veronese_embed(grid), true).has_value());
  });
  c.guarded("cube", [&] {
    auto cube = c.config("cube_f5");
    c.check("binary cube equivalent to its dual", config_equivalent(cube, dualize(cube), true).has_value());
  });
}

void cremona(Checks& c) {
  c.guarded("grid walks", [&] {
    auto grid = c.config("grid_f5");
    auto ex = cremona_walk(grid, 2, WalkStrategy::exhaustive);
    c.check("grid exhaustive depth 2 survives", ex.survived && ex.rho == 2,
            "mode " + ex.mode + ", " + std::to_string(ex.steps_applied) + " steps, rho " + str(ex.rho) +
                (ex.failure ? ", " + ex.failure->reason : ""));
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto rw = cremona_walk(grid, 10, WalkStrategy::random, seed);
      c.check("grid random walk seed " + std::to_string(seed), rw.survived && rw.rho == 2 && rw.log.size() == 10,
              std::to_string(rw.log.size()) + " steps" + (rw.failure ? ", " + rw.failure->reason : ""));
    }
  });
  c.guarded("collinear", [&] {
    auto f = prime_field(7);
    auto bad = ints(f, 3, {{1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0, 0, 1}, {1, 2, 1}, {2, 1, 1}, {1, 3, 1}, {3, 2, 1}, {1, 5, 1}});
    auto res = cremona_walk(bad, 2, WalkStrategy::exhaustive);
    c.check("config with 3 collinear points fails at depth 0",
            !res.survived && res.failure && res.failure->depth == 0, res.failure ? res.failure->reason : "");
  });
}

const std::map<int, std::function<void(Checks&)>>& runners() {
  static const std::map<int, std::function<void(Checks&)>> r = {
      {1, rho_cubic}, {2, rho_quadric}, {3, sweeps},   {4, base_points}, {5, weyl},
      {6, reflections}, {7, mukai},     {8, appendix}, {9, duality},     {10, cremona}};
  return r;
}

}  // namespace

json CriterionResult::to_json() const {
  json ch = json::array();
  for (auto& l : checks) ch.push_back(json{{"name", l.name}, {"passed", l.passed}, {"detail", l.detail}});
  return json{{"id", info.id}, {"key", info.key}, {"title", info.title}, {"passed", passed}, {"millis", millis}, {"checks", ch}};
}

const std::vector<CriterionInfo>& acceptance_criteria() {
  static const std::vector<CriterionInfo> c = {
      {1, "rho-cubic", "rho for the grid, F_4 and F_9 cubic pencils", {"rho", "cubic"}},
      {2, "rho-quadric", "rho for the binary cube and the F_4 quadric net", {"rho", "quadric"}},
      {3, "sweeps", "cuspidal pencil and quadric net irreducibility sweeps", {"irreducible", "smooth"}},
      {4, "base-points", "ninth and eighth base points, general position mod p", {"points", "lgp"}},
      {5, "weyl", "Weyl group finiteness, orbit closures, growing degrees", {"orbit", "picard"}},
      {6, "reflections", "reflection properties on random classes", {"picard"}},
      {7, "mukai", "invariant dimensions equal section dimensions", {"rep", "crosscheck"}},
      {8, "appendix", "twisted representations over F_2 and F_3", {"rep", "twist"}},
      {9, "duality", "association, Veronese image and cube self-duality", {"dual"}},
      {10, "cremona", "Cremona walks on the grid", {"walk"}},
  };
  return c;
}

bool criterion_selected(const CriterionInfo& c, const std::string& filter) {
  if (filter.empty()) return true;
  std::stringstream ss(filter);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    if (tok == std::to_string(c.id) || tok == c.key) return true;
    if (c.key.find(tok) != std::string::npos) return true;
    for (auto& t : c.tags)
      if (t == tok) return true;
  }
  return false;
}

std::vector<CriterionResult> run_acceptance(const std::string& filter, const std::string& data_dir) {
  std::vector<CriterionResult> out;
  for (auto& info : acceptance_criteria()) {
    if (!criterion_selected(info, filter)) continue;
    Checks checks(data_dir);
    auto t0 = Clock::now();
    runners().at(info.id)(checks);
    CriterionResult res{info, true, checks.take(), elapsed_ms(t0)};
    if (res.checks.empty()) res.passed = false;
    for (auto& l : res.checks) res.passed = res.passed && l.passed;
    out.push_back(std::move(res));
  }
  return out;
}

}  // namespace nagata
