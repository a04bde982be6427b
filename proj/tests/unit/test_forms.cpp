#include <gtest/gtest.h>

#include <random>
#include <set>

#include "nagata/errors.hpp"
#include "nagata/forms.hpp"
#include "nagata/unipoly.hpp"
#include "test_util.hpp"

using namespace nagata;

namespace {

MPoly P(const Field& f, unsigned n, const std::string& s) { return parse_mpoly(f, default_var_names(n), s); }

std::size_t span_rank(const Field& f, const std::vector<MPoly>& forms, unsigned nvars, unsigned deg) {
  auto mons = monomials(nvars, deg);
  std::vector<std::vector<Elem>> rows;
  for (auto& g : forms) rows.push_back(g.dense(mons));
  if (rows.empty()) return 0;
  return Matrix::from_rows(f, rows).rank();
}

// substitute a parametrized linear subspace: x = sum_k t_k v_k
MPoly restrict_to(const MPoly& g, const std::vector<std::vector<Elem>>& span, const Field& f) {
  unsigned k = static_cast<unsigned>(span.size());
  std::vector<MPoly> images;
  for (unsigned i = 0; i < g.nvars(); ++i) {
    MPoly s(f, k);
    for (unsigned j = 0; j < k; ++j) s = s + MPoly::var(f, k, j).scale(span[j][i]);
    images.push_back(s);
  }
  return g.substitute(images);
}

// basis of the hyperplane {x : a.x = 0}
std::vector<std::vector<Elem>> hyperplane_span(const Field& f, const std::vector<Elem>& a) {
  auto m = Matrix::from_rows(f, {a});
  auto k = m.kernel();
  std::vector<std::vector<Elem>> out;
  for (std::size_t i = 0; i < k.rows(); ++i) out.push_back(k.row(i));
  return out;
}

// brute force: does g (over F_q) have a linear factor over F_{q^k}, some k <= kmax
bool has_linear_factor_oracle(const MPoly& g, unsigned kmax) {
  const Field& f = g.field();
  std::uint64_t p = f->characteristic();
  unsigned d0 = f->degree();
  for (unsigned k = 1; k <= kmax; ++k) {
    Field big = galois_field(p, d0 * k);
    Embedding e(f, big);
    MPoly gb = g.map_coeffs(e);
    for (auto& a : testutil::projective_points(big, g.nvars())) {
      if (restrict_to(gb, hyperplane_span(big, a), big).is_zero()) return true;
    }
  }
  return false;
}

MPoly random_form(const Field& f, unsigned n, unsigned d, std::mt19937_64& rng) {
  MPoly g(f, n);
  for (auto& m : monomials(n, d)) g.add_term(m, f->from_code(rng() % f->order()));
  return g;
}

std::vector<std::vector<Elem>> base_points_brute(const FormSystem& sys, const Field& big) {
  Embedding e(sys.field(), big);
  std::vector<MPoly> gs;
  for (auto& g : sys.basis()) gs.push_back(g.map_coeffs(e));
  std::vector<std::vector<Elem>> out;
  for (auto& pt : testutil::projective_points(big, sys.nvars())) {
    bool all = true;
    for (auto& g : gs) all = all && g.eval(pt).is_zero();
    if (all) out.push_back(pt);
  }
  return out;
}

}  // namespace

TEST(Forms, ParseAndEvaluate) {
  auto f = prime_field(5);
  auto g = P(f, 3, "x^3 - x*z^2");
  EXPECT_EQ(g.total_degree(), 3);
  EXPECT_TRUE(g.is_homogeneous());
  EXPECT_TRUE(g.eval({f->from_int(1), f->from_int(2), f->from_int(1)}).is_zero());
  EXPECT_EQ(P(f, 3, "(x+y)^2"), P(f, 3, "x^2 + 2*x*y + y^2"));
  EXPECT_THROW(P(f, 3, "x^2 + "), std::invalid_argument);
  EXPECT_THROW(FormSystem(f, 3, 2, {P(f, 3, "x^2 + y")}), std::invalid_argument);
  EXPECT_THROW(FormSystem(f, 3, 2, {P(f, 3, "x^2"), P(f, 3, "2*x^2")}), std::invalid_argument);
}

TEST(Forms, GridCubicsThroughNinePoints) {
  auto grid = testutil::config("grid_f5");
  auto f = grid.field();
  auto sys = forms_through_points(f, 3, 3, grid.points(), std::vector<int>(9, 1));
  EXPECT_EQ(sys.dim(), 2u);
  std::vector<MPoly> all = sys.basis();
  all.push_back(P(f, 3, "x^3 - x*z^2"));
  all.push_back(P(f, 3, "y^3 - y*z^2"));
  EXPECT_EQ(span_rank(f, all, 3, 3), 2u);
}

TEST(Forms, CubeQuadricsThroughEightPoints) {
  auto cube = testutil::config("cube_f5");
  auto f = cube.field();
  auto sys = forms_through_points(f, 4, 2, cube.points(), std::vector<int>(8, 1));
  EXPECT_EQ(sys.dim(), 3u);
  std::vector<MPoly> all = sys.basis();
  for (auto s : {"x^2 - x*w", "y^2 - y*w", "z^2 - z*w"}) all.push_back(P(f, 4, s));
  EXPECT_EQ(span_rank(f, all, 4, 2), 3u);
}

TEST(Forms, VanishingOrderMatchesProductsOfLinearForms) {
  // forms of degree a vanishing to order b at p = span of (b linear forms through p) * (degree a-b)
  std::mt19937_64 rng(7);
  for (auto f : {prime_field(7), galois_field(2, 2), rational_field()}) {
    for (unsigned r : {3u, 4u}) {
      for (int trial = 0; trial < 3; ++trial) {
        std::vector<Elem> p(r);
        for (auto& x : p) x = f->is_finite() ? f->from_code(rng() % f->order()) : f->from_int(static_cast<long>(rng() % 9) - 4);
        bool nz = false;
        for (auto& x : p) nz |= !x.is_zero();
        if (!nz) p[0] = f->one();
        auto lin = hyperplane_span(f, p);  // vectors orthogonal to p = linear forms through p
        for (unsigned a = 1; a <= 3; ++a) {
          for (int b = 0; b <= static_cast<int>(a) + 1; ++b) {
            auto rows = vanishing_conditions(a, p, b);
            std::size_t conds = rows.empty() ? 0 : Matrix::from_rows(f, rows).rank();
            std::size_t expect;
            if (b > static_cast<int>(a)) {
              expect = 0;
            } else {
              std::vector<MPoly> gens;
              std::vector<MPoly> cur{MPoly::constant(f->one(), f, r)};
              for (int s = 0; s < b; ++s) {
                std::vector<MPoly> nxt;
                for (auto& c : cur)
                  for (auto& l : lin) {
                    MPoly lf(f, r);
                    for (unsigned i = 0; i < r; ++i) lf = lf + MPoly::var(f, r, i).scale(l[i]);
                    nxt.push_back(c * lf);
                  }
                cur = nxt;
              }
              for (auto& c : cur)
                for (auto& m : monomials(r, a - b)) {
                  MPoly mm(f, r);
                  mm.add_term(m, f->one());
                  gens.push_back(c * mm);
                }
              expect = span_rank(f, gens, r, a);
            }
            EXPECT_EQ(binomial(r - 1 + a, a) - conds, expect) << f->name() << " r=" << r << " a=" << a << " b=" << b;
          }
        }
      }
    }
  }
}

TEST(Forms, H0Examples) {
  auto grid = testutil::config("grid_f5");
  EXPECT_EQ(h0(grid, 3, std::vector<int>(9, 1)), 2u);
  EXPECT_EQ(h0(grid, 2, std::vector<int>(9, 1)), 0u);
  EXPECT_EQ(h0(grid, 1, std::vector<int>(9, 0)), 3u);
  EXPECT_EQ(h0(grid, 2, std::vector<int>(9, 0)), 6u);
  EXPECT_EQ(h0(grid, 1, {1, 1, 1, 0, 0, 0, 0, 0, 0}), 1u);  // the line x = -z
  EXPECT_EQ(h0(grid, 2, {3, 0, 0, 0, 0, 0, 0, 0, 0}), 0u);
  EXPECT_EQ(h0(grid, 3, {2, 0, 0, 0, 0, 0, 0, 0, 0}), 7u);
  EXPECT_THROW(h0(grid, 3, {1, 1}), std::invalid_argument);
}

TEST(BaseLocus, GridHasNineRationalPoints) {
  auto grid = testutil::config("grid_f5");
  auto sys = testutil::forms("grid_f5", grid.field());
  auto pts = base_locus(sys, 1);
  ASSERT_EQ(pts.size(), 9u);
  for (auto& bp : pts) {
    EXPECT_EQ(bp.degree, 1u);
    EXPECT_EQ(bp.multiplicity, 1u);
    EXPECT_TRUE(grid.index_of(bp.coords).has_value());
  }
  EXPECT_TRUE(is_smooth_zero_dim(sys).smooth);
}

TEST(BaseLocus, CubeHasEightPoints) {
  auto cube = testutil::config("cube_f5");
  auto sys = testutil::forms("cube_f5", cube.field());
  auto pts = base_locus(sys, 1);
  ASSERT_EQ(pts.size(), 8u);
  for (auto& bp : pts) EXPECT_TRUE(cube.index_of(bp.coords).has_value());
  EXPECT_TRUE(is_smooth_zero_dim(sys).smooth);
}

TEST(BaseLocus, AgreesWithBruteForceOverExtensions) {
  auto cusp = testutil::dataset("cuspidal_pencil");
  auto net = testutil::dataset("quadric_net");
  struct Case {
    nagata::json j;
    std::uint64_t p;
  };
  std::vector<Case> cases{{cusp, 2}, {cusp, 3}, {cusp, 5}, {net, 2}, {net, 3}};
  for (auto& cs : cases) {
    auto f = prime_field(cs.p);
    auto sys = system_from_json(f, cs.j);
    auto pts = base_locus(sys, 8);
    unsigned total = 0;
    for (auto& bp : pts) total += bp.multiplicity;
    EXPECT_EQ(total, sys.nvars() == 3 ? 9u : 8u) << cs.p;
    for (unsigned m = 1; m <= 8; ++m) {
      std::uint64_t qm = 1;
      for (unsigned i = 0; i < m; ++i) qm *= cs.p;
      std::uint64_t npts = sys.nvars() == 3 ? qm * qm + qm + 1 : qm * qm * qm + qm * qm + qm + 1;
      if (npts > 20000) break;
      Field big = galois_field(cs.p, m);
      auto brute = base_points_brute(sys, big);
      std::set<std::vector<Elem>> ours;
      for (auto& bp : pts) {
        if (m % bp.degree) continue;
        Embedding e(bp.field, big);
        std::vector<Elem> v;
        for (auto& x : bp.coords) v.push_back(e.map(x));
        ours.insert(v);
      }
      std::set<std::vector<Elem>> theirs(brute.begin(), brute.end());
      EXPECT_EQ(ours, theirs) << "p=" << cs.p << " m=" << m << " nvars=" << sys.nvars();
    }
  }
}

TEST(BaseLocus, DetectsNonReducedScheme) {
  auto f = prime_field(7);
  FormSystem sys(f, 3, 3, {P(f, 3, "y^2*z"), P(f, 3, "x^3 + z^3")});
  auto rep = is_smooth_zero_dim(sys);
  EXPECT_FALSE(rep.smooth);
  auto pts = base_locus(sys, 2);
  unsigned total = 0;
  bool triple = false;
  for (auto& bp : pts) {
    total += bp.multiplicity;
    if (bp.coords == std::vector<Elem>{f->zero(), f->one(), f->zero()}) triple = bp.multiplicity == 3;
  }
  EXPECT_EQ(total, 9u);
  EXPECT_TRUE(triple);
}

TEST(BaseLocus, RejectsPositiveDimensional) {
  auto f = prime_field(5);
  FormSystem sys(f, 3, 3, {P(f, 3, "x^3"), P(f, 3, "x^2*y")});
  EXPECT_THROW(base_locus(sys, 1), std::domain_error);
  auto rep = is_smooth_zero_dim(sys);
  EXPECT_FALSE(rep.smooth);
}

TEST(BaseLocus, SweepsAreSmooth) {
  auto cusp = testutil::dataset("cuspidal_pencil");
  for (auto p : cusp.at("primes")) {
    auto sys = system_from_json(prime_field(p.get<std::uint64_t>()), cusp);
    auto rep = is_smooth_zero_dim(sys);
    EXPECT_TRUE(rep.smooth) << p << " " << rep.reason;
    EXPECT_EQ(rep.geometric_points, 9u);
  }
  auto net = testutil::dataset("quadric_net");
  for (auto p : net.at("primes")) {
    auto sys = system_from_json(prime_field(p.get<std::uint64_t>()), net);
    auto rep = is_smooth_zero_dim(sys);
    EXPECT_TRUE(rep.smooth) << p << " " << rep.reason;
    EXPECT_EQ(rep.geometric_points, 8u);
  }
}

TEST(Irreducible, SimpleCases) {
  auto f5 = prime_field(5), f2 = prime_field(2);
  EXPECT_FALSE(is_absolutely_irreducible(P(f5, 3, "x^3 - x*z^2")));
  EXPECT_TRUE(is_absolutely_irreducible(P(f2, 3, "x^3 + y^2*z")));
  EXPECT_FALSE(is_absolutely_irreducible(P(f2, 4, "z^2 + z*w + w^2")));
  EXPECT_FALSE(is_absolutely_irreducible(P(f5, 4, "(x + y)*(z - w)")));
  EXPECT_TRUE(is_absolutely_irreducible(P(f5, 4, "x*y - z*w")));
  auto q = rational_field();
  EXPECT_FALSE(is_absolutely_irreducible(P(q, 4, "x^2 - 2*y^2")));
  EXPECT_TRUE(is_absolutely_irreducible(P(q, 4, "x^2 + y^2 + z^2 - 3*w^2")));
  // the cubic x^3 + y^3 + z^3 splits into conjugate lines? no: smooth Fermat cubic in char != 3
  EXPECT_TRUE(is_absolutely_irreducible(P(f2, 3, "x^3 + y^3 + z^3")));
  // char 3: (x+y+z)^3
  EXPECT_FALSE(is_absolutely_irreducible(P(prime_field(3), 3, "x^3 + y^3 + z^3")));
}

TEST(Irreducible, LinearFactorOverExtension) {
  auto f2 = prime_field(2);
  // x^2 + xy + y^2 splits over F_4
  auto g = P(f2, 3, "(x^2 + x*y + y^2)*z");
  auto lf = find_linear_factor_cubic(P(f2, 3, "(x^2 + x*y + y^2)*(x + y + z)"));
  ASSERT_TRUE(lf.has_value());
  EXPECT_FALSE(is_absolutely_irreducible(g));
  // product of three conjugate lines over F_8
  auto f = galois_field(2, 3);
  Elem a = f->gen();
  std::vector<std::vector<Elem>> lines;
  MPoly prod = MPoly::constant(f->one(), f, 3);
  for (int k = 0; k < 3; ++k) {
    MPoly l = MPoly::var(f, 3, 0) + MPoly::var(f, 3, 1).scale(a) + MPoly::var(f, 3, 2).scale(a * a);
    prod = prod * l;
    a = a.pow_u(2);
  }
  MPoly down(f2, 3);
  Embedding e(f2, f);
  for (auto& [ex, c] : prod.terms()) down.add_term(ex, e.preimage(c));
  EXPECT_FALSE(is_absolutely_irreducible(down));
}

TEST(Irreducible, RandomCubicsMatchBruteForce) {
  std::mt19937_64 rng(11);
  for (std::uint64_t p : {2, 3}) {
    auto f = prime_field(p);
    for (int t = 0; t < 25; ++t) {
      MPoly g = random_form(f, 3, 3, rng);
      if (t % 3 == 0) g = random_form(f, 3, 1, rng) * random_form(f, 3, 2, rng);
      if (g.is_zero()) continue;
      EXPECT_EQ(is_absolutely_irreducible(g), !has_linear_factor_oracle(g, 3)) << g.to_string();
    }
  }
}

TEST(Irreducible, RandomQuadricsMatchBruteForce) {
  std::mt19937_64 rng(13);
  for (std::uint64_t p : {2, 3}) {
    auto f = prime_field(p);
    for (int t = 0; t < 12; ++t) {
      MPoly g = random_form(f, 4, 2, rng);
      if (t % 3 == 0) g = random_form(f, 4, 1, rng) * random_form(f, 4, 1, rng);
      if (t % 4 == 1) g = random_form(f, 4, 1, rng).pow(2) + random_form(f, 4, 1, rng).pow(2).scale(f->from_int(static_cast<long>(p) - 1));
      if (g.is_zero()) continue;
      EXPECT_EQ(is_absolutely_irreducible(g), !has_linear_factor_oracle(g, 2)) << g.to_string();
    }
  }
}

TEST(Irreducible, ReducibleMembersOfGridPencil) {
  auto grid = testutil::config("grid_f5");
  auto f = grid.field();
  auto sys = testutil::forms("grid_f5", f);
  auto rep = pencil_net_irreducible(sys, &grid);
  EXPECT_FALSE(rep.all_irreducible);
  EXPECT_EQ(rep.members_tested, 6u);
  EXPECT_EQ(rep.reducible_members.size(), 4u);
  auto target = P(f, 3, "(x - y)*(x^2 + x*y + y^2 - z^2)");
  bool found = false;
  for (auto& m : rep.reducible_members) found |= span_rank(f, {m.form, target}, 3, 3) == 1;
  EXPECT_TRUE(found);
}

TEST(Irreducible, ReducibleMembersOfQuadricNets) {
  for (auto [name, count] : {std::pair{"cube_f5", 6}, std::pair{"f4_quadric", 5}}) {
    auto cfg = testutil::config(name);
    auto f = cfg.field();
    auto sys = testutil::forms(name, f);
    auto rep = pencil_net_irreducible(sys, &cfg);
    EXPECT_EQ(rep.reducible_members.size(), static_cast<std::size_t>(count)) << name;
    auto listed = testutil::dataset(name).at("reducible_members");
    for (auto& s : listed) {
      auto target = P(f, 4, s.get<std::string>());
      bool found = false;
      for (auto& m : rep.reducible_members) found |= span_rank(f, {m.form, target}, 4, 2) == 1;
      EXPECT_TRUE(found) << name << " " << s;
    }
  }
}

TEST(Irreducible, SweepMembersIrreducible) {
  auto cusp = testutil::dataset("cuspidal_pencil");
  for (std::uint64_t p : {2, 3, 5, 7}) {
    auto sys = system_from_json(prime_field(p), cusp);
    auto rep = pencil_net_irreducible(sys, nullptr);
    EXPECT_TRUE(rep.all_irreducible) << p;
    EXPECT_EQ(rep.members_tested, p + 1);
  }
  auto net = testutil::dataset("quadric_net");
  for (std::uint64_t p : {2, 3}) {
    auto sys = system_from_json(prime_field(p), net);
    auto rep = pencil_net_irreducible(sys, nullptr);
    EXPECT_TRUE(rep.all_irreducible) << p;
    EXPECT_EQ(rep.members_tested, p * p + p + 1);
  }
}

TEST(Completion, NinthPointOfRationalMatrix) {
  auto c = testutil::config("rational_3x9");
  auto q = c.field();
  auto nine = ninth_base_point(c.select({0, 1, 2, 3, 4, 5, 6, 7}));
  EXPECT_EQ(nine, normalize_point({q->from_int(-7), q->from_int(2), q->from_int(-1)}));
}

TEST(Completion, EighthPointOfRationalMatrix) {
  auto c = testutil::config("rational_4x8");
  auto q = c.field();
  auto eight = eighth_base_point(c.select({0, 1, 2, 3, 4, 5, 6}));
  EXPECT_EQ(eight, normalize_point({q->from_int(-6), q->from_int(-8), q->from_int(-7), q->from_int(-4)}));
}

TEST(Completion, DropOnePointRecoversIt) {
  for (auto [name, r] : {std::pair{"grid_f5", 3}, std::pair{"cube_f5", 4}, std::pair{"rational_3x9", 3}}) {
    auto c = testutil::config(name);
    for (std::size_t drop = 0; drop < c.n(); ++drop) {
      std::vector<std::size_t> keep;
      for (std::size_t i = 0; i < c.n(); ++i)
        if (i != drop) keep.push_back(i);
      auto sub = c.select(keep);
      auto pt = r == 3 ? ninth_base_point(sub) : eighth_base_point(sub);
      EXPECT_EQ(pt, c.point(drop)) << name << " drop " << drop;
    }
  }
}

TEST(Completion, DegenerateInputsThrow) {
  auto f = prime_field(11);
  auto mk = [&](std::size_t r, std::vector<std::vector<long>> pts) {
    std::vector<std::vector<Elem>> v;
    for (auto& p : pts) {
      std::vector<Elem> e;
      for (long x : p) e.push_back(f->from_int(x));
      v.push_back(e);
    }
    return PointConfig::create(f, r, v);
  };
  // four collinear points: cubics through them contain the line, pencil is not a complete intersection
  auto bad = mk(3, {{1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {1, 2, 0}, {0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 3, 1}});
  EXPECT_THROW(ninth_base_point(bad), std::domain_error);
  EXPECT_THROW(ninth_base_point(bad.select({0, 1, 2, 3, 4, 5, 6})), std::invalid_argument);
  auto bad4 = mk(4, {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {1, 1, 1, 0}, {1, 2, 3, 0}, {0, 0, 0, 1}, {1, 1, 1, 1}});
  EXPECT_THROW(eighth_base_point(bad4), std::domain_error);
}

TEST(BaseLocus, CuspidalOverF2HasNineDistinctPoints) {
  auto f = prime_field(2);
  auto sys = system_from_json(f, testutil::dataset("cuspidal_pencil"));
  auto pts = base_locus(sys, 6);
  ASSERT_EQ(pts.size(), 9u);
  std::set<std::pair<unsigned, std::string>> seen;
  for (auto& bp : pts) {
    EXPECT_EQ(bp.multiplicity, 1u);
    seen.insert({bp.degree, point_to_string(bp.coords)});
  }
  EXPECT_EQ(seen.size(), 9u);
}
