#include <gtest/gtest.h>

#include <random>

#include "nagata/errors.hpp"
#include "nagata/repkit.hpp"
#include "test_util.hpp"

using namespace nagata;

namespace {

Matrix verbatim_points(const json& j) { return representation_matrix_from_json(j); }

Matrix subgroup_rows(const json& j, const Field& f) { return matrix_from_json(f, j.at("subgroup_rows")); }

GaRepresentation grid_rep() { return build_representation(verbatim_points(testutil::dataset("grid_representation"))); }

MPoly pair_poly(const GaRepresentation& rep, const std::string& s) {
  return parse_mpoly(rep.field, pair_var_names(rep.n), s);
}

PointConfig five_points_f7() {
  Field f = prime_field(7);
  auto e = [&](std::int64_t v) { return f->from_int(v); };
  return PointConfig::create(f, 3, {{e(1), e(0), e(0)}, {e(0), e(1), e(0)}, {e(0), e(0), e(1)}, {e(1), e(1), e(1)}, {e(1), e(2), e(3)}});
}

// invariants of degree (c, a) via the derivations sum_i v_i x_i d/dy_i; valid when char > a
std::size_t derivation_oracle(const GaRepresentation& rep, const std::vector<int>& c, int a) {
  std::size_t n = rep.n;
  std::vector<MPoly> basis;
  std::vector<int> e(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i == n) {
      if (left) return;
      Exps ex(2 * n, 0);
      for (std::size_t t = 0; t < n; ++t) {
        ex[t] = c[t] - e[t];
        ex[n + t] = e[t];
      }
      MPoly m(rep.field, static_cast<unsigned>(2 * n));
      m.add_term(ex, rep.field->one());
      basis.push_back(m);
      return;
    }
    for (int v = 0; v <= std::min(c[i], left); ++v) {
      e[i] = v;
      rec(i + 1, left - v);
    }
    e[i] = 0;
  };
  rec(0, a);
  if (basis.empty()) return 0;
  std::map<Exps, std::size_t> row_of;
  std::vector<std::vector<Elem>> rows;
  for (std::size_t k = 0; k < rep.group_rank(); ++k) {
    row_of.clear();
    std::vector<std::vector<Elem>> block;
    for (std::size_t col = 0; col < basis.size(); ++col) {
      MPoly d(rep.field, static_cast<unsigned>(2 * n));
      for (unsigned i = 0; i < n; ++i)
        d = d + (MPoly::var(rep.field, 2 * n, i) * basis[col].derivative(static_cast<unsigned>(n) + i))
                    .scale(rep.subgroup_basis(k, i));
      for (auto& [ex, cf] : d.terms()) {
        auto it = row_of.find(ex);
        if (it == row_of.end()) {
          it = row_of.emplace(ex, block.size()).first;
          block.emplace_back(basis.size(), rep.field->zero());
        }
        block[it->second][col] += cf;
      }
    }
    for (auto& b : block) rows.push_back(b);
  }
  if (rows.empty()) return basis.size();
  return basis.size() - Matrix::from_rows(rep.field, rows).rank();
}

}  // namespace

TEST(Representation, GridKernelAndGenerators) {
  auto rep = grid_rep();
  EXPECT_EQ(rep.dimension(), 18u);
  EXPECT_EQ(rep.group_rank(), 6u);
  EXPECT_TRUE((rep.point_matrix * rep.subgroup_basis.transpose()).is_zero());
  EXPECT_EQ(rep.subgroup_basis, rep.subgroup_basis.rref());
  auto g = rep.generators();
  ASSERT_EQ(g.size(), 6u);
  EXPECT_TRUE(generators_commute(g));
  EXPECT_TRUE(generators_unipotent(g));
  auto js = rep.to_json();
  EXPECT_EQ(js["n"], 9);
  EXPECT_EQ(js["generators"].size(), 6u);
}

TEST(Representation, RejectsRankDeficient) {
  Field f = prime_field(5);
  Matrix m(f, 2, 3);
  m(0, 0) = m(1, 0) = f->one();
  EXPECT_THROW(build_representation(m), std::invalid_argument);
}

TEST(Representation, CubeSubgroupIsRowSpace) {
  Matrix m = verbatim_points(testutil::dataset("cube_representation"));
  // points whose kernel is the subgroup spanned by the rows of m
  Matrix pts = m.kernel();
  auto rep = build_representation(pts);
  EXPECT_EQ(rep.subgroup_basis, m.rref());
  // and those points form a binary cube again
  EXPECT_TRUE(config_equivalent(PointConfig::from_matrix(pts), PointConfig::from_matrix(m), true).has_value());
}

TEST(GroupAction, IdentityAdditivityAndGridExample) {
  auto rep = grid_rep();
  Field f = rep.field;
  std::mt19937_64 rng(3);
  auto rnd = [&] { return f->from_int(static_cast<std::int64_t>(rng() % 5)); };
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Elem> p(18), t1(6), t2(6), zero(6, f->zero()), sum(6);
    for (auto& x : p) x = rnd();
    for (int k = 0; k < 6; ++k) {
      t1[k] = rnd();
      t2[k] = rnd();
      sum[k] = t1[k] + t2[k];
    }
    EXPECT_EQ(group_act(rep, zero, p), p);
    EXPECT_EQ(group_act(rep, t1, group_act(rep, t2, p)), group_act(rep, sum, p));
  }
  std::vector<Elem> t(6, f->zero()), p(18, f->zero());
  t[0] = f->one();
  for (int i = 0; i < 9; ++i) p[i] = f->one();
  auto q = group_act(rep, t, p);
  for (std::size_t i = 0; i < 9; ++i) {
    EXPECT_EQ(q[i], f->one());
    EXPECT_EQ(q[9 + i], rep.subgroup_basis(0, i));
  }
}

TEST(Invariance, Examples) {
  auto rep = grid_rep();
  for (int i = 1; i <= 9; ++i) EXPECT_TRUE(is_invariant(rep, pair_poly(rep, "x" + std::to_string(i))));
  for (std::size_t j = 0; j < 3; ++j) EXPECT_TRUE(is_invariant(rep, u_form(rep, j)));
  EXPECT_FALSE(is_invariant(rep, pair_poly(rep, "x1*y2 - x2*y1")));
  EXPECT_FALSE(is_invariant(rep, pair_poly(rep, "y1")));
}

TEST(Invariance, SchemeTheoreticInSmallCharacteristic) {
  // over F_2, y^2 + x y is fixed by every rational point of G_a but is not an invariant
  Field f = prime_field(2);
  Matrix m(f, 1, 2);
  m(0, 0) = m(0, 1) = f->one();
  auto rep = build_representation(m);
  auto g = parse_mpoly(f, pair_var_names(2), "y1^2 + x1*y1");
  EXPECT_FALSE(is_invariant(rep, g));
  for (auto t : f->elements()) {
    for (auto& p : testutil::projective_points(f, 4)) {
      auto q = group_act(rep, {t}, p);
      EXPECT_EQ(g.eval(q), g.eval(p));
    }
  }
}

TEST(InvariantDimension, Examples) {
  auto rep = grid_rep();
  std::vector<int> e1(9, 0);
  e1[0] = 1;
  EXPECT_EQ(invariant_dimension(rep, e1, 0), 1u);
  EXPECT_EQ(invariant_dimension(rep, std::vector<int>(9, 1), 1), 3u);
  EXPECT_EQ(invariant_dimension(rep, std::vector<int>(9, 1), 2), 0u);
  EXPECT_EQ(invariant_dimension(rep, std::vector<int>(9, 2), 3), 2u);
  EXPECT_EQ(invariant_dimension(rep, std::vector<int>(9, 1), -1), 0u);
  // u_1..u_3 independent
  Matrix u(rep.field, 3, 0);
  std::vector<std::vector<Elem>> rows;
  auto mons = std::vector<Exps>();
  for (std::size_t i = 0; i < 9; ++i) {
    Exps ex(18, 1);
    for (std::size_t k = 9; k < 18; ++k) ex[k] = 0;
    ex[i] = 0;
    ex[9 + i] = 1;
    mons.push_back(ex);
  }
  for (std::size_t j = 0; j < 3; ++j) rows.push_back(u_form(rep, j).dense(mons));
  EXPECT_EQ(Matrix::from_rows(rep.field, rows).rank(), 3u);
}

TEST(InvariantDimension, MatchesDerivationOracle) {
  auto rep = build_representation(five_points_f7());
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<int> c(5);
    for (auto& x : c) x = static_cast<int>(rng() % 4);
    int a = static_cast<int>(rng() % 4);
    EXPECT_EQ(invariant_dimension(rep, c, a), derivation_oracle(rep, c, a));
  }
  auto grid = grid_rep();
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<int> c(9);
    for (auto& x : c) x = static_cast<int>(rng() % 3);
    int a = static_cast<int>(rng() % 4);
    EXPECT_EQ(invariant_dimension(grid, c, a), derivation_oracle(grid, c, a));
  }
}

TEST(InvariantDimension, PermutationInvariance) {
  auto cfg = testutil::config("grid_f5");
  auto rep = build_representation(cfg);
  std::vector<std::size_t> perm = {4, 0, 8, 2, 6, 1, 3, 7, 5};
  std::vector<std::vector<Elem>> pts;
  for (auto i : perm) pts.push_back(cfg.point(i));
  auto rep2 = build_representation(PointConfig::create(cfg.field(), 3, pts));
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<int> c(9), c2(9);
    for (auto& x : c) x = static_cast<int>(rng() % 3);
    for (std::size_t i = 0; i < 9; ++i) c2[i] = c[perm[i]];
    int a = static_cast<int>(rng() % 4);
    EXPECT_EQ(invariant_dimension(rep, c, a), invariant_dimension(rep2, c2, a));
  }
}

TEST(SectionToInvariant, Examples) {
  auto rep = grid_rep();
  Field f = rep.field;
  auto names = default_var_names(3);
  std::vector<int> b(9, 0);
  b[0] = -1;
  EXPECT_EQ(section_to_invariant(rep, MPoly::constant(f->one(), f, 3), b), pair_poly(rep, "x1"));
  for (unsigned j = 0; j < 3; ++j)
    EXPECT_EQ(section_to_invariant(rep, MPoly::var(f, 3, j), std::vector<int>(9, 0)), u_form(rep, j));

  auto F = parse_mpoly(f, names, "x^3 - x*z^2");
  auto g = section_to_invariant(rep, F, std::vector<int>(9, 1));
  ASSERT_FALSE(g.is_zero());
  EXPECT_TRUE(is_invariant(rep, g));
  for (auto& [e, c] : g.terms()) {
    int ydeg = 0;
    for (int i = 0; i < 9; ++i) {
      EXPECT_EQ(e[i] + e[9 + i], 2);
      ydeg += e[9 + i];
    }
    EXPECT_EQ(ydeg, 3);
  }
}

TEST(SectionToInvariant, RejectsBadInput) {
  auto rep = grid_rep();
  Field f = rep.field;
  auto names = default_var_names(3);
  auto F = parse_mpoly(f, names, "x^3 + y^3");
  EXPECT_THROW(section_to_invariant(rep, F, std::vector<int>(9, 1)), std::invalid_argument);
  EXPECT_THROW(section_to_invariant(rep, MPoly::var(f, 2, 0), std::vector<int>(9, 0)), std::invalid_argument);
}

TEST(SectionToInvariant, OutputsAreInvariant) {
  auto rep = build_representation(five_points_f7());
  Field f = rep.field;
  std::mt19937_64 rng(2);
  auto cfg = five_points_f7();
  for (int a = 1; a <= 3; ++a) {
    std::vector<int> b(5);
    for (auto& x : b) x = static_cast<int>(rng() % 3) - 1;
    // a random member of the linear system
    auto mons = monomials(3, static_cast<unsigned>(a));
    std::vector<std::vector<Elem>> cond;
    for (std::size_t i = 0; i < 5; ++i)
      if (b[i] > 0)
        for (auto& row : vanishing_conditions(static_cast<unsigned>(a), cfg.point(i), b[i])) cond.push_back(row);
    Matrix K = cond.empty() ? Matrix::identity(f, mons.size()) : Matrix::from_rows(f, cond).kernel();
    if (K.rows() == 0) continue;
    MPoly F(f, 3);
    for (std::size_t k = 0; k < K.rows(); ++k) {
      Elem s = f->from_int(static_cast<std::int64_t>(rng() % 7));
      for (std::size_t t = 0; t < mons.size(); ++t) F.add_term(mons[t], s * K(k, t));
    }
    if (F.is_zero()) continue;
    auto g = section_to_invariant(rep, F, b);
    EXPECT_TRUE(is_invariant(rep, g));
  }
}

struct TwistCase {
  std::string name;
  std::uint64_t p;
  std::size_t n;
  std::vector<int> minpoly;  // c0, c1 with lambda^2 + c1 lambda + c0 = 0
};

class Twist : public ::testing::TestWithParam<TwistCase> {};

TEST_P(Twist, AppendixConstruction) {
  auto tc = GetParam();
  auto ds = testutil::dataset(tc.name);
  Matrix M = verbatim_points(ds);
  Field base = prime_field(tc.p);

  // diagonal form over the extension with the printed subgroup rows
  auto diag = representation_from_rows(M, subgroup_rows(ds, M.field()));
  EXPECT_TRUE((M * diag.subgroup_basis.transpose()).is_zero());
  EXPECT_TRUE(generators_commute(diag.generators()));
  EXPECT_TRUE(generators_unipotent(diag.generators()));

  auto tw = twist_representation(diag, base);
  EXPECT_EQ(tw.n, tc.n);
  auto gens = tw.generators();
  ASSERT_EQ(gens.size(), tc.n - M.rows());
  EXPECT_EQ(gens[0].rows(), 2 * tc.n);
  EXPECT_EQ(gens[0].field().get(), base.get());
  EXPECT_TRUE(generators_commute(gens));
  EXPECT_TRUE(generators_unipotent(gens));
  EXPECT_TRUE(twist_matches_diagonal(tw, diag));

  // orbits: columns mapped to their Frobenius images
  std::size_t covered = 0;
  for (auto& o : tw.orbits) {
    covered += o.size();
    for (std::size_t s = 0; s < o.size(); ++s) {
      auto col = M.col(o[s]);
      for (auto& x : col) x = x.pow_u(tc.p);
      EXPECT_EQ(col, M.col(o[(s + 1) % o.size()]));
    }
  }
  EXPECT_EQ(covered, tc.n);

  // companion blocks and block-diagonal generators commuting with them
  std::size_t offset = 0;
  for (std::size_t oi = 0; oi < tw.orbits.size(); ++oi) {
    std::size_t m = tw.orbits[oi].size();
    const Matrix& C = tw.companions[oi];
    if (m == 2) {
      EXPECT_TRUE(C(0, 0).is_zero());
      EXPECT_TRUE(C(1, 0).is_one());
      EXPECT_EQ(C(0, 1), base->from_int(-tc.minpoly[0]));
      EXPECT_EQ(C(1, 1), base->from_int(-tc.minpoly[1]));
      Matrix I = Matrix::identity(base, 2);
      EXPECT_TRUE((C * C + C.scale(base->from_int(tc.minpoly[1])) + I.scale(base->from_int(tc.minpoly[0]))).is_zero());
    }
    for (auto& A : tw.blocks) {
      Matrix blk(base, m, m);
      for (std::size_t i = 0; i < tc.n; ++i)
        for (std::size_t j = 0; j < tc.n; ++j) {
          bool in_i = i >= offset && i < offset + m, in_j = j >= offset && j < offset + m;
          if (in_i && in_j)
            blk(i - offset, j - offset) = A(i, j);
          else if (in_i != in_j)
            EXPECT_TRUE(A(i, j).is_zero());
        }
      EXPECT_EQ(blk * C, C * blk);
    }
    offset += m;
  }
}

TEST_P(Twist, PrintedBlocks) {
  auto tc = GetParam();
  auto ds = testutil::dataset(tc.name);
  Matrix M = verbatim_points(ds);
  Field base = prime_field(tc.p);
  Matrix rows = subgroup_rows(ds, M.field());
  auto tw = twist_representation(representation_from_rows(M, rows), base);
  const json& printed = ds.at("twisted_blocks");
  ASSERT_EQ(printed.size(), rows.rows());
  for (std::size_t k = 0; k < rows.rows(); ++k) {
    Matrix expect(base, tc.n, tc.n);
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
    ASSERT_EQ(pos, tc.n);
    Matrix A = twisted_block(tw, rows.row(k));
    EXPECT_EQ(A, expect) << "generator " << k + 1;
    EXPECT_EQ(block_format(tw, A).size(), printed[k].size());
  }
  // the printed F_p generators span the same group as the computed ones
  std::vector<std::vector<Elem>> a, b;
  auto flat = [&](const Matrix& A) {
    std::vector<Elem> v;
    for (std::size_t i = 0; i < tc.n; ++i)
      for (std::size_t j = 0; j < tc.n; ++j) v.push_back(A(i, j));
    return v;
  };
  for (std::size_t k = 0; k < rows.rows(); ++k) {
    a.push_back(flat(twisted_block(tw, rows.row(k))));
    b.push_back(flat(tw.blocks[k]));
  }
  auto ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  EXPECT_EQ(Matrix::from_rows(base, a).rank(), rows.rows());
  EXPECT_EQ(Matrix::from_rows(base, ab).rank(), rows.rows());
  auto js = tw.to_json();
  EXPECT_EQ(js["dimension"], 2 * tc.n);
  EXPECT_EQ(js["generator_blocks"].size(), rows.rows());
}

TEST(Twist, PrintedQuadricOrderIsInconsistent) {
  auto ds = testutil::dataset("f4_quadric");
  auto plain = ds;
  plain.erase("representation_order");
  Matrix M = verbatim_points(plain);
  Matrix rows = subgroup_rows(ds, M.field());
  EXPECT_FALSE((M * rows.transpose()).is_zero());
  EXPECT_TRUE((verbatim_points(ds) * rows.transpose()).is_zero());
}

INSTANTIATE_TEST_SUITE_P(Appendix, Twist,
                         ::testing::Values(TwistCase{"f4_cubic", 2, 9, {1, 1}}, TwistCase{"f9_cubic", 3, 9, {-1, 1}},
                                           TwistCase{"f4_quadric", 2, 8, {1, 1}}),
                         [](const auto& info) { return info.param.name; });

TEST(Twist, RejectsUnstableAndWrongBase) {
  auto ds = testutil::dataset("f4_cubic");
  Matrix M = verbatim_points(ds);
  auto rep = build_representation(M);
  EXPECT_THROW(twist_representation(rep, prime_field(3)), std::invalid_argument);
  Matrix bad = M;
  bad(0, 1) = bad(0, 1) + bad.field()->one();  // breaks Frobenius stability
  EXPECT_THROW(twist_representation(build_representation(bad), prime_field(2)), std::invalid_argument);
  auto grid = grid_rep();
  EXPECT_THROW(twist_representation(grid, prime_field(5)), std::invalid_argument);
}

TEST(CrossCheck, SpecCells) {
  auto cfg = testutil::config("grid_f5");
  auto rep = build_representation(cfg);
  EXPECT_EQ(invariant_dimension(rep, std::vector<int>(9, 2), 3), 2u);
  EXPECT_EQ(h0(cfg, 3, std::vector<int>(9, 1)), 2u);
  std::vector<int> e1(9, 0);
  e1[0] = 1;
  std::vector<int> b(9, 0);
  b[0] = -1;
  EXPECT_EQ(invariant_dimension(rep, e1, 0), h0(cfg, 0, b));
  auto five = five_points_f7();
  auto r5 = build_representation(five);
  EXPECT_EQ(invariant_dimension(r5, std::vector<int>(5, 1), 1), 3u);
  EXPECT_EQ(h0(five, 1, std::vector<int>(5, 0)), 3u);
}

TEST(CrossCheck, GridBox) {
  auto cfg = testutil::config("grid_f5");
  auto rep = build_representation(cfg);
  auto rep_cells = mukai_cross_check(rep, cfg, 3, 3, 10000, true);
  EXPECT_EQ(rep_cells.cells, 4u * 262144u);
  EXPECT_EQ(rep_cells.skipped_cells, 0u);
  EXPECT_TRUE(rep_cells.all_equal());
  EXPECT_TRUE(rep_cells.mismatches.empty());
  // sampled rows against the direct computations
  std::mt19937_64 rng(7);
  for (int k = 0; k < 25; ++k) {
    auto& row = rep_cells.rows[rng() % rep_cells.rows.size()];
    std::vector<int> b;
    for (int ci : row.c) b.push_back(row.a - ci);
    EXPECT_EQ(row.invariant_dim, invariant_dimension(rep, row.c, row.a));
    EXPECT_EQ(row.h0_dim, h0(cfg, row.a, b));
  }
}

TEST(CrossCheck, FivePointsOverF7) {
  auto cfg = five_points_f7();
  ASSERT_TRUE(in_linear_general_position(cfg).in_general_position);
  auto rep = build_representation(cfg);
  auto rep_cells = mukai_cross_check(rep, cfg, 3, 3, 10000, true);
  EXPECT_EQ(rep_cells.cells, 4u * 1024u);
  EXPECT_TRUE(rep_cells.all_equal());
  for (auto& row : rep_cells.rows) {
    std::vector<int> b;
    for (int ci : row.c) b.push_back(row.a - ci);
    ASSERT_EQ(row.invariant_dim, invariant_dimension(rep, row.c, row.a));
    ASSERT_EQ(row.h0_dim, h0(cfg, row.a, b));
  }
}

TEST(CrossCheck, RationalFallback) {
  Field q = rational_field();
  auto e = [&](std::int64_t v) { return q->from_int(v); };
  auto cfg = PointConfig::create(q, 3, {{e(1), e(0), e(0)}, {e(0), e(1), e(0)}, {e(0), e(0), e(1)}, {e(1), e(1), e(1)}, {e(1), e(2), e(5)}});
  auto rep = build_representation(cfg);
  auto res = mukai_cross_check(rep, cfg, 2, 2);
  EXPECT_EQ(res.cells, 3u * 243u);
  EXPECT_TRUE(res.all_equal());
}

TEST(CrossCheck, BasisLimitSkips) {
  auto cfg = five_points_f7();
  auto rep = build_representation(cfg);
  auto res = mukai_cross_check(rep, cfg, 2, 2, 3);
  EXPECT_GT(res.skipped_cells, 0u);
  EXPECT_EQ(res.cells + res.skipped_cells, 3u * 243u);
}
