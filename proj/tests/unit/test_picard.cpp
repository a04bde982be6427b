#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <set>

#include "nagata/errors.hpp"
#include "nagata/picard.hpp"

using namespace nagata;

namespace {

// all classes with 0 <= d <= dmax, x.x = -1 and x.K = -1 on the (3, n) lattice
std::vector<PicClass> brute_minus_one(int n, int dmax) {
  std::vector<PicClass> out;
  for (int d = 0; d <= dmax; ++d) {
    std::int64_t want_sum = 3 * d - 1, want_sq = static_cast<std::int64_t>(d) * d + 1;
    int bound = 0;
    while (static_cast<std::int64_t>(bound + 1) * (bound + 1) <= want_sq) ++bound;
    std::vector<std::int64_t> m(n);
    std::function<void(int, std::int64_t, std::int64_t)> rec = [&](int i, std::int64_t sum, std::int64_t sq) {
      if (sq > want_sq) return;
      if (i == n) {
        if (sum == want_sum && sq == want_sq) out.push_back(PicClass{d, m});
        return;
      }
      // Cauchy-Schwarz on the remaining entries
      std::int64_t rest = n - i, gap = want_sum - sum;
      if (gap * gap > rest * (want_sq - sq)) return;
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

std::vector<PicClass> all_e(const CremonaLattice& lat) {
  std::vector<PicClass> s;
  for (int i = 0; i < lat.n; ++i) s.push_back(exceptional_class(lat, i));
  return s;
}

PicClass random_class(const CremonaLattice& lat, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dd(-20, 20), mm(-10, 10);
  PicClass x{dd(rng), {}};
  for (int i = 0; i < lat.n; ++i) x.m.push_back(mm(rng));
  return x;
}

}  // namespace

TEST(Picard, DotExamples) {
  CremonaLattice lat(3, 9);
  auto H = hyperplane_class(lat);
  auto E1 = exceptional_class(lat, 0);
  auto K = canonical_class(lat);
  EXPECT_EQ(dot(lat, H, H), 1);
  EXPECT_EQ(dot(lat, E1, E1), -1);
  EXPECT_EQ(dot(lat, K, K), 0);
  EXPECT_EQ(K.d, -3);
  EXPECT_EQ(anticanonical_class(lat), (PicClass{3, std::vector<std::int64_t>(9, 1)}));
  EXPECT_THROW(dot(lat, H, PicClass{1, {0, 0}}), std::invalid_argument);
  EXPECT_THROW(CremonaLattice(2, 5), std::invalid_argument);
}

TEST(Picard, HalfAnticanonical) {
  EXPECT_EQ(half_anticanonical(CremonaLattice(4, 8)), (PicClass{2, std::vector<std::int64_t>(8, 1)}));
  EXPECT_EQ(half_anticanonical(CremonaLattice(6, 9)), (PicClass{3, std::vector<std::int64_t>(9, 2)}));
  EXPECT_THROW(half_anticanonical(CremonaLattice(3, 9)), std::invalid_argument);
  for (auto [r, n] : {std::pair{4, 8}, std::pair{6, 9}}) {
    CremonaLattice lat(r, n);
    auto h = half_anticanonical(lat);
    auto k = anticanonical_class(lat);
    EXPECT_EQ(k.d, 2 * h.d);
    for (int i = 0; i < n; ++i) EXPECT_EQ(k.m[i], 2 * h.m[i]);
  }
}

TEST(Picard, ReflectionExamples) {
  CremonaLattice lat(3, 9);
  auto s9 = [&](const PicClass& x) { return reflection(lat, 8, x); };
  EXPECT_EQ(s9(exceptional_class(lat, 0)), (PicClass{1, {0, 1, 1, 0, 0, 0, 0, 0, 0}}));
  EXPECT_EQ(s9(hyperplane_class(lat)), (PicClass{2, {1, 1, 1, 0, 0, 0, 0, 0, 0}}));
  EXPECT_EQ(reflection(lat, 0, exceptional_class(lat, 0)), exceptional_class(lat, 1));
  EXPECT_THROW(reflection(lat, 9, hyperplane_class(lat)), std::out_of_range);
}

TEST(Picard, ReflectionProperties) {
  std::mt19937_64 rng(2024);
  for (auto [r, n] : {std::pair{3, 9}, std::pair{4, 8}, std::pair{6, 9}}) {
    CremonaLattice lat(r, n);
    auto K = canonical_class(lat);
    for (int t = 0; t < 1000; ++t) {
      auto x = random_class(lat, rng), y = random_class(lat, rng);
      for (int i = 0; i < n; ++i) {
        auto sx = reflection(lat, i, x);
        ASSERT_EQ(reflection(lat, i, sx), x);
        ASSERT_EQ(dot(lat, sx, reflection(lat, i, y)), dot(lat, x, y));
        ASSERT_EQ(reflection(lat, i, K), K);
        if (r != 3) ASSERT_EQ(reflection(lat, i, half_anticanonical(lat)), half_anticanonical(lat));
      }
    }
  }
}

TEST(Picard, WeylFiniteness) {
  for (int n = 4; n <= 9; ++n) EXPECT_EQ(weyl_is_infinite(3, n), n == 9) << n;
  EXPECT_TRUE(weyl_is_infinite(4, 8));
  EXPECT_TRUE(weyl_is_infinite(6, 9));
  EXPECT_FALSE(weyl_is_infinite(4, 7));
  EXPECT_FALSE(weyl_is_infinite(5, 8));
  EXPECT_TRUE(weyl_is_infinite(5, 10));
  EXPECT_THROW(weyl_is_infinite(3, 3), std::invalid_argument);
}

TEST(Picard, FiniteOrbitsMatchBruteForce) {
  for (auto [n, expect] : {std::pair{6, 27}, std::pair{7, 56}, std::pair{8, 240}}) {
    auto brute = brute_minus_one(n, 12);
    ASSERT_EQ(brute.size(), static_cast<std::size_t>(expect)) << n;
    CremonaLattice lat(3, n);
    auto rep = orbit_bfs(lat, all_e(lat), -1);
    EXPECT_TRUE(rep.closed);
    EXPECT_EQ(rep.total_classes, static_cast<std::uint64_t>(expect));
    EXPECT_EQ(rep.classes(), brute) << n;
  }
}

TEST(Picard, AffineE8FirstStep) {
  CremonaLattice lat(3, 9);
  auto rep = orbit_bfs(lat, all_e(lat), 1);
  auto cls = rep.classes();
  std::set<PicClass> have(cls.begin(), cls.end());
  auto deg1 = brute_minus_one(9, 1);
  std::size_t lines = 0;
  for (auto& x : deg1) {
    if (x.d != 1) continue;
    ++lines;
    EXPECT_TRUE(have.count(x)) << x.to_string();
  }
  EXPECT_EQ(lines, 36u);
}

TEST(Picard, AffineE8DegreesGrow) {
  CremonaLattice lat(3, 9);
  auto rep = orbit_bfs(lat, {exceptional_class(lat, 0)}, 8);
  ASSERT_EQ(rep.per_depth_max_degree.size(), 9u);
  for (int k = 2; k <= 8; ++k) EXPECT_GT(rep.per_depth_max_degree[k], rep.per_depth_max_degree[k - 1]) << k;
  auto K = canonical_class(lat);
  for (auto& lvl : rep.levels)
    for (auto& x : lvl) {
      EXPECT_EQ(dot(lat, x, x), -1);
      EXPECT_EQ(dot(lat, x, K), -1);
    }
}

TEST(Picard, AffineE8LowDegreeClassesAllReached) {
  // the orbit of E_1 contains every numerical (-1)-class; descent keeps degrees bounded
  CremonaLattice lat(3, 9);
  auto rep = orbit_bfs(lat, {exceptional_class(lat, 0)}, -1, 4);
  EXPECT_TRUE(rep.closed);
  EXPECT_EQ(rep.classes(), brute_minus_one(9, 4));
}

TEST(Picard, OtherLatticesKeepInvariants) {
  for (auto [r, n, depth] : {std::tuple{4, 8, 5}, std::tuple{6, 9, 4}}) {
    CremonaLattice lat(r, n);
    auto e = exceptional_class(lat, 0);
    auto K = canonical_class(lat);
    auto rep = orbit_bfs(lat, {e}, depth);
    for (auto& lvl : rep.levels)
      for (auto& x : lvl) {
        EXPECT_EQ(dot(lat, x, x), -1);
        EXPECT_EQ(dot(lat, x, K), dot(lat, e, K));
      }
    for (int k = 2; k <= depth; ++k) EXPECT_GT(rep.per_depth_max_degree[k], rep.per_depth_max_degree[k - 1]);
  }
}

TEST(Picard, GuardTrips) {
  CremonaLattice lat(6, 9);
  EXPECT_THROW(orbit_bfs(lat, {exceptional_class(lat, 0)}, 30, std::nullopt, 5000), OrbitGuardError);
}

TEST(Picard, MinusOneClasses) {
  CremonaLattice lat(3, 9);
  EXPECT_TRUE(is_minus_one_class(lat, exceptional_class(lat, 0)));
  EXPECT_TRUE(is_minus_one_class(lat, PicClass{1, {1, 1, 0, 0, 0, 0, 0, 0, 0}}));
  EXPECT_FALSE(is_minus_one_class(lat, hyperplane_class(lat)));
  CremonaLattice l48(4, 8);
  auto e = exceptional_class(l48, 2);
  EXPECT_TRUE(is_minus_one_class(l48, e));
  auto x = reflection(l48, 7, reflection(l48, 4, reflection(l48, 7, e)));
  EXPECT_TRUE(is_minus_one_class(l48, x));
  EXPECT_TRUE(reduce_to_exceptional(l48, x).has_value());
  EXPECT_FALSE(is_minus_one_class(l48, hyperplane_class(l48)));
  // E_1 - E_2 + E_3 has square -3
  EXPECT_FALSE(is_minus_one_class(l48, PicClass{0, {-1, 1, -1, 0, 0, 0, 0, 0}}));
}

TEST(Picard, ReductionWordReplays) {
  CremonaLattice lat(3, 9);
  auto rep = orbit_bfs(lat, {exceptional_class(lat, 0)}, 5);
  for (auto& x : rep.levels.back()) {
    auto w = reduce_to_exceptional(lat, x);
    ASSERT_TRUE(w.has_value()) << x.to_string();
    PicClass y = x;
    for (int g : *w) y = reflection(lat, g, y);
    EXPECT_EQ(y.d, 0);
    EXPECT_EQ(dot(lat, y, y), -1);
  }
}

TEST(Picard, MordellWeilRanks) {
  EXPECT_EQ(mw_rank_cubic(8, 2), 2);
  EXPECT_EQ(mw_rank_cubic(9, 3), 2);
  EXPECT_EQ(mw_rank_cubic(7, 2), 3);
  EXPECT_THROW(mw_rank_cubic(12, 0), InconsistencyError);
  EXPECT_EQ(mw_rank_quadric(12), 1);
  EXPECT_EQ(mw_rank_quadric(10), 2);
  EXPECT_EQ(mw_rank_quadric(0), 7);
  EXPECT_THROW(mw_rank_quadric(3), InconsistencyError);
}

TEST(Picard, PermutationCount) {
  EXPECT_EQ(permutation_count({1, 1, 0, 0, 0, 0, 0, 0, 0}), 36u);
  EXPECT_EQ(permutation_count({2, 1, 1, 1, 1, 1, 1, 1, 0}), 72u);
  EXPECT_EQ(permutation_count({3, 2, 1, 0, -1, 5, 6, 7, 8}), 362880u);
}
