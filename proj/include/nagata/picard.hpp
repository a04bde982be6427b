#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nagata {

// Z^{n+1} with basis H, E_1..E_n; H.H = r-2, E_i.E_i = -1.
struct CremonaLattice {
  int r = 3, n = 9;
  CremonaLattice(int r_, int n_);
};

// d*H - sum m_i E_i
struct PicClass {
  std::int64_t d = 0;
  std::vector<std::int64_t> m;

  bool operator==(const PicClass& o) const { return d == o.d && m == o.m; }
  bool operator<(const PicClass& o) const { return d != o.d ? d < o.d : m < o.m; }
  std::string to_string() const;
};

PicClass hyperplane_class(const CremonaLattice& lat);
PicClass exceptional_class(const CremonaLattice& lat, int i);  // 0-based
std::int64_t dot(const CremonaLattice& lat, const PicClass& x, const PicClass& y);
PicClass canonical_class(const CremonaLattice& lat);
PicClass anticanonical_class(const CremonaLattice& lat);
// r = 4: 2H - sum E_i;  r = 6: 3H - 2 sum E_i
PicClass half_anticanonical(const CremonaLattice& lat);

// i in [0, n-2] swaps m_i and m_{i+1}; i = n-1 is the reflection in H - E_1 - ... - E_r
PicClass reflection(const CremonaLattice& lat, int i, const PicClass& x);

bool weyl_is_infinite(int r, int n);

class OrbitGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OrbitReport {
  // level k: representatives (m sorted descending) first reached after k Cremona reflections
  std::vector<std::vector<PicClass>> levels;
  std::vector<std::int64_t> per_depth_max_degree;
  std::vector<std::uint64_t> per_depth_new_classes;  // counted with all permutations
  std::uint64_t total_classes = 0;
  bool closed = false;  // the last level produced nothing new

  std::vector<PicClass> classes() const;  // every class, sorted
};

inline constexpr std::uint64_t kDefaultMaxClasses = 1000000;

// Closure of the seeds under the Weyl group. Depth counts Cremona reflections; every level is
// closed under permutations of E_1..E_n. depth < 0 runs until closure.
OrbitReport orbit_bfs(const CremonaLattice& lat, const std::vector<PicClass>& seeds, int depth,
                      std::optional<std::int64_t> degree_cap = std::nullopt,
                      std::uint64_t max_classes = kDefaultMaxClasses);

std::uint64_t permutation_count(const std::vector<std::int64_t>& m);

// r = 3: x.x = x.K = -1. Other r: membership in the Weyl orbit of E_1.
bool is_minus_one_class(const CremonaLattice& lat, const PicClass& x);
// reflections (0-based generator indices) taking x to some E_i, if found by degree descent
std::optional<std::vector<int>> reduce_to_exceptional(const CremonaLattice& lat, const PicClass& x);

int mw_rank_cubic(int a, int b);
int mw_rank_quadric(int a);

}  // namespace nagata
