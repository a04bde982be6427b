#include "nagata/picard.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "nagata/errors.hpp"

namespace nagata {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t c;
  if (__builtin_add_overflow(a, b, &c)) throw std::overflow_error("Picard class coefficient overflow");
  return c;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t c;
  if (__builtin_mul_overflow(a, b, &c)) throw std::overflow_error("Picard class coefficient overflow");
  return c;
}

void check_len(const CremonaLattice& lat, const PicClass& x) {
  if (x.m.size() != static_cast<std::size_t>(lat.n)) throw std::invalid_argument("class has the wrong length");
}

PicClass sorted_rep(PicClass x) {
  std::sort(x.m.begin(), x.m.end(), std::greater<>());
  return x;
}

// x.alpha with alpha = H - E_1 - ... - E_r, for the entries at the chosen positions
std::int64_t pair_alpha(const CremonaLattice& lat, std::int64_t d, std::int64_t msum) {
  return checked_add(checked_mul(lat.r - 2, d), -msum);
}

}  // namespace

CremonaLattice::CremonaLattice(int r_, int n_) : r(r_), n(n_) {
  if (r < 3 || n < r) throw std::invalid_argument("lattice needs n >= r >= 3");
}

std::string PicClass::to_string() const {
  std::string s = std::to_string(d) + "H";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    std::int64_t c = -m[i];
    s += c < 0 ? " - " : " + ";
    std::int64_t a = c < 0 ? -c : c;
    if (a != 1) s += std::to_string(a);
    s += "E" + std::to_string(i + 1);
  }
  return s;
}

PicClass hyperplane_class(const CremonaLattice& lat) { return PicClass{1, std::vector<std::int64_t>(lat.n, 0)}; }

PicClass exceptional_class(const CremonaLattice& lat, int i) {
  if (i < 0 || i >= lat.n) throw std::out_of_range("exceptional index out of range");
  PicClass e{0, std::vector<std::int64_t>(lat.n, 0)};
  e.m[i] = -1;
  return e;
}

std::int64_t dot(const CremonaLattice& lat, const PicClass& x, const PicClass& y) {
  check_len(lat, x);
  check_len(lat, y);
  std::int64_t s = checked_mul(checked_mul(lat.r - 2, x.d), y.d);
  for (int i = 0; i < lat.n; ++i) s = checked_add(s, -checked_mul(x.m[i], y.m[i]));
  return s;
}

PicClass canonical_class(const CremonaLattice& lat) {
  return PicClass{-lat.r, std::vector<std::int64_t>(lat.n, -(lat.r - 2))};
}

PicClass anticanonical_class(const CremonaLattice& lat) {
  return PicClass{lat.r, std::vector<std::int64_t>(lat.n, lat.r - 2)};
}

PicClass half_anticanonical(const CremonaLattice& lat) {
  if (lat.r == 4) return PicClass{2, std::vector<std::int64_t>(lat.n, 1)};
  if (lat.r == 6) return PicClass{3, std::vector<std::int64_t>(lat.n, 2)};
  throw std::invalid_argument("half anticanonical class defined here only for r = 4 and r = 6");
}

PicClass reflection(const CremonaLattice& lat, int i, const PicClass& x) {
  check_len(lat, x);
  if (i < 0 || i >= lat.n) throw std::out_of_range("reflection index out of range");
  PicClass y = x;
  if (i < lat.n - 1) {
    std::swap(y.m[i], y.m[i + 1]);
    return y;
  }
  std::int64_t msum = 0;
  for (int k = 0; k < lat.r; ++k) msum = checked_add(msum, x.m[k]);
  std::int64_t t = pair_alpha(lat, x.d, msum);
  y.d = checked_add(y.d, t);
  for (int k = 0; k < lat.r; ++k) y.m[k] = checked_add(y.m[k], t);
  return y;
}

bool weyl_is_infinite(int r, int n) {
  if (r < 3 || n <= r) throw std::invalid_argument("need n > r >= 3");
  // 1/2 + 1/r + 1/(n-r) <= 1  <=>  2r + 2(n-r) <= r(n-r)
  std::int64_t s = n - r;
  return 2 * r + 2 * s <= static_cast<std::int64_t>(r) * s;
}

std::uint64_t permutation_count(const std::vector<std::int64_t>& m) {
  std::map<std::int64_t, int> mult;
  for (auto v : m) ++mult[v];
  // n!/prod(k!) computed as a product of binomials
  std::uint64_t total = 1;
  int placed = 0;
  for (auto& [v, k] : mult) {
    std::uint64_t b = 1;
    for (int j = 1; j <= k; ++j) b = b * static_cast<std::uint64_t>(placed + j) / static_cast<std::uint64_t>(j);
    total *= b;
    placed += k;
  }
  return total;
}

std::vector<PicClass> OrbitReport::classes() const {
  std::vector<PicClass> out;
  for (auto& lvl : levels) {
    for (auto& rep : lvl) {
      PicClass x = rep;
      std::sort(x.m.begin(), x.m.end());
      do {
        out.push_back(x);
      } while (std::next_permutation(x.m.begin(), x.m.end()));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

OrbitReport orbit_bfs(const CremonaLattice& lat, const std::vector<PicClass>& seeds, int depth,
                      std::optional<std::int64_t> degree_cap, std::uint64_t max_classes) {
  OrbitReport rep;
  std::set<PicClass> seen;
  std::vector<PicClass> frontier;
  std::int64_t maxd = 0;
  std::uint64_t count = 0;
  auto admit = [&](const PicClass& x, std::vector<PicClass>& into) {
    if (degree_cap && x.d > *degree_cap) return;
    if (!seen.insert(x).second) return;
    count += permutation_count(x.m);
    if (rep.total_classes + count > max_classes)
      throw OrbitGuardError("orbit exceeds " + std::to_string(max_classes) + " classes");
    maxd = into.empty() ? x.d : std::max(maxd, x.d);
    into.push_back(x);
  };
  for (auto& s : seeds) {
    check_len(lat, s);
    admit(sorted_rep(s), frontier);
  }
  auto finish_level = [&](std::vector<PicClass> lvl) {
    std::sort(lvl.begin(), lvl.end());
    rep.per_depth_max_degree.push_back(lvl.empty() ? 0 : maxd);
    rep.per_depth_new_classes.push_back(count);
    rep.total_classes += count;
    rep.levels.push_back(std::move(lvl));
    count = 0;
  };
  finish_level(frontier);
  for (int k = 1; depth < 0 || k <= depth; ++k) {
    std::vector<PicClass> next;
    for (auto& x : rep.levels.back()) {
      // distinct r-element sub-multisets of the sorted entries go to the first r slots
      std::map<std::int64_t, int> avail;
      for (auto v : x.m) ++avail[v];
      std::vector<std::pair<std::int64_t, int>> vals(avail.rbegin(), avail.rend());
      std::vector<int> take(vals.size(), 0);
      std::function<void(std::size_t, int)> rec = [&](std::size_t idx, int left) {
        if (left == 0) {
          std::int64_t msum = 0;
          std::vector<std::int64_t> chosen, rest;
          for (std::size_t j = 0; j < vals.size(); ++j) {
            for (int c = 0; c < take[j]; ++c) chosen.push_back(vals[j].first);
            for (int c = take[j]; c < vals[j].second; ++c) rest.push_back(vals[j].first);
          }
          for (auto v : chosen) msum = checked_add(msum, v);
          std::int64_t t = pair_alpha(lat, x.d, msum);
          if (t == 0) return;
          PicClass y{checked_add(x.d, t), {}};
          for (auto v : chosen) y.m.push_back(checked_add(v, t));
          y.m.insert(y.m.end(), rest.begin(), rest.end());
          admit(sorted_rep(y), next);
          return;
        }
        if (idx == vals.size()) return;
        for (int c = std::min(left, vals[idx].second); c >= 0; --c) {
          take[idx] = c;
          rec(idx + 1, left - c);
        }
        take[idx] = 0;
      };
      rec(0, lat.r);
    }
    bool empty = next.empty();
    if (empty) {
      rep.closed = true;
      break;
    }
    finish_level(std::move(next));
  }
  return rep;
}

std::optional<std::vector<int>> reduce_to_exceptional(const CremonaLattice& lat, const PicClass& x) {
  check_len(lat, x);
  PicClass y = x;
  std::vector<int> word;
  auto sort_with_word = [&]() {
    // bubble sort descending, recording adjacent transpositions
    for (int pass = 0; pass < lat.n; ++pass) {
      bool moved = false;
      for (int i = 0; i + 1 < lat.n; ++i) {
        if (y.m[i] < y.m[i + 1]) {
          std::swap(y.m[i], y.m[i + 1]);
          word.push_back(i);
          moved = true;
        }
      }
      if (!moved) break;
    }
  };
  for (;;) {
    sort_with_word();
    if (y.d < 0) return std::nullopt;
    if (y.d == 0) {
      int neg = 0, zero = 0;
      for (auto v : y.m) {
        if (v == -1) ++neg;
        if (v == 0) ++zero;
      }
      if (neg == 1 && zero == lat.n - 1) return word;
      return std::nullopt;
    }
    std::int64_t msum = 0;
    for (int k = 0; k < lat.r; ++k) msum = checked_add(msum, y.m[k]);
    if (pair_alpha(lat, y.d, msum) >= 0) return std::nullopt;
    y = reflection(lat, lat.n - 1, y);
    word.push_back(lat.n - 1);
  }
}

bool is_minus_one_class(const CremonaLattice& lat, const PicClass& x) {
  check_len(lat, x);
  if (lat.r == 3) return dot(lat, x, x) == -1 && dot(lat, x, canonical_class(lat)) == -1;
  PicClass e = exceptional_class(lat, 0);
  if (dot(lat, x, x) != dot(lat, e, e) || dot(lat, x, canonical_class(lat)) != dot(lat, e, canonical_class(lat)))
    return false;
  if (reduce_to_exceptional(lat, x)) return true;
  if (x.d < 0) return false;
  try {
    auto rep = orbit_bfs(lat, {e}, -1, x.d);
    PicClass s = sorted_rep(x);
    for (auto& lvl : rep.levels)
      if (std::binary_search(lvl.begin(), lvl.end(), s)) return true;
  } catch (const OrbitGuardError&) {
  }
  return false;
}

int mw_rank_cubic(int a, int b) {
  if (a < 0 || b < 0) throw std::invalid_argument("incidence counts must be non-negative");
  int rho = 8 - a + b;
  if (rho < 0) throw InconsistencyError("negative Mordell-Weil rank from a=" + std::to_string(a) + ", b=" + std::to_string(b));
  return rho;
}

int mw_rank_quadric(int a) {
  if (a < 0) throw std::invalid_argument("incidence count must be non-negative");
  if (a % 2) throw InconsistencyError("odd number of coplanar quadruples: " + std::to_string(a));
  int rho = 7 - a / 2;
  if (rho < 0) throw InconsistencyError("negative Mordell-Weil rank from a=" + std::to_string(a));
  return rho;
}

}  // namespace nagata
