#include "nagata/config.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace nagata {

std::vector<Elem> normalize_point(std::vector<Elem> v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    Elem s = v[i].inv();
    for (std::size_t j = i; j < v.size(); ++j) v[j] *= s;
    return v;
  }
  throw std::invalid_argument("zero vector is not a projective point");
}

std::string point_to_string(const std::vector<Elem>& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ":";
    s += p[i].to_string();
  }
  return s + ")";
}

namespace {

Matrix normalized_columns(const Matrix& m) {
  Matrix out(m.field(), m.rows(), m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    auto p = normalize_point(m.col(j));
    for (std::size_t i = 0; i < m.rows(); ++i) out(i, j) = p[i];
  }
  return out;
}

void check_distinct(const Matrix& m) {
  for (std::size_t j = 0; j < m.cols(); ++j) {
    auto c = m.col(j);
    for (std::size_t k = 0; k < j; ++k)
      if (m.col(k) == c)
        throw std::invalid_argument("points " + std::to_string(k + 1) + " and " + std::to_string(j + 1) +
                                    " coincide");
  }
}

bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

PointConfig PointConfig::create(const Field& f, std::size_t r, const std::vector<std::vector<Elem>>& points) {
  if (r < 3) throw std::invalid_argument("ambient dimension r must be at least 3");
  Matrix m(f, r, points.size());
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (points[j].size() != r) throw std::invalid_argument("point " + std::to_string(j + 1) + " has wrong length");
    for (std::size_t i = 0; i < r; ++i) {
      if (points[j][i].field() != f.get()) throw std::invalid_argument("coordinate from another field");
      m(i, j) = points[j][i];
    }
  }
  return from_matrix(m);
}

PointConfig PointConfig::from_matrix(const Matrix& cols) {
  if (cols.rows() < 3) throw std::invalid_argument("ambient dimension r must be at least 3");
  if (cols.cols() < cols.rows()) throw std::invalid_argument("need at least r points");
  for (std::size_t j = 0; j < cols.cols(); ++j) {
    bool zero = true;
    for (std::size_t i = 0; i < cols.rows(); ++i) zero = zero && cols(i, j).is_zero();
    if (zero) throw std::invalid_argument("point " + std::to_string(j + 1) + " is the zero vector");
  }
  if (cols.rank() < cols.rows()) throw std::invalid_argument("points do not span the ambient space");
  Matrix m = normalized_columns(cols);
  check_distinct(m);
  return PointConfig(m);
}

std::vector<std::vector<Elem>> PointConfig::points() const {
  std::vector<std::vector<Elem>> v;
  for (std::size_t j = 0; j < n(); ++j) v.push_back(point(j));
  return v;
}

PointConfig PointConfig::select(const std::vector<std::size_t>& idx) const {
  return PointConfig(m_.select_columns(idx));
}

PointConfig PointConfig::map_field(const Embedding& e) const {
  Matrix m(e.to(), r(), n());
  for (std::size_t i = 0; i < r(); ++i)
    for (std::size_t j = 0; j < n(); ++j) m(i, j) = e.map(m_(i, j));
  return PointConfig(m);
}

std::optional<std::size_t> PointConfig::index_of(const std::vector<Elem>& p) const {
  auto q = normalize_point(p);
  for (std::size_t j = 0; j < n(); ++j)
    if (point(j) == q) return j;
  return std::nullopt;
}

LgpReport in_linear_general_position(const PointConfig& cfg) {
  LgpReport rep;
  std::size_t r = cfg.r(), n = cfg.n();
  if (n < r) return rep;
  std::vector<std::size_t> c(r);
  std::iota(c.begin(), c.end(), 0);
  do {
    if (cfg.coords().select_columns(c).det().is_zero()) {
      rep.in_general_position = false;
      rep.witness = c;
      return rep;
    }
  } while (next_combination(c, n));
  return rep;
}

IncidenceReport incidences(const PointConfig& cfg) {
  IncidenceReport rep;
  rep.r = cfg.r();
  std::size_t r = cfg.r(), n = cfg.n();
  std::vector<std::size_t> c(r);
  std::iota(c.begin(), c.end(), 0);
  if (n >= r) {
    do {
      if (cfg.coords().select_columns(c).det().is_zero()) rep.dependent_subsets.push_back(c);
    } while (next_combination(c, n));
  }
  rep.a = rep.dependent_subsets.size();
  if (r == 3 && n == 9) {
    const auto& t = rep.dependent_subsets;
    for (std::size_t i = 0; i < t.size(); ++i)
      for (std::size_t j = i + 1; j < t.size(); ++j)
        for (std::size_t k = j + 1; k < t.size(); ++k) {
          std::vector<std::size_t> all;
          for (auto* s : {&t[i], &t[j], &t[k]}) all.insert(all.end(), s->begin(), s->end());
          std::sort(all.begin(), all.end());
          if (std::adjacent_find(all.begin(), all.end()) == all.end()) {
            ++rep.b;
            rep.partition_witnesses.push_back({i, j, k});
          }
        }
  }
  return rep;
}

PointConfig dualize(const PointConfig& cfg) {
  Matrix k = cfg.coords().kernel();
  if (k.rows() < 3) throw std::invalid_argument("dual configuration would live in a space of dimension < 2");
  return PointConfig::from_matrix(k);
}

PointConfig veronese_embed(const PointConfig& cfg) {
  if (cfg.r() != 3) throw std::invalid_argument("veronese_embed expects points of P^2");
  const Field& f = cfg.field();
  Matrix m(f, 6, cfg.n());
  for (std::size_t j = 0; j < cfg.n(); ++j) {
    auto p = cfg.point(j);
    std::vector<Elem> v{p[0] * p[0], p[0] * p[1], p[0] * p[2], p[1] * p[1], p[1] * p[2], p[2] * p[2]};
    for (std::size_t i = 0; i < 6; ++i) m(i, j) = v[i];
  }
  return PointConfig::from_matrix(m);
}

namespace {

// basis matrix sending e_i to scaled frame points, so that sum e_i -> last frame point
std::optional<Matrix> frame_basis(const Matrix& pts, const std::vector<std::size_t>& frame) {
  std::size_t r = pts.rows();
  std::vector<std::size_t> head(frame.begin(), frame.begin() + static_cast<std::ptrdiff_t>(r));
  Matrix b = pts.select_columns(head);
  auto sol = b.solve(pts.col(frame[r]));
  if (!sol) return std::nullopt;
  for (auto& x : *sol)
    if (x.is_zero()) return std::nullopt;
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < r; ++i) b(i, j) *= (*sol)[j];
  return b;
}

std::optional<std::vector<std::size_t>> find_frame(const PointConfig& c) {
  std::size_t r = c.r(), n = c.n();
  if (n < r + 1) return std::nullopt;
  std::vector<std::size_t> s(r + 1);
  std::iota(s.begin(), s.end(), 0);
  do {
    bool ok = true;
    for (std::size_t skip = 0; skip <= r && ok; ++skip) {
      std::vector<std::size_t> sub;
      for (std::size_t i = 0; i <= r; ++i)
        if (i != skip) sub.push_back(s[i]);
      ok = !c.coords().select_columns(sub).det().is_zero();
    }
    if (ok) return s;
  } while (next_combination(s, n));
  return std::nullopt;
}

std::optional<std::vector<std::size_t>> match_all(const Matrix& t, const PointConfig& a, const PointConfig& b) {
  std::vector<std::size_t> perm(a.n());
  std::vector<bool> used(b.n(), false);
  for (std::size_t j = 0; j < a.n(); ++j) {
    auto img = t.apply(a.point(j));
    auto idx = b.index_of(img);
    if (!idx || used[*idx]) return std::nullopt;
    used[*idx] = true;
    perm[j] = *idx;
  }
  return perm;
}

}  // namespace

std::optional<Equivalence> config_equivalent(const PointConfig& a, const PointConfig& b, bool allow_permutation) {
  if (a.field().get() != b.field().get()) throw std::invalid_argument("configs over different fields");
  if (a.r() != b.r() || a.n() != b.n()) return std::nullopt;
  auto frame = find_frame(a);
  if (!frame) throw std::invalid_argument("first configuration has no projective frame");
  auto ba = frame_basis(a.coords(), *frame);
  Matrix ainv = *ba->inverse();
  std::size_t r = a.r();
  auto try_image = [&](const std::vector<std::size_t>& img) -> std::optional<Equivalence> {
    auto bb = frame_basis(b.coords(), img);
    if (!bb) return std::nullopt;
    if (bb->det().is_zero()) return std::nullopt;
    Matrix t = *bb * ainv;
    auto perm = match_all(t, a, b);
    if (!perm) return std::nullopt;
    if (!allow_permutation) {
      for (std::size_t i = 0; i < perm->size(); ++i)
        if ((*perm)[i] != i) return std::nullopt;
    }
    return Equivalence{t, *perm};
  };
  if (!allow_permutation) return try_image(*frame);
  // ordered (r+1)-tuples of distinct points of b
  std::vector<std::size_t> img(r + 1);
  std::vector<bool> used(b.n(), false);
  std::optional<Equivalence> found;
  auto rec = [&](auto&& self, std::size_t k) -> bool {
    if (k == r + 1) {
      found = try_image(img);
      return found.has_value();
    }
    for (std::size_t j = 0; j < b.n(); ++j) {
      if (used[j]) continue;
      used[j] = true;
      img[k] = j;
      bool done = self(self, k + 1);
      used[j] = false;
      if (done) return true;
    }
    return false;
  };
  rec(rec, 0);
  return found;
}

std::vector<std::vector<std::size_t>> frobenius_orbits(const PointConfig& cfg, std::uint64_t q) {
  std::vector<std::size_t> img(cfg.n());
  for (std::size_t j = 0; j < cfg.n(); ++j) {
    auto p = cfg.point(j);
    for (auto& x : p) x = x.pow_u(q);
    auto idx = cfg.index_of(p);
    if (!idx) throw std::invalid_argument("configuration is not stable under Frobenius");
    img[j] = *idx;
  }
  std::vector<bool> seen(cfg.n(), false);
  std::vector<std::vector<std::size_t>> orbits;
  for (std::size_t j = 0; j < cfg.n(); ++j) {
    if (seen[j]) continue;
    std::vector<std::size_t> o;
    for (std::size_t k = j; !seen[k]; k = img[k]) {
      seen[k] = true;
      o.push_back(k);
    }
    orbits.push_back(o);
  }
  return orbits;
}

}  // namespace nagata
