#include "nagata/forms.hpp"

#include <map>
#include <stdexcept>

#include "nagata/errors.hpp"

namespace nagata {

FormSystem::FormSystem(Field f, unsigned nvars, unsigned degree, std::vector<MPoly> basis)
    : f_(std::move(f)), n_(nvars), d_(degree), basis_(std::move(basis)) {
  auto mons = monomials(n_, d_);
  Matrix m(f_, basis_.size(), mons.size());
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    const auto& g = basis_[i];
    if (g.field().get() != f_.get() || g.nvars() != n_) throw std::invalid_argument("form from another ring");
    if (g.is_zero() || !g.is_homogeneous() || g.total_degree() != static_cast<int>(d_))
      throw std::invalid_argument("form " + std::to_string(i + 1) + " is not homogeneous of degree " +
                                  std::to_string(d_));
    auto v = g.dense(mons);
    for (std::size_t j = 0; j < mons.size(); ++j) m(i, j) = v[j];
  }
  if (m.rank() != basis_.size()) throw std::invalid_argument("forms are linearly dependent");
}

MPoly FormSystem::member(const std::vector<Elem>& c) const {
  if (c.size() != basis_.size()) throw std::invalid_argument("coefficient count mismatch");
  MPoly r(f_, n_);
  for (std::size_t i = 0; i < c.size(); ++i) r = r + basis_[i].scale(c[i]);
  return r;
}

FormSystem FormSystem::map_field(const Embedding& e) const {
  std::vector<MPoly> b;
  for (auto& g : basis_) b.push_back(g.map_coeffs(e));
  return FormSystem(e.to(), n_, d_, b);
}

std::vector<std::vector<Elem>> vanishing_conditions(unsigned degree, const std::vector<Elem>& p0, int order) {
  std::vector<std::vector<Elem>> rows;
  if (order <= 0) return rows;
  auto p = normalize_point(p0);
  const FieldCtx* f = p[0].field();
  unsigned r = static_cast<unsigned>(p.size());
  std::size_t k = 0;
  while (p[k].is_zero()) ++k;
  auto mons = monomials(r, degree);
  // local exponent vectors beta over the coordinates j != k, |beta| < order
  std::vector<Exps> locals;
  for (int s = 0; s < order && s <= static_cast<int>(degree); ++s)
    for (auto& b : monomials(r - 1, static_cast<unsigned>(s))) locals.push_back(b);
  // powers of p_j
  std::vector<std::vector<Elem>> pw(r);
  for (unsigned j = 0; j < r; ++j) {
    pw[j].push_back(f->one());
    for (unsigned t = 1; t <= degree; ++t) pw[j].push_back(pw[j].back() * p[j]);
  }
  for (auto& beta : locals) {
    std::vector<Elem> row;
    row.reserve(mons.size());
    for (auto& e : mons) {
      // x_k = 1, x_j = p_j + u_j: coefficient of u^beta in prod (p_j + u_j)^{e_j}
      Elem c = f->one();
      unsigned li = 0;
      for (unsigned j = 0; j < r && !c.is_zero(); ++j) {
        if (j == k) continue;
        int bj = beta[li++];
        if (bj > e[j]) {
          c = f->zero();
          break;
        }
        c *= f->from_int(static_cast<std::int64_t>(binomial(static_cast<std::size_t>(e[j]), static_cast<std::size_t>(bj))));
        c *= pw[j][static_cast<std::size_t>(e[j] - bj)];
      }
      row.push_back(c);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

bool fast_prime(const Field& f) {
  return f->kind() == FieldKind::prime && f->characteristic() < (std::uint64_t{1} << 31);
}

std::size_t rank_of_rows(const Field& f, const std::vector<std::vector<Elem>>& rows, std::size_t cols) {
  if (rows.empty()) return 0;
  if (fast_prime(f)) {
    std::vector<std::uint32_t> d(rows.size() * cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols; ++j) d[i * cols + j] = static_cast<std::uint32_t>(rows[i][j].code());
    return fp_rank(d, rows.size(), cols, static_cast<std::uint32_t>(f->characteristic()));
  }
  return Matrix::from_rows(f, rows).rank();
}

}  // namespace

FormSystem forms_through_points(const Field& f, unsigned r, unsigned degree,
                                const std::vector<std::vector<Elem>>& points, const std::vector<int>& mult) {
  if (mult.size() != points.size()) throw std::invalid_argument("one multiplicity per point required");
  auto mons = monomials(r, degree);
  std::vector<std::vector<Elem>> rows;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != r) throw std::invalid_argument("point has wrong length");
    for (auto& row : vanishing_conditions(degree, points[i], mult[i])) rows.push_back(std::move(row));
  }
  Matrix m(f, rows.size(), mons.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < mons.size(); ++j) m(i, j) = rows[i][j];
  Matrix k = rows.empty() ? Matrix::identity(f, mons.size()) : m.kernel();
  std::vector<MPoly> basis;
  for (std::size_t i = 0; i < k.rows(); ++i) {
    MPoly g(f, r);
    for (std::size_t j = 0; j < mons.size(); ++j) g.add_term(mons[j], k(i, j));
    basis.push_back(g);
  }
  return FormSystem(f, r, degree, basis);
}

std::size_t h0(const PointConfig& cfg, int a, const std::vector<int>& b) {
  if (b.size() != cfg.n()) throw std::invalid_argument("b must have one entry per point");
  if (a < 0) return 0;
  std::size_t r = cfg.r();
  std::size_t N = binomial(static_cast<std::size_t>(a) + r - 1, r - 1);
  std::vector<std::vector<Elem>> rows;
  for (std::size_t i = 0; i < cfg.n(); ++i) {
    if (b[i] <= 0) continue;
    if (b[i] > a) return 0;
    for (auto& row : vanishing_conditions(static_cast<unsigned>(a), cfg.point(i), b[i])) rows.push_back(std::move(row));
  }
  return N - rank_of_rows(cfg.field(), rows, N);
}

// ---- irreducibility

namespace {

// polar form matrix of a quadric
Matrix polar_matrix(const MPoly& q) {
  unsigned n = q.nvars();
  const Field& f = q.field();
  Matrix b(f, n, n);
  for (auto& [e, c] : q.terms()) {
    std::vector<unsigned> idx;
    for (unsigned i = 0; i < n; ++i)
      for (int t = 0; t < e[i]; ++t) idx.push_back(i);
    if (idx[0] == idx[1]) {
      b(idx[0], idx[0]) += c + c;
    } else {
      b(idx[0], idx[1]) += c;
      b(idx[1], idx[0]) += c;
    }
  }
  return b;
}

bool quadric_reducible(const MPoly& q) {
  Matrix b = polar_matrix(q);
  std::size_t rk = b.rank();
  Matrix k = b.kernel();
  bool anisotropic_part = false;
  for (std::size_t i = 0; i < k.rows() && !anisotropic_part; ++i) anisotropic_part = !q.eval(k.row(i)).is_zero();
  return rk + (anisotropic_part ? 1 : 0) <= 2;
}

}  // namespace

std::optional<LinearFactor> find_linear_factor_cubic(const MPoly& f) {
  const Field& F = f.field();
  if (!F->is_finite()) throw std::invalid_argument("cubic factor search needs a finite field");
  if (f.nvars() != 3 || f.total_degree() != 3 || !f.is_homogeneous())
    throw std::invalid_argument("expected a ternary cubic form");
  // z | f ?
  bool zdiv = true;
  for (auto& [e, c] : f.terms()) zdiv = zdiv && e[2] > 0;
  if (zdiv) return LinearFactor{F, {F->zero(), F->zero(), F->one()}};
  for (unsigned k = 1; k <= 3; ++k) {
    Field W = k == 1 ? F : galois_field(F->characteristic(), F->degree() * k);
    Embedding emb(F, W);
    MPoly g = f.map_coeffs(emb);
    // roots (u:v) of g(x, y, 0) in P^1(W)
    std::vector<std::pair<Elem, Elem>> pts;
    std::vector<Elem> bin(4, W->zero());
    for (auto& [e, c] : g.terms())
      if (e[2] == 0) bin[static_cast<std::size_t>(e[0])] += c;
    // g(t, 1, 0) = sum bin[i] t^i
    UniPoly gt(W, bin);
    if (!gt.is_zero())
      for (auto& t : roots(gt)) pts.emplace_back(t, W->one());
    if (gt.degree() < 3) pts.emplace_back(W->one(), W->zero());
    // ring W[y, z, c]
    MPoly Y = MPoly::var(W, 3, 0), Z = MPoly::var(W, 3, 1), C = MPoly::var(W, 3, 2);
    for (auto& [u, v] : pts) {
      // line v x - u y + c z = 0
      std::vector<MPoly> sub;
      if (!v.is_zero()) {
        MPoly X = (Y.scale(u) - C * Z).scale(v.inv());
        sub = {X, Y, Z};
      } else {
        // u != 0: y = (v x + c z)/u = c z / u, parametrize by x (reuse Y as x)
        MPoly Yv = (C * Z).scale(u.inv());
        sub = {Y, Yv, Z};
      }
      MPoly s = g.substitute(sub);
      // coefficient polynomials in c
      std::map<std::pair<int, int>, std::vector<Elem>> coeffs;
      for (auto& [e, c] : s.terms()) {
        auto& v2 = coeffs[{e[0], e[1]}];
        if (v2.size() <= static_cast<std::size_t>(e[2])) v2.resize(static_cast<std::size_t>(e[2]) + 1, W->zero());
        v2[static_cast<std::size_t>(e[2])] += c;
      }
      UniPoly gg(W);
      for (auto& [key, v2] : coeffs) gg = poly_gcd(gg, UniPoly(W, v2));
      std::vector<Elem> cands;
      if (coeffs.empty()) {
        cands.push_back(W->zero());
      } else if (gg.degree() > 0) {
        cands = roots(gg);
      }
      if (!cands.empty()) {
        Elem c = cands.front();
        std::vector<Elem> l = v.is_zero() ? std::vector<Elem>{W->zero(), u, -c} : std::vector<Elem>{v, -u, c};
        return LinearFactor{W, normalize_point(l)};
      }
    }
  }
  return std::nullopt;
}

bool is_absolutely_irreducible(const MPoly& f) {
  if (f.is_zero() || !f.is_homogeneous()) throw std::invalid_argument("expected a nonzero form");
  if (f.nvars() == 4 && f.total_degree() == 2) return !quadric_reducible(f);
  if (f.nvars() == 3 && f.total_degree() == 3) {
    if (!f.field()->is_finite())
      throw std::invalid_argument("absolute irreducibility of cubics over Q: use the incidence route");
    return !find_linear_factor_cubic(f).has_value();
  }
  throw std::invalid_argument("supported shapes: ternary cubics, quaternary quadrics");
}

IrreducibilityReport pencil_net_irreducible(const FormSystem& sys, const PointConfig* cfg) {
  IrreducibilityReport rep;
  const Field& F = sys.field();
  bool cubic = sys.nvars() == 3 && sys.degree() == 3 && sys.dim() == 2;
  bool quadric = sys.nvars() == 4 && sys.degree() == 2 && sys.dim() == 3;
  if (!cubic && !quadric) throw std::invalid_argument("expected a pencil of plane cubics or a net of quadrics in P^3");
  std::optional<bool> by_members, by_incidence;
  if (F->is_finite()) {
    std::vector<std::vector<Elem>> coords;
    auto els = F->elements();
    if (cubic) {
      for (auto& t : els) coords.push_back({F->one(), t});
      coords.push_back({F->zero(), F->one()});
    } else {
      for (auto& s : els)
        for (auto& t : els) coords.push_back({F->one(), s, t});
      for (auto& t : els) coords.push_back({F->zero(), F->one(), t});
      coords.push_back({F->zero(), F->zero(), F->one()});
    }
    for (auto& c : coords) {
      MPoly m = sys.member(c);
      ++rep.members_tested;
      if (!is_absolutely_irreducible(m)) rep.reducible_members.push_back({c, m});
    }
    by_members = rep.reducible_members.empty();
    rep.route = "members";
  }
  if (cfg) {
    if (cfg->field().get() != F.get()) throw std::invalid_argument("configuration and system over different fields");
    if (cfg->r() != sys.nvars() || cfg->n() != (cubic ? 9u : 8u))
      throw std::invalid_argument("configuration does not match the system shape");
    for (auto& g : sys.basis())
      for (std::size_t i = 0; i < cfg->n(); ++i)
        if (!g.eval(cfg->point(i)).is_zero()) throw std::invalid_argument("configuration is not in the base locus");
    by_incidence = incidences(*cfg).a == 0;
    rep.route = rep.route.empty() ? "incidence" : rep.route + "+incidence";
  }
  if (by_members && by_incidence && *by_members != *by_incidence)
    throw InconsistencyError("member enumeration and incidence criterion disagree on irreducibility");
  if (!by_members && !by_incidence)
    throw std::invalid_argument("over Q a configuration is required (incidence route)");
  rep.all_irreducible = by_members ? *by_members : *by_incidence;
  return rep;
}

}  // namespace nagata
