#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "nagata/errors.hpp"
#include "nagata/forms.hpp"

namespace nagata {

namespace {

// Degree-D slice of S/I: reduced echelon Macaulay matrix and its normal monomials.
struct Slice {
  std::vector<Exps> mons;
  std::map<Exps, std::size_t> index;
  Matrix ech;
  std::vector<std::size_t> pivots;
  std::vector<std::size_t> normal;

  Slice(const FormSystem& sys, unsigned D) : ech(sys.field(), 0, 0) {
    const Field& f = sys.field();
    unsigned n = sys.nvars();
    mons = monomials(n, D);
    for (std::size_t i = 0; i < mons.size(); ++i) index[mons[i]] = i;
    auto mult = monomials(n, D - sys.degree());
    Matrix m(f, mult.size() * sys.dim(), mons.size());
    std::size_t row = 0;
    Exps s(n);
    for (auto& g : sys.basis())
      for (auto& u : mult) {
        for (auto& [e, c] : g.terms()) {
          for (unsigned i = 0; i < n; ++i) s[i] = e[i] + u[i];
          m(row, index.at(s)) = c;
        }
        ++row;
      }
    pivots = m.rref_inplace();
    std::vector<std::size_t> keep(pivots.size());
    std::iota(keep.begin(), keep.end(), 0);
    ech = m.select_rows(keep);
    std::vector<bool> is_piv(mons.size(), false);
    for (auto p : pivots) is_piv[p] = true;
    for (std::size_t j = 0; j < mons.size(); ++j)
      if (!is_piv[j]) normal.push_back(j);
  }

  std::size_t hilbert() const { return normal.size(); }

  // coordinates of a dense vector on the normal monomials after reduction
  std::vector<Elem> reduce(std::vector<Elem> v) const {
    for (std::size_t i = 0; i < pivots.size(); ++i) {
      Elem c = v[pivots[i]];
      if (c.is_zero()) continue;
      for (std::size_t j = pivots[i]; j < mons.size(); ++j)
        if (!ech(i, j).is_zero()) v[j] -= c * ech(i, j);
    }
    std::vector<Elem> out;
    for (auto j : normal) out.push_back(v[j]);
    return out;
  }
};

unsigned expected_degree(const FormSystem& sys) {
  if (sys.dim() + 1 != sys.nvars())
    throw std::invalid_argument("expected nvars - 1 forms (a complete intersection of points)");
  unsigned e = 1;
  for (std::size_t i = 0; i < sys.dim(); ++i) e *= sys.degree();
  return e;
}

Matrix map_matrix(const Matrix& m, const Embedding& e) {
  Matrix r(e.to(), m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = e.map(m(i, j));
  return r;
}

std::vector<Elem> map_vec(const std::vector<Elem>& v, const Embedding& e) {
  std::vector<Elem> r;
  for (auto& x : v) r.push_back(e.map(x));
  return r;
}

// Multiplication operators of the coordinate ring of the base scheme, in the chart h = 1.
struct Algebra {
  unsigned e = 0;
  Field W;                  // field of h and of the operators
  std::vector<Elem> h;      // linear form, over W
  std::vector<Matrix> mult; // x_i / h
};

std::vector<std::vector<Elem>> linear_candidates(const Field& W, unsigned n) {
  std::vector<std::vector<Elem>> c;
  for (unsigned i = 0; i < n; ++i) {
    std::vector<Elem> v(n, W->zero());
    v[i] = W->one();
    c.push_back(v);
  }
  std::vector<Elem> ts;
  if (W->is_finite()) {
    std::uint64_t lim = std::min<std::uint64_t>(W->order(), 400);
    for (std::uint64_t k = 0; k < lim; ++k) ts.push_back(W->from_code(k));
  } else {
    for (int k = 1; k <= 60; ++k) ts.push_back(W->from_int(k));
  }
  for (auto& t : ts) {
    std::vector<Elem> v(n, W->one());
    for (unsigned i = 1; i < n; ++i) v[i] = v[i - 1] * t;
    c.push_back(v);
    std::vector<Elem> w(n, W->one());
    for (unsigned i = 0; i + 1 < n; ++i) w[i] = t;
    c.push_back(w);
  }
  return c;
}

Algebra build_algebra(const FormSystem& sys) {
  const Field& F = sys.field();
  unsigned n = sys.nvars();
  Algebra alg;
  alg.e = expected_degree(sys);
  unsigned D = alg.e;
  Slice s0(sys, D), s1(sys, D + 1);
  if (s0.hilbert() != alg.e || s1.hilbert() != alg.e)
    throw std::domain_error("base locus is not zero-dimensional of degree " + std::to_string(alg.e) +
                            " (Hilbert function " + std::to_string(s0.hilbert()) + ", " +
                            std::to_string(s1.hilbert()) + ")");
  // L_i : (S/I)_D -> (S/I)_{D+1}
  std::vector<Matrix> L;
  for (unsigned i = 0; i < n; ++i) {
    Matrix m(F, alg.e, alg.e);
    for (std::size_t c = 0; c < s0.normal.size(); ++c) {
      Exps mon = s0.mons[s0.normal[c]];
      mon[i] += 1;
      std::vector<Elem> v(s1.mons.size(), F->zero());
      v[s1.index.at(mon)] = F->one();
      auto red = s1.reduce(v);
      for (std::size_t r = 0; r < alg.e; ++r) m(r, c) = red[r];
    }
    L.push_back(m);
  }
  for (unsigned k = 1; k <= 8; ++k) {
    Field W = (k == 1 || !F->is_finite()) ? F : galois_field(F->characteristic(), F->degree() * k);
    Embedding emb(F, W);
    std::vector<Matrix> LW;
    for (auto& m : L) LW.push_back(k == 1 ? m : map_matrix(m, emb));
    for (auto& h : linear_candidates(W, n)) {
      Matrix Lh(W, alg.e, alg.e);
      for (unsigned i = 0; i < n; ++i)
        if (!h[i].is_zero()) Lh = Lh + LW[i].scale(h[i]);
      auto inv = Lh.inverse();
      if (!inv) continue;
      alg.W = W;
      alg.h = h;
      for (unsigned i = 0; i < n; ++i) alg.mult.push_back(*inv * LW[i]);
      return alg;
    }
    if (!F->is_finite()) break;
  }
  throw std::runtime_error("no linear form avoiding the base locus was found");
}

bool semisimple(const Matrix& m) {
  UniPoly cp = charpoly(m, m.field());
  return eval_poly(radical(cp), m).is_zero();
}

// coordinates of w (in the span of the echelon rows of K) on that basis
std::vector<Elem> coords_in(const Matrix& K, const std::vector<std::size_t>& piv, const std::vector<Elem>& w) {
  std::vector<Elem> out;
  for (auto p : piv) out.push_back(w[p]);
  (void)K;
  return out;
}

struct RawPoint {
  Field field;  // extension where coordinates live
  std::vector<Elem> coords;
  unsigned multiplicity;
};

// Points of the scheme from commuting operators over W; nullopt if g does not separate.
std::optional<std::vector<RawPoint>> points_for(const std::vector<Matrix>& M, const std::vector<Elem>& gc) {
  const Field& W = M[0].field();
  std::size_t e = M[0].rows();
  Matrix G(W, e, e);
  for (std::size_t i = 0; i < M.size(); ++i)
    if (!gc[i].is_zero()) G = G + M[i].scale(gc[i]);
  UniPoly f = radical(charpoly(G, W));
  std::vector<RawPoint> out;
  UniPoly X = UniPoly::x(W);
  UniPoly xp = X % f;
  for (unsigned m = 1; f.degree() > 0; ++m) {
    if (m > e) throw std::logic_error("distinct-degree splitting did not terminate");
    xp = powmod(xp, W->order(), f);
    UniPoly hpart = poly_gcd(f, xp - X);
    if (hpart.degree() <= 0) continue;
    f = (f / hpart).monic();
    xp = xp % f;
    Field Wm = m == 1 ? W : galois_field(W->characteristic(), W->degree() * m);
    Embedding emb(W, Wm);
    auto rs = roots(map_poly(hpart, emb));
    std::vector<Matrix> Mm;
    for (auto& mi : M) Mm.push_back(m == 1 ? mi : map_matrix(mi, emb));
    Matrix Gm = m == 1 ? G : map_matrix(G, emb);
    for (auto& mu : rs) {
      Matrix A = Gm - Matrix::identity(Wm, e).scale(mu);
      Matrix P = A;
      for (std::size_t t = 1; t < e; ++t) P = P * A;
      Matrix K = P.kernel();  // generalized eigenspace, rows
      Matrix Kc = K;
      auto piv = Kc.rref_inplace();
      std::vector<Elem> pt;
      for (auto& mi : Mm) {
        std::size_t s = K.rows();
        Matrix R(Wm, s, s);
        for (std::size_t j = 0; j < s; ++j) {
          auto w = mi.apply(K.row(j));
          auto c = coords_in(K, piv, w);
          for (std::size_t i = 0; i < s; ++i) R(i, j) = c[i];
        }
        UniPoly rr = radical(charpoly(R, Wm));
        if (rr.degree() != 1) return std::nullopt;
        pt.push_back(-(rr.coeff(0) / rr.coeff(1)));
      }
      out.push_back({Wm, normalize_point(pt), static_cast<unsigned>(K.rows())});
    }
  }
  return out;
}

std::vector<RawPoint> scheme_points(const Algebra& alg) {
  const Field& W0 = alg.W;
  std::size_t n = alg.mult.size();
  for (unsigned k = 1; k <= 6; ++k) {
    Field W = k == 1 ? W0 : galois_field(W0->characteristic(), W0->degree() * k);
    Embedding emb(W0, W);
    std::vector<Matrix> M;
    for (auto& m : alg.mult) M.push_back(k == 1 ? m : map_matrix(m, emb));
    for (auto& c : linear_candidates(W, static_cast<unsigned>(n))) {
      auto pts = points_for(M, c);
      if (pts) return *pts;
    }
  }
  throw std::runtime_error("no separating linear form was found");
}

BasePoint to_base_point(const RawPoint& rp, const Field& F) {
  std::uint64_t q = F->order();
  unsigned d = 1;
  for (auto& x : rp.coords) d = std::lcm(d, degree_over(x, q));
  Field T = d == 1 ? F : galois_field(F->characteristic(), F->degree() * d);
  Embedding emb(T, rp.field);
  std::vector<Elem> c;
  for (auto& x : rp.coords) c.push_back(emb.preimage(x));
  return BasePoint{T, normalize_point(c), d, rp.multiplicity};
}

std::size_t jacobian_rank(const FormSystem& sys, const BasePoint& p) {
  Embedding emb(sys.field(), p.field);
  Matrix J(p.field, sys.dim(), sys.nvars());
  for (std::size_t j = 0; j < sys.dim(); ++j) {
    MPoly g = sys.basis()[j].map_coeffs(emb);
    for (unsigned i = 0; i < sys.nvars(); ++i) J(j, i) = g.derivative(i).eval(p.coords);
  }
  return J.rank();
}

std::vector<BasePoint> all_base_points(const FormSystem& sys, const Algebra& alg) {
  const Field& F = sys.field();
  std::vector<BasePoint> out;
  for (auto& rp : scheme_points(alg)) {
    auto bp = to_base_point(rp, F);
    Embedding emb(F, bp.field);
    for (auto& g : sys.basis())
      if (!g.map_coeffs(emb).eval(bp.coords).is_zero())
        throw InconsistencyError("computed base point does not satisfy the system");
    out.push_back(bp);
  }
  std::sort(out.begin(), out.end(), [](const BasePoint& a, const BasePoint& b) {
    if (a.degree != b.degree) return a.degree < b.degree;
    return a.coords < b.coords;
  });
  return out;
}

}  // namespace

std::vector<BasePoint> base_locus(const FormSystem& sys, unsigned max_ext) {
  if (!sys.field()->is_finite()) throw std::invalid_argument("base_locus needs a finite field");
  if (max_ext < 1) throw std::invalid_argument("max_ext must be positive");
  Algebra alg = build_algebra(sys);
  auto pts = all_base_points(sys, alg);
  std::vector<BasePoint> out;
  for (auto& p : pts)
    if (p.degree <= max_ext) out.push_back(p);
  return out;
}

SmoothnessReport is_smooth_zero_dim(const FormSystem& sys) {
  SmoothnessReport rep;
  bool ok_shape = (sys.nvars() == 3 && sys.degree() == 3 && sys.dim() == 2) ||
                  (sys.nvars() == 4 && sys.degree() == 2 && sys.dim() == 3);
  if (!ok_shape) throw std::invalid_argument("supported systems: pencil of plane cubics, net of quadrics in P^3");
  Algebra alg;
  try {
    alg = build_algebra(sys);
  } catch (const std::domain_error& ex) {
    rep.reason = ex.what();
    return rep;
  }
  for (std::size_t i = 0; i < alg.mult.size(); ++i) {
    if (!semisimple(alg.mult[i])) {
      rep.reason = "base scheme is not reduced";
      return rep;
    }
  }
  if (!sys.field()->is_finite()) {
    rep.smooth = true;
    rep.geometric_points = alg.e;
    return rep;
  }
  auto pts = all_base_points(sys, alg);
  std::size_t total = 0;
  for (auto& p : pts) {
    if (p.multiplicity != 1) throw InconsistencyError("reduced base scheme has a multiple point");
    if (jacobian_rank(sys, p) != sys.nvars() - 1)
      throw InconsistencyError("reduced base scheme has a point with degenerate Jacobian");
    ++total;
  }
  if (total != alg.e) throw InconsistencyError("reduced base scheme has the wrong number of points");
  rep.smooth = true;
  rep.geometric_points = total;
  return rep;
}

namespace {

std::vector<Elem> completion_point(const PointConfig& known, unsigned degree, std::size_t want_dim) {
  const Field& F = known.field();
  std::vector<int> ones(known.n(), 1);
  FormSystem sys = forms_through_points(F, static_cast<unsigned>(known.r()), degree, known.points(), ones);
  if (sys.dim() != want_dim)
    throw std::domain_error("forms through the points have dimension " + std::to_string(sys.dim()) +
                            ", expected " + std::to_string(want_dim));
  Algebra alg = build_algebra(sys);
  for (auto& m : alg.mult)
    if (!semisimple(m)) throw std::domain_error("base scheme is not reduced");
  const Field& W = alg.W;
  Embedding emb(F, W);
  std::size_t r = known.r();
  std::vector<Elem> x(r, W->zero());
  for (std::size_t i = 0; i < r; ++i) {
    Elem tr = W->zero();
    for (std::size_t d = 0; d < alg.e; ++d) tr += alg.mult[i](d, d);
    x[i] = tr;
  }
  for (std::size_t j = 0; j < known.n(); ++j) {
    auto p = map_vec(known.point(j), emb);
    Elem hp = W->zero();
    for (std::size_t i = 0; i < r; ++i) hp += alg.h[i] * p[i];
    Elem s = hp.inv();
    for (std::size_t i = 0; i < r; ++i) x[i] -= p[i] * s;
  }
  std::vector<Elem> pt;
  try {
    auto xn = normalize_point(x);
    for (auto& c : xn) {
      if (F->is_finite() && !emb.in_image(c)) throw InconsistencyError("completion point is not rational");
      pt.push_back(F->is_finite() ? emb.preimage(c) : c);
    }
  } catch (const std::invalid_argument&) {
    throw std::domain_error("completion point degenerates");
  }
  for (auto& g : sys.basis())
    if (!g.eval(pt).is_zero()) throw InconsistencyError("completion point is not a base point");
  if (known.index_of(pt)) throw std::domain_error("base locus has a multiple point at a given point");
  return pt;
}

}  // namespace

std::vector<Elem> ninth_base_point(const PointConfig& eight) {
  if (eight.r() != 3 || eight.n() != 8) throw std::invalid_argument("expected 8 points of P^2");
  return completion_point(eight, 3, 2);
}

std::vector<Elem> eighth_base_point(const PointConfig& seven) {
  if (seven.r() != 4 || seven.n() != 7) throw std::invalid_argument("expected 7 points of P^3");
  return completion_point(seven, 2, 3);
}

}  // namespace nagata
