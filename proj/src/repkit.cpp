#include "nagata/repkit.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "nagata/errors.hpp"
#include "nagata/forms.hpp"
#include "nagata/json_io.hpp"

namespace nagata {

using json = nlohmann::json;

namespace {

GaRepresentation make_rep(const Matrix& m, Matrix rows) {
  GaRepresentation rep{m.field(), m.cols(), m.rows(), m, std::move(rows)};
  return rep;
}

// all e in Z^n, 0 <= e_i <= cap_i, sum e = a
std::vector<Exps> bounded_exponents(const std::vector<int>& cap, int a) {
  std::vector<Exps> out;
  Exps e(cap.size(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i == cap.size()) {
      if (left == 0) out.push_back(e);
      return;
    }
    for (int v = std::min(left, cap[i]); v >= 0; --v) {
      e[i] = v;
      rec(i + 1, left - v);
    }
    e[i] = 0;
  };
  rec(0, a);
  return out;
}

std::int64_t small_binomial(int n, int k) {
  std::int64_t b = 1;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

// Coefficient rows of tau^{|j|} x^{c-e'} y^{e'} (e' = e - j, j != 0) after y_i -> y_i + tau v_i x_i,
// one group of rows per subgroup generator. Columns index `cols`.
std::vector<std::vector<Elem>> tau_conditions(const GaRepresentation& rep, const std::vector<Exps>& cols, int a) {
  const Field& f = rep.field;
  std::size_t n = rep.n;
  bool first_order_only = !f->is_finite() || f->characteristic() > static_cast<std::uint64_t>(a);
  std::vector<std::vector<Elem>> rows;
  for (std::size_t k = 0; k < rep.group_rank(); ++k) {
    std::vector<Elem> v = rep.subgroup_basis.row(k);
    std::map<Exps, std::size_t> row_of;
    std::vector<std::vector<Elem>> block;
    for (std::size_t col = 0; col < cols.size(); ++col) {
      const Exps& e = cols[col];
      Exps j(n, 0);
      std::function<void(std::size_t, int)> rec = [&](std::size_t i, int total) {
        if (i == n) {
          if (total == 0) return;
          if (first_order_only && total > 1) return;
          Elem coef = f->one();
          Exps ep(n);
          for (std::size_t t = 0; t < n; ++t) {
            ep[t] = e[t] - j[t];
            if (j[t] == 0) continue;
            coef *= f->from_int(small_binomial(e[t], j[t])) * v[t].pow_u(static_cast<std::uint64_t>(j[t]));
          }
          if (coef.is_zero()) return;
          auto it = row_of.find(ep);
          if (it == row_of.end()) {
            it = row_of.emplace(ep, block.size()).first;
            block.emplace_back(cols.size(), f->zero());
          }
          block[it->second][col] += coef;
          return;
        }
        for (int t = 0; t <= e[i]; ++t) {
          j[i] = t;
          rec(i + 1, total + t);
        }
        j[i] = 0;
      };
      rec(0, 0);
    }
    for (auto& b : block) rows.push_back(std::move(b));
  }
  return rows;
}

std::size_t rank_rows(const Field& f, const std::vector<std::vector<Elem>>& rows, std::size_t cols) {
  if (rows.empty() || cols == 0) return 0;
  if (f->kind() == FieldKind::prime && f->characteristic() < (1ull << 31)) {
    std::vector<std::uint32_t> d(rows.size() * cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols; ++j) d[i * cols + j] = static_cast<std::uint32_t>(rows[i][j].code());
    return fp_rank(d, rows.size(), cols, static_cast<std::uint32_t>(f->characteristic()));
  }
  return Matrix::from_rows(f, rows).rank();
}

// Incremental echelon basis in F^dim.
class Span {
 public:
  Span(const FieldCtx* f, std::size_t dim) : f_(f), dim_(dim) {}
  std::size_t rank() const { return rows_.size(); }
  bool full() const { return rows_.size() == dim_; }

  void add(std::vector<Elem> v) {
    if (full()) return;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      Elem c = v[piv_[r]];
      if (c.is_zero()) continue;
      for (std::size_t j = 0; j < dim_; ++j)
        if (!rows_[r][j].is_zero()) v[j] -= c * rows_[r][j];
    }
    std::size_t p = 0;
    while (p < dim_ && v[p].is_zero()) ++p;
    if (p == dim_) return;
    Elem s = v[p].inv();
    for (auto& x : v) x *= s;
    // keep fully reduced
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      Elem c = rows_[r][p];
      if (c.is_zero()) continue;
      for (std::size_t j = 0; j < dim_; ++j) rows_[r][j] -= c * v[j];
    }
    rows_.push_back(std::move(v));
    piv_.push_back(p);
  }
  const std::vector<std::vector<Elem>>& rows() const { return rows_; }

 private:
  const FieldCtx* f_;
  std::size_t dim_;
  std::vector<std::vector<Elem>> rows_;
  std::vector<std::size_t> piv_;
};

// Same over codes of a finite field, which is much faster in the cross-check loops.
class CodeSpan {
 public:
  CodeSpan(const FieldCtx* f, std::size_t dim) : f_(f), dim_(dim) {}
  std::size_t rank() const { return rows_.size(); }
  bool full() const { return rows_.size() == dim_; }

  void add(std::vector<std::uint64_t> v) {
    if (full()) return;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      std::uint64_t c = v[piv_[r]];
      if (!c) continue;
      for (std::size_t j = 0; j < dim_; ++j)
        if (rows_[r][j]) v[j] = f_->sub_c(v[j], f_->mul_c(c, rows_[r][j]));
    }
    std::size_t p = 0;
    while (p < dim_ && !v[p]) ++p;
    if (p == dim_) return;
    std::uint64_t s = f_->inv_c(v[p]);
    for (auto& x : v) x = f_->mul_c(x, s);
    rows_.push_back(std::move(v));
    piv_.push_back(p);
  }
  const std::vector<std::vector<std::uint64_t>>& rows() const { return rows_; }

 private:
  const FieldCtx* f_;
  std::size_t dim_;
  std::vector<std::vector<std::uint64_t>> rows_;
  std::vector<std::size_t> piv_;
};

}  // namespace

std::vector<Matrix> GaRepresentation::generators() const {
  std::vector<Matrix> out;
  for (std::size_t k = 0; k < group_rank(); ++k) {
    Matrix g = Matrix::identity(field, 2 * n);
    for (std::size_t i = 0; i < n; ++i) g(n + i, i) = subgroup_basis(k, i);
    out.push_back(g);
  }
  return out;
}

json GaRepresentation::to_json() const {
  json gens = json::array();
  for (std::size_t k = 0; k < group_rank(); ++k) {
    json d = json::array();
    for (std::size_t i = 0; i < n; ++i) d.push_back(elem_to_json(subgroup_basis(k, i)));
    gens.push_back(json{{"shear_diagonal", d}});
  }
  return json{{"field", field_to_json(field)},
              {"n", n},
              {"r", r},
              {"dimension", 2 * n},
              {"point_matrix", matrix_to_json(point_matrix)},
              {"subgroup_basis", matrix_to_json(subgroup_basis)},
              {"generators", gens}};
}

GaRepresentation build_representation(const Matrix& m) {
  if (m.rank() != m.rows()) throw std::invalid_argument("point matrix must have full row rank");
  if (m.cols() <= m.rows()) throw std::invalid_argument("need more points than the ambient dimension");
  return make_rep(m, m.kernel());
}

GaRepresentation build_representation(const PointConfig& cfg) { return build_representation(cfg.coords()); }

GaRepresentation representation_from_rows(const Matrix& m, const Matrix& rows) {
  if (rows.cols() != m.cols()) throw std::invalid_argument("subgroup rows have the wrong length");
  if (!(m * rows.transpose()).is_zero()) throw std::invalid_argument("subgroup rows are not in the kernel of the point matrix");
  if (rows.rank() != m.cols() - m.rank() || rows.rows() != rows.rank())
    throw std::invalid_argument("subgroup rows do not form a basis of the kernel");
  return make_rep(m, rows);
}

std::vector<Elem> group_act(const GaRepresentation& rep, const std::vector<Elem>& t, const std::vector<Elem>& point) {
  if (t.size() != rep.group_rank()) throw std::invalid_argument("group element has the wrong length");
  if (point.size() != 2 * rep.n) throw std::invalid_argument("point has the wrong length");
  std::vector<Elem> out = point;
  for (std::size_t i = 0; i < rep.n; ++i) {
    Elem s = rep.field->zero();
    for (std::size_t k = 0; k < t.size(); ++k) s += t[k] * rep.subgroup_basis(k, i);
    out[rep.n + i] += s * point[i];
  }
  return out;
}

std::vector<std::string> pair_var_names(std::size_t n) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back("x" + std::to_string(i + 1));
  for (std::size_t i = 0; i < n; ++i) v.push_back("y" + std::to_string(i + 1));
  return v;
}

bool is_invariant(const GaRepresentation& rep, const MPoly& f) {
  std::size_t n = rep.n;
  if (f.nvars() != 2 * n) throw std::invalid_argument("invariant candidates live in 2n variables");
  const Field& F = rep.field;
  unsigned nv = static_cast<unsigned>(2 * n + 1);
  for (std::size_t k = 0; k < rep.group_rank(); ++k) {
    std::vector<MPoly> images;
    for (unsigned i = 0; i < n; ++i) images.push_back(MPoly::var(F, nv, i));
    MPoly tau = MPoly::var(F, nv, nv - 1);
    for (unsigned i = 0; i < n; ++i) {
      MPoly y = MPoly::var(F, nv, static_cast<unsigned>(n) + i);
      const Elem& v = rep.subgroup_basis(k, i);
      if (!v.is_zero()) y = y + (tau * MPoly::var(F, nv, i)).scale(v);
      images.push_back(y);
    }
    MPoly g = f.substitute(images);
    for (auto& [e, c] : g.terms())
      if (e[nv - 1] > 0 && !c.is_zero()) return false;
  }
  return true;
}

std::size_t invariant_dimension(const GaRepresentation& rep, const std::vector<int>& c, int a) {
  if (c.size() != rep.n) throw std::invalid_argument("pair multidegree has the wrong length");
  if (a < 0) return 0;
  for (int ci : c)
    if (ci < 0) return 0;
  auto cols = bounded_exponents(c, a);
  if (cols.empty()) return 0;
  auto rows = tau_conditions(rep, cols, a);
  return cols.size() - rank_rows(rep.field, rows, cols.size());
}

MPoly u_form(const GaRepresentation& rep, std::size_t j) {
  std::size_t n = rep.n;
  unsigned nv = static_cast<unsigned>(2 * n);
  MPoly u(rep.field, nv);
  for (std::size_t i = 0; i < n; ++i) {
    Exps e(nv, 0);
    for (std::size_t k = 0; k < n; ++k)
      if (k != i) e[k] = 1;
    e[n + i] = 1;
    u.add_term(e, rep.point_matrix(j, i));
  }
  return u;
}

MPoly section_to_invariant(const GaRepresentation& rep, const MPoly& F, const std::vector<int>& b) {
  std::size_t n = rep.n, r = rep.r;
  if (F.nvars() != r) throw std::invalid_argument("form must have r variables");
  if (b.size() != n) throw std::invalid_argument("b must have one entry per point");
  if (F.is_zero()) return MPoly(rep.field, static_cast<unsigned>(2 * n));
  if (!F.is_homogeneous()) throw std::invalid_argument("form must be homogeneous");
  unsigned a = static_cast<unsigned>(F.total_degree());
  auto mons = monomials(static_cast<unsigned>(r), a);
  auto coeffs = F.dense(mons);
  for (std::size_t i = 0; i < n; ++i) {
    if (b[i] <= 0) continue;
    for (auto& row : vanishing_conditions(a, rep.point_matrix.col(i), b[i])) {
      Elem s = rep.field->zero();
      for (std::size_t t = 0; t < mons.size(); ++t) s += row[t] * coeffs[t];
      if (!s.is_zero())
        throw std::invalid_argument("form does not vanish to order " + std::to_string(b[i]) + " at point " +
                                    std::to_string(i + 1));
    }
  }
  std::vector<MPoly> us;
  for (std::size_t j = 0; j < r; ++j) us.push_back(u_form(rep, j));
  MPoly g = F.substitute(us);
  MPoly out(rep.field, static_cast<unsigned>(2 * n));
  for (auto [e0, c] : g.terms()) {
    Exps e = e0;
    for (std::size_t i = 0; i < n; ++i) {
      e[i] -= b[i];
      if (e[i] < 0) throw InconsistencyError("substituted form is not divisible by x" + std::to_string(i + 1) + "^" + std::to_string(b[i]));
    }
    out.add_term(e, c);
  }
  return out;
}

// ---- twisting

std::vector<Matrix> TwistedRepresentation::generators() const {
  std::vector<Matrix> out;
  for (auto& A : blocks) {
    Matrix g = Matrix::identity(base, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g(n + i, j) = A(i, j);
    out.push_back(g);
  }
  return out;
}

namespace {

Elem smallest_primitive(const Field& f) {
  std::uint64_t q1 = f->order() - 1;
  auto fac = prime_factors(q1);
  for (std::uint64_t code = 1; code < f->order(); ++code) {
    Elem x = f->from_code(code);
    bool ok = true;
    for (auto l : fac) ok = ok && !x.pow_u(q1 / l).is_one();
    if (ok) return x;
  }
  throw std::logic_error("no primitive element");
}

Matrix companion_of(const Field& base, const Elem& lambda_small, unsigned m) {
  // multiplication by lambda on basis 1, lambda, ..., lambda^{m-1}
  Matrix c(base, m, m);
  if (m == 1) {
    c(0, 0) = base->from_code(lambda_small.code());
    return c;
  }
  // minimal polynomial: solve lambda^m = sum a_j lambda^j over F_p
  const FieldCtx* f = lambda_small.field();
  std::vector<std::vector<std::uint64_t>> pw;
  Elem x = f->one();
  for (unsigned j = 0; j <= m; ++j) {
    pw.push_back(x.coeffs());
    x *= lambda_small;
  }
  Matrix sys(base, m, m);
  std::vector<Elem> rhs(m);
  for (unsigned row = 0; row < m; ++row) {
    for (unsigned j = 0; j < m; ++j) sys(row, j) = base->from_code(pw[j][row]);
    rhs[row] = base->from_code(pw[m][row]);
  }
  auto a = sys.solve(rhs);
  if (!a) throw std::logic_error("lambda does not generate its field");
  for (unsigned j = 0; j + 1 < m; ++j) c(j + 1, j) = base->one();
  for (unsigned j = 0; j < m; ++j) c(j, m - 1) = (*a)[j];
  return c;
}

}  // namespace

TwistedRepresentation twist_representation(const GaRepresentation& rep, const Field& base) {
  const Field& ext = rep.field;
  if (base->kind() != FieldKind::prime || !ext->is_finite() || ext->characteristic() != base->characteristic())
    throw std::invalid_argument("twisting needs a prime base field of the same characteristic");
  unsigned d = ext->degree();
  if (d != 2 && d != 3) throw std::invalid_argument("twisting supports extensions of degree 2 or 3");
  std::size_t n = rep.n, r = rep.r;
  std::uint64_t p = base->characteristic();
  const Matrix& M = rep.point_matrix;

  std::vector<std::size_t> sigma(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto col = M.col(i);
    for (auto& x : col) x = x.pow_u(p);
    bool found = false;
    for (std::size_t j = 0; j < n && !found; ++j)
      if (M.col(j) == col) {
        sigma[i] = j;
        found = true;
      }
    if (!found) throw std::invalid_argument("point matrix is not stable under Frobenius (column " + std::to_string(i + 1) + ")");
  }
  TwistedRepresentation tw{base, ext, n, r, {}, Matrix(ext, n, n), Matrix(base, 0, 0), {}, {}};
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i]) continue;
    std::vector<std::size_t> o;
    for (std::size_t k = i; !seen[k]; k = sigma[k]) {
      seen[k] = true;
      o.push_back(k);
    }
    tw.orbits.push_back(o);
  }
  std::size_t col = 0;
  for (auto& o : tw.orbits) {
    unsigned m = static_cast<unsigned>(o.size());
    if (d % m) throw InconsistencyError("Frobenius orbit size does not divide the extension degree");
    Field small = galois_field(p, m);
    Elem lam_small = m == 1 ? small->one() : smallest_primitive(small);
    Embedding emb(small, ext);
    Elem lam = emb.map(lam_small);
    tw.companions.push_back(companion_of(base, lam_small, m));
    for (unsigned a = 0; a < m; ++a) {
      Elem w = lam.pow_u(a);
      for (unsigned s = 0; s < m; ++s) {
        tw.basis_change(o[s], col) = w;
        w = w.pow_u(p);
      }
      ++col;
    }
  }
  auto Binv = tw.basis_change.inverse();
  if (!Binv) throw InconsistencyError("orbit basis is singular");

  // Frobenius-fixed part of the kernel, in the new coordinates
  Matrix MB = M * tw.basis_change;
  Matrix big(base, r * d, n);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto cf = MB(i, j).coeffs();
      for (unsigned t = 0; t < d; ++t) big(i * d + t, j) = base->from_code(t < cf.size() ? cf[t] : 0);
    }
  tw.subgroup_basis = big.kernel();
  if (tw.subgroup_basis.rows() != n - r)
    throw InconsistencyError("Frobenius-fixed kernel has dimension " + std::to_string(tw.subgroup_basis.rows()));

  Embedding down(base, ext);
  for (std::size_t k = 0; k < tw.subgroup_basis.rows(); ++k) {
    std::vector<Elem> s;
    for (std::size_t j = 0; j < n; ++j) s.push_back(down.map(tw.subgroup_basis(k, j)));
    tw.blocks.push_back(twisted_block(tw, tw.basis_change.apply(s)));
  }
  return tw;
}

Matrix twisted_block(const TwistedRepresentation& tw, const std::vector<Elem>& t) {
  std::size_t n = tw.n;
  if (t.size() != n) throw std::invalid_argument("diagonal has the wrong length");
  auto Binv = tw.basis_change.inverse();
  if (!Binv) throw InconsistencyError("orbit basis is singular");
  Matrix D(tw.ext, n, n);
  for (std::size_t i = 0; i < n; ++i) D(i, i) = t[i];
  Matrix A = *Binv * D * tw.basis_change;
  Embedding down(tw.base, tw.ext);
  Matrix Ab(tw.base, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!down.in_image(A(i, j))) throw InconsistencyError("twisted generator is not defined over the base field");
      Ab(i, j) = down.preimage(A(i, j));
    }
  return Ab;
}

json block_format(const TwistedRepresentation& tw, const Matrix& A) {
  json out = json::array();
  std::size_t off = 0;
  for (auto& o : tw.orbits) {
    std::size_t m = o.size();
    bool scalar = true;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (i != j ? !A(off + i, off + j).is_zero() : !(A(off + i, off + i) == A(off, off))) scalar = false;
    if (scalar) {
      for (std::size_t i = 0; i < m; ++i) out.push_back(elem_to_json(A(off + i, off + i)));
    } else {
      json blk = json::array();
      for (std::size_t i = 0; i < m; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m; ++j) row.push_back(elem_to_json(A(off + i, off + j)));
        blk.push_back(row);
      }
      out.push_back(blk);
    }
    off += m;
  }
  return out;
}

json TwistedRepresentation::to_json() const {
  json orb = json::array();
  for (auto& o : orbits) {
    json v = json::array();
    for (auto i : o) v.push_back(i + 1);
    orb.push_back(v);
  }
  json comps = json::array();
  for (auto& c : companions) comps.push_back(matrix_to_json(c));
  json gens = json::array();
  for (auto& A : blocks) gens.push_back(block_format(*this, A));
  return json{{"base_field", field_to_json(base)},
              {"extension_field", field_to_json(ext)},
              {"n", n},
              {"r", r},
              {"dimension", 2 * n},
              {"frobenius_orbits", orb},
              {"companions", comps},
              {"basis_change", matrix_to_json(basis_change)},
              {"subgroup_basis", matrix_to_json(subgroup_basis)},
              {"generator_blocks", gens}};
}

bool twist_matches_diagonal(const TwistedRepresentation& tw, const GaRepresentation& rep) {
  if (tw.ext.get() != rep.field.get() || tw.n != rep.n) return false;
  std::size_t n = tw.n;
  Embedding up(tw.base, tw.ext);
  auto Binv = tw.basis_change.inverse();
  if (!Binv) return false;
  // P = diag(B, B) conjugates each base-changed generator to [[I,0],[diag(t),I]]
  Matrix P(tw.ext, 2 * n, 2 * n);
  Matrix Pinv(tw.ext, 2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      P(i, j) = P(n + i, n + j) = tw.basis_change(i, j);
      Pinv(i, j) = Pinv(n + i, n + j) = (*Binv)(i, j);
    }
  std::vector<std::vector<Elem>> ts;
  for (auto& g : tw.generators()) {
    Matrix ge(tw.ext, 2 * n, 2 * n);
    for (std::size_t i = 0; i < 2 * n; ++i)
      for (std::size_t j = 0; j < 2 * n; ++j) ge(i, j) = up.map(g(i, j));
    Matrix h = P * ge * Pinv;
    std::vector<Elem> t(n);
    for (std::size_t i = 0; i < 2 * n; ++i)
      for (std::size_t j = 0; j < 2 * n; ++j) {
        bool diag = i == j;
        bool shear = i >= n && j < n && i - n == j;
        if (diag) {
          if (!h(i, j).is_one()) return false;
        } else if (shear) {
          t[j] = h(i, j);
        } else if (!h(i, j).is_zero()) {
          return false;
        }
      }
    if (!rep.point_matrix.apply(t).empty()) {
      for (auto& x : rep.point_matrix.apply(t))
        if (!x.is_zero()) return false;
    }
    ts.push_back(t);
  }
  return !ts.empty() && Matrix::from_rows(tw.ext, ts).rank() == rep.group_rank();
}

bool generators_commute(const std::vector<Matrix>& gens) {
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      if (!(gens[i] * gens[j] == gens[j] * gens[i])) return false;
  return true;
}

bool generators_unipotent(const std::vector<Matrix>& gens) {
  for (auto& g : gens) {
    Matrix e = g - Matrix::identity(g.field(), g.rows());
    if (!(e * e).is_zero()) return false;
  }
  return true;
}

// ---- cross-check

CrossCheckReport mukai_cross_check(const GaRepresentation& rep, const PointConfig& cfg, int max_a, int max_c,
                                   std::size_t basis_limit, bool keep_rows) {
  if (rep.n != cfg.n() || rep.r != cfg.r() || rep.field.get() != cfg.field().get())
    throw std::invalid_argument("representation and configuration do not match");
  if (max_a < 0 || max_c < 0) throw std::invalid_argument("box bounds must be non-negative");
  const Field& F = rep.field;
  std::size_t n = rep.n, r = rep.r;
  CrossCheckReport out;
  auto record = [&](const std::vector<int>& c, int a, std::size_t inv, std::size_t h) {
    CrossCheckCell cell{c, a, inv, h};
    ++out.cells;
    if (cell.equal())
      ++out.equal_cells;
    else
      out.mismatches.push_back(cell);
    if (keep_rows) out.rows.push_back(cell);
  };

  for (int a = 0; a <= max_a; ++a) {
    int cap = std::min(a, max_c);
    auto cols = bounded_exponents(std::vector<int>(n, cap), a);
    // kernel of the invariance conditions on the largest cell; smaller cells are coordinate slices of it
    auto rows = tau_conditions(rep, cols, a);
    Matrix U = rows.empty() ? Matrix(F, 0, cols.size()) : Matrix::from_rows(F, rows);
    Matrix Kmat = rows.empty() ? Matrix::identity(F, cols.size()) : U.kernel();
    std::size_t K = Kmat.rows();
    std::size_t N = binomial(static_cast<std::size_t>(a) + r - 1, r - 1);

    // per (point, c_i): vectors to add on each side
    std::vector<std::vector<std::vector<std::vector<Elem>>>> inv_add(n), h0_add(n);
    std::vector<std::vector<std::vector<std::size_t>>> excluded(n);
    for (std::size_t i = 0; i < n; ++i) {
      inv_add[i].resize(max_c + 1);
      h0_add[i].resize(max_c + 1);
      excluded[i].resize(max_c + 1);
      for (int ci = 0; ci <= max_c; ++ci) {
        Span s(F.get(), K);
        for (std::size_t e = 0; e < cols.size(); ++e)
          if (cols[e][i] > ci) {
            s.add(Kmat.col(e));
            excluded[i][ci].push_back(e);
          }
        inv_add[i][ci] = s.rows();
        int b = a - ci;
        if (b > 0) {
          Span t(F.get(), N);
          for (auto& row : vanishing_conditions(static_cast<unsigned>(a), cfg.point(i), b)) t.add(row);
          h0_add[i][ci] = t.rows();
        }
      }
    }

    std::vector<int> c(n, 0);
    std::vector<int> excl_count(cols.size(), 0);
    std::size_t excluded_cols = 0;
    if (F->is_finite()) {
      auto codes = [](const std::vector<Elem>& v) {
        std::vector<std::uint64_t> o;
        for (auto& x : v) o.push_back(x.code());
        return o;
      };
      std::vector<std::vector<std::vector<std::vector<std::uint64_t>>>> ia(n), ha(n);
      for (std::size_t i = 0; i < n; ++i) {
        ia[i].resize(max_c + 1);
        ha[i].resize(max_c + 1);
        for (int ci = 0; ci <= max_c; ++ci) {
          for (auto& v : inv_add[i][ci]) ia[i][ci].push_back(codes(v));
          for (auto& v : h0_add[i][ci]) ha[i][ci].push_back(codes(v));
        }
      }
      std::function<void(std::size_t, const CodeSpan&, const CodeSpan&)> dfs = [&](std::size_t i, const CodeSpan& si,
                                                                                 const CodeSpan& sh) {
        if (i == n) {
          if (cols.size() - excluded_cols > basis_limit) {
            ++out.skipped_cells;
            return;
          }
          record(c, a, K - si.rank(), N - sh.rank());
          return;
        }
        for (int ci = 0; ci <= max_c; ++ci) {
          c[i] = ci;
          CodeSpan si2 = si, sh2 = sh;
          for (auto& v : ia[i][ci]) si2.add(v);
          for (auto& v : ha[i][ci]) sh2.add(v);
          for (auto e : excluded[i][ci])
            if (excl_count[e]++ == 0) ++excluded_cols;
          dfs(i + 1, si2, sh2);
          for (auto e : excluded[i][ci])
            if (--excl_count[e] == 0) --excluded_cols;
        }
        c[i] = 0;
      };
      dfs(0, CodeSpan(F.get(), K), CodeSpan(F.get(), N));
    } else {
      std::function<void(std::size_t, const Span&, const Span&)> dfs = [&](std::size_t i, const Span& si,
                                                                         const Span& sh) {
        if (i == n) {
          if (cols.size() - excluded_cols > basis_limit) {
            ++out.skipped_cells;
            return;
          }
          record(c, a, K - si.rank(), N - sh.rank());
          return;
        }
        for (int ci = 0; ci <= max_c; ++ci) {
          c[i] = ci;
          Span si2 = si, sh2 = sh;
          for (auto& v : inv_add[i][ci]) si2.add(v);
          for (auto& v : h0_add[i][ci]) sh2.add(v);
          for (auto e : excluded[i][ci])
            if (excl_count[e]++ == 0) ++excluded_cols;
          dfs(i + 1, si2, sh2);
          for (auto e : excluded[i][ci])
            if (--excl_count[e] == 0) --excluded_cols;
        }
        c[i] = 0;
      };
      dfs(0, Span(F.get(), K), Span(F.get(), N));
    }
  }
  return out;
}

}  // namespace nagata
