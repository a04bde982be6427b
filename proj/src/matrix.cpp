#include "nagata/matrix.hpp"

#include <stdexcept>

namespace nagata {

Matrix::Matrix(Field f, std::size_t rows, std::size_t cols)
    : f_(std::move(f)), r_(rows), c_(cols), a_(rows * cols, f_->zero()) {}

Matrix Matrix::identity(const Field& f, std::size_t n) {
  Matrix m(f, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = f->one();
  return m;
}

Matrix Matrix::from_rows(const Field& f, const std::vector<std::vector<Elem>>& rows) {
  std::size_t c = rows.empty() ? 0 : rows[0].size();
  Matrix m(f, rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != c) throw std::invalid_argument("ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) {
      if (rows[i][j].field() != f.get()) throw std::invalid_argument("entry from another field");
      m(i, j) = rows[i][j];
    }
  }
  return m;
}

std::vector<Elem> Matrix::row(std::size_t i) const {
  return std::vector<Elem>(a_.begin() + static_cast<std::ptrdiff_t>(i * c_),
                           a_.begin() + static_cast<std::ptrdiff_t>((i + 1) * c_));
}

std::vector<Elem> Matrix::col(std::size_t j) const {
  std::vector<Elem> v;
  for (std::size_t i = 0; i < r_; ++i) v.push_back((*this)(i, j));
  return v;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (c_ != o.r_) throw std::invalid_argument("matrix shape mismatch");
  Matrix m(f_, r_, o.c_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t k = 0; k < c_; ++k) {
      const Elem& x = (*this)(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < o.c_; ++j) m(i, j) += x * o(k, j);
    }
  return m;
}

Matrix Matrix::operator+(const Matrix& o) const {
  if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("matrix shape mismatch");
  Matrix m = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] += o.a_[i];
  return m;
}

Matrix Matrix::operator-(const Matrix& o) const {
  if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("matrix shape mismatch");
  Matrix m = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] -= o.a_[i];
  return m;
}

Matrix Matrix::scale(const Elem& c) const {
  Matrix m = *this;
  for (auto& x : m.a_) x *= c;
  return m;
}

std::vector<Elem> Matrix::apply(const std::vector<Elem>& v) const {
  if (v.size() != c_) throw std::invalid_argument("vector length mismatch");
  std::vector<Elem> out(r_, f_->zero());
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < c_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

Matrix Matrix::transpose() const {
  Matrix m(f_, c_, r_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

Matrix Matrix::select_columns(const std::vector<std::size_t>& idx) const {
  Matrix m(f_, r_, idx.size());
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) m(i, j) = (*this)(i, idx[j]);
  return m;
}

Matrix Matrix::select_rows(const std::vector<std::size_t>& idx) const {
  Matrix m(f_, idx.size(), c_);
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < c_; ++j) m(i, j) = (*this)(idx[i], j);
  return m;
}

bool Matrix::is_zero() const {
  for (auto& x : a_)
    if (!x.is_zero()) return false;
  return true;
}

bool Matrix::operator==(const Matrix& o) const {
  return r_ == o.r_ && c_ == o.c_ && a_ == o.a_;
}

std::vector<std::size_t> Matrix::rref_inplace() {
  std::vector<std::size_t> piv;
  std::size_t row = 0;
  for (std::size_t col = 0; col < c_ && row < r_; ++col) {
    std::size_t sel = row;
    while (sel < r_ && (*this)(sel, col).is_zero()) ++sel;
    if (sel == r_) continue;
    if (sel != row)
      for (std::size_t k = 0; k < c_; ++k) std::swap((*this)(sel, k), (*this)(row, k));
    Elem iv = (*this)(row, col).inv();
    for (std::size_t k = col; k < c_; ++k) (*this)(row, k) *= iv;
    for (std::size_t i = 0; i < r_; ++i) {
      if (i == row) continue;
      Elem fct = (*this)(i, col);
      if (fct.is_zero()) continue;
      for (std::size_t k = col; k < c_; ++k) {
        const Elem& v = (*this)(row, k);
        if (!v.is_zero()) (*this)(i, k) -= fct * v;
      }
    }
    piv.push_back(col);
    ++row;
  }
  return piv;
}

Matrix Matrix::rref() const {
  Matrix m = *this;
  auto piv = m.rref_inplace();
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < piv.size(); ++i) keep.push_back(i);
  return m.select_rows(keep);
}

std::size_t Matrix::rank() const {
  Matrix m = *this;
  return m.rref_inplace().size();
}

Matrix Matrix::kernel() const {
  Matrix m = *this;
  auto piv = m.rref_inplace();
  std::vector<bool> is_piv(c_, false);
  for (auto p : piv) is_piv[p] = true;
  std::vector<std::vector<Elem>> basis;
  for (std::size_t fcol = 0; fcol < c_; ++fcol) {
    if (is_piv[fcol]) continue;
    std::vector<Elem> v(c_, f_->zero());
    v[fcol] = f_->one();
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -m(i, fcol);
    basis.push_back(v);
  }
  Matrix k(f_, basis.size(), c_);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < c_; ++j) k(i, j) = basis[i][j];
  if (basis.empty()) return k;
  return k.rref();
}

Elem Matrix::det() const {
  if (r_ != c_) throw std::invalid_argument("det of non-square matrix");
  Matrix m = *this;
  Elem d = f_->one();
  for (std::size_t col = 0; col < c_; ++col) {
    std::size_t sel = col;
    while (sel < r_ && m(sel, col).is_zero()) ++sel;
    if (sel == r_) return f_->zero();
    if (sel != col) {
      for (std::size_t k = 0; k < c_; ++k) std::swap(m(sel, k), m(col, k));
      d = -d;
    }
    d *= m(col, col);
    Elem iv = m(col, col).inv();
    for (std::size_t i = col + 1; i < r_; ++i) {
      Elem fct = m(i, col) * iv;
      if (fct.is_zero()) continue;
      for (std::size_t k = col; k < c_; ++k) m(i, k) -= fct * m(col, k);
    }
  }
  return d;
}

std::optional<Matrix> Matrix::inverse() const {
  if (r_ != c_) throw std::invalid_argument("inverse of non-square matrix");
  Matrix aug(f_, r_, 2 * c_);
  for (std::size_t i = 0; i < r_; ++i) {
    for (std::size_t j = 0; j < c_; ++j) aug(i, j) = (*this)(i, j);
    aug(i, c_ + i) = f_->one();
  }
  auto piv = aug.rref_inplace();
  if (piv.size() < r_ || piv[r_ - 1] >= c_) return std::nullopt;
  Matrix inv(f_, r_, c_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < c_; ++j) inv(i, j) = aug(i, c_ + j);
  return inv;
}

std::optional<std::vector<Elem>> Matrix::solve(const std::vector<Elem>& rhs) const {
  if (rhs.size() != r_) throw std::invalid_argument("rhs length mismatch");
  Matrix aug(f_, r_, c_ + 1);
  for (std::size_t i = 0; i < r_; ++i) {
    for (std::size_t j = 0; j < c_; ++j) aug(i, j) = (*this)(i, j);
    aug(i, c_) = rhs[i];
  }
  auto piv = aug.rref_inplace();
  if (!piv.empty() && piv.back() == c_) return std::nullopt;
  std::vector<Elem> x(c_, f_->zero());
  for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = aug(i, c_);
  return x;
}

std::string Matrix::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < r_; ++i) {
    s += "[";
    for (std::size_t j = 0; j < c_; ++j) {
      if (j) s += ", ";
      s += (*this)(i, j).to_string();
    }
    s += "]\n";
  }
  return s;
}

// Hessenberg reduction followed by the standard recurrence.
UniPoly charpoly(const Matrix& m0, const Field& f) {
  std::size_t n = m0.rows();
  if (n != m0.cols()) throw std::invalid_argument("charpoly of non-square matrix");
  Matrix h = m0;
  for (std::size_t j = 0; j + 2 <= n; ++j) {
    std::size_t sel = j + 1;
    while (sel < n && h(sel, j).is_zero()) ++sel;
    if (sel == n) continue;
    if (sel != j + 1) {
      for (std::size_t k = 0; k < n; ++k) std::swap(h(sel, k), h(j + 1, k));
      for (std::size_t k = 0; k < n; ++k) std::swap(h(k, sel), h(k, j + 1));
    }
    Elem iv = h(j + 1, j).inv();
    for (std::size_t i = j + 2; i < n; ++i) {
      Elem u = h(i, j) * iv;
      if (u.is_zero()) continue;
      for (std::size_t k = 0; k < n; ++k) h(i, k) -= u * h(j + 1, k);
      for (std::size_t k = 0; k < n; ++k) h(k, j + 1) += u * h(k, i);
    }
  }
  std::vector<UniPoly> p;
  p.push_back(UniPoly::constant(f->one(), f));
  UniPoly X = UniPoly::x(f);
  for (std::size_t k = 1; k <= n; ++k) {
    UniPoly pk = (X - UniPoly::constant(h(k - 1, k - 1), f)) * p[k - 1];
    Elem prod = f->one();
    for (std::size_t i = 1; i < k; ++i) {
      prod *= h(k - i, k - i - 1);
      if (prod.is_zero()) break;
      Elem c = prod * h(k - i - 1, k - 1);
      pk = pk - p[k - i - 1].scale(c);
    }
    p.push_back(pk);
  }
  return p[n];
}

Matrix eval_poly(const UniPoly& p, const Matrix& m) {
  const Field& f = m.field();
  Matrix r(f, m.rows(), m.cols());
  for (std::size_t i = p.coeffs().size(); i-- > 0;) {
    r = r * m;
    for (std::size_t d = 0; d < m.rows(); ++d) r(d, d) += p.coeffs()[i];
  }
  return r;
}

std::size_t fp_rank(std::vector<std::uint32_t>& a, std::size_t rows, std::size_t cols, std::uint32_t p) {
  auto inv = [p](std::uint64_t u) {
    std::uint64_t r = 1, e = p - 2;
    while (e) {
      if (e & 1) r = r * u % p;
      u = u * u % p;
      e >>= 1;
    }
    return r;
  };
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t sel = rank;
    while (sel < rows && a[sel * cols + col] == 0) ++sel;
    if (sel == rows) continue;
    if (sel != rank)
      for (std::size_t k = col; k < cols; ++k) std::swap(a[sel * cols + k], a[rank * cols + k]);
    std::uint64_t iv = inv(a[rank * cols + col]);
    std::uint32_t* pr = &a[rank * cols];
    for (std::size_t k = col; k < cols; ++k) pr[k] = static_cast<std::uint32_t>(pr[k] * iv % p);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      std::uint32_t* ri = &a[i * cols];
      std::uint64_t fct = ri[col];
      if (!fct) continue;
      std::uint64_t neg = p - fct;
      for (std::size_t k = col; k < cols; ++k)
        if (pr[k]) ri[k] = static_cast<std::uint32_t>((ri[k] + neg * pr[k]) % p);
    }
    ++rank;
  }
  return rank;
}

}  // namespace nagata
