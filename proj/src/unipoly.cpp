#include "nagata/unipoly.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace nagata {

UniPoly::UniPoly(Field f) : f_(std::move(f)) {}

UniPoly::UniPoly(Field f, std::vector<Elem> coeffs) : f_(std::move(f)), c_(std::move(coeffs)) {
  for (auto& c : c_)
    if (c.field() != f_.get()) throw std::invalid_argument("coefficient from another field");
  trim();
}

UniPoly UniPoly::x(const Field& f) { return UniPoly(f, {f->zero(), f->one()}); }

UniPoly UniPoly::constant(const Elem& c, const Field& f) { return UniPoly(f, {c}); }

void UniPoly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Elem UniPoly::coeff(std::size_t i) const { return i < c_.size() ? c_[i] : f_->zero(); }

Elem UniPoly::lead() const {
  if (c_.empty()) throw std::domain_error("zero polynomial has no leading coefficient");
  return c_.back();
}

UniPoly UniPoly::operator+(const UniPoly& o) const {
  std::vector<Elem> r(std::max(c_.size(), o.c_.size()), f_->zero());
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] = c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
  return UniPoly(f_, std::move(r));
}

UniPoly UniPoly::operator-(const UniPoly& o) const {
  std::vector<Elem> r(std::max(c_.size(), o.c_.size()), f_->zero());
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] = c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] -= o.c_[i];
  return UniPoly(f_, std::move(r));
}

UniPoly UniPoly::operator*(const UniPoly& o) const {
  if (c_.empty() || o.c_.empty()) return UniPoly(f_);
  std::vector<Elem> r(c_.size() + o.c_.size() - 1, f_->zero());
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  }
  return UniPoly(f_, std::move(r));
}

UniPoly UniPoly::scale(const Elem& c) const {
  std::vector<Elem> r = c_;
  for (auto& x : r) x *= c;
  return UniPoly(f_, std::move(r));
}

void UniPoly::divmod(const UniPoly& d, UniPoly& q, UniPoly& r) const {
  if (d.is_zero()) throw std::domain_error("division by zero polynomial");
  std::vector<Elem> rem = c_;
  int dd = d.degree();
  int n = degree();
  std::vector<Elem> quo(n >= dd ? n - dd + 1 : 0, f_->zero());
  Elem li = d.lead().inv();
  for (int k = n; k >= dd; --k) {
    Elem c = rem[k] * li;
    if (c.is_zero()) continue;
    quo[k - dd] = c;
    for (int j = 0; j <= dd; ++j) rem[k - dd + j] -= c * d.c_[j];
  }
  q = UniPoly(f_, std::move(quo));
  r = UniPoly(f_, std::move(rem));
}

UniPoly UniPoly::operator%(const UniPoly& d) const {
  UniPoly q(f_), r(f_);
  divmod(d, q, r);
  return r;
}

UniPoly UniPoly::operator/(const UniPoly& d) const {
  UniPoly q(f_), r(f_);
  divmod(d, q, r);
  return q;
}

UniPoly UniPoly::monic() const {
  if (is_zero()) return *this;
  return scale(lead().inv());
}

UniPoly UniPoly::derivative() const {
  if (c_.size() <= 1) return UniPoly(f_);
  std::vector<Elem> r;
  for (std::size_t i = 1; i < c_.size(); ++i) r.push_back(c_[i] * f_->from_int(static_cast<std::int64_t>(i)));
  return UniPoly(f_, std::move(r));
}

Elem UniPoly::eval(const Elem& x) const {
  Elem r = f_->zero();
  for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
  return r;
}

std::string UniPoly::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::string s;
  for (std::size_t i = c_.size(); i-- > 0;) {
    if (c_[i].is_zero()) continue;
    if (!s.empty()) s += " + ";
    std::string c = c_[i].to_string();
    if (i == 0) {
      s += c;
    } else {
      if (!c_[i].is_one()) s += "(" + c + ")*";
      s += var;
      if (i > 1) s += "^" + std::to_string(i);
    }
  }
  return s;
}

UniPoly poly_gcd(UniPoly a, UniPoly b) {
  while (!b.is_zero()) {
    UniPoly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

UniPoly mulmod(const UniPoly& a, const UniPoly& b, const UniPoly& m) { return (a * b) % m; }

UniPoly powmod(const UniPoly& base, std::uint64_t e, const UniPoly& m) {
  const Field& f = m.field();
  UniPoly r = UniPoly::constant(f->one(), f) % m;
  UniPoly b = base % m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    e >>= 1;
    if (e) b = mulmod(b, b, m);
  }
  return r;
}

UniPoly pth_root(const UniPoly& f) {
  const Field& F = f.field();
  std::uint64_t p = F->characteristic();
  if (p == 0) throw std::invalid_argument("pth_root needs positive characteristic");
  std::uint64_t e = F->order() / p;  // a^(1/p) = a^(q/p)
  std::vector<Elem> r;
  const auto& c = f.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i % p) {
      if (!c[i].is_zero()) throw std::invalid_argument("not a p-th power");
      continue;
    }
    r.push_back(c[i].pow_u(e));
  }
  return UniPoly(F, std::move(r));
}

UniPoly radical(const UniPoly& f) {
  if (f.is_zero()) throw std::invalid_argument("radical of zero");
  if (f.degree() == 0) return UniPoly::constant(f.field()->one(), f.field());
  UniPoly d = f.derivative();
  if (d.is_zero()) return radical(pth_root(f));
  UniPoly g = poly_gcd(f, d);
  UniPoly w = (f / g).monic();
  if (g.degree() == 0) return w;
  UniPoly rg = radical(g);
  UniPoly common = poly_gcd(w, rg);
  return (w * (rg / common)).monic();
}

bool is_squarefree(const UniPoly& f) { return radical(f).degree() == f.degree(); }

std::size_t count_roots_in_extension(const UniPoly& f, unsigned m) {
  const Field& F = f.field();
  if (!F->is_finite()) throw std::invalid_argument("count_roots_in_extension needs a finite field");
  if (f.is_zero()) throw std::invalid_argument("zero polynomial");
  if (f.degree() == 0) return 0;
  UniPoly X = UniPoly::x(F);
  UniPoly y = X % f;
  for (unsigned k = 0; k < m; ++k) y = powmod(y, F->order(), f);
  return static_cast<std::size_t>(poly_gcd(f, y - X).degree());
}

namespace {

void split(const UniPoly& g, std::vector<Elem>& out, std::mt19937_64& rng) {
  const Field& F = g.field();
  if (g.degree() <= 0) return;
  if (g.degree() == 1) {
    out.push_back(-(g.coeff(0) / g.coeff(1)));
    return;
  }
  std::uint64_t q = F->order();
  UniPoly X = UniPoly::x(F);
  for (int attempt = 0; attempt < 200; ++attempt) {
    Elem a = F->from_code(rng() % q);
    UniPoly h(F);
    if (F->characteristic() == 2) {
      unsigned k = 0;
      for (std::uint64_t t = q; t > 1; t >>= 1) ++k;
      UniPoly y = X.scale(a.is_zero() ? F->one() : a) % g;
      UniPoly tr = y;
      for (unsigned i = 1; i < k; ++i) {
        y = mulmod(y, y, g);
        tr = tr + y;
      }
      h = tr;
    } else {
      UniPoly base = X + UniPoly::constant(a, F);
      h = powmod(base, (q - 1) / 2, g) - UniPoly::constant(F->one(), F);
    }
    UniPoly d = poly_gcd(g, h);
    if (d.degree() > 0 && d.degree() < g.degree()) {
      split(d, out, rng);
      split((g / d).monic(), out, rng);
      return;
    }
  }
  throw std::runtime_error("root splitting did not converge");
}

}  // namespace

std::vector<Elem> roots(const UniPoly& f) {
  const Field& F = f.field();
  if (!F->is_finite()) throw std::invalid_argument("roots() needs a finite field");
  if (f.is_zero()) throw std::invalid_argument("zero polynomial");
  std::vector<Elem> out;
  if (f.degree() == 0) return out;
  std::uint64_t q = F->order();
  if (q <= 10000) {
    for (auto& x : F->elements())
      if (f.eval(x).is_zero()) out.push_back(x);
    return out;
  }
  UniPoly X = UniPoly::x(F);
  UniPoly g = poly_gcd(f, powmod(X, q, f) - X);
  std::mt19937_64 rng(0x5eed);
  split(g, out, rng);
  std::sort(out.begin(), out.end());
  return out;
}

UniPoly map_poly(const UniPoly& f, const Embedding& e) {
  std::vector<Elem> c;
  for (auto& x : f.coeffs()) c.push_back(e.map(x));
  return UniPoly(e.to(), std::move(c));
}

// ---- Embedding

Embedding::Embedding(Field from, Field to) : from_(std::move(from)), to_(std::move(to)) {
  if (!from_->is_finite() || !to_->is_finite()) {
    if (from_.get() != to_.get()) throw std::invalid_argument("embedding between different fields");
    return;
  }
  if (from_->characteristic() != to_->characteristic() || to_->degree() % from_->degree())
    throw std::invalid_argument("no embedding between these fields");
  Elem g;
  if (from_->degree() == 1) {
    g = to_->one();
  } else if (from_.get() == to_.get()) {
    g = to_->gen();
  } else {
    std::vector<Elem> mc;
    for (auto c : from_->modulus()) mc.push_back(to_->from_int(static_cast<std::int64_t>(c)));
    auto rs = roots(UniPoly(to_, mc));
    if (rs.empty()) throw std::logic_error("modulus has no root in the extension");
    g = rs.front();
  }
  Elem pw = to_->one();
  for (unsigned i = 0; i < from_->degree(); ++i) {
    gen_pows_.push_back(pw);
    basis_.push_back(pw.coeffs());
    pw *= g;
  }
}

Elem Embedding::map(const Elem& x) const {
  if (x.field() != from_.get()) throw std::invalid_argument("element not in source field");
  if (!from_->is_finite()) return x;
  if (from_->degree() == 1) return to_->from_int(static_cast<std::int64_t>(x.code()));
  auto d = x.coeffs();
  Elem r = to_->zero();
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i]) r += gen_pows_[i] * to_->from_int(static_cast<std::int64_t>(d[i]));
  return r;
}

namespace {
// solve sum_i c_i basis[i] = y over F_p; returns false if inconsistent
bool solve_digits(const std::vector<std::vector<std::uint64_t>>& basis, std::vector<std::uint64_t> y,
                  std::uint64_t p, std::vector<std::uint64_t>& c) {
  std::size_t a = basis.size(), D = y.size();
  std::vector<std::vector<std::uint64_t>> M(D, std::vector<std::uint64_t>(a + 1));
  for (std::size_t j = 0; j < D; ++j) {
    for (std::size_t i = 0; i < a; ++i) M[j][i] = basis[i][j];
    M[j][a] = y[j];
  }
  auto mm = [p](std::uint64_t u, std::uint64_t v) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(u) * v % p);
  };
  auto inv = [p, &mm](std::uint64_t u) {
    std::uint64_t r = 1, e = p - 2;
    while (e) {
      if (e & 1) r = mm(r, u);
      u = mm(u, u);
      e >>= 1;
    }
    return r;
  };
  std::vector<std::size_t> piv;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a && row < D; ++col) {
    std::size_t sel = row;
    while (sel < D && M[sel][col] == 0) ++sel;
    if (sel == D) continue;
    std::swap(M[sel], M[row]);
    std::uint64_t iv = inv(M[row][col]);
    for (auto& v : M[row]) v = mm(v, iv);
    for (std::size_t r = 0; r < D; ++r) {
      if (r == row || M[r][col] == 0) continue;
      std::uint64_t f = M[r][col];
      for (std::size_t k = 0; k <= a; ++k) M[r][k] = (M[r][k] + p - mm(f, M[row][k])) % p;
    }
    piv.push_back(col);
    ++row;
  }
  for (std::size_t r = row; r < D; ++r)
    if (M[r][a]) return false;
  c.assign(a, 0);
  for (std::size_t r = 0; r < piv.size(); ++r) c[piv[r]] = M[r][a];
  return true;
}
}  // namespace

bool Embedding::in_image(const Elem& y) const {
  if (!from_->is_finite()) return true;
  std::vector<std::uint64_t> c;
  return solve_digits(basis_, y.coeffs(), to_->characteristic(), c);
}

Elem Embedding::preimage(const Elem& y) const {
  if (y.field() != to_.get()) throw std::invalid_argument("element not in target field");
  if (!from_->is_finite()) return y;
  std::vector<std::uint64_t> c;
  if (!solve_digits(basis_, y.coeffs(), to_->characteristic(), c))
    throw std::invalid_argument("element is not in the subfield");
  std::vector<std::int64_t> ci(c.begin(), c.end());
  return from_->from_coeffs(ci);
}

}  // namespace nagata
