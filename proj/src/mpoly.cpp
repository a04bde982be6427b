#include "nagata/mpoly.hpp"

#include <cctype>
#include <stdexcept>

namespace nagata {

MPoly::MPoly(Field f, unsigned nvars) : f_(std::move(f)), n_(nvars) {}

MPoly MPoly::var(const Field& f, unsigned nvars, unsigned i) {
  MPoly p(f, nvars);
  Exps e(nvars, 0);
  e[i] = 1;
  p.t_.emplace(e, f->one());
  return p;
}

MPoly MPoly::constant(const Elem& c, const Field& f, unsigned nvars) {
  MPoly p(f, nvars);
  p.add_term(Exps(nvars, 0), c);
  return p;
}

int MPoly::total_degree() const {
  int d = -1;
  for (auto& [e, c] : t_) {
    int s = 0;
    for (int x : e) s += x;
    d = std::max(d, s);
  }
  return d;
}

bool MPoly::is_homogeneous() const {
  int d = -1;
  for (auto& [e, c] : t_) {
    int s = 0;
    for (int x : e) s += x;
    if (d >= 0 && s != d) return false;
    d = s;
  }
  return true;
}

Elem MPoly::coeff(const Exps& e) const {
  auto it = t_.find(e);
  return it == t_.end() ? f_->zero() : it->second;
}

void MPoly::add_term(const Exps& e, const Elem& c) {
  if (e.size() != n_) throw std::invalid_argument("exponent length mismatch");
  if (c.is_zero()) return;
  auto [it, ins] = t_.emplace(e, c);
  if (!ins) {
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
  }
}

MPoly MPoly::operator+(const MPoly& o) const {
  MPoly r = *this;
  for (auto& [e, c] : o.t_) r.add_term(e, c);
  return r;
}

MPoly MPoly::operator-(const MPoly& o) const {
  MPoly r = *this;
  for (auto& [e, c] : o.t_) r.add_term(e, -c);
  return r;
}

MPoly MPoly::operator-() const {
  MPoly r(f_, n_);
  for (auto& [e, c] : t_) r.t_.emplace(e, -c);
  return r;
}

MPoly MPoly::operator*(const MPoly& o) const {
  MPoly r(f_, n_);
  Exps s(n_);
  for (auto& [a, ca] : t_)
    for (auto& [b, cb] : o.t_) {
      for (unsigned i = 0; i < n_; ++i) s[i] = a[i] + b[i];
      r.add_term(s, ca * cb);
    }
  return r;
}

MPoly MPoly::scale(const Elem& c) const {
  MPoly r(f_, n_);
  if (c.is_zero()) return r;
  for (auto& [e, x] : t_) r.t_.emplace(e, x * c);
  return r;
}

MPoly MPoly::pow(unsigned k) const {
  MPoly r = constant(f_->one(), f_, n_);
  MPoly b = *this;
  while (k) {
    if (k & 1) r = r * b;
    k >>= 1;
    if (k) b = b * b;
  }
  return r;
}

Elem MPoly::eval(const std::vector<Elem>& x) const {
  if (x.size() != n_) throw std::invalid_argument("point dimension mismatch");
  Elem s = f_->zero();
  for (auto& [e, c] : t_) {
    Elem m = c;
    for (unsigned i = 0; i < n_; ++i)
      if (e[i]) m *= x[i].pow_u(static_cast<std::uint64_t>(e[i]));
    s += m;
  }
  return s;
}

MPoly MPoly::substitute(const std::vector<MPoly>& images) const {
  if (images.size() != n_) throw std::invalid_argument("substitution arity mismatch");
  const Field& g = images.empty() ? f_ : images[0].field();
  unsigned m = images.empty() ? 0 : images[0].nvars();
  // cache powers of each image
  std::vector<std::vector<MPoly>> pw(n_);
  MPoly r(g, m);
  for (auto& [e, c] : t_) {
    MPoly term = MPoly::constant(c, g, m);
    for (unsigned i = 0; i < n_; ++i) {
      if (!e[i]) continue;
      auto& v = pw[i];
      if (v.empty()) v.push_back(MPoly::constant(g->one(), g, m));
      while (static_cast<int>(v.size()) <= e[i]) v.push_back(v.back() * images[i]);
      term = term * v[e[i]];
    }
    r = r + term;
  }
  return r;
}

MPoly MPoly::derivative(unsigned i) const {
  MPoly r(f_, n_);
  for (auto& [e, c] : t_) {
    if (!e[i]) continue;
    Exps d = e;
    d[i] -= 1;
    r.add_term(d, c * f_->from_int(e[i]));
  }
  return r;
}

MPoly MPoly::map_coeffs(const Embedding& emb) const {
  MPoly r(emb.to(), n_);
  for (auto& [e, c] : t_) r.add_term(e, emb.map(c));
  return r;
}

std::vector<Elem> MPoly::dense(const std::vector<Exps>& basis) const {
  std::vector<Elem> v;
  v.reserve(basis.size());
  std::size_t hit = 0;
  for (auto& b : basis) {
    auto it = t_.find(b);
    if (it == t_.end()) {
      v.push_back(f_->zero());
    } else {
      v.push_back(it->second);
      ++hit;
    }
  }
  if (hit != t_.size()) throw std::invalid_argument("polynomial has terms outside the basis");
  return v;
}

std::vector<std::string> default_var_names(unsigned n) {
  if (n <= 4) {
    std::vector<std::string> v{"x", "y", "z", "w"};
    v.resize(n);
    return v;
  }
  std::vector<std::string> v;
  for (unsigned i = 1; i <= n; ++i) v.push_back("x" + std::to_string(i));
  return v;
}

std::string MPoly::to_string(const std::vector<std::string>& names0) const {
  auto names = names0.empty() ? default_var_names(n_) : names0;
  if (t_.empty()) return "0";
  std::string s;
  for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
    auto& [e, c] = *it;
    std::string mono;
    for (unsigned i = 0; i < n_; ++i) {
      if (!e[i]) continue;
      if (!mono.empty()) mono += "*";
      mono += names[i];
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    std::string cs = c.to_string();
    bool neg = !f_->is_finite() && c.rational() < 0;
    if (neg) cs = (-c).to_string();
    bool compound = f_->is_finite() && f_->degree() > 1 && cs.find('+') != std::string::npos;
    if (compound) cs = "(" + cs + ")";
    std::string term;
    if (mono.empty()) term = cs;
    else if (cs == "1") term = mono;
    else term = cs + "*" + mono;
    if (s.empty()) s = neg ? "-" + term : term;
    else s += (neg ? " - " : " + ") + term;
  }
  return s;
}

std::vector<Exps> monomials(unsigned nvars, unsigned degree) {
  std::vector<Exps> out;
  if (nvars == 0) return out;
  Exps e(nvars, 0);
  // recursive enumeration in descending lex order
  auto rec = [&](auto&& self, unsigned i, int left) -> void {
    if (i + 1 == nvars) {
      e[i] = left;
      out.push_back(e);
      return;
    }
    for (int k = left; k >= 0; --k) {
      e[i] = k;
      self(self, i + 1, left - k);
    }
  };
  rec(rec, 0, static_cast<int>(degree));
  return out;
}

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

namespace {

struct Parser {
  const Field& f;
  const std::vector<std::string>& names;
  const std::string& s;
  std::size_t pos = 0;

  unsigned n() const { return static_cast<unsigned>(names.size()); }

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("polynomial parse error at " + std::to_string(pos) + ": " + what);
  }
  MPoly expr() {
    skip();
    bool neg = false;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) {
      neg = s[pos] == '-';
      ++pos;
    }
    MPoly r = term();
    if (neg) r = -r;
    for (;;) {
      skip();
      if (pos >= s.size() || (s[pos] != '+' && s[pos] != '-')) break;
      char op = s[pos++];
      MPoly t = term();
      r = op == '+' ? r + t : r - t;
    }
    return r;
  }
  MPoly term() {
    MPoly r = power();
    for (;;) {
      skip();
      if (pos < s.size() && s[pos] == '*') {
        ++pos;
        r = r * power();
      } else if (pos < s.size() && s[pos] == '/') {
        ++pos;
        MPoly d = power();
        if (d.total_degree() != 0) fail("division by a non-constant");
        r = r.scale(d.coeff(Exps(n(), 0)).inv());
      } else if (pos < s.size() && (std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '(')) {
        r = r * power();
      } else {
        break;
      }
    }
    return r;
  }
  MPoly power() {
    MPoly b = atom();
    skip();
    if (pos < s.size() && s[pos] == '^') {
      ++pos;
      skip();
      std::size_t st = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (st == pos) fail("expected exponent");
      b = b.pow(static_cast<unsigned>(std::stoul(s.substr(st, pos - st))));
    }
    return b;
  }
  MPoly atom() {
    skip();
    if (pos >= s.size()) fail("unexpected end");
    if (s[pos] == '(') {
      ++pos;
      MPoly r = expr();
      skip();
      if (pos >= s.size() || s[pos] != ')') fail("expected ')'");
      ++pos;
      return r;
    }
    if (s[pos] == '-') {
      ++pos;
      return -power();
    }
    if (std::isdigit(static_cast<unsigned char>(s[pos]))) {
      std::size_t st = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      return MPoly::constant(f->parse(s.substr(st, pos - st)), f, n());
    }
    if (std::isalpha(static_cast<unsigned char>(s[pos]))) {
      std::size_t st = pos;
      while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
      std::string id = s.substr(st, pos - st);
      for (unsigned i = 0; i < n(); ++i)
        if (names[i] == id) return MPoly::var(f, n(), i);
      if (id == "g") return MPoly::constant(f->gen(), f, n());
      if (id == "i" && f->is_finite() && f->degree() == 2 && (f->gen() * f->gen()) == f->from_int(-1))
        return MPoly::constant(f->gen(), f, n());
      fail("unknown identifier '" + id + "'");
    }
    fail(std::string("unexpected character '") + s[pos] + "'");
  }
};

}  // namespace

MPoly parse_mpoly(const Field& f, const std::vector<std::string>& names, const std::string& text) {
  Parser p{f, names, text};
  MPoly r = p.expr();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  return r;
}

}  // namespace nagata
