#include "nagata/field.hpp"

#include <array>
#include <cctype>
#include <tuple>
#include <map>
#include <mutex>
#include <stdexcept>

namespace nagata {

namespace {

constexpr std::uint64_t kMaxOrder = std::uint64_t{1} << 62;
constexpr std::uint64_t kTableLimit = std::uint64_t{1} << 18;
constexpr std::uint32_t kNoLog = 0xffffffffu;

using Digits = std::array<std::uint64_t, 64>;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
  std::int64_t t = 0, nt = 1;
  std::int64_t r = static_cast<std::int64_t>(p), nr = static_cast<std::int64_t>(a % p);
  while (nr) {
    std::int64_t q = r / nr;
    std::int64_t tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (r != 1) throw std::domain_error("inverse of zero");
  if (t < 0) t += static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(t);
}

// dense polynomials over F_p for the irreducibility test
using PP = std::vector<std::uint64_t>;

void trim(PP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

PP pp_mod(PP a, const PP& m, std::uint64_t p) {
  trim(a);
  std::uint64_t li = invmod(m.back(), p);
  while (a.size() >= m.size()) {
    std::uint64_t c = mulmod(a.back(), li, p);
    std::size_t sh = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i)
      a[sh + i] = (a[sh + i] + p - mulmod(c, m[i], p)) % p;
    trim(a);
  }
  return a;
}

PP pp_mulmod(const PP& a, const PP& b, const PP& m, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  PP r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
  return pp_mod(r, m, p);
}

PP pp_powx(std::uint64_t e_p_power, unsigned times, const PP& m, std::uint64_t p) {
  // x^(p^times) mod m, by `times` successive p-th powers
  PP x = pp_mod(PP{0, 1}, m, p);
  for (unsigned t = 0; t < times; ++t) {
    PP r{1}, b = x;
    std::uint64_t e = e_p_power;
    while (e) {
      if (e & 1) r = pp_mulmod(r, b, m, p);
      b = pp_mulmod(b, b, m, p);
      e >>= 1;
    }
    x = r;
  }
  return x;
}

PP pp_gcd(PP a, PP b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    PP r = pp_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

struct CacheKey {
  int kind;
  std::uint64_t p;
  unsigned degree;
  std::vector<std::uint64_t> modulus;
  bool operator<(const CacheKey& o) const {
    return std::tie(kind, p, degree, modulus) < std::tie(o.kind, o.p, o.degree, o.modulus);
  }
};

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

std::map<CacheKey, Field>& cache() {
  static std::map<CacheKey, Field> c;
  return c;
}

Field cached(FieldKind kind, std::uint64_t p, unsigned degree, std::vector<std::uint64_t> modulus) {
  CacheKey key{static_cast<int>(kind), p, degree, modulus};
  std::lock_guard<std::mutex> lock(cache_mutex());
  auto it = cache().find(key);
  if (it != cache().end()) return it->second;
  auto f = std::make_shared<const FieldCtx>(kind, p, degree, std::move(modulus));
  cache().emplace(std::move(key), f);
  return f;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

bool is_irreducible_mod_p(const std::vector<std::uint64_t>& f, std::uint64_t p) {
  PP m = f;
  trim(m);
  if (m.size() < 2) return false;
  unsigned n = static_cast<unsigned>(m.size() - 1);
  if (n == 1) return true;
  PP x{0, 1};
  auto xm = pp_mod(x, m, p);
  PP full = pp_powx(p, n, m, p);
  if (full != xm) return false;
  for (std::uint64_t l : prime_factors(n)) {
    PP h = pp_powx(p, static_cast<unsigned>(n / l), m, p);
    h.resize(std::max<std::size_t>(h.size(), 2), 0);
    h[1] = (h[1] + p - 1) % p;
    PP g = pp_gcd(m, h, p);
    if (g.size() != 1) return false;
  }
  return true;
}

std::vector<std::uint64_t> default_modulus(std::uint64_t p, unsigned degree) {
  if (degree == 1) return {0, 1};
  std::vector<std::uint64_t> f(degree + 1, 0);
  f[degree] = 1;
  for (std::uint64_t code = 0;; ++code) {
    std::uint64_t c = code;
    for (unsigned i = 0; i < degree; ++i) {
      f[i] = c % p;
      c /= p;
    }
    if (c) throw std::runtime_error("no irreducible polynomial found");
    if (f[0] != 0 && is_irreducible_mod_p(f, p)) return f;
  }
}

FieldCtx::FieldCtx(FieldKind kind, std::uint64_t p, unsigned degree,
                   std::vector<std::uint64_t> modulus)
    : kind_(kind), p_(p), degree_(degree), modulus_(std::move(modulus)) {
  if (kind_ == FieldKind::rational) {
    p_ = 0;
    degree_ = 1;
    return;
  }
  ppow_.assign(degree_ + 1, 1);
  for (unsigned i = 1; i <= degree_; ++i) ppow_[i] = ppow_[i - 1] * p_;
  order_ = ppow_[degree_];
  if (kind_ == FieldKind::extension && order_ <= kTableLimit) build_tables();
}

FieldSpec FieldCtx::spec() const {
  FieldSpec s;
  s.kind = kind_;
  s.p = p_;
  s.degree = degree_;
  if (kind_ == FieldKind::extension) s.modulus = modulus_;
  return s;
}

std::string FieldCtx::name() const {
  if (kind_ == FieldKind::rational) return "Q";
  return "F_" + std::to_string(order_);
}

bool FieldCtx::same_as(const FieldCtx& o) const {
  return this == &o || (kind_ == o.kind_ && p_ == o.p_ && degree_ == o.degree_ &&
                        modulus_ == o.modulus_);
}

void FieldCtx::build_tables() {
  std::uint64_t q = order_;
  std::uint64_t n = q - 1;
  auto fac = prime_factors(n);
  std::uint64_t g = 0;
  for (std::uint64_t c = 2; c < q; ++c) {
    bool ok = true;
    for (auto l : fac) {
      std::uint64_t r = 1, b = c, e = n / l;
      while (e) {
        if (e & 1) r = mul_poly(r, b);
        b = mul_poly(b, b);
        e >>= 1;
      }
      if (r == 1) {
        ok = false;
        break;
      }
    }
    if (ok) {
      g = c;
      break;
    }
  }
  if (!g) throw std::runtime_error("no primitive element");
  exp_.assign(n, 0);
  log_.assign(q, kNoLog);
  std::uint64_t x = 1;
  for (std::uint64_t k = 0; k < n; ++k) {
    exp_[k] = static_cast<std::uint32_t>(x);
    log_[x] = static_cast<std::uint32_t>(k);
    x = mul_poly(x, g);
  }
  zech_.assign(n, kNoLog);
  for (std::uint64_t k = 0; k < n; ++k) {
    std::uint64_t s = add_digits(exp_[k], 1, false);
    zech_[k] = s == 0 ? kNoLog : log_[s];
  }
  tables_ = true;
}

void FieldCtx::decode(std::uint64_t c, std::uint64_t* d) const {
  for (unsigned i = 0; i < degree_; ++i) {
    d[i] = c % p_;
    c /= p_;
  }
}

std::uint64_t FieldCtx::encode(const std::uint64_t* d) const {
  std::uint64_t c = 0;
  for (unsigned i = degree_; i-- > 0;) c = c * p_ + d[i];
  return c;
}

std::uint64_t FieldCtx::add_digits(std::uint64_t a, std::uint64_t b, bool sub) const {
  Digits x{}, y{};
  decode(a, x.data());
  decode(b, y.data());
  for (unsigned i = 0; i < degree_; ++i) x[i] = sub ? (x[i] + p_ - y[i]) % p_ : (x[i] + y[i]) % p_;
  return encode(x.data());
}

std::uint64_t FieldCtx::mul_poly(std::uint64_t a, std::uint64_t b) const {
  if (a == 0 || b == 0) return 0;
  Digits x{}, y{};
  decode(a, x.data());
  decode(b, y.data());
  std::array<std::uint64_t, 128> r{};
  for (unsigned i = 0; i < degree_; ++i) {
    if (!x[i]) continue;
    for (unsigned j = 0; j < degree_; ++j) r[i + j] = (r[i + j] + mulmod(x[i], y[j], p_)) % p_;
  }
  for (unsigned k = 2 * degree_ - 2; k >= degree_; --k) {
    std::uint64_t c = r[k];
    if (!c) continue;
    r[k] = 0;
    for (unsigned j = 0; j < degree_; ++j) {
      std::uint64_t t = mulmod(c, modulus_[j], p_);
      r[k - degree_ + j] = (r[k - degree_ + j] + p_ - t) % p_;
    }
  }
  return encode(r.data());
}

std::uint64_t FieldCtx::add_c(std::uint64_t a, std::uint64_t b) const {
  if (degree_ == 1) {
    std::uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  if (tables_) {
    if (a == 0) return b;
    if (b == 0) return a;
    std::uint64_t n = order_ - 1;
    std::uint64_t la = log_[a], lb = log_[b];
    std::uint64_t z = zech_[(lb + n - la) % n];
    if (z == kNoLog) return 0;
    return exp_[(la + z) % n];
  }
  return add_digits(a, b, false);
}

std::uint64_t FieldCtx::neg_c(std::uint64_t a) const {
  if (a == 0) return 0;
  if (degree_ == 1) return p_ - a;
  if (p_ == 2) return a;
  if (tables_) return exp_[(log_[a] + (order_ - 1) / 2) % (order_ - 1)];
  return add_digits(0, a, true);
}

std::uint64_t FieldCtx::sub_c(std::uint64_t a, std::uint64_t b) const {
  if (degree_ == 1) return a >= b ? a - b : a + p_ - b;
  if (tables_) return add_c(a, neg_c(b));
  return add_digits(a, b, true);
}

std::uint64_t FieldCtx::mul_c(std::uint64_t a, std::uint64_t b) const {
  if (degree_ == 1) return mulmod(a, b, p_);
  if (a == 0 || b == 0) return 0;
  if (tables_) return exp_[(static_cast<std::uint64_t>(log_[a]) + log_[b]) % (order_ - 1)];
  return mul_poly(a, b);
}

std::uint64_t FieldCtx::pow_c(std::uint64_t a, std::uint64_t e) const {
  if (tables_) {
    if (e == 0) return 1;
    if (a == 0) return 0;
    unsigned __int128 k = static_cast<unsigned __int128>(log_[a]) * (e % (order_ - 1));
    return exp_[static_cast<std::uint64_t>(k % (order_ - 1))];
  }
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mul_c(r, a);
    a = mul_c(a, a);
    e >>= 1;
  }
  return r;
}

std::uint64_t FieldCtx::inv_c(std::uint64_t a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  if (degree_ == 1) return invmod(a, p_);
  if (tables_) return exp_[(order_ - 1 - log_[a]) % (order_ - 1)];
  return pow_c(a, order_ - 2);
}

Elem FieldCtx::zero() const {
  if (kind_ == FieldKind::rational) return Elem(this, mpq_class(0));
  return Elem(this, std::uint64_t{0});
}

Elem FieldCtx::one() const {
  if (kind_ == FieldKind::rational) return Elem(this, mpq_class(1));
  return Elem(this, std::uint64_t{1});
}

Elem FieldCtx::from_int(std::int64_t v) const {
  if (kind_ == FieldKind::rational) return Elem(this, mpq_class(static_cast<long>(v)));
  std::int64_t r = v % static_cast<std::int64_t>(p_);
  if (r < 0) r += static_cast<std::int64_t>(p_);
  return Elem(this, static_cast<std::uint64_t>(r));
}

Elem FieldCtx::from_code(std::uint64_t c) const {
  if (kind_ == FieldKind::rational) throw std::invalid_argument("codes are for finite fields");
  if (c >= order_) throw std::invalid_argument("code out of range");
  return Elem(this, c);
}

Elem FieldCtx::from_coeffs(const std::vector<std::int64_t>& c) const {
  if (kind_ == FieldKind::rational) {
    if (c.size() > 1) throw std::invalid_argument("coefficient vector for Q");
    return from_int(c.empty() ? 0 : c[0]);
  }
  if (c.size() > degree_) throw std::invalid_argument("too many coefficients for field");
  Digits d{};
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::int64_t r = c[i] % static_cast<std::int64_t>(p_);
    if (r < 0) r += static_cast<std::int64_t>(p_);
    d[i] = static_cast<std::uint64_t>(r);
  }
  return Elem(this, encode(d.data()));
}

Elem FieldCtx::from_rational(const mpq_class& q0) const {
  mpq_class q = q0;
  q.canonicalize();
  if (kind_ == FieldKind::rational) return Elem(this, q);
  mpz_class pz(static_cast<unsigned long>(p_));
  mpz_class num = q.get_num() % pz;
  if (num < 0) num += pz;
  mpz_class den = q.get_den() % pz;
  if (den == 0) throw std::domain_error("denominator divisible by the characteristic");
  Elem n(this, static_cast<std::uint64_t>(num.get_ui()));
  Elem d(this, static_cast<std::uint64_t>(den.get_ui()));
  return n / d;
}

Elem FieldCtx::gen() const {
  if (kind_ == FieldKind::rational) return one();
  if (degree_ == 1) return from_int(1);
  return Elem(this, p_);
}

Elem FieldCtx::parse(std::string_view s) const {
  std::string str(s);
  while (!str.empty() && std::isspace(static_cast<unsigned char>(str.back()))) str.pop_back();
  std::size_t b = 0;
  while (b < str.size() && std::isspace(static_cast<unsigned char>(str[b]))) ++b;
  str = str.substr(b);
  if (!str.empty() && str[0] == '+') str = str.substr(1);
  mpq_class q;
  if (str.empty() || q.set_str(str, 10) != 0)
    throw std::invalid_argument("cannot parse field element '" + std::string(s) + "'");
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator");
  q.canonicalize();
  return from_rational(q);
}

std::vector<Elem> FieldCtx::elements() const {
  if (kind_ == FieldKind::rational) throw std::invalid_argument("Q is infinite");
  std::vector<Elem> out;
  out.reserve(order_);
  for (std::uint64_t c = 0; c < order_; ++c) out.push_back(Elem(this, c));
  return out;
}

Field make_field(const FieldSpec& s) {
  switch (s.kind) {
    case FieldKind::rational:
      return rational_field();
    case FieldKind::prime:
      if (!is_prime_u64(s.p) || s.p >= (std::uint64_t{1} << 32))
        throw std::invalid_argument("p must be a prime below 2^32");
      return galois_field(s.p, 1);
    case FieldKind::extension:
      if (!is_prime_u64(s.p) || s.p >= (std::uint64_t{1} << 32))
        throw std::invalid_argument("p must be a prime below 2^32");
      if (s.degree < 1 || s.degree > 6) throw std::invalid_argument("extension degree must be 1..6");
      return extension_field(s.p, s.degree, s.modulus);
  }
  throw std::invalid_argument("unknown field kind");
}

Field prime_field(std::uint64_t p) {
  if (!is_prime_u64(p) || p >= (std::uint64_t{1} << 32))
    throw std::invalid_argument("p must be a prime below 2^32");
  return galois_field(p, 1);
}

Field rational_field() {
  return cached(FieldKind::rational, 0, 1, {});
}

Field extension_field(std::uint64_t p, unsigned degree, std::vector<std::uint64_t> modulus) {
  if (modulus.empty()) return galois_field(p, degree);
  if (modulus.size() != degree + 1 || modulus.back() != 1)
    throw std::invalid_argument("modulus must be monic of the field degree");
  for (auto c : modulus)
    if (c >= p) throw std::invalid_argument("modulus coefficient out of range");
  if (!is_irreducible_mod_p(modulus, p)) throw std::invalid_argument("modulus is reducible");
  if (degree == 1) return galois_field(p, 1);
  return cached(FieldKind::extension, p, degree, std::move(modulus));
}

Field galois_field(std::uint64_t p, unsigned degree) {
  if (!is_prime_u64(p)) throw std::invalid_argument("p must be prime");
  if (degree == 0) throw std::invalid_argument("degree must be positive");
  unsigned __int128 q = 1;
  for (unsigned i = 0; i < degree; ++i) {
    q *= p;
    if (q >= kMaxOrder) throw std::invalid_argument("field order exceeds 2^62");
  }
  if (degree == 1) return cached(FieldKind::prime, p, 1, {0, 1});
  return cached(FieldKind::extension, p, degree, default_modulus(p, degree));
}

// ---- Elem

bool Elem::is_zero() const {
  if (auto c = std::get_if<std::uint64_t>(&v_)) return *c == 0;
  return std::get<mpq_class>(v_) == 0;
}

bool Elem::is_one() const {
  if (auto c = std::get_if<std::uint64_t>(&v_)) return *c == 1;
  return std::get<mpq_class>(v_) == 1;
}

namespace {
void same_field(const FieldCtx* a, const FieldCtx* b) {
  if (a != b) throw std::invalid_argument("elements of different fields");
}
}  // namespace

Elem Elem::operator+(const Elem& o) const {
  same_field(f_, o.f_);
  if (auto c = std::get_if<std::uint64_t>(&v_)) return Elem(f_, f_->add_c(*c, std::get<std::uint64_t>(o.v_)));
  return Elem(f_, mpq_class(std::get<mpq_class>(v_) + std::get<mpq_class>(o.v_)));
}

Elem Elem::operator-(const Elem& o) const {
  same_field(f_, o.f_);
  if (auto c = std::get_if<std::uint64_t>(&v_)) return Elem(f_, f_->sub_c(*c, std::get<std::uint64_t>(o.v_)));
  return Elem(f_, mpq_class(std::get<mpq_class>(v_) - std::get<mpq_class>(o.v_)));
}

Elem Elem::operator*(const Elem& o) const {
  same_field(f_, o.f_);
  if (auto c = std::get_if<std::uint64_t>(&v_)) return Elem(f_, f_->mul_c(*c, std::get<std::uint64_t>(o.v_)));
  return Elem(f_, mpq_class(std::get<mpq_class>(v_) * std::get<mpq_class>(o.v_)));
}

Elem Elem::operator/(const Elem& o) const { return *this * o.inv(); }

Elem Elem::operator-() const {
  if (auto c = std::get_if<std::uint64_t>(&v_)) return Elem(f_, f_->neg_c(*c));
  return Elem(f_, mpq_class(-std::get<mpq_class>(v_)));
}

Elem Elem::inv() const {
  if (auto c = std::get_if<std::uint64_t>(&v_)) return Elem(f_, f_->inv_c(*c));
  const auto& q = std::get<mpq_class>(v_);
  if (q == 0) throw std::domain_error("inverse of zero");
  return Elem(f_, mpq_class(1 / q));
}

Elem Elem::pow_u(std::uint64_t e) const {
  if (auto c = std::get_if<std::uint64_t>(&v_)) return Elem(f_, f_->pow_c(*c, e));
  mpq_class r = 1, b = std::get<mpq_class>(v_);
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return Elem(f_, r);
}

Elem Elem::pow(std::int64_t e) const {
  if (e < 0) return inv().pow_u(static_cast<std::uint64_t>(-e));
  return pow_u(static_cast<std::uint64_t>(e));
}

Elem Elem::frobenius() const {
  if (!f_->is_finite()) return *this;
  return pow_u(f_->characteristic());
}

std::uint64_t Elem::code() const {
  if (auto c = std::get_if<std::uint64_t>(&v_)) return *c;
  throw std::invalid_argument("rational element has no code");
}

const mpq_class& Elem::rational() const {
  if (auto q = std::get_if<mpq_class>(&v_)) return *q;
  throw std::invalid_argument("finite-field element is not rational");
}

std::vector<std::uint64_t> Elem::coeffs() const {
  std::vector<std::uint64_t> d(f_->degree());
  f_->decode(code(), d.data());
  return d;
}

std::string Elem::to_string() const {
  if (!f_) return "<null>";
  if (!f_->is_finite()) return std::get<mpq_class>(v_).get_str();
  if (f_->degree() == 1) return std::to_string(code());
  auto d = coeffs();
  std::string s;
  for (unsigned i = f_->degree(); i-- > 0;) {
    if (!d[i]) continue;
    if (!s.empty()) s += "+";
    std::string mono = i == 0 ? "" : (i == 1 ? "g" : "g^" + std::to_string(i));
    if (d[i] != 1 || i == 0) s += std::to_string(d[i]) + (mono.empty() ? "" : "*");
    s += mono;
  }
  return s.empty() ? "0" : s;
}

bool Elem::operator==(const Elem& o) const {
  if (f_ != o.f_) return false;
  if (auto c = std::get_if<std::uint64_t>(&v_)) return *c == std::get<std::uint64_t>(o.v_);
  return cmp(std::get<mpq_class>(v_), std::get<mpq_class>(o.v_)) == 0;
}

bool Elem::operator<(const Elem& o) const {
  if (auto c = std::get_if<std::uint64_t>(&v_)) return *c < std::get<std::uint64_t>(o.v_);
  return std::get<mpq_class>(v_) < std::get<mpq_class>(o.v_);
}

unsigned degree_over(const Elem& x, std::uint64_t q) {
  const FieldCtx* f = x.field();
  if (!f->is_finite()) return 1;
  Elem y = x;
  for (unsigned k = 1; k <= 64; ++k) {
    y = y.pow_u(q);
    if (y == x) return k;
  }
  throw std::logic_error("degree_over: no fixed Frobenius power");
}

}  // namespace nagata
