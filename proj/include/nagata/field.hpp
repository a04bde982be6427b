#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <gmpxx.h>

namespace nagata {

enum class FieldKind { prime, extension, rational };

struct FieldSpec {
  FieldKind kind = FieldKind::prime;
  std::uint64_t p = 0;
  unsigned degree = 1;
  // low-to-high coefficients of a monic modulus; empty selects the default
  std::vector<std::uint64_t> modulus;
};

class FieldCtx;
using Field = std::shared_ptr<const FieldCtx>;

// An element carries a raw pointer to its field; the field must outlive it.
class Elem {
 public:
  Elem() = default;

  const FieldCtx* field() const { return f_; }
  bool valid() const { return f_ != nullptr; }
  bool is_zero() const;
  bool is_one() const;

  Elem operator+(const Elem& o) const;
  Elem operator-(const Elem& o) const;
  Elem operator*(const Elem& o) const;
  Elem operator/(const Elem& o) const;
  Elem operator-() const;
  Elem& operator+=(const Elem& o) { return *this = *this + o; }
  Elem& operator-=(const Elem& o) { return *this = *this - o; }
  Elem& operator*=(const Elem& o) { return *this = *this * o; }

  Elem inv() const;
  Elem pow(std::int64_t e) const;
  Elem pow_u(std::uint64_t e) const;
  Elem frobenius() const;  // x -> x^p

  std::uint64_t code() const;
  const mpq_class& rational() const;
  std::vector<std::uint64_t> coeffs() const;  // over F_p, low to high

  std::string to_string() const;

  bool operator==(const Elem& o) const;
  bool operator!=(const Elem& o) const { return !(*this == o); }
  bool operator<(const Elem& o) const;

 private:
  friend class FieldCtx;
  Elem(const FieldCtx* f, std::uint64_t c) : f_(f), v_(c) {}
  Elem(const FieldCtx* f, mpq_class q) : f_(f), v_(std::move(q)) {}

  const FieldCtx* f_ = nullptr;
  std::variant<std::uint64_t, mpq_class> v_;
};

class FieldCtx : public std::enable_shared_from_this<FieldCtx> {
 public:
  FieldCtx(FieldKind kind, std::uint64_t p, unsigned degree,
           std::vector<std::uint64_t> modulus);

  FieldKind kind() const { return kind_; }
  bool is_finite() const { return kind_ != FieldKind::rational; }
  std::uint64_t characteristic() const { return p_; }
  unsigned degree() const { return degree_; }
  std::uint64_t order() const { return order_; }
  const std::vector<std::uint64_t>& modulus() const { return modulus_; }
  FieldSpec spec() const;
  std::string name() const;
  bool same_as(const FieldCtx& o) const;

  Elem zero() const;
  Elem one() const;
  Elem from_int(std::int64_t v) const;
  Elem from_code(std::uint64_t c) const;
  Elem from_coeffs(const std::vector<std::int64_t>& c) const;
  Elem from_rational(const mpq_class& q) const;
  Elem gen() const;
  // decimal integer or "a/b"; rationals only for Q, integers reduce mod p
  Elem parse(std::string_view s) const;
  // every element of a finite field in code order
  std::vector<Elem> elements() const;

  // code-level arithmetic for finite fields
  std::uint64_t add_c(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t sub_c(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t neg_c(std::uint64_t a) const;
  std::uint64_t mul_c(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t inv_c(std::uint64_t a) const;
  std::uint64_t pow_c(std::uint64_t a, std::uint64_t e) const;
  std::uint64_t encode(const std::uint64_t* digits) const;
  void decode(std::uint64_t c, std::uint64_t* digits) const;

 private:
  std::uint64_t mul_poly(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t add_digits(std::uint64_t a, std::uint64_t b, bool sub) const;
  void build_tables();

  FieldKind kind_;
  std::uint64_t p_ = 0;
  unsigned degree_ = 1;
  std::uint64_t order_ = 0;
  std::vector<std::uint64_t> modulus_;
  std::vector<std::uint64_t> ppow_;
  bool tables_ = false;
  std::vector<std::uint32_t> exp_, log_, zech_;
};

// Public constructor: validates primality, degree <= 6, irreducible modulus.
Field make_field(const FieldSpec& spec);
Field prime_field(std::uint64_t p);
Field rational_field();
Field extension_field(std::uint64_t p, unsigned degree,
                      std::vector<std::uint64_t> modulus = {});
// Cached field with the default modulus; larger degrees allowed while p^d < 2^62.
Field galois_field(std::uint64_t p, unsigned degree);

bool is_prime_u64(std::uint64_t n);
std::vector<std::uint64_t> prime_factors(std::uint64_t n);
// Rabin test over F_p
bool is_irreducible_mod_p(const std::vector<std::uint64_t>& monic, std::uint64_t p);
std::vector<std::uint64_t> default_modulus(std::uint64_t p, unsigned degree);

// Subfield embedding F_{p^a} -> F_{p^b}, a | b.
class Embedding {
 public:
  Embedding(Field from, Field to);
  const Field& from() const { return from_; }
  const Field& to() const { return to_; }
  Elem map(const Elem& x) const;
  bool in_image(const Elem& y) const;
  Elem preimage(const Elem& y) const;  // throws if not in the image

 private:
  Field from_, to_;
  std::vector<Elem> gen_pows_;
  std::vector<std::vector<std::uint64_t>> basis_;  // digits of gen^i in `to`
};

// degree over F_q of the smallest subfield of F_{q^m} containing x (x in an
// F_{q^m} context whose order is a power of q)
unsigned degree_over(const Elem& x, std::uint64_t q);

}  // namespace nagata
