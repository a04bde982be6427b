#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nagata/field.hpp"

namespace nagata {

class UniPoly {
 public:
  explicit UniPoly(Field f);
  UniPoly(Field f, std::vector<Elem> coeffs);  // low to high

  static UniPoly x(const Field& f);
  static UniPoly constant(const Elem& c, const Field& f);

  const Field& field() const { return f_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Elem>& coeffs() const { return c_; }
  Elem coeff(std::size_t i) const;
  Elem lead() const;

  UniPoly operator+(const UniPoly& o) const;
  UniPoly operator-(const UniPoly& o) const;
  UniPoly operator*(const UniPoly& o) const;
  UniPoly scale(const Elem& c) const;
  bool operator==(const UniPoly& o) const { return c_ == o.c_; }

  void divmod(const UniPoly& d, UniPoly& q, UniPoly& r) const;
  UniPoly operator%(const UniPoly& d) const;
  UniPoly operator/(const UniPoly& d) const;
  UniPoly monic() const;
  UniPoly derivative() const;
  Elem eval(const Elem& x) const;

  std::string to_string(const std::string& var = "t") const;

 private:
  void trim();
  Field f_;
  std::vector<Elem> c_;
};

UniPoly poly_gcd(UniPoly a, UniPoly b);
UniPoly mulmod(const UniPoly& a, const UniPoly& b, const UniPoly& m);
UniPoly powmod(const UniPoly& base, std::uint64_t e, const UniPoly& m);
// f(x) = g(x^p) -> g^(1/p) coefficientwise
UniPoly pth_root(const UniPoly& f);
// product of the distinct monic irreducible factors
UniPoly radical(const UniPoly& f);
bool is_squarefree(const UniPoly& f);
// number of distinct roots of f in the degree-m extension of its field
std::size_t count_roots_in_extension(const UniPoly& f, unsigned m);
// distinct roots in the coefficient field, sorted by code / value
std::vector<Elem> roots(const UniPoly& f);
// map coefficients through an embedding
UniPoly map_poly(const UniPoly& f, const Embedding& e);

}  // namespace nagata
