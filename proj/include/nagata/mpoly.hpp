#pragma once

#include <map>
#include <string>
#include <vector>

#include "nagata/field.hpp"

namespace nagata {

using Exps = std::vector<int>;

class MPoly {
 public:
  MPoly(Field f, unsigned nvars);
  static MPoly var(const Field& f, unsigned nvars, unsigned i);
  static MPoly constant(const Elem& c, const Field& f, unsigned nvars);

  const Field& field() const { return f_; }
  unsigned nvars() const { return n_; }
  const std::map<Exps, Elem>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  int total_degree() const;  // -1 for zero
  bool is_homogeneous() const;
  Elem coeff(const Exps& e) const;
  void add_term(const Exps& e, const Elem& c);

  MPoly operator+(const MPoly& o) const;
  MPoly operator-(const MPoly& o) const;
  MPoly operator*(const MPoly& o) const;
  MPoly operator-() const;
  MPoly scale(const Elem& c) const;
  MPoly pow(unsigned k) const;
  bool operator==(const MPoly& o) const { return n_ == o.n_ && t_ == o.t_; }

  Elem eval(const std::vector<Elem>& x) const;
  // x_i -> images[i]; images live in a common ring, possibly over another field
  MPoly substitute(const std::vector<MPoly>& images) const;
  MPoly derivative(unsigned i) const;
  MPoly map_coeffs(const Embedding& e) const;
  // coefficients on a list of monomials
  std::vector<Elem> dense(const std::vector<Exps>& basis) const;

  std::string to_string(const std::vector<std::string>& names = {}) const;

 private:
  Field f_;
  unsigned n_;
  std::map<Exps, Elem> t_;
};

// all exponent vectors of the given total degree, lexicographically descending
std::vector<Exps> monomials(unsigned nvars, unsigned degree);
std::size_t binomial(std::size_t n, std::size_t k);
std::vector<std::string> default_var_names(unsigned nvars);
// integers, fractions, `g` (field generator), variables, + - * ^ and parentheses
MPoly parse_mpoly(const Field& f, const std::vector<std::string>& names, const std::string& text);

}  // namespace nagata
