#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nagata/config.hpp"
#include "nagata/field.hpp"
#include "nagata/matrix.hpp"
#include "nagata/mpoly.hpp"

namespace nagata {

// A homogeneous form; the zero form has no degree and is rejected.
using MultiForm = MPoly;

class FormSystem {
 public:
  FormSystem(Field f, unsigned nvars, unsigned degree, std::vector<MPoly> basis);

  const Field& field() const { return f_; }
  unsigned nvars() const { return n_; }
  unsigned degree() const { return d_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<MPoly>& basis() const { return basis_; }
  // linear combination sum c_i basis_i
  MPoly member(const std::vector<Elem>& c) const;
  FormSystem map_field(const Embedding& e) const;

 private:
  Field f_;
  unsigned n_, d_;
  std::vector<MPoly> basis_;
};

// Rows (over monomials(r, degree)) forcing vanishing to order >= order at p,
// read off the expansion in the affine chart of p's first nonzero coordinate.
std::vector<std::vector<Elem>> vanishing_conditions(unsigned degree, const std::vector<Elem>& p, int order);

FormSystem forms_through_points(const Field& f, unsigned r, unsigned degree,
                                const std::vector<std::vector<Elem>>& points, const std::vector<int>& multiplicities);
std::size_t h0(const PointConfig& cfg, int a, const std::vector<int>& b);

struct BasePoint {
  Field field;               // minimal field of definition over the system's field
  std::vector<Elem> coords;  // normalized
  unsigned degree = 1;       // [field : ground field]
  unsigned multiplicity = 1;
};

// Common zeros over extensions of degree <= max_ext, one entry per geometric point,
// ordered by degree then coordinates.
// Throws std::domain_error if the base locus is not 0-dimensional of the expected degree.
std::vector<BasePoint> base_locus(const FormSystem& sys, unsigned max_ext);

struct SmoothnessReport {
  bool smooth = false;
  std::string reason;
  std::size_t geometric_points = 0;
};
SmoothnessReport is_smooth_zero_dim(const FormSystem& sys);

struct LinearFactor {
  Field field;
  std::vector<Elem> coeffs;  // over `field`
};
// Cubics in 3 variables and quadrics in 4 variables over finite fields; quadrics also over Q.
bool is_absolutely_irreducible(const MPoly& f);
std::optional<LinearFactor> find_linear_factor_cubic(const MPoly& f);

struct ReducibleMember {
  std::vector<Elem> coefficients;  // projective coordinates in the system basis
  MPoly form;
};
struct IrreducibilityReport {
  bool all_irreducible = true;
  std::size_t members_tested = 0;
  std::vector<ReducibleMember> reducible_members;
  std::string route;  // "members", "incidence", or "members+incidence"
};
// Throws InconsistencyError if both routes run and disagree.
IrreducibilityReport pencil_net_irreducible(const FormSystem& sys, const PointConfig* cfg);

std::vector<Elem> ninth_base_point(const PointConfig& eight);
std::vector<Elem> eighth_base_point(const PointConfig& seven);

}  // namespace nagata
