#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "nagata/field.hpp"
#include "nagata/matrix.hpp"

namespace nagata {

// scale so the first nonzero coordinate is 1; throws on the zero vector
std::vector<Elem> normalize_point(std::vector<Elem> v);

// n points of P^{r-1}, stored as the columns of an r x n matrix, normalized.
class PointConfig {
 public:
  static PointConfig create(const Field& f, std::size_t r, const std::vector<std::vector<Elem>>& points);
  static PointConfig from_matrix(const Matrix& columns);

  const Field& field() const { return m_.field(); }
  std::size_t r() const { return m_.rows(); }
  std::size_t n() const { return m_.cols(); }
  const Matrix& coords() const { return m_; }
  std::vector<Elem> point(std::size_t i) const { return m_.col(i); }
  std::vector<std::vector<Elem>> points() const;
  // subset in the given order; no size checks beyond distinctness
  PointConfig select(const std::vector<std::size_t>& idx) const;
  PointConfig map_field(const Embedding& e) const;
  std::optional<std::size_t> index_of(const std::vector<Elem>& p) const;

 private:
  explicit PointConfig(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

struct LgpReport {
  bool in_general_position = true;
  std::vector<std::size_t> witness;  // a dependent r-subset
};
LgpReport in_linear_general_position(const PointConfig& cfg);

struct IncidenceReport {
  std::size_t r = 0;
  std::vector<std::vector<std::size_t>> dependent_subsets;  // collinear triples / coplanar quadruples
  std::size_t a = 0;                                       // their count
  std::size_t b = 0;                                       // partitions into three collinear triples (r=3, n=9)
  std::vector<std::array<std::size_t, 3>> partition_witnesses;
};
IncidenceReport incidences(const PointConfig& cfg);

// association: columns of the reduced echelon kernel basis of the coordinate matrix
PointConfig dualize(const PointConfig& cfg);
// quadratic Veronese map P^2 -> P^5, monomials x^2, xy, xz, y^2, yz, z^2
PointConfig veronese_embed(const PointConfig& cfg);

struct Equivalence {
  Matrix transform;                  // maps points of the first config to the second
  std::vector<std::size_t> permutation;  // point i of the first -> point permutation[i] of the second
};
std::optional<Equivalence> config_equivalent(const PointConfig& a, const PointConfig& b, bool allow_permutation);

// orbits of x -> x^q acting on the points; cfg must be over an extension of F_q
std::vector<std::vector<std::size_t>> frobenius_orbits(const PointConfig& cfg, std::uint64_t q);

std::string point_to_string(const std::vector<Elem>& p);

}  // namespace nagata
