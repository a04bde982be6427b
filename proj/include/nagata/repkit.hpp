#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nagata/config.hpp"
#include "nagata/field.hpp"
#include "nagata/matrix.hpp"
#include "nagata/mpoly.hpp"

namespace nagata {

// (G_a)^{n-r} inside (G_a)^n acting on A^{2n} = {(x, y)} by y_i += t_i x_i, t in ker(point_matrix).
struct GaRepresentation {
  Field field;
  std::size_t n = 0, r = 0;
  Matrix point_matrix;    // r x n
  Matrix subgroup_basis;  // (n-r) x n, reduced echelon, rows span the kernel

  std::size_t dimension() const { return 2 * n; }
  std::size_t group_rank() const { return subgroup_basis.rows(); }
  // 2n x 2n matrices [[I, 0], [diag(v_k), I]] on the column vector (x, y)
  std::vector<Matrix> generators() const;
  nlohmann::json to_json() const;
};

GaRepresentation build_representation(const PointConfig& cfg);
// point matrix taken verbatim (no normalization of columns)
GaRepresentation build_representation(const Matrix& point_matrix);
// given subgroup rows; throws unless they form a basis of the kernel
GaRepresentation representation_from_rows(const Matrix& point_matrix, const Matrix& rows);

std::vector<Elem> group_act(const GaRepresentation& rep, const std::vector<Elem>& t, const std::vector<Elem>& point);

// variables x_1..x_n, y_1..y_n
std::vector<std::string> pair_var_names(std::size_t n);
bool is_invariant(const GaRepresentation& rep, const MPoly& f);
// invariants with deg_{x_i} + deg_{y_i} = c_i and total y-degree a
std::size_t invariant_dimension(const GaRepresentation& rep, const std::vector<int>& c, int a);
// u_j = sum_i M_ji y_i prod_{k != i} x_k
MPoly u_form(const GaRepresentation& rep, std::size_t j);
MPoly section_to_invariant(const GaRepresentation& rep, const MPoly& F, const std::vector<int>& b);

struct TwistedRepresentation {
  Field base, ext;
  std::size_t n = 0, r = 0;
  std::vector<std::vector<std::size_t>> orbits;  // each in Frobenius order
  Matrix basis_change;                           // n x n over ext; columns are the Frobenius-fixed basis
  Matrix subgroup_basis;                         // (n-r) x n over base, coordinates in that basis
  std::vector<Matrix> blocks;                    // n x n over base: y' = y + A_k x
  std::vector<Matrix> companions;                // per orbit: multiplication by its lambda
  std::vector<Matrix> generators() const;        // 2n x 2n over base
  nlohmann::json to_json() const;
};

// Galois descent from F_{p^d} (d = 2 or 3) to F_p using orbit blocks e_i -> sum_s phi^s(lambda^a) e_{sigma^s(i)}.
TwistedRepresentation twist_representation(const GaRepresentation& rep, const Field& base);
// Base change to ext and conjugation by diag(B, B) gives diagonal generators with t in ker(point_matrix)
// spanning the whole kernel.
// B^{-1} diag(t) B over the base field, for a Frobenius-compatible t in ker(point_matrix)
Matrix twisted_block(const TwistedRepresentation& tw, const std::vector<Elem>& t);
// per orbit: scalars for 1x1 blocks and scalar diagonal blocks, nested matrices otherwise
nlohmann::json block_format(const TwistedRepresentation& tw, const Matrix& A);
bool twist_matches_diagonal(const TwistedRepresentation& tw, const GaRepresentation& rep);
bool generators_commute(const std::vector<Matrix>& gens);
// (g - 1)^2 = 0 for every generator
bool generators_unipotent(const std::vector<Matrix>& gens);

struct CrossCheckCell {
  std::vector<int> c;
  int a = 0;
  std::size_t invariant_dim = 0;
  std::size_t h0_dim = 0;
  bool equal() const { return invariant_dim == h0_dim; }
};

struct CrossCheckReport {
  std::size_t cells = 0;
  std::size_t equal_cells = 0;
  std::size_t skipped_cells = 0;  // basis above the size limit
  std::vector<CrossCheckCell> mismatches;
  std::vector<CrossCheckCell> rows;  // every cell when requested
  bool all_equal() const { return mismatches.empty() && cells > 0; }
};

// Every cell with 0 <= a <= max_a and c in {0..max_c}^n whose monomial basis has at most basis_limit elements.
CrossCheckReport mukai_cross_check(const GaRepresentation& rep, const PointConfig& cfg, int max_a, int max_c,
                                   std::size_t basis_limit = 10000, bool keep_rows = false);

}  // namespace nagata
