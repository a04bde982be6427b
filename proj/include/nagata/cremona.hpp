#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nagata/config.hpp"
#include "nagata/forms.hpp"
#include "nagata/matrix.hpp"

namespace nagata {

// An unchosen point on a hyperplane spanned by r-1 chosen points, or dependent chosen points.
class CremonaError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct CremonaStep {
  std::vector<std::size_t> subset;  // 0-based
  Matrix transform;                 // inverse of the chosen columns
};

// Chosen points become the coordinate points in subset order; the rest go through x_j -> 1/x_j.
PointConfig standard_cremona(const PointConfig& cfg, const std::vector<std::size_t>& subset,
                             Matrix* transform = nullptr);
bool cremona_step_legal(const PointConfig& cfg, const std::vector<std::size_t>& subset);

enum class WalkStrategy { exhaustive, random };

struct WalkFailure {
  std::size_t depth = 0;
  std::vector<std::vector<std::size_t>> path;  // subsets applied from the start
  std::string reason;
};

struct WalkResult {
  bool survived = false;
  // "lgp": linear general position is checked after every step.
  // "base_locus": smooth pencil/net base locus with fixed rho is checked; illegal steps are skipped.
  std::string mode;
  std::vector<CremonaStep> log;  // random walks: the steps taken
  std::optional<WalkFailure> failure;
  std::vector<std::size_t> configs_per_depth;  // new configurations up to projective equivalence
  std::size_t steps_applied = 0;
  std::size_t steps_skipped = 0;
  std::optional<int> rho;
};

WalkResult cremona_walk(const PointConfig& cfg, int depth, WalkStrategy strategy, std::uint64_t seed = 1);

enum class VerdictStatus { infinite_generation, finite_generation, undetermined };
std::string to_string(VerdictStatus s);

struct Verdict {
  VerdictStatus status = VerdictStatus::undetermined;
  std::optional<int> rho;
  std::optional<int> a, b;
  std::string reason;
  nlohmann::json certificate = nlohmann::json::object();
  std::vector<std::string> citations;

  nlohmann::json to_json() const;
};

Verdict analyze_cubic_config(const PointConfig& cfg);
Verdict analyze_quadric_config(const PointConfig& cfg);
// Throws std::invalid_argument unless cfg is a smooth pencil base locus with no collinear triple.
Verdict certify_dim5(const PointConfig& cfg);

// The geometric base points of a smooth system as one configuration over their common field.
PointConfig split_base_locus(const FormSystem& sys);

}  // namespace nagata
