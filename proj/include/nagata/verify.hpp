#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace nagata {

struct CriterionInfo {
  int id = 0;
  std::string key;
  std::string title;
  std::vector<std::string> tags;
};

struct CheckLine {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CriterionResult {
  CriterionInfo info;
  bool passed = false;
  std::vector<CheckLine> checks;
  std::int64_t millis = 0;

  nlohmann::json to_json() const;
};

const std::vector<CriterionInfo>& acceptance_criteria();
// Empty filter selects everything; otherwise comma-separated ids, keys or tags.
bool criterion_selected(const CriterionInfo& c, const std::string& filter);
std::vector<CriterionResult> run_acceptance(const std::string& filter = "", const std::string& data_dir = "");

}  // namespace nagata
