#pragma once

#include <stdexcept>

namespace nagata {

// Two independent computations disagreed; never expected on valid input.
class InconsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace nagata
