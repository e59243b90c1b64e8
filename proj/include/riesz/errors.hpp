#pragma once

#include <stdexcept>
#include <string>

namespace riesz {

/// Raised for malformed or out-of-range input: unknown atoms, indices past the
/// horizon, non-positive weights, unparsable scenario files.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace riesz
