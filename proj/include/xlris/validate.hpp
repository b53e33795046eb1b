#ifndef XLRIS_VALIDATE_HPP
#define XLRIS_VALIDATE_HPP

#include <string>
#include <vector>

#include "xlris/config.hpp"

namespace xlris {

struct CheckResult {
  std::string name;
  double value = 0.0; // measured error / quantity
  double bound = 0.0; // value must be <= bound
  bool pass = false;
};

/// Runs the algebraic-identity suite (unitarity, aggregation, face-splitting
/// chain, vectorization, frequency remappings, steering decomposition,
/// observation-path consistency, realized SNR). Requires N <= 64 because the
/// aggregation check materializes the full N x N^2 factor.
std::vector<CheckResult> validate_identities(const SystemConfig& cfg);

}  // namespace xlris

#endif
