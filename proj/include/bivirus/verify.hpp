#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bivirus/config.hpp"

namespace bivirus {

struct PropertyResult {
  std::string name;
  std::size_t cases = 0;
  bool passed = true;
  std::string counterexample;  ///< first failing case, empty when passed
};

struct VerifySummary {
  std::vector<PropertyResult> properties;

  bool all_passed() const;
};

/// Runs the randomized invariant checks of every module on models with up to
/// opts.max_nodes nodes. Deterministic for a given seed.
VerifySummary run_property_suite(const VerifyOptions& opts);

}  // namespace bivirus
