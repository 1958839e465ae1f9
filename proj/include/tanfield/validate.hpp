#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tanfield/model.hpp"

namespace tanfield::validation {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Cross-module invariant suite: special-function identities, quadrature and
// transform exactness, addition theorem, covariance structure, sampler
// determinism. Fast enough for the CLI front door.
std::vector<CheckResult> run_all(const model::ModelParams& params,
                                 const model::PowerSpectra& spectra,
                                 std::uint64_t seed);

}  // namespace tanfield::validation
