#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace stereobench {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Self-check of the diffusion kernels: EC-loss gradient against central
/// finite differences, constant-offset and lower-bound properties, the
/// noising/velocity round trip and rotation identity, and DDIM consistency
/// against a denoiser that returns the true velocity.
std::vector<CheckResult> run_losscheck(std::uint64_t seed);

}  // namespace stereobench
