#pragma once

// Randomized invariant suite over the TGSM-pumped SPDC model.

#include "twistspdc/sweep.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace twistspdc {

struct VerifyOptions {
  int trials = 1000;
  std::uint64_t seed = 20201;
  /// Replaces every check tolerance when set (harness self-test).
  std::optional<double> tolerance_override;
};

/// One random parameter point. sigma log-uniform on [10 um, 1 mm], beta
/// log-uniform on [0.01, 1], t uniform on [0, 1], L log-uniform on
/// [1 mm, 3 cm], inv_R * sigma uniform on [0, 1e-2], random twist sign,
/// wavelength 400 nm.
struct VerifyPoint {
  Setup setup;
  NormalizedPoint point;
};

std::vector<VerifyPoint> verify_points(int trials, std::uint64_t seed);

struct CheckResult {
  std::string name;
  double tolerance = 0.0;
  double worst = 0.0;
  int evaluated = 0;
  int failures = 0;
  std::string first_failure;

  bool passed() const { return failures == 0 && evaluated > 0; }
};

struct VerifyResult {
  std::vector<CheckResult> checks;
  double seconds = 0.0;

  bool passed() const;
};

VerifyResult run_verify(const VerifyOptions& options);

void print_verify_table(std::ostream& out, const VerifyResult& result);

std::string describe(const VerifyPoint& p);

}  // namespace twistspdc
