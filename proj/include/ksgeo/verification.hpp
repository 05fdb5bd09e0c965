// ksgeo - acceptance-criteria engine and the KS identity sweep, shared by the
// verify/ks-check CLI commands and the acceptance test binary.
//
// Reports are fully deterministic for a fixed seed: no timestamps or measured
// durations enter them, only residuals and pass flags.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace ksgeo {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string details;
};

struct VerificationReport {
  bool quick = false;
  std::uint64_t seed = 0;
  std::vector<CriterionResult> criteria;
  bool all_passed = false;
};

// Runs the ten acceptance criteria (quick mode divides random-sample counts
// by ten). Criterion 10 re-runs criteria 1-9 in quick mode twice and checks
// the serialized reports agree byte for byte within the time budget.
VerificationReport run_verification(bool quick, std::uint64_t seed);

nlohmann::json verification_report_json(const VerificationReport& report);

struct IdentityCheck {
  std::string name;
  double max_residual = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct KsCheckReport {
  int samples = 0;
  std::uint64_t seed = 0;
  std::vector<IdentityCheck> identities;
  bool all_passed = false;
};

// Pseudorandom sweep of the KS identities: matrix orthogonality, coordinate
// and velocity norm transport, energy-shell transport, fiber invariance.
KsCheckReport run_ks_check(int samples, std::uint64_t seed);

nlohmann::json ks_check_json(const KsCheckReport& report);

}  // namespace ksgeo
