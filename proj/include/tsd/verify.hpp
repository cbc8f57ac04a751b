#pragma once

// The acceptance suite. Each criterion computes its check end to end and reports the
// observed worst case next to the tolerance it is held to.

#include "tsd/kernels.hpp"
#include "tsd/params_io.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tsd {

struct VerifyConfig {
  std::uint64_t seed = 42;
  /// Monte Carlo size of the covariance-identity check.
  std::size_t samples = 1000000;
  Exec exec = Exec::parallel;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  Json tolerance = Json::object();
  Json observed = Json::object();
  Json details = Json::object();
  /// Wall time; kept out of the report so reruns compare equal.
  double seconds = 0.0;
};

inline constexpr int kCriteria = 13;

/// Criterion `id` in 1..13. Numerical failures inside a check are caught and turn
/// into a FAIL with the message in details.error.
CriterionResult run_criterion(int id, const VerifyConfig& config);

Json to_json(const CriterionResult& r);
Json to_json(const VerifyConfig& c);

/// {"command", "config", "seed", "timestamp", "criteria", "passed"}.
Json verify_report(const std::vector<CriterionResult>& results, const VerifyConfig& config,
                   const std::string& timestamp);

/// Equality of two verify reports with the timestamp field removed.
bool same_report(Json a, Json b);

}  // namespace tsd
