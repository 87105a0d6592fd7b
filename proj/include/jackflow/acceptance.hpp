#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "jackflow/statcheck.hpp"

namespace jackflow::acceptance {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;  // one-line summary of the measured quantities
  double runtime_s = 0.0;
  double budget_s = 0.0;  // 0 when no numeric runtime bound applies
  std::vector<TestReport> reports;
};

constexpr int kCriteria = 11;

/// Runs criterion id (1..11) at full size. Seeds derive from `seed` and id.
CriterionResult run(int id, std::uint64_t seed = 20240601, int workers = 0);

/// Criteria belonging to a verify suite: identities | rates | convergence |
/// intertwining | sde | all. Throws std::invalid_argument for unknown names.
std::vector<int> suite(std::string_view name);

/// "[PASS] 3 Jack measure ...: detail (1.2 s)".
std::string summary_line(const CriterionResult& r);

}  // namespace jackflow::acceptance
