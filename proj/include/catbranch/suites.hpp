#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "catbranch/oracles.hpp"

namespace catbranch {

struct SuiteOptions {
  std::uint64_t seed = 1;                 // master seed; each criterion derives its own stream
  unsigned jobs = 1;
  std::optional<std::size_t> replicas;   // overrides the criterion's default replica count
};

struct CriterionResult {
  int id = 0;
  std::string name;
  std::string title;
  std::vector<OracleReport> reports;
  std::vector<std::string> notes;  // diagnostics that do not gate the result
  double seconds = 0.0;
  bool pass() const;
};

constexpr int kCriteria = 14;
CriterionResult run_criterion(int id, const SuiteOptions& opt);

// Suite names used by the CLI ("extinction", "hitting_prob", ...).
const std::vector<std::string>& suite_names();
int suite_id(const std::string& name);

}  // namespace catbranch
