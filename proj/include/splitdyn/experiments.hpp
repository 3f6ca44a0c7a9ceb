#pragma once

// Named batch scenarios with machine-readable pass/fail checks.

#include <string>
#include <vector>

#include "splitdyn/io.hpp"

namespace splitdyn {

struct ExperimentSpec {
  std::string scenario;
  /// Scenario-specific overrides; see experiment_names() for the list.
  json parameters = json::object();
};

struct ExperimentCheck {
  std::string name;
  bool passed = false;
  json detail;
};

struct ExperimentReport {
  std::string scenario;
  std::vector<ExperimentCheck> checks;
  json artifacts = json::object();
  double seconds = 0.0;

  bool passed() const;
  /// Everything except the wall time, so reruns compare equal.
  json to_json() const;
};

std::vector<std::string> experiment_names();

/// Throws PreconditionViolated for an unknown scenario.
ExperimentReport run_experiment(const ExperimentSpec& spec);

}  // namespace splitdyn
