#pragma once

#include "finsler/io.hpp"
#include "finsler/metric_model.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace finsler {

struct CriterionResult {
  std::string suite;
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  std::string relation = "<=";  // measured <relation> threshold
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct SuiteReport {
  std::string name;
  std::uint64_t seed = 0;
  std::vector<CriterionResult> criteria;
  int failures() const;
  double seconds() const;
  /// Wall times are included only when `timing` is set, so that reports of
  /// identical runs are byte-identical by default.
  Json to_json(bool timing = false) const;
};

std::vector<std::string> suite_names();

/// Runs one registered suite, or every suite for "all". Throws UsageError
/// listing the registered names for anything else.
SuiteReport run_suite(const std::string& name, std::uint64_t seed, const Tolerances& tolerances = {});

/// One representative model per closed-form family (everything but
/// tabulated), with position-dependent coefficients.
std::vector<std::pair<std::string, MetricModel>> builtin_models();

}  // namespace finsler
