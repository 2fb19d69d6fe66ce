#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fracms/config.hpp"

namespace fracms {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  /// One-line human summary (measured vs target).
  std::string summary;
  /// Machine-readable measurements, oracle values and tolerances.
  json detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  /// Multiplies every Monte Carlo sample budget in the manifest.
  double budget_scale = 1.0;
  /// Criterion ids to run; empty runs all of them.
  std::vector<int> only;
  /// Called after each criterion finishes, in manifest order.
  std::function<void(const CriterionResult&)> on_result;
};

/// The bundled acceptance manifest (commented JSON).
const std::string& acceptance_manifest_text();

/// Runs the manifest criteria in order. A criterion that throws is reported as
/// failed with the exception text; the remaining criteria still run.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

std::vector<CriterionResult> run_acceptance(const json& manifest, const AcceptanceOptions& options);

/// "PASS  4  extended MS, compact support  (12.3 s)  measured ... target ..."
std::string format_result_line(const CriterionResult& r);

json to_json(const CriterionResult& r);

}  // namespace fracms
