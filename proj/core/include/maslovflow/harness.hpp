#pragma once

// Scenario registry, dual-pipeline verification and property sweeps.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "maslovflow/bvp.hpp"
#include "maslovflow/maslov.hpp"

namespace maslovflow::harness {

enum class ScenarioKind { FirstOrder, SecondOrder, PairPathOnly };

std::string_view to_string(ScenarioKind kind);

struct Expected {
  std::optional<int> sf;
  std::optional<int> mas;
  std::string provenance;
};

struct Scenario {
  std::string name;
  std::string description;
  ScenarioKind kind = ScenarioKind::FirstOrder;
  bvp::Family family;             // FirstOrder / SecondOrder
  bvp::BoundaryPath boundary;     // FirstOrder / SecondOrder
  maslov::PairPath pair_path;     // PairPathOnly
  bvp::BvpOptions options;
  Expected expected;
};

struct Residuals {
  double transport = 0.0;
  double lagrangian = 0.0;
  double unitary = 0.0;
};

struct VerificationReport {
  std::string name;
  ScenarioKind kind = ScenarioKind::FirstOrder;
  int sf = 0;
  int mas = 0;
  bool agree = false;  // sf == mas and both pipelines finished
  bool expected_match = true;
  flow::CrossingReport sf_report;
  flow::CrossingReport mas_report;
  Residuals residuals;
  double wall_ms = 0.0;
  std::optional<ErrorCode> error_code;
  std::string error;
};

/// Runs both pipelines; errors are recorded in the report.
VerificationReport run_scenario(const Scenario& sc);

/// Reports in input order; scenarios run concurrently (see worker_count).
std::vector<VerificationReport> run_scenarios(const std::vector<Scenario>& scenarios);

/// S1 .. S5 with pinned parameters and expected values.
std::vector<Scenario> builtin_scenarios();
std::optional<Scenario> find_builtin(const std::string& name);

/// Doubles RK4 steps, the lambda grid and the initial s-partition.
Scenario refined(const Scenario& sc);

/// JSON {name, kind, sf, mas, agree, residuals{...}, partitions{sf, mas},
/// wall_ms}, plus expected / error fields when present.
std::string to_json(const VerificationReport& report);

struct SuiteResult {
  std::string name;
  int trials = 0;
  int passed = 0;
  int failed = 0;
  double worst_residual = 0.0;
  std::vector<std::string> failures;  // "trial k: message", first few only
};

struct SweepSummary {
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<SuiteResult> suites;

  bool all_passed() const;
};

struct SuiteInfo {
  std::string name;
  std::function<double(std::uint64_t seed, int trial)> run;  // returns a residual, throws on failure
};

/// Property suites in sweep order.
const std::vector<SuiteInfo>& property_suites();

/// Runs every suite for `trials` trials (InvalidTrials when trials < 1).
SweepSummary property_sweep(std::uint64_t seed, int trials);

std::string to_json(const SweepSummary& summary);

/// Parallel workers: hardware concurrency capped by MASLOVFLOW_THREADS.
unsigned worker_count();

/// Calls fn(i) for i in [0, n) on worker_count() threads.
void parallel_for(int n, const std::function<void(int)>& fn);

/// Thrown by property checks.
class PropertyFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace maslovflow::harness
