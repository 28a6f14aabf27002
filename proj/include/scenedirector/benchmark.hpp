#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "scenedirector/gateway.hpp"
#include "scenedirector/plan.hpp"
#include "scenedirector/scene.hpp"

namespace scenedirector {

enum class ScenarioLabel { o1_a1, o5_a1, o5_a2, o5_a5, o10_a5 };

std::string_view to_string(ScenarioLabel label);
ScenarioLabel parse_scenario_label(std::string_view token);
const std::vector<ScenarioLabel>& all_scenario_labels();

struct ScenarioClass {
  ScenarioLabel label = ScenarioLabel::o1_a1;
  std::size_t object_count = 1;
  std::size_t agent_count = 1;
  std::uint64_t layout_seed = 0;
};

/// Class with the counts implied by its label.
ScenarioClass make_scenario_class(ScenarioLabel label, std::uint64_t layout_seed = 0);

/// Seeded layout drawn from a fixed object catalog. Same class, same scene.
Scene build_scenario(const ScenarioClass& scenario);

struct ValiditySummary {
  bool parse_ok = false;
  bool structurally_valid = false;
  std::size_t errors = 0;
  std::size_t warnings = 0;
  std::string first_problem;  ///< first error message, or the provider failure
};

struct BenchmarkRecord {
  Provider provider = Provider::mock;
  ScenarioLabel scenario = ScenarioLabel::o1_a1;
  std::size_t trial = 0;
  double latency = 0.0;  ///< seconds; for failed requests, time until failure
  ValiditySummary validity;
  bool retained = false;
};

struct BenchmarkStats {
  Provider provider = Provider::mock;
  ScenarioLabel scenario = ScenarioLabel::o1_a1;
  double mean = 0.0;  ///< seconds, retained trials only
  double sd = 0.0;    ///< sample standard deviation (n - 1)
  std::size_t trial_count = 0;  ///< retained trials
  std::size_t total_count = 0;
  double validity_rate = 0.0;
  bool single_sample = false;
};

/// Sequential sweep: classes outer, providers, then trials. Provider
/// failures become non-retained records. Mock seeds advance per trial.
std::vector<BenchmarkRecord> run_benchmark(const std::vector<ProviderConfig>& providers,
                                           const std::vector<ScenarioClass>& classes,
                                           std::size_t trials,
                                           Strictness mode = Strictness::lenient);

/// Per (provider, scenario) cell, ordered by provider then scenario.
std::vector<BenchmarkStats> summarize(const std::vector<BenchmarkRecord>& records);

/// Sample mean and (n - 1) standard deviation; sd is 0 for fewer than two values.
struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};
MeanSd mean_sd(std::vector<double> values);

/// provider,scenario,trial,latency_s,valid,retained
std::string records_to_csv(const std::vector<BenchmarkRecord>& records);

/// Scenario rows with M and SD columns per provider, plus validity and
/// optionally the bundled reference numbers for comparison.
std::string stats_to_markdown(const std::vector<BenchmarkStats>& stats,
                              bool include_reference = false);

struct ReferenceCell {
  Provider provider;
  ScenarioLabel scenario;
  double mean;
  double sd;
};

/// Reference latencies of the four hosted models (seconds). Reference only.
const std::vector<ReferenceCell>& reference_latencies();
std::string reference_latencies_csv();

}  // namespace scenedirector
