#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "mobccn/metrics.hpp"
#include "mobccn/simulator.hpp"
#include "mobccn/strategy.hpp"
#include "mobccn/trace.hpp"
#include "mobccn/workload.hpp"

namespace mobccn {

enum class Scenario { basic, load_sweep, identical_requests, bandwidth_sweep, reduced_ict };

std::string_view to_string(Scenario s);
std::optional<Scenario> parse_scenario(std::string_view s);

struct ExperimentSpec {
  Scenario scenario = Scenario::basic;
  std::vector<StrategyConfig> protocols;  // default: all seven
  int replications = 10;
  std::uint64_t base_seed = 1;
  std::vector<double> bandwidth_mbps{10, 25, 50};
  std::vector<int> load_points{4, 8, 12, 16};
  double ict_scale = 0.1;              // reduced_ict
  Seconds reduced_t_ageing_s = 1800;   // reduced_ict
  double reduced_hyst_percent = 35;    // reduced_ict
  TraceConfig trace;
  WorkloadConfig workload;
  SimConfig sim;
  std::filesystem::path output_dir = "out";
  std::optional<std::filesystem::path> trace_in;
  std::optional<std::filesystem::path> trace_out;
  int jobs = 0;  // 0: MOBCCN_SIM_JOBS, else hardware concurrency
};

// Every protocol with its default parameters.
std::vector<StrategyConfig> default_protocols();

struct ConfigIssue {
  std::string key;
  std::string reason;
};

using ValidationResult = std::variant<ExperimentSpec, std::vector<ConfigIssue>>;

// Fills every missing key with its default. Unknown keys are errors.
ValidationResult validate_config(const nlohmann::json& config);
// An empty file is an empty object.
ValidationResult validate_config_file(const std::filesystem::path& path);

// The normalized spec as JSON (every key present).
nlohmann::json to_json(const ExperimentSpec& spec);

// One parameter setting of a scenario.
struct ScenarioPoint {
  std::string label;  // e.g. "basic", "load_sweep@8", "bandwidth_sweep@10Mbps"
  TraceConfig trace;
  Seconds trace_generation_s = 0;  // generated length before scaling and clipping
  double ict_scale = 1.0;
  WorkloadConfig workload;
  SimConfig sim;
  std::optional<Seconds> t_ageing_s;
  std::optional<double> hyst_percent;
};

std::vector<ScenarioPoint> expand(const ExperimentSpec& spec);

// Trace and workload of one replication of one point; identical for every
// protocol.
struct RunInputs {
  ContactTrace trace;
  Workload workload;
};

RunInputs build_inputs(const ExperimentSpec& spec, const ScenarioPoint& point, int replication);
std::uint64_t replication_seed(const ExperimentSpec& spec, int replication);
StrategyConfig apply_point(const StrategyConfig& protocol, const ScenarioPoint& point);

struct ProtocolResult {
  std::string point;
  std::string protocol;
  std::vector<RunMetrics> runs;  // by replication
  MetricsReport report;
};

struct ExperimentResult {
  std::vector<ProtocolResult> results;  // point-major, then protocol order
  std::vector<std::string> warnings;

  const ProtocolResult* find(std::string_view point, std::string_view protocol) const;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

ExperimentResult run_experiment(const ExperimentSpec& spec, ProgressFn progress = {});

int resolve_jobs(int configured);

// report.json and report.csv in `dir`.
void write_reports(const ExperimentSpec& spec, const ExperimentResult& result,
                   const std::filesystem::path& dir);
std::string report_csv(const ExperimentResult& result);
nlohmann::json report_json(const ExperimentSpec& spec, const ExperimentResult& result);

}  // namespace mobccn
