#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mobccn/experiment.hpp"

using nlohmann::json;
using namespace mobccn;

namespace {

struct Overrides {
  std::string config;
  std::string scenario;
  std::vector<std::string> protocols;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::string out;
  std::string trace_in;
  std::string trace_out;
  std::optional<int> jobs;
};

void add_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON experiment config");
  cmd->add_option("--scenario", o.scenario,
                  "basic | load_sweep | identical_requests | bandwidth_sweep | reduced_ict");
  cmd->add_option("--protocol", o.protocols, "protocol to run (repeatable)");
  cmd->add_option("--seed", o.seed, "base seed; replication r uses seed + r");
  cmd->add_option("--reps", o.reps, "replications");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--trace-in", o.trace_in, "contact trace CSV to replay");
  cmd->add_option("--trace-out", o.trace_out, "write the generated traces here");
  cmd->add_option("--jobs", o.jobs, "worker threads (default: MOBCCN_SIM_JOBS or all cores)");
}

// Returns false (after printing the issues) when the config is invalid.
bool load_spec(const Overrides& o, ExperimentSpec& spec) {
  json j = json::object();
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) {
      std::cerr << "error: config: cannot read " << o.config << "\n";
      return false;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    if (ss.str().find_first_not_of(" \t\r\n") != std::string::npos) {
      j = json::parse(ss.str(), nullptr, false);
      if (j.is_discarded()) {
        std::cerr << "error: config: not valid JSON\n";
        return false;
      }
    }
  }
  if (!j.is_object()) {
    std::cerr << "error: config: must be a JSON object\n";
    return false;
  }
  if (!o.scenario.empty()) j["scenario"] = o.scenario;
  if (!o.protocols.empty()) {
    j.erase("protocol");
    j["protocols"] = o.protocols;
  }
  if (o.seed) j["seed"] = *o.seed;
  if (o.reps) j["replications"] = *o.reps;
  if (!o.out.empty()) j["output_dir"] = o.out;
  if (!o.trace_in.empty()) j["trace_in"] = o.trace_in;
  if (!o.trace_out.empty()) j["trace_out"] = o.trace_out;
  if (o.jobs) j["jobs"] = *o.jobs;

  auto result = validate_config(j);
  if (auto* issues = std::get_if<std::vector<ConfigIssue>>(&result)) {
    for (const auto& i : *issues) std::cerr << "error: " << i.key << ": " << i.reason << "\n";
    return false;
  }
  spec = std::get<ExperimentSpec>(result);
  return true;
}

std::string cell(const MetricsReport& r, const std::string& metric, double scale, const char* fmt) {
  auto it = r.find(metric);
  if (it == r.end()) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, it->second.mean * scale);
  return buf;
}

void print_summary(const ExperimentResult& result) {
  std::printf("%-28s %-16s %9s %9s %9s %7s %10s %7s\n", "scenario", "protocol", "delivery",
              "local", "external", "hops", "latency_h", "MB");
  for (const auto& r : result.results) {
    std::printf("%-28s %-16s %9s %9s %9s %7s %10s %7s\n", r.point.c_str(), r.protocol.c_str(),
                cell(r.report, "delivery_rate", 100, "%.1f%%").c_str(),
                cell(r.report, "delivery_rate_local", 100, "%.1f%%").c_str(),
                cell(r.report, "delivery_rate_external", 100, "%.1f%%").c_str(),
                cell(r.report, "hop_count", 1, "%.2f").c_str(),
                cell(r.report, "latency_s", 1.0 / 3600, "%.2f").c_str(),
                cell(r.report, "traffic_bytes", 1e-6, "%.1f").c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contact-based opportunistic ICN simulator"};
  app.require_subcommand(1);
  Overrides run_o, validate_o;
  auto* run = app.add_subcommand("run", "run an experiment and write report.json / report.csv");
  add_flags(run, run_o);
  auto* validate = app.add_subcommand("validate", "print the normalized config or its errors");
  add_flags(validate, validate_o);
  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) {
      ExperimentSpec spec;
      if (!load_spec(validate_o, spec)) return 2;
      std::cout << to_json(spec).dump(2) << "\n";
      return 0;
    }
    ExperimentSpec spec;
    if (!load_spec(run_o, spec)) return 2;
    auto result = run_experiment(spec, [](std::size_t done, std::size_t total) {
      std::fprintf(stderr, "\r%zu/%zu runs", done, total);
      if (done == total) std::fprintf(stderr, "\n");
    });
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    write_reports(spec, result, spec.output_dir);
    print_summary(result);
    std::cout << "wrote " << (spec.output_dir / "report.json").string() << " and "
              << (spec.output_dir / "report.csv").string() << "\n";
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
