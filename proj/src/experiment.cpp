#include "mobccn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "csv.hpp"

namespace mobccn {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Scenario, std::string_view>, 5> kScenarios{{
    {Scenario::basic, "basic"},
    {Scenario::load_sweep, "load_sweep"},
    {Scenario::identical_requests, "identical_requests"},
    {Scenario::bandwidth_sweep, "bandwidth_sweep"},
    {Scenario::reduced_ict, "reduced_ict"},
}};

// Reads one JSON object, filling defaults and collecting issues.
class Reader {
 public:
  Reader(const json& j, std::string prefix, std::vector<ConfigIssue>& issues)
      : j_(j), prefix_(std::move(prefix)), issues_(issues) {
    if (!j_.is_object()) issue("", "must be an object");
  }

  std::string key(const std::string& k) const { return prefix_.empty() ? k : prefix_ + "." + k; }
  void issue(const std::string& k, const std::string& why) { issues_.push_back({key(k), why}); }

  const json* get(const std::string& k) {
    seen_.push_back(k);
    if (!j_.is_object()) return nullptr;
    auto it = j_.find(k);
    if (it == j_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  template <typename T>
  void number(const std::string& k, T& out, double lo, double hi, const char* range) {
    const json* v = get(k);
    if (!v) return;
    if (!v->is_number()) {
      issue(k, "must be a number");
      return;
    }
    double x = v->get<double>();
    if (std::is_integral_v<T> && x != std::floor(x)) {
      issue(k, "must be an integer");
      return;
    }
    if (!(x >= lo && x <= hi)) {
      issue(k, range);
      return;
    }
    out = static_cast<T>(x);
  }

  void boolean(const std::string& k, bool& out) {
    const json* v = get(k);
    if (!v) return;
    if (!v->is_boolean())
      issue(k, "must be true or false");
    else
      out = v->get<bool>();
  }

  std::optional<std::string> string(const std::string& k) {
    const json* v = get(k);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      issue(k, "must be a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  void finish() {
    if (!j_.is_object()) return;
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end())
        issue(it.key(), "unknown key");
  }

 private:
  const json& j_;
  std::string prefix_;
  std::vector<ConfigIssue>& issues_;
  std::vector<std::string> seen_;
};

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr const char* kNonNegative = "must be ≥ 0";
constexpr const char* kPositive = "must be > 0";

void read_protocol_params(Reader& r, StrategyConfig& p) {
  r.number("retx_threshold", p.retx_threshold, 0, 1e9, kNonNegative);
  r.number("t_ageing_s", p.t_ageing_s, 1e-9, kInf, kPositive);
  r.number("hyst_percent", p.hyst_percent, 0, kInf, kNonNegative);
  r.number("epidemic_r", p.epidemic_r, 0, 1, "must be in [0, 1]");
  r.boolean("strict_cnu_fib_match", p.strict_cnu_fib_match);
}

std::optional<StrategyConfig> read_protocol(const json& j, const std::string& key,
                                            const StrategyConfig& base,
                                            std::vector<ConfigIssue>& issues) {
  StrategyConfig p = base;
  if (j.is_string()) {
    auto v = parse_variant(j.get<std::string>());
    if (!v) {
      issues.push_back({key, "unknown protocol '" + j.get<std::string>() + "'"});
      return std::nullopt;
    }
    p.variant = *v;
    return p;
  }
  Reader r(j, key, issues);
  auto name = r.string("variant");
  if (!name) {
    r.issue("variant", "is required");
  } else if (auto v = parse_variant(*name)) {
    p.variant = *v;
  } else {
    r.issue("variant", "unknown protocol '" + *name + "'");
  }
  read_protocol_params(r, p);
  r.finish();
  return p;
}

std::string point_suffix_bandwidth(const std::optional<double>& mbps) {
  if (!mbps) return "infinite";
  return csv::format(*mbps) + "Mbps";
}

std::filesystem::path with_suffix(const std::filesystem::path& p, const std::string& suffix) {
  auto out = p;
  out.replace_filename(p.stem().string() + suffix + p.extension().string());
  return out;
}

json estimate_json(const Estimate& e) {
  json j;
  j["mean"] = e.mean;
  j["ci95_lo"] = e.ci95_lo ? json(*e.ci95_lo) : json(nullptr);
  j["ci95_hi"] = e.ci95_hi ? json(*e.ci95_hi) : json(nullptr);
  j["n"] = e.samples;
  return j;
}

}  // namespace

std::string_view to_string(Scenario s) {
  for (auto [k, name] : kScenarios)
    if (k == s) return name;
  return "?";
}

std::optional<Scenario> parse_scenario(std::string_view s) {
  for (auto [k, name] : kScenarios)
    if (name == s) return k;
  return std::nullopt;
}

std::vector<StrategyConfig> default_protocols() {
  std::vector<StrategyConfig> out;
  for (Variant v : {Variant::basic, Variant::r1, Variant::r2, Variant::a, Variant::ah,
                    Variant::ideal_epidemic, Variant::limited_epidemic}) {
    StrategyConfig c;
    c.variant = v;
    out.push_back(c);
  }
  return out;
}

ValidationResult validate_config(const json& config) {
  std::vector<ConfigIssue> issues;
  ExperimentSpec spec;
  Reader top(config, "", issues);

  if (auto s = top.string("scenario")) {
    if (auto sc = parse_scenario(*s))
      spec.scenario = *sc;
    else
      top.issue("scenario", "unknown scenario '" + *s + "'");
  }
  top.number("replications", spec.replications, 1, 1e6, "must be ≥ 1");
  top.number("seed", spec.base_seed, 0, 1.8e19, kNonNegative);
  top.number("jobs", spec.jobs, 0, 4096, kNonNegative);
  top.number("ict_scale", spec.ict_scale, 1e-9, 1, "must be in (0, 1]");
  top.number("reduced_t_ageing_s", spec.reduced_t_ageing_s, 1e-9, kInf, kPositive);
  top.number("reduced_hyst_percent", spec.reduced_hyst_percent, 0, kInf, kNonNegative);
  if (auto s = top.string("output_dir")) spec.output_dir = *s;
  if (auto s = top.string("trace_in")) spec.trace_in = *s;
  if (auto s = top.string("trace_out")) spec.trace_out = *s;

  if (const json* bw = top.get("bandwidth_mbps")) {
    spec.bandwidth_mbps.clear();
    if (!bw->is_array() || bw->empty()) {
      top.issue("bandwidth_mbps", "must be a non-empty list");
    } else {
      for (std::size_t i = 0; i < bw->size(); ++i) {
        const json& x = (*bw)[i];
        std::string k = "bandwidth_mbps[" + std::to_string(i) + "]";
        if (x.is_string() && (x == "inf" || x == "infinite"))
          spec.bandwidth_mbps.push_back(kInf);
        else if (x.is_number() && x.get<double>() > 0)
          spec.bandwidth_mbps.push_back(x.get<double>());
        else
          issues.push_back({k, "must be > 0 or \"infinite\""});
      }
    }
  }
  if (const json* lp = top.get("load_points")) {
    spec.load_points.clear();
    if (!lp->is_array() || lp->empty()) {
      top.issue("load_points", "must be a non-empty list");
    } else {
      for (std::size_t i = 0; i < lp->size(); ++i) {
        const json& x = (*lp)[i];
        if (x.is_number_integer() && x.get<int>() > 0)
          spec.load_points.push_back(x.get<int>());
        else
          issues.push_back({"load_points[" + std::to_string(i) + "]", "must be a positive integer"});
      }
    }
  }

  StrategyConfig base;
  if (const json* pd = top.get("protocol_defaults")) {
    Reader r(*pd, "protocol_defaults", issues);
    read_protocol_params(r, base);
    r.finish();
  }
  const json* protos = top.get("protocols");
  const json* single = top.get("protocol");
  if (protos && single) top.issue("protocol", "give either protocol or protocols");
  if (single) {
    if (auto p = read_protocol(*single, "protocol", base, issues)) spec.protocols = {*p};
  } else if (protos) {
    if (!protos->is_array() || protos->empty()) {
      top.issue("protocols", "must be a non-empty list");
    } else {
      for (std::size_t i = 0; i < protos->size(); ++i)
        if (auto p = read_protocol((*protos)[i], "protocols[" + std::to_string(i) + "]", base, issues))
          spec.protocols.push_back(*p);
    }
  } else {
    spec.protocols = default_protocols();
    for (auto& p : spec.protocols) {
      Variant v = p.variant;
      p = base;
      p.variant = v;
    }
  }

  if (const json* t = top.get("trace")) {
    Reader r(*t, "trace", issues);
    TraceConfig& c = spec.trace;
    r.number("n_nodes", c.n_nodes, 2, 1e6, "must be ≥ 2");
    r.number("n_communities", c.n_communities, 1, 1e6, "must be ≥ 1");
    r.number("travellers_per_community", c.travellers_per_community, 0, 1e6, kNonNegative);
    r.number("mean_intra_ict_s", c.mean_intra_ict_s, 1e-9, kInf, kPositive);
    r.number("mean_contact_duration_s", c.mean_contact_duration_s, 1e-9, kInf, kPositive);
    r.number("traveller_visit_rate", c.traveller_visit_rate, 1e-12, kInf, kPositive);
    r.number("mean_visit_duration_s", c.mean_visit_duration_s, 1e-9, kInf, kPositive);
    r.number("duration_s", c.duration_s, 1e-9, kInf, kPositive);
    r.finish();
  }
  if (const json* w = top.get("workload")) {
    Reader r(*w, "workload", issues);
    WorkloadConfig& c = spec.workload;
    r.number("producers", c.producers, 1, 1e6, "must be ≥ 1");
    r.number("consumers_per_community", c.consumers_per_community, 0, 1e6, kNonNegative);
    r.number("types_per_producer", c.types_per_producer, 1, 65535, "must be in [1, 65535]");
    r.number("chunks_per_type", c.chunks_per_type, 1, 65535, "must be in [1, 65535]");
    r.number("requests_per_consumer", c.requests_per_consumer, 1, 1e6, "must be ≥ 1");
    r.number("local_fraction", c.local_fraction, 0, 1, "must be in [0, 1]");
    r.number("lambda_req", c.lambda_req, 1e-12, kInf, kPositive);
    r.number("req_start_s", c.req_start_s, 0, kInf, kNonNegative);
    r.number("req_end_s", c.req_end_s, 0, kInf, kNonNegative);
    if (auto m = r.string("overlap_mode")) {
      if (*m == "disjoint")
        c.overlap_mode = OverlapMode::disjoint;
      else if (*m == "identical_set")
        c.overlap_mode = OverlapMode::identical_set;
      else
        r.issue("overlap_mode", "must be disjoint or identical_set");
    }
    if (c.req_end_s <= c.req_start_s) r.issue("req_end_s", "must be after req_start_s");
    r.finish();
  }
  if (const json* s = top.get("sim")) {
    Reader r(*s, "sim", issues);
    SimConfig& c = spec.sim;
    r.number("pit_lifetime_s", c.pit_lifetime_s, 1e-9, kInf, kPositive);
    if (const json* bw = r.get("bandwidth_mbps")) {
      if (bw->is_number() && bw->get<double>() > 0)
        c.bandwidth_bps = bw->get<double>() * 1e6;
      else if (!(bw->is_string() && (*bw == "inf" || *bw == "infinite")))
        r.issue("bandwidth_mbps", "must be > 0 or \"infinite\"");
    }
    if (auto sh = r.string("sharing")) {
      if (*sh == "sender_degree")
        c.sharing = Sharing::sender_degree;
      else if (*sh == "clique")
        c.sharing = Sharing::clique;
      else
        r.issue("sharing", "must be sender_degree or clique");
    }
    r.number("chunk_size_bytes", c.sizes.chunk, 1, 1e15, "must be ≥ 1");
    r.number("interest_bytes", c.sizes.interest, 1, 1e9, "must be ≥ 1");
    r.number("hello_header_bytes", c.sizes.hello_header, 0, 1e9, kNonNegative);
    r.number("hello_per_advert_bytes", c.sizes.hello_per_advert, 0, 1e9, kNonNegative);
    if (auto e = r.string("ict_estimator")) {
      if (*e == "mean")
        c.ict_mode = IctMode::mean;
      else if (*e == "ewma")
        c.ict_mode = IctMode::ewma;
      else
        r.issue("ict_estimator", "must be mean or ewma");
    }
    r.number("ict_alpha", c.ict_alpha, 1e-12, 1, "must be in (0, 1]");
    r.finish();
  }
  top.finish();
  spec.sim.duration_s = spec.trace.duration_s;
  if (!issues.empty()) return issues;
  return spec;
}

ValidationResult validate_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return std::vector<ConfigIssue>{{"config", "cannot read " + path.string()}};
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return validate_config(json::object());
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) return std::vector<ConfigIssue>{{"config", "not valid JSON"}};
  return validate_config(j);
}

json to_json(const ExperimentSpec& spec) {
  json j;
  j["scenario"] = std::string(to_string(spec.scenario));
  j["replications"] = spec.replications;
  j["seed"] = spec.base_seed;
  j["jobs"] = spec.jobs;
  json bw = json::array();
  for (double b : spec.bandwidth_mbps)
    bw.push_back(std::isinf(b) ? json("infinite") : json(b));
  j["bandwidth_mbps"] = bw;
  j["load_points"] = spec.load_points;
  j["ict_scale"] = spec.ict_scale;
  j["reduced_t_ageing_s"] = spec.reduced_t_ageing_s;
  j["reduced_hyst_percent"] = spec.reduced_hyst_percent;
  j["output_dir"] = spec.output_dir.string();
  j["trace_in"] = spec.trace_in ? json(spec.trace_in->string()) : json(nullptr);
  j["trace_out"] = spec.trace_out ? json(spec.trace_out->string()) : json(nullptr);
  json ps = json::array();
  for (const auto& p : spec.protocols)
    ps.push_back({{"variant", std::string(to_string(p.variant))},
                  {"retx_threshold", p.retx_threshold},
                  {"t_ageing_s", p.t_ageing_s},
                  {"hyst_percent", p.hyst_percent},
                  {"epidemic_r", p.epidemic_r},
                  {"strict_cnu_fib_match", p.strict_cnu_fib_match}});
  j["protocols"] = ps;
  const TraceConfig& t = spec.trace;
  j["trace"] = {{"n_nodes", t.n_nodes},
                {"n_communities", t.n_communities},
                {"travellers_per_community", t.travellers_per_community},
                {"mean_intra_ict_s", t.mean_intra_ict_s},
                {"mean_contact_duration_s", t.mean_contact_duration_s},
                {"traveller_visit_rate", t.traveller_visit_rate},
                {"mean_visit_duration_s", t.mean_visit_duration_s},
                {"duration_s", t.duration_s}};
  const WorkloadConfig& w = spec.workload;
  j["workload"] = {{"producers", w.producers},
                   {"consumers_per_community", w.consumers_per_community},
                   {"types_per_producer", w.types_per_producer},
                   {"chunks_per_type", w.chunks_per_type},
                   {"requests_per_consumer", w.requests_per_consumer},
                   {"local_fraction", w.local_fraction},
                   {"lambda_req", w.lambda_req},
                   {"req_start_s", w.req_start_s},
                   {"req_end_s", w.req_end_s},
                   {"overlap_mode", w.overlap_mode == OverlapMode::disjoint ? "disjoint" : "identical_set"}};
  const SimConfig& s = spec.sim;
  j["sim"] = {{"pit_lifetime_s", s.pit_lifetime_s},
              {"bandwidth_mbps", s.bandwidth_bps ? json(*s.bandwidth_bps / 1e6) : json("infinite")},
              {"sharing", s.sharing == Sharing::sender_degree ? "sender_degree" : "clique"},
              {"chunk_size_bytes", s.sizes.chunk},
              {"interest_bytes", s.sizes.interest},
              {"hello_header_bytes", s.sizes.hello_header},
              {"hello_per_advert_bytes", s.sizes.hello_per_advert},
              {"ict_estimator", s.ict_mode == IctMode::mean ? "mean" : "ewma"},
              {"ict_alpha", s.ict_alpha}};
  return j;
}

std::vector<ScenarioPoint> expand(const ExperimentSpec& spec) {
  ScenarioPoint base;
  base.trace = spec.trace;
  base.trace_generation_s = spec.trace.duration_s;
  base.workload = spec.workload;
  base.sim = spec.sim;
  base.sim.duration_s = spec.trace.duration_s;
  const std::string name(to_string(spec.scenario));

  auto bandwidth_points = [&](ScenarioPoint p) {
    std::vector<ScenarioPoint> out;
    for (double b : spec.bandwidth_mbps) {
      ScenarioPoint q = p;
      std::optional<double> mbps;
      if (!std::isinf(b)) mbps = b;
      q.sim.bandwidth_bps = mbps ? std::optional<double>(*mbps * 1e6) : std::nullopt;
      q.label = name + "@" + point_suffix_bandwidth(mbps);
      out.push_back(q);
    }
    return out;
  };

  switch (spec.scenario) {
    case Scenario::basic: {
      base.label = name;
      return {base};
    }
    case Scenario::load_sweep: {
      std::vector<ScenarioPoint> out;
      for (int k : spec.load_points) {
        ScenarioPoint p = base;
        p.workload.consumers_per_community = k;
        p.label = name + "@" + std::to_string(k);
        out.push_back(p);
      }
      return out;
    }
    case Scenario::identical_requests: {
      base.workload.consumers_per_community = 16;
      base.workload.overlap_mode = OverlapMode::identical_set;
      base.workload.requests_per_consumer = 80;
      base.label = name;
      return {base};
    }
    case Scenario::bandwidth_sweep: return bandwidth_points(base);
    case Scenario::reduced_ict: {
      base.ict_scale = spec.ict_scale;
      base.trace_generation_s = spec.trace.duration_s / spec.ict_scale;
      base.t_ageing_s = spec.reduced_t_ageing_s;
      base.hyst_percent = spec.reduced_hyst_percent;
      return bandwidth_points(base);
    }
  }
  return {};
}

std::uint64_t replication_seed(const ExperimentSpec& spec, int replication) {
  return spec.base_seed + static_cast<std::uint64_t>(replication);
}

StrategyConfig apply_point(const StrategyConfig& protocol, const ScenarioPoint& point) {
  StrategyConfig p = protocol;
  if (point.t_ageing_s) p.t_ageing_s = *point.t_ageing_s;
  if (point.hyst_percent) p.hyst_percent = *point.hyst_percent;
  return p;
}

RunInputs build_inputs(const ExperimentSpec& spec, const ScenarioPoint& point, int replication) {
  const std::uint64_t seed = replication_seed(spec, replication);
  RunInputs in;
  if (spec.trace_in) {
    in.trace = load_trace(*spec.trace_in);
  } else {
    TraceConfig tc = point.trace;
    tc.seed = seed;
    tc.duration_s = point.trace_generation_s;
    in.trace = generate_trace(tc);
    if (point.ict_scale != 1.0) in.trace = scale_icts(in.trace, point.ict_scale);
    in.trace = clip_trace(in.trace, point.trace.duration_s);
  }
  in.workload = build_workload(point.workload, in.trace.nodes, seed);
  return in;
}

const ProtocolResult* ExperimentResult::find(std::string_view point, std::string_view protocol) const {
  for (const auto& r : results)
    if (r.point == point && r.protocol == protocol) return &r;
  return nullptr;
}

int resolve_jobs(int configured) {
  if (configured > 0) return configured;
  if (const char* env = std::getenv("MOBCCN_SIM_JOBS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Runs f(0..n-1) on a bounded pool; rethrows the first failure after joining.
template <typename F>
void parallel_for(std::size_t n, int jobs, F&& f) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      {
        std::lock_guard lock(mu);
        if (failure) return;
      }
      try {
        f(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  auto count = static_cast<std::size_t>(std::max(1, jobs));
  count = std::min(count, std::max<std::size_t>(n, 1));
  if (count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, ProgressFn progress) {
  if (spec.protocols.empty()) throw config_error("no protocols to run");
  const auto points = expand(spec);
  const auto reps = static_cast<std::size_t>(spec.replications);
  const std::size_t n_proto = spec.protocols.size();
  const int jobs = resolve_jobs(spec.jobs);

  ExperimentResult result;
  if (spec.trace_in) load_trace(*spec.trace_in, result.warnings);

  std::vector<RunInputs> inputs(points.size() * reps);
  parallel_for(inputs.size(), jobs, [&](std::size_t i) {
    inputs[i] = build_inputs(spec, points[i / reps], static_cast<int>(i % reps));
  });

  // Every point of a scenario replays the same traces.
  if (spec.trace_out) {
    for (std::size_t rep = 0; rep < reps; ++rep) {
      auto path = reps > 1 ? with_suffix(*spec.trace_out, ".rep" + std::to_string(rep)) : *spec.trace_out;
      save_trace(inputs[rep].trace, path);
      save_schedule(inputs[rep].workload, with_suffix(path, ".schedule"));
    }
  }

  const std::size_t total = points.size() * n_proto * reps;
  std::vector<RunMetrics> runs(total);
  std::atomic<std::size_t> done{0};
  std::mutex progress_mu;
  parallel_for(total, jobs, [&](std::size_t i) {
    std::size_t rep = i % reps;
    std::size_t proto = (i / reps) % n_proto;
    std::size_t point = i / (reps * n_proto);
    const RunInputs& in = inputs[point * reps + rep];
    StrategyConfig cfg = apply_point(spec.protocols[proto], points[point]);
    auto ledger = run_simulation(in.trace, in.workload, cfg, points[point].sim,
                                 replication_seed(spec, static_cast<int>(rep)));
    runs[i] = compute_run_metrics(ledger);
    std::size_t d = ++done;
    if (progress) {
      std::lock_guard lock(progress_mu);
      progress(d, total);
    }
  });

  for (std::size_t point = 0; point < points.size(); ++point) {
    for (std::size_t proto = 0; proto < n_proto; ++proto) {
      ProtocolResult r;
      r.point = points[point].label;
      r.protocol = spec.protocols[proto].label();
      auto first = runs.begin() + static_cast<std::ptrdiff_t>((point * n_proto + proto) * reps);
      r.runs.assign(first, first + static_cast<std::ptrdiff_t>(reps));
      r.report = compute_report(r.runs);
      result.results.push_back(std::move(r));
    }
  }
  return result;
}

std::string report_csv(const ExperimentResult& result) {
  std::string out = "scenario,protocol,metric,mean,ci95_lo,ci95_hi\n";
  for (const auto& r : result.results) {
    for (const auto& [metric, e] : r.report) {
      out += r.point + "," + r.protocol + "," + metric + "," + csv::format(e.mean) + ",";
      out += (e.ci95_lo ? csv::format(*e.ci95_lo) : "") + ",";
      out += (e.ci95_hi ? csv::format(*e.ci95_hi) : "") + "\n";
    }
  }
  return out;
}

json report_json(const ExperimentSpec& spec, const ExperimentResult& result) {
  json j;
  j["spec"] = to_json(spec);
  json rs = json::array();
  for (const auto& r : result.results) {
    json x;
    x["scenario"] = r.point;
    x["protocol"] = r.protocol;
    json metrics = json::object();
    for (const auto& [metric, e] : r.report) metrics[metric] = estimate_json(e);
    x["metrics"] = metrics;
    json per_run = json::array();
    for (const auto& m : r.runs) {
      json row = json::object();
      for (const auto& [k, v] : flatten(m)) row[k] = v;
      per_run.push_back(row);
    }
    x["replications"] = per_run;
    rs.push_back(x);
  }
  j["results"] = rs;
  j["warnings"] = result.warnings;
  return j;
}

void write_reports(const ExperimentSpec& spec, const ExperimentResult& result,
                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "report.json");
    if (!out) throw std::runtime_error("cannot write " + (dir / "report.json").string());
    out << report_json(spec, result).dump(2) << '\n';
  }
  std::ofstream out(dir / "report.csv");
  if (!out) throw std::runtime_error("cannot write " + (dir / "report.csv").string());
  out << report_csv(result);
}

}  // namespace mobccn
