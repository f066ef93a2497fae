#include "mobccn/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "csv.hpp"

namespace mobccn {

namespace {

constexpr std::uint64_t kWorkloadStream = 0x776f726b6c6f6164ULL;
constexpr int kScheduleTries = 200;

struct Pending {
  NodeId consumer;
  ContentId content;
  Seconds issue;
  bool local;
};

std::vector<ContentId> sample(std::vector<ContentId> pool, std::size_t k, std::mt19937_64& rng) {
  if (k > pool.size()) throw workload_error("not enough distinct contents to sample from");
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(k);
  return pool;
}

// k issue times inside [start, end): exponential gaps, resampled until the
// whole sequence fits, squeezed into the window as a last resort.
std::vector<Seconds> issue_times(std::size_t k, const WorkloadConfig& cfg, std::mt19937_64& rng) {
  std::exponential_distribution<double> gap(cfg.lambda_req);
  const Seconds window = cfg.req_end_s - cfg.req_start_s;
  std::vector<Seconds> gaps(k);
  for (int attempt = 0; attempt < kScheduleTries; ++attempt) {
    for (auto& g : gaps) g = gap(rng);
    if (std::accumulate(gaps.begin(), gaps.end(), 0.0) < window) break;
  }
  double total = std::accumulate(gaps.begin(), gaps.end(), 0.0);
  double squeeze = total < window ? 1.0 : 0.999 * window / total;
  std::vector<Seconds> out;
  Seconds t = cfg.req_start_s;
  for (auto g : gaps) {
    t += g * squeeze;
    out.push_back(t);
  }
  return out;
}

}  // namespace

Workload build_workload(const WorkloadConfig& cfg, const std::vector<NodeMeta>& meta,
                        std::uint64_t seed) {
  if (meta.empty()) throw workload_error("trace has no nodes");
  int n_comm = 0;
  for (const auto& m : meta) n_comm = std::max(n_comm, m.community + 1);
  if (cfg.producers <= 0 || cfg.producers % n_comm != 0)
    throw workload_error("producers must divide evenly among " + std::to_string(n_comm) +
                         " communities");
  if (cfg.types_per_producer <= 0 || cfg.chunks_per_type <= 0 || cfg.requests_per_consumer <= 0 ||
      cfg.consumers_per_community < 0)
    throw workload_error("counts must be positive");
  if (!(cfg.lambda_req > 0) || !(cfg.req_end_s > cfg.req_start_s))
    throw workload_error("request rate and window must be positive");
  double local_exact = cfg.local_fraction * cfg.requests_per_consumer;
  if (cfg.local_fraction < 0 || cfg.local_fraction > 1 ||
      std::abs(local_exact - std::round(local_exact)) > 1e-9)
    throw workload_error("local_fraction x requests_per_consumer must be an integer");
  const auto n_local = static_cast<std::size_t>(std::round(local_exact));
  const std::size_t n_external = static_cast<std::size_t>(cfg.requests_per_consumer) - n_local;
  if (n_external > 0 && n_comm < 2) throw workload_error("external requests need two communities");

  std::mt19937_64 rng(seed ^ kWorkloadStream);
  const int per_comm = cfg.producers / n_comm;
  std::vector<std::vector<NodeId>> producers_of(static_cast<std::size_t>(n_comm));
  std::vector<std::vector<NodeId>> consumers_of(static_cast<std::size_t>(n_comm));
  Workload w;
  for (int k = 0; k < n_comm; ++k) {
    std::vector<NodeId> members;
    for (std::size_t v = 0; v < meta.size(); ++v)
      if (meta[v].community == k && !meta[v].traveller) members.push_back(static_cast<NodeId>(v));
    if (members.size() < static_cast<std::size_t>(per_comm + cfg.consumers_per_community))
      throw workload_error("community " + std::to_string(k) + " has too few non-traveller nodes");
    std::shuffle(members.begin(), members.end(), rng);
    auto& p = producers_of[static_cast<std::size_t>(k)];
    auto& c = consumers_of[static_cast<std::size_t>(k)];
    p.assign(members.begin(), members.begin() + per_comm);
    c.assign(members.begin() + per_comm, members.begin() + per_comm + cfg.consumers_per_community);
    std::sort(p.begin(), p.end());
    std::sort(c.begin(), c.end());
    w.producers.insert(w.producers.end(), p.begin(), p.end());
    w.consumers.insert(w.consumers.end(), c.begin(), c.end());
  }
  std::sort(w.producers.begin(), w.producers.end());
  std::sort(w.consumers.begin(), w.consumers.end());
  w.catalog = ContentCatalog(w.producers, cfg.types_per_producer, cfg.chunks_per_type);

  std::vector<std::vector<ContentId>> pool(static_cast<std::size_t>(n_comm));
  for (int k = 0; k < n_comm; ++k)
    for (NodeId p : producers_of[static_cast<std::size_t>(k)]) {
      auto cs = w.catalog.contents_of(p);
      pool[static_cast<std::size_t>(k)].insert(pool[static_cast<std::size_t>(k)].end(), cs.begin(), cs.end());
    }

  // External requests split evenly over the other communities; the first
  // ones take the remainder.
  auto external_share = [&](int home, int other) {
    int rank = other < home ? other : other - 1;
    std::size_t base = n_external / static_cast<std::size_t>(n_comm - 1);
    return base + (static_cast<std::size_t>(rank) < n_external % static_cast<std::size_t>(n_comm - 1) ? 1 : 0);
  };

  // Identical-set mode: one local set per community and one exported set per
  // source community, shared by every consumer that requests from it.
  std::vector<std::vector<ContentId>> shared_local, shared_export;
  if (cfg.overlap_mode == OverlapMode::identical_set) {
    std::size_t export_size = n_comm > 1 ? n_external / static_cast<std::size_t>(n_comm - 1) : 0;
    if (n_comm > 1 && n_external % static_cast<std::size_t>(n_comm - 1) != 0)
      throw workload_error("identical_set needs external requests divisible by the other communities");
    for (int k = 0; k < n_comm; ++k) {
      shared_local.push_back(sample(pool[static_cast<std::size_t>(k)], n_local, rng));
      shared_export.push_back(sample(pool[static_cast<std::size_t>(k)], export_size, rng));
    }
  }

  std::vector<Pending> pending;
  for (int k = 0; k < n_comm; ++k) {
    for (NodeId c : consumers_of[static_cast<std::size_t>(k)]) {
      std::vector<std::pair<ContentId, bool>> names;
      if (cfg.overlap_mode == OverlapMode::identical_set) {
        for (ContentId x : shared_local[static_cast<std::size_t>(k)]) names.emplace_back(x, true);
        for (int j = 0; j < n_comm; ++j)
          if (j != k)
            for (ContentId x : shared_export[static_cast<std::size_t>(j)]) names.emplace_back(x, false);
      } else {
        for (ContentId x : sample(pool[static_cast<std::size_t>(k)], n_local, rng)) names.emplace_back(x, true);
        for (int j = 0; j < n_comm; ++j)
          if (j != k)
            for (ContentId x : sample(pool[static_cast<std::size_t>(j)], external_share(k, j), rng))
              names.emplace_back(x, false);
      }
      std::shuffle(names.begin(), names.end(), rng);
      auto times = issue_times(names.size(), cfg, rng);
      for (std::size_t i = 0; i < names.size(); ++i)
        pending.push_back(Pending{c, names[i].first, times[i], names[i].second});
    }
  }
  std::stable_sort(pending.begin(), pending.end(), [](const Pending& x, const Pending& y) {
    if (x.issue != y.issue) return x.issue < y.issue;
    return x.consumer < y.consumer;
  });
  for (std::size_t i = 0; i < pending.size(); ++i) {
    const auto& p = pending[i];
    w.requests.push_back(Request{static_cast<RequestId>(i), p.consumer, p.content, p.issue, p.local});
  }
  return w;
}

void save_schedule(const Workload& w, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw workload_error("cannot write " + path.string());
  out << "consumer,producer,type,chunk,issue_s,request_id\n";
  for (const auto& r : w.requests) {
    ContentName n = w.catalog.name_of(r.content);
    out << r.consumer << ',' << n.producer << ',' << n.type << ',' << n.chunk << ','
        << csv::format(r.issue_s) << ',' << r.id << '\n';
  }
}

std::vector<Request> load_schedule(const std::filesystem::path& path, const ContentCatalog& catalog,
                                   const std::vector<NodeMeta>& meta) {
  std::ifstream in(path);
  if (!in) throw workload_error("cannot read " + path.string());
  std::vector<Request> out;
  std::set<RequestId> ids;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& why) {
    throw workload_error(path.string() + ":" + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto text = csv::trim(line);
    if (text.empty()) continue;
    auto f = csv::split(text);
    if (lineno == 1 && f[0] == "consumer") continue;
    if (f.size() != 6) fail("expected 6 fields");
    auto consumer = csv::parse<NodeId>(f[0]);
    auto producer = csv::parse<NodeId>(f[1]);
    auto type = csv::parse<std::uint16_t>(f[2]);
    auto chunk = csv::parse<std::uint16_t>(f[3]);
    auto issue = csv::parse<double>(f[4]);
    auto id = csv::parse<RequestId>(f[5]);
    if (!consumer || !producer || !type || !chunk || !issue || !id) fail("malformed number");
    if (*consumer < 0 || static_cast<std::size_t>(*consumer) >= meta.size()) fail("unknown consumer");
    auto content = catalog.find(ContentName{*producer, *type, *chunk});
    if (!content) fail("unknown content");
    if (!ids.insert(*id).second) fail("duplicate request id");
    bool local = meta[static_cast<std::size_t>(*consumer)].community ==
                 meta.at(static_cast<std::size_t>(*producer)).community;
    out.push_back(Request{*id, *consumer, *content, *issue, local});
  }
  return out;
}

}  // namespace mobccn
