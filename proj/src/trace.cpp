#include "mobccn/trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "csv.hpp"

namespace mobccn {

namespace {

struct Stay {
  Seconds start;
  Seconds end;
  int community;
};

Seconds round_ms(Seconds t) { return std::round(t * 1000.0) / 1000.0; }

bool contact_less(const ContactEvent& x, const ContactEvent& y) {
  if (x.start != y.start) return x.start < y.start;
  if (x.a != y.a) return x.a < y.a;
  return x.b < y.b;
}

std::vector<Stay> traveller_timeline(const TraceConfig& cfg, int home, std::mt19937_64& rng) {
  std::vector<Stay> out;
  std::exponential_distribution<double> home_stay(cfg.traveller_visit_rate / 3600.0);
  std::exponential_distribution<double> visit(1.0 / cfg.mean_visit_duration_s);
  std::uniform_int_distribution<int> other(0, cfg.n_communities - 2);
  Seconds t = 0;
  while (t < cfg.duration_s) {
    Seconds leave = std::min(cfg.duration_s, t + home_stay(rng));
    out.push_back({t, leave, home});
    if (leave >= cfg.duration_s) break;
    int dest = other(rng);
    if (dest >= home) ++dest;
    Seconds back = std::min(cfg.duration_s, leave + visit(rng));
    out.push_back({leave, back, dest});
    t = back;
  }
  return out;
}

// Intervals during which both nodes are in the same community.
std::vector<std::pair<Seconds, Seconds>> co_located(const std::vector<Stay>& x,
                                                     const std::vector<Stay>& y) {
  std::vector<std::pair<Seconds, Seconds>> out;
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    Seconds s = std::max(x[i].start, y[j].start);
    Seconds e = std::min(x[i].end, y[j].end);
    if (s < e && x[i].community == y[j].community) {
      if (!out.empty() && out.back().second == s)
        out.back().second = e;
      else
        out.emplace_back(s, e);
    }
    if (x[i].end < y[j].end)
      ++i;
    else
      ++j;
  }
  return out;
}

[[noreturn]] void fail(const std::filesystem::path& path, std::size_t line, const std::string& why) {
  throw trace_error(path.string() + ":" + std::to_string(line) + ": " + why);
}

}  // namespace

ContactTrace generate_trace(const TraceConfig& cfg) {
  if (cfg.n_communities <= 0) throw trace_error("at least one community is required");
  if (cfg.n_nodes < cfg.n_communities) throw trace_error("fewer nodes than communities");
  if (cfg.travellers_per_community < 0) throw trace_error("negative traveller count");
  if (!(cfg.mean_intra_ict_s > 0) || !(cfg.mean_contact_duration_s > 0) || !(cfg.duration_s > 0))
    throw trace_error("times must be positive");
  if (cfg.travellers_per_community > 0 && cfg.n_communities > 1 &&
      (!(cfg.traveller_visit_rate > 0) || !(cfg.mean_visit_duration_s > 0)))
    throw trace_error("traveller rates must be positive");

  ContactTrace trace;
  const int n = cfg.n_nodes;
  trace.nodes.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < cfg.n_communities; ++k) {
    int lo = k * n / cfg.n_communities;
    int hi = (k + 1) * n / cfg.n_communities;
    if (cfg.travellers_per_community > hi - lo) throw trace_error("more travellers than members");
    for (int v = lo; v < hi; ++v)
      trace.nodes[static_cast<std::size_t>(v)] = NodeMeta{k, v - lo < cfg.travellers_per_community};
  }

  std::mt19937_64 rng(cfg.seed);
  std::vector<std::vector<Stay>> where(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    const NodeMeta& m = trace.nodes[static_cast<std::size_t>(v)];
    if (m.traveller && cfg.n_communities > 1)
      where[static_cast<std::size_t>(v)] = traveller_timeline(cfg, m.community, rng);
    else
      where[static_cast<std::size_t>(v)] = {{0, cfg.duration_s, m.community}};
  }

  std::exponential_distribution<double> gap(1.0 / cfg.mean_intra_ict_s);
  std::exponential_distribution<double> length(1.0 / cfg.mean_contact_duration_s);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      for (auto [s, e] : co_located(where[static_cast<std::size_t>(a)], where[static_cast<std::size_t>(b)])) {
        Seconds t = round_ms(s + gap(rng));
        while (t < e) {
          Seconds end = std::min(e, round_ms(t + length(rng)));
          if (end <= t) end = std::min(e, t + 0.001);
          if (end <= t) break;
          trace.contacts.push_back(ContactEvent{a, b, t, end});
          t = round_ms(end + gap(rng));
          if (t <= end) t = end + 0.001;
        }
      }
    }
  }
  std::sort(trace.contacts.begin(), trace.contacts.end(), contact_less);
  return trace;
}

ContactTrace scale_icts(const ContactTrace& trace, double factor) {
  if (!(factor > 0) || factor > 1) throw trace_error("ICT scale factor must be in (0, 1]");
  ContactTrace out;
  out.nodes = trace.nodes;
  std::map<std::pair<NodeId, NodeId>, std::vector<ContactEvent>> by_pair;
  for (const auto& c : trace.contacts) by_pair[{c.a, c.b}].push_back(c);
  for (auto& [pair, cs] : by_pair) {
    std::stable_sort(cs.begin(), cs.end(), contact_less);
    // Every contact moves earlier by the total gap time removed before it.
    Seconds shift = 0;
    for (std::size_t k = 0; k < cs.size(); ++k) {
      ContactEvent c = cs[k];
      if (k > 0) shift += (1.0 - factor) * (c.start - cs[k - 1].end);
      c.start -= shift;
      c.end -= shift;
      out.contacts.push_back(c);
    }
  }
  std::sort(out.contacts.begin(), out.contacts.end(), contact_less);
  return out;
}

ContactTrace clip_trace(const ContactTrace& trace, Seconds horizon) {
  ContactTrace out;
  out.nodes = trace.nodes;
  for (ContactEvent c : trace.contacts) {
    if (c.start >= horizon) continue;
    c.end = std::min(c.end, horizon);
    out.contacts.push_back(c);
  }
  return out;
}

void validate_trace(const ContactTrace& trace) {
  const auto n = static_cast<NodeId>(trace.n_nodes());
  std::map<std::pair<NodeId, NodeId>, Seconds> last_end;
  Seconds prev_start = -std::numeric_limits<Seconds>::infinity();
  for (std::size_t i = 0; i < trace.contacts.size(); ++i) {
    const ContactEvent& c = trace.contacts[i];
    auto where = "contact " + std::to_string(i) + ": ";
    if (c.a == c.b) throw trace_error(where + "self contact");
    if (c.a > c.b) throw trace_error(where + "node pair not ordered");
    if (c.a < 0 || c.b >= n) throw trace_error(where + "unknown node");
    if (!(c.end > c.start)) throw trace_error(where + "end must be after start");
    if (c.start < 0) throw trace_error(where + "negative time");
    if (c.start < prev_start) throw trace_error(where + "contacts not sorted by start");
    prev_start = c.start;
    auto [it, fresh] = last_end.try_emplace({c.a, c.b}, c.end);
    if (!fresh) {
      if (c.start < it->second) throw trace_error(where + "overlaps the previous contact of the pair");
      it->second = c.end;
    }
  }
}

std::filesystem::path metadata_path_for(const std::filesystem::path& trace_path) {
  auto p = trace_path;
  p.replace_filename(trace_path.stem().string() + ".meta.csv");
  return p;
}

void save_trace(const ContactTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw trace_error("cannot write " + path.string());
  out << "node_a,node_b,start_s,end_s\n";
  for (const auto& c : trace.contacts)
    out << c.a << ',' << c.b << ',' << csv::format(c.start) << ',' << csv::format(c.end) << '\n';
  std::ofstream meta(metadata_path_for(path));
  if (!meta) throw trace_error("cannot write " + metadata_path_for(path).string());
  meta << "node,community,is_traveller\n";
  for (std::size_t v = 0; v < trace.nodes.size(); ++v)
    meta << v << ',' << trace.nodes[v].community << ',' << (trace.nodes[v].traveller ? 1 : 0) << '\n';
}

ContactTrace load_trace(const std::filesystem::path& path) {
  std::vector<std::string> ignored;
  return load_trace(path, ignored);
}

ContactTrace load_trace(const std::filesystem::path& path, std::vector<std::string>& warnings) {
  std::ifstream in(path);
  if (!in) throw trace_error("cannot read " + path.string());
  ContactTrace trace;
  std::map<std::pair<NodeId, NodeId>, Seconds> last_end;
  Seconds prev_start = 0;
  NodeId max_node = -1;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto text = csv::trim(line);
    if (text.empty() || text.front() == '#') continue;
    auto f = csv::split(text);
    if (lineno == 1 && f[0] == "node_a") continue;
    if (f.size() != 4) fail(path, lineno, "expected 4 fields");
    auto a = csv::parse<NodeId>(f[0]);
    auto b = csv::parse<NodeId>(f[1]);
    auto s = csv::parse<double>(f[2]);
    auto e = csv::parse<double>(f[3]);
    if (!a || !b || !s || !e) fail(path, lineno, "malformed number");
    if (*a < 0 || *b < 0) fail(path, lineno, "negative node id");
    if (*a == *b) fail(path, lineno, "self contact");
    if (*s < 0) fail(path, lineno, "negative start time");
    if (!(*e > *s)) fail(path, lineno, "end must be after start");
    if (*s < prev_start) fail(path, lineno, "rows not sorted by start time");
    prev_start = *s;
    ContactEvent c{std::min(*a, *b), std::max(*a, *b), *s, *e};
    auto [it, fresh] = last_end.try_emplace({c.a, c.b}, c.end);
    if (!fresh) {
      if (c.start < it->second) fail(path, lineno, "overlaps the previous contact of the pair");
      it->second = c.end;
    }
    max_node = std::max(max_node, c.b);
    trace.contacts.push_back(c);
  }
  std::stable_sort(trace.contacts.begin(), trace.contacts.end(), contact_less);

  auto meta_path = metadata_path_for(path);
  std::ifstream meta(meta_path);
  if (!meta) {
    warnings.push_back("no metadata at " + meta_path.string() +
                       ": every node is a non-traveller of community 0");
    trace.nodes.assign(static_cast<std::size_t>(max_node + 1), NodeMeta{});
    return trace;
  }
  std::map<NodeId, NodeMeta> rows;
  lineno = 0;
  while (std::getline(meta, line)) {
    ++lineno;
    auto text = csv::trim(line);
    if (text.empty() || text.front() == '#') continue;
    auto f = csv::split(text);
    if (lineno == 1 && f[0] == "node") continue;
    if (f.size() != 3) fail(meta_path, lineno, "expected 3 fields");
    auto v = csv::parse<NodeId>(f[0]);
    auto k = csv::parse<int>(f[1]);
    auto t = csv::parse<int>(f[2]);
    if (!v || !k || !t || *v < 0 || *k < 0 || (*t != 0 && *t != 1))
      fail(meta_path, lineno, "malformed row");
    if (!rows.emplace(*v, NodeMeta{*k, *t == 1}).second) fail(meta_path, lineno, "duplicate node");
  }
  NodeId n = rows.empty() ? 0 : rows.rbegin()->first + 1;
  if (static_cast<std::size_t>(n) != rows.size()) throw trace_error(meta_path.string() + ": node ids must be 0..n-1");
  if (max_node >= n) throw trace_error(path.string() + ": node " + std::to_string(max_node) + " missing from metadata");
  for (auto& [v, m] : rows) trace.nodes.push_back(m);
  return trace;
}

}  // namespace mobccn
