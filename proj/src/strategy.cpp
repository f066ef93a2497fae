#include "mobccn/strategy.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <stdexcept>

#include "mobccn/epidemic.hpp"
#include "mobccn/mobccn.hpp"

namespace mobccn {

namespace {

struct VariantName {
  Variant v;
  std::string_view canonical;
  std::array<std::string_view, 3> aliases;
};

constexpr std::array<VariantName, 7> kNames{{
    {Variant::basic, "MobCCN_basic", {"basic", "mobccn", ""}},
    {Variant::r1, "MobCCN_R1", {"r1", "", ""}},
    {Variant::r2, "MobCCN_R2", {"r2", "", ""}},
    {Variant::a, "MobCCN_A", {"a", "", ""}},
    {Variant::ah, "MobCCN_AH", {"ah", "", ""}},
    {Variant::ideal_epidemic, "IdealEpidemic", {"ideal", "ideal_epidemic", "epidemic"}},
    {Variant::limited_epidemic, "LimitedEpidemic", {"limited", "limited_epidemic", ""}},
}};

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  return true;
}

}  // namespace

std::string_view to_string(Variant v) {
  for (const auto& n : kNames)
    if (n.v == v) return n.canonical;
  return "?";
}

std::optional<Variant> parse_variant(std::string_view s) {
  for (const auto& n : kNames) {
    if (iequals(s, n.canonical)) return n.v;
    for (auto a : n.aliases)
      if (!a.empty() && iequals(s, a)) return n.v;
  }
  return std::nullopt;
}

bool is_mobccn(Variant v) {
  return v != Variant::ideal_epidemic && v != Variant::limited_epidemic;
}

std::unique_ptr<Strategy> make_strategy(const StrategyConfig& cfg, const RunContext& ctx) {
  if (!ctx.catalog) throw std::invalid_argument("strategy needs a content catalog");
  switch (cfg.variant) {
    case Variant::ideal_epidemic: return std::make_unique<IdealEpidemicStrategy>(ctx);
    case Variant::limited_epidemic: return std::make_unique<LimitedEpidemicStrategy>(cfg, ctx);
    default: return std::make_unique<MobCcnStrategy>(cfg, ctx);
  }
}

}  // namespace mobccn
