#include "jroc/search.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <tuple>

#include <nlohmann/json.hpp>

#include "jroc/error.hpp"
#include "jroc/rng.hpp"

namespace jroc {

std::string to_string(SearchMethod method) {
  switch (method) {
    case SearchMethod::bmc: return "BMC";
    case SearchMethod::btc: return "BTC";
    case SearchMethod::bjc: return "BJC";
    case SearchMethod::rnd: return "RND";
  }
  return "?";
}

SearchMethod parse_search_method(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (lower == "bmc") return SearchMethod::bmc;
  if (lower == "btc") return SearchMethod::btc;
  if (lower == "bjc") return SearchMethod::bjc;
  if (lower == "rnd") return SearchMethod::rnd;
  throw ValidationError("unknown search method: " + std::string(text));
}

Criterion criterion_of(SearchMethod method) {
  switch (method) {
    case SearchMethod::bmc: return Criterion::mc;
    case SearchMethod::btc: return Criterion::tc;
    case SearchMethod::bjc: return Criterion::jc;
    case SearchMethod::rnd: break;
  }
  throw ValidationError("RND is not a backward method");
}

SearchTrace backward_search(const PointFunction& evaluate, std::size_t m, Criterion criterion,
                            std::optional<double> alpha_for_jc) {
  if (m < 1) throw ValidationError("backward search needs m >= 1");
  if ((criterion == Criterion::jc) != alpha_for_jc.has_value()) {
    throw ValidationError("alpha is required for, and only for, the JC criterion");
  }
  if (alpha_for_jc && !(*alpha_for_jc >= 0 && *alpha_for_jc <= 1)) {
    throw ValidationError("alpha must lie in [0, 1]");
  }
  const auto score = [&](const EvalPoint& p) {
    switch (criterion) {
      case Criterion::mc: return p.mean_mc;
      case Criterion::tc: return p.mean_tc;
      case Criterion::jc: return p.jc(*alpha_for_jc);
    }
    return p.mean_mc;
  };
  const auto key = [&](const EvalPoint& p) {
    return std::make_tuple(score(p), p.mean_mc, p.mean_tc, p.cfg.bits());
  };

  SearchTrace trace;
  trace.method = criterion == Criterion::mc   ? SearchMethod::bmc
                 : criterion == Criterion::tc ? SearchMethod::btc
                                              : SearchMethod::bjc;
  trace.visited.reserve(backward_budget(m));
  auto current = FeatureConfiguration::full(m);
  trace.visited.push_back(evaluate(current));
  trace.greedy_path.push_back(current);
  while (!current.is_empty()) {
    std::optional<std::size_t> best;
    for (std::size_t j = 0; j < m; ++j) {
      if (!current.contains(j)) continue;
      trace.visited.push_back(evaluate(current.without(j)));
      if (!best || key(trace.visited.back()) < key(trace.visited[*best])) best = trace.visited.size() - 1;
    }
    current = trace.visited[*best].cfg;
    trace.greedy_path.push_back(current);
  }
  return trace;
}

SearchTrace backward_search(const TrainedModel& model, const std::string& model_id, const Dataset& d,
                            const PerExampleContext& pec, Criterion criterion,
                            std::optional<double> alpha_for_jc) {
  ConfigurationEvaluator eval(model, model_id, d, pec);
  return backward_search(eval.as_function(), d.m(), criterion, alpha_for_jc);
}

SearchTrace random_search(const PointFunction& evaluate, std::size_t m, std::size_t budget,
                          std::uint64_t seed) {
  if (budget < 1) throw ValidationError("random search needs a budget >= 1");
  if (m >= FeatureConfiguration::max_width) throw ValidationError("random search supports m <= 63");
  const std::uint64_t lattice = std::uint64_t{1} << m;
  if (budget > lattice) {
    throw ValidationError("random search budget " + std::to_string(budget) + " exceeds the lattice size " +
                          std::to_string(lattice));
  }
  // Floyd's sampling of budget-1 distinct values from the 2^m - 1 non-empty
  // configurations.
  Rng rng(seed);
  const std::uint64_t pool = lattice - 1;
  const std::uint64_t want = budget - 1;
  std::set<std::uint64_t> chosen;
  for (std::uint64_t j = pool - want; j < pool; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    if (!chosen.insert(t + 1).second) chosen.insert(j + 1);
  }
  SearchTrace trace;
  trace.method = SearchMethod::rnd;
  trace.visited.reserve(budget);
  trace.visited.push_back(evaluate(FeatureConfiguration::empty(m)));
  for (std::uint64_t bits : chosen) trace.visited.push_back(evaluate({m, bits}));
  return trace;
}

SearchTrace random_search(const TrainedModel& model, const std::string& model_id, const Dataset& d,
                          const PerExampleContext& pec, std::size_t budget, std::uint64_t seed) {
  ConfigurationEvaluator eval(model, model_id, d, pec);
  return random_search(eval.as_function(), d.m(), budget, seed);
}

nlohmann::json to_json(const SearchTrace& trace) {
  nlohmann::json visited = nlohmann::json::array();
  for (const auto& p : trace.visited) {
    visited.push_back({{"model_id", p.model_id},
                       {"cfg", p.cfg.to_bit_string()},
                       {"popcount", p.cfg.count()},
                       {"mean_tc", p.mean_tc},
                       {"mean_mc", p.mean_mc}});
  }
  nlohmann::json path = nlohmann::json::array();
  for (const auto& cfg : trace.greedy_path) path.push_back(cfg.to_bit_string());
  return {{"method", to_string(trace.method)},
          {"budget", trace.budget()},
          {"visited", std::move(visited)},
          {"greedy_path", std::move(path)}};
}

}  // namespace jroc
