#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "jroc/lattice.hpp"

namespace jroc {

enum class SearchMethod { bmc, btc, bjc, rnd };
enum class Criterion { mc, tc, jc };

std::string to_string(SearchMethod method);
SearchMethod parse_search_method(std::string_view text);  // bmc|btc|bjc|rnd, any case
Criterion criterion_of(SearchMethod method);              // throws for rnd

struct SearchTrace {
  SearchMethod method = SearchMethod::bmc;
  // Every evaluated configuration, in evaluation order.
  std::vector<EvalPoint> visited;
  // Backward methods only: full configuration down to the empty one.
  std::vector<FeatureConfiguration> greedy_path;

  std::size_t budget() const noexcept { return visited.size(); }
};

// Greedy backward elimination. Each level evaluates every single-attribute
// removal from the current configuration and descends into the best one.
// Ties: lower criterion, then lower mean_mc, then lower mean_tc, then lower
// bitmask. alpha_for_jc must be given iff criterion is jc.
SearchTrace backward_search(const PointFunction& evaluate, std::size_t m, Criterion criterion,
                            std::optional<double> alpha_for_jc = std::nullopt);
SearchTrace backward_search(const TrainedModel& model, const std::string& model_id, const Dataset& d,
                            const PerExampleContext& pec, Criterion criterion,
                            std::optional<double> alpha_for_jc = std::nullopt);

// `budget` distinct configurations drawn uniformly without replacement; the
// empty configuration is always the first one.
SearchTrace random_search(const PointFunction& evaluate, std::size_t m, std::size_t budget,
                          std::uint64_t seed);
SearchTrace random_search(const TrainedModel& model, const std::string& model_id, const Dataset& d,
                          const PerExampleContext& pec, std::size_t budget, std::uint64_t seed);

nlohmann::json to_json(const SearchTrace& trace);

}  // namespace jroc
