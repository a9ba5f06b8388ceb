#include <doctest.h>

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "jroc/classifiers.hpp"
#include "jroc/cost.hpp"
#include "jroc/error.hpp"
#include "jroc/hull.hpp"
#include "jroc/lattice.hpp"
#include "jroc/search.hpp"

using namespace jroc;
using jroc::testing::random_dataset;

namespace {

// Deterministic pseudo-costs without any model: test cost is the number of
// purchased attributes weighted by index, misclassification cost a hash.
EvalPoint synthetic(const FeatureConfiguration& cfg) {
  double tc = 0;
  for (std::size_t j = 0; j < cfg.width(); ++j) {
    if (cfg.contains(j)) tc += 1.0 + static_cast<double>(j);
  }
  const double mc = static_cast<double>(mix_seed(cfg.bits() * 31 + cfg.width()) % 1000) / 1000.0;
  return {"s", cfg, tc, mc};
}

double key(const EvalPoint& p, Criterion c, double alpha) {
  switch (c) {
    case Criterion::mc: return p.mean_mc;
    case Criterion::tc: return p.mean_tc;
    case Criterion::jc: return p.jc(alpha);
  }
  return 0;
}

// Each greedy step must be a one-attribute removal that attains the minimum
// criterion among the removals evaluated at that level.
void check_greedy_shape(const SearchTrace& t, std::size_t m, Criterion c, double alpha) {
  REQUIRE(t.greedy_path.size() == m + 1);
  CHECK(t.greedy_path.front().is_full());
  CHECK(t.greedy_path.back().is_empty());
  CHECK(t.visited.front().cfg.is_full());
  std::size_t offset = 1;
  for (std::size_t level = 0; level < m; ++level) {
    const auto& parent = t.greedy_path[level];
    const auto& child = t.greedy_path[level + 1];
    CHECK(child.count() + 1 == parent.count());
    CHECK(child.is_subset_of(parent));
    const std::size_t width = m - level;
    double best = 1e300;
    double chosen = 0;
    for (std::size_t i = offset; i < offset + width; ++i) {
      const auto& p = t.visited[i];
      CHECK(p.cfg.is_subset_of(parent));
      CHECK(p.cfg.count() + 1 == parent.count());
      best = std::min(best, key(p, c, alpha));
      if (p.cfg == child) chosen = key(p, c, alpha);
    }
    CHECK(chosen == best);
    offset += width;
  }
  CHECK(offset == t.visited.size());
}

}  // namespace

TEST_CASE("backward searches obey the budget law for m = 1..12") {
  for (std::size_t m = 1; m <= 12; ++m) {
    for (auto c : {Criterion::mc, Criterion::tc}) {
      const auto t = backward_search(synthetic, m, c);
      CHECK(t.budget() == backward_budget(m));
      check_greedy_shape(t, m, c, 0);
    }
    const auto j = backward_search(synthetic, m, Criterion::jc, 0.3);
    CHECK(j.budget() == backward_budget(m));
    check_greedy_shape(j, m, Criterion::jc, 0.3);
    CHECK(random_search(synthetic, m, backward_budget(m), m).budget() == backward_budget(m));
  }
  CHECK(backward_search(synthetic, 4, Criterion::mc).budget() == 11);
  CHECK(backward_search(synthetic, 8, Criterion::mc).budget() == 37);
}

TEST_CASE("test cost guidance removes the most expensive attribute first") {
  const auto t = backward_search(synthetic, 5, Criterion::tc);
  for (std::size_t level = 0; level < 5; ++level) {
    CHECK_FALSE(t.greedy_path[level + 1].contains(4 - level));
  }
}

TEST_CASE("backward search argument checks") {
  CHECK_THROWS_AS(backward_search(synthetic, 0, Criterion::mc), ValidationError);
  CHECK_THROWS_AS(backward_search(synthetic, 3, Criterion::jc), ValidationError);
  CHECK_THROWS_AS(backward_search(synthetic, 3, Criterion::mc, 0.5), ValidationError);
  CHECK_THROWS_AS(backward_search(synthetic, 3, Criterion::jc, 1.5), ValidationError);
  CHECK(parse_search_method("BJC") == SearchMethod::bjc);
  CHECK(to_string(SearchMethod::rnd) == "RND");
  CHECK_THROWS_AS(parse_search_method("fwd"), ValidationError);
  CHECK_THROWS_AS(criterion_of(SearchMethod::rnd), ValidationError);
}

TEST_CASE("random search samples distinct configurations including the empty one") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t m = 2 + seed % 9;
    const auto t = random_search(synthetic, m, backward_budget(m), seed);
    std::set<std::uint64_t> bits;
    for (const auto& p : t.visited) bits.insert(p.cfg.bits());
    CHECK(bits.size() == backward_budget(m));
    CHECK(bits.count(0) == 1);
    CHECK(t.visited.front().cfg.is_empty());
    CHECK(t.greedy_path.empty());
    const auto again = random_search(synthetic, m, backward_budget(m), seed);
    CHECK(again.visited == t.visited);
  }
}

TEST_CASE("random search with the whole lattice as budget is exhaustive") {
  for (std::size_t m = 1; m <= 8; ++m) {
    const std::size_t total = std::size_t{1} << m;
    const auto t = random_search(synthetic, m, total, 5);
    std::set<std::uint64_t> bits;
    for (const auto& p : t.visited) bits.insert(p.cfg.bits());
    CHECK(bits.size() == total);
    CHECK_THROWS_AS(random_search(synthetic, m, total + 1, 5), ValidationError);
  }
  CHECK_THROWS_AS(random_search(synthetic, 3, 0, 5), ValidationError);
}

TEST_CASE("random search draws differ across seeds") {
  std::set<std::vector<std::uint64_t>> draws;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::vector<std::uint64_t> bits;
    for (const auto& p : random_search(synthetic, 10, 20, seed).visited) bits.push_back(p.cfg.bits());
    draws.insert(bits);
  }
  CHECK(draws.size() > 1);
}

TEST_CASE("uniform test costs make misclassification and joint guidance agree") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const std::size_t m = 3 + seed % 5;
    const auto d = random_dataset(seed, m, 60, 2 + seed % 3);
    const auto ctx = random_context(m, d.c(), 10, seed);
    // Keep the random matrix, flatten the test costs.
    const CostContext flat(std::vector<double>(m, 1.0 / static_cast<double>(m)), ctx.mc_matrix());
    const auto model = train(ClassifierSpec::decision_tree(4, 2), d);
    ConfigurationEvaluator eval(model, "tree", d, PerExampleContext(flat));
    const auto bmc = backward_search(eval.as_function(), m, Criterion::mc);
    for (double alpha : {0.1, 0.5, 0.9}) {
      CHECK(backward_search(eval.as_function(), m, Criterion::jc, alpha).greedy_path == bmc.greedy_path);
    }
  }
}

TEST_CASE("the full lattice is never beaten on the evaluation set") {
  const auto d = random_dataset(4, 6, 80, 3, 0.05);
  const auto model = train(ClassifierSpec::knn(3), d);
  ConfigurationEvaluator eval(model, "knn", d, PerExampleContext(random_context(6, 3, 10, 4)));
  const auto full = enumerate_full_lattice(eval.as_function(), 6);
  for (double alpha : {0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
    const double best = select_best(full, alpha).jc(alpha);
    for (const auto& trace : {backward_search(eval.as_function(), 6, Criterion::mc),
                              backward_search(eval.as_function(), 6, Criterion::tc),
                              backward_search(eval.as_function(), 6, Criterion::jc, alpha),
                              random_search(eval.as_function(), 6, backward_budget(6), 1)}) {
      CHECK(best <= select_best(trace.visited, alpha).jc(alpha));
    }
  }
}

TEST_CASE("trace json carries method, budget, visited points and the path") {
  const auto t = backward_search(synthetic, 3, Criterion::jc, 0.5);
  const auto j = to_json(t);
  CHECK(j.at("method") == "BJC");
  CHECK(j.at("budget") == 7);
  CHECK(j.at("visited").size() == 7);
  CHECK(j.at("greedy_path").size() == 4);
  CHECK(j.at("greedy_path")[0] == "111");
  CHECK(j.at("greedy_path")[3] == "000");
}
