#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "jroc/cost.hpp"
#include "jroc/error.hpp"

using namespace jroc;

namespace {

// Iris example: attributes SL, SW, PL, PW; classes setosa, versicolour, virginica.
CostContext iris_example() {
  return CostContext({3, 2, 10, 5}, {{0, 20, 15}, {5, 0, 15}, {30, 15, 0}}, 0.5);
}

constexpr std::size_t setosa = 0, versicolour = 1, virginica = 2;

}  // namespace

TEST_CASE("misclassification cost reads rows as predicted and columns as actual") {
  const auto ctx = iris_example();
  CHECK(misclassification_cost(ctx, virginica, versicolour) == 15);
  CHECK(misclassification_cost(ctx, setosa, versicolour) == 20);
  CHECK(misclassification_cost(ctx, versicolour, setosa) == 5);
  CHECK(misclassification_cost(ctx, setosa, setosa) == 0);
  CHECK_THROWS_AS(misclassification_cost(ctx, 3, 0), ValidationError);
}

TEST_CASE("test cost sums purchased non-null attributes") {
  const auto ctx = iris_example();
  const Instance x{{5.1, 3.5, 1.4, 0.2}, versicolour};
  CHECK(test_cost(ctx, x, FeatureConfiguration::from_bit_string("1010")) == 13);
  CHECK(test_cost(ctx, x, FeatureConfiguration::empty(4)) == 0);
  CHECK(test_cost(ctx, x, FeatureConfiguration::full(4)) == 20);
  const Instance partial{{5.1, std::nullopt, 1.4, 0.2}, versicolour};
  CHECK(test_cost(ctx, partial, FeatureConfiguration::full(4)) == 18);
  CHECK_THROWS_AS(test_cost(ctx, x, FeatureConfiguration::full(3)), ValidationError);
}

TEST_CASE("joint cost endpoints and midpoint") {
  CHECK(joint_cost(1.0, 7, 99) == 7);
  CHECK(joint_cost(0.0, 7, 99) == 99);
  CHECK(joint_cost(0.5, 15, 13) == 14);
  CHECK(joint_cost(iris_example(), 15, 13) == 14);
}

TEST_CASE("joint cost is linear in both costs") {
  for (double alpha : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    const double a = joint_cost(alpha, 1.5, 2.5);
    const double b = joint_cost(alpha, 0.25, 4.0);
    CHECK(joint_cost(alpha, 1.5 + 0.25, 2.5 + 4.0) == doctest::Approx(a + b).epsilon(1e-14));
    CHECK(joint_cost(alpha, 3 * 1.5, 3 * 2.5) == doctest::Approx(3 * a).epsilon(1e-14));
  }
}

TEST_CASE("context invariants are validated") {
  CHECK_THROWS_AS(CostContext({1}, {{1, 1}, {1, 0}}), ValidationError);
  CHECK_THROWS_AS(CostContext({-1}, {{0, 1}, {1, 0}}), ValidationError);
  CHECK_THROWS_AS(CostContext({1}, {{0, 1}, {1, 0}}, 1.5), ValidationError);
  CHECK_THROWS_AS(CostContext({1}, {{0}}), ValidationError);
  CHECK_THROWS_AS(CostContext({1}, {{0, 1}, {1}}), ValidationError);
}

TEST_CASE("uniform context values") {
  const auto u = uniform_context(4, 3);
  for (double t : u.test_costs()) CHECK(t == 0.25);
  CHECK(u.mc(0, 1) == 1.5);
  CHECK(u.mc(2, 2) == 0);
  CHECK(u.alpha() == 0.5);
  const auto b = uniform_context(8, 2);
  CHECK(b.mc(0, 1) == 2.0);
  CHECK(b.mc_sum() == 4.0);
  for (std::size_t m = 1; m < 12; ++m) {
    for (std::size_t c = 2; c < 8; ++c) CHECK(uniform_context(m, c).is_normalized(1e-12));
  }
  CHECK_THROWS_AS(uniform_context(0, 2), ValidationError);
  CHECK_THROWS_AS(uniform_context(3, 1), ValidationError);
}

TEST_CASE("a uniform random predictor on balanced classes has expected cost one") {
  for (std::size_t c = 2; c <= 10; ++c) {
    const auto u = uniform_context(3, c);
    double expected = 0;
    for (std::size_t p = 0; p < c; ++p) {
      for (std::size_t a = 0; a < c; ++a) expected += u.mc(p, a) / static_cast<double>(c * c);
    }
    CHECK(std::abs(expected - 1.0) < 1e-12);
  }
}

TEST_CASE("random context is normalized, deterministic and uniform at beta zero") {
  CHECK(random_context(5, 3, 0.0, 17) == uniform_context(5, 3));
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t m = 1 + seed % 9, c = 2 + seed % 5;
    const auto r = random_context(m, c, default_beta, seed);
    CHECK(std::abs(r.test_cost_sum() - 1.0) < 1e-9);
    CHECK(std::abs(r.mc_sum() - static_cast<double>(c * c)) < 1e-9);
    for (std::size_t k = 0; k < c; ++k) CHECK(r.mc(k, k) == 0);
    CHECK(r == random_context(m, c, default_beta, seed));
  }
  CHECK_FALSE(random_context(4, 3, 10, 1) == random_context(4, 3, 10, 2));
  CHECK_THROWS_AS(random_context(4, 3, -1, 1), ValidationError);
}

TEST_CASE("random context entries stay within the dispersion bounds") {
  // Before normalization every factor lies in [e^{-beta/2}, e^{beta/2}], so the
  // ratio of any two test costs is bounded by e^{beta}.
  const double beta = 4;
  const auto r = random_context(6, 4, beta, 5);
  const auto& t = r.test_costs();
  const double hi = *std::max_element(t.begin(), t.end());
  const double lo = *std::min_element(t.begin(), t.end());
  CHECK(hi / lo <= std::exp(beta) + 1e-9);
}

TEST_CASE("normalization scales test costs and the matrix") {
  const auto n = normalize_context(iris_example());
  CHECK(n.test_costs()[0] == doctest::Approx(0.15));
  CHECK(n.test_costs()[1] == doctest::Approx(0.10));
  CHECK(n.test_costs()[2] == doctest::Approx(0.50));
  CHECK(n.test_costs()[3] == doctest::Approx(0.25));
  CHECK(n.mc_sum() == doctest::Approx(9.0));
  CHECK(n.mc(2, 0) == doctest::Approx(30.0 * 9.0 / 100.0));
  CHECK(n.alpha() == 0.5);
  const auto twice = normalize_context(n);
  for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(twice.test_costs()[j] - n.test_costs()[j]) < 1e-12);
  const CostContext nine({0.5, 0.5}, {{0, 1, 2}, {1, 0, 1}, {2, 2, 0}});
  CHECK(normalize_context(nine).mc_matrix() == nine.mc_matrix());
  CHECK_THROWS_AS(normalize_context(CostContext({0, 0}, {{0, 1}, {1, 0}})), ValidationError);
}

TEST_CASE("test cost is monotone in the configuration") {
  const auto ctx = random_context(5, 2, 10, 3);
  const auto d = jroc::testing::random_dataset(4, 5, 20, 2, 0.3);
  for (const auto& x : d.instances()) {
    for (std::uint64_t a = 0; a < 32; ++a) {
      for (std::uint64_t b = 0; b < 32; ++b) {
        const FeatureConfiguration ca(5, a), cb(5, b);
        if (ca.is_subset_of(cb)) CHECK(test_cost(ctx, x, ca) <= test_cost(ctx, x, cb));
      }
    }
  }
}

TEST_CASE("context json round trip and loader rules") {
  const auto ctx = iris_example();
  auto j = to_json(ctx);
  j["normalized"] = false;
  CHECK(context_from_json(j) == ctx);
  j["normalized"] = true;
  CHECK(context_from_json(j) == normalize_context(ctx));
  CHECK(context_from_json(j, false) == ctx);

  auto bad = j;
  bad["mc_matrix"][0][0] = 1.0;
  CHECK_THROWS_AS(context_from_json(bad), ValidationError);
  CHECK_THROWS_AS(context_from_json(nlohmann::json{{"alpha", 0.5}}), ValidationError);

  const auto path = std::filesystem::temp_directory_path() / "jroc_context_test.json";
  save_context(ctx, path);
  CHECK(load_context(path, false) == ctx);
  CHECK_THROWS_AS(load_context("/nonexistent/ctx.json"), IoError);
}

TEST_CASE("per-example contexts") {
  const PerExampleContext global(uniform_context(3, 2));
  CHECK(global.is_global());
  CHECK(global.at(1000) == uniform_context(3, 2));
  global.check_compatible(3, 2, 10);
  CHECK_THROWS_AS(global.check_compatible(4, 2, 10), ValidationError);

  const PerExampleContext each(std::vector<CostContext>{uniform_context(3, 2), random_context(3, 2, 10, 1)});
  CHECK_FALSE(each.is_global());
  CHECK(each.at(1) == random_context(3, 2, 10, 1));
  CHECK_THROWS_AS(each.check_compatible(3, 2, 3), ValidationError);
  CHECK_THROWS_AS(PerExampleContext(std::vector<CostContext>{}), ValidationError);
}
