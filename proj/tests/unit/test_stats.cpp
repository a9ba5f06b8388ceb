#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "jroc/error.hpp"
#include "jroc/rng.hpp"
#include "jroc/stats.hpp"

using namespace jroc;
using jroc::testing::fixture_path;

namespace {

// Counting definition of the mid-rank: 1 + #smaller + (#equal - 1) / 2.
std::vector<double> counted_ranks(const std::vector<double>& row) {
  std::vector<double> out;
  for (double v : row) {
    double smaller = 0, equal = 0;
    for (double w : row) {
      smaller += w < v ? 1 : 0;
      equal += w == v ? 1 : 0;
    }
    out.push_back(1 + smaller + (equal - 1) / 2);
  }
  return out;
}

std::vector<double> counted_average(const ResultMatrix& m) {
  std::vector<double> avg(m.cols(), 0.0);
  for (const auto& row : m.values) {
    const auto r = counted_ranks(row);
    for (std::size_t j = 0; j < r.size(); ++j) avg[j] += r[j] / static_cast<double>(m.rows());
  }
  return avg;
}

ResultMatrix random_matrix(std::uint64_t seed, std::size_t n, std::size_t k) {
  Rng rng(seed);
  ResultMatrix m;
  for (std::size_t j = 0; j < k; ++j) m.methods.push_back("m" + std::to_string(j));
  for (std::size_t i = 0; i < n; ++i) {
    m.row_labels.push_back("r" + std::to_string(i));
    std::vector<double> row;
    // Coarse values so ties are common.
    for (std::size_t j = 0; j < k; ++j) row.push_back(static_cast<double>(rng.below(4)) / 4.0 + 0.1 * j * (j % 2));
    m.values.push_back(row);
  }
  return m;
}

}  // namespace

TEST_CASE("mid-ranks share tied positions") {
  const std::vector<double> row{0.3, 0.1, 0.3, 0.5, 0.1};
  CHECK(mid_ranks(row) == std::vector<double>{3.5, 1.5, 3.5, 5, 1.5});
  const std::vector<double> flat(5, 0.7);
  CHECK(mid_ranks(flat) == std::vector<double>(5, 3.0));
}

TEST_CASE("rank rows always sum to k(k+1)/2 and agree with the counting definition") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto m = random_matrix(seed, 6, 2 + seed % 9);
    const double k = static_cast<double>(m.cols());
    for (const auto& row : m.values) {
      const auto r = mid_ranks(row);
      CHECK(std::accumulate(r.begin(), r.end(), 0.0) == k * (k + 1) / 2);
      CHECK(r == counted_ranks(row));
    }
    const auto avg = average_ranks(m);
    const auto expected = counted_average(m);
    for (std::size_t j = 0; j < avg.size(); ++j) CHECK(avg[j] == doctest::Approx(expected[j]).epsilon(1e-12));
  }
}

TEST_CASE("average ranks ignore strictly increasing row transforms") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto m = random_matrix(seed, 8, 5);
    const auto before = average_ranks(m);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (double& v : m.values[i]) v = i % 2 == 0 ? std::exp(3 * v) : 7 * v + 2;
    }
    CHECK(average_ranks(m) == before);
  }
}

TEST_CASE("Friedman statistic is unchanged by permuting methods") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto m = random_matrix(seed, 10, 5);
    auto permuted = m;
    const std::vector<std::size_t> order{3, 0, 4, 1, 2};
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < 5; ++j) permuted.values[i][j] = m.values[i][order[j]];
    }
    const auto a = friedman_statistic(average_ranks(m), m.rows());
    const auto b = friedman_statistic(average_ranks(permuted), m.rows());
    CHECK(a.chi_square == doctest::Approx(b.chi_square).epsilon(1e-12));
  }
}

TEST_CASE("Friedman statistic hand-computed cases") {
  const std::vector<double> equal(5, 3.0);
  const auto none = friedman_statistic(equal, 12);
  CHECK(none.chi_square == 0);
  CHECK_FALSE(none.reject);

  // Three rows, two methods, method a always wins: ranks (1, 2).
  ResultMatrix m{{"r1", "r2", "r3"}, {"a", "b"}, {{0.1, 0.2}, {0.3, 0.9}, {0.0, 0.5}}};
  const auto f = friedman_statistic(average_ranks(m), 3);
  // 12*3/(2*3) * (1 + 4 - 2*9/4) = 6 * 0.5
  CHECK(f.chi_square == doctest::Approx(3.0).epsilon(1e-12));
  CHECK_THROWS_AS(friedman_statistic(equal, 1), ValidationError);
}

TEST_CASE("Table 5 fixture statistics") {
  const auto m = read_result_matrix_csv(std::filesystem::path(fixture_path("table5.csv")));
  CHECK(m.rows() == 30);
  CHECK(m.cols() == 5);
  const auto r = average_ranks(m);
  const std::vector<double> expected{1.5, 3.05, 3.0667, 3.05, 4.3333};
  for (std::size_t j = 0; j < 5; ++j) CHECK(std::abs(r[j] - expected[j]) < 1e-4);
  // Values from an independent computation of the textbook formulas.
  const auto f = friedman_statistic(r, 30);
  CHECK(f.chi_square == doctest::Approx(48.4467).epsilon(1e-5));
  CHECK(f.chi_square_critical == doctest::Approx(9.4877).epsilon(1e-4));
  CHECK(f.reject);
  CHECK(f.iman_davenport == doctest::Approx(19.635).epsilon(1e-4));
  CHECK(f.f_critical == doctest::Approx(2.4499).epsilon(1e-4));
  CHECK(f.f_reject);
  CHECK(nemenyi_critical_difference(5, 30) == doctest::Approx(1.1137).epsilon(1e-4));
}

TEST_CASE("Table 8 fixture ranks under textbook mid-ranking") {
  const auto m = read_result_matrix_csv(std::filesystem::path(fixture_path("table8.csv")));
  const auto r = average_ranks(m);
  const auto expected = counted_average(m);
  for (std::size_t j = 0; j < 5; ++j) CHECK(r[j] == doctest::Approx(expected[j]).epsilon(1e-12));
  const std::vector<double> independent{1.2667, 3.3667, 2.6333, 3.4833, 4.25};
  for (std::size_t j = 0; j < 5; ++j) CHECK(std::abs(r[j] - independent[j]) < 1e-4);
}

TEST_CASE("Nemenyi critical difference") {
  CHECK(nemenyi_q(5, 0.05) == 2.728);
  CHECK(nemenyi_q(2, 0.10) == 1.645);
  CHECK(nemenyi_critical_difference(2, 2) == doctest::Approx(1.960 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(nemenyi_critical_difference(5, 30) == doctest::Approx(2.728 * std::sqrt(30.0 / 180.0)).epsilon(1e-12));
  for (std::size_t k = 2; k <= 10; ++k) {
    CHECK(nemenyi_critical_difference(k, 40, 0.1) ==
          doctest::Approx(nemenyi_critical_difference(k, 10, 0.1) / 2).epsilon(1e-12));
  }
  CHECK_THROWS_AS(nemenyi_q(11, 0.05), ValidationError);
  CHECK_THROWS_AS(nemenyi_q(1, 0.05), ValidationError);
  CHECK_THROWS_AS(nemenyi_q(5, 0.01), ValidationError);
}

TEST_CASE("result matrix csv round trip and validation") {
  const auto m = random_matrix(4, 5, 3);
  std::stringstream buffer;
  write_result_matrix_csv(buffer, m);
  std::istringstream in(buffer.str());
  const auto back = read_result_matrix_csv(in);
  CHECK(back.methods == m.methods);
  CHECK(back.row_labels == m.row_labels);
  CHECK(back.values == m.values);

  std::istringstream ragged("row,a,b\nx,1,2\ny,3\n");
  CHECK_THROWS_AS(read_result_matrix_csv(ragged), ValidationError);
  std::istringstream one_row("row,a,b\nx,1,2\n");
  CHECK_THROWS_AS(read_result_matrix_csv(one_row), ValidationError);
  std::istringstream missing("row,a,b\nx,1,2\ny,,3\n");
  CHECK_THROWS_AS(read_result_matrix_csv(missing), ValidationError);
  CHECK_THROWS_AS(read_result_matrix_csv(std::filesystem::path("/nonexistent.csv")), IoError);
}

TEST_CASE("analysis report flags pairs beyond the critical difference") {
  const auto m = read_result_matrix_csv(std::filesystem::path(fixture_path("table5.csv")));
  const auto report = analyze(m);
  CHECK(report.pairs.size() == 10);
  for (const auto& p : report.pairs) {
    CHECK(p.rank_difference == doctest::Approx(std::abs(report.ranks[p.a] - report.ranks[p.b])));
    CHECK(p.significant == (p.rank_difference > report.critical_difference));
  }
  const auto j = to_json(report);
  CHECK(j.at("friedman").at("reject") == true);
  CHECK(j.at("methods")[0] == "Full");
  CHECK(j.at("pairwise").size() == 10);
}
