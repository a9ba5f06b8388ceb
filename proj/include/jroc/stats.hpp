#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace jroc {

// N result rows (e.g. dataset x alpha cells) by k methods; lower is better.
struct ResultMatrix {
  std::vector<std::string> row_labels;
  std::vector<std::string> methods;
  std::vector<std::vector<double>> values;

  std::size_t rows() const noexcept { return values.size(); }
  std::size_t cols() const noexcept { return methods.size(); }
  // Rectangular, N >= 2, k >= 2, finite cells; throws ValidationError.
  void validate() const;
};

// CSV with a header "row,<method>,..." and one labelled line per row.
ResultMatrix read_result_matrix_csv(std::istream& in);
ResultMatrix read_result_matrix_csv(const std::filesystem::path& path);
void write_result_matrix_csv(std::ostream& out, const ResultMatrix& m);
void write_result_matrix_csv(const std::filesystem::path& path, const ResultMatrix& m);

// Ascending ranks of one row; tied values share the mean of their positions.
std::vector<double> mid_ranks(std::span<const double> row);
// Column means of the per-row mid-ranks.
std::vector<double> average_ranks(const ResultMatrix& m);

struct FriedmanResult {
  double chi_square = 0;           // 12N/(k(k+1)) * (sum R^2 - k(k+1)^2/4)
  double chi_square_critical = 0;  // df = k - 1
  double chi_square_p = 1;
  bool reject = false;
  double iman_davenport = 0;  // (N-1) chi^2 / (N(k-1) - chi^2)
  double f_critical = 0;      // df = (k-1, (k-1)(N-1))
  double f_p = 1;
  bool f_reject = false;
  double significance = 0.05;
};

FriedmanResult friedman_statistic(std::span<const double> average_ranks, std::size_t n_rows,
                                  double significance = 0.05);

// Two-tailed Nemenyi q values for k = 2..10 at significance 0.05 or 0.10.
double nemenyi_q(std::size_t k, double significance);
// q * sqrt(k(k+1) / (6N)).
double nemenyi_critical_difference(std::size_t k, std::size_t n_rows, double significance = 0.05);

struct PairwiseComparison {
  std::size_t a = 0, b = 0;
  double rank_difference = 0;  // |R_a - R_b|
  bool significant = false;
};

struct StatsReport {
  std::vector<std::string> methods;
  std::size_t n_rows = 0;
  std::vector<double> ranks;
  FriedmanResult friedman;
  double critical_difference = 0;
  std::vector<PairwiseComparison> pairs;
};

StatsReport analyze(const ResultMatrix& m, double significance = 0.05);
nlohmann::json to_json(const StatsReport& report);

}  // namespace jroc
