#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "jroc/classifiers.hpp"
#include "jroc/cost.hpp"
#include "jroc/data.hpp"
#include "jroc/hull.hpp"
#include "jroc/plot.hpp"
#include "jroc/stats.hpp"

namespace jroc {

// Point-generation methods compared by the experiment protocol.
enum class Method { full, bmc, btc, bjc, rnd };

std::string to_string(Method method);
Method parse_method(std::string_view text);  // case-insensitive Full|BMC|BTC|BJC|RND

struct ModelEntry {
  std::string id;
  ClassifierSpec spec;
};

struct ContextMode {
  bool variable = false;
  double beta = default_beta;
};

struct ExperimentConfig {
  std::vector<std::filesystem::path> datasets;
  std::vector<ModelEntry> models;
  ContextMode context;
  std::vector<double> alpha_grid{0.1, 0.3, 0.5, 0.7, 0.9};
  std::size_t repetitions = 4;
  std::vector<Method> methods{Method::full, Method::bmc, Method::btc, Method::bjc, Method::rnd};
  std::uint64_t seed = 0;
  std::size_t lattice_ceiling = default_lattice_ceiling;
  std::string missing_token = "?";

  // Throws ValidationError for empty lists, alphas outside [0, 1], zero
  // repetitions or duplicate model ids.
  void validate() const;
};

// Relative dataset paths are resolved against base_dir.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j,
                                             const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& config);

// Outcome of one method at one alpha within a repetition.
struct MethodSelection {
  Method method = Method::full;
  double alpha = 0;
  // Every point the method produced, pooled over models.
  std::vector<EvalPoint> candidates;
  // Configurations evaluated per model (2^m for Full, m(m+1)/2+1 otherwise).
  std::size_t configurations_per_model = 0;
  EvalPoint selected;
  double validation_jc = 0;
  double test_jc = 0;
};

struct RepetitionResult {
  CostContext context;
  std::vector<MethodSelection> selections;  // method-major, then alpha
};

// One repetition of the protocol: split 2/3 work + 1/3 test, split work into
// train and validation halves, train every model, generate points on the
// validation half, select per alpha and score the selection on the test part.
RepetitionResult run_repetition(const Dataset& d, const ExperimentConfig& config, std::size_t dataset_index,
                                std::size_t repetition);

struct ExperimentCell {
  std::string dataset;
  std::size_t repetition = 0;
  Method method = Method::full;
  double alpha = 0;
  std::string model_id;
  FeatureConfiguration cfg;
  double validation_jc = 0;
  double test_jc = 0;
  std::size_t configurations_per_model = 0;
};

struct DatasetSummary {
  std::string name;
  std::size_t m = 0, n = 0, c = 0;
};

struct PlotData {
  std::string dataset;
  std::string context;
  std::vector<PlotSeries> series;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<DatasetSummary> datasets;
  std::vector<ExperimentCell> cells;  // dataset, repetition, method, alpha order
  ResultMatrix matrix;                // rows dataset x alpha; mean test JC over repetitions
  ResultMatrix validation_matrix;     // same layout with validation JC
  std::optional<StatsReport> stats;
  std::vector<PlotData> plots;  // first repetition of each dataset
};

// Mean and sample standard deviation of one method's JC over a group of cells.
struct SummaryTable {
  std::vector<std::string> row_labels;
  std::vector<std::string> methods;
  std::vector<std::vector<double>> mean;
  std::vector<std::vector<double>> sd;
};
SummaryTable summarize_by_dataset(const ExperimentReport& r, bool test = true);
SummaryTable summarize_by_alpha(const ExperimentReport& r, bool test = true);

ExperimentReport run_experiment(const ExperimentConfig& config);

// Writes cells.csv, summary_by_dataset.csv, summary_by_alpha.csv,
// result_matrix.csv, validation_matrix.csv, stats.json, report.json and one
// plot_<dataset>_<context>.svg per dataset into dir.
void emit_report(const ExperimentReport& r, const std::filesystem::path& dir);

}  // namespace jroc
