#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "jroc/classifiers.hpp"
#include "jroc/cost.hpp"
#include "jroc/data.hpp"
#include "jroc/feature_configuration.hpp"

namespace jroc {

// One (model, configuration) dot in TC/MC space. Costs are per-example means.
struct EvalPoint {
  std::string model_id;
  FeatureConfiguration cfg;
  double mean_tc = 0;
  double mean_mc = 0;

  double jc(double alpha) const noexcept { return alpha * mean_mc + (1 - alpha) * mean_tc; }

  friend bool operator==(const EvalPoint&, const EvalPoint&) = default;
};

// Requires a labeled dataset; throws ValidationError otherwise.
EvalPoint evaluate_configuration(const TrainedModel& model, const std::string& model_id,
                                 const Dataset& d, const PerExampleContext& pec,
                                 const FeatureConfiguration& cfg);

using PointFunction = std::function<EvalPoint(const FeatureConfiguration&)>;

// Binds a model to an evaluation set and caches every configuration it has
// evaluated. Not thread-safe; give each thread its own instance.
class ConfigurationEvaluator {
 public:
  ConfigurationEvaluator(TrainedModel model, std::string model_id, const Dataset& d,
                         PerExampleContext pec);

  const EvalPoint& operator()(const FeatureConfiguration& cfg) const;
  PointFunction as_function() const;

  std::size_t m() const noexcept { return d_->m(); }
  const std::string& model_id() const noexcept { return model_id_; }
  std::size_t distinct_evaluations() const noexcept { return cache_.size(); }

 private:
  TrainedModel model_;
  std::string model_id_;
  const Dataset* d_;
  PerExampleContext pec_;
  mutable std::unordered_map<std::uint64_t, EvalPoint> cache_;
};

inline constexpr std::size_t default_lattice_ceiling = 20;

// All 2^m configurations in ascending bitmask order. Refuses m above ceiling.
std::vector<EvalPoint> enumerate_full_lattice(const PointFunction& evaluate, std::size_t m,
                                              std::size_t ceiling = default_lattice_ceiling);
std::vector<EvalPoint> enumerate_full_lattice(const TrainedModel& model, const std::string& model_id,
                                              const Dataset& d, const PerExampleContext& pec,
                                              std::size_t ceiling = default_lattice_ceiling);

// CSV columns: model_id,cfg,popcount,mean_tc,mean_mc with cfg as a bit string
// (attribute 1 leftmost).
void write_points_csv(std::ostream& out, const std::vector<EvalPoint>& points);
void write_points_csv(const std::filesystem::path& path, const std::vector<EvalPoint>& points);
std::vector<EvalPoint> read_points_csv(std::istream& in);
std::vector<EvalPoint> read_points_csv(const std::filesystem::path& path);

}  // namespace jroc
