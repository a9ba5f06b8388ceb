#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "jroc/data.hpp"
#include "jroc/feature_configuration.hpp"

namespace jroc {

// Which learner to train and with what hyperparameters. Every kind accepts
// instances with arbitrary null patterns at prediction time.
class ClassifierSpec {
 public:
  enum class Kind { majority, knn, decision_tree, naive_bayes, bagging };

  static ClassifierSpec majority();
  static ClassifierSpec knn(std::size_t k);
  static ClassifierSpec decision_tree(std::size_t max_depth, std::size_t min_leaf);
  static ClassifierSpec naive_bayes();
  // bootstrap = false trains every round on the full sample (degenerate sampler).
  static ClassifierSpec bagging(ClassifierSpec base, std::size_t rounds, std::uint64_t seed,
                                bool bootstrap = true);

  Kind kind() const noexcept { return kind_; }
  std::size_t k() const noexcept { return k_; }
  std::size_t max_depth() const noexcept { return max_depth_; }
  std::size_t min_leaf() const noexcept { return min_leaf_; }
  std::size_t rounds() const noexcept { return rounds_; }
  std::uint64_t seed() const noexcept { return seed_; }
  bool bootstrap() const noexcept { return bootstrap_; }
  const ClassifierSpec& base() const;

  // Stable human-readable description, also used as the default model id.
  std::string describe() const;

  friend bool operator==(const ClassifierSpec& a, const ClassifierSpec& b);

 private:
  ClassifierSpec() = default;

  Kind kind_ = Kind::majority;
  std::size_t k_ = 1;
  std::size_t max_depth_ = 1;
  std::size_t min_leaf_ = 1;
  std::size_t rounds_ = 1;
  std::uint64_t seed_ = 0;
  bool bootstrap_ = true;
  std::shared_ptr<const ClassifierSpec> base_;
};

// JSON form: {"kind": "knn", "k": 3}, {"kind": "decision_tree", "max_depth": 8,
// "min_leaf": 2}, {"kind": "bagging", "base": {...}, "rounds": 10, "seed": 1}.
ClassifierSpec classifier_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ClassifierSpec& spec);
// Accepts JSON or the shorthand majority | nb | knn:K | tree:DEPTH:MINLEAF |
// bagging:ROUNDS:SEED:<base shorthand>.
ClassifierSpec parse_classifier_spec(std::string_view text);

namespace detail {
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual std::size_t predict(std::span<const Value> x) const = 0;
};
}  // namespace detail

// Immutable fitted model; cheap to copy and safe to share between threads.
class TrainedModel {
 public:
  const ClassifierSpec& spec() const noexcept { return *spec_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t c() const noexcept { return distribution_.size(); }
  const std::vector<double>& class_distribution() const noexcept { return distribution_; }
  std::size_t modal_class() const noexcept { return modal_; }

  // Throws ValidationError on width mismatch; otherwise always returns a class
  // index. An all-null instance yields the modal training class.
  std::size_t predict(std::span<const Value> x) const;
  std::size_t predict(const Instance& x) const { return predict(x.values); }

 private:
  friend TrainedModel train(const ClassifierSpec& spec, const Dataset& d);

  std::shared_ptr<const ClassifierSpec> spec_;
  std::size_t width_ = 0;
  std::vector<double> distribution_;
  std::size_t modal_ = 0;
  std::shared_ptr<const detail::Predictor> impl_;
};

TrainedModel train(const ClassifierSpec& spec, const Dataset& d);

// predict(model, mask_instance(x, cfg)) for every instance, in order.
std::vector<std::size_t> predict_dataset(const TrainedModel& model, const Dataset& d,
                                         const FeatureConfiguration& cfg);

}  // namespace jroc
