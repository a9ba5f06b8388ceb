#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "jroc/data.hpp"
#include "jroc/feature_configuration.hpp"

namespace jroc {

// Operating condition: per-attribute test costs, a misclassification matrix
// indexed [predicted][actual] with a zero diagonal, and the trade-off alpha.
class CostContext {
 public:
  // Throws ValidationError unless M is c x c (c >= 2) with a zero diagonal,
  // every cost is finite and non-negative, and alpha is in [0, 1].
  CostContext(std::vector<double> test_costs, std::vector<std::vector<double>> mc_matrix,
              double alpha = 0.5);

  std::size_t m() const noexcept { return test_costs_.size(); }
  std::size_t c() const noexcept { return c_; }
  double alpha() const noexcept { return alpha_; }
  const std::vector<double>& test_costs() const noexcept { return test_costs_; }
  double mc(std::size_t predicted, std::size_t actual) const noexcept {
    return matrix_[predicted * c_ + actual];
  }
  std::vector<std::vector<double>> mc_matrix() const;

  double test_cost_sum() const noexcept;
  double mc_sum() const noexcept;
  // sum T == 1 and sum M == c^2 within tol.
  bool is_normalized(double tol = 1e-9) const noexcept;

  CostContext with_alpha(double alpha) const;

  friend bool operator==(const CostContext&, const CostContext&) = default;

 private:
  std::vector<double> test_costs_;
  std::size_t c_ = 0;
  std::vector<double> matrix_;
  double alpha_ = 0.5;
};

double misclassification_cost(const CostContext& ctx, std::size_t predicted, std::size_t actual);

// Sum of T[j] over attributes that are both in cfg and non-null in x.
double test_cost(const CostContext& ctx, const Instance& x, const FeatureConfiguration& cfg);
double test_cost(const CostContext& ctx, std::span<const Value> x, const FeatureConfiguration& cfg);

double joint_cost(double alpha, double mc, double tc);
inline double joint_cost(const CostContext& ctx, double mc, double tc) {
  return joint_cost(ctx.alpha(), mc, tc);
}

// T = 1/m each, off-diagonal M = c/(c-1), alpha = 0.5.
CostContext uniform_context(std::size_t m, std::size_t c);

// Every T entry and off-diagonal M entry of the uniform context is multiplied
// by exp(beta * (u - 0.5)), u ~ U(0,1), then the result is normalized.
CostContext random_context(std::size_t m, std::size_t c, double beta, std::uint64_t seed);

inline constexpr double default_beta = 10.0;

// Scales T to sum 1 and M to sum c^2; alpha unchanged.
CostContext normalize_context(const CostContext& ctx);

// Context per instance index; a single shared context for global operating
// conditions.
class PerExampleContext {
 public:
  PerExampleContext(CostContext global);  // NOLINT(google-explicit-constructor)
  explicit PerExampleContext(std::vector<CostContext> per_instance);

  const CostContext& at(std::size_t i) const;
  bool is_global() const noexcept { return std::holds_alternative<CostContext>(contexts_); }
  std::size_t m() const noexcept { return at(0).m(); }
  std::size_t c() const noexcept { return at(0).c(); }
  // Throws ValidationError if any context disagrees with (m, c) or a
  // per-instance supplier does not cover n instances.
  void check_compatible(std::size_t m, std::size_t c, std::size_t n) const;

 private:
  std::variant<CostContext, std::vector<CostContext>> contexts_;
};

// {"alpha", "test_costs", "mc_matrix", "normalized"}; rows of mc_matrix are
// predicted classes. "normalized" (default true) asks the loader to normalize.
CostContext context_from_json(const nlohmann::json& j, bool apply_normalization = true);
nlohmann::json to_json(const CostContext& ctx);
CostContext load_context(const std::filesystem::path& path, bool apply_normalization = true);
void save_context(const CostContext& ctx, const std::filesystem::path& path);

}  // namespace jroc
