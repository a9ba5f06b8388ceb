#include "jroc/cost.hpp"

#include <cmath>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "jroc/error.hpp"
#include "jroc/rng.hpp"

namespace jroc {

namespace {

void check_cost(double v, const char* what) {
  if (!std::isfinite(v) || v < 0) throw ValidationError(std::string(what) + " must be finite and >= 0");
}

}  // namespace

CostContext::CostContext(std::vector<double> test_costs, std::vector<std::vector<double>> mc_matrix,
                         double alpha)
    : test_costs_(std::move(test_costs)), c_(mc_matrix.size()), alpha_(alpha) {
  if (!(alpha >= 0 && alpha <= 1)) throw ValidationError("alpha must lie in [0, 1]");
  if (c_ < 2) throw ValidationError("misclassification matrix needs at least two classes");
  for (double t : test_costs_) check_cost(t, "test costs");
  matrix_.reserve(c_ * c_);
  for (std::size_t p = 0; p < c_; ++p) {
    if (mc_matrix[p].size() != c_) throw ValidationError("misclassification matrix must be square");
    for (std::size_t a = 0; a < c_; ++a) {
      const double v = mc_matrix[p][a];
      check_cost(v, "misclassification costs");
      if (p == a && v != 0) throw ValidationError("misclassification matrix diagonal must be zero");
      matrix_.push_back(v);
    }
  }
}

std::vector<std::vector<double>> CostContext::mc_matrix() const {
  std::vector<std::vector<double>> out(c_, std::vector<double>(c_));
  for (std::size_t p = 0; p < c_; ++p) {
    for (std::size_t a = 0; a < c_; ++a) out[p][a] = mc(p, a);
  }
  return out;
}

double CostContext::test_cost_sum() const noexcept {
  return std::accumulate(test_costs_.begin(), test_costs_.end(), 0.0);
}

double CostContext::mc_sum() const noexcept { return std::accumulate(matrix_.begin(), matrix_.end(), 0.0); }

bool CostContext::is_normalized(double tol) const noexcept {
  const double c2 = static_cast<double>(c_ * c_);
  return std::abs(test_cost_sum() - 1.0) <= tol && std::abs(mc_sum() - c2) <= tol;
}

CostContext CostContext::with_alpha(double alpha) const {
  CostContext out = *this;
  if (!(alpha >= 0 && alpha <= 1)) throw ValidationError("alpha must lie in [0, 1]");
  out.alpha_ = alpha;
  return out;
}

double misclassification_cost(const CostContext& ctx, std::size_t predicted, std::size_t actual) {
  if (predicted >= ctx.c() || actual >= ctx.c()) throw ValidationError("class index out of range");
  return ctx.mc(predicted, actual);
}

double test_cost(const CostContext& ctx, std::span<const Value> x, const FeatureConfiguration& cfg) {
  if (x.size() != ctx.m() || cfg.width() != ctx.m()) {
    throw ValidationError("test cost vector, instance and configuration widths differ");
  }
  double total = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (cfg.contains(j) && x[j]) total += ctx.test_costs()[j];
  }
  return total;
}

double test_cost(const CostContext& ctx, const Instance& x, const FeatureConfiguration& cfg) {
  return test_cost(ctx, x.values, cfg);
}

double joint_cost(double alpha, double mc, double tc) {
  if (!(alpha >= 0 && alpha <= 1)) throw ValidationError("alpha must lie in [0, 1]");
  if (mc < 0 || tc < 0) throw ValidationError("costs must be non-negative");
  return alpha * mc + (1 - alpha) * tc;
}

CostContext uniform_context(std::size_t m, std::size_t c) {
  if (m < 1) throw ValidationError("uniform context needs m >= 1");
  if (c < 2) throw ValidationError("uniform context needs c >= 2");
  const double off = static_cast<double>(c) / static_cast<double>(c - 1);
  std::vector<std::vector<double>> matrix(c, std::vector<double>(c, off));
  for (std::size_t k = 0; k < c; ++k) matrix[k][k] = 0;
  return CostContext(std::vector<double>(m, 1.0 / static_cast<double>(m)), std::move(matrix), 0.5);
}

CostContext random_context(std::size_t m, std::size_t c, double beta, std::uint64_t seed) {
  if (!(beta >= 0) || !std::isfinite(beta)) throw ValidationError("beta must be finite and >= 0");
  const CostContext base = uniform_context(m, c);
  // Every multiplier is exactly 1.
  if (beta == 0) return base;
  Rng rng(seed);
  const auto factor = [&] { return std::exp(beta * (rng.uniform01() - 0.5)); };
  std::vector<double> t = base.test_costs();
  for (double& v : t) v *= factor();
  auto matrix = base.mc_matrix();
  for (std::size_t p = 0; p < c; ++p) {
    for (std::size_t a = 0; a < c; ++a) {
      if (p != a) matrix[p][a] *= factor();
    }
  }
  return normalize_context(CostContext(std::move(t), std::move(matrix), base.alpha()));
}

CostContext normalize_context(const CostContext& ctx) {
  const double ts = ctx.test_cost_sum();
  const double ms = ctx.mc_sum();
  if (!(ts > 0)) throw ValidationError("cannot normalize a zero test cost vector");
  if (!(ms > 0)) throw ValidationError("cannot normalize a zero misclassification matrix");
  const double c2 = static_cast<double>(ctx.c() * ctx.c());
  std::vector<double> t = ctx.test_costs();
  for (double& v : t) v /= ts;
  auto matrix = ctx.mc_matrix();
  for (auto& row : matrix) {
    for (double& v : row) v = v * c2 / ms;
  }
  return CostContext(std::move(t), std::move(matrix), ctx.alpha());
}

// ---------------------------------------------------------------------------

PerExampleContext::PerExampleContext(CostContext global) : contexts_(std::move(global)) {}

namespace {
std::vector<CostContext> non_empty(std::vector<CostContext> list) {
  if (list.empty()) throw ValidationError("per-example context list is empty");
  return list;
}
}  // namespace

PerExampleContext::PerExampleContext(std::vector<CostContext> per_instance)
    : contexts_(non_empty(std::move(per_instance))) {}

const CostContext& PerExampleContext::at(std::size_t i) const {
  if (const auto* g = std::get_if<CostContext>(&contexts_)) return *g;
  return std::get<std::vector<CostContext>>(contexts_).at(i);
}

void PerExampleContext::check_compatible(std::size_t m, std::size_t c, std::size_t n) const {
  const auto check = [&](const CostContext& ctx) {
    if (ctx.m() != m) throw ValidationError("context test cost vector length differs from m");
    if (ctx.c() != c) throw ValidationError("context misclassification matrix size differs from c");
  };
  if (const auto* g = std::get_if<CostContext>(&contexts_)) {
    check(*g);
    return;
  }
  const auto& list = std::get<std::vector<CostContext>>(contexts_);
  if (list.size() < n) throw ValidationError("per-example contexts do not cover every instance");
  for (const auto& ctx : list) check(ctx);
}

// ---------------------------------------------------------------------------

CostContext context_from_json(const nlohmann::json& j, bool apply_normalization) {
  try {
    CostContext ctx(j.at("test_costs").get<std::vector<double>>(),
                    j.at("mc_matrix").get<std::vector<std::vector<double>>>(), j.value("alpha", 0.5));
    if (apply_normalization && j.value("normalized", true)) return normalize_context(ctx);
    return ctx;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed context: ") + e.what());
  }
}

nlohmann::json to_json(const CostContext& ctx) {
  return {{"alpha", ctx.alpha()},
          {"test_costs", ctx.test_costs()},
          {"mc_matrix", ctx.mc_matrix()},
          {"normalized", ctx.is_normalized()}};
}

CostContext load_context(const std::filesystem::path& path, bool apply_normalization) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open context file " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("context file is not JSON: ") + e.what());
  }
  return context_from_json(j, apply_normalization);
}

void save_context(const CostContext& ctx, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write context file " + path.string());
  out << to_json(ctx).dump(2) << '\n';
}

}  // namespace jroc
