#include "jroc/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "jroc/error.hpp"
#include "jroc/rng.hpp"

namespace jroc {

// ---------------------------------------------------------------------------
// ClassifierSpec

ClassifierSpec ClassifierSpec::majority() {
  ClassifierSpec s;
  s.kind_ = Kind::majority;
  return s;
}

ClassifierSpec ClassifierSpec::knn(std::size_t k) {
  if (k < 1) throw ValidationError("knn needs k >= 1");
  ClassifierSpec s;
  s.kind_ = Kind::knn;
  s.k_ = k;
  return s;
}

ClassifierSpec ClassifierSpec::decision_tree(std::size_t max_depth, std::size_t min_leaf) {
  if (max_depth < 1) throw ValidationError("decision tree needs max_depth >= 1");
  if (min_leaf < 1) throw ValidationError("decision tree needs min_leaf >= 1");
  ClassifierSpec s;
  s.kind_ = Kind::decision_tree;
  s.max_depth_ = max_depth;
  s.min_leaf_ = min_leaf;
  return s;
}

ClassifierSpec ClassifierSpec::naive_bayes() {
  ClassifierSpec s;
  s.kind_ = Kind::naive_bayes;
  return s;
}

ClassifierSpec ClassifierSpec::bagging(ClassifierSpec base, std::size_t rounds, std::uint64_t seed,
                                       bool bootstrap) {
  if (rounds < 1) throw ValidationError("bagging needs rounds >= 1");
  ClassifierSpec s;
  s.kind_ = Kind::bagging;
  s.rounds_ = rounds;
  s.seed_ = seed;
  s.bootstrap_ = bootstrap;
  s.base_ = std::make_shared<const ClassifierSpec>(std::move(base));
  return s;
}

const ClassifierSpec& ClassifierSpec::base() const {
  if (!base_) throw ValidationError("only bagging specs have a base learner");
  return *base_;
}

std::string ClassifierSpec::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::majority: os << "majority"; break;
    case Kind::knn: os << "knn(k=" << k_ << ")"; break;
    case Kind::decision_tree:
      os << "decision_tree(max_depth=" << max_depth_ << ",min_leaf=" << min_leaf_ << ")";
      break;
    case Kind::naive_bayes: os << "naive_bayes"; break;
    case Kind::bagging:
      os << "bagging(" << base_->describe() << ",rounds=" << rounds_ << ",seed=" << seed_;
      if (!bootstrap_) os << ",bootstrap=false";
      os << ")";
      break;
  }
  return os.str();
}

bool operator==(const ClassifierSpec& a, const ClassifierSpec& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case ClassifierSpec::Kind::majority:
    case ClassifierSpec::Kind::naive_bayes: return true;
    case ClassifierSpec::Kind::knn: return a.k_ == b.k_;
    case ClassifierSpec::Kind::decision_tree:
      return a.max_depth_ == b.max_depth_ && a.min_leaf_ == b.min_leaf_;
    case ClassifierSpec::Kind::bagging:
      return a.rounds_ == b.rounds_ && a.seed_ == b.seed_ && a.bootstrap_ == b.bootstrap_ &&
             *a.base_ == *b.base_;
  }
  return false;
}

ClassifierSpec classifier_spec_from_json(const nlohmann::json& j) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "majority") return ClassifierSpec::majority();
    if (kind == "knn") return ClassifierSpec::knn(j.value("k", std::size_t{1}));
    if (kind == "decision_tree") {
      return ClassifierSpec::decision_tree(j.value("max_depth", std::size_t{10}),
                                           j.value("min_leaf", std::size_t{2}));
    }
    if (kind == "naive_bayes") return ClassifierSpec::naive_bayes();
    if (kind == "bagging") {
      return ClassifierSpec::bagging(classifier_spec_from_json(j.at("base")),
                                     j.value("rounds", std::size_t{10}),
                                     j.value("seed", std::uint64_t{1}), j.value("bootstrap", true));
    }
    throw ValidationError("unknown classifier kind: " + kind);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed classifier spec: ") + e.what());
  }
}

nlohmann::json to_json(const ClassifierSpec& spec) {
  using Kind = ClassifierSpec::Kind;
  switch (spec.kind()) {
    case Kind::majority: return {{"kind", "majority"}};
    case Kind::knn: return {{"kind", "knn"}, {"k", spec.k()}};
    case Kind::decision_tree:
      return {{"kind", "decision_tree"}, {"max_depth", spec.max_depth()}, {"min_leaf", spec.min_leaf()}};
    case Kind::naive_bayes: return {{"kind", "naive_bayes"}};
    case Kind::bagging:
      return {{"kind", "bagging"},
              {"base", to_json(spec.base())},
              {"rounds", spec.rounds()},
              {"seed", spec.seed()},
              {"bootstrap", spec.bootstrap()}};
  }
  return {};
}

namespace {

std::size_t parse_count(std::string_view s) {
  std::size_t v = 0;
  if (s.empty()) throw ValidationError("expected a number in classifier shorthand");
  for (char ch : s) {
    if (ch < '0' || ch > '9') throw ValidationError("expected a number, got '" + std::string(s) + "'");
    v = v * 10 + static_cast<std::size_t>(ch - '0');
  }
  return v;
}

}  // namespace

ClassifierSpec parse_classifier_spec(std::string_view text) {
  if (!text.empty() && text.front() == '{') {
    try {
      return classifier_spec_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError(std::string("malformed classifier JSON: ") + e.what());
    }
  }
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  // Only the first few fields are split; bagging's base keeps its own colons.
  const auto head = text.substr(0, text.find(':'));
  const std::size_t max_parts = head == "bagging" ? 4 : 3;
  while (parts.size() + 1 < max_parts) {
    const auto pos = text.find(':', start);
    if (pos == std::string_view::npos) break;
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  parts.push_back(text.substr(start));

  const auto name = parts[0];
  if (name == "majority" && parts.size() == 1) return ClassifierSpec::majority();
  if ((name == "nb" || name == "naive_bayes") && parts.size() == 1) return ClassifierSpec::naive_bayes();
  if (name == "knn" && parts.size() <= 2) {
    return ClassifierSpec::knn(parts.size() == 2 ? parse_count(parts[1]) : 1);
  }
  if ((name == "tree" || name == "decision_tree") && parts.size() <= 3) {
    return ClassifierSpec::decision_tree(parts.size() >= 2 ? parse_count(parts[1]) : 10,
                                         parts.size() == 3 ? parse_count(parts[2]) : 2);
  }
  if (name == "bagging" && parts.size() == 4) {
    return ClassifierSpec::bagging(parse_classifier_spec(parts[3]), parse_count(parts[1]),
                                   parse_count(parts[2]));
  }
  throw ValidationError("unrecognised classifier spec: " + std::string(text));
}

// ---------------------------------------------------------------------------
// Learners

namespace {

std::size_t argmax_lowest(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

std::vector<double> label_counts(const Dataset& d, std::span<const std::size_t> rows) {
  std::vector<double> counts(d.c(), 0.0);
  for (std::size_t i : rows) counts[*d[i].label] += 1.0;
  return counts;
}

std::vector<std::size_t> all_rows(const Dataset& d) {
  std::vector<std::size_t> rows(d.n());
  std::iota(rows.begin(), rows.end(), 0);
  return rows;
}

class MajorityPredictor final : public detail::Predictor {
 public:
  explicit MajorityPredictor(std::size_t cls) : cls_(cls) {}
  std::size_t predict(std::span<const Value>) const override { return cls_; }

 private:
  std::size_t cls_;
};

// Distances are taken over dimensions non-null in both instances and
// rescaled by m / shared; training rows sharing no dimension are skipped.
class KnnPredictor final : public detail::Predictor {
 public:
  KnnPredictor(const Dataset& d, std::span<const std::size_t> rows, std::size_t k, std::size_t modal)
      : k_(k), m_(d.m()), c_(d.c()), modal_(modal) {
    nominal_.resize(m_);
    mean_.assign(m_, 0.0);
    scale_.assign(m_, 1.0);
    for (std::size_t j = 0; j < m_; ++j) {
      nominal_[j] = d.schema()[j].kind == AttributeKind::nominal;
      if (nominal_[j]) continue;
      double sum = 0, sq = 0;
      std::size_t cnt = 0;
      for (std::size_t i : rows) {
        if (const auto& v = d[i].values[j]) {
          sum += *v;
          ++cnt;
        }
      }
      if (cnt == 0) continue;
      mean_[j] = sum / static_cast<double>(cnt);
      for (std::size_t i : rows) {
        if (const auto& v = d[i].values[j]) sq += (*v - mean_[j]) * (*v - mean_[j]);
      }
      const double sd = cnt > 1 ? std::sqrt(sq / static_cast<double>(cnt - 1)) : 0.0;
      scale_[j] = sd > 0 ? sd : 1.0;
    }
    for (std::size_t i : rows) {
      points_.push_back(standardize(d[i].values));
      labels_.push_back(*d[i].label);
    }
  }

  std::size_t predict(std::span<const Value> x) const override {
    const auto q = standardize(x);
    std::vector<std::pair<double, std::size_t>> cand;
    cand.reserve(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
      double sum = 0;
      std::size_t shared = 0;
      for (std::size_t j = 0; j < m_; ++j) {
        if (!q[j] || !points_[i][j]) continue;
        ++shared;
        if (nominal_[j]) {
          sum += *q[j] == *points_[i][j] ? 0.0 : 1.0;
        } else {
          const double diff = *q[j] - *points_[i][j];
          sum += diff * diff;
        }
      }
      if (shared == 0) continue;
      cand.emplace_back(sum * static_cast<double>(m_) / static_cast<double>(shared), i);
    }
    if (cand.empty()) return modal_;
    const std::size_t kk = std::min(k_, cand.size());
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(kk), cand.end());
    std::vector<double> votes(c_, 0.0);
    for (std::size_t r = 0; r < kk; ++r) votes[labels_[cand[r].second]] += 1.0;
    return argmax_lowest(votes);
  }

 private:
  std::vector<Value> standardize(std::span<const Value> x) const {
    std::vector<Value> out(x.begin(), x.end());
    for (std::size_t j = 0; j < m_; ++j) {
      if (out[j] && !nominal_[j]) out[j] = (*out[j] - mean_[j]) / scale_[j];
    }
    return out;
  }

  std::size_t k_, m_, c_, modal_;
  std::vector<bool> nominal_;
  std::vector<double> mean_, scale_;
  std::vector<std::vector<Value>> points_;
  std::vector<std::size_t> labels_;
};

double entropy(std::span<const double> counts) {
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (total <= 0) return 0.0;
  double h = 0;
  for (double n : counts) {
    if (n > 0) h -= (n / total) * std::log2(n / total);
  }
  return h;
}

// Information-gain tree. Nulls at prediction time follow the child that
// received the most training instances.
class TreePredictor final : public detail::Predictor {
 public:
  TreePredictor(const Dataset& d, std::span<const std::size_t> rows, const ClassifierSpec& spec)
      : d_(&d), max_depth_(spec.max_depth()), min_leaf_(spec.min_leaf()) {
    std::vector<std::size_t> idx(rows.begin(), rows.end());
    const auto counts = label_counts(d, idx);
    grow(std::move(idx), 0, argmax_lowest(counts));
    d_ = nullptr;
  }

  std::size_t predict(std::span<const Value> x) const override {
    std::size_t at = 0;
    while (!nodes_[at].children.empty()) {
      const Node& node = nodes_[at];
      const auto& v = x[node.attribute];
      std::size_t child = node.default_child;
      if (v) {
        if (node.nominal) {
          child = static_cast<std::size_t>(*v);
        } else {
          child = *v <= node.threshold ? 0 : 1;
        }
      }
      at = node.children[child];
    }
    return nodes_[at].prediction;
  }

 private:
  struct Node {
    std::size_t prediction = 0;
    std::size_t attribute = 0;
    bool nominal = false;
    double threshold = 0;
    std::size_t default_child = 0;
    std::vector<std::size_t> children;
  };

  struct Split {
    double gain = 0;
    std::size_t attribute = 0;
    bool nominal = false;
    double threshold = 0;
  };

  std::size_t grow(std::vector<std::size_t> idx, std::size_t depth, std::size_t fallback) {
    const std::size_t id = nodes_.size();
    nodes_.emplace_back();
    const auto counts = label_counts(*d_, idx);
    const bool empty = idx.empty();
    nodes_[id].prediction = empty ? fallback : argmax_lowest(counts);
    const std::size_t non_zero =
        static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(), [](double n) { return n > 0; }));
    if (empty || depth >= max_depth_ || non_zero <= 1 || idx.size() < 2 * min_leaf_) return id;

    const auto split = best_split(idx);
    if (!split) return id;

    std::size_t arity = split->nominal ? d_->schema()[split->attribute].values.size() : 2;
    std::vector<std::vector<std::size_t>> parts(arity);
    std::vector<std::size_t> unknown;
    for (std::size_t i : idx) {
      const auto& v = (*d_)[i].values[split->attribute];
      if (!v) {
        unknown.push_back(i);
      } else if (split->nominal) {
        parts[static_cast<std::size_t>(*v)].push_back(i);
      } else {
        parts[*v <= split->threshold ? 0 : 1].push_back(i);
      }
    }
    std::size_t heavy = 0;
    for (std::size_t b = 1; b < arity; ++b) {
      if (parts[b].size() > parts[heavy].size()) heavy = b;
    }
    parts[heavy].insert(parts[heavy].end(), unknown.begin(), unknown.end());

    nodes_[id].attribute = split->attribute;
    nodes_[id].nominal = split->nominal;
    nodes_[id].threshold = split->threshold;
    nodes_[id].default_child = heavy;
    const std::size_t pred = nodes_[id].prediction;
    std::vector<std::size_t> children;
    for (auto& part : parts) children.push_back(grow(std::move(part), depth + 1, pred));
    nodes_[id].children = std::move(children);
    return id;
  }

  std::optional<Split> best_split(const std::vector<std::size_t>& idx) const {
    std::optional<Split> best;
    const double total = static_cast<double>(idx.size());
    for (std::size_t j = 0; j < d_->m(); ++j) {
      std::vector<std::size_t> known;
      for (std::size_t i : idx) {
        if ((*d_)[i].values[j]) known.push_back(i);
      }
      if (known.size() < 2 * min_leaf_) continue;
      const double known_n = static_cast<double>(known.size());
      const double base = entropy(label_counts(*d_, known));
      const double known_frac = known_n / total;
      const auto& attr = d_->schema()[j];

      if (attr.kind == AttributeKind::nominal) {
        std::vector<std::vector<double>> branch(attr.values.size(), std::vector<double>(d_->c(), 0.0));
        std::vector<std::size_t> sizes(attr.values.size(), 0);
        for (std::size_t i : known) {
          const auto b = static_cast<std::size_t>(*(*d_)[i].values[j]);
          branch[b][*(*d_)[i].label] += 1.0;
          ++sizes[b];
        }
        std::size_t used = 0;
        bool ok = true;
        double rem = 0;
        for (std::size_t b = 0; b < branch.size(); ++b) {
          if (sizes[b] == 0) continue;
          ++used;
          if (sizes[b] < min_leaf_) ok = false;
          rem += static_cast<double>(sizes[b]) / known_n * entropy(branch[b]);
        }
        if (!ok || used < 2) continue;
        const double gain = known_frac * (base - rem);
        if (gain > 1e-12 && (!best || gain > best->gain)) best = Split{gain, j, true, 0};
        continue;
      }

      std::sort(known.begin(), known.end(), [&](std::size_t a, std::size_t b) {
        return *(*d_)[a].values[j] < *(*d_)[b].values[j];
      });
      std::vector<double> left(d_->c(), 0.0);
      auto right = label_counts(*d_, known);
      for (std::size_t pos = 0; pos + 1 < known.size(); ++pos) {
        const std::size_t cls = *(*d_)[known[pos]].label;
        left[cls] += 1.0;
        right[cls] -= 1.0;
        const double a = *(*d_)[known[pos]].values[j];
        const double b = *(*d_)[known[pos + 1]].values[j];
        if (a == b) continue;
        const std::size_t nl = pos + 1;
        const std::size_t nr = known.size() - nl;
        if (nl < min_leaf_ || nr < min_leaf_) continue;
        const double rem = static_cast<double>(nl) / known_n * entropy(left) +
                           static_cast<double>(nr) / known_n * entropy(right);
        const double gain = known_frac * (base - rem);
        if (gain > 1e-12 && (!best || gain > best->gain)) best = Split{gain, j, false, a + (b - a) / 2};
      }
    }
    return best;
  }

  const Dataset* d_;
  std::size_t max_depth_, min_leaf_;
  std::vector<Node> nodes_;
};

// Gaussian likelihoods for numeric attributes, Laplace-smoothed frequencies for
// nominal ones. Null attributes contribute no factor.
class NaiveBayesPredictor final : public detail::Predictor {
 public:
  NaiveBayesPredictor(const Dataset& d, std::span<const std::size_t> rows)
      : m_(d.m()), c_(d.c()) {
    const auto counts = label_counts(d, rows);
    const double n = static_cast<double>(rows.size());
    log_prior_.resize(c_);
    for (std::size_t k = 0; k < c_; ++k) {
      log_prior_[k] = std::log((counts[k] + 1.0) / (n + static_cast<double>(c_)));
    }
    attrs_.resize(m_);
    for (std::size_t j = 0; j < m_; ++j) {
      Attr& a = attrs_[j];
      a.nominal = d.schema()[j].kind == AttributeKind::nominal;
      if (a.nominal) {
        const std::size_t values = d.schema()[j].values.size();
        std::vector<std::vector<double>> freq(c_, std::vector<double>(values, 0.0));
        std::vector<double> known(c_, 0.0);
        for (std::size_t i : rows) {
          if (const auto& v = d[i].values[j]) {
            freq[*d[i].label][static_cast<std::size_t>(*v)] += 1.0;
            known[*d[i].label] += 1.0;
          }
        }
        a.log_freq.assign(c_, std::vector<double>(values, 0.0));
        for (std::size_t k = 0; k < c_; ++k) {
          for (std::size_t v = 0; v < values; ++v) {
            a.log_freq[k][v] = std::log((freq[k][v] + 1.0) / (known[k] + static_cast<double>(values)));
          }
        }
        a.used = true;
        continue;
      }
      std::vector<double> sum(c_, 0.0), cnt(c_, 0.0);
      double all_sum = 0, all_cnt = 0;
      for (std::size_t i : rows) {
        if (const auto& v = d[i].values[j]) {
          sum[*d[i].label] += *v;
          cnt[*d[i].label] += 1.0;
          all_sum += *v;
          all_cnt += 1.0;
        }
      }
      if (all_cnt == 0) continue;
      const double all_mean = all_sum / all_cnt;
      double all_sq = 0;
      std::vector<double> sq(c_, 0.0);
      a.mean.resize(c_);
      for (std::size_t k = 0; k < c_; ++k) a.mean[k] = cnt[k] > 0 ? sum[k] / cnt[k] : all_mean;
      for (std::size_t i : rows) {
        if (const auto& v = d[i].values[j]) {
          const std::size_t k = *d[i].label;
          sq[k] += (*v - a.mean[k]) * (*v - a.mean[k]);
          all_sq += (*v - all_mean) * (*v - all_mean);
        }
      }
      const double all_var = all_cnt > 1 ? all_sq / (all_cnt - 1) : 1.0;
      const double floor = 1e-9 * std::max(all_var, 1.0);
      a.var.resize(c_);
      for (std::size_t k = 0; k < c_; ++k) {
        const double v = cnt[k] > 1 ? sq[k] / (cnt[k] - 1) : all_var;
        a.var[k] = std::max(v, floor);
      }
      a.used = true;
    }
  }

  std::size_t predict(std::span<const Value> x) const override {
    std::vector<double> score = log_prior_;
    for (std::size_t j = 0; j < m_; ++j) {
      const Attr& a = attrs_[j];
      if (!x[j] || !a.used) continue;
      for (std::size_t k = 0; k < c_; ++k) {
        if (a.nominal) {
          score[k] += a.log_freq[k][static_cast<std::size_t>(*x[j])];
        } else {
          const double z = *x[j] - a.mean[k];
          score[k] += -0.5 * std::log(2 * M_PI * a.var[k]) - z * z / (2 * a.var[k]);
        }
      }
    }
    return argmax_lowest(score);
  }

 private:
  struct Attr {
    bool used = false;
    bool nominal = false;
    std::vector<double> mean, var;
    std::vector<std::vector<double>> log_freq;
  };
  std::size_t m_, c_;
  std::vector<double> log_prior_;
  std::vector<Attr> attrs_;
};

std::shared_ptr<const detail::Predictor> fit(const ClassifierSpec& spec, const Dataset& d,
                                             std::span<const std::size_t> rows);

class BaggingPredictor final : public detail::Predictor {
 public:
  BaggingPredictor(const ClassifierSpec& spec, const Dataset& d, std::span<const std::size_t> rows)
      : c_(d.c()) {
    Rng rng(spec.seed());
    std::vector<std::size_t> sample(rows.size());
    for (std::size_t r = 0; r < spec.rounds(); ++r) {
      if (spec.bootstrap()) {
        for (auto& s : sample) s = rows[rng.below(rows.size())];
      } else {
        std::copy(rows.begin(), rows.end(), sample.begin());
      }
      members_.push_back(fit(spec.base(), d, sample));
    }
  }

  std::size_t predict(std::span<const Value> x) const override {
    std::vector<double> votes(c_, 0.0);
    for (const auto& member : members_) votes[member->predict(x)] += 1.0;
    return argmax_lowest(votes);
  }

 private:
  std::size_t c_;
  std::vector<std::shared_ptr<const detail::Predictor>> members_;
};

std::shared_ptr<const detail::Predictor> fit(const ClassifierSpec& spec, const Dataset& d,
                                             std::span<const std::size_t> rows) {
  const std::size_t modal = argmax_lowest(label_counts(d, rows));
  switch (spec.kind()) {
    case ClassifierSpec::Kind::majority: return std::make_shared<MajorityPredictor>(modal);
    case ClassifierSpec::Kind::knn: return std::make_shared<KnnPredictor>(d, rows, spec.k(), modal);
    case ClassifierSpec::Kind::decision_tree: return std::make_shared<TreePredictor>(d, rows, spec);
    case ClassifierSpec::Kind::naive_bayes: return std::make_shared<NaiveBayesPredictor>(d, rows);
    case ClassifierSpec::Kind::bagging: return std::make_shared<BaggingPredictor>(spec, d, rows);
  }
  throw ValidationError("unknown classifier kind");
}

}  // namespace

std::size_t TrainedModel::predict(std::span<const Value> x) const {
  if (x.size() != width_) throw ValidationError("instance width does not match the trained model");
  if (std::none_of(x.begin(), x.end(), [](const Value& v) { return v.has_value(); })) return modal_;
  return impl_->predict(x);
}

TrainedModel train(const ClassifierSpec& spec, const Dataset& d) {
  if (d.empty()) throw ValidationError("cannot train on an empty dataset");
  if (!d.labeled()) throw ValidationError("cannot train on unlabeled instances");
  const auto rows = all_rows(d);
  const auto counts = label_counts(d, rows);

  TrainedModel model;
  model.spec_ = std::make_shared<const ClassifierSpec>(spec);
  model.width_ = d.m();
  model.distribution_.resize(d.c());
  for (std::size_t k = 0; k < d.c(); ++k) model.distribution_[k] = counts[k] / static_cast<double>(d.n());
  model.modal_ = argmax_lowest(counts);
  model.impl_ = fit(spec, d, rows);
  return model;
}

std::vector<std::size_t> predict_dataset(const TrainedModel& model, const Dataset& d,
                                         const FeatureConfiguration& cfg) {
  if (cfg.width() != d.m()) throw ValidationError("feature configuration width does not match the dataset");
  std::vector<std::size_t> out;
  out.reserve(d.n());
  std::vector<Value> buffer(d.m());
  for (const auto& x : d.instances()) {
    for (std::size_t j = 0; j < d.m(); ++j) buffer[j] = cfg.contains(j) ? x.values[j] : std::nullopt;
    out.push_back(model.predict(buffer));
  }
  return out;
}

}  // namespace jroc
