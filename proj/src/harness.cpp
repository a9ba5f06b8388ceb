#include "jroc/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <future>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "jroc/error.hpp"
#include "jroc/lattice.hpp"
#include "jroc/rng.hpp"
#include "jroc/search.hpp"

namespace jroc {

std::string to_string(Method method) {
  switch (method) {
    case Method::full: return "Full";
    case Method::bmc: return "BMC";
    case Method::btc: return "BTC";
    case Method::bjc: return "BJC";
    case Method::rnd: return "RND";
  }
  return "?";
}

Method parse_method(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (lower == "full") return Method::full;
  if (lower == "bmc") return Method::bmc;
  if (lower == "btc") return Method::btc;
  if (lower == "bjc") return Method::bjc;
  if (lower == "rnd") return Method::rnd;
  throw ValidationError("unknown method: " + std::string(text));
}

void ExperimentConfig::validate() const {
  if (datasets.empty()) throw ValidationError("experiment needs at least one dataset");
  if (models.empty()) throw ValidationError("experiment needs at least one model");
  if (methods.empty()) throw ValidationError("experiment needs at least one method");
  if (alpha_grid.empty()) throw ValidationError("experiment needs at least one alpha");
  if (repetitions < 1) throw ValidationError("repetitions must be >= 1");
  for (double a : alpha_grid) {
    if (!(a >= 0 && a <= 1)) throw ValidationError("alpha values must lie in [0, 1]");
  }
  if (context.variable && !(context.beta >= 0)) throw ValidationError("beta must be >= 0");
  std::set<std::string> ids;
  for (const auto& m : models) {
    if (m.id.empty()) throw ValidationError("model ids must be non-empty");
    if (!ids.insert(m.id).second) throw ValidationError("duplicate model id: " + m.id);
  }
  std::set<Method> seen(methods.begin(), methods.end());
  if (seen.size() != methods.size()) throw ValidationError("duplicate method in the method list");
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  try {
    for (const auto& path : j.at("datasets")) {
      std::filesystem::path p = path.get<std::string>();
      cfg.datasets.push_back(p.is_relative() && !base_dir.empty() ? base_dir / p : p);
    }
    for (const auto& m : j.at("models")) {
      auto spec = classifier_spec_from_json(m);
      cfg.models.push_back({m.value("id", spec.describe()), std::move(spec)});
    }
    if (j.contains("context")) {
      const auto& c = j.at("context");
      const std::string mode = c.is_string() ? c.get<std::string>() : c.at("mode").get<std::string>();
      if (mode == "uniform") {
        cfg.context.variable = false;
      } else if (mode == "variable") {
        cfg.context.variable = true;
        if (c.is_object()) cfg.context.beta = c.value("beta", default_beta);
      } else {
        throw ValidationError("context mode must be 'uniform' or 'variable'");
      }
    }
    if (j.contains("alpha_grid")) cfg.alpha_grid = j.at("alpha_grid").get<std::vector<double>>();
    if (j.contains("repetitions")) cfg.repetitions = j.at("repetitions").get<std::size_t>();
    if (j.contains("methods")) {
      cfg.methods.clear();
      for (const auto& m : j.at("methods")) cfg.methods.push_back(parse_method(m.get<std::string>()));
    }
    cfg.seed = j.value("seed", cfg.seed);
    cfg.lattice_ceiling = j.value("lattice_ceiling", cfg.lattice_ceiling);
    cfg.missing_token = j.value("missing_token", cfg.missing_token);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed experiment config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("config is not JSON: ") + e.what());
  }
  return experiment_config_from_json(j, path.parent_path());
}

nlohmann::json to_json(const ExperimentConfig& config) {
  nlohmann::json datasets = nlohmann::json::array();
  for (const auto& p : config.datasets) datasets.push_back(p.generic_string());
  nlohmann::json models = nlohmann::json::array();
  for (const auto& m : config.models) {
    auto j = to_json(m.spec);
    j["id"] = m.id;
    models.push_back(std::move(j));
  }
  nlohmann::json methods = nlohmann::json::array();
  for (auto m : config.methods) methods.push_back(to_string(m));
  nlohmann::json context = config.context.variable
                               ? nlohmann::json{{"mode", "variable"}, {"beta", config.context.beta}}
                               : nlohmann::json{{"mode", "uniform"}};
  return {{"datasets", datasets},        {"models", models},
          {"context", context},          {"alpha_grid", config.alpha_grid},
          {"repetitions", config.repetitions}, {"methods", methods},
          {"seed", config.seed},         {"lattice_ceiling", config.lattice_ceiling},
          {"missing_token", config.missing_token}};
}

// ---------------------------------------------------------------------------

namespace {

void check_lattice_allowed(const ExperimentConfig& config, const Dataset& d, const std::string& name) {
  const bool wants_full = std::find(config.methods.begin(), config.methods.end(), Method::full) != config.methods.end();
  if (wants_full && d.m() > config.lattice_ceiling) {
    throw ValidationError("Full requested for " + name + " with m = " + std::to_string(d.m()) +
                          " above the lattice ceiling " + std::to_string(config.lattice_ceiling));
  }
}

std::string dataset_name(const std::filesystem::path& p) { return p.stem().string(); }

}  // namespace

RepetitionResult run_repetition(const Dataset& d, const ExperimentConfig& config, std::size_t dataset_index,
                                std::size_t repetition) {
  config.validate();
  check_lattice_allowed(config, d, "dataset " + std::to_string(dataset_index));
  if (d.m() < 1) throw ValidationError("experiment datasets need at least one attribute");

  const std::uint64_t seed = config.seed;
  const std::array<double, 2> work_test{2.0 / 3.0, 1.0 / 3.0};
  const std::array<double, 2> halves{0.5, 0.5};
  const auto outer = split_dataset(d, work_test, derive_seed(seed, {dataset_index, repetition, 0}));
  const auto inner = split_dataset(outer[0], halves, derive_seed(seed, {dataset_index, repetition, 1}));
  const Dataset& train_set = inner[0];
  const Dataset& validation_set = inner[1];
  const Dataset& test_set = outer[1];

  RepetitionResult result{
      config.context.variable
          ? random_context(d.m(), d.c(), config.context.beta, derive_seed(seed, {dataset_index, repetition, 2}))
          : uniform_context(d.m(), d.c()),
      {}};
  const PerExampleContext pec(result.context);

  std::vector<TrainedModel> models;
  std::vector<ConfigurationEvaluator> evaluators;
  models.reserve(config.models.size());
  evaluators.reserve(config.models.size());
  for (const auto& entry : config.models) {
    models.push_back(train(entry.spec, train_set));
    evaluators.emplace_back(models.back(), entry.id, validation_set, pec);
  }
  const std::size_t m = d.m();
  const std::uint64_t rnd_seed = derive_seed(seed, {dataset_index, repetition, 3});

  const auto score_on_test = [&](const EvalPoint& selected, double alpha) {
    for (std::size_t i = 0; i < config.models.size(); ++i) {
      if (config.models[i].id == selected.model_id) {
        return evaluate_configuration(models[i], selected.model_id, test_set, pec, selected.cfg).jc(alpha);
      }
    }
    throw Error("selected model id not found: " + selected.model_id);
  };
  const auto pooled = [&](auto&& per_model) {
    std::vector<EvalPoint> points;
    for (auto& eval : evaluators) {
      auto part = per_model(eval);
      points.insert(points.end(), part.begin(), part.end());
    }
    return points;
  };

  for (Method method : config.methods) {
    std::vector<EvalPoint> shared;
    std::size_t per_model = 0;
    switch (method) {
      case Method::full:
        shared = pooled([&](ConfigurationEvaluator& e) {
          return enumerate_full_lattice(e.as_function(), m, config.lattice_ceiling);
        });
        per_model = std::size_t{1} << m;
        break;
      case Method::bmc:
      case Method::btc:
        shared = pooled([&](ConfigurationEvaluator& e) {
          return backward_search(e.as_function(), m, method == Method::bmc ? Criterion::mc : Criterion::tc).visited;
        });
        per_model = backward_budget(m);
        break;
      case Method::rnd:
        shared = pooled([&](ConfigurationEvaluator& e) {
          return random_search(e.as_function(), m, backward_budget(m), rnd_seed).visited;
        });
        per_model = backward_budget(m);
        break;
      case Method::bjc:
        per_model = backward_budget(m);
        break;
    }
    for (double alpha : config.alpha_grid) {
      MethodSelection sel;
      sel.method = method;
      sel.alpha = alpha;
      sel.configurations_per_model = per_model;
      sel.candidates = method == Method::bjc ? pooled([&](ConfigurationEvaluator& e) {
        return backward_search(e.as_function(), m, Criterion::jc, alpha).visited;
      })
                                             : shared;
      sel.selected = select_best(sel.candidates, alpha);
      sel.validation_jc = sel.selected.jc(alpha);
      sel.test_jc = score_on_test(sel.selected, alpha);
      result.selections.push_back(std::move(sel));
    }
  }
  return result;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report;
  report.config = config;

  CsvOptions csv;
  csv.missing_token = config.missing_token;
  std::vector<Dataset> data;
  for (const auto& path : config.datasets) {
    data.push_back(load_csv(path, csv));
    check_lattice_allowed(config, data.back(), path.string());
    report.datasets.push_back({dataset_name(path), data.back().m(), data.back().n(), data.back().c()});
  }

  // Repetitions are independent; run them concurrently and assemble in order.
  std::vector<std::future<RepetitionResult>> jobs;
  for (std::size_t ds = 0; ds < data.size(); ++ds) {
    for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
      jobs.push_back(std::async(std::launch::async, [&, ds, rep] { return run_repetition(data[ds], config, ds, rep); }));
    }
  }

  const std::size_t n_alpha = config.alpha_grid.size();
  const std::size_t n_method = config.methods.size();
  for (const auto* mat : {&report.matrix, &report.validation_matrix}) {
    auto& target = const_cast<ResultMatrix&>(*mat);
    for (auto method : config.methods) target.methods.push_back(to_string(method));
    for (const auto& ds : report.datasets) {
      for (double alpha : config.alpha_grid) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s@%g", ds.name.c_str(), alpha);
        target.row_labels.emplace_back(buf);
        target.values.emplace_back(n_method, 0.0);
      }
    }
  }

  std::size_t job = 0;
  for (std::size_t ds = 0; ds < data.size(); ++ds) {
    for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
      auto result = jobs[job++].get();
      for (std::size_t s = 0; s < result.selections.size(); ++s) {
        const auto& sel = result.selections[s];
        const std::size_t mi = s / n_alpha;
        const std::size_t ai = s % n_alpha;
        report.cells.push_back({report.datasets[ds].name, rep, sel.method, sel.alpha, sel.selected.model_id,
                                sel.selected.cfg, sel.validation_jc, sel.test_jc, sel.configurations_per_model});
        const double reps = static_cast<double>(config.repetitions);
        report.matrix.values[ds * n_alpha + ai][mi] += sel.test_jc / reps;
        report.validation_matrix.values[ds * n_alpha + ai][mi] += sel.validation_jc / reps;
      }
      if (rep == 0) {
        // Full's cloud when available, else the first method's candidates.
        const auto& sel = result.selections.front();
        std::vector<EvalPoint> cloud = sel.candidates;
        for (const auto& s : result.selections) {
          if (s.method == Method::full) {
            cloud = s.candidates;
            break;
          }
        }
        report.plots.push_back(
            {report.datasets[ds].name, config.context.variable ? "variable" : "uniform", make_series(cloud)});
      }
    }
  }

  if (report.matrix.rows() >= 2 && report.matrix.cols() >= 2 && report.matrix.cols() <= 10) {
    report.stats = analyze(report.matrix, 0.05);
  }
  return report;
}

// ---------------------------------------------------------------------------

namespace {

SummaryTable summarize(const ExperimentReport& r, bool test, bool by_dataset) {
  SummaryTable t;
  for (auto m : r.config.methods) t.methods.push_back(to_string(m));
  std::vector<std::string> keys;
  if (by_dataset) {
    for (const auto& d : r.datasets) keys.push_back(d.name);
  } else {
    for (double a : r.config.alpha_grid) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%g", a);
      keys.emplace_back(buf);
    }
  }
  t.row_labels = keys;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> groups;
  for (const auto& cell : r.cells) {
    std::size_t row = 0;
    if (by_dataset) {
      row = static_cast<std::size_t>(std::find_if(r.datasets.begin(), r.datasets.end(),
                                                  [&](const DatasetSummary& d) { return d.name == cell.dataset; }) -
                                     r.datasets.begin());
    } else {
      row = static_cast<std::size_t>(std::find(r.config.alpha_grid.begin(), r.config.alpha_grid.end(), cell.alpha) -
                                     r.config.alpha_grid.begin());
    }
    const auto col = static_cast<std::size_t>(
        std::find(r.config.methods.begin(), r.config.methods.end(), cell.method) - r.config.methods.begin());
    groups[{row, col}].push_back(test ? cell.test_jc : cell.validation_jc);
  }
  t.mean.assign(keys.size(), std::vector<double>(t.methods.size(), 0.0));
  t.sd.assign(keys.size(), std::vector<double>(t.methods.size(), 0.0));
  for (const auto& [key, values] : groups) {
    double mean = 0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double sq = 0;
    for (double v : values) sq += (v - mean) * (v - mean);
    t.mean[key.first][key.second] = mean;
    t.sd[key.first][key.second] = values.size() > 1 ? std::sqrt(sq / static_cast<double>(values.size() - 1)) : 0.0;
  }
  return t;
}

void write_summary(const SummaryTable& t, const std::string& key_name, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << key_name;
  for (const auto& m : t.methods) out << ',' << m << ',' << m << "_sd";
  out << '\n';
  for (std::size_t i = 0; i < t.row_labels.size(); ++i) {
    out << t.row_labels[i];
    for (std::size_t j = 0; j < t.methods.size(); ++j) out << ',' << t.mean[i][j] << ',' << t.sd[i][j];
    out << '\n';
  }
}

void write_json(const nlohmann::json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

SummaryTable summarize_by_dataset(const ExperimentReport& r, bool test) { return summarize(r, test, true); }
SummaryTable summarize_by_alpha(const ExperimentReport& r, bool test) { return summarize(r, test, false); }

void emit_report(const ExperimentReport& r, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create report directory " + dir.string() + ": " + ec.message());

  {
    std::ofstream out(dir / "cells.csv");
    if (!out) throw IoError("cannot write " + (dir / "cells.csv").string());
    out << "dataset,repetition,method,alpha,model_id,cfg,validation_jc,test_jc,configurations_per_model\n";
    out.precision(17);
    for (const auto& c : r.cells) {
      out << c.dataset << ',' << c.repetition << ',' << to_string(c.method) << ',' << c.alpha << ',' << c.model_id
          << ',' << c.cfg.to_bit_string() << ',' << c.validation_jc << ',' << c.test_jc << ','
          << c.configurations_per_model << '\n';
    }
  }
  write_summary(summarize_by_dataset(r), "dataset", dir / "summary_by_dataset.csv");
  write_summary(summarize_by_alpha(r), "alpha", dir / "summary_by_alpha.csv");
  write_result_matrix_csv(dir / "result_matrix.csv", r.matrix);
  write_result_matrix_csv(dir / "validation_matrix.csv", r.validation_matrix);
  if (r.stats) write_json(to_json(*r.stats), dir / "stats.json");

  nlohmann::json datasets = nlohmann::json::array();
  for (const auto& d : r.datasets) {
    nlohmann::json budgets = nlohmann::json::object();
    for (auto m : r.config.methods) {
      budgets[to_string(m)] = m == Method::full ? (std::size_t{1} << d.m) : backward_budget(d.m);
    }
    datasets.push_back({{"name", d.name}, {"m", d.m}, {"n", d.n}, {"c", d.c}, {"configurations_per_model", budgets}});
  }
  write_json({{"config", to_json(r.config)}, {"datasets", datasets}, {"cells", r.cells.size()}}, dir / "report.json");

  for (const auto& plot : r.plots) {
    PlotOptions options;
    options.title = plot.dataset + " (" + plot.context + " context)";
    render_plot(plot.series, r.config.alpha_grid, dir / ("plot_" + plot.dataset + "_" + plot.context + ".svg"),
                options);
  }
}

}  // namespace jroc
