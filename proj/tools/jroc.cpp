// Command-line front end. Exit codes: 0 success, 1 validation error, 2 runtime error.
#include <array>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "jroc/classifiers.hpp"
#include "jroc/cost.hpp"
#include "jroc/data.hpp"
#include "jroc/error.hpp"
#include "jroc/harness.hpp"
#include "jroc/hull.hpp"
#include "jroc/lattice.hpp"
#include "jroc/plot.hpp"
#include "jroc/rng.hpp"
#include "jroc/search.hpp"
#include "jroc/stats.hpp"

namespace {

using namespace jroc;

struct DataOptions {
  std::string data;
  std::string schema;
  std::string label;
  std::string missing = "?";
  std::vector<std::string> models{"nb"};
  std::string context;
  std::optional<double> beta;
  std::optional<double> alpha;
  bool no_normalize = false;
  double train_fraction = 0.5;
  std::uint64_t seed = 0;
};

void add_data_options(CLI::App* cmd, DataOptions& o) {
  cmd->add_option("--data", o.data, "Dataset CSV (class in the last column unless --label)")->required();
  cmd->add_option("--schema", o.schema, "JSON schema sidecar for the CSV");
  cmd->add_option("--label", o.label, "Name of the class column");
  cmd->add_option("--missing", o.missing, "Token marking a missing value")->capture_default_str();
  cmd->add_option("--model", o.models, "Classifier: nb | majority | knn:K | tree:D:L | bagging:R:S:<base> | JSON")
      ->capture_default_str();
  auto* ctx = cmd->add_option("--context", o.context, "Cost context JSON (default: uniform)");
  cmd->add_option("--beta", o.beta, "Draw a random context with this dispersion")->excludes(ctx);
  cmd->add_option("--alpha", o.alpha, "Trade-off between MC and TC, overrides the context's alpha");
  cmd->add_flag("--no-normalize", o.no_normalize, "Use the context file's costs as given");
  cmd->add_option("--train-fraction", o.train_fraction, "Share of rows used for training; the rest is evaluated")
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Seed for the split, random contexts and RND")->capture_default_str();
}

struct Prepared {
  Dataset eval;
  PerExampleContext context;
  std::vector<std::pair<std::string, TrainedModel>> models;
};

Prepared prepare(const DataOptions& o) {
  CsvOptions csv;
  csv.missing_token = o.missing;
  if (!o.schema.empty()) csv.schema_path = o.schema;
  if (!o.label.empty()) csv.label_column = o.label;
  const Dataset d = load_csv(o.data, csv);
  if (!(o.train_fraction > 0 && o.train_fraction < 1)) throw ValidationError("--train-fraction must lie in (0, 1)");
  const std::array<double, 2> fractions{o.train_fraction, 1 - o.train_fraction};
  auto parts = split_dataset(d, fractions, derive_seed(o.seed, {0}));

  CostContext ctx = !o.context.empty() ? load_context(o.context, !o.no_normalize)
                    : o.beta           ? random_context(d.m(), d.c(), *o.beta, derive_seed(o.seed, {1}))
                                       : uniform_context(d.m(), d.c());
  if (o.alpha) ctx = ctx.with_alpha(*o.alpha);
  PerExampleContext pec(ctx);
  pec.check_compatible(d.m(), d.c(), parts[1].n());

  Prepared p{std::move(parts[1]), std::move(pec), {}};
  std::map<std::string, int> seen;
  for (const auto& text : o.models) {
    const auto spec = parse_classifier_spec(text);
    std::string id = spec.describe();
    if (const int k = seen[id]++; k > 0) id += "#" + std::to_string(k + 1);
    p.models.emplace_back(id, train(spec, parts[0]));
  }
  return p;
}

// Writes text to path, or stdout for "-" / empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out || !(out << text)) throw IoError("cannot write " + path);
}

std::vector<EvalPoint> read_points(const std::vector<std::string>& paths) {
  std::vector<EvalPoint> all;
  for (const auto& path : paths) {
    auto pts = read_points_csv(std::filesystem::path(path));
    all.insert(all.end(), pts.begin(), pts.end());
  }
  if (all.empty()) throw ValidationError("no points to work with");
  return all;
}

std::vector<std::vector<EvalPoint>> by_model(const std::vector<EvalPoint>& points) {
  std::map<std::string, std::vector<EvalPoint>> groups;
  for (const auto& p : points) groups[p.model_id].push_back(p);
  std::vector<std::vector<EvalPoint>> out;
  for (auto& [id, pts] : groups) out.push_back(std::move(pts));
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Joint test/misclassification cost analysis over feature configurations"};
  app.require_subcommand(1);

  DataOptions lattice_opts;
  std::string lattice_out;
  std::size_t ceiling = default_lattice_ceiling;
  auto* lattice = app.add_subcommand("lattice", "Evaluate every feature configuration and write a points CSV");
  add_data_options(lattice, lattice_opts);
  lattice->add_option("--out", lattice_out, "Points CSV (default stdout)");
  lattice->add_option("--ceiling", ceiling, "Refuse lattices wider than this many attributes")->capture_default_str();

  DataOptions search_opts;
  std::string search_method, search_out, search_points;
  std::optional<std::size_t> budget;
  auto* search = app.add_subcommand("search", "Run a backward or random search and write its trace JSON");
  add_data_options(search, search_opts);
  search->add_option("--method", search_method, "bmc | btc | bjc | rnd")
      ->required()
      ->check(CLI::IsMember({"bmc", "btc", "bjc", "rnd"}, CLI::ignore_case));
  search->add_option("--budget", budget, "RND sample size (default m(m+1)/2+1)");
  search->add_option("--out", search_out, "Trace JSON (default stdout)");
  search->add_option("--points", search_points, "Also write the visited points as CSV");

  std::vector<std::string> hull_points;
  std::string hull_out;
  auto* hull = app.add_subcommand("hull", "Lower convex hull per model and the dominance regions over alpha");
  hull->add_option("--points", hull_points, "Points CSV files")->required();
  hull->add_option("--out", hull_out, "Hull JSON (default stdout)");

  std::vector<std::string> select_points;
  double select_alpha = 0.5;
  std::string select_out;
  auto* select = app.add_subcommand("select", "Pick the (model, configuration) with the lowest joint cost");
  select->add_option("--points", select_points, "Points CSV files")->required();
  select->add_option("--alpha", select_alpha, "Trade-off between MC and TC")->required()->check(CLI::Range(0.0, 1.0));
  select->add_option("--out", select_out, "Selection JSON (default stdout)");

  std::vector<std::string> plot_points;
  std::vector<double> plot_alphas;
  std::string plot_out, plot_title = "JROC";
  bool no_hulls = false;
  auto* plot = app.add_subcommand("plot", "Render points, hulls and isometrics as SVG");
  plot->add_option("--points", plot_points, "Points CSV files")->required();
  plot->add_option("--alpha", plot_alphas, "Draw the isometric for this alpha (repeatable)")
      ->check(CLI::Range(0.0, 1.0));
  plot->add_option("--out", plot_out, "SVG file")->required();
  plot->add_option("--title", plot_title, "Plot title")->capture_default_str();
  plot->add_flag("--no-hulls", no_hulls, "Omit hull polylines");

  std::string config_path, experiment_out = "report";
  std::optional<std::uint64_t> experiment_seed;
  auto* experiment = app.add_subcommand("experiment", "Run the full comparison protocol from a config file");
  experiment->add_option("--config", config_path, "Experiment config JSON")->required();
  experiment->add_option("--out", experiment_out, "Report directory")->capture_default_str();
  experiment->add_option("--seed", experiment_seed, "Override the config's seed");

  std::string matrix_path, stats_out;
  double significance = 0.05;
  auto* stats = app.add_subcommand("stats", "Average ranks, Friedman, Iman-Davenport and Nemenyi on a result matrix");
  stats->add_option("--matrix", matrix_path, "Result matrix CSV (lower is better)")->required();
  stats->add_option("--significance", significance, "0.05 or 0.10")->capture_default_str();
  stats->add_option("--out", stats_out, "Report JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*lattice) {
    auto p = prepare(lattice_opts);
    std::vector<EvalPoint> all;
    for (const auto& [id, model] : p.models) {
      auto pts = enumerate_full_lattice(model, id, p.eval, p.context, ceiling);
      all.insert(all.end(), pts.begin(), pts.end());
    }
    std::ostringstream out;
    write_points_csv(out, all);
    emit(lattice_out, out.str());
  } else if (*search) {
    const auto method = parse_search_method(search_method);
    if (method == SearchMethod::bjc && !search_opts.alpha && search_opts.context.empty()) {
      std::cerr << "note: bjc uses alpha = 0.5 from the default context\n";
    }
    auto p = prepare(search_opts);
    nlohmann::json traces = nlohmann::json::array();
    std::vector<EvalPoint> visited;
    for (const auto& [id, model] : p.models) {
      const std::size_t m = p.eval.m();
      SearchTrace trace =
          method == SearchMethod::rnd
              ? random_search(model, id, p.eval, p.context, budget.value_or(backward_budget(m)),
                              derive_seed(search_opts.seed, {3}))
              : backward_search(model, id, p.eval, p.context, criterion_of(method),
                                method == SearchMethod::bjc ? std::optional<double>(p.context.at(0).alpha())
                                                            : std::nullopt);
      auto j = to_json(trace);
      j["model_id"] = id;
      traces.push_back(std::move(j));
      visited.insert(visited.end(), trace.visited.begin(), trace.visited.end());
    }
    emit(search_out, (traces.size() == 1 ? traces[0] : traces).dump(2) + "\n");
    if (!search_points.empty()) write_points_csv(std::filesystem::path(search_points), visited);
  } else if (*hull) {
    const auto points = read_points(hull_points);
    const auto clouds = by_model(points);
    nlohmann::json hulls = nlohmann::json::object();
    for (const auto& cloud : clouds) hulls[cloud.front().model_id] = to_json(lower_hull(cloud));
    const nlohmann::json out{{"hulls", hulls},
                             {"pooled", to_json(lower_hull(points))},
                             {"regions", to_json(dominance_regions(clouds))}};
    emit(hull_out, out.dump(2) + "\n");
  } else if (*select) {
    const auto points = read_points(select_points);
    const auto& best = select_best(points, select_alpha);
    auto j = to_json(best);
    j["alpha"] = select_alpha;
    j["jc"] = best.jc(select_alpha);
    emit(select_out, j.dump(2) + "\n");
  } else if (*plot) {
    const auto points = read_points(plot_points);
    PlotOptions options;
    options.title = plot_title;
    render_plot(make_series(points, !no_hulls), plot_alphas, plot_out, options);
  } else if (*experiment) {
    auto config = load_experiment_config(config_path);
    if (experiment_seed) config.seed = *experiment_seed;
    const auto report = run_experiment(config);
    emit_report(report, experiment_out);
    std::cout << "wrote " << report.cells.size() << " cells to " << experiment_out << "\n";
  } else if (*stats) {
    const auto matrix = read_result_matrix_csv(std::filesystem::path(matrix_path));
    emit(stats_out, to_json(analyze(matrix, significance)).dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const jroc::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == jroc::DataErrc::unreadable_file ? 2 : 1;
  } catch (const jroc::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
