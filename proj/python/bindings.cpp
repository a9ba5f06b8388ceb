#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <nlohmann/json.hpp>

#include "jroc/classifiers.hpp"
#include "jroc/cost.hpp"
#include "jroc/data.hpp"
#include "jroc/error.hpp"
#include "jroc/harness.hpp"
#include "jroc/hull.hpp"
#include "jroc/lattice.hpp"
#include "jroc/plot.hpp"
#include "jroc/search.hpp"
#include "jroc/stats.hpp"

namespace py = pybind11;
using namespace jroc;

namespace {

// JSON crosses the boundary as text; the Python side parses it.
py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

FeatureConfiguration cfg_arg(const Dataset& d, const std::string& bits) {
  const auto cfg = FeatureConfiguration::from_bit_string(bits);
  if (cfg.width() != d.m()) throw ValidationError("configuration width does not match the dataset");
  return cfg;
}

std::optional<double> alpha_for(SearchMethod method, std::optional<double> alpha) {
  if (method != SearchMethod::bjc) return std::nullopt;
  if (!alpha) throw ValidationError("bjc needs alpha");
  return alpha;
}

}  // namespace

PYBIND11_MODULE(_jroc, m) {
  m.doc() = "Joint test/misclassification cost analysis over feature configurations";

  static py::exception<ValidationError> validation(m, "ValidationError", PyExc_ValueError);
  static py::exception<IoError> io(m, "IoError", PyExc_OSError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const DataError& e) {
      if (e.code() == DataErrc::unreadable_file) {
        py::set_error(io, e.what());
      } else {
        py::set_error(validation, e.what());
      }
    } catch (const ValidationError& e) {
      py::set_error(validation, e.what());
    } catch (const IoError& e) {
      py::set_error(io, e.what());
    }
  });

  py::class_<Dataset>(m, "Dataset")
      .def_property_readonly("m", &Dataset::m)
      .def_property_readonly("n", &Dataset::n)
      .def_property_readonly("c", &Dataset::c)
      .def_property_readonly("classes", &Dataset::classes)
      .def_property_readonly("attribute_names",
                             [](const Dataset& d) {
                               std::vector<std::string> names;
                               for (const auto& a : d.schema()) names.push_back(a.name);
                               return names;
                             })
      .def("class_counts", &Dataset::class_counts)
      .def("__repr__", [](const Dataset& d) {
        return "<Dataset m=" + std::to_string(d.m()) + " n=" + std::to_string(d.n()) + " c=" + std::to_string(d.c()) +
               ">";
      });

  m.def(
      "load_csv",
      [](const std::filesystem::path& path, const std::string& missing, std::optional<std::string> label,
         std::optional<std::filesystem::path> schema) {
        CsvOptions options;
        options.missing_token = missing;
        if (label) options.label_column = *label;
        options.schema_path = schema;
        return load_csv(path, options);
      },
      py::arg("path"), py::arg("missing") = "?", py::arg("label") = py::none(), py::arg("schema") = py::none());
  m.def(
      "split_dataset",
      [](const Dataset& d, const std::vector<double>& fractions, std::uint64_t seed) {
        return split_dataset(d, fractions, seed);
      },
      py::arg("dataset"), py::arg("fractions"), py::arg("seed"));

  py::class_<CostContext>(m, "CostContext")
      .def(py::init<std::vector<double>, std::vector<std::vector<double>>, double>(), py::arg("test_costs"),
           py::arg("mc_matrix"), py::arg("alpha") = 0.5)
      .def_property_readonly("m", &CostContext::m)
      .def_property_readonly("c", &CostContext::c)
      .def_property_readonly("alpha", &CostContext::alpha)
      .def_property_readonly("test_costs", &CostContext::test_costs)
      .def_property_readonly("mc_matrix", &CostContext::mc_matrix)
      .def("is_normalized", &CostContext::is_normalized, py::arg("tol") = 1e-9)
      .def("with_alpha", &CostContext::with_alpha)
      .def("__eq__", [](const CostContext& a, const CostContext& b) { return a == b; });
  m.def("uniform_context", &uniform_context, py::arg("m"), py::arg("c"));
  m.def("random_context", &random_context, py::arg("m"), py::arg("c"), py::arg("beta") = default_beta,
        py::arg("seed") = 0);
  m.def("normalize_context", &normalize_context);
  m.def("load_context", &load_context, py::arg("path"), py::arg("normalize") = true);
  m.def("joint_cost", py::overload_cast<double, double, double>(&joint_cost), py::arg("alpha"), py::arg("mc"),
        py::arg("tc"));

  py::class_<TrainedModel>(m, "TrainedModel")
      .def_property_readonly("description", [](const TrainedModel& t) { return t.spec().describe(); })
      .def_property_readonly("modal_class", &TrainedModel::modal_class)
      .def_property_readonly("class_distribution", &TrainedModel::class_distribution)
      .def("predict", [](const TrainedModel& t, const Dataset& d, const std::string& cfg) {
        return predict_dataset(t, d, cfg_arg(d, cfg));
      });
  m.def(
      "train", [](const std::string& spec, const Dataset& d) { return train(parse_classifier_spec(spec), d); },
      py::arg("spec"), py::arg("dataset"), "spec: nb | majority | knn:K | tree:D:L | bagging:R:S:<base> | JSON");

  py::class_<EvalPoint>(m, "EvalPoint")
      .def(py::init([](std::string id, const std::string& cfg, double tc, double mc) {
             return EvalPoint{std::move(id), FeatureConfiguration::from_bit_string(cfg), tc, mc};
           }),
           py::arg("model_id"), py::arg("cfg"), py::arg("mean_tc"), py::arg("mean_mc"))
      .def_readonly("model_id", &EvalPoint::model_id)
      .def_property_readonly("cfg", [](const EvalPoint& p) { return p.cfg.to_bit_string(); })
      .def_readonly("mean_tc", &EvalPoint::mean_tc)
      .def_readonly("mean_mc", &EvalPoint::mean_mc)
      .def("jc", &EvalPoint::jc)
      .def("__eq__", [](const EvalPoint& a, const EvalPoint& b) { return a == b; })
      .def("__repr__", [](const EvalPoint& p) {
        return "<EvalPoint " + p.model_id + " " + p.cfg.to_bit_string() + " tc=" + std::to_string(p.mean_tc) +
               " mc=" + std::to_string(p.mean_mc) + ">";
      });

  m.def(
      "evaluate_configuration",
      [](const TrainedModel& t, const std::string& id, const Dataset& d, const CostContext& ctx,
         const std::string& cfg) { return evaluate_configuration(t, id, d, ctx, cfg_arg(d, cfg)); },
      py::arg("model"), py::arg("model_id"), py::arg("dataset"), py::arg("context"), py::arg("cfg"));
  m.def(
      "enumerate_full_lattice",
      [](const TrainedModel& t, const std::string& id, const Dataset& d, const CostContext& ctx,
         std::size_t ceiling) { return enumerate_full_lattice(t, id, d, ctx, ceiling); },
      py::arg("model"), py::arg("model_id"), py::arg("dataset"), py::arg("context"),
      py::arg("ceiling") = default_lattice_ceiling);

  py::class_<SearchTrace>(m, "SearchTrace")
      .def_property_readonly("method", [](const SearchTrace& t) { return to_string(t.method); })
      .def_readonly("visited", &SearchTrace::visited)
      .def_property_readonly("greedy_path",
                             [](const SearchTrace& t) {
                               std::vector<std::string> path;
                               for (const auto& c : t.greedy_path) path.push_back(c.to_bit_string());
                               return path;
                             })
      .def_property_readonly("budget", &SearchTrace::budget)
      .def("to_dict", [](const SearchTrace& t) { return to_python(to_json(t)); });
  m.def(
      "search",
      [](const TrainedModel& t, const std::string& id, const Dataset& d, const CostContext& ctx,
         const std::string& method_name, std::optional<double> alpha, std::optional<std::size_t> budget,
         std::uint64_t seed) {
        const auto method = parse_search_method(method_name);
        if (method == SearchMethod::rnd) {
          return random_search(t, id, d, ctx, budget.value_or(backward_budget(d.m())), seed);
        }
        return backward_search(t, id, d, ctx, criterion_of(method), alpha_for(method, alpha));
      },
      py::arg("model"), py::arg("model_id"), py::arg("dataset"), py::arg("context"), py::arg("method"),
      py::arg("alpha") = py::none(), py::arg("budget") = py::none(), py::arg("seed") = 0);

  m.def("lower_hull", [](const std::vector<EvalPoint>& pts) { return lower_hull(pts).vertices; });
  m.def("select_best", [](const std::vector<EvalPoint>& pts, double alpha) { return select_best(pts, alpha); },
        py::arg("points"), py::arg("alpha"));
  m.def("isometric_slope", &isometric_slope);
  m.def("dominance_regions", [](const std::vector<std::vector<EvalPoint>>& clouds) {
    return to_python(to_json(dominance_regions(clouds)));
  });
  m.def(
      "render_plot_svg",
      [](const std::vector<EvalPoint>& pts, const std::vector<double>& alphas, const std::string& title) {
        PlotOptions options;
        options.title = title;
        return render_plot_svg(make_series(pts), alphas, options);
      },
      py::arg("points"), py::arg("alphas") = std::vector<double>{}, py::arg("title") = "JROC");

  m.def("average_ranks", [](const std::vector<std::vector<double>>& values) {
    ResultMatrix rm;
    rm.values = values;
    for (std::size_t i = 0; i < values.size(); ++i) rm.row_labels.push_back(std::to_string(i));
    for (std::size_t j = 0; j < (values.empty() ? 0 : values[0].size()); ++j) rm.methods.push_back(std::to_string(j));
    return average_ranks(rm);
  });
  m.def("nemenyi_critical_difference", &nemenyi_critical_difference, py::arg("k"), py::arg("n_rows"),
        py::arg("significance") = 0.05);
  m.def(
      "analyze_matrix",
      [](const std::filesystem::path& path, double significance) {
        return to_python(to_json(analyze(read_result_matrix_csv(path), significance)));
      },
      py::arg("path"), py::arg("significance") = 0.05);

  m.def(
      "run_experiment",
      [](const std::filesystem::path& config_path, const std::filesystem::path& out_dir) {
        const auto report = run_experiment(load_experiment_config(config_path));
        emit_report(report, out_dir);
        return report.cells.size();
      },
      py::arg("config"), py::arg("out_dir"), py::call_guard<py::gil_scoped_release>(),
      "Runs the protocol, writes the report files and returns the number of cells.");
}
