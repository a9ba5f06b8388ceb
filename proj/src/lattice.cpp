#include "jroc/lattice.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "jroc/error.hpp"

namespace jroc {

EvalPoint evaluate_configuration(const TrainedModel& model, const std::string& model_id,
                                 const Dataset& d, const PerExampleContext& pec,
                                 const FeatureConfiguration& cfg) {
  if (!d.labeled()) throw ValidationError("evaluation needs a labeled dataset");
  if (cfg.width() != d.m()) throw ValidationError("feature configuration width does not match the dataset");
  if (model.width() != d.m()) throw ValidationError("model width does not match the dataset");
  pec.check_compatible(d.m(), d.c(), d.n());

  EvalPoint p{model_id, cfg, 0.0, 0.0};
  if (d.empty()) return p;
  std::vector<Value> masked(d.m());
  double tc = 0, mc = 0;
  for (std::size_t i = 0; i < d.n(); ++i) {
    const auto& x = d[i];
    for (std::size_t j = 0; j < d.m(); ++j) masked[j] = cfg.contains(j) ? x.values[j] : std::nullopt;
    const auto& ctx = pec.at(i);
    mc += ctx.mc(model.predict(masked), *x.label);
    tc += test_cost(ctx, masked, cfg);
  }
  const double n = static_cast<double>(d.n());
  p.mean_tc = tc / n;
  p.mean_mc = mc / n;
  return p;
}

ConfigurationEvaluator::ConfigurationEvaluator(TrainedModel model, std::string model_id,
                                               const Dataset& d, PerExampleContext pec)
    : model_(std::move(model)), model_id_(std::move(model_id)), d_(&d), pec_(std::move(pec)) {
  if (!d.labeled()) throw ValidationError("evaluation needs a labeled dataset");
  pec_.check_compatible(d.m(), d.c(), d.n());
}

const EvalPoint& ConfigurationEvaluator::operator()(const FeatureConfiguration& cfg) const {
  if (cfg.width() != d_->m()) throw ValidationError("feature configuration width does not match the dataset");
  auto it = cache_.find(cfg.bits());
  if (it == cache_.end()) {
    it = cache_.emplace(cfg.bits(), evaluate_configuration(model_, model_id_, *d_, pec_, cfg)).first;
  }
  return it->second;
}

PointFunction ConfigurationEvaluator::as_function() const {
  return [this](const FeatureConfiguration& cfg) { return (*this)(cfg); };
}

std::vector<EvalPoint> enumerate_full_lattice(const PointFunction& evaluate, std::size_t m,
                                              std::size_t ceiling) {
  if (m > ceiling || m >= FeatureConfiguration::max_width) {
    throw ValidationError("full lattice refused: m = " + std::to_string(m) + " exceeds the ceiling of " +
                          std::to_string(ceiling) +
                          "; use backward_search or random_search (bmc/btc/bjc/rnd) instead");
  }
  const std::uint64_t total = std::uint64_t{1} << m;
  std::vector<EvalPoint> points;
  points.reserve(total);
  for (std::uint64_t bits = 0; bits < total; ++bits) points.push_back(evaluate({m, bits}));
  return points;
}

std::vector<EvalPoint> enumerate_full_lattice(const TrainedModel& model, const std::string& model_id,
                                              const Dataset& d, const PerExampleContext& pec,
                                              std::size_t ceiling) {
  if (d.m() > ceiling) return enumerate_full_lattice(PointFunction{}, d.m(), ceiling);
  ConfigurationEvaluator eval(model, model_id, d, pec);
  return enumerate_full_lattice(eval.as_function(), d.m(), ceiling);
}

// ---------------------------------------------------------------------------

namespace {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s, std::size_t line) {
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ValidationError("points CSV line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

void write_points_csv(std::ostream& out, const std::vector<EvalPoint>& points) {
  out << "model_id,cfg,popcount,mean_tc,mean_mc\n";
  for (const auto& p : points) {
    out << p.model_id << ',' << p.cfg.to_bit_string() << ',' << p.cfg.count() << ','
        << format_double(p.mean_tc) << ',' << format_double(p.mean_mc) << '\n';
  }
}

void write_points_csv(const std::filesystem::path& path, const std::vector<EvalPoint>& points) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_points_csv(out, points);
}

std::vector<EvalPoint> read_points_csv(std::istream& in) {
  std::vector<EvalPoint> points;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line_no == 1) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 5) {
      throw ValidationError("points CSV line " + std::to_string(line_no) + ": expected 5 columns");
    }
    EvalPoint p;
    p.model_id = cells[0];
    p.cfg = FeatureConfiguration::from_bit_string(cells[1]);
    p.mean_tc = parse_double(cells[3], line_no);
    p.mean_mc = parse_double(cells[4], line_no);
    if (static_cast<double>(p.cfg.count()) != parse_double(cells[2], line_no)) {
      throw ValidationError("points CSV line " + std::to_string(line_no) + ": popcount disagrees with cfg");
    }
    points.push_back(std::move(p));
  }
  return points;
}

std::vector<EvalPoint> read_points_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_points_csv(in);
}

}  // namespace jroc
