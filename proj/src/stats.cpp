#include "jroc/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <nlohmann/json.hpp>

#include "jroc/error.hpp"

namespace jroc {

void ResultMatrix::validate() const {
  if (values.size() < 2) throw ValidationError("result matrix needs at least two rows");
  if (methods.size() < 2) throw ValidationError("result matrix needs at least two methods");
  if (!row_labels.empty() && row_labels.size() != values.size()) {
    throw ValidationError("result matrix row labels do not match the rows");
  }
  for (const auto& row : values) {
    if (row.size() != methods.size()) throw ValidationError("result matrix is not rectangular");
    for (double v : row) {
      if (!std::isfinite(v)) throw ValidationError("result matrix has a missing or non-finite cell");
    }
  }
}

ResultMatrix read_result_matrix_csv(std::istream& in) {
  ResultMatrix m;
  std::string line;
  bool header = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (header) {
      if (cells.size() < 3) throw ValidationError("result matrix header needs a row column and two methods");
      m.methods.assign(cells.begin() + 1, cells.end());
      header = false;
      continue;
    }
    if (cells.size() != m.methods.size() + 1) {
      throw ValidationError("result matrix line " + std::to_string(line_no) + " has the wrong width");
    }
    m.row_labels.push_back(cells[0]);
    std::vector<double> row;
    for (std::size_t j = 1; j < cells.size(); ++j) {
      double v = 0;
      const auto& s = cells[j];
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ValidationError("result matrix line " + std::to_string(line_no) + ": bad number '" + s + "'");
      }
      row.push_back(v);
    }
    m.values.push_back(std::move(row));
  }
  m.validate();
  return m;
}

ResultMatrix read_result_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_result_matrix_csv(in);
}

void write_result_matrix_csv(std::ostream& out, const ResultMatrix& m) {
  out << "row";
  for (const auto& name : m.methods) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    out << (m.row_labels.empty() ? std::to_string(i + 1) : m.row_labels[i]);
    for (double v : m.values[i]) {
      char buf[32];
      const auto res = std::to_chars(buf, buf + sizeof buf, v);
      out << ',' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    }
    out << '\n';
  }
}

void write_result_matrix_csv(const std::filesystem::path& path, const ResultMatrix& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_result_matrix_csv(out, m);
}

std::vector<double> mid_ranks(std::span<const double> row) {
  std::vector<std::size_t> order(row.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return row[a] < row[b]; });
  std::vector<double> ranks(row.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && row[order[j + 1]] == row[order[i]]) ++j;
    // Positions i..j (1-based i+1..j+1) share their mean.
    const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = shared;
    i = j + 1;
  }
  return ranks;
}

std::vector<double> average_ranks(const ResultMatrix& m) {
  m.validate();
  std::vector<double> sum(m.cols(), 0.0);
  for (const auto& row : m.values) {
    const auto r = mid_ranks(row);
    for (std::size_t j = 0; j < r.size(); ++j) sum[j] += r[j];
  }
  for (double& s : sum) s /= static_cast<double>(m.rows());
  return sum;
}

FriedmanResult friedman_statistic(std::span<const double> ranks, std::size_t n_rows, double significance) {
  const std::size_t k = ranks.size();
  if (k < 2 || n_rows < 2) throw ValidationError("Friedman test needs N >= 2 and k >= 2");
  if (!(significance > 0 && significance < 1)) throw ValidationError("significance must lie in (0, 1)");
  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(n_rows);
  double sq = 0;
  for (double r : ranks) sq += r * r;

  FriedmanResult out;
  out.significance = significance;
  out.chi_square = 12.0 * nd / (kd * (kd + 1)) * (sq - kd * (kd + 1) * (kd + 1) / 4.0);
  // Rounding can leave a tiny negative value for perfectly tied ranks.
  if (out.chi_square < 0 && out.chi_square > -1e-9) out.chi_square = 0;

  const boost::math::chi_squared chi(kd - 1);
  out.chi_square_critical = boost::math::quantile(boost::math::complement(chi, significance));
  out.chi_square_p = boost::math::cdf(boost::math::complement(chi, std::max(out.chi_square, 0.0)));
  out.reject = out.chi_square > out.chi_square_critical;

  const double df1 = kd - 1;
  const double df2 = (kd - 1) * (nd - 1);
  const boost::math::fisher_f fdist(df1, df2);
  out.f_critical = boost::math::quantile(boost::math::complement(fdist, significance));
  const double denom = nd * (kd - 1) - out.chi_square;
  if (denom <= 0) {
    out.iman_davenport = std::numeric_limits<double>::infinity();
    out.f_p = 0;
  } else {
    out.iman_davenport = (nd - 1) * out.chi_square / denom;
    out.f_p = boost::math::cdf(boost::math::complement(fdist, std::max(out.iman_davenport, 0.0)));
  }
  out.f_reject = out.iman_davenport > out.f_critical;
  return out;
}

double nemenyi_q(std::size_t k, double significance) {
  // Studentized range statistic divided by sqrt(2), k = 2..10.
  static constexpr double q05[] = {1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164};
  static constexpr double q10[] = {1.645, 2.052, 2.291, 2.459, 2.589, 2.693, 2.780, 2.855, 2.920};
  if (k < 2 || k > 10) throw ValidationError("Nemenyi table covers 2 <= k <= 10");
  if (std::abs(significance - 0.05) < 1e-12) return q05[k - 2];
  if (std::abs(significance - 0.10) < 1e-12) return q10[k - 2];
  throw ValidationError("Nemenyi table covers significance 0.05 and 0.10 only");
}

double nemenyi_critical_difference(std::size_t k, std::size_t n_rows, double significance) {
  if (n_rows < 1) throw ValidationError("Nemenyi critical difference needs N >= 1");
  const double kd = static_cast<double>(k);
  return nemenyi_q(k, significance) * std::sqrt(kd * (kd + 1) / (6.0 * static_cast<double>(n_rows)));
}

StatsReport analyze(const ResultMatrix& m, double significance) {
  StatsReport r;
  r.methods = m.methods;
  r.n_rows = m.rows();
  r.ranks = average_ranks(m);
  r.friedman = friedman_statistic(r.ranks, m.rows(), significance);
  r.critical_difference = nemenyi_critical_difference(m.cols(), m.rows(), significance);
  for (std::size_t a = 0; a < m.cols(); ++a) {
    for (std::size_t b = a + 1; b < m.cols(); ++b) {
      const double diff = std::abs(r.ranks[a] - r.ranks[b]);
      r.pairs.push_back({a, b, diff, diff > r.critical_difference});
    }
  }
  return r;
}

nlohmann::json to_json(const StatsReport& report) {
  nlohmann::json ranks = nlohmann::json::object();
  for (std::size_t j = 0; j < report.methods.size(); ++j) ranks[report.methods[j]] = report.ranks[j];
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : report.pairs) {
    pairs.push_back({{"a", report.methods[p.a]},
                     {"b", report.methods[p.b]},
                     {"rank_difference", p.rank_difference},
                     {"significant", p.significant}});
  }
  const auto& f = report.friedman;
  return {{"methods", report.methods},
          {"n_rows", report.n_rows},
          {"average_ranks", ranks},
          {"significance", f.significance},
          {"friedman",
           {{"chi_square", f.chi_square},
            {"critical_value", f.chi_square_critical},
            {"p_value", f.chi_square_p},
            {"reject", f.reject},
            {"df", report.methods.size() - 1}}},
          {"iman_davenport",
           {{"f", std::isfinite(f.iman_davenport) ? nlohmann::json(f.iman_davenport) : nlohmann::json("inf")},
            {"critical_value", f.f_critical},
            {"p_value", f.f_p},
            {"reject", f.f_reject}}},
          {"nemenyi_critical_difference", report.critical_difference},
          {"pairwise", pairs}};
}

}  // namespace jroc
