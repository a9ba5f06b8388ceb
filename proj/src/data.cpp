#include "jroc/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "jroc/error.hpp"
#include "jroc/rng.hpp"

namespace jroc {

const char* to_string(DataErrc code) noexcept {
  switch (code) {
    case DataErrc::unreadable_file: return "unreadable file";
    case DataErrc::ragged_row: return "ragged row";
    case DataErrc::empty_dataset: return "empty dataset";
    case DataErrc::missing_label_column: return "label column missing";
    case DataErrc::missing_label: return "missing label";
    case DataErrc::bad_schema: return "schema mismatch";
  }
  return "data error";
}

// ---------------------------------------------------------------------------
// Dataset

Dataset::Dataset(std::vector<AttributeSchema> schema, std::vector<std::string> classes,
                 std::vector<Instance> instances)
    : schema_(std::move(schema)), classes_(std::move(classes)), instances_(std::move(instances)) {
  std::unordered_set<std::string> names;
  for (const auto& a : schema_) {
    if (!names.insert(a.name).second) throw ValidationError("duplicate attribute name: " + a.name);
    if (a.kind == AttributeKind::nominal) {
      if (a.values.empty()) throw ValidationError("nominal attribute without values: " + a.name);
      std::unordered_set<std::string> seen(a.values.begin(), a.values.end());
      if (seen.size() != a.values.size()) {
        throw ValidationError("nominal attribute with duplicate values: " + a.name);
      }
    }
  }
  if (classes_.size() < 2) throw ValidationError("a dataset needs at least two classes");
  std::unordered_set<std::string> seen(classes_.begin(), classes_.end());
  if (seen.size() != classes_.size()) throw ValidationError("duplicate class names");

  for (const auto& x : instances_) {
    if (x.values.size() != schema_.size()) {
      throw ValidationError("instance width does not match the schema");
    }
    if (x.label && *x.label >= classes_.size()) throw ValidationError("label out of range");
    for (std::size_t j = 0; j < schema_.size(); ++j) {
      if (!x.values[j] || schema_[j].kind != AttributeKind::nominal) continue;
      const double v = *x.values[j];
      if (v < 0 || v != std::floor(v) || v >= static_cast<double>(schema_[j].values.size())) {
        throw ValidationError("nominal index out of range for attribute " + schema_[j].name);
      }
    }
  }
}

bool Dataset::labeled() const noexcept {
  return std::all_of(instances_.begin(), instances_.end(),
                     [](const Instance& x) { return x.label.has_value(); });
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(c(), 0);
  for (const auto& x : instances_) {
    if (x.label) ++counts[*x.label];
  }
  return counts;
}

Dataset Dataset::with_instances(std::vector<Instance> instances) const {
  return Dataset(schema_, classes_, std::move(instances));
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  std::vector<Instance> picked;
  picked.reserve(indices.size());
  for (std::size_t i : indices) picked.push_back(instances_.at(i));
  return with_instances(std::move(picked));
}

// ---------------------------------------------------------------------------
// CSV loading

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cell += ch;
      }
    } else if (ch == '"') {
      quoted = true;
      was_quoted = true;
    } else if (ch == ',') {
      cells.push_back(was_quoted ? cell : trim(cell));
      cell.clear();
      was_quoted = false;
    } else {
      cell += ch;
    }
  }
  cells.push_back(was_quoted ? cell : trim(cell));
  return cells;
}

std::optional<double> parse_number(const std::string& s) {
  double v = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

struct SchemaOverride {
  std::vector<AttributeSchema> attributes;
  std::vector<std::string> classes;
};

SchemaOverride read_schema_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(DataErrc::unreadable_file, "cannot open schema " + path.string());
  SchemaOverride out;
  try {
    const auto j = nlohmann::json::parse(in);
    for (const auto& a : j.at("attributes")) {
      AttributeSchema s;
      s.name = a.at("name").get<std::string>();
      const auto kind = a.at("kind").get<std::string>();
      if (kind == "numeric") {
        s.kind = AttributeKind::numeric;
      } else if (kind == "nominal") {
        s.kind = AttributeKind::nominal;
        s.values = a.at("values").get<std::vector<std::string>>();
      } else {
        throw DataError(DataErrc::bad_schema, "unknown attribute kind " + kind);
      }
      out.attributes.push_back(std::move(s));
    }
    if (j.contains("classes")) out.classes = j.at("classes").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(DataErrc::bad_schema, std::string("malformed schema sidecar: ") + e.what());
  }
  return out;
}

std::size_t index_of(const std::vector<std::string>& list, const std::string& value) {
  return static_cast<std::size_t>(std::find(list.begin(), list.end(), value) - list.begin());
}

}  // namespace

Dataset parse_csv(std::istream& in, const CsvOptions& options) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    rows.push_back(split_row(line));
  }
  if (rows.empty()) throw DataError(DataErrc::empty_dataset, "no header row");
  const std::vector<std::string> header = std::move(rows.front());
  rows.erase(rows.begin());
  if (rows.empty()) throw DataError(DataErrc::empty_dataset, "header without data rows");

  std::size_t label_col = header.size() - 1;
  if (const auto* name = std::get_if<std::string>(&options.label_column)) {
    label_col = index_of(header, *name);
    if (label_col == header.size()) {
      throw DataError(DataErrc::missing_label_column, "no column named " + *name);
    }
  } else if (const auto* idx = std::get_if<std::size_t>(&options.label_column)) {
    if (*idx >= header.size()) {
      throw DataError(DataErrc::missing_label_column, "label column index out of range");
    }
    label_col = *idx;
  }

  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != header.size()) {
      throw DataError(DataErrc::ragged_row, "row " + std::to_string(r + 2) + " has " +
                                                std::to_string(rows[r].size()) + " cells, header has " +
                                                std::to_string(header.size()));
    }
  }

  std::vector<std::size_t> attr_cols;
  for (std::size_t col = 0; col < header.size(); ++col) {
    if (col != label_col) attr_cols.push_back(col);
  }
  const auto is_missing = [&](const std::string& cell) { return cell == options.missing_token; };

  std::vector<AttributeSchema> schema;
  std::vector<std::string> classes;
  const bool has_sidecar = options.schema_path.has_value();
  if (has_sidecar) {
    auto sidecar = read_schema_sidecar(*options.schema_path);
    if (sidecar.attributes.size() != attr_cols.size()) {
      throw DataError(DataErrc::bad_schema, "sidecar attribute count does not match the file");
    }
    for (std::size_t j = 0; j < attr_cols.size(); ++j) {
      if (sidecar.attributes[j].name != header[attr_cols[j]]) {
        throw DataError(DataErrc::bad_schema, "sidecar attribute " + sidecar.attributes[j].name +
                                                  " does not match column " + header[attr_cols[j]]);
      }
    }
    schema = std::move(sidecar.attributes);
    classes = std::move(sidecar.classes);
  } else {
    for (std::size_t col : attr_cols) {
      AttributeSchema s;
      s.name = header[col];
      const bool numeric = std::all_of(rows.begin(), rows.end(), [&](const auto& row) {
        return is_missing(row[col]) || parse_number(row[col]).has_value();
      });
      if (!numeric) {
        s.kind = AttributeKind::nominal;
        for (const auto& row : rows) {
          if (!is_missing(row[col]) && index_of(s.values, row[col]) == s.values.size()) {
            s.values.push_back(row[col]);
          }
        }
      }
      schema.push_back(std::move(s));
    }
  }
  const bool fixed_classes = !classes.empty();

  std::vector<Instance> instances;
  instances.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    Instance x;
    x.values.reserve(attr_cols.size());
    for (std::size_t j = 0; j < attr_cols.size(); ++j) {
      const auto& cell = row[attr_cols[j]];
      if (is_missing(cell)) {
        x.values.emplace_back(std::nullopt);
      } else if (schema[j].kind == AttributeKind::numeric) {
        const auto v = parse_number(cell);
        if (!v) throw DataError(DataErrc::bad_schema, "non-numeric cell '" + cell + "' in " + schema[j].name);
        x.values.emplace_back(*v);
      } else {
        const std::size_t k = index_of(schema[j].values, cell);
        if (k == schema[j].values.size()) {
          throw DataError(DataErrc::bad_schema, "value '" + cell + "' not declared for " + schema[j].name);
        }
        x.values.emplace_back(static_cast<double>(k));
      }
    }
    const auto& label = row[label_col];
    if (is_missing(label) || label.empty()) {
      if (!options.allow_unlabeled) {
        throw DataError(DataErrc::missing_label, "row " + std::to_string(r + 2) + " has no label");
      }
    } else {
      std::size_t k = index_of(classes, label);
      if (k == classes.size()) {
        if (fixed_classes) throw DataError(DataErrc::bad_schema, "undeclared class " + label);
        classes.push_back(label);
      }
      x.label = k;
    }
    instances.push_back(std::move(x));
  }
  if (classes.empty()) throw DataError(DataErrc::missing_label, "no row carries a label");
  if (classes.size() < 2) throw DataError(DataErrc::bad_schema, "only one class present");
  return Dataset(std::move(schema), std::move(classes), std::move(instances));
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError(DataErrc::unreadable_file, "cannot open " + path.string());
  return parse_csv(in, options);
}

// ---------------------------------------------------------------------------
// Splitting

namespace {

// Largest-remainder rounding of total * fractions; ties go to the lower index.
std::vector<std::size_t> apportion(std::size_t total, std::span<const double> fractions) {
  std::vector<std::size_t> sizes(fractions.size());
  std::vector<double> rem(fractions.size());
  std::size_t assigned = 0;
  for (std::size_t j = 0; j < fractions.size(); ++j) {
    const double q = static_cast<double>(total) * fractions[j];
    const double fl = std::floor(q + 1e-9);
    sizes[j] = static_cast<std::size_t>(fl);
    rem[j] = q - fl;
    assigned += sizes[j];
  }
  std::vector<std::size_t> order(fractions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
  for (std::size_t i = 0; assigned < total; i = (i + 1) % order.size(), ++assigned) {
    ++sizes[order[i]];
  }
  return sizes;
}

}  // namespace

std::vector<Dataset> split_dataset(const Dataset& d, std::span<const double> fractions,
                                   std::uint64_t seed) {
  if (fractions.empty()) throw ValidationError("split needs at least one fraction");
  double sum = 0;
  for (double f : fractions) {
    if (!(f > 0)) throw ValidationError("split fractions must be positive");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("split fractions must sum to 1");
  if (!d.labeled()) throw ValidationError("stratified split needs a labeled dataset");

  const std::size_t parts = fractions.size();
  std::vector<std::vector<std::size_t>> by_class(d.c());
  for (std::size_t i = 0; i < d.n(); ++i) by_class[*d[i].label].push_back(i);
  for (std::size_t k = 0; k < d.c(); ++k) {
    if (!by_class[k].empty() && by_class[k].size() < parts) {
      throw ValidationError("class " + d.classes()[k] + " has fewer members than split parts");
    }
  }

  const auto targets = apportion(d.n(), fractions);
  std::vector<std::vector<std::size_t>> alloc(d.c(), std::vector<std::size_t>(parts, 0));
  std::vector<std::vector<double>> rem(d.c(), std::vector<double>(parts, 0));
  std::vector<std::size_t> row_deficit(d.c(), 0);
  std::vector<long long> col_deficit(targets.begin(), targets.end());
  for (std::size_t k = 0; k < d.c(); ++k) {
    std::size_t placed = 0;
    for (std::size_t j = 0; j < parts; ++j) {
      const double q = static_cast<double>(by_class[k].size()) * fractions[j];
      const double fl = std::floor(q + 1e-9);
      alloc[k][j] = static_cast<std::size_t>(fl);
      rem[k][j] = q - fl;
      placed += alloc[k][j];
      col_deficit[j] -= static_cast<long long>(alloc[k][j]);
    }
    row_deficit[k] = by_class[k].size() - placed;
  }
  // Hand out the leftover units, rows with the most leftovers first, each to
  // the parts still furthest below their global target.
  std::vector<std::size_t> row_order(d.c());
  std::iota(row_order.begin(), row_order.end(), 0);
  std::stable_sort(row_order.begin(), row_order.end(),
                   [&](std::size_t a, std::size_t b) { return row_deficit[a] > row_deficit[b]; });
  for (std::size_t k : row_order) {
    while (row_deficit[k] > 0) {
      std::vector<std::size_t> cols(parts);
      std::iota(cols.begin(), cols.end(), 0);
      std::stable_sort(cols.begin(), cols.end(), [&](std::size_t a, std::size_t b) {
        if (col_deficit[a] != col_deficit[b]) return col_deficit[a] > col_deficit[b];
        return rem[k][a] > rem[k][b];
      });
      for (std::size_t j : cols) {
        if (row_deficit[k] == 0 || col_deficit[j] <= 0) break;
        ++alloc[k][j];
        --col_deficit[j];
        --row_deficit[k];
      }
    }
  }

  Rng rng(seed);
  std::vector<std::vector<std::size_t>> members(parts);
  for (std::size_t k = 0; k < d.c(); ++k) {
    auto& idx = by_class[k];
    rng.shuffle(std::span<std::size_t>(idx));
    std::size_t pos = 0;
    for (std::size_t j = 0; j < parts; ++j) {
      members[j].insert(members[j].end(), idx.begin() + static_cast<std::ptrdiff_t>(pos),
                        idx.begin() + static_cast<std::ptrdiff_t>(pos + alloc[k][j]));
      pos += alloc[k][j];
    }
  }
  std::vector<Dataset> out;
  out.reserve(parts);
  for (auto& idx : members) {
    std::sort(idx.begin(), idx.end());
    out.push_back(d.subset(idx));
  }
  return out;
}

Instance mask_instance(const Instance& x, const FeatureConfiguration& cfg) {
  if (cfg.width() != x.values.size()) {
    throw ValidationError("feature configuration width does not match the instance");
  }
  Instance out = x;
  for (std::size_t j = 0; j < out.values.size(); ++j) {
    if (!cfg.contains(j)) out.values[j].reset();
  }
  return out;
}

}  // namespace jroc
