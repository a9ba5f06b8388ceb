#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "jroc/feature_configuration.hpp"

namespace jroc {

enum class AttributeKind { numeric, nominal };

struct AttributeSchema {
  std::string name;
  AttributeKind kind = AttributeKind::numeric;
  // Nominal value list; empty for numeric attributes.
  std::vector<std::string> values;

  friend bool operator==(const AttributeSchema&, const AttributeSchema&) = default;
};

// A numeric value, or the index into the attribute's nominal value list.
// std::nullopt is a missing (null) value.
using Value = std::optional<double>;

struct Instance {
  std::vector<Value> values;
  std::optional<std::size_t> label;

  friend bool operator==(const Instance&, const Instance&) = default;
};

// Immutable collection of instances sharing a schema and class list.
class Dataset {
 public:
  Dataset() = default;
  // Throws ValidationError if any invariant is violated (unique names,
  // non-empty duplicate-free nominal lists, at least two classes, instance
  // widths, nominal indices and labels in range).
  Dataset(std::vector<AttributeSchema> schema, std::vector<std::string> classes,
          std::vector<Instance> instances);

  std::size_t m() const noexcept { return schema_.size(); }
  std::size_t n() const noexcept { return instances_.size(); }
  std::size_t c() const noexcept { return classes_.size(); }

  const std::vector<AttributeSchema>& schema() const noexcept { return schema_; }
  const std::vector<std::string>& classes() const noexcept { return classes_; }
  const std::vector<Instance>& instances() const noexcept { return instances_; }
  const Instance& operator[](std::size_t i) const { return instances_[i]; }

  bool empty() const noexcept { return instances_.empty(); }
  bool labeled() const noexcept;
  std::vector<std::size_t> class_counts() const;

  // Same schema and classes, different instances.
  Dataset with_instances(std::vector<Instance> instances) const;
  Dataset subset(std::span<const std::size_t> indices) const;

 private:
  std::vector<AttributeSchema> schema_;
  std::vector<std::string> classes_;
  std::vector<Instance> instances_;
};

struct CsvOptions {
  std::string missing_token = "?";
  // Column holding the class label, by header name or zero-based index.
  // Defaults to the last column.
  std::variant<std::monostate, std::string, std::size_t> label_column;
  // Optional JSON sidecar overriding kind inference:
  // {"attributes": [{"name", "kind", "values"}], "classes": [...]}
  std::optional<std::filesystem::path> schema_path;
  // Rows whose label is the missing token are kept as unlabeled instances
  // instead of being rejected.
  bool allow_unlabeled = false;
};

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
Dataset parse_csv(std::istream& in, const CsvOptions& options = {});

// Stratified partition into parts whose sizes follow `fractions`. Global part
// sizes use largest-remainder rounding of n * fraction; per-class allocations
// are then rounded so that both class totals and part totals are exact.
std::vector<Dataset> split_dataset(const Dataset& d, std::span<const double> fractions,
                                   std::uint64_t seed);

Instance mask_instance(const Instance& x, const FeatureConfiguration& cfg);

}  // namespace jroc
