#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jroc/data.hpp"
#include "jroc/rng.hpp"

namespace jroc::testing {

inline std::string data_path(const std::string& name) { return std::string(JROC_DATA_DIR) + "/" + name; }
inline std::string fixture_path(const std::string& name) { return std::string(JROC_FIXTURE_DIR) + "/" + name; }

// Numeric attributes whose values drift with the class, so models learn
// something, with an optional share of missing cells. Every class appears.
inline Dataset random_dataset(std::uint64_t seed, std::size_t m, std::size_t n, std::size_t c,
                              double missing_rate = 0.0) {
  Rng rng(seed);
  std::vector<AttributeSchema> schema;
  for (std::size_t j = 0; j < m; ++j) schema.push_back({"a" + std::to_string(j), AttributeKind::numeric, {}});
  std::vector<std::string> classes;
  for (std::size_t k = 0; k < c; ++k) classes.push_back("k" + std::to_string(k));
  std::vector<Instance> rows;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t label = i % c;
    Instance x;
    x.label = label;
    for (std::size_t j = 0; j < m; ++j) {
      if (rng.uniform01() < missing_rate) {
        x.values.emplace_back(std::nullopt);
      } else {
        const double signal = (j % 2 == 0) ? static_cast<double>(label) : 0.0;
        x.values.emplace_back(signal * (1.0 + static_cast<double>(j)) + 2.0 * rng.uniform01());
      }
    }
    rows.push_back(std::move(x));
  }
  return Dataset(std::move(schema), std::move(classes), std::move(rows));
}

}  // namespace jroc::testing
