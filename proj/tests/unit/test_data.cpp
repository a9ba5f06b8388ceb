#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "helpers.hpp"
#include "jroc/data.hpp"
#include "jroc/error.hpp"

using namespace jroc;
using jroc::testing::data_path;

namespace {

DataErrc error_code_of(const std::string& csv, const CsvOptions& options = {}) {
  std::istringstream in(csv);
  try {
    parse_csv(in, options);
  } catch (const DataError& e) {
    return e.code();
  }
  FAIL("expected a DataError");
  return DataErrc::bad_schema;
}

// Instances as sortable tuples so partitions can be compared as multisets.
std::vector<std::pair<std::vector<double>, std::size_t>> as_multiset(const std::vector<Instance>& rows) {
  std::vector<std::pair<std::vector<double>, std::size_t>> out;
  for (const auto& r : rows) {
    std::vector<double> v;
    for (const auto& x : r.values) v.push_back(x ? *x : -1e300);
    out.emplace_back(std::move(v), r.label.value_or(99));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("bundled datasets load with the expected shape") {
  const auto iris = load_csv(data_path("iris.csv"));
  CHECK(iris.m() == 4);
  CHECK(iris.n() == 150);
  CHECK(iris.c() == 3);
  const auto diabetes = load_csv(data_path("diabetes.csv"));
  CHECK(diabetes.m() == 8);
  CHECK(diabetes.n() == 768);
  CHECK(diabetes.c() == 2);
  const auto counts = diabetes.class_counts();
  CHECK(counts[0] + counts[1] == 768);
}

TEST_CASE("csv parsing infers kinds, missing cells and class order") {
  std::istringstream in("a,b,class\n1.5,red,yes\n?,blue,no\n2,\"red\",yes\n");
  const auto d = parse_csv(in);
  CHECK(d.m() == 2);
  CHECK(d.n() == 3);
  CHECK(d.schema()[0].kind == AttributeKind::numeric);
  CHECK(d.schema()[1].kind == AttributeKind::nominal);
  CHECK(d.schema()[1].values == std::vector<std::string>{"red", "blue"});
  CHECK(d.classes() == std::vector<std::string>{"yes", "no"});
  CHECK_FALSE(d[1].values[0].has_value());
  CHECK(*d[1].values[1] == 1.0);
  CHECK(*d[2].label == 0);
}

TEST_CASE("csv label column can be chosen by name or index") {
  const std::string csv = "class,a,b\nx,1,2\ny,3,4\n";
  CsvOptions by_name;
  by_name.label_column = std::string("class");
  std::istringstream in1(csv);
  const auto d1 = parse_csv(in1, by_name);
  CHECK(d1.schema()[0].name == "a");
  CHECK(d1.c() == 2);
  CsvOptions by_index;
  by_index.label_column = std::size_t{0};
  std::istringstream in2(csv);
  CHECK(parse_csv(in2, by_index).schema() == d1.schema());
}

TEST_CASE("csv errors carry distinct codes") {
  CHECK(error_code_of("a,b,class\n1,2\n") == DataErrc::ragged_row);
  CHECK(error_code_of("a,b,class\n") == DataErrc::empty_dataset);
  CHECK(error_code_of("a,b,class\n1,2,?\n3,4,?\n") == DataErrc::missing_label);
  CsvOptions named;
  named.label_column = std::string("label");
  CHECK(error_code_of("a,b,class\n1,2,x\n3,4,y\n", named) == DataErrc::missing_label_column);
  try {
    load_csv("/nonexistent/file.csv");
    FAIL("expected failure");
  } catch (const DataError& e) {
    CHECK(e.code() == DataErrc::unreadable_file);
  }
}

TEST_CASE("unlabeled rows are kept when allowed") {
  CsvOptions options;
  options.allow_unlabeled = true;
  std::istringstream in("a,class\n1,x\n2,y\n3,?\n");
  const auto d = parse_csv(in, options);
  CHECK(d.n() == 3);
  CHECK_FALSE(d[2].label.has_value());
  CHECK_FALSE(d.labeled());
}

TEST_CASE("schema sidecar overrides kind inference") {
  const auto dir = std::filesystem::temp_directory_path() / "jroc_schema_test";
  std::filesystem::create_directories(dir);
  const auto schema = dir / "schema.json";
  {
    std::ofstream out(schema);
    out << R"({"attributes": [{"name": "a", "kind": "nominal", "values": ["1", "2", "3"]}],
               "classes": ["y", "x"]})";
  }
  CsvOptions options;
  options.schema_path = schema;
  std::istringstream in("a,class\n1,x\n3,y\n");
  const auto d = parse_csv(in, options);
  CHECK(d.schema()[0].kind == AttributeKind::nominal);
  CHECK(*d[1].values[0] == 2.0);
  CHECK(d.classes() == std::vector<std::string>{"y", "x"});
  CHECK(*d[0].label == 1);

  std::istringstream bad("a,class\n4,x\n3,y\n");
  CHECK_THROWS_AS(parse_csv(bad, options), DataError);
}

TEST_CASE("dataset invariants are enforced") {
  std::vector<AttributeSchema> schema{{"a", AttributeKind::numeric, {}}};
  CHECK_THROWS_AS(Dataset(schema, {"only"}, {}), ValidationError);
  CHECK_THROWS_AS(Dataset(schema, {"x", "y"}, {Instance{{1.0}, 2}}), ValidationError);
  CHECK_THROWS_AS(Dataset(schema, {"x", "y"}, {Instance{{1.0, 2.0}, 0}}), ValidationError);
  std::vector<AttributeSchema> dup{{"a", AttributeKind::numeric, {}}, {"a", AttributeKind::numeric, {}}};
  CHECK_THROWS_AS(Dataset(dup, {"x", "y"}, {}), ValidationError);
  std::vector<AttributeSchema> nominal{{"n", AttributeKind::nominal, {"p", "q"}}};
  CHECK_THROWS_AS(Dataset(nominal, {"x", "y"}, {Instance{{5.0}, 0}}), ValidationError);
}

TEST_CASE("iris splits 2/3 - 1/3 into 100 and 50, stratified") {
  const auto iris = load_csv(data_path("iris.csv"));
  const std::array<double, 2> fractions{2.0 / 3.0, 1.0 / 3.0};
  const auto parts = split_dataset(iris, fractions, 7);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].n() == 100);
  CHECK(parts[1].n() == 50);
  for (auto count : parts[1].class_counts()) CHECK((count == 16 || count == 17));

  const std::array<double, 2> halves{0.5, 0.5};
  const auto work = split_dataset(parts[0], halves, 11);
  CHECK(work[0].n() == 50);
  CHECK(work[1].n() == 50);
}

TEST_CASE("split pieces are disjoint and reassemble the input") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto d = jroc::testing::random_dataset(seed, 3, 37 + seed, 2 + seed % 3, 0.1);
    const std::array<double, 3> fractions{0.5, 0.3, 0.2};
    const auto parts = split_dataset(d, fractions, seed);
    std::vector<Instance> all;
    std::size_t total = 0;
    for (const auto& p : parts) {
      total += p.n();
      all.insert(all.end(), p.instances().begin(), p.instances().end());
    }
    CHECK(total == d.n());
    CHECK(as_multiset(all) == as_multiset(d.instances()));
    for (std::size_t k = 0; k < parts.size(); ++k) {
      CHECK(std::abs(static_cast<double>(parts[k].n()) - fractions[k] * static_cast<double>(d.n())) < 1.0);
    }
  }
}

TEST_CASE("split is deterministic and the identity split keeps every row") {
  const auto d = jroc::testing::random_dataset(5, 3, 40, 2);
  const std::array<double, 2> f{0.6, 0.4};
  const auto a = split_dataset(d, f, 3);
  const auto b = split_dataset(d, f, 3);
  CHECK(a[0].instances() == b[0].instances());
  const std::array<double, 1> whole{1.0};
  const auto same = split_dataset(d, whole, 99);
  CHECK(as_multiset(same[0].instances()) == as_multiset(d.instances()));
}

TEST_CASE("split rejects bad fractions and tiny classes") {
  const auto d = jroc::testing::random_dataset(1, 2, 10, 2);
  const std::array<double, 2> bad_sum{0.5, 0.4};
  CHECK_THROWS_AS(split_dataset(d, bad_sum, 0), ValidationError);
  const std::array<double, 2> negative{1.5, -0.5};
  CHECK_THROWS_AS(split_dataset(d, negative, 0), ValidationError);
  std::vector<double> many(6, 1.0 / 6.0);
  CHECK_THROWS_AS(split_dataset(d, many, 0), ValidationError);
}

TEST_CASE("masking nulls excluded attributes and keeps existing nulls") {
  const Instance x{{5.1, 3.5, 1.4, 0.2}, 1};
  const auto masked = mask_instance(x, FeatureConfiguration::from_bit_string("0001"));
  CHECK_FALSE(masked.values[0].has_value());
  CHECK_FALSE(masked.values[1].has_value());
  CHECK_FALSE(masked.values[2].has_value());
  CHECK(*masked.values[3] == 0.2);
  CHECK(masked.label == x.label);
  CHECK(mask_instance(x, FeatureConfiguration::full(4)) == x);
  const Instance y{{std::nullopt, 3.5, 1.4, 0.2}, 0};
  CHECK(mask_instance(y, FeatureConfiguration::full(4)) == y);
  CHECK_THROWS_AS(mask_instance(x, FeatureConfiguration::full(3)), ValidationError);
}

TEST_CASE("masking is idempotent and monotone in the configuration") {
  const auto d = jroc::testing::random_dataset(2, 5, 30, 2, 0.2);
  for (const auto& x : d.instances()) {
    for (std::uint64_t a = 0; a < 32; ++a) {
      const FeatureConfiguration ca(5, a);
      const auto once = mask_instance(x, ca);
      CHECK(mask_instance(once, ca) == once);
      for (std::uint64_t b = 0; b < 32; ++b) {
        const FeatureConfiguration cb(5, b);
        if (!ca.is_subset_of(cb)) continue;
        const auto wider = mask_instance(x, cb);
        for (std::size_t j = 0; j < 5; ++j) {
          if (once.values[j]) CHECK(wider.values[j].has_value());
        }
      }
    }
  }
}
