#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace jroc {

// Subset of the m attributes that are purchased (left unmasked). Bit j is
// attribute j, counting from zero.
class FeatureConfiguration {
 public:
  static constexpr std::size_t max_width = 64;

  FeatureConfiguration() = default;
  FeatureConfiguration(std::size_t width, std::uint64_t bits);

  static FeatureConfiguration full(std::size_t width);
  static FeatureConfiguration empty(std::size_t width) { return {width, 0}; }
  // Attribute 1 is the leftmost character; accepts only '0' and '1'.
  static FeatureConfiguration from_bit_string(std::string_view text);

  std::size_t width() const noexcept { return width_; }
  std::uint64_t bits() const noexcept { return bits_; }
  std::size_t count() const noexcept { return static_cast<std::size_t>(std::popcount(bits_)); }
  bool contains(std::size_t attribute) const noexcept {
    return attribute < width_ && ((bits_ >> attribute) & 1U) != 0;
  }
  bool is_empty() const noexcept { return bits_ == 0; }
  bool is_full() const noexcept { return *this == full(width_); }

  FeatureConfiguration without(std::size_t attribute) const;
  FeatureConfiguration with(std::size_t attribute) const;
  bool is_subset_of(const FeatureConfiguration& other) const noexcept {
    return width_ == other.width_ && (bits_ & ~other.bits_) == 0;
  }

  std::string to_bit_string() const;

  friend bool operator==(const FeatureConfiguration&, const FeatureConfiguration&) = default;
  friend std::strong_ordering operator<=>(const FeatureConfiguration& a, const FeatureConfiguration& b) {
    if (auto c = a.width_ <=> b.width_; c != 0) return c;
    return a.bits_ <=> b.bits_;
  }

 private:
  std::size_t width_ = 0;
  std::uint64_t bits_ = 0;
};

// Number of configurations a backward search visits: 1 + m + (m-1) + ... + 1.
constexpr std::size_t backward_budget(std::size_t m) noexcept { return m * (m + 1) / 2 + 1; }

}  // namespace jroc
