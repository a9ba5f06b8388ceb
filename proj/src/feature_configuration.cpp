#include "jroc/feature_configuration.hpp"

#include "jroc/error.hpp"

namespace jroc {

namespace {

std::uint64_t width_mask(std::size_t width) {
  return width >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
}

}  // namespace

FeatureConfiguration::FeatureConfiguration(std::size_t width, std::uint64_t bits)
    : width_(width), bits_(bits) {
  if (width > max_width) {
    throw ValidationError("feature configuration wider than 64 attributes");
  }
  if ((bits & ~width_mask(width)) != 0) {
    throw ValidationError("feature configuration has bits outside its width");
  }
}

FeatureConfiguration FeatureConfiguration::full(std::size_t width) {
  if (width > max_width) throw ValidationError("feature configuration wider than 64 attributes");
  return {width, width_mask(width)};
}

FeatureConfiguration FeatureConfiguration::from_bit_string(std::string_view text) {
  if (text.size() > max_width) throw ValidationError("bit string longer than 64 characters");
  std::uint64_t bits = 0;
  for (std::size_t j = 0; j < text.size(); ++j) {
    if (text[j] == '1') {
      bits |= std::uint64_t{1} << j;
    } else if (text[j] != '0') {
      throw ValidationError("bit string may only contain '0' and '1': " + std::string(text));
    }
  }
  return {text.size(), bits};
}

FeatureConfiguration FeatureConfiguration::without(std::size_t attribute) const {
  if (attribute >= width_) throw ValidationError("attribute index out of range");
  return {width_, bits_ & ~(std::uint64_t{1} << attribute)};
}

FeatureConfiguration FeatureConfiguration::with(std::size_t attribute) const {
  if (attribute >= width_) throw ValidationError("attribute index out of range");
  return {width_, bits_ | (std::uint64_t{1} << attribute)};
}

std::string FeatureConfiguration::to_bit_string() const {
  std::string out(width_, '0');
  for (std::size_t j = 0; j < width_; ++j) {
    if (contains(j)) out[j] = '1';
  }
  return out;
}

}  // namespace jroc
