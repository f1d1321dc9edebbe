#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>

namespace linkinfer {

inline constexpr std::size_t kDistanceCount = 8;

/// Column order of every 8-measure feature vector.
inline constexpr std::array<std::string_view, kDistanceCount> kDistanceNames{
    "cosine", "euclidean", "correlation", "chebyshev", "bray_curtis", "canberra", "manhattan", "sq_euclidean"};

struct DistanceFeatures {
  std::array<double, kDistanceCount> values{};
  /// Set when cosine or correlation had a zero-norm side and was defined as 0.
  bool degenerate = false;
};

/// Cosine and correlation are emitted in similarity form. Canberra terms and
/// Bray-Curtis with a zero denominator contribute 0. Sizes must match.
DistanceFeatures pairwise_distances(std::span<const double> x, std::span<const double> y);

}  // namespace linkinfer
