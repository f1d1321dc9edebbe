#pragma once

// Image features from precomputed scene-category probabilities.

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "linkinfer/dataset.hpp"

namespace linkinfer {

struct CategoryIndex {
  std::size_t categories = kSceneCategories;
  double threshold = 0.05;
  /// n_u: per category, the number of u's images with P(c) >= threshold.
  std::map<UserId, std::vector<std::size_t>> counts;
  /// s_c: per category, each user's summed post-threshold probability.
  std::vector<std::map<UserId, double>> usage;
  /// Entropy (bits) of each s_c; 0 for an unused category.
  std::vector<double> usage_entropy;

  bool has(UserId u) const { return counts.contains(u); }
};

/// Probabilities below `threshold` are treated as 0 everywhere. Users with
/// at least one image get a count vector, possibly all zero. Throws
/// DataError for a category index >= categories.
CategoryIndex build_category_index(const Dataset& d, double threshold = 0.05,
                                   std::size_t categories = kSceneCategories);

/// Feature length for a given category count: min_count block + 3 scalars.
constexpr std::size_t image_feature_size(std::size_t categories) { return categories + 3; }

/// (min_count[0..C), x_cosine, x_F_maxcat, x_E_maxcat); nullopt when either
/// user has no image. maxcat ties break to the lowest index; x_E_maxcat is 0
/// when no category is mutually shared.
std::optional<std::vector<double>> image_features(const CategoryIndex& idx, UserPair pair);

}  // namespace linkinfer
