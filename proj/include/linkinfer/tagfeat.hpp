#pragma once

// Hashtag features. Shared hashtags count for more when they are rare
// overall (Adamic-Adar on total use counts) and when their use is
// concentrated on few users (low entropy of the hashtag-user count vector).

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include "linkinfer/dataset.hpp"

namespace linkinfer {

inline constexpr std::size_t kHashtagFeatureCount = 10;
inline constexpr std::array<std::string_view, kHashtagFeatureCount> kHashtagFeatureNames{
    "x_comm", "x_frac", "x_dotpro", "x_cosine", "x_minH", "x_aaH", "x_minE", "x_aaE", "x_w_aaE", "x_f_aaE"};

/// Log base for hashtag entropies (bits).
inline constexpr double kEntropyLogBase = 2.0;

struct HashtagIndex {
  std::map<UserId, CountMap<std::string>> user_counts;  // n_u
  std::map<std::string, std::size_t> totals;            // sum_u n_{h,u}
  std::map<std::string, double> entropy;                // E_h in bits
};

/// Shannon entropy of a count vector normalized to a distribution.
/// Throws std::invalid_argument when no entry is positive.
double hashtag_entropy(std::span<const std::size_t> counts);
/// Same, for real-valued nonnegative weights.
double entropy_of_weights(std::span<const double> weights);

HashtagIndex build_hashtag_index(const Dataset& d);

bool share_hashtag(const HashtagIndex& idx, UserPair pair);

/// Features in kHashtagFeatureNames order. Throws DataError when the pair
/// shares no hashtag, or when a shared hashtag has total count < 2 or a
/// vanishing entropy (the user-count filter was not applied).
std::array<double, kHashtagFeatureCount> hashtag_features(const HashtagIndex& idx, UserPair pair);

}  // namespace linkinfer
