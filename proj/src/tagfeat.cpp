#include "linkinfer/tagfeat.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace linkinfer {

namespace {

constexpr double kMinEntropy = 1e-12;

double log_entropy_base(double x) { return std::log(x) / std::log(kEntropyLogBase); }

// Adamic-Adar uses the natural logarithm.
double adamic_adar_log(double x) { return std::log(x); }

}  // namespace

double entropy_of_weights(std::span<const double> weights) {
  double total = 0;
  for (double w : weights) {
    if (w < 0) throw std::invalid_argument("entropy of negative weights");
    total += w;
  }
  if (!(total > 0)) throw std::invalid_argument("entropy of an all-zero vector");
  double h = 0;
  for (double w : weights) {
    if (w > 0) {
      const double p = w / total;
      h -= p * log_entropy_base(p);
    }
  }
  return h;
}

double hashtag_entropy(std::span<const std::size_t> counts) {
  std::vector<double> w(counts.begin(), counts.end());
  return entropy_of_weights(w);
}

HashtagIndex build_hashtag_index(const Dataset& d) {
  HashtagIndex idx;
  idx.user_counts = d.indexes().user_hashtags;
  for (const auto& [h, per_user] : d.indexes().hashtag_users) {
    std::vector<std::size_t> counts;
    std::size_t total = 0;
    for (const auto& [u, n] : per_user) {
      counts.push_back(n);
      total += n;
    }
    idx.totals[h] = total;
    idx.entropy[h] = hashtag_entropy(counts);
  }
  return idx;
}

bool share_hashtag(const HashtagIndex& idx, UserPair pair) {
  auto iu = idx.user_counts.find(pair.first);
  auto iv = idx.user_counts.find(pair.second);
  if (iu == idx.user_counts.end() || iv == idx.user_counts.end()) return false;
  auto a = iu->second.begin();
  auto b = iv->second.begin();
  while (a != iu->second.end() && b != iv->second.end()) {
    if (a->first < b->first) ++a;
    else if (b->first < a->first) ++b;
    else return true;
  }
  return false;
}

std::array<double, kHashtagFeatureCount> hashtag_features(const HashtagIndex& idx, UserPair pair) {
  auto iu = idx.user_counts.find(pair.first);
  auto iv = idx.user_counts.find(pair.second);
  if (iu == idx.user_counts.end() || iv == idx.user_counts.end())
    throw DataError("hashtag features requested for a user without hashtags");
  const auto& nu = iu->second;
  const auto& nv = iv->second;

  auto entropy_of = [&](const std::string& h) {
    double e = idx.entropy.at(h);
    if (e < kMinEntropy) throw DataError("hashtag '" + h + "' has zero entropy; apply the user-count filter");
    return e;
  };

  double common = 0, union_size = 0, dot = 0, norm_u = 0, norm_v = 0;
  double min_total = std::numeric_limits<double>::infinity();
  double aa_total = 0, min_entropy = std::numeric_limits<double>::infinity(), aa_entropy = 0;
  double union_inv_entropy = 0;

  for (const auto& [h, n] : nu) norm_u += static_cast<double>(n) * static_cast<double>(n);
  for (const auto& [h, n] : nv) norm_v += static_cast<double>(n) * static_cast<double>(n);

  auto a = nu.begin();
  auto b = nv.begin();
  while (a != nu.end() || b != nv.end()) {
    const bool take_a = b == nv.end() || (a != nu.end() && a->first < b->first);
    const bool take_b = a == nu.end() || (b != nv.end() && b->first < a->first);
    const std::string& h = take_a ? a->first : b->first;
    union_size += 1;
    union_inv_entropy += 1.0 / entropy_of(h);
    if (!take_a && !take_b) {
      const auto total = idx.totals.at(h);
      if (total < 2) throw DataError("hashtag '" + h + "' used fewer than twice overall");
      const double e = entropy_of(h);
      common += 1;
      dot += static_cast<double>(a->second) * static_cast<double>(b->second);
      min_total = std::min(min_total, static_cast<double>(total));
      aa_total += 1.0 / adamic_adar_log(static_cast<double>(total));
      min_entropy = std::min(min_entropy, e);
      aa_entropy += 1.0 / e;
      ++a;
      ++b;
    } else if (take_a) {
      ++a;
    } else {
      ++b;
    }
  }
  if (common == 0) throw DataError("pair shares no hashtag");

  return {common,
          common / union_size,
          dot,
          dot / std::sqrt(norm_u * norm_v),
          min_total,
          aa_total,
          min_entropy,
          aa_entropy,
          aa_entropy / union_size,
          aa_entropy / union_inv_entropy};
}

}  // namespace linkinfer
