#include "linkinfer/imgfeat.hpp"

#include <cmath>

#include "linkinfer/tagfeat.hpp"

namespace linkinfer {

CategoryIndex build_category_index(const Dataset& d, double threshold, std::size_t categories) {
  CategoryIndex idx;
  idx.categories = categories;
  idx.threshold = threshold;
  idx.usage.resize(categories);
  for (const auto& p : d.posts()) {
    if (!p.has_image()) continue;
    auto& n = idx.counts[p.author];
    if (n.empty()) n.assign(categories, 0);
    for (const auto& ip : p.image_probs) {
      if (ip.category >= categories)
        throw DataError("post " + std::to_string(p.id) + ": image category " + std::to_string(ip.category) +
                        " exceeds configured category count " + std::to_string(categories));
      if (ip.probability < threshold) continue;
      ++n[ip.category];
      idx.usage[ip.category][p.author] += ip.probability;
    }
  }
  idx.usage_entropy.assign(categories, 0.0);
  for (std::size_t c = 0; c < categories; ++c) {
    if (idx.usage[c].empty()) continue;
    std::vector<double> w;
    for (const auto& [u, s] : idx.usage[c]) w.push_back(s);
    idx.usage_entropy[c] = entropy_of_weights(w);
  }
  return idx;
}

std::optional<std::vector<double>> image_features(const CategoryIndex& idx, UserPair pair) {
  auto iu = idx.counts.find(pair.first);
  auto iv = idx.counts.find(pair.second);
  if (iu == idx.counts.end() || iv == idx.counts.end()) return std::nullopt;
  const auto& nu = iu->second;
  const auto& nv = iv->second;
  const std::size_t c_count = idx.categories;

  std::vector<double> out(image_feature_size(c_count), 0.0);
  double dot = 0, uu = 0, vv = 0;
  std::size_t maxcat = 0;
  std::size_t max_min = 0;
  for (std::size_t c = 0; c < c_count; ++c) {
    const std::size_t m = std::min(nu[c], nv[c]);
    out[c] = static_cast<double>(m);
    if (m > max_min) {
      max_min = m;
      maxcat = c;
    }
    dot += static_cast<double>(nu[c]) * static_cast<double>(nv[c]);
    uu += static_cast<double>(nu[c]) * static_cast<double>(nu[c]);
    vv += static_cast<double>(nv[c]) * static_cast<double>(nv[c]);
  }
  out[c_count] = (uu > 0 && vv > 0) ? dot / std::sqrt(uu * vv) : 0.0;
  out[c_count + 1] = static_cast<double>(max_min);
  out[c_count + 2] = max_min > 0 ? idx.usage_entropy[maxcat] : 0.0;
  return out;
}

}  // namespace linkinfer
