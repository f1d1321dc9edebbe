#include "linkinfer/textfeat.hpp"

#include <algorithm>
#include <cmath>

namespace linkinfer {

std::vector<double> TfidfMatrix::dense(UserId u) const {
  std::vector<double> out(vocabulary.size(), 0.0);
  auto it = vectors.find(u);
  if (it != vectors.end())
    for (const auto& [term, w] : it->second) out[term] = w;
  return out;
}

TfidfMatrix tfidf(const Dataset& d) {
  TfidfMatrix m;
  const auto& user_tokens = d.indexes().user_tokens;
  std::map<std::string, std::size_t> df;
  for (const auto& [u, counts] : user_tokens)
    for (const auto& [t, n] : counts) ++df[t];
  m.documents = user_tokens.size();

  std::map<std::string, std::size_t> term_index;
  for (const auto& [t, n] : df) {
    term_index.emplace(t, m.vocabulary.size());
    m.vocabulary.push_back(t);
    m.idf.push_back(std::log(static_cast<double>(m.documents) / (1.0 + static_cast<double>(n))));
  }

  for (const auto& [u, counts] : user_tokens) {
    std::size_t total = 0;
    for (const auto& [t, n] : counts) total += n;
    std::vector<std::pair<std::size_t, double>> vec;
    double norm2 = 0;
    for (const auto& [t, n] : counts) {
      const std::size_t k = term_index.at(t);
      const double w = static_cast<double>(n) / static_cast<double>(total) * m.idf[k];
      vec.emplace_back(k, w);
      norm2 += w * w;
    }
    if (norm2 > 0) {
      const double norm = std::sqrt(norm2);
      for (auto& e : vec) e.second /= norm;
    }
    m.vectors.emplace(u, std::move(vec));
  }
  return m;
}

std::optional<DistanceFeatures> text_features(const TfidfMatrix& m, UserPair pair) {
  if (!m.has(pair.first) || !m.has(pair.second)) return std::nullopt;
  auto x = m.dense(pair.first);
  auto y = m.dense(pair.second);
  return pairwise_distances(x, y);
}

}  // namespace linkinfer
