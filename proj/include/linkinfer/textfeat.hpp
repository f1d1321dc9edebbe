#pragma once

// Caption features: one TF-IDF document per user (the concatenation of their
// captions), then the eight pairwise measures between user vectors.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "linkinfer/dataset.hpp"
#include "linkinfer/distances.hpp"

namespace linkinfer {

struct TfidfMatrix {
  std::vector<std::string> vocabulary;  // sorted
  std::vector<double> idf;              // aligned with vocabulary, natural log
  std::size_t documents = 0;            // users with a nonempty token list
  /// Sparse (term index, weight) entries, L2-normalized unless the raw vector is zero.
  std::map<UserId, std::vector<std::pair<std::size_t, double>>> vectors;

  bool has(UserId u) const { return vectors.contains(u); }
  std::vector<double> dense(UserId u) const;
};

/// tf = n_{t,u} / sum_t' n_{t',u}; idf = ln(n_d / (1 + df)), unsmoothed.
TfidfMatrix tfidf(const Dataset& d);

/// The eight measures of T_u vs T_v; nullopt when either user has no text.
std::optional<DistanceFeatures> text_features(const TfidfMatrix& m, UserPair pair);

}  // namespace linkinfer
