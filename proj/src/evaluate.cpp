#include "linkinfer/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "linkinfer/random.hpp"
#include "linkinfer/types.hpp"

namespace linkinfer {

namespace {

struct MannWhitney {
  double u = 0;      // wins + ties / 2 of positives over negatives
  double pairs = 0;  // positives * negatives
};

MannWhitney mann_whitney(std::span<const int> labels, std::span<const double> scores) {
  if (labels.size() != scores.size()) throw std::invalid_argument("auc: labels and scores differ in length");
  const std::size_t n = labels.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double positives = 0;
  double rank_sum = 0;  // sum of 1-based mid-ranks of the positives
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double mid_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) {
        positives += 1;
        rank_sum += mid_rank;
      }
    }
    i = j;
  }
  const double negatives = static_cast<double>(n) - positives;
  if (positives == 0 || negatives == 0) throw DataError("auc needs both classes");
  return {rank_sum - positives * (positives + 1) / 2.0, positives * negatives};
}

}  // namespace

double auc(std::span<const int> labels, std::span<const double> scores) {
  auto mw = mann_whitney(labels, scores);
  return mw.u / mw.pairs;
}

std::vector<std::size_t> stratified_folds(std::span<const int> labels, std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw ConfigError("cross-validation needs at least two folds");
  std::vector<std::size_t> assignment(labels.size(), 0);
  Rng rng = stream(seed, "folds");
  for (int cls : {1, 0}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) members.push_back(i);
    shuffle(std::span(members), rng);
    for (std::size_t k = 0; k < members.size(); ++k) assignment[members[k]] = k % folds;
  }
  return assignment;
}

CvResult summarize(std::vector<double> fold_auc) {
  CvResult r;
  r.fold_auc = std::move(fold_auc);
  if (r.fold_auc.empty()) return r;
  const double n = static_cast<double>(r.fold_auc.size());
  r.mean = std::accumulate(r.fold_auc.begin(), r.fold_auc.end(), 0.0) / n;
  double var = 0;
  for (double a : r.fold_auc) var += (a - r.mean) * (a - r.mean);
  r.stddev = std::sqrt(var / n);
  return r;
}

CvResult cross_validate(std::span<const std::vector<double>> rows, std::span<const int> labels, std::size_t folds,
                        std::uint64_t seed, const ForestConfig& forest) {
  if (rows.size() != labels.size()) throw std::invalid_argument("cross_validate: rows and labels differ in length");
  auto fold_of = stratified_folds(labels, folds, seed);
  std::vector<double> fold_auc;
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::vector<double>> train_rows;
    std::vector<int> train_labels;
    std::vector<std::size_t> test;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (fold_of[i] == f) {
        test.push_back(i);
      } else {
        train_rows.push_back(rows[i]);
        train_labels.push_back(labels[i]);
      }
    }
    std::vector<int> test_labels;
    for (auto i : test) test_labels.push_back(labels[i]);
    const bool both = std::count(test_labels.begin(), test_labels.end(), 1) > 0 &&
                      std::count(test_labels.begin(), test_labels.end(), 0) > 0;
    if (!both) throw DataError("fold " + std::to_string(f) + " holds a single class");
    ForestConfig cfg = forest;
    cfg.seed = mix_seed(seed, tag_hash("cv-forest"), f);
    Forest model = Forest::fit(train_rows, train_labels, cfg);
    std::vector<double> scores;
    for (auto i : test) scores.push_back(model.posterior(rows[i]));
    fold_auc.push_back(auc(test_labels, scores));
  }
  return summarize(std::move(fold_auc));
}

FeatureAuc unsupervised_feature_auc(std::span<const std::vector<double>> rows, std::span<const int> labels,
                                    std::size_t column) {
  std::vector<double> scores;
  scores.reserve(rows.size());
  for (const auto& r : rows) scores.push_back(r.at(column));
  FeatureAuc out;
  if (std::adjacent_find(scores.begin(), scores.end(), std::not_equal_to<>()) == scores.end()) {
    out.constant = true;
    return out;
  }
  const auto mw = mann_whitney(labels, scores);
  const double flipped = mw.pairs - mw.u;
  out.inverted = flipped > mw.u;
  out.auc = std::max(mw.u, flipped) / mw.pairs;
  return out;
}

}  // namespace linkinfer
