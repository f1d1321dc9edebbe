#pragma once

// AUC, stratified cross-validation and single-feature (unsupervised) scoring.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "linkinfer/forest.hpp"

namespace linkinfer {

/// Mann-Whitney AUC via mid-rank summation: P(pos > neg) + P(tie) / 2.
/// Throws DataError unless both classes are present.
double auc(std::span<const int> labels, std::span<const double> scores);

/// Fold id per sample. Positives and negatives are shuffled separately and
/// dealt round-robin, so each fold holds floor or ceil of its class share.
std::vector<std::size_t> stratified_folds(std::span<const int> labels, std::size_t folds, std::uint64_t seed);

struct CvResult {
  std::vector<double> fold_auc;
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation over folds
};

CvResult summarize(std::vector<double> fold_auc);

/// Per fold: fit a forest on the other folds, score the held-out fold,
/// record its AUC. Throws DataError when a fold lacks a class.
CvResult cross_validate(std::span<const std::vector<double>> rows, std::span<const int> labels, std::size_t folds,
                        std::uint64_t seed, const ForestConfig& forest = {});

struct FeatureAuc {
  double auc = 0.5;       // max(raw, 1 - raw)
  bool inverted = false;  // the feature ranks friends low
  bool constant = false;
};

/// Uses one raw feature column as the score.
FeatureAuc unsupervised_feature_auc(std::span<const std::vector<double>> rows, std::span<const int> labels,
                                    std::size_t column);

}  // namespace linkinfer
