#pragma once

// End-to-end experiment steps shared by the command-line tool and the tests.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "linkinfer/dataset.hpp"
#include "linkinfer/evaluate.hpp"
#include "linkinfer/features.hpp"
#include "linkinfer/forest.hpp"
#include "linkinfer/fusion.hpp"
#include "linkinfer/walkfeat.hpp"

namespace linkinfer {

struct ExperimentConfig {
  double low_pct = 0.10;
  double high_pct = 0.90;
  std::size_t hashtag_min_users = 2;
  std::size_t hashtag_max_users = 10;
  std::size_t token_min_users = 2;
  std::size_t token_max_users = 100;
  LocationRules location_rules;
  double image_threshold = 0.05;
  std::size_t image_categories = kSceneCategories;
  EmbeddingConfig location_embedding;
  EmbeddingConfig network_embedding;
  double train_edge_fraction = 0.8;
  ForestConfig forest;
  std::size_t folds = 5;
  double inner_split = 0.8;
  std::vector<double> removal_fractions{0.1, 0.2, 0.3, 0.4, 0.5};
  std::size_t removal_seeds = 3;
  std::uint64_t seed = 42;

  void validate() const;
};

/// Account, hashtag and token filters, in that order.
Dataset preprocess(const Dataset& raw, const ExperimentConfig& cfg);
std::vector<PairSample> sample_pairs(const Dataset& filtered, const ExperimentConfig& cfg);

struct FeatureSet {
  std::array<std::optional<FeatureTable>, kModalityCount> tables;
  std::optional<LocationEmbedding> location;
  std::optional<NetworkEmbedding> network;

  TableSet view() const;
};

FeatureSet compute_features(const Dataset& filtered, std::span<const PairSample> pairs, const ExperimentConfig& cfg,
                            ModalitySet which = ModalitySet::all());

/// Monomodal attack: k-fold forest CV over the pairs available in `t`.
CvResult attack(const FeatureTable& t, std::span<const PairSample> pairs, const ExperimentConfig& cfg);

std::vector<SubsetResult> fuse(const TableSet& tables, std::span<const PairSample> pairs,
                               std::span<const ModalitySet> subsets, const ExperimentConfig& cfg,
                               std::vector<ScoredPair>* scores = nullptr);

struct RobustnessRow {
  double fraction = 0;
  std::string attack;            // "H", "T", "I" or "HTI"
  std::optional<double> mean;    // over removal seeds; nullopt when unavailable
  std::optional<double> stddev;
  std::vector<double> per_seed;
};

/// For each fraction (0 is always included first) and removal seed: drop
/// posts from `raw`, rerun preprocessing, refresh availability of `pairs`,
/// recompute H/T/I features and evaluate the three attacks and their fusion.
std::vector<RobustnessRow> robustness_sweep(const Dataset& raw, std::span<const PairSample> pairs,
                                            const ExperimentConfig& cfg);

void write_attack_csv(const std::filesystem::path& path, Modality m, const CvResult& r);
void write_fusion_csv(const std::filesystem::path& path, std::span<const SubsetResult> results);
void write_scores_csv(const std::filesystem::path& path, std::span<const PairSample> pairs,
                      std::span<const ScoredPair> scores);
void write_robustness_csv(const std::filesystem::path& path, std::span<const RobustnessRow> rows);

}  // namespace linkinfer
