#pragma once

// Late fusion of per-modality forest posteriors. Each modality's forest is
// trained on one part of the training pairs; its AUC on the other part
// becomes its confidence, and target pairs are scored by the
// confidence-weighted mean of their available posteriors.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "linkinfer/evaluate.hpp"
#include "linkinfer/features.hpp"
#include "linkinfer/forest.hpp"

namespace linkinfer {

/// Subset of modalities as a bit set over kAllModalities.
class ModalitySet {
 public:
  constexpr ModalitySet() = default;
  static constexpr ModalitySet all() { return ModalitySet(0x1F); }
  static constexpr ModalitySet of(Modality m) { return ModalitySet(static_cast<std::uint8_t>(1u << index_of(m))); }
  /// Letters from "HTILE" in any order, or "all".
  static ModalitySet parse(std::string_view letters);

  constexpr bool contains(Modality m) const { return bits_ & (1u << index_of(m)); }
  constexpr ModalitySet with(Modality m) const { return ModalitySet(bits_ | of(m).bits_); }
  constexpr std::size_t size() const { return static_cast<std::size_t>(__builtin_popcount(bits_)); }
  constexpr bool empty() const { return bits_ == 0; }
  /// Canonical letters in H, T, I, L, E order.
  std::string letters() const;

  friend constexpr bool operator==(ModalitySet, ModalitySet) = default;

 private:
  constexpr explicit ModalitySet(std::uint8_t bits) : bits_(bits) {}
  std::uint8_t bits_ = 0;
};

/// The 5 singletons, the 25 subsets of size 2..4 and the full set, by size
/// and then lexicographically over H < T < I < L < E.
std::vector<ModalitySet> enumerate_subsets();

using Posteriors = std::array<std::optional<double>, kModalityCount>;
using Confidences = std::array<std::optional<double>, kModalityCount>;

/// Normalized weights a^D / sum a^D over modalities in `subset` that have
/// both a posterior and a confidence; all zero when none qualifies. If every
/// qualifying confidence is 0 the weights fall back to uniform.
std::array<double, kModalityCount> fusion_weights(const Posteriors& x, const Confidences& a, ModalitySet subset);

/// Confidence-weighted score; nullopt when no modality of `subset` is usable.
std::optional<double> weighted_score(const Posteriors& x, const Confidences& a, ModalitySet subset);
/// Unweighted mean of available posteriors in `subset`.
std::optional<double> mean_score(const Posteriors& x, ModalitySet subset);

/// One feature table per modality; null entries are not trained.
using TableSet = std::array<const FeatureTable*, kModalityCount>;

struct FusionModel {
  std::array<std::optional<Forest>, kModalityCount> forests;
  Confidences confidence;
  double inner_split = 0.8;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;

  /// Posteriors of the modalities that have a forest, a confidence and a feature row.
  Posteriors posteriors(const TableSet& tables, std::size_t pair_index) const;
};

/// Splits `train` (indices into pairs) per class into inner_split /
/// 1 - inner_split, fits one forest per modality in `modalities` on the first
/// part and sets its confidence to its AUC on the second part. Modalities
/// without usable data are dropped with a warning.
FusionModel fit_fusion(const TableSet& tables, std::span<const PairSample> pairs, std::span<const std::size_t> train,
                       double inner_split, std::uint64_t seed, const ForestConfig& forest = {},
                       ModalitySet modalities = ModalitySet::all());

std::optional<double> score_multimodal(const FusionModel& m, const TableSet& tables, std::size_t pair_index,
                                       ModalitySet subset);
std::optional<double> score_baseline(const FusionModel& m, const TableSet& tables, std::size_t pair_index);

struct SubsetResult {
  ModalitySet subset;
  CvResult weighted;
  CvResult baseline;  // simple average over the same subset
  std::size_t unscorable = 0;  // target pairs skipped, summed over folds
};

/// Out-of-fold scores of one pair under the full modality set.
struct ScoredPair {
  std::size_t pair_index = 0;
  std::size_t fold = 0;
  Posteriors posterior;
  std::optional<double> weighted;
  std::optional<double> baseline;
};

/// Outer stratified k-fold over all pairs; per fold a fresh FusionModel is
/// fit on the training folds and every subset is scored on the target fold.
/// When `scores` is given it receives one entry per pair, in pair order.
std::vector<SubsetResult> cross_validate_fusion(const TableSet& tables, std::span<const PairSample> pairs,
                                                std::span<const ModalitySet> subsets, std::size_t folds,
                                                double inner_split, std::uint64_t seed,
                                                const ForestConfig& forest = {},
                                                std::vector<ScoredPair>* scores = nullptr);

}  // namespace linkinfer
