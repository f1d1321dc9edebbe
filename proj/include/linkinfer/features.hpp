#pragma once

// Per-modality feature tables aligned with a pair list, and their CSV form.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "linkinfer/dataset.hpp"
#include "linkinfer/walkfeat.hpp"

namespace linkinfer {

struct FeatureTable {
  Modality modality = Modality::Hashtag;
  std::vector<std::string> columns;
  std::vector<std::optional<std::vector<double>>> rows;  // one per pair; nullopt = unavailable

  std::size_t available_count() const;
  bool available(std::size_t pair_index) const { return pair_index < rows.size() && rows[pair_index].has_value(); }
};

/// Available rows and their labels, in pair order.
struct LabeledRows {
  std::vector<std::size_t> pair_index;
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
};
LabeledRows gather(const FeatureTable& t, std::span<const PairSample> pairs);

FeatureTable hashtag_table(const Dataset& d, std::span<const PairSample> pairs);
FeatureTable text_table(const Dataset& d, std::span<const PairSample> pairs);
FeatureTable image_table(const Dataset& d, std::span<const PairSample> pairs, double threshold = 0.05,
                         std::size_t categories = kSceneCategories);
FeatureTable location_table(const LocationEmbedding& e, std::span<const PairSample> pairs);
/// Friend pairs whose edge entered the partial graph are unavailable; an
/// equal number of strangers is kept so the classes stay balanced.
FeatureTable network_table(const NetworkEmbedding& e, std::span<const PairSample> pairs, std::uint64_t seed);

/// Header "u,v,label,<columns>", one row per available pair in pair order.
void save_table(const std::filesystem::path& path, const FeatureTable& t, std::span<const PairSample> pairs);
/// Realigns rows with `pairs`; throws DataError for rows naming unknown pairs.
FeatureTable load_table(const std::filesystem::path& path, Modality m, std::span<const PairSample> pairs);

/// Pair list CSV: "u,v,label,H,T,I,L,E" with 0/1 availability flags.
void save_pairs(const std::filesystem::path& path, std::span<const PairSample> pairs);
std::vector<PairSample> load_pairs(const std::filesystem::path& path);

std::vector<int> labels_of(std::span<const PairSample> pairs);

}  // namespace linkinfer
