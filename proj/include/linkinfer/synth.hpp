#pragma once

// Synthetic social network with planted communities. One latent community
// structure drives both the friendship graph (stochastic block model) and
// content homophily; friend pairs additionally receive private hashtags and
// a shared location with probability pair_signal_rate.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "linkinfer/dataset.hpp"

namespace linkinfer {

struct SynthConfig {
  std::size_t n_users = 300;
  std::size_t n_communities = 10;
  double p_in = 0.25;
  double p_out = 0.004;
  double posts_per_user = 40;
  std::size_t vocab_size = 3000;
  std::size_t n_hashtags = 2000;
  std::size_t n_locations = 500;
  std::size_t n_categories = kSceneCategories;
  double topic_concentration = 0.7;  // share of draws from the community's own pool
  double pair_signal_rate = 0.6;
  double tokens_per_post = 8;
  double hashtags_per_post = 1.5;
  double image_rate = 0.6;
  double checkin_rate = 0.75;
  std::uint64_t seed = 42;

  /// Throws ConfigError for out-of-range values.
  void validate() const;
};

struct PlantedSignal {
  UserPair pair;
  std::vector<std::string> hashtags;
  std::int64_t location = 0;
};

struct SynthResult {
  Dataset dataset;
  std::vector<UserPair> ground_truth;      // every friendship, all published
  std::vector<std::size_t> community;      // indexed by raw user id
  std::vector<PlantedSignal> planted;
  std::vector<std::string> warnings;
};

SynthResult generate(const SynthConfig& cfg);

/// posts.jsonl, edges.csv, ground_truth.csv, communities.csv and planted.csv.
void write_synth(const std::filesystem::path& dir, const SynthResult& r);

}  // namespace linkinfer
