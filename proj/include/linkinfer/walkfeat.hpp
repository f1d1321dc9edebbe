#pragma once

// Location and network pipelines on top of the embedding engine.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "linkinfer/dataset.hpp"
#include "linkinfer/embed.hpp"

namespace linkinfer {

struct EmbeddingConfig {
  WalkConfig walk;
  SkipGramConfig skipgram;
};

struct LocationEmbedding {
  std::set<UserId> eligible;
  UserVectors vectors;  // eligible users only; location vectors are discarded
};

/// User-location bipartite graph weighted by visit counts over eligible
/// users, first-order walks (p = q = 1), skip-gram.
LocationEmbedding embed_locations(const Dataset& d, const EmbeddingConfig& cfg, std::uint64_t seed,
                                  const LocationRules& rules = {});

/// Eight distance measures per pair; nullopt where a user is ineligible.
std::vector<std::optional<DistanceFeatures>> location_features(const LocationEmbedding& e,
                                                               std::span<const PairSample> pairs);

/// Published edges split into the adversary's partial graph and the held-out rest.
struct EdgeSplit {
  std::vector<UserPair> partial;
  std::vector<UserPair> held_out;
};

/// round(fraction * |E|) uniformly chosen edges go to the partial graph.
EdgeSplit split_edges(const Dataset& d, double fraction, std::uint64_t seed);
/// Manifest rows "u,v,in_partial_graph" (1/0), header included.
void save_split(const std::filesystem::path& path, const EdgeSplit& split);
EdgeSplit load_split(const std::filesystem::path& path);

struct NetworkEmbedding {
  EdgeSplit split;
  std::vector<UserId> node_users;  // walk node id -> user
  std::vector<Walk> walks;
  UserVectors vectors;
};

/// node2vec-style embedding trained on the partial graph only. Throws
/// DataError when the partial graph has no edges.
NetworkEmbedding embed_network(const Dataset& d, double train_edge_fraction, const EmbeddingConfig& cfg,
                               std::uint64_t seed);
NetworkEmbedding embed_network(const EdgeSplit& split, const EmbeddingConfig& cfg, std::uint64_t seed);

/// Hadamard features per pair; nullopt where an endpoint is absent from the partial graph.
std::vector<std::optional<std::vector<double>>> network_features(const NetworkEmbedding& e,
                                                                 std::span<const PairSample> pairs);

}  // namespace linkinfer
