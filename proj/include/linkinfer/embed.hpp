#pragma once

// Graph embedding engine: weighted (optionally node2vec-biased) random walks
// and skip-gram with negative sampling over the walk corpus.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "linkinfer/distances.hpp"
#include "linkinfer/types.hpp"

namespace linkinfer {

struct Neighbor {
  std::uint32_t node = 0;
  double weight = 0.0;
};

/// Undirected weighted graph over dense node ids.
class WalkGraph {
 public:
  explicit WalkGraph(std::size_t nodes = 0) : adjacency_(nodes) {}

  std::size_t size() const noexcept { return adjacency_.size(); }
  std::uint32_t add_node();
  /// Adds `weight` to the undirected edge {a, b}. Throws on a self-loop or a
  /// non-positive weight.
  void add_edge(std::uint32_t a, std::uint32_t b, double weight = 1.0);

  std::span<const Neighbor> neighbors(std::uint32_t node) const { return adjacency_.at(node); }
  bool connected(std::uint32_t a, std::uint32_t b) const;
  double weighted_degree(std::uint32_t node) const;

 private:
  std::vector<std::vector<Neighbor>> adjacency_;  // sorted by node id
};

struct WalkConfig {
  std::size_t walks_per_node = 10;
  std::size_t walk_length = 80;
  double p = 1.0;  // return parameter
  double q = 1.0;  // in-out parameter
};

using Walk = std::vector<std::uint32_t>;

/// walks_per_node rounds, each starting one walk at every node in id order.
/// Walk (round r, node v) draws from its own stream of (seed, v, r). An
/// isolated node yields a walk holding only itself.
std::vector<Walk> random_walks(const WalkGraph& g, const WalkConfig& cfg, std::uint64_t seed);

struct SkipGramConfig {
  std::size_t dim = 128;
  std::size_t window = 10;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;  // decays linearly to 1e-4 of itself
  std::uint64_t seed = 0;

  void validate() const;
};

/// Center vectors for every node that appears in the corpus.
struct NodeVectors {
  std::size_t dim = 0;
  std::vector<double> data;   // node-major, dim per node
  std::vector<bool> present;  // node occurred in some walk
  std::vector<double> epoch_loss;  // mean SGNS loss per (center, context) pair

  bool has(std::uint32_t node) const { return node < present.size() && present[node]; }
  std::span<const double> vector(std::uint32_t node) const { return {data.data() + node * dim, dim}; }
};

NodeVectors train_skipgram(std::span<const Walk> walks, std::size_t node_count, const SkipGramConfig& cfg);

/// SGNS objective for one (center, context, negatives) triple:
/// -log sigma(u_o . v) - sum_k log sigma(-u_k . v).
double sgns_loss(std::span<const double> center, std::span<const double> context,
                 std::span<const std::span<const double>> negatives);

struct SgnsGradient {
  double loss = 0;
  std::vector<double> center;
  std::vector<double> context;
  std::vector<std::vector<double>> negatives;
};

SgnsGradient sgns_gradient(std::span<const double> center, std::span<const double> context,
                           std::span<const std::span<const double>> negatives);

/// Embedding vectors keyed by user.
struct UserVectors {
  std::size_t dim = 0;
  std::map<UserId, std::vector<double>> rows;

  bool has(UserId u) const { return rows.contains(u); }
};

/// Header "dim,count", then "user,v1,...,vdim" per row.
void save_vectors(const std::filesystem::path& path, const UserVectors& v);
UserVectors load_vectors(const std::filesystem::path& path);

/// The eight distance measures between two users' vectors; nullopt if either is missing.
std::optional<DistanceFeatures> pairwise_distance_features(const UserVectors& e, UserId u, UserId v);
/// Componentwise product; nullopt if either vector is missing.
std::optional<std::vector<double>> hadamard_features(const UserVectors& e, UserId u, UserId v);

}  // namespace linkinfer
