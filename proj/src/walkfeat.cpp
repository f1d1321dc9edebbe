#include "linkinfer/walkfeat.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "linkinfer/csv.hpp"
#include "linkinfer/random.hpp"

namespace linkinfer {

namespace {

UserVectors user_rows(const NodeVectors& nv, const std::map<UserId, std::uint32_t>& node_of) {
  UserVectors out;
  out.dim = nv.dim;
  for (const auto& [u, node] : node_of) {
    if (!nv.has(node)) continue;
    auto v = nv.vector(node);
    out.rows.emplace(u, std::vector<double>(v.begin(), v.end()));
  }
  return out;
}

}  // namespace

LocationEmbedding embed_locations(const Dataset& d, const EmbeddingConfig& cfg, std::uint64_t seed,
                                  const LocationRules& rules) {
  LocationEmbedding out;
  out.eligible = filter_location_users(d, rules.min_distinct, rules.min_checkins);
  out.vectors.dim = cfg.skipgram.dim;
  if (out.eligible.empty()) return out;

  WalkGraph g;
  std::map<UserId, std::uint32_t> user_node;
  std::map<std::int64_t, std::uint32_t> location_node;
  for (UserId u : out.eligible) user_node[u] = g.add_node();
  const auto& visits = d.indexes().user_locations;
  for (UserId u : out.eligible) {
    for (const auto& [loc, n] : visits.at(u)) {
      auto [it, inserted] = location_node.try_emplace(loc, 0);
      if (inserted) it->second = g.add_node();
      g.add_edge(user_node[u], it->second, static_cast<double>(n));
    }
  }
  WalkConfig walk = cfg.walk;
  walk.p = walk.q = 1.0;
  auto walks = random_walks(g, walk, mix_seed(seed, tag_hash("location-walks")));
  SkipGramConfig sg = cfg.skipgram;
  sg.seed = mix_seed(seed, tag_hash("location-skipgram"));
  out.vectors = user_rows(train_skipgram(walks, g.size(), sg), user_node);
  return out;
}

std::vector<std::optional<DistanceFeatures>> location_features(const LocationEmbedding& e,
                                                               std::span<const PairSample> pairs) {
  std::vector<std::optional<DistanceFeatures>> out;
  out.reserve(pairs.size());
  for (const auto& s : pairs) {
    if (!e.eligible.contains(s.pair.first) || !e.eligible.contains(s.pair.second)) out.emplace_back();
    else out.push_back(pairwise_distance_features(e.vectors, s.pair.first, s.pair.second));
  }
  return out;
}

EdgeSplit split_edges(const Dataset& d, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0) || fraction > 1.0) throw ConfigError("train edge fraction must lie in (0, 1]");
  std::vector<UserPair> edges = d.edges();
  const auto keep = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(edges.size())));
  Rng rng = stream(seed, "edge-split");
  shuffle(std::span(edges), rng);
  EdgeSplit split;
  split.partial.assign(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(keep));
  split.held_out.assign(edges.begin() + static_cast<std::ptrdiff_t>(keep), edges.end());
  std::sort(split.partial.begin(), split.partial.end());
  std::sort(split.held_out.begin(), split.held_out.end());
  return split;
}

void save_split(const std::filesystem::path& path, const EdgeSplit& split) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "u,v,in_partial_graph\n";
  std::vector<std::pair<UserPair, int>> rows;
  for (const auto& e : split.partial) rows.emplace_back(e, 1);
  for (const auto& e : split.held_out) rows.emplace_back(e, 0);
  std::sort(rows.begin(), rows.end());
  for (const auto& [e, flag] : rows) out << raw(e.first) << ',' << raw(e.second) << ',' << flag << '\n';
}

EdgeSplit load_split(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open split manifest " + path.string());
  std::string line;
  std::getline(in, line);
  EdgeSplit split;
  for (std::size_t line_no = 2; std::getline(in, line); ++line_no) {
    auto f = csv::split(line);
    try {
      if (f.size() != 3) throw std::invalid_argument("expected 3 fields");
      auto e = UserPair::of(UserId{csv::parse_uint(f[0])}, UserId{csv::parse_uint(f[1])});
      (csv::parse_uint(f[2]) ? split.partial : split.held_out).push_back(e);
    } catch (const std::invalid_argument& err) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + err.what());
    }
  }
  return split;
}

NetworkEmbedding embed_network(const Dataset& d, double train_edge_fraction, const EmbeddingConfig& cfg,
                               std::uint64_t seed) {
  return embed_network(split_edges(d, train_edge_fraction, seed), cfg, seed);
}

NetworkEmbedding embed_network(const EdgeSplit& split, const EmbeddingConfig& cfg, std::uint64_t seed) {
  if (split.partial.empty()) throw DataError("partial network graph is empty");
  NetworkEmbedding out;
  out.split = split;
  std::map<UserId, std::uint32_t> node_of;
  for (const auto& e : split.partial) {
    node_of.try_emplace(e.first, 0);
    node_of.try_emplace(e.second, 0);
  }
  for (auto& [u, node] : node_of) {
    node = static_cast<std::uint32_t>(out.node_users.size());
    out.node_users.push_back(u);
  }
  WalkGraph g(out.node_users.size());
  for (const auto& e : split.partial) g.add_edge(node_of[e.first], node_of[e.second]);
  out.walks = random_walks(g, cfg.walk, mix_seed(seed, tag_hash("network-walks")));
  SkipGramConfig sg = cfg.skipgram;
  sg.seed = mix_seed(seed, tag_hash("network-skipgram"));
  out.vectors = user_rows(train_skipgram(out.walks, g.size(), sg), node_of);
  return out;
}

std::vector<std::optional<std::vector<double>>> network_features(const NetworkEmbedding& e,
                                                                 std::span<const PairSample> pairs) {
  std::vector<std::optional<std::vector<double>>> out;
  out.reserve(pairs.size());
  for (const auto& s : pairs) out.push_back(hadamard_features(e.vectors, s.pair.first, s.pair.second));
  return out;
}

}  // namespace linkinfer
