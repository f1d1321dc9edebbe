#include "linkinfer/embed.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "linkinfer/csv.hpp"
#include "linkinfer/parallel.hpp"
#include "linkinfer/random.hpp"

namespace linkinfer {

std::uint32_t WalkGraph::add_node() {
  adjacency_.emplace_back();
  return static_cast<std::uint32_t>(adjacency_.size() - 1);
}

void WalkGraph::add_edge(std::uint32_t a, std::uint32_t b, double weight) {
  if (a == b) throw std::invalid_argument("walk graph self-loop on node " + std::to_string(a));
  if (!(weight > 0)) throw std::invalid_argument("walk graph edge weights must be positive");
  auto insert = [&](std::uint32_t from, std::uint32_t to) {
    auto& adj = adjacency_.at(from);
    auto it = std::lower_bound(adj.begin(), adj.end(), to,
                               [](const Neighbor& n, std::uint32_t id) { return n.node < id; });
    if (it != adj.end() && it->node == to) it->weight += weight;
    else adj.insert(it, Neighbor{to, weight});
  };
  insert(a, b);
  insert(b, a);
}

bool WalkGraph::connected(std::uint32_t a, std::uint32_t b) const {
  const auto& adj = adjacency_.at(a);
  auto it = std::lower_bound(adj.begin(), adj.end(), b,
                             [](const Neighbor& n, std::uint32_t id) { return n.node < id; });
  return it != adj.end() && it->node == b;
}

double WalkGraph::weighted_degree(std::uint32_t node) const {
  double s = 0;
  for (const auto& n : adjacency_.at(node)) s += n.weight;
  return s;
}

namespace {

std::size_t sample_cumulative(std::span<const double> cumulative, Rng& rng) {
  const double r = uniform01(rng) * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

}  // namespace

std::vector<Walk> random_walks(const WalkGraph& g, const WalkConfig& cfg, std::uint64_t seed) {
  if (g.size() == 0) throw std::invalid_argument("random walks on an empty graph");
  if (cfg.walk_length == 0) throw ConfigError("walk_length must be positive");
  if (!(cfg.p > 0) || !(cfg.q > 0)) throw ConfigError("node2vec p and q must be positive");
  const std::size_t n = g.size();
  const bool biased = cfg.p != 1.0 || cfg.q != 1.0;

  std::vector<std::vector<double>> first_order(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    double acc = 0;
    for (const auto& nb : g.neighbors(v)) first_order[v].push_back(acc += nb.weight);
  }

  std::vector<Walk> walks(cfg.walks_per_node * n);
  parallel_for(walks.size(), [&](std::size_t w) {
    const std::size_t round = w / n;
    const auto start = static_cast<std::uint32_t>(w % n);
    Rng rng(mix_seed(seed, start, round));
    Walk walk{start};
    walk.reserve(cfg.walk_length);
    std::vector<double> biased_cum;
    while (walk.size() < cfg.walk_length) {
      const std::uint32_t cur = walk.back();
      auto nbrs = g.neighbors(cur);
      if (nbrs.empty()) break;
      std::size_t pick;
      if (!biased || walk.size() == 1) {
        pick = sample_cumulative(first_order[cur], rng);
      } else {
        const std::uint32_t prev = walk[walk.size() - 2];
        biased_cum.clear();
        double acc = 0;
        for (const auto& nb : nbrs) {
          double alpha = nb.node == prev ? 1.0 / cfg.p : (g.connected(prev, nb.node) ? 1.0 : 1.0 / cfg.q);
          biased_cum.push_back(acc += nb.weight * alpha);
        }
        pick = sample_cumulative(biased_cum, rng);
      }
      walk.push_back(nbrs[pick].node);
    }
    walks[w] = std::move(walk);
  });
  return walks;
}

void SkipGramConfig::validate() const {
  if (dim == 0) throw ConfigError("skip-gram dim must be positive");
  if (window == 0) throw ConfigError("skip-gram window must be positive");
  if (!(learning_rate > 0)) throw ConfigError("skip-gram learning rate must be positive");
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// -log sigma(x), computed without overflow.
double neg_log_sigmoid(double x) { return x >= 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x)); }

// Eight independent partial sums; the order is fixed, so results stay reproducible.
template <class T>
double dot(const T* a, const T* b, std::size_t n) {
  T acc[8] = {};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    for (std::size_t k = 0; k < 8; ++k) acc[k] += a[i + k] * b[i + k];
  for (; i < n; ++i) acc[0] += a[i] * b[i];
  return ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]));
}

double dot(std::span<const double> a, std::span<const double> b) { return dot(a.data(), b.data(), a.size()); }

// Walker alias table for O(1) draws from a fixed discrete distribution.
class AliasTable {
 public:
  explicit AliasTable(std::span<const double> weights) : prob_(weights.size()), alias_(weights.size()) {
    const std::size_t n = weights.size();
    double total = 0;
    for (double w : weights) total += w;
    std::vector<double> scaled(n);
    std::vector<std::uint32_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
      scaled[i] = weights[i] * static_cast<double>(n) / total;
      (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
      const auto s = small.back();
      small.pop_back();
      const auto l = large.back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] -= 1.0 - scaled[s];
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    for (auto i : large) prob_[i] = 1.0, alias_[i] = i;
    for (auto i : small) prob_[i] = 1.0, alias_[i] = i;
  }

  std::uint32_t draw(Rng& rng) const {
    const auto i = static_cast<std::uint32_t>(uniform_index(rng, prob_.size()));
    return uniform01(rng) < prob_[i] ? i : alias_[i];
  }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

// d loss / d score for a target with label 1 (context) or 0 (negative).
double score_gradient(double score, double label) { return sigmoid(score) - label; }

}  // namespace

double sgns_loss(std::span<const double> center, std::span<const double> context,
                 std::span<const std::span<const double>> negatives) {
  double loss = neg_log_sigmoid(dot(context, center));
  for (auto neg : negatives) loss += neg_log_sigmoid(-dot(neg, center));
  return loss;
}

SgnsGradient sgns_gradient(std::span<const double> center, std::span<const double> context,
                           std::span<const std::span<const double>> negatives) {
  const std::size_t d = center.size();
  SgnsGradient g;
  g.loss = sgns_loss(center, context, negatives);
  g.center.assign(d, 0.0);
  const double gp = score_gradient(dot(context, center), 1.0);
  g.context.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    g.center[i] += gp * context[i];
    g.context[i] = gp * center[i];
  }
  for (auto neg : negatives) {
    const double gn = score_gradient(dot(neg, center), 0.0);
    auto& gv = g.negatives.emplace_back(d);
    for (std::size_t i = 0; i < d; ++i) {
      g.center[i] += gn * neg[i];
      gv[i] = gn * center[i];
    }
  }
  return g;
}

NodeVectors train_skipgram(std::span<const Walk> walks, std::size_t node_count, const SkipGramConfig& cfg) {
  cfg.validate();
  if (walks.empty()) throw std::invalid_argument("skip-gram needs a nonempty walk corpus");
  const std::size_t dim = cfg.dim;

  std::vector<double> freq(node_count, 0.0);
  std::size_t tokens = 0;
  for (const auto& w : walks) {
    for (auto node : w) {
      if (node >= node_count) throw std::invalid_argument("walk references node outside the graph");
      freq[node] += 1;
    }
    tokens += w.size();
  }

  NodeVectors out;
  out.dim = dim;
  out.present.assign(node_count, false);
  // Training runs in single precision; results are widened on return.
  std::vector<float> center(node_count * dim, 0.0f);
  Rng init = stream(cfg.seed, "skipgram-init");
  for (std::size_t v = 0; v < node_count; ++v) {
    if (freq[v] == 0) continue;
    out.present[v] = true;
    for (std::size_t i = 0; i < dim; ++i)
      center[v * dim + i] = static_cast<float>((uniform01(init) - 0.5) / static_cast<double>(dim));
  }
  std::vector<float> context(node_count * dim, 0.0f);

  std::vector<double> noise_weight(node_count);
  for (std::size_t v = 0; v < node_count; ++v) noise_weight[v] = std::pow(freq[v], 0.75);
  const AliasTable noise(noise_weight);

  const double total = static_cast<double>(cfg.epochs * tokens);
  std::size_t processed = 0;
  std::vector<float> grad_center(dim);
  std::vector<std::uint32_t> targets(cfg.negatives + 1);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng rng = stream(cfg.seed, "skipgram-epoch", epoch);
    double loss_sum = 0;
    std::size_t pair_count = 0;
    for (const auto& walk : walks) {
      for (std::size_t i = 0; i < walk.size(); ++i, ++processed) {
        const double lr = cfg.learning_rate * std::max(1e-4, 1.0 - static_cast<double>(processed) / total);
        const std::size_t reach = cfg.window - uniform_index(rng, cfg.window);
        const std::size_t lo = i >= reach ? i - reach : 0;
        const std::size_t hi = std::min(walk.size() - 1, i + reach);
        float* __restrict v = &center[walk[i] * dim];
        for (std::size_t j = lo; j <= hi; ++j) {
          if (j == i) continue;
          targets[0] = walk[j];
          std::size_t n_targets = 1;
          for (std::size_t k = 0; k < cfg.negatives; ++k) {
            const auto neg = noise.draw(rng);
            if (neg == walk[j]) continue;
            targets[n_targets++] = neg;
          }
          std::fill(grad_center.begin(), grad_center.end(), 0.0f);
          float* __restrict gc = grad_center.data();
          for (std::size_t t = 0; t < n_targets; ++t) {
            float* __restrict u = &context[targets[t] * dim];
            const double label = t == 0 ? 1.0 : 0.0;
            const double score = dot(u, v, dim);
            loss_sum += label > 0 ? neg_log_sigmoid(score) : neg_log_sigmoid(-score);
            const auto g = static_cast<float>(score_gradient(score, label));
            const auto step = static_cast<float>(lr) * g;
            for (std::size_t k = 0; k < dim; ++k) gc[k] += g * u[k];
            for (std::size_t k = 0; k < dim; ++k) u[k] -= step * v[k];
          }
          const auto rate = static_cast<float>(lr);
          for (std::size_t k = 0; k < dim; ++k) v[k] -= rate * gc[k];
          ++pair_count;
        }
      }
    }
    out.epoch_loss.push_back(pair_count ? loss_sum / static_cast<double>(pair_count) : 0.0);
  }
  out.data.assign(center.begin(), center.end());
  return out;
}

void save_vectors(const std::filesystem::path& path, const UserVectors& v) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << v.dim << ',' << v.rows.size() << '\n';
  for (const auto& [u, row] : v.rows) {
    out << raw(u);
    for (double x : row) out << ',' << csv::format(x);
    out << '\n';
  }
}

UserVectors load_vectors(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": missing header");
  UserVectors v;
  std::size_t count = 0;
  try {
    auto head = csv::split(line);
    if (head.size() != 2) throw DataError(path.string() + ":1: header must be 'dim,count'");
    v.dim = csv::parse_uint(head[0]);
    count = csv::parse_uint(head[1]);
    for (std::size_t line_no = 2; std::getline(in, line); ++line_no) {
      auto fields = csv::split(line);
      if (fields.size() != v.dim + 1)
        throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(v.dim + 1) + " fields");
      std::vector<double> row;
      row.reserve(v.dim);
      for (std::size_t i = 1; i < fields.size(); ++i) row.push_back(csv::parse_double(fields[i]));
      v.rows[UserId{csv::parse_uint(fields[0])}] = std::move(row);
    }
  } catch (const std::invalid_argument& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  if (v.rows.size() != count) throw DataError(path.string() + ": row count does not match header");
  return v;
}

std::optional<DistanceFeatures> pairwise_distance_features(const UserVectors& e, UserId u, UserId v) {
  auto a = e.rows.find(u);
  auto b = e.rows.find(v);
  if (a == e.rows.end() || b == e.rows.end()) return std::nullopt;
  return pairwise_distances(a->second, b->second);
}

std::optional<std::vector<double>> hadamard_features(const UserVectors& e, UserId u, UserId v) {
  auto a = e.rows.find(u);
  auto b = e.rows.find(v);
  if (a == e.rows.end() || b == e.rows.end()) return std::nullopt;
  std::vector<double> out(e.dim);
  for (std::size_t i = 0; i < e.dim; ++i) out[i] = a->second[i] * b->second[i];
  return out;
}

}  // namespace linkinfer
