#include "linkinfer/forest.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

#include "linkinfer/csv.hpp"
#include "linkinfer/parallel.hpp"
#include "linkinfer/random.hpp"
#include "linkinfer/types.hpp"

namespace linkinfer {

const TreeNode& DecisionTree::leaf_for(std::span<const double> x) const {
  const TreeNode* node = &nodes.front();
  while (!node->is_leaf()) node = &nodes[x[node->feature] <= node->threshold ? node->left : node->right];
  return *node;
}

double DecisionTree::positive_fraction(std::span<const double> x) const {
  const TreeNode& leaf = leaf_for(x);
  return leaf.positives / (leaf.positives + leaf.negatives);
}

namespace {

struct Split {
  std::int32_t feature = -1;
  double threshold = 0.0;
  double impurity = 0.0;  // weighted child Gini, times node size
};

// Weighted Gini of a child holding `pos` of `n` positives, times n.
double gini_mass(double pos, double n) {
  if (n <= 0) return 0;
  const double neg = n - pos;
  return n - (pos * pos + neg * neg) / n;
}

class TreeBuilder {
 public:
  TreeBuilder(const std::vector<std::vector<double>>& columns, std::span<const int> labels,
              std::size_t max_features, Rng rng)
      : columns_(columns), labels_(labels), max_features_(max_features), rng_(std::move(rng)) {
    features_.resize(columns_.size());
    std::iota(features_.begin(), features_.end(), 0);
  }

  DecisionTree build(std::vector<std::size_t> samples) {
    samples_ = std::move(samples);
    tree_.nodes.clear();
    tree_.nodes.emplace_back();
    struct Work {
      std::uint32_t node;
      std::size_t begin, end;
    };
    std::vector<Work> stack{{0, 0, samples_.size()}};
    while (!stack.empty()) {
      Work w = stack.back();
      stack.pop_back();
      double pos = 0;
      for (std::size_t i = w.begin; i < w.end; ++i) pos += labels_[samples_[i]];
      const double n = static_cast<double>(w.end - w.begin);
      tree_.nodes[w.node].positives = pos;
      tree_.nodes[w.node].negatives = n - pos;
      if (pos == 0 || pos == n || w.end - w.begin < 2) continue;

      Split best = find_split(w.begin, w.end);
      if (best.feature < 0) continue;
      auto mid = std::partition(samples_.begin() + static_cast<std::ptrdiff_t>(w.begin),
                                samples_.begin() + static_cast<std::ptrdiff_t>(w.end), [&](std::size_t s) {
                                  return columns_[best.feature][s] <= best.threshold;
                                });
      const auto split_at = static_cast<std::size_t>(mid - samples_.begin());
      const auto left = static_cast<std::uint32_t>(tree_.nodes.size());
      tree_.nodes.emplace_back();
      tree_.nodes.emplace_back();
      TreeNode& node = tree_.nodes[w.node];
      node.feature = best.feature;
      node.threshold = best.threshold;
      node.left = left;
      node.right = left + 1;
      stack.push_back({left + 1, split_at, w.end});
      stack.push_back({left, w.begin, split_at});
    }
    return std::move(tree_);
  }

 private:
  Split find_split(std::size_t begin, std::size_t end) {
    const std::size_t d = features_.size();
    // Partial Fisher-Yates: features_[0..k) is this node's random candidate set.
    for (std::size_t i = 0; i < d; ++i) std::swap(features_[i], features_[i + uniform_index(rng_, d - i)]);
    Split best;
    std::size_t examined = 0;
    while (best.feature < 0 && examined < d) {
      const std::size_t upto = examined == 0 ? std::min(max_features_, d) : d;
      std::vector<std::size_t> batch(features_.begin() + static_cast<std::ptrdiff_t>(examined),
                                     features_.begin() + static_cast<std::ptrdiff_t>(upto));
      std::sort(batch.begin(), batch.end());
      for (std::size_t f : batch) evaluate(f, begin, end, best);
      examined = upto;
    }
    return best;
  }

  void evaluate(std::size_t f, std::size_t begin, std::size_t end, Split& best) {
    column_.clear();
    const double* values = columns_[f].data();
    double total_pos = 0;
    double lo = values[samples_[begin]], hi = lo;
    for (std::size_t i = begin; i < end; ++i) {
      const std::size_t s = samples_[i];
      const double x = values[s];
      lo = std::min(lo, x);
      hi = std::max(hi, x);
      column_.emplace_back(x, labels_[s]);
      total_pos += labels_[s];
    }
    if (!(lo < hi)) return;
    std::sort(column_.begin(), column_.end());
    const double n = static_cast<double>(column_.size());
    double left_pos = 0;
    for (std::size_t i = 0; i + 1 < column_.size(); ++i) {
      left_pos += column_[i].second;
      const double a = column_[i].first;
      const double b = column_[i + 1].first;
      if (!(a < b)) continue;
      const double n_left = static_cast<double>(i + 1);
      const double impurity = gini_mass(left_pos, n_left) + gini_mass(total_pos - left_pos, n - n_left);
      if (best.feature < 0 || impurity < best.impurity) {
        double mid = a + (b - a) / 2;
        if (!(mid < b)) mid = a;
        best = {static_cast<std::int32_t>(f), mid, impurity};
      }
    }
  }

  const std::vector<std::vector<double>>& columns_;
  std::span<const int> labels_;
  std::size_t max_features_;
  Rng rng_;
  std::vector<std::size_t> features_;
  std::vector<std::size_t> samples_;
  std::vector<std::pair<double, int>> column_;
  DecisionTree tree_;
};

}  // namespace

Forest Forest::fit(std::span<const std::vector<double>> rows, std::span<const int> labels, const ForestConfig& cfg) {
  if (rows.size() != labels.size()) throw std::invalid_argument("forest rows and labels differ in length");
  if (rows.size() < 2) throw DataError("forest needs at least two samples");
  if (cfg.n_trees == 0) throw ConfigError("forest needs at least one tree");
  const std::size_t d = rows.front().size();
  if (d == 0) throw DataError("forest needs at least one feature");
  bool has_pos = false, has_neg = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d) throw std::invalid_argument("forest rows differ in length");
    if (labels[i] != 0 && labels[i] != 1) throw std::invalid_argument("forest labels must be 0 or 1");
    (labels[i] ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg) throw DataError("forest training data holds a single class");

  std::vector<std::size_t> canonical(rows.size());
  std::iota(canonical.begin(), canonical.end(), 0);
  std::sort(canonical.begin(), canonical.end(), [&](std::size_t a, std::size_t b) {
    if (rows[a] != rows[b]) return rows[a] < rows[b];
    return labels[a] < labels[b];
  });

  const std::size_t max_features =
      cfg.max_features ? std::min(cfg.max_features, d)
                       : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))));

  std::vector<std::vector<double>> columns(d, std::vector<double>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t f = 0; f < d; ++f) columns[f][i] = rows[i][f];

  Forest forest;
  forest.feature_count_ = d;
  forest.trees_.resize(cfg.n_trees);
  parallel_for(cfg.n_trees, [&](std::size_t t) {
    Rng rng(mix_seed(cfg.seed, tag_hash("tree"), t));
    std::vector<std::size_t> samples(rows.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
      samples[i] = canonical[cfg.bootstrap ? uniform_index(rng, rows.size()) : i];
    TreeBuilder builder(columns, labels, max_features, std::move(rng));
    forest.trees_[t] = builder.build(std::move(samples));
  });
  return forest;
}

double Forest::posterior(std::span<const double> x) const {
  if (x.size() != feature_count_)
    throw std::invalid_argument("posterior input has " + std::to_string(x.size()) + " features, forest expects " +
                                std::to_string(feature_count_));
  double sum = 0;
  for (const auto& tree : trees_) sum += tree.positive_fraction(x);
  return sum / static_cast<double>(trees_.size());
}

void Forest::save(std::ostream& out) const {
  out << "linkinfer-forest 1\n" << "features " << feature_count_ << "\n" << "trees " << trees_.size() << "\n";
  for (const auto& tree : trees_) {
    out << "tree " << tree.nodes.size() << "\n";
    for (const auto& n : tree.nodes)
      out << n.feature << ' ' << csv::format(n.threshold) << ' ' << n.left << ' ' << n.right << ' '
          << csv::format(n.negatives) << ' ' << csv::format(n.positives) << '\n';
  }
}

Forest Forest::load(std::istream& in) {
  auto expect = [&](const std::string& word) {
    std::string got;
    if (!(in >> got) || got != word) throw DataError("forest file: expected '" + word + "'");
  };
  auto number = [&] {
    std::string token;
    if (!(in >> token)) throw DataError("forest file: truncated");
    try {
      return csv::parse_double(token);
    } catch (const std::invalid_argument& e) {
      throw DataError(std::string("forest file: ") + e.what());
    }
  };
  expect("linkinfer-forest");
  if (number() != 1) throw DataError("forest file: unsupported version");
  Forest f;
  expect("features");
  f.feature_count_ = static_cast<std::size_t>(number());
  expect("trees");
  f.trees_.resize(static_cast<std::size_t>(number()));
  for (auto& tree : f.trees_) {
    expect("tree");
    tree.nodes.resize(static_cast<std::size_t>(number()));
    for (auto& n : tree.nodes) {
      n.feature = static_cast<std::int32_t>(number());
      n.threshold = number();
      n.left = static_cast<std::uint32_t>(number());
      n.right = static_cast<std::uint32_t>(number());
      n.negatives = number();
      n.positives = number();
      if (n.feature >= static_cast<std::int32_t>(f.feature_count_) ||
          (!n.is_leaf() && (n.left >= tree.nodes.size() || n.right >= tree.nodes.size())))
        throw DataError("forest file: node references out of range");
    }
    if (tree.nodes.empty()) throw DataError("forest file: empty tree");
  }
  return f;
}

}  // namespace linkinfer
