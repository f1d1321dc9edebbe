#pragma once

// Bagged ensemble of fully grown Gini decision trees. The posterior of the
// friend class is the mean over trees of the positive fraction in the leaf
// a sample lands in.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace linkinfer {

struct ForestConfig {
  std::size_t n_trees = 100;
  std::size_t max_features = 0;  // 0 selects ceil(sqrt(feature_count))
  bool bootstrap = true;         // false trains every tree on the full sample (test mode)
  std::uint64_t seed = 0;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // x[feature] <= threshold goes left
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  double negatives = 0.0;  // training samples reaching the node, with bootstrap multiplicity
  double positives = 0.0;

  bool is_leaf() const noexcept { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  const TreeNode& leaf_for(std::span<const double> x) const;
  double positive_fraction(std::span<const double> x) const;
  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;
};

class Forest {
 public:
  /// Rows must share one length. Needs at least two samples of both classes
  /// combined and both labels present; throws DataError otherwise. Samples
  /// are canonically sorted before bootstrapping, so input order does not
  /// affect the model.
  static Forest fit(std::span<const std::vector<double>> rows, std::span<const int> labels,
                    const ForestConfig& cfg = {});

  /// Throws std::invalid_argument on a dimension mismatch.
  double posterior(std::span<const double> x) const;

  std::size_t feature_count() const noexcept { return feature_count_; }
  const std::vector<DecisionTree>& trees() const noexcept { return trees_; }

  void save(std::ostream& out) const;
  static Forest load(std::istream& in);

  friend bool operator==(const Forest&, const Forest&) = default;

 private:
  std::size_t feature_count_ = 0;
  std::vector<DecisionTree> trees_;
};

}  // namespace linkinfer
