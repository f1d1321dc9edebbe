#include "linkinfer/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "linkinfer/random.hpp"

namespace linkinfer {

ModalitySet ModalitySet::parse(std::string_view letters) {
  if (letters == "all") return all();
  if (letters.empty()) throw ConfigError("empty modality subset");
  ModalitySet s;
  for (char c : letters) {
    try {
      s = s.with(modality_from_letter(c));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  return s;
}

std::string ModalitySet::letters() const {
  std::string out;
  for (auto m : kAllModalities)
    if (contains(m)) out.push_back(modality_letter(m));
  return out;
}

std::vector<ModalitySet> enumerate_subsets() {
  std::vector<ModalitySet> subsets;
  for (std::uint8_t bits = 1; bits < 32; ++bits) {
    ModalitySet s;
    for (auto m : kAllModalities)
      if (bits & (1u << index_of(m))) s = s.with(m);
    subsets.push_back(s);
  }
  auto rank = [](Modality m) { return index_of(m); };
  std::sort(subsets.begin(), subsets.end(), [&](ModalitySet a, ModalitySet b) {
    if (a.size() != b.size()) return a.size() < b.size();
    std::vector<std::size_t> ra, rb;
    for (auto m : kAllModalities) {
      if (a.contains(m)) ra.push_back(rank(m));
      if (b.contains(m)) rb.push_back(rank(m));
    }
    return ra < rb;
  });
  return subsets;
}

std::array<double, kModalityCount> fusion_weights(const Posteriors& x, const Confidences& a, ModalitySet subset) {
  std::array<double, kModalityCount> w{};
  double total = 0;
  std::size_t usable = 0;
  for (auto m : kAllModalities) {
    const auto i = index_of(m);
    if (!subset.contains(m) || !x[i] || !a[i]) continue;
    total += *a[i];
    ++usable;
  }
  if (usable == 0) return w;
  for (auto m : kAllModalities) {
    const auto i = index_of(m);
    if (!subset.contains(m) || !x[i] || !a[i]) continue;
    w[i] = total > 0 ? *a[i] / total : 1.0 / static_cast<double>(usable);
  }
  return w;
}

std::optional<double> weighted_score(const Posteriors& x, const Confidences& a, ModalitySet subset) {
  const auto w = fusion_weights(x, a, subset);
  double s = 0;
  bool any = false;
  for (std::size_t i = 0; i < kModalityCount; ++i) {
    if (!subset.contains(kAllModalities[i]) || !x[i] || !a[i]) continue;
    s += *x[i] * w[i];
    any = true;
  }
  if (!any) return std::nullopt;
  return s;
}

std::optional<double> mean_score(const Posteriors& x, ModalitySet subset) {
  double s = 0;
  std::size_t n = 0;
  for (auto m : kAllModalities) {
    const auto i = index_of(m);
    if (!subset.contains(m) || !x[i]) continue;
    s += *x[i];
    ++n;
  }
  if (n == 0) return std::nullopt;
  return s / static_cast<double>(n);
}

Posteriors FusionModel::posteriors(const TableSet& tables, std::size_t pair_index) const {
  Posteriors x;
  for (auto m : kAllModalities) {
    const auto i = index_of(m);
    if (!forests[i] || !confidence[i] || !tables[i] || !tables[i]->available(pair_index)) continue;
    x[i] = forests[i]->posterior(*tables[i]->rows[pair_index]);
  }
  return x;
}

FusionModel fit_fusion(const TableSet& tables, std::span<const PairSample> pairs, std::span<const std::size_t> train,
                       double inner_split, std::uint64_t seed, const ForestConfig& forest, ModalitySet modalities) {
  if (!(inner_split > 0.0) || !(inner_split < 1.0)) throw ConfigError("inner split must lie in (0, 1)");
  FusionModel model;
  model.inner_split = inner_split;
  model.seed = seed;

  std::vector<std::size_t> fit_part, confidence_part;
  Rng rng = stream(seed, "inner-split");
  for (int cls : {1, 0}) {
    std::vector<std::size_t> members;
    for (auto i : train)
      if (pairs[i].label == cls) members.push_back(i);
    shuffle(std::span(members), rng);
    const auto cut = static_cast<std::size_t>(std::llround(inner_split * static_cast<double>(members.size())));
    fit_part.insert(fit_part.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(cut));
    confidence_part.insert(confidence_part.end(), members.begin() + static_cast<std::ptrdiff_t>(cut), members.end());
  }
  std::sort(fit_part.begin(), fit_part.end());
  std::sort(confidence_part.begin(), confidence_part.end());

  for (auto m : kAllModalities) {
    const auto i = index_of(m);
    const FeatureTable* t = tables[i];
    if (!modalities.contains(m) || !t) continue;
    const std::string name(modality_name(m));
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (auto p : fit_part) {
      if (!t->available(p)) continue;
      rows.push_back(*t->rows[p]);
      labels.push_back(pairs[p].label);
    }
    const auto positives = std::count(labels.begin(), labels.end(), 1);
    if (rows.size() < 2 || positives == 0 || positives == static_cast<std::ptrdiff_t>(labels.size())) {
      model.warnings.push_back(name + ": too few training pairs of both classes; modality dropped");
      continue;
    }
    ForestConfig cfg = forest;
    cfg.seed = mix_seed(seed, tag_hash("fusion-forest"), i);
    Forest f = Forest::fit(rows, labels, cfg);

    std::vector<double> scores;
    std::vector<int> truth;
    for (auto p : confidence_part) {
      if (!t->available(p)) continue;
      scores.push_back(f.posterior(*t->rows[p]));
      truth.push_back(pairs[p].label);
    }
    const auto conf_pos = std::count(truth.begin(), truth.end(), 1);
    if (conf_pos == 0 || conf_pos == static_cast<std::ptrdiff_t>(truth.size())) {
      model.warnings.push_back(name + ": confidence slice lacks a class; modality dropped");
      continue;
    }
    model.confidence[i] = auc(truth, scores);
    model.forests[i] = std::move(f);
  }
  if (std::none_of(model.confidence.begin(), model.confidence.end(), [](const auto& c) { return c.has_value(); }))
    throw DataError("fusion: no modality could be trained");
  return model;
}

std::optional<double> score_multimodal(const FusionModel& m, const TableSet& tables, std::size_t pair_index,
                                       ModalitySet subset) {
  return weighted_score(m.posteriors(tables, pair_index), m.confidence, subset);
}

std::optional<double> score_baseline(const FusionModel& m, const TableSet& tables, std::size_t pair_index) {
  return mean_score(m.posteriors(tables, pair_index), ModalitySet::all());
}

std::vector<SubsetResult> cross_validate_fusion(const TableSet& tables, std::span<const PairSample> pairs,
                                                std::span<const ModalitySet> subsets, std::size_t folds,
                                                double inner_split, std::uint64_t seed, const ForestConfig& forest,
                                                std::vector<ScoredPair>* scores) {
  ModalitySet needed;
  for (auto s : subsets)
    for (auto m : kAllModalities)
      if (s.contains(m)) needed = needed.with(m);

  const auto labels = labels_of(pairs);
  const auto fold_of = stratified_folds(labels, folds, seed);
  std::vector<std::vector<double>> weighted_auc(subsets.size()), baseline_auc(subsets.size());
  std::vector<std::size_t> unscorable(subsets.size(), 0);

  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::size_t> train, target;
    for (std::size_t i = 0; i < pairs.size(); ++i) (fold_of[i] == f ? target : train).push_back(i);
    const auto model = fit_fusion(tables, pairs, train, inner_split, mix_seed(seed, tag_hash("fusion-fold"), f),
                                  forest, needed);
    std::vector<Posteriors> post;
    post.reserve(target.size());
    for (auto i : target) post.push_back(model.posteriors(tables, i));
    if (scores) {
      for (std::size_t k = 0; k < target.size(); ++k)
        scores->push_back({target[k], f, post[k], weighted_score(post[k], model.confidence, needed),
                           mean_score(post[k], needed)});
    }

    for (std::size_t s = 0; s < subsets.size(); ++s) {
      std::vector<double> ws, bs;
      std::vector<int> y;
      for (std::size_t k = 0; k < target.size(); ++k) {
        auto w = weighted_score(post[k], model.confidence, subsets[s]);
        auto b = mean_score(post[k], subsets[s]);
        if (!w || !b) {
          ++unscorable[s];
          continue;
        }
        ws.push_back(*w);
        bs.push_back(*b);
        y.push_back(labels[target[k]]);
      }
      const auto pos = std::count(y.begin(), y.end(), 1);
      if (pos == 0 || pos == static_cast<std::ptrdiff_t>(y.size()))
        throw DataError("fusion fold " + std::to_string(f) + ": subset " + subsets[s].letters() +
                        " scores a single class");
      weighted_auc[s].push_back(auc(y, ws));
      baseline_auc[s].push_back(auc(y, bs));
    }
  }
  if (scores)
    std::sort(scores->begin(), scores->end(),
              [](const ScoredPair& a, const ScoredPair& b) { return a.pair_index < b.pair_index; });
  std::vector<SubsetResult> out;
  for (std::size_t s = 0; s < subsets.size(); ++s)
    out.push_back({subsets[s], summarize(weighted_auc[s]), summarize(baseline_auc[s]), unscorable[s]});
  return out;
}

}  // namespace linkinfer
