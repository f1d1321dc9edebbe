#include "linkinfer/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "linkinfer/csv.hpp"
#include "linkinfer/random.hpp"

namespace linkinfer {

void ExperimentConfig::validate() const {
  if (!(low_pct >= 0 && low_pct <= high_pct && high_pct <= 1)) throw ConfigError("need 0 <= low_pct <= high_pct <= 1");
  if (hashtag_min_users > hashtag_max_users) throw ConfigError("hashtag user bounds are inverted");
  if (token_min_users > token_max_users) throw ConfigError("token user bounds are inverted");
  if (!(image_threshold >= 0 && image_threshold <= 1)) throw ConfigError("image threshold must lie in [0, 1]");
  if (image_categories == 0 || image_categories > kSceneCategories) throw ConfigError("bad image category count");
  location_embedding.skipgram.validate();
  network_embedding.skipgram.validate();
  for (const auto* e : {&location_embedding, &network_embedding})
    if (e->walk.walk_length == 0 || e->walk.walks_per_node == 0) throw ConfigError("walk sizes must be positive");
  if (!(network_embedding.walk.p > 0) || !(network_embedding.walk.q > 0))
    throw ConfigError("node2vec p and q must be positive");
  if (!(train_edge_fraction > 0 && train_edge_fraction <= 1)) throw ConfigError("train_edge_fraction must lie in (0, 1]");
  if (forest.n_trees == 0) throw ConfigError("forest needs at least one tree");
  if (folds < 2) throw ConfigError("need at least two folds");
  if (!(inner_split > 0 && inner_split < 1)) throw ConfigError("inner_split must lie in (0, 1)");
  for (double f : removal_fractions)
    if (!(f >= 0 && f < 1)) throw ConfigError("removal fractions must lie in [0, 1)");
  if (removal_seeds == 0) throw ConfigError("need at least one removal seed");
}

Dataset preprocess(const Dataset& raw, const ExperimentConfig& cfg) {
  Dataset d = filter_accounts(raw, cfg.low_pct, cfg.high_pct);
  d = filter_hashtags(d, cfg.hashtag_min_users, cfg.hashtag_max_users);
  return filter_tokens(d, cfg.token_min_users, cfg.token_max_users);
}

std::vector<PairSample> sample_pairs(const Dataset& filtered, const ExperimentConfig& cfg) {
  return build_pairs(filtered, mix_seed(cfg.seed, tag_hash("pairs")), cfg.location_rules);
}

TableSet FeatureSet::view() const {
  TableSet v{};
  for (std::size_t i = 0; i < kModalityCount; ++i)
    if (tables[i]) v[i] = &*tables[i];
  return v;
}

FeatureSet compute_features(const Dataset& filtered, std::span<const PairSample> pairs, const ExperimentConfig& cfg,
                            ModalitySet which) {
  FeatureSet fs;
  auto slot = [&](Modality m) -> std::optional<FeatureTable>& { return fs.tables[index_of(m)]; };
  if (which.contains(Modality::Hashtag)) slot(Modality::Hashtag) = hashtag_table(filtered, pairs);
  if (which.contains(Modality::Text)) slot(Modality::Text) = text_table(filtered, pairs);
  if (which.contains(Modality::Image))
    slot(Modality::Image) = image_table(filtered, pairs, cfg.image_threshold, cfg.image_categories);
  if (which.contains(Modality::Location)) {
    fs.location = embed_locations(filtered, cfg.location_embedding, cfg.seed, cfg.location_rules);
    slot(Modality::Location) = location_table(*fs.location, pairs);
  }
  if (which.contains(Modality::Network)) {
    fs.network = embed_network(filtered, cfg.train_edge_fraction, cfg.network_embedding, cfg.seed);
    slot(Modality::Network) = network_table(*fs.network, pairs, cfg.seed);
  }
  return fs;
}

CvResult attack(const FeatureTable& t, std::span<const PairSample> pairs, const ExperimentConfig& cfg) {
  const auto data = gather(t, pairs);
  if (data.rows.empty()) throw DataError(std::string(modality_name(t.modality)) + ": no available pairs");
  return cross_validate(data.rows, data.labels, cfg.folds,
                        mix_seed(cfg.seed, tag_hash("attack"), index_of(t.modality)), cfg.forest);
}

std::vector<SubsetResult> fuse(const TableSet& tables, std::span<const PairSample> pairs,
                               std::span<const ModalitySet> subsets, const ExperimentConfig& cfg,
                               std::vector<ScoredPair>* scores) {
  return cross_validate_fusion(tables, pairs, subsets, cfg.folds, cfg.inner_split,
                               mix_seed(cfg.seed, tag_hash("fusion")), cfg.forest, scores);
}

std::vector<RobustnessRow> robustness_sweep(const Dataset& raw, std::span<const PairSample> pairs,
                                            const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<double> fractions{0.0};
  for (double f : cfg.removal_fractions)
    if (f != 0.0) fractions.push_back(f);

  const std::array<Modality, 3> content{Modality::Hashtag, Modality::Text, Modality::Image};
  ModalitySet hti;
  for (auto m : content) hti = hti.with(m);
  const std::array<ModalitySet, 1> subset{hti};

  std::vector<RobustnessRow> rows;
  for (double f : fractions) {
    std::array<std::vector<double>, 4> cells;  // H, T, I, HTI
    // Removing nothing gives the same dataset for every seed.
    const std::size_t runs = f == 0.0 ? 1 : cfg.removal_seeds;
    for (std::size_t r = 0; r < runs; ++r) {
      const Dataset reduced = drop_posts(raw, f, mix_seed(cfg.seed, tag_hash("removal"), r));
      const Dataset filtered = preprocess(reduced, cfg);
      const auto refreshed = refresh_availability(filtered, pairs, cfg.location_rules);
      const auto fs = compute_features(filtered, refreshed, cfg, hti);
      for (std::size_t k = 0; k < content.size(); ++k) {
        try {
          cells[k].push_back(attack(*fs.tables[index_of(content[k])], refreshed, cfg).mean);
        } catch (const DataError&) {
        }
      }
      try {
        cells[3].push_back(fuse(fs.view(), refreshed, subset, cfg).front().weighted.mean);
      } catch (const DataError&) {
      }
    }
    if (runs < cfg.removal_seeds)
      for (auto& c : cells)
        if (!c.empty()) c.resize(cfg.removal_seeds, c.front());
    const std::array<const char*, 4> names{"H", "T", "I", "HTI"};
    for (std::size_t k = 0; k < cells.size(); ++k) {
      RobustnessRow row;
      row.fraction = f;
      row.attack = names[k];
      row.per_seed = cells[k];
      if (!cells[k].empty()) {
        const auto s = summarize(cells[k]);
        row.mean = s.mean;
        row.stddev = s.stddev;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::string cell(const std::optional<double>& x) { return x ? csv::format(*x) : "NA"; }

}  // namespace

void write_attack_csv(const std::filesystem::path& path, Modality m, const CvResult& r) {
  auto out = open_out(path);
  const char letter = modality_letter(m);
  out << "experiment,modality,fold,auc\n";
  for (std::size_t f = 0; f < r.fold_auc.size(); ++f)
    out << "attack," << letter << ',' << f << ',' << csv::format(r.fold_auc[f]) << '\n';
  out << "attack," << letter << ",mean," << csv::format(r.mean) << '\n';
  out << "attack," << letter << ",std," << csv::format(r.stddev) << '\n';
}

void write_fusion_csv(const std::filesystem::path& path, std::span<const SubsetResult> results) {
  auto out = open_out(path);
  out << "subset,size,multimodal_mean,multimodal_std,baseline_mean,baseline_std,unscorable\n";
  for (const auto& r : results)
    out << r.subset.letters() << ',' << r.subset.size() << ',' << csv::format(r.weighted.mean) << ','
        << csv::format(r.weighted.stddev) << ',' << csv::format(r.baseline.mean) << ','
        << csv::format(r.baseline.stddev) << ',' << r.unscorable << '\n';
}

void write_scores_csv(const std::filesystem::path& path, std::span<const PairSample> pairs,
                      std::span<const ScoredPair> scores) {
  auto out = open_out(path);
  out << "u,v,label,fold";
  for (auto m : kAllModalities) out << ",x_" << modality_letter(m);
  out << ",s_M,s_BL\n";
  for (const auto& s : scores) {
    const auto& p = pairs[s.pair_index];
    out << raw(p.pair.first) << ',' << raw(p.pair.second) << ',' << p.label << ',' << s.fold;
    for (const auto& x : s.posterior) out << ',' << cell(x);
    out << ',' << cell(s.weighted) << ',' << cell(s.baseline) << '\n';
  }
}

void write_robustness_csv(const std::filesystem::path& path, std::span<const RobustnessRow> rows) {
  auto out = open_out(path);
  out << "fraction,attack,mean,std\n";
  for (const auto& r : rows)
    out << csv::format(r.fraction) << ',' << r.attack << ',' << cell(r.mean) << ',' << cell(r.stddev) << '\n';
}

}  // namespace linkinfer
