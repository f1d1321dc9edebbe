// linkinfer: synth -> ingest -> features -> attack -> fuse -> robustness.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include "linkinfer/config.hpp"
#include "linkinfer/csv.hpp"
#include "linkinfer/pipeline.hpp"
#include "linkinfer/synth.hpp"

namespace fs = std::filesystem;
using namespace linkinfer;

namespace {

constexpr int kConfigExit = 2;
constexpr int kDataExit = 3;

struct Snapshot {
  fs::path dir;
  fs::path posts() const { return dir / "posts.jsonl"; }
  fs::path edges() const { return dir / "edges.csv"; }
  fs::path config() const { return dir / "config.ini"; }
  fs::path pairs() const { return dir / "pairs.csv"; }
  fs::path table(Modality m) const { return dir / "features" / (std::string(1, modality_letter(m)) + ".csv"); }
  fs::path results() const { return dir / "results"; }
};

void require(const fs::path& p, const std::string& hint) {
  if (!fs::exists(p)) throw DataError("missing " + p.string() + " (" + hint + ")");
}

Config snapshot_config(const Snapshot& s, std::optional<std::uint64_t> seed) {
  require(s.config(), "run `linkinfer ingest` first");
  Config cfg = load_config(s.config());
  if (seed) cfg.experiment.seed = cfg.synth.seed = *seed;
  return cfg;
}

Dataset snapshot_dataset(const Snapshot& s) {
  require(s.posts(), "run `linkinfer ingest` first");
  require(s.edges(), "run `linkinfer ingest` first");
  return load_dataset(s.posts(), s.edges());
}

std::vector<PairSample> snapshot_pairs(const Snapshot& s) {
  require(s.pairs(), "run `linkinfer ingest` first");
  return load_pairs(s.pairs());
}

FeatureTable snapshot_table(const Snapshot& s, Modality m, std::span<const PairSample> pairs) {
  require(s.table(m), std::string("run `linkinfer features --modality ") + modality_letter(m) + "` first");
  return load_table(s.table(m), m, pairs);
}

std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

void run_synth(const std::string& config_path, const fs::path& out, std::optional<std::uint64_t> seed) {
  Config cfg = config_path.empty() ? Config{} : load_config(config_path);
  if (seed) cfg.experiment.seed = cfg.synth.seed = *seed;
  cfg.synth.seed = cfg.experiment.seed;
  const auto result = generate(cfg.synth);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  write_synth(out, result);
  save_config(out / "config.ini", cfg);
  std::cout << "users " << result.dataset.users().size() << ", posts " << result.dataset.posts().size()
            << ", edges " << result.dataset.edges().size() << ", planted pairs " << result.planted.size() << '\n';
}

void run_ingest(const fs::path& posts, const fs::path& edges, const fs::path& out, const std::string& config_path,
                std::optional<std::uint64_t> seed) {
  Config cfg = config_path.empty() ? Config{} : load_config(config_path);
  if (seed) cfg.experiment.seed = cfg.synth.seed = *seed;
  const Dataset raw = load_dataset(posts, edges);
  const Dataset filtered = preprocess(raw, cfg.experiment);
  const auto pairs = sample_pairs(filtered, cfg.experiment);

  Snapshot s{out};
  fs::create_directories(out);
  write_posts(s.posts(), raw);
  write_edges(s.edges(), raw);
  save_config(s.config(), cfg);
  save_pairs(s.pairs(), pairs);

  const auto& idx = filtered.indexes();
  std::set<std::int64_t> locations;
  for (const auto& [u, locs] : idx.user_locations)
    for (const auto& [l, n] : locs) locations.insert(l);
  std::set<std::string> vocab;
  for (const auto& [u, toks] : idx.user_tokens)
    for (const auto& [t, n] : toks) vocab.insert(t);
  const auto eligible = filter_location_users(filtered, cfg.experiment.location_rules.min_distinct,
                                              cfg.experiment.location_rules.min_checkins);

  std::ofstream counts(out / "counts.csv");
  counts << "quantity,value\n";
  auto report = [&](const std::string& name, std::size_t v) {
    counts << name << ',' << v << '\n';
    std::cout << name << ": " << v << '\n';
  };
  report("users_loaded", raw.users().size());
  report("users", filtered.users().size());
  report("posts", filtered.posts().size());
  report("edges", filtered.edges().size());
  report("hashtags", idx.hashtag_users.size());
  report("vocabulary", vocab.size());
  report("locations", locations.size());
  report("location_users", eligible.size());
  std::size_t friends = 0;
  for (const auto& p : pairs) friends += p.label;
  report("friend_pairs", friends);
  report("stranger_pairs", pairs.size() - friends);
  for (auto m : kAllModalities) {
    std::size_t f = 0, n = 0;
    for (const auto& p : pairs)
      if (p.has(m)) (p.label ? f : n) += 1;
    report(std::string(modality_name(m)) + "_friend_pairs", f);
    report(std::string(modality_name(m)) + "_stranger_pairs", n);
  }
}

void run_features(const Snapshot& s, const std::string& which, std::optional<std::uint64_t> seed) {
  const Config cfg = snapshot_config(s, seed);
  const auto pairs = snapshot_pairs(s);
  const ModalitySet set = ModalitySet::parse(which);
  const Dataset filtered = preprocess(snapshot_dataset(s), cfg.experiment);
  const auto features = compute_features(filtered, pairs, cfg.experiment, set);
  fs::create_directories(s.dir / "features");
  for (auto m : kAllModalities) {
    const auto& t = features.tables[index_of(m)];
    if (!t) continue;
    save_table(s.table(m), *t, pairs);
    std::cout << modality_letter(m) << ": " << t->available_count() << " pairs, " << t->columns.size()
              << " features\n";
  }
  if (features.location || features.network) fs::create_directories(s.dir / "embeddings");
  if (features.location) save_vectors(s.dir / "embeddings" / "location.csv", features.location->vectors);
  if (features.network) {
    save_vectors(s.dir / "embeddings" / "network.csv", features.network->vectors);
    save_split(s.dir / "network_split.csv", features.network->split);
  }
}

void run_attack(const Snapshot& s, const std::string& which, std::optional<std::uint64_t> seed) {
  const Config cfg = snapshot_config(s, seed);
  const auto pairs = snapshot_pairs(s);
  const ModalitySet set = ModalitySet::parse(which);
  for (auto m : kAllModalities) {
    if (!set.contains(m)) continue;
    const auto table = snapshot_table(s, m, pairs);
    const auto r = attack(table, pairs, cfg.experiment);
    write_attack_csv(s.results() / (std::string("attack_") + modality_letter(m) + ".csv"), m, r);
    std::cout << modality_letter(m) << " AUC " << fixed(r.mean) << " +/- " << fixed(r.stddev) << '\n';
  }
}

void run_fuse(const Snapshot& s, const std::string& which, std::optional<std::uint64_t> seed) {
  const Config cfg = snapshot_config(s, seed);
  const auto pairs = snapshot_pairs(s);
  std::vector<ModalitySet> subsets;
  if (which == "enumerate") subsets = enumerate_subsets();
  else subsets.push_back(ModalitySet::parse(which));

  ModalitySet needed;
  for (auto sub : subsets)
    for (auto m : kAllModalities)
      if (sub.contains(m)) needed = needed.with(m);
  std::array<std::optional<FeatureTable>, kModalityCount> tables;
  TableSet view{};
  for (auto m : kAllModalities) {
    if (!needed.contains(m)) continue;
    tables[index_of(m)] = snapshot_table(s, m, pairs);
    view[index_of(m)] = &*tables[index_of(m)];
  }
  std::vector<ScoredPair> scores;
  const auto results = fuse(view, pairs, subsets, cfg.experiment, &scores);
  const std::string stem = which == "enumerate" ? "fusion" : "fusion_" + needed.letters();
  write_fusion_csv(s.results() / (stem + ".csv"), results);
  write_scores_csv(s.results() / (stem + "_scores.csv"), pairs, scores);
  for (const auto& r : results)
    std::cout << r.subset.letters() << " multimodal " << fixed(r.weighted.mean) << " +/- " << fixed(r.weighted.stddev)
              << "  baseline " << fixed(r.baseline.mean) << " +/- " << fixed(r.baseline.stddev) << '\n';
}

void run_robustness(const Snapshot& s, const std::string& steps, std::optional<std::uint64_t> seed) {
  Config cfg = snapshot_config(s, seed);
  if (!steps.empty()) {
    cfg.experiment.removal_fractions.clear();
    try {
      for (auto part : csv::split(steps)) cfg.experiment.removal_fractions.push_back(csv::parse_double(part) / 100.0);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("--steps: ") + e.what());
    }
  }
  cfg.experiment.validate();
  const auto rows = robustness_sweep(snapshot_dataset(s), snapshot_pairs(s), cfg.experiment);
  write_robustness_csv(s.results() / "robustness.csv", rows);
  for (const auto& r : rows)
    std::cout << fixed(r.fraction) << ' ' << r.attack << ' ' << (r.mean ? fixed(*r.mean) : "NA") << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Social link inference from multimodal post data"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::string config_path, out_dir, posts, edges, snapshot, modality = "all", subset = "all", steps;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic network");
  synth->add_option("--config", config_path, "INI configuration")->check(CLI::ExistingFile);
  synth->add_option("--out", out_dir, "Output directory")->required();
  synth->add_option("--seed", seed, "Random seed");

  auto* ingest = app.add_subcommand("ingest", "Load, filter and sample pairs into a snapshot");
  ingest->add_option("--posts", posts, "Posts (JSON lines)")->required();
  ingest->add_option("--edges", edges, "Edges (CSV)")->required();
  ingest->add_option("--out", out_dir, "Snapshot directory")->required();
  ingest->add_option("--config", config_path, "INI configuration")->check(CLI::ExistingFile);
  ingest->add_option("--seed", seed, "Random seed");

  auto* features = app.add_subcommand("features", "Compute feature tables");
  features->add_option("--snapshot", snapshot, "Snapshot directory")->required();
  features->add_option("--modality", modality, "H, T, I, L, E or all");
  features->add_option("--seed", seed, "Random seed");

  auto* attack_cmd = app.add_subcommand("attack", "Cross-validated monomodal attack");
  attack_cmd->add_option("--snapshot", snapshot, "Snapshot directory")->required();
  attack_cmd->add_option("--modality", modality, "H, T, I, L, E or all");
  attack_cmd->add_option("--seed", seed, "Random seed");

  auto* fuse_cmd = app.add_subcommand("fuse", "Multimodal, subset and baseline fusion");
  fuse_cmd->add_option("--snapshot", snapshot, "Snapshot directory")->required();
  fuse_cmd->add_option("--subset", subset, "Modality letters, all or enumerate");
  fuse_cmd->add_option("--seed", seed, "Random seed");

  auto* robust = app.add_subcommand("robustness", "Post-removal sweep");
  robust->add_option("--snapshot", snapshot, "Snapshot directory")->required();
  robust->add_option("--steps", steps, "Removal percentages, e.g. 10,20,30,40,50");
  robust->add_option("--seed", seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigExit;
  }

  try {
    const Snapshot s{snapshot};
    if (*synth) run_synth(config_path, out_dir, seed);
    else if (*ingest) run_ingest(posts, edges, out_dir, config_path, seed);
    else if (*features) run_features(s, modality, seed);
    else if (*attack_cmd) run_attack(s, modality, seed);
    else if (*fuse_cmd) run_fuse(s, subset, seed);
    else if (*robust) run_robustness(s, steps, seed);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kDataExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
