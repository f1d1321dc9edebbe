#include <doctest.h>

#include "fixtures.hpp"
#include "linkinfer/synth.hpp"

using namespace linkinfer;
using fixture::U;

namespace {

SynthConfig small() {
  SynthConfig cfg;
  cfg.n_users = 40;
  cfg.n_communities = 4;
  cfg.posts_per_user = 10;
  cfg.vocab_size = 300;
  cfg.n_hashtags = 200;
  cfg.n_locations = 50;
  return cfg;
}

std::size_t common_hashtags(const Dataset& d, UserPair p) {
  const auto& idx = d.indexes().user_hashtags;
  auto a = idx.find(p.first), b = idx.find(p.second);
  if (a == idx.end() || b == idx.end()) return 0;
  std::size_t n = 0;
  for (const auto& [h, c] : a->second) n += b->second.contains(h);
  return n;
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  return v[static_cast<std::size_t>(q * static_cast<double>(v.size() - 1))];
}

}  // namespace

TEST_CASE("dense blocks give two cliques") {
  SynthConfig cfg = small();
  cfg.n_users = 12;
  cfg.n_communities = 2;
  cfg.p_in = 1.0;
  cfg.p_out = 0.0;
  auto r = generate(cfg);
  std::set<UserPair> expect;
  for (std::uint64_t a = 0; a < 12; ++a)
    for (std::uint64_t b = a + 1; b < 12; ++b)
      if (r.community[a] == r.community[b]) expect.insert(UserPair::of(U(a), U(b)));
  CHECK(std::set<UserPair>(r.ground_truth.begin(), r.ground_truth.end()) == expect);
  CHECK(expect.size() == 30);
}

TEST_CASE("no pair signal without a pair rate") {
  SynthConfig cfg = small();
  cfg.pair_signal_rate = 0.0;
  auto r = generate(cfg);
  CHECK(r.planted.empty());
  for (const auto& p : r.dataset.posts())
    for (const auto& h : p.hashtags) CHECK(h.rfind("pair", 0) != 0);
}

TEST_CASE("planted hashtags and locations reach both users") {
  auto r = generate(small());
  REQUIRE_FALSE(r.planted.empty());
  const auto& idx = r.dataset.indexes();
  for (const auto& s : r.planted) {
    CHECK(r.dataset.adjacent(s.pair));
    CHECK((s.hashtags.size() >= 1 && s.hashtags.size() <= 3));
    for (const auto& h : s.hashtags) {
      CHECK(idx.user_hashtags.at(s.pair.first).contains(h));
      CHECK(idx.user_hashtags.at(s.pair.second).contains(h));
      CHECK(idx.hashtag_users.at(h).size() == 2);
    }
    CHECK(idx.user_locations.at(s.pair.first).contains(s.location));
    CHECK(idx.user_locations.at(s.pair.second).contains(s.location));
  }
}

TEST_CASE("generation is deterministic and ingestible") {
  auto a = generate(small());
  auto b = generate(small());
  CHECK(a.dataset.posts() == b.dataset.posts());
  CHECK(a.ground_truth == b.ground_truth);
  SynthConfig other = small();
  other.seed = 43;
  CHECK(generate(other).dataset.posts() != a.dataset.posts());

  fixture::TempDir dir("synth");
  write_synth(dir.path, a);
  for (const char* f : {"posts.jsonl", "edges.csv", "ground_truth.csv", "communities.csv", "planted.csv"})
    CHECK(std::filesystem::exists(dir.path / f));
  auto back = load_dataset(dir.path / "posts.jsonl", dir.path / "edges.csv");
  CHECK(back.posts() == a.dataset.posts());
  CHECK(back.edges() == a.dataset.edges());
  for (const auto& p : a.dataset.posts()) {
    double total = 0;
    for (const auto& ip : p.image_probs) total += ip.probability;
    CHECK(total <= 1.0 + 1e-9);
  }
}

TEST_CASE("infeasible and invalid configurations") {
  SynthConfig cfg = small();
  cfg.p_in = 0.001;
  cfg.p_out = 0.0;
  auto r = generate(cfg);
  CHECK_FALSE(r.warnings.empty());
  cfg = small();
  cfg.p_in = 1.5;
  CHECK_THROWS_AS(generate(cfg), ConfigError);
  cfg = small();
  cfg.n_users = 0;
  CHECK_THROWS_AS(generate(cfg), ConfigError);
  cfg = small();
  cfg.n_categories = 400;
  CHECK_THROWS_AS(generate(cfg), ConfigError);
}

TEST_CASE("friends share more hashtags than strangers on defaults") {
  auto r = generate(SynthConfig{});
  const Dataset& d = r.dataset;
  std::vector<double> friends, strangers;
  for (const auto& e : d.edges()) friends.push_back(static_cast<double>(common_hashtags(d, e)));
  Rng rng = stream(1, "strangers");
  const auto& users = d.users();
  while (strangers.size() < friends.size()) {
    UserId a = users[uniform_index(rng, users.size())], b = users[uniform_index(rng, users.size())];
    if (a == b || d.adjacent(UserPair::of(a, b))) continue;
    strangers.push_back(static_cast<double>(common_hashtags(d, UserPair::of(a, b))));
  }
  const double mf = std::accumulate(friends.begin(), friends.end(), 0.0) / static_cast<double>(friends.size());
  const double ms = std::accumulate(strangers.begin(), strangers.end(), 0.0) / static_cast<double>(strangers.size());
  CHECK(mf > ms);
  for (double q : {0.5, 0.6, 0.7, 0.8, 0.9}) CHECK(quantile(friends, q) >= quantile(strangers, q));
}
