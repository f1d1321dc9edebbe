#include <doctest.h>

#include "fixtures.hpp"
#include "linkinfer/fusion.hpp"

using namespace linkinfer;
using fixture::U;

namespace {

constexpr auto H = Modality::Hashtag;
constexpr auto T = Modality::Text;
constexpr auto I = Modality::Image;

std::vector<PairSample> make_pairs(std::size_t n) {
  std::vector<PairSample> pairs;
  for (std::size_t i = 0; i < n; ++i) pairs.push_back({UserPair::of(U(2 * i), U(2 * i + 1)), static_cast<int>(i % 2), {}});
  return pairs;
}

// One column: the label plus noise of the given size; rows missing at `gap` rate.
FeatureTable noisy_table(Modality m, std::span<const PairSample> pairs, double noise, double gap, std::uint64_t seed) {
  Rng rng = stream(seed, "table");
  FeatureTable t;
  t.modality = m;
  t.columns = {"x"};
  for (const auto& p : pairs) {
    if (uniform01(rng) < gap) t.rows.emplace_back();
    else t.rows.push_back(std::vector<double>{p.label + noise * (uniform01(rng) - 0.5)});
  }
  return t;
}

}  // namespace

TEST_CASE("subset parsing and letters") {
  CHECK(ModalitySet::parse("all") == ModalitySet::all());
  CHECK(ModalitySet::parse("ELH").letters() == "HLE");
  CHECK(ModalitySet::parse("t").letters() == "T");
  CHECK_THROWS_AS(ModalitySet::parse("HX"), ConfigError);
  CHECK_THROWS_AS(ModalitySet::parse(""), ConfigError);
}

TEST_CASE("subset enumeration") {
  auto subsets = enumerate_subsets();
  REQUIRE(subsets.size() == 31);
  std::size_t mid = 0, single = 0, full = 0;
  for (auto s : subsets) {
    if (s.size() == 1) ++single;
    if (s.size() >= 2 && s.size() <= 4) ++mid;
    if (s.size() == 5) ++full;
  }
  CHECK(single == 5);
  CHECK(mid == 25);
  CHECK(full == 1);
  CHECK(subsets.front().letters() == "H");
  CHECK(subsets[5].letters() == "HT");
  CHECK(subsets.back() == ModalitySet::all());
  std::set<std::string> unique;
  for (auto s : subsets) unique.insert(s.letters());
  CHECK(unique.size() == 31);
}

TEST_CASE("weighted score by hand") {
  Posteriors x{0.8, 0.4};
  Confidences a{0.9, 0.6};
  auto hs = ModalitySet::of(H).with(T);
  CHECK(*weighted_score(x, a, hs) == doctest::Approx(0.64).epsilon(1e-12));
  CHECK(*mean_score(x, hs) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(*weighted_score(x, a, ModalitySet::of(T)) == 0.4);
  CHECK(*mean_score(x, ModalitySet::of(H)) == 0.8);
  CHECK_FALSE(weighted_score(x, a, ModalitySet::of(I)));
  CHECK_FALSE(mean_score(x, ModalitySet::of(I)));
}

TEST_CASE("equal confidences reduce to the mean") {
  Rng rng = stream(2, "fusion-eq");
  for (int rep = 0; rep < 200; ++rep) {
    Posteriors x;
    Confidences a;
    const double conf = uniform01(rng);
    for (std::size_t i = 0; i < kModalityCount; ++i) {
      if (uniform01(rng) < 0.7) x[i] = uniform01(rng);
      a[i] = conf;
    }
    auto s = ModalitySet::all();
    auto w = weighted_score(x, a, s);
    auto b = mean_score(x, s);
    REQUIRE(w.has_value() == b.has_value());
    if (w) CHECK(std::abs(*w - *b) < 1e-12);
  }
}

TEST_CASE("weights renormalize over available modalities") {
  Posteriors x{0.2, std::nullopt, 0.9};
  Confidences a{0.5, 0.9, 0.75};
  auto w = fusion_weights(x, a, ModalitySet::all());
  CHECK(w[0] == doctest::Approx(0.4));
  CHECK(w[1] == 0.0);
  CHECK(w[2] == doctest::Approx(0.6));
  Confidences zero{0.0, 0.0, 0.0};
  auto u = fusion_weights(x, zero, ModalitySet::all());
  CHECK(u[0] == 0.5);
  CHECK(u[2] == 0.5);
}

TEST_CASE("confidence of perfect and random modalities") {
  auto pairs = make_pairs(4000);
  auto perfect = noisy_table(H, pairs, 0.0, 0.0, 1);
  FeatureTable random;
  random.modality = T;
  random.columns = {"x"};
  Rng rng = stream(3, "random");
  for (std::size_t i = 0; i < pairs.size(); ++i) random.rows.push_back(std::vector<double>{uniform01(rng)});
  TableSet tables{&perfect, &random, nullptr, nullptr, nullptr};
  std::vector<std::size_t> train(pairs.size());
  std::iota(train.begin(), train.end(), 0);
  ForestConfig forest{.n_trees = 10};
  auto m = fit_fusion(tables, pairs, train, 0.8, 5, forest);
  CHECK(*m.confidence[0] == 1.0);
  CHECK(std::abs(*m.confidence[1] - 0.5) < 0.05);
  CHECK_FALSE(m.confidence[2]);
  auto again = fit_fusion(tables, pairs, train, 0.8, 5, forest);
  CHECK(again.confidence == m.confidence);
  CHECK(again.forests[0] == m.forests[0]);
  CHECK_THROWS_AS(fit_fusion(tables, pairs, train, 1.0, 5, forest), ConfigError);
}

TEST_CASE("modalities without both classes are dropped") {
  auto pairs = make_pairs(60);
  auto good = noisy_table(H, pairs, 0.5, 0.0, 1);
  FeatureTable one_class = good;
  one_class.modality = T;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (pairs[i].label == 0) one_class.rows[i].reset();
  TableSet tables{&good, &one_class, nullptr, nullptr, nullptr};
  std::vector<std::size_t> train(pairs.size());
  std::iota(train.begin(), train.end(), 0);
  auto m = fit_fusion(tables, pairs, train, 0.8, 1, {.n_trees = 5});
  CHECK(m.confidence[0].has_value());
  CHECK_FALSE(m.confidence[1].has_value());
  CHECK(m.warnings.size() == 1);
  TableSet only_bad{nullptr, &one_class, nullptr, nullptr, nullptr};
  CHECK_THROWS_AS(fit_fusion(only_bad, pairs, train, 0.8, 1, {.n_trees = 5}), DataError);
}

TEST_CASE("cross-validated fusion") {
  auto pairs = make_pairs(300);
  auto h = noisy_table(H, pairs, 1.2, 0.3, 1);
  auto t = noisy_table(T, pairs, 1.6, 0.2, 2);
  auto i = noisy_table(I, pairs, 2.5, 0.0, 3);
  TableSet tables{&h, &t, &i, nullptr, nullptr};
  std::vector<ModalitySet> subsets{ModalitySet::of(H), ModalitySet::of(H).with(T), ModalitySet::parse("HTI")};
  std::vector<ScoredPair> scores;
  ForestConfig forest{.n_trees = 20};
  auto r = cross_validate_fusion(tables, pairs, subsets, 5, 0.8, 9, forest, &scores);
  REQUIRE(r.size() == 3);
  CHECK(r[0].unscorable > 0);
  CHECK(r[2].unscorable == 0);
  CHECK(r[2].weighted.mean > 0.8);
  CHECK(r[2].weighted.fold_auc.size() == 5);
  REQUIRE(scores.size() == pairs.size());
  for (std::size_t k = 0; k < scores.size(); ++k) {
    CHECK(scores[k].pair_index == k);
    CHECK(scores[k].posterior[0].has_value() == h.available(k));
    REQUIRE(scores[k].weighted);
    CHECK(*scores[k].baseline == doctest::Approx(*mean_score(scores[k].posterior, ModalitySet::all())));
  }
  auto again = cross_validate_fusion(tables, pairs, subsets, 5, 0.8, 9, forest);
  CHECK(again[2].weighted.fold_auc == r[2].weighted.fold_auc);
}
