#include <doctest.h>

#include "fixtures.hpp"
#include "linkinfer/distances.hpp"
#include "linkinfer/textfeat.hpp"
#include "oracles.hpp"

using namespace linkinfer;
using fixture::post;
using fixture::U;

namespace {

std::vector<double> random_vector(Rng& rng, std::size_t d, double zero_rate) {
  std::vector<double> v(d);
  for (auto& x : v) x = uniform01(rng) < zero_rate ? 0.0 : uniform01(rng) * 4 - 2;
  return v;
}

}  // namespace

TEST_CASE("distance hand values") {
  std::vector<double> e1{1, 0}, e2{0, 1};
  auto same = pairwise_distances(e1, e1).values;
  CHECK(same[0] == doctest::Approx(1.0));
  CHECK(same[1] == 0.0);
  CHECK(same[6] == 0.0);
  CHECK(same[7] == 0.0);
  auto diff = pairwise_distances(e1, e2).values;
  CHECK(diff[1] == doctest::Approx(std::sqrt(2.0)));
  CHECK(diff[5] == doctest::Approx(2.0));
  CHECK(diff[4] == doctest::Approx(1.0));
  CHECK(diff[0] == 0.0);
  CHECK(diff[3] == 1.0);
}

TEST_CASE("distances match the oracle on random vectors") {
  Rng rng = stream(1, "distances");
  for (int rep = 0; rep < 500; ++rep) {
    const std::size_t d = 1 + uniform_index(rng, 40);
    auto x = random_vector(rng, d, 0.3);
    auto y = random_vector(rng, d, 0.3);
    auto got = pairwise_distances(x, y).values;
    auto want = oracle::distances(x, y);
    for (std::size_t k = 0; k < kDistanceCount; ++k) CHECK(oracle::close(got[k], want[k]));
    CHECK(oracle::close(got[7], got[1] * got[1]));
    auto swapped = pairwise_distances(y, x).values;
    for (std::size_t k = 0; k < kDistanceCount; ++k) CHECK(oracle::close(got[k], swapped[k]));
  }
}

TEST_CASE("zero vectors are degenerate, not NaN") {
  std::vector<double> z{0, 0, 0}, x{1, 2, 3}, c{2, 2, 2};
  auto r = pairwise_distances(z, x);
  CHECK(r.degenerate);
  CHECK(r.values[0] == 0.0);
  CHECK(r.values[2] == 0.0);
  for (double v : r.values) CHECK_FALSE(std::isnan(v));
  CHECK(pairwise_distances(c, x).degenerate);
  CHECK(pairwise_distances(z, z).values[4] == 0.0);
  CHECK_THROWS_AS(pairwise_distances(z, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("shared zero coordinates leave all but correlation unchanged") {
  Rng rng = stream(2, "padding");
  for (int rep = 0; rep < 100; ++rep) {
    auto x = random_vector(rng, 6, 0.0);
    auto y = random_vector(rng, 6, 0.0);
    auto a = pairwise_distances(x, y).values;
    x.resize(20, 0.0);
    y.resize(20, 0.0);
    auto b = pairwise_distances(x, y).values;
    for (std::size_t k = 0; k < kDistanceCount; ++k)
      if (k != 2) CHECK(oracle::close(a[k], b[k]));
  }
}

TEST_CASE("tf and idf by hand") {
  std::vector<Post> posts{post(0, 0, {}, "aa aa bb cc")};
  for (std::size_t u = 1; u < 10; ++u) posts.push_back(post(u, u, {}, u < 4 ? "aa zz" : "zz"));
  TfidfMatrix m = tfidf(Dataset({}, posts, {}));
  CHECK(m.documents == 10);
  auto it = std::find(m.vocabulary.begin(), m.vocabulary.end(), "aa");
  const auto k = static_cast<std::size_t>(it - m.vocabulary.begin());
  CHECK(m.idf[k] == doctest::Approx(std::log(2.0)));

  // user 0: tf(aa) = 0.5, tf(bb) = tf(cc) = 0.25, idf(bb) = idf(cc) = ln 5
  const double wa = 0.5 * std::log(2.0), wb = 0.25 * std::log(5.0);
  const double norm = std::sqrt(wa * wa + 2 * wb * wb);
  auto dense = m.dense(U(0));
  CHECK(dense[k] == doctest::Approx(wa / norm));
}

TEST_CASE("tfidf and text features match the oracle") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Dataset d = fixture::toy_dataset(seed);
    TfidfMatrix m = tfidf(d);
    auto want = oracle::tfidf(d.posts());
    for (const auto& [u, terms] : want) {
      auto dense = m.dense(u);
      for (const auto& [t, w] : terms) {
        auto k = static_cast<std::size_t>(std::find(m.vocabulary.begin(), m.vocabulary.end(), t) -
                                          m.vocabulary.begin());
        CHECK(oracle::close(dense[k], w));
      }
    }
    for (UserId u : d.users())
      for (UserId v : d.users()) {
        if (!(u < v)) continue;
        auto got = text_features(m, UserPair::of(u, v));
        CHECK(got.has_value() == (want.contains(u) && want.contains(v)));
        if (!got) continue;
        auto expect = oracle::distances(m.dense(u), m.dense(v));
        for (std::size_t k = 0; k < kDistanceCount; ++k) CHECK(oracle::close(got->values[k], expect[k]));
      }
  }
}

TEST_CASE("identical texts give identical vectors") {
  std::vector<Post> posts{post(0, 0, {}, "red blue blue"), post(1, 1, {}, "blue red blue"), post(2, 2, {}, "green"),
                          post(3, 3, {}, "green yellow")};
  TfidfMatrix m = tfidf(Dataset({}, posts, {}));
  CHECK(m.dense(U(0)) == m.dense(U(1)));
  auto f = text_features(m, UserPair::of(U(0), U(1)));
  REQUIRE(f);
  CHECK(f->values[1] == 0.0);
  CHECK_FALSE(text_features(m, UserPair::of(U(0), U(9))));
}
