#include <doctest.h>

#include "fixtures.hpp"
#include "linkinfer/tagfeat.hpp"
#include "oracles.hpp"

using namespace linkinfer;
using fixture::post;
using fixture::U;

TEST_CASE("hashtag entropy values") {
  CHECK(hashtag_entropy(std::vector<std::size_t>{1, 1}) == doctest::Approx(1.0));
  CHECK(hashtag_entropy(std::vector<std::size_t>{4}) == 0.0);
  const double h31 = -0.75 * std::log2(0.75) - 0.25 * std::log2(0.25);
  CHECK(hashtag_entropy(std::vector<std::size_t>{3, 1}) == doctest::Approx(h31).epsilon(1e-12));
  CHECK(hashtag_entropy(std::vector<std::size_t>{3, 1}) == doctest::Approx(0.8113).epsilon(1e-4));
  CHECK_THROWS_AS(hashtag_entropy(std::vector<std::size_t>{0, 0}), std::invalid_argument);
}

TEST_CASE("common and fraction by hand") {
  // H_u = {a,b,c}, H_v = {b,c,d}; the third user keeps every tag at two users.
  std::vector<Post> posts{post(0, 1, {"a", "b", "c"}), post(1, 2, {"b", "c", "d"}), post(2, 3, {"a", "d"})};
  auto idx = build_hashtag_index(Dataset({}, posts, {}));
  auto f = hashtag_features(idx, UserPair::of(U(1), U(2)));
  CHECK(f[0] == 2.0);
  CHECK(f[1] == 0.5);
  CHECK(f[2] == 2.0);
  CHECK(f[3] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("Adamic-Adar and entropy terms by hand") {
  // Shared tags: x with total 2 split (1,1), y with total 5 split (3,1,1).
  // Union of u and v also holds z, used once each by u and a third user.
  std::vector<Post> posts{post(0, 1, {"x", "y", "y", "y", "z"}), post(1, 2, {"x", "y"}), post(2, 3, {"y", "z"})};
  auto idx = build_hashtag_index(Dataset({}, posts, {}));
  auto f = hashtag_features(idx, UserPair::of(U(1), U(2)));
  CHECK(f[4] == 2.0);
  CHECK(f[5] == doctest::Approx(1 / std::log(2.0) + 1 / std::log(5.0)).epsilon(1e-12));
  CHECK(f[5] == doctest::Approx(2.0640).epsilon(1e-4));

  const double ex = 1.0;
  const double ey = oracle::entropy_bits({3, 1, 1});
  const double ez = 1.0;
  CHECK(f[6] == doctest::Approx(std::min(ex, ey)));
  const double aa = 1 / ex + 1 / ey;
  CHECK(f[7] == doctest::Approx(aa).epsilon(1e-12));
  CHECK(f[8] == doctest::Approx(aa / 3).epsilon(1e-12));
  CHECK(f[9] == doctest::Approx(aa / (1 / ex + 1 / ey + 1 / ez)).epsilon(1e-12));
}

TEST_CASE("entropy terms with given entropies") {
  // Common tags with entropies 1.0 and 0.8113 (counts (1,1) and (3,1)); union of 4.
  std::vector<Post> posts{post(0, 1, {"p", "q", "q", "q", "r"}), post(1, 2, {"p", "q", "s"}),
                          post(2, 3, {"r", "s"})};
  auto idx = build_hashtag_index(Dataset({}, posts, {}));
  auto f = hashtag_features(idx, UserPair::of(U(1), U(2)));
  const double e31 = oracle::entropy_bits({3, 1});
  CHECK(f[6] == doctest::Approx(e31));
  CHECK(f[7] == doctest::Approx(1 + 1 / e31).epsilon(1e-12));
  CHECK(f[7] == doctest::Approx(2.2326).epsilon(1e-4));
  CHECK(f[8] == doctest::Approx(f[7] / 4).epsilon(1e-12));
  CHECK(f[9] == doctest::Approx(f[7] / (1 + 1 / e31 + 1 + 1)).epsilon(1e-12));
}

TEST_CASE("hashtag features match the oracle on toy datasets") {
  std::size_t compared = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Dataset d = filter_hashtags(fixture::toy_dataset(seed));
    auto idx = build_hashtag_index(d);
    for (UserId u : d.users())
      for (UserId v : d.users()) {
        if (!(u < v)) continue;
        const auto pair = UserPair::of(u, v);
        if (!share_hashtag(idx, pair)) {
          CHECK_THROWS_AS(hashtag_features(idx, pair), DataError);
          continue;
        }
        auto got = hashtag_features(idx, pair);
        auto want = oracle::hashtag_features(d.posts(), u, v);
        for (std::size_t k = 0; k < kHashtagFeatureCount; ++k) CHECK(oracle::close(got[k], want[k]));
        auto swapped = hashtag_features(idx, UserPair::of(v, u));
        CHECK(swapped == got);
        ++compared;
      }
  }
  CHECK(compared > 100);
}

TEST_CASE("unfiltered singleton hashtags are rejected") {
  std::vector<Post> posts{post(0, 1, {"a", "solo"}), post(1, 2, {"a"})};
  auto idx = build_hashtag_index(Dataset({}, posts, {}));
  CHECK_THROWS_AS(hashtag_features(idx, UserPair::of(U(1), U(2))), DataError);
}
