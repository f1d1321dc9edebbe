#include <doctest.h>

#include <fstream>

#include "fixtures.hpp"
#include "linkinfer/dataset.hpp"

using namespace linkinfer;
using fixture::post;
using fixture::U;

namespace {

Dataset random_graph(std::uint64_t seed, std::size_t n, double p) {
  Rng rng = stream(seed, "graph");
  std::vector<Post> posts;
  for (std::size_t u = 0; u < n; ++u) posts.push_back(post(u, u, {"h"}));
  std::vector<UserPair> edges;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (uniform01(rng) < p) edges.push_back(UserPair::of(U(a), U(b)));
  return Dataset({}, std::move(posts), std::move(edges));
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_CASE("empty dataset has empty indexes") {
  Dataset d({}, {}, {});
  CHECK(d.users().empty());
  CHECK(d.indexes() == DatasetIndexes{});
}

TEST_CASE("hashtag multiset counts") {
  Dataset d({}, {post(0, 1, {"a", "a", "b"})}, {});
  const auto& h = d.indexes().user_hashtags.at(U(1));
  CHECK(h.at("a") == 2);
  CHECK(h.at("b") == 1);
}

TEST_CASE("indexes match a per-post rescan") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Dataset d = fixture::toy_dataset(seed);
    std::map<UserId, std::map<std::string, std::size_t>> tags, toks;
    std::map<UserId, std::size_t> images;
    std::map<UserId, std::map<std::int64_t, std::size_t>> locs;
    for (const auto& p : d.posts()) {
      for (const auto& h : p.hashtags) tags[p.author][h]++;
      for (const auto& t : p.tokens) toks[p.author][t]++;
      if (!p.image_probs.empty()) images[p.author]++;
      if (p.location) locs[p.author][*p.location]++;
    }
    CHECK(d.indexes().user_hashtags == tags);
    CHECK(d.indexes().user_tokens == toks);
    CHECK(d.indexes().user_images == images);
    CHECK(d.indexes().user_locations == locs);
    for (UserId u : d.users()) {
      std::size_t deg = 0;
      for (const auto& e : d.edges()) deg += (e.first == u) + (e.second == u);
      CHECK(d.degree(u) == deg);
    }
  }
}

TEST_CASE("construction rejects broken invariants") {
  CHECK_THROWS_AS(Dataset({}, {post(0, 1), post(0, 2)}, {}), DataError);
  CHECK_THROWS_AS(Dataset({}, {post(0, 1)}, {UserPair{U(1), U(9)}}), DataError);
  CHECK_THROWS_AS(Dataset({}, {post(0, 1, {}, "", {{400, 0.5}})}, {}), DataError);
  CHECK_THROWS_AS(Dataset({}, {post(0, 1, {}, "", {{1, 0.7}, {2, 0.7}})}, {}), DataError);
  CHECK_THROWS_AS(UserPair::of(U(3), U(3)), std::invalid_argument);
}

TEST_CASE("tokenizer") {
  CHECK(tokenize("Hello, WORLD! a b2") == std::vector<std::string>{"hello", "world", "b2"});
  CHECK(tokenize("caf\xc3\xa9 ok").front() == "caf\xc3\xa9");
  CHECK(tokenize("").empty());
}

TEST_CASE("load and write round trip") {
  fixture::TempDir dir("load");
  Dataset d = fixture::toy_dataset(7);
  write_posts(dir.path / "posts.jsonl", d);
  write_edges(dir.path / "edges.csv", d);
  Dataset back = load_dataset(dir.path / "posts.jsonl", dir.path / "edges.csv");
  CHECK(back.posts() == d.posts());
  CHECK(back.edges() == d.edges());
}

TEST_CASE("loader reports file and line") {
  fixture::TempDir dir("bad");
  write_file(dir.path / "edges.csv", "");
  write_file(dir.path / "posts.jsonl", "{\"user_id\": 1}\n\n{\"user_id\": 2, \"image_probs\": [[3, 2.0]]}\n");
  try {
    load_dataset(dir.path / "posts.jsonl", dir.path / "edges.csv");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("posts.jsonl:3") != std::string::npos);
  }
  write_file(dir.path / "posts.jsonl", "{\"user_id\": 1}\n{\"user_id\": 2}\n");
  write_file(dir.path / "edges.csv", "1,2\n1,7\n");
  try {
    load_dataset(dir.path / "posts.jsonl", dir.path / "edges.csv");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("edges.csv:2") != std::string::npos);
  }
  write_file(dir.path / "posts.jsonl", "not json\n");
  CHECK_THROWS_AS(load_dataset(dir.path / "posts.jsonl", dir.path / "edges.csv"), DataError);
  CHECK_THROWS_AS(load_dataset(dir.path / "missing.jsonl", dir.path / "edges.csv"), DataError);
}

TEST_CASE("post ids default to the line number") {
  fixture::TempDir dir("ids");
  write_file(dir.path / "posts.jsonl", "{\"user_id\": 1, \"text\": \"hi there\"}\n{\"user_id\": 2}\n");
  write_file(dir.path / "edges.csv", "1,2\n");
  Dataset d = load_dataset(dir.path / "posts.jsonl", dir.path / "edges.csv");
  CHECK(d.posts()[0].id == 1);
  CHECK(d.posts()[1].id == 2);
  CHECK(d.posts()[0].tokens == std::vector<std::string>{"hi", "there"});
}

TEST_CASE("nearest rank percentile") {
  std::vector<std::size_t> v(100);
  for (std::size_t i = 0; i < 100; ++i) v[i] = i + 1;
  CHECK(nearest_rank(v, 0.10) == 10);
  CHECK(nearest_rank(v, 0.90) == 90);
  CHECK(nearest_rank(v, 0.0) == 1);
  CHECK(nearest_rank(v, 1.0) == 100);
}

TEST_CASE("account filter against a hand percentile") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Dataset d = random_graph(seed, 60, 0.1);
    std::vector<std::size_t> deg;
    for (UserId u : d.users()) deg.push_back(d.degree(u));
    std::sort(deg.begin(), deg.end());
    const std::size_t lo = deg[static_cast<std::size_t>(std::ceil(0.1 * 60)) - 1];
    const std::size_t hi = deg[static_cast<std::size_t>(std::ceil(0.9 * 60)) - 1];
    Dataset f = filter_accounts(d);
    for (UserId u : d.users())
      CHECK(f.contains(u) == (d.degree(u) >= lo && d.degree(u) <= hi));
    for (const auto& e : f.edges()) CHECK((f.contains(e.first) && f.contains(e.second)));
    for (const auto& p : f.posts()) CHECK(f.contains(p.author));
    CHECK(filter_accounts(f).users() == f.users());
  }
}

TEST_CASE("account filter degenerate populations") {
  std::vector<Post> posts;
  std::vector<UserPair> edges;
  for (std::size_t u = 0; u < 6; ++u) posts.push_back(post(u, u));
  for (std::size_t u = 0; u < 6; ++u) edges.push_back(UserPair::of(U(u), U((u + 1) % 6)));
  Dataset ring({}, posts, edges);
  CHECK(filter_accounts(ring).users().size() == 6);
  Dataset single({}, {post(0, 5)}, {});
  CHECK(filter_accounts(single).users().size() == 1);
}

TEST_CASE("hashtag band filter") {
  std::vector<Post> posts;
  std::size_t id = 0;
  auto use = [&](const std::string& tag, std::size_t users) {
    for (std::size_t u = 0; u < users; ++u) posts.push_back(post(id++, u, {tag}));
  };
  use("one", 1);
  use("two", 2);
  use("five", 5);
  use("ten", 10);
  use("eleven", 11);
  Dataset f = filter_hashtags(Dataset({}, posts, {}));
  std::set<std::string> left;
  for (const auto& [h, us] : f.indexes().hashtag_users) left.insert(h);
  CHECK(left == std::set<std::string>{"five", "ten", "two"});
}

TEST_CASE("token band filter") {
  std::vector<Post> posts;
  std::size_t id = 0;
  auto use = [&](const std::string& word, std::size_t users) {
    for (std::size_t u = 0; u < users; ++u) posts.push_back(post(id++, u, {}, word));
  };
  use("aa", 1);
  use("bb", 2);
  use("cc", 50);
  use("dd", 100);
  use("ee", 101);
  Dataset f = filter_tokens(Dataset({}, posts, {}));
  std::set<std::string> left;
  for (const auto& [u, toks] : f.indexes().user_tokens)
    for (const auto& [t, n] : toks) left.insert(t);
  CHECK(left == std::set<std::string>{"bb", "cc", "dd"});
  CHECK(filter_tokens(Dataset({}, {post(0, 1)}, {})).indexes().user_tokens.empty());
}

TEST_CASE("location eligibility") {
  std::vector<Post> posts;
  std::size_t id = 0;
  for (int i = 0; i < 25; ++i) posts.push_back(post(id++, 1, {}, "", {}, 7));
  for (int i = 0; i < 20; ++i) posts.push_back(post(id++, 2, {}, "", {}, i % 2));
  for (int i = 0; i < 19; ++i) posts.push_back(post(id++, 3, {}, "", {}, i % 3));
  Dataset d({}, posts, {});
  CHECK(filter_location_users(d) == std::set<UserId>{U(2)});
}

TEST_CASE("location eligibility matches a recount") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Dataset d = fixture::toy_dataset(seed);
    std::map<UserId, std::set<std::int64_t>> distinct;
    std::map<UserId, std::size_t> total;
    for (const auto& p : d.posts())
      if (p.location) distinct[p.author].insert(*p.location), total[p.author]++;
    std::set<UserId> expect;
    for (auto& [u, s] : distinct)
      if (s.size() >= 2 && total[u] >= 3) expect.insert(u);
    CHECK(filter_location_users(d, 2, 3) == expect);
  }
}

TEST_CASE("drop_posts removes exactly floor(f * n)") {
  Dataset d = fixture::toy_dataset(3);
  for (double f : {0.0, 0.1, 0.3, 0.5, 0.9}) {
    Dataset r = drop_posts(d, f, 11);
    const auto n = d.posts().size();
    CHECK(r.posts().size() == n - static_cast<std::size_t>(std::floor(f * static_cast<double>(n) + 1e-9)));
    CHECK(r.users() == d.users());
    CHECK(r.edges() == d.edges());
  }
  CHECK(drop_posts(d, 0.4, 5).posts() == drop_posts(d, 0.4, 5).posts());
  CHECK_THROWS_AS(drop_posts(d, 1.0, 1), ConfigError);
  CHECK_THROWS_AS(drop_posts(d, -0.1, 1), ConfigError);
}

TEST_CASE("pair sampling") {
  SUBCASE("complete graph has no strangers") {
    std::vector<Post> posts;
    std::vector<UserPair> edges;
    for (std::size_t u = 0; u < 4; ++u) posts.push_back(post(u, u, {"x"}));
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = a + 1; b < 4; ++b) edges.push_back(UserPair::of(U(a), U(b)));
    CHECK_THROWS_AS(build_pairs(Dataset({}, posts, edges), 1), DataError);
  }
  SUBCASE("balanced, non-adjacent, deterministic") {
    Dataset d = random_graph(5, 30, 0.05);
    auto pairs = build_pairs(d, 9);
    std::size_t friends = 0;
    for (const auto& s : pairs) friends += s.label;
    CHECK(friends == d.edges().size());
    CHECK(pairs.size() == 2 * friends);
    std::set<UserPair> seen;
    for (const auto& s : pairs) {
      CHECK(d.adjacent(s.pair) == (s.label == 1));
      CHECK(seen.insert(s.pair).second);
      CHECK(s.any_available());
    }
    CHECK(build_pairs(d, 9) == pairs);
  }
}

TEST_CASE("availability flags") {
  std::vector<Post> posts{post(0, 1, {"a"}, "some words", {{1, 0.5}}), post(1, 2, {"a"}, "", {}),
                          post(2, 3, {"b"}, "words here", {{2, 0.4}})};
  Dataset d({}, posts, {UserPair::of(U(1), U(2))});
  auto a12 = modality_availability(d, UserPair::of(U(1), U(2)), {});
  CHECK(a12[index_of(Modality::Hashtag)]);
  CHECK_FALSE(a12[index_of(Modality::Text)]);
  CHECK_FALSE(a12[index_of(Modality::Image)]);
  CHECK(a12[index_of(Modality::Network)]);
  auto a13 = modality_availability(d, UserPair::of(U(1), U(3)), {U(1), U(3)});
  CHECK_FALSE(a13[index_of(Modality::Hashtag)]);
  CHECK(a13[index_of(Modality::Text)]);
  CHECK(a13[index_of(Modality::Image)]);
  CHECK(a13[index_of(Modality::Location)]);
  CHECK_FALSE(a13[index_of(Modality::Network)]);
}
