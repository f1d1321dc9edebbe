#include "linkinfer/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "linkinfer/random.hpp"

namespace linkinfer {

void SynthConfig::validate() const {
  auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0, 1]");
  };
  prob(p_in, "p_in");
  prob(p_out, "p_out");
  prob(topic_concentration, "topic_concentration");
  prob(pair_signal_rate, "pair_signal_rate");
  prob(image_rate, "image_rate");
  prob(checkin_rate, "checkin_rate");
  if (n_users == 0 || n_communities == 0 || vocab_size == 0 || n_hashtags == 0 || n_locations == 0 ||
      n_categories == 0)
    throw ConfigError("synth sizes must be positive");
  if (n_communities > n_users) throw ConfigError("more communities than users");
  if (n_categories > kSceneCategories) throw ConfigError("n_categories exceeds the scene category count");
  if (!(posts_per_user > 0) || !(tokens_per_post >= 0) || !(hashtags_per_post >= 0))
    throw ConfigError("post rates must be positive");
}

namespace {

// Items are split into disjoint community pools. A draw comes from the
// drawer's community pool with probability `concentration`, otherwise from
// a Zipf law over the whole vocabulary.
class TopicSampler {
 public:
  TopicSampler(std::size_t size, std::size_t communities, double concentration, Rng& rng)
      : concentration_(concentration), pools_(communities), zipf_cum_(size) {
    std::vector<std::size_t> perm(size);
    std::iota(perm.begin(), perm.end(), 0);
    shuffle(std::span(perm), rng);
    for (std::size_t i = 0; i < size; ++i) pools_[i % communities].push_back(perm[i]);
    double acc = 0;
    for (std::size_t r = 0; r < size; ++r) zipf_cum_[r] = acc += 1.0 / static_cast<double>(r + 1);
    global_rank_ = perm;
    shuffle(std::span(global_rank_), rng);
  }

  std::size_t draw(std::size_t community, Rng& rng) const {
    const auto& pool = pools_[community];
    if (!pool.empty() && uniform01(rng) < concentration_) return pool[uniform_index(rng, pool.size())];
    const double r = uniform01(rng) * zipf_cum_.back();
    auto it = std::upper_bound(zipf_cum_.begin(), zipf_cum_.end(), r);
    const auto rank = std::min<std::size_t>(static_cast<std::size_t>(it - zipf_cum_.begin()), zipf_cum_.size() - 1);
    return global_rank_[rank];
  }

 private:
  double concentration_;
  std::vector<std::vector<std::size_t>> pools_;
  std::vector<double> zipf_cum_;
  std::vector<std::size_t> global_rank_;
};

std::size_t poisson(double mean, Rng& rng) {
  if (mean <= 0) return 0;
  std::poisson_distribution<std::size_t> dist(mean);
  return dist(rng);
}

// Sparse scene probabilities: one dominant category plus a few minor ones,
// total mass below one.
std::vector<ImageProb> make_image(std::size_t main, const TopicSampler& cats, std::size_t community, Rng& rng) {
  std::vector<ImageProb> probs;
  const double top = 0.3 + 0.4 * uniform01(rng);
  probs.push_back({static_cast<std::uint32_t>(main), top});
  double rest = (1.0 - top) * (0.5 + 0.45 * uniform01(rng));
  const std::size_t extra = 1 + uniform_index(rng, 4);
  for (std::size_t k = 0; k < extra && rest > 1e-3; ++k) {
    const auto c = static_cast<std::uint32_t>(cats.draw(community, rng));
    if (std::any_of(probs.begin(), probs.end(), [&](const ImageProb& p) { return p.category == c; })) continue;
    const double share = k + 1 == extra ? rest : rest * uniform01(rng);
    if (!(share > 0)) continue;
    probs.push_back({c, share});
    rest -= share;
  }
  std::sort(probs.begin(), probs.end(), [](const ImageProb& a, const ImageProb& b) { return a.category < b.category; });
  return probs;
}

}  // namespace

SynthResult generate(const SynthConfig& cfg) {
  cfg.validate();
  SynthResult out;
  const std::size_t n = cfg.n_users;
  const std::size_t k = cfg.n_communities;

  Rng assign = stream(cfg.seed, "synth-communities");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  shuffle(std::span(order), assign);
  out.community.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.community[order[i]] = i % k;

  double within_pairs = 0, across_pairs = 0;
  std::vector<UserPair> edges;
  Rng graph = stream(cfg.seed, "synth-graph");
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      const bool same = out.community[u] == out.community[v];
      (same ? within_pairs : across_pairs) += 1;
      if (uniform01(graph) < (same ? cfg.p_in : cfg.p_out)) edges.push_back(UserPair::of(UserId{u}, UserId{v}));
    }
  }
  if (cfg.p_in * within_pairs < 1.0)
    out.warnings.push_back("expected within-community edge count below 1; the graph may be empty");
  if (edges.empty()) out.warnings.push_back("generated graph has no edges");

  Rng topics = stream(cfg.seed, "synth-topics");
  const TopicSampler words(cfg.vocab_size, k, cfg.topic_concentration, topics);
  const TopicSampler tags(cfg.n_hashtags, k, cfg.topic_concentration, topics);
  const TopicSampler places(cfg.n_locations, k, cfg.topic_concentration, topics);
  const TopicSampler cats(cfg.n_categories, k, cfg.topic_concentration, topics);

  std::vector<std::vector<Post>> by_user(n);
  for (std::size_t u = 0; u < n; ++u) {
    Rng rng = stream(cfg.seed, "synth-user", u);
    const std::size_t c = out.community[u];
    std::array<std::size_t, 3> liked_cats{};
    for (auto& x : liked_cats) x = cats.draw(c, rng);
    std::array<std::size_t, 4> home{};
    for (auto& x : home) x = places.draw(c, rng);

    const std::size_t count = poisson(cfg.posts_per_user, rng);
    for (std::size_t i = 0; i < count; ++i) {
      Post p;
      p.author = UserId{u};
      const std::size_t n_tags = poisson(cfg.hashtags_per_post, rng);
      for (std::size_t j = 0; j < n_tags; ++j) p.hashtags.push_back("tag" + std::to_string(tags.draw(c, rng)));
      const std::size_t n_words = poisson(cfg.tokens_per_post, rng);
      for (std::size_t j = 0; j < n_words; ++j) {
        if (j) p.text.push_back(' ');
        p.text += "w" + std::to_string(words.draw(c, rng));
      }
      if (uniform01(rng) < cfg.image_rate) {
        const std::size_t main = uniform01(rng) < 0.7 ? liked_cats[uniform_index(rng, liked_cats.size())]
                                                      : cats.draw(c, rng);
        p.image_probs = make_image(main, cats, c, rng);
      }
      if (uniform01(rng) < cfg.checkin_rate) {
        const std::size_t loc = uniform01(rng) < 0.8 ? home[uniform_index(rng, home.size())] : places.draw(c, rng);
        p.location = static_cast<std::int64_t>(loc);
      }
      by_user[u].push_back(std::move(p));
    }
  }

  Rng planting = stream(cfg.seed, "synth-pair-signal");
  auto some_post = [&](std::size_t u) -> Post& {
    auto& posts = by_user[u];
    if (posts.empty()) {
      Post p;
      p.author = UserId{u};
      posts.push_back(std::move(p));
    }
    return posts[uniform_index(planting, posts.size())];
  };
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!(uniform01(planting) < cfg.pair_signal_rate)) continue;
    PlantedSignal sig;
    sig.pair = edges[e];
    const std::size_t n_private = 1 + uniform_index(planting, 3);
    for (std::size_t j = 0; j < n_private; ++j) sig.hashtags.push_back("pair" + std::to_string(e) + "x" + std::to_string(j));
    sig.location = static_cast<std::int64_t>(cfg.n_locations + e);
    for (UserId who : {sig.pair.first, sig.pair.second}) {
      const auto u = static_cast<std::size_t>(raw(who));
      for (const auto& h : sig.hashtags) some_post(u).hashtags.push_back(h);
      auto& posts = by_user[u];
      std::vector<std::size_t> free;
      for (std::size_t i = 0; i < posts.size(); ++i)
        if (!posts[i].location || *posts[i].location < static_cast<std::int64_t>(cfg.n_locations)) free.push_back(i);
      while (free.size() < 2) {
        Post p;
        p.author = who;
        free.push_back(posts.size());
        posts.push_back(std::move(p));
      }
      for (std::size_t j = 0; j < 2; ++j) {
        std::swap(free[j], free[j + uniform_index(planting, free.size() - j)]);
        posts[free[j]].location = sig.location;
      }
    }
    out.planted.push_back(std::move(sig));
  }

  std::vector<Post> posts;
  std::vector<UserId> users;
  for (std::size_t u = 0; u < n; ++u) {
    users.push_back(UserId{u});
    for (auto& p : by_user[u]) {
      p.id = posts.size();
      p.tokens = tokenize(p.text);
      posts.push_back(std::move(p));
    }
  }
  out.ground_truth = edges;
  out.dataset = Dataset(std::move(users), std::move(posts), std::move(edges));
  return out;
}

void write_synth(const std::filesystem::path& dir, const SynthResult& r) {
  std::filesystem::create_directories(dir);
  write_posts(dir / "posts.jsonl", r.dataset);
  write_edges(dir / "edges.csv", r.dataset);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name);
    if (!f) throw DataError("cannot write " + (dir / name).string());
    return f;
  };
  auto truth = open("ground_truth.csv");
  truth << "u,v\n";
  for (const auto& e : r.ground_truth) truth << raw(e.first) << ',' << raw(e.second) << '\n';
  auto comm = open("communities.csv");
  comm << "user,community\n";
  for (std::size_t u = 0; u < r.community.size(); ++u) comm << u << ',' << r.community[u] << '\n';
  auto planted = open("planted.csv");
  planted << "u,v,location,hashtags\n";
  for (const auto& s : r.planted) {
    planted << raw(s.pair.first) << ',' << raw(s.pair.second) << ',' << s.location << ',';
    for (std::size_t i = 0; i < s.hashtags.size(); ++i) planted << (i ? ";" : "") << s.hashtags[i];
    planted << '\n';
  }
}

}  // namespace linkinfer
