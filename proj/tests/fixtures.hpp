#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "linkinfer/dataset.hpp"
#include "linkinfer/random.hpp"

namespace fixture {

using namespace linkinfer;

inline UserId U(std::uint64_t id) { return UserId{id}; }

inline Post post(std::size_t id, std::uint64_t author, std::vector<std::string> tags = {}, std::string text = {},
                 std::vector<ImageProb> probs = {}, std::optional<std::int64_t> loc = std::nullopt) {
  Post p;
  p.id = id;
  p.author = U(author);
  p.hashtags = std::move(tags);
  p.text = std::move(text);
  p.tokens = tokenize(p.text);
  p.image_probs = std::move(probs);
  p.location = loc;
  return p;
}

inline std::vector<UserId> users(std::uint64_t n) {
  std::vector<UserId> out;
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(U(i));
  return out;
}

/// Fresh directory under the system temp dir, removed on destruction.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("linkinfer_" + tag + "_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

/// Random toy network for oracle comparisons: up to 10 users, hashtags from a
/// small alphabet, sparse image probabilities over `categories`.
inline Dataset toy_dataset(std::uint64_t seed, std::size_t categories = kSceneCategories) {
  Rng rng = stream(seed, "toy");
  const std::size_t n = 3 + uniform_index(rng, 8);
  std::vector<Post> posts;
  for (std::size_t u = 0; u < n; ++u) {
    const std::size_t count = 1 + uniform_index(rng, 6);
    for (std::size_t k = 0; k < count; ++k) {
      Post p;
      p.id = posts.size();
      p.author = U(u);
      const std::size_t tags = uniform_index(rng, 4);
      for (std::size_t t = 0; t < tags; ++t) p.hashtags.push_back("h" + std::to_string(uniform_index(rng, 6)));
      const std::size_t words = uniform_index(rng, 6);
      for (std::size_t t = 0; t < words; ++t) p.text += "w" + std::to_string(uniform_index(rng, 12)) + " ";
      p.tokens = tokenize(p.text);
      if (uniform01(rng) < 0.7) {
        double left = 1.0;
        std::vector<std::uint32_t> used;
        const std::size_t k_probs = 1 + uniform_index(rng, 4);
        for (std::size_t j = 0; j < k_probs; ++j) {
          auto c = static_cast<std::uint32_t>(uniform_index(rng, std::min<std::size_t>(categories, 8)));
          if (std::find(used.begin(), used.end(), c) != used.end()) continue;
          used.push_back(c);
          const double pr = left * (0.1 + 0.8 * uniform01(rng));
          left -= pr;
          p.image_probs.push_back({c, pr});
        }
      }
      if (uniform01(rng) < 0.5) p.location = static_cast<std::int64_t>(uniform_index(rng, 4));
      posts.push_back(std::move(p));
    }
  }
  std::vector<UserPair> edges;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (uniform01(rng) < 0.3) edges.push_back(UserPair::of(U(a), U(b)));
  return Dataset(users(n), std::move(posts), std::move(edges));
}

}  // namespace fixture
