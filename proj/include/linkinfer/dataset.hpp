#pragma once

// In-memory OSN snapshot: users, posts and the published friendship graph,
// plus the preprocessing filters and pair sampling every attack builds on.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "linkinfer/types.hpp"

namespace linkinfer {

inline constexpr std::uint32_t kSceneCategories = 365;

struct ImageProb {
  std::uint32_t category = 0;
  double probability = 0.0;

  friend bool operator==(const ImageProb&, const ImageProb&) = default;
};

/// One post: hashtags, caption, an optional image (sparse scene
/// probabilities) and an optional check-in. Any component may be empty.
struct Post {
  std::size_t id = 0;
  UserId author{};
  std::vector<std::string> hashtags;  // multiset, in posting order
  std::string text;                   // raw caption
  std::vector<std::string> tokens;    // tokenized caption after vocabulary filtering
  std::vector<ImageProb> image_probs;
  std::optional<std::int64_t> location;

  bool has_image() const noexcept { return !image_probs.empty(); }
  friend bool operator==(const Post&, const Post&) = default;
};

template <class Key>
using CountMap = std::map<Key, std::size_t>;

/// Indexes derived from posts and edges. Per-user maps only hold users with
/// at least one counted item; `degree` holds every user.
struct DatasetIndexes {
  std::map<UserId, CountMap<std::string>> user_hashtags;
  std::map<UserId, CountMap<std::string>> user_tokens;
  std::map<UserId, CountMap<std::uint32_t>> user_image_categories;  // images with P(c) > 0
  std::map<UserId, std::size_t> user_images;
  std::map<UserId, CountMap<std::int64_t>> user_locations;
  std::map<std::string, CountMap<UserId>> hashtag_users;
  std::map<UserId, std::size_t> degree;

  friend bool operator==(const DatasetIndexes&, const DatasetIndexes&) = default;
};

DatasetIndexes build_indexes(std::span<const UserId> users, std::span<const Post> posts,
                             std::span<const UserPair> edges);

/// Immutable snapshot. Construction validates every invariant and throws
/// DataError on violation.
class Dataset {
 public:
  Dataset() = default;

  /// `users` may list users without posts; post authors are added
  /// implicitly. Edges are deduplicated. Follower counts default to the
  /// degree in `edges` and define the reference population for
  /// percentile-based account filtering.
  Dataset(std::vector<UserId> users, std::vector<Post> posts, std::vector<UserPair> edges);

  const std::vector<UserId>& users() const noexcept { return users_; }
  const std::vector<Post>& posts() const noexcept { return posts_; }
  const std::vector<UserPair>& edges() const noexcept { return edges_; }
  const DatasetIndexes& indexes() const noexcept { return indexes_; }

  bool contains(UserId u) const;
  bool adjacent(UserPair p) const;
  std::size_t degree(UserId u) const;

  /// Follower count recorded when the snapshot was first loaded.
  std::size_t followers(UserId u) const;
  /// Sorted follower counts of the originally loaded population.
  const std::vector<std::size_t>& follower_population() const noexcept { return follower_population_; }

  /// Same provenance (follower attributes), different content.
  Dataset derive(std::vector<UserId> users, std::vector<Post> posts, std::vector<UserPair> edges) const;

 private:
  std::vector<UserId> users_;
  std::vector<Post> posts_;
  std::vector<UserPair> edges_;
  DatasetIndexes indexes_;
  std::map<UserId, std::size_t> followers_;
  std::vector<std::size_t> follower_population_;
};

/// Lowercases ASCII, splits on runs of non-alphanumeric ASCII characters and
/// drops tokens shorter than two bytes. Bytes >= 0x80 count as alphanumeric
/// so UTF-8 words stay intact.
std::vector<std::string> tokenize(std::string_view text);

/// Line-delimited JSON posts + "u,v" edge CSV. Errors carry file:line.
Dataset load_dataset(const std::filesystem::path& posts_path, const std::filesystem::path& edges_path);
void write_posts(const std::filesystem::path& path, const Dataset& d);
void write_edges(const std::filesystem::path& path, const Dataset& d);

/// Nearest-rank percentile of an ascending sequence; p in [0, 1].
std::size_t nearest_rank(std::span<const std::size_t> sorted, double p);

/// Removes users whose follower count lies strictly below the low_pct or
/// strictly above the high_pct nearest-rank percentile of the loaded
/// population, with their posts and incident edges.
Dataset filter_accounts(const Dataset& d, double low_pct = 0.10, double high_pct = 0.90);
/// Drops hashtags used by fewer than min_users or more than max_users distinct users.
Dataset filter_hashtags(const Dataset& d, std::size_t min_users = 2, std::size_t max_users = 10);
/// Drops caption tokens used by fewer than min_users or more than max_users distinct users.
Dataset filter_tokens(const Dataset& d, std::size_t min_users = 2, std::size_t max_users = 100);
/// Users with at least min_distinct different locations and min_checkins check-ins.
std::set<UserId> filter_location_users(const Dataset& d, std::size_t min_distinct = 2,
                                       std::size_t min_checkins = 20);

/// Uniformly removes exactly floor(fraction * |posts|) posts; fraction in [0, 1).
Dataset drop_posts(const Dataset& d, double fraction, std::uint64_t seed);

struct PairSample {
  UserPair pair;
  int label = 0;  // 1 friend, 0 stranger
  std::array<bool, kModalityCount> available{};

  bool has(Modality m) const noexcept { return available[index_of(m)]; }
  bool any_available() const noexcept;
  friend bool operator==(const PairSample&, const PairSample&) = default;
};

struct LocationRules {
  std::size_t min_distinct = 2;
  std::size_t min_checkins = 20;
};

/// Availability of each modality for a pair. Hashtags need a common
/// hashtag, text needs tokens on both sides, images an image on both sides,
/// locations both users eligible. Network availability here only means both
/// users have a published edge; the network pipeline refines it.
std::array<bool, kModalityCount> modality_availability(const Dataset& d, UserPair p,
                                                       const std::set<UserId>& location_eligible);

/// All friend pairs with an available modality, plus an equal number of
/// uniformly sampled non-adjacent pairs that have one. Friends first, each
/// block in canonical pair order. Throws DataError when strangers run short.
std::vector<PairSample> build_pairs(const Dataset& d, std::uint64_t seed, const LocationRules& rules = {});

/// Recomputes availability flags against another snapshot of the same users.
std::vector<PairSample> refresh_availability(const Dataset& d, std::span<const PairSample> pairs,
                                             const LocationRules& rules = {});

}  // namespace linkinfer
