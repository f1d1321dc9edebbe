#include "linkinfer/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "linkinfer/random.hpp"

namespace linkinfer {

namespace {

using nlohmann::json;

void validate_post(const Post& p) {
  double total = 0.0;
  std::set<std::uint32_t> seen;
  for (const auto& ip : p.image_probs) {
    if (ip.category >= kSceneCategories)
      throw DataError("post " + std::to_string(p.id) + ": image category " + std::to_string(ip.category) +
                      " outside 0.." + std::to_string(kSceneCategories - 1));
    if (!(ip.probability > 0.0) || ip.probability > 1.0)
      throw DataError("post " + std::to_string(p.id) + ": image probability must lie in (0, 1]");
    if (!seen.insert(ip.category).second)
      throw DataError("post " + std::to_string(p.id) + ": duplicate image category " +
                      std::to_string(ip.category));
    total += ip.probability;
  }
  if (total > 1.0 + 1e-6) throw DataError("post " + std::to_string(p.id) + ": image probabilities sum above 1");
}

}  // namespace

DatasetIndexes build_indexes(std::span<const UserId> users, std::span<const Post> posts,
                             std::span<const UserPair> edges) {
  DatasetIndexes idx;
  for (UserId u : users) idx.degree[u] = 0;
  for (const auto& e : edges) {
    ++idx.degree[e.first];
    ++idx.degree[e.second];
  }
  for (const auto& p : posts) {
    for (const auto& h : p.hashtags) {
      ++idx.user_hashtags[p.author][h];
      ++idx.hashtag_users[h][p.author];
    }
    for (const auto& t : p.tokens) ++idx.user_tokens[p.author][t];
    if (p.has_image()) {
      ++idx.user_images[p.author];
      for (const auto& ip : p.image_probs) ++idx.user_image_categories[p.author][ip.category];
    }
    if (p.location) ++idx.user_locations[p.author][*p.location];
  }
  return idx;
}

Dataset::Dataset(std::vector<UserId> users, std::vector<Post> posts, std::vector<UserPair> edges)
    : users_(std::move(users)), posts_(std::move(posts)), edges_(std::move(edges)) {
  for (const auto& p : posts_) users_.push_back(p.author);
  std::sort(users_.begin(), users_.end());
  users_.erase(std::unique(users_.begin(), users_.end()), users_.end());

  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (const auto& e : edges_) {
    if (e.first == e.second) throw DataError("self-loop on user " + std::to_string(raw(e.first)));
    if (!contains(e.first) || !contains(e.second))
      throw DataError("edge " + std::to_string(raw(e.first)) + "," + std::to_string(raw(e.second)) +
                      " references an unknown user");
  }
  std::unordered_set<std::size_t> ids;
  for (const auto& p : posts_) {
    if (!ids.insert(p.id).second) throw DataError("duplicate post id " + std::to_string(p.id));
    validate_post(p);
  }
  indexes_ = build_indexes(users_, posts_, edges_);
  for (const auto& [u, deg] : indexes_.degree) {
    followers_[u] = deg;
    follower_population_.push_back(deg);
  }
  std::sort(follower_population_.begin(), follower_population_.end());
}

Dataset Dataset::derive(std::vector<UserId> users, std::vector<Post> posts, std::vector<UserPair> edges) const {
  Dataset out(std::move(users), std::move(posts), std::move(edges));
  for (auto& [u, count] : out.followers_) {
    if (auto it = followers_.find(u); it != followers_.end()) count = it->second;
  }
  out.follower_population_ = follower_population_;
  return out;
}

bool Dataset::contains(UserId u) const { return std::binary_search(users_.begin(), users_.end(), u); }

bool Dataset::adjacent(UserPair p) const { return std::binary_search(edges_.begin(), edges_.end(), p); }

std::size_t Dataset::degree(UserId u) const {
  auto it = indexes_.degree.find(u);
  return it == indexes_.degree.end() ? 0 : it->second;
}

std::size_t Dataset::followers(UserId u) const {
  auto it = followers_.find(u);
  return it == followers_.end() ? 0 : it->second;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (current.size() >= 2) tokens.push_back(current);
    current.clear();
  };
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (c >= 0x80 || std::isalnum(c)) {
      current.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

namespace {

UserId parse_user(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
    throw DataError(where + ": user id must be a non-negative integer");
  return UserId{v.get<std::uint64_t>()};
}

Post parse_post(const std::string& line, std::size_t line_no, const std::string& where) {
  json rec;
  try {
    rec = json::parse(line);
  } catch (const json::parse_error& e) {
    throw DataError(where + ": malformed record: " + e.what());
  }
  if (!rec.is_object() || !rec.contains("user_id")) throw DataError(where + ": record needs a user_id");
  Post p;
  p.id = line_no;
  try {
    if (rec.contains("post_id")) {
      if (!rec["post_id"].is_number_unsigned()) throw DataError(where + ": post_id must be a non-negative integer");
      p.id = rec["post_id"].get<std::size_t>();
    }
    p.author = parse_user(rec["user_id"], where);
    if (rec.contains("hashtags") && !rec["hashtags"].is_null())
      p.hashtags = rec["hashtags"].get<std::vector<std::string>>();
    if (rec.contains("text") && !rec["text"].is_null()) p.text = rec["text"].get<std::string>();
    if (rec.contains("image_probs") && !rec["image_probs"].is_null()) {
      for (const auto& entry : rec["image_probs"]) {
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number_integer() || !entry[1].is_number())
          throw DataError(where + ": image_probs entries must be [category, probability]");
        auto cat = entry[0].get<std::int64_t>();
        if (cat < 0 || cat >= kSceneCategories)
          throw DataError(where + ": image category " + std::to_string(cat) + " out of range");
        p.image_probs.push_back({static_cast<std::uint32_t>(cat), entry[1].get<double>()});
      }
    }
    if (rec.contains("location_id") && !rec["location_id"].is_null()) {
      if (!rec["location_id"].is_number_integer()) throw DataError(where + ": location_id must be an integer");
      p.location = rec["location_id"].get<std::int64_t>();
    }
  } catch (const json::exception& e) {
    throw DataError(where + ": " + e.what());
  }
  p.tokens = tokenize(p.text);
  try {
    validate_post(p);
  } catch (const DataError& e) {
    throw DataError(where + ": " + e.what());
  }
  return p;
}

std::uint64_t parse_id_field(std::string_view field, const std::string& where) {
  while (!field.empty() && std::isspace(static_cast<unsigned char>(field.front()))) field.remove_prefix(1);
  while (!field.empty() && std::isspace(static_cast<unsigned char>(field.back()))) field.remove_suffix(1);
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty())
    throw DataError(where + ": expected a decimal user id, got '" + std::string(field) + "'");
  return value;
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& posts_path, const std::filesystem::path& edges_path) {
  std::ifstream posts_in(posts_path);
  if (!posts_in) throw DataError("cannot open posts file " + posts_path.string());
  std::vector<Post> posts;
  std::unordered_set<std::size_t> ids;
  std::string line;
  for (std::size_t line_no = 1; std::getline(posts_in, line); ++line_no) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string where = posts_path.string() + ":" + std::to_string(line_no);
    Post p = parse_post(line, line_no, where);
    if (!ids.insert(p.id).second) throw DataError(where + ": duplicate post id " + std::to_string(p.id));
    posts.push_back(std::move(p));
  }

  std::ifstream edges_in(edges_path);
  if (!edges_in) throw DataError("cannot open edges file " + edges_path.string());
  std::set<UserId> authors;
  for (const auto& p : posts) authors.insert(p.author);
  std::vector<UserPair> edges;
  for (std::size_t line_no = 1; std::getline(edges_in, line); ++line_no) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string where = edges_path.string() + ":" + std::to_string(line_no);
    auto comma = line.find(',');
    if (comma == std::string::npos) throw DataError(where + ": expected 'u,v'");
    std::string_view view(line);
    UserId u{parse_id_field(view.substr(0, comma), where)};
    UserId v{parse_id_field(view.substr(comma + 1), where)};
    if (u == v) throw DataError(where + ": self-loop on user " + std::to_string(raw(u)));
    if (!authors.contains(u) || !authors.contains(v))
      throw DataError(where + ": edge references unknown user");
    edges.push_back(UserPair::of(u, v));
  }
  return Dataset({}, std::move(posts), std::move(edges));
}

void write_posts(const std::filesystem::path& path, const Dataset& d) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& p : d.posts()) {
    json rec;
    rec["post_id"] = p.id;
    rec["user_id"] = raw(p.author);
    rec["hashtags"] = p.hashtags;
    rec["text"] = p.text;
    if (p.has_image()) {
      json probs = json::array();
      for (const auto& ip : p.image_probs) probs.push_back(json::array({ip.category, ip.probability}));
      rec["image_probs"] = std::move(probs);
    }
    if (p.location) rec["location_id"] = *p.location;
    out << rec.dump() << '\n';
  }
}

void write_edges(const std::filesystem::path& path, const Dataset& d) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& e : d.edges()) out << raw(e.first) << ',' << raw(e.second) << '\n';
}

std::size_t nearest_rank(std::span<const std::size_t> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("percentile of an empty sequence");
  auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(p * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

Dataset filter_accounts(const Dataset& d, double low_pct, double high_pct) {
  if (d.users().empty() || d.follower_population().empty()) return d;
  std::size_t low = nearest_rank(d.follower_population(), low_pct);
  std::size_t high = nearest_rank(d.follower_population(), high_pct);
  std::vector<UserId> kept;
  for (UserId u : d.users()) {
    std::size_t f = d.followers(u);
    if (f >= low && f <= high) kept.push_back(u);
  }
  auto keep = [&](UserId u) { return std::binary_search(kept.begin(), kept.end(), u); };
  std::vector<Post> posts;
  for (const auto& p : d.posts())
    if (keep(p.author)) posts.push_back(p);
  std::vector<UserPair> edges;
  for (const auto& e : d.edges())
    if (keep(e.first) && keep(e.second)) edges.push_back(e);
  return d.derive(std::move(kept), std::move(posts), std::move(edges));
}

namespace {

template <class Field>
Dataset filter_items(const Dataset& d, Field field, std::size_t min_users, std::size_t max_users) {
  std::map<std::string, std::set<UserId>> users_of;
  for (const auto& p : d.posts())
    for (const auto& item : p.*field) users_of[item].insert(p.author);
  std::set<std::string> keep;
  for (const auto& [item, us] : users_of)
    if (us.size() >= min_users && us.size() <= max_users) keep.insert(item);
  std::vector<Post> posts = d.posts();
  for (auto& p : posts) {
    auto& items = p.*field;
    std::erase_if(items, [&](const std::string& s) { return !keep.contains(s); });
  }
  return d.derive(d.users(), std::move(posts), d.edges());
}

}  // namespace

Dataset filter_hashtags(const Dataset& d, std::size_t min_users, std::size_t max_users) {
  return filter_items(d, &Post::hashtags, min_users, max_users);
}

Dataset filter_tokens(const Dataset& d, std::size_t min_users, std::size_t max_users) {
  return filter_items(d, &Post::tokens, min_users, max_users);
}

std::set<UserId> filter_location_users(const Dataset& d, std::size_t min_distinct, std::size_t min_checkins) {
  std::set<UserId> out;
  for (const auto& [u, visits] : d.indexes().user_locations) {
    std::size_t total = 0;
    for (const auto& [loc, n] : visits) total += n;
    if (visits.size() >= min_distinct && total >= min_checkins) out.insert(u);
  }
  return out;
}

Dataset drop_posts(const Dataset& d, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0) || fraction >= 1.0) throw ConfigError("post removal fraction must lie in [0, 1)");
  const std::size_t n = d.posts().size();
  auto remove = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
  if (remove == 0) return d;
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng = stream(seed, "drop_posts");
  // Partial Fisher-Yates: the first `remove` slots become the removed set.
  for (std::size_t i = 0; i < remove; ++i) std::swap(order[i], order[i + uniform_index(rng, n - i)]);
  std::vector<bool> removed(n, false);
  for (std::size_t i = 0; i < remove; ++i) removed[order[i]] = true;
  std::vector<Post> posts;
  posts.reserve(n - remove);
  for (std::size_t i = 0; i < n; ++i)
    if (!removed[i]) posts.push_back(d.posts()[i]);
  return d.derive(d.users(), std::move(posts), d.edges());
}

bool PairSample::any_available() const noexcept {
  return std::any_of(available.begin(), available.end(), [](bool b) { return b; });
}

namespace {

template <class K, class V>
bool maps_intersect(const std::map<K, V>& a, const std::map<K, V>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (i->first < j->first) ++i;
    else if (j->first < i->first) ++j;
    else return true;
  }
  return false;
}

}  // namespace

std::array<bool, kModalityCount> modality_availability(const Dataset& d, UserPair p,
                                                       const std::set<UserId>& location_eligible) {
  const auto& idx = d.indexes();
  std::array<bool, kModalityCount> a{};
  auto hu = idx.user_hashtags.find(p.first);
  auto hv = idx.user_hashtags.find(p.second);
  a[index_of(Modality::Hashtag)] =
      hu != idx.user_hashtags.end() && hv != idx.user_hashtags.end() && maps_intersect(hu->second, hv->second);
  a[index_of(Modality::Text)] = idx.user_tokens.contains(p.first) && idx.user_tokens.contains(p.second);
  a[index_of(Modality::Image)] = idx.user_images.contains(p.first) && idx.user_images.contains(p.second);
  a[index_of(Modality::Location)] = location_eligible.contains(p.first) && location_eligible.contains(p.second);
  a[index_of(Modality::Network)] = d.degree(p.first) > 0 && d.degree(p.second) > 0;
  return a;
}

std::vector<PairSample> build_pairs(const Dataset& d, std::uint64_t seed, const LocationRules& rules) {
  auto eligible = filter_location_users(d, rules.min_distinct, rules.min_checkins);
  std::vector<PairSample> out;
  for (const auto& e : d.edges()) {
    PairSample s{e, 1, modality_availability(d, e, eligible)};
    if (s.any_available()) out.push_back(s);
  }
  const std::size_t friends = out.size();

  std::vector<PairSample> candidates;
  const auto& users = d.users();
  for (std::size_t i = 0; i < users.size(); ++i) {
    for (std::size_t j = i + 1; j < users.size(); ++j) {
      UserPair p{users[i], users[j]};
      if (d.adjacent(p)) continue;
      PairSample s{p, 0, modality_availability(d, p, eligible)};
      if (s.any_available()) candidates.push_back(s);
    }
  }
  if (candidates.size() < friends)
    throw DataError("not enough stranger pairs: need " + std::to_string(friends) + ", have " +
                    std::to_string(candidates.size()) + " (deficit " +
                    std::to_string(friends - candidates.size()) + ")");
  Rng rng = stream(seed, "strangers");
  for (std::size_t i = 0; i < friends; ++i)
    std::swap(candidates[i], candidates[i + uniform_index(rng, candidates.size() - i)]);
  candidates.resize(friends);
  std::sort(candidates.begin(), candidates.end(),
            [](const PairSample& a, const PairSample& b) { return a.pair < b.pair; });
  out.insert(out.end(), candidates.begin(), candidates.end());
  return out;
}

std::vector<PairSample> refresh_availability(const Dataset& d, std::span<const PairSample> pairs,
                                             const LocationRules& rules) {
  auto eligible = filter_location_users(d, rules.min_distinct, rules.min_checkins);
  std::vector<PairSample> out(pairs.begin(), pairs.end());
  for (auto& s : out) s.available = modality_availability(d, s.pair, eligible);
  return out;
}

}  // namespace linkinfer
