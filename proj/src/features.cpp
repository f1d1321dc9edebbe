#include "linkinfer/features.hpp"

#include <fstream>
#include <map>
#include <set>

#include "linkinfer/csv.hpp"
#include "linkinfer/imgfeat.hpp"
#include "linkinfer/random.hpp"
#include "linkinfer/tagfeat.hpp"
#include "linkinfer/textfeat.hpp"

namespace linkinfer {

std::size_t FeatureTable::available_count() const {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.has_value();
  return n;
}

LabeledRows gather(const FeatureTable& t, std::span<const PairSample> pairs) {
  if (t.rows.size() != pairs.size()) throw std::invalid_argument("feature table is not aligned with the pair list");
  LabeledRows out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!t.rows[i]) continue;
    out.pair_index.push_back(i);
    out.rows.push_back(*t.rows[i]);
    out.labels.push_back(pairs[i].label);
  }
  return out;
}

namespace {

std::vector<std::string> distance_columns() { return {kDistanceNames.begin(), kDistanceNames.end()}; }

std::vector<double> to_vector(const DistanceFeatures& f) { return {f.values.begin(), f.values.end()}; }

}  // namespace

FeatureTable hashtag_table(const Dataset& d, std::span<const PairSample> pairs) {
  FeatureTable t{Modality::Hashtag, {kHashtagFeatureNames.begin(), kHashtagFeatureNames.end()}, {}};
  const auto idx = build_hashtag_index(d);
  for (const auto& s : pairs) {
    if (!share_hashtag(idx, s.pair)) {
      t.rows.emplace_back();
      continue;
    }
    auto f = hashtag_features(idx, s.pair);
    t.rows.emplace_back(std::vector<double>(f.begin(), f.end()));
  }
  return t;
}

FeatureTable text_table(const Dataset& d, std::span<const PairSample> pairs) {
  FeatureTable t{Modality::Text, distance_columns(), {}};
  const auto m = tfidf(d);
  for (const auto& s : pairs) {
    auto f = text_features(m, s.pair);
    if (f) t.rows.emplace_back(to_vector(*f));
    else t.rows.emplace_back();
  }
  return t;
}

FeatureTable image_table(const Dataset& d, std::span<const PairSample> pairs, double threshold,
                         std::size_t categories) {
  FeatureTable t{Modality::Image, {}, {}};
  for (std::size_t c = 0; c < categories; ++c) t.columns.push_back("min_count_" + std::to_string(c));
  t.columns.insert(t.columns.end(), {"x_cosine", "x_F_maxcat", "x_E_maxcat"});
  const auto idx = build_category_index(d, threshold, categories);
  for (const auto& s : pairs) t.rows.push_back(image_features(idx, s.pair));
  return t;
}

FeatureTable location_table(const LocationEmbedding& e, std::span<const PairSample> pairs) {
  FeatureTable t{Modality::Location, distance_columns(), {}};
  for (const auto& f : location_features(e, pairs)) {
    if (f) t.rows.emplace_back(to_vector(*f));
    else t.rows.emplace_back();
  }
  return t;
}

FeatureTable network_table(const NetworkEmbedding& e, std::span<const PairSample> pairs, std::uint64_t seed) {
  FeatureTable t{Modality::Network, {}, network_features(e, pairs)};
  for (std::size_t i = 0; i < e.vectors.dim; ++i) t.columns.push_back("h" + std::to_string(i));
  const std::set<UserPair> partial(e.split.partial.begin(), e.split.partial.end());
  std::size_t friends = 0;
  std::vector<std::size_t> strangers;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!t.rows[i]) continue;
    if (pairs[i].label == 1) {
      if (partial.count(pairs[i].pair)) t.rows[i].reset();
      else ++friends;
    } else {
      strangers.push_back(i);
    }
  }
  if (strangers.size() > friends) {
    Rng rng = stream(seed, "network-strangers");
    shuffle(std::span(strangers), rng);
    for (std::size_t k = friends; k < strangers.size(); ++k) t.rows[strangers[k]].reset();
  }
  return t;
}

void save_table(const std::filesystem::path& path, const FeatureTable& t, std::span<const PairSample> pairs) {
  if (t.rows.size() != pairs.size()) throw std::invalid_argument("feature table is not aligned with the pair list");
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "u,v,label";
  for (const auto& c : t.columns) out << ',' << c;
  out << '\n';
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!t.rows[i]) continue;
    out << raw(pairs[i].pair.first) << ',' << raw(pairs[i].pair.second) << ',' << pairs[i].label;
    for (double x : *t.rows[i]) out << ',' << csv::format(x);
    out << '\n';
  }
}

FeatureTable load_table(const std::filesystem::path& path, Modality m, std::span<const PairSample> pairs) {
  std::ifstream in(path);
  if (!in) throw DataError("missing feature table " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty file");
  auto header = csv::split(line);
  if (header.size() < 4) throw DataError(path.string() + ":1: header needs u,v,label and feature columns");
  FeatureTable t;
  t.modality = m;
  for (std::size_t i = 3; i < header.size(); ++i) t.columns.emplace_back(header[i]);
  t.rows.assign(pairs.size(), std::nullopt);
  std::map<UserPair, std::size_t> where;
  for (std::size_t i = 0; i < pairs.size(); ++i) where[pairs[i].pair] = i;
  for (std::size_t line_no = 2; std::getline(in, line); ++line_no) {
    const std::string at = path.string() + ":" + std::to_string(line_no);
    auto f = csv::split(line);
    if (f.size() != header.size()) throw DataError(at + ": expected " + std::to_string(header.size()) + " fields");
    try {
      auto p = UserPair::of(UserId{csv::parse_uint(f[0])}, UserId{csv::parse_uint(f[1])});
      auto it = where.find(p);
      if (it == where.end()) throw DataError(at + ": pair is not in the snapshot pair list");
      std::vector<double> row;
      row.reserve(f.size() - 3);
      for (std::size_t i = 3; i < f.size(); ++i) row.push_back(csv::parse_double(f[i]));
      t.rows[it->second] = std::move(row);
    } catch (const std::invalid_argument& e) {
      throw DataError(at + ": " + e.what());
    }
  }
  return t;
}

void save_pairs(const std::filesystem::path& path, std::span<const PairSample> pairs) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "u,v,label,H,T,I,L,E\n";
  for (const auto& s : pairs) {
    out << raw(s.pair.first) << ',' << raw(s.pair.second) << ',' << s.label;
    for (bool a : s.available) out << ',' << (a ? 1 : 0);
    out << '\n';
  }
}

std::vector<PairSample> load_pairs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("missing pair list " + path.string());
  std::string line;
  std::getline(in, line);
  std::vector<PairSample> out;
  for (std::size_t line_no = 2; std::getline(in, line); ++line_no) {
    auto f = csv::split(line);
    try {
      if (f.size() != 3 + kModalityCount) throw std::invalid_argument("expected 8 fields");
      PairSample s;
      s.pair = UserPair::of(UserId{csv::parse_uint(f[0])}, UserId{csv::parse_uint(f[1])});
      s.label = static_cast<int>(csv::parse_uint(f[2]));
      for (std::size_t m = 0; m < kModalityCount; ++m) s.available[m] = csv::parse_uint(f[3 + m]) != 0;
      out.push_back(s);
    } catch (const std::invalid_argument& e) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<int> labels_of(std::span<const PairSample> pairs) {
  std::vector<int> y;
  y.reserve(pairs.size());
  for (const auto& s : pairs) y.push_back(s.label);
  return y;
}

}  // namespace linkinfer
