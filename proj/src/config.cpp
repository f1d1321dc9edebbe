#include "linkinfer/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <set>
#include <sstream>
#include <variant>

#include "linkinfer/csv.hpp"

namespace linkinfer {

namespace {

namespace pt = boost::property_tree;

static_assert(std::is_same_v<std::size_t, std::uint64_t>);
using Field = std::variant<double*, std::size_t*, bool*, std::vector<double>*>;

struct Binding {
  const char* key;  // "section.name"
  Field field;
};

std::vector<Binding> bindings(Config& c) {
  auto& s = c.synth;
  auto& e = c.experiment;
  auto& le = e.location_embedding;
  auto& ne = e.network_embedding;
  return {
      {"experiment.seed", &e.seed},
      {"synth.n_users", &s.n_users},
      {"synth.n_communities", &s.n_communities},
      {"synth.p_in", &s.p_in},
      {"synth.p_out", &s.p_out},
      {"synth.posts_per_user", &s.posts_per_user},
      {"synth.vocab_size", &s.vocab_size},
      {"synth.n_hashtags", &s.n_hashtags},
      {"synth.n_locations", &s.n_locations},
      {"synth.n_categories", &s.n_categories},
      {"synth.topic_concentration", &s.topic_concentration},
      {"synth.pair_signal_rate", &s.pair_signal_rate},
      {"synth.tokens_per_post", &s.tokens_per_post},
      {"synth.hashtags_per_post", &s.hashtags_per_post},
      {"synth.image_rate", &s.image_rate},
      {"synth.checkin_rate", &s.checkin_rate},
      {"filters.low_pct", &e.low_pct},
      {"filters.high_pct", &e.high_pct},
      {"filters.hashtag_min_users", &e.hashtag_min_users},
      {"filters.hashtag_max_users", &e.hashtag_max_users},
      {"filters.token_min_users", &e.token_min_users},
      {"filters.token_max_users", &e.token_max_users},
      {"filters.location_min_distinct", &e.location_rules.min_distinct},
      {"filters.location_min_checkins", &e.location_rules.min_checkins},
      {"image.threshold", &e.image_threshold},
      {"image.categories", &e.image_categories},
      {"location.walks_per_node", &le.walk.walks_per_node},
      {"location.walk_length", &le.walk.walk_length},
      {"location.dim", &le.skipgram.dim},
      {"location.window", &le.skipgram.window},
      {"location.negatives", &le.skipgram.negatives},
      {"location.epochs", &le.skipgram.epochs},
      {"location.learning_rate", &le.skipgram.learning_rate},
      {"network.train_edge_fraction", &e.train_edge_fraction},
      {"network.walks_per_node", &ne.walk.walks_per_node},
      {"network.walk_length", &ne.walk.walk_length},
      {"network.p", &ne.walk.p},
      {"network.q", &ne.walk.q},
      {"network.dim", &ne.skipgram.dim},
      {"network.window", &ne.skipgram.window},
      {"network.negatives", &ne.skipgram.negatives},
      {"network.epochs", &ne.skipgram.epochs},
      {"network.learning_rate", &ne.skipgram.learning_rate},
      {"forest.n_trees", &e.forest.n_trees},
      {"forest.max_features", &e.forest.max_features},
      {"forest.bootstrap", &e.forest.bootstrap},
      {"evaluation.folds", &e.folds},
      {"evaluation.inner_split", &e.inner_split},
      {"robustness.fractions", &e.removal_fractions},
      {"robustness.seeds", &e.removal_seeds},
  };
}

void assign(const Field& field, const std::string& key, const std::string& text) {
  try {
    std::visit(
        [&](auto* p) {
          using T = std::remove_pointer_t<decltype(p)>;
          if constexpr (std::is_same_v<T, double>) {
            *p = csv::parse_double(text);
          } else if constexpr (std::is_same_v<T, bool>) {
            if (text == "true" || text == "1") *p = true;
            else if (text == "false" || text == "0") *p = false;
            else throw std::invalid_argument("expected true or false");
          } else if constexpr (std::is_same_v<T, std::vector<double>>) {
            p->clear();
            for (auto part : csv::split(text))
              if (!part.empty()) p->push_back(csv::parse_double(part));
          } else {
            *p = static_cast<T>(csv::parse_uint(text));
          }
        },
        field);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("config key " + key + ": " + e.what());
  }
}

std::string render(const Field& field) {
  return std::visit(
      [](auto* p) -> std::string {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, double>) {
          return csv::format(*p);
        } else if constexpr (std::is_same_v<T, bool>) {
          return *p ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::vector<double>>) {
          std::string s;
          for (std::size_t i = 0; i < p->size(); ++i) s += (i ? "," : "") + csv::format((*p)[i]);
          return s;
        } else {
          return std::to_string(*p);
        }
      },
      field);
}

}  // namespace

Config parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  Config cfg;
  auto binds = bindings(cfg);
  std::set<std::string> known;
  for (const auto& b : binds) known.insert(b.key);
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ConfigError("config key " + section + " is outside a section");
    for (const auto& [name, value] : body) {
      const std::string key = section + "." + name;
      if (!known.count(key)) throw ConfigError("unknown config key " + key);
    }
  }
  for (const auto& b : binds)
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(b.key, '.'))) assign(b.field, b.key, *v);
  cfg.synth.seed = cfg.experiment.seed;
  cfg.synth.validate();
  cfg.experiment.validate();
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string format_config(const Config& cfg) {
  Config copy = cfg;
  std::string out, section;
  for (const auto& b : bindings(copy)) {
    const std::string key = b.key;
    const auto dot = key.find('.');
    if (key.substr(0, dot) != section) {
      section = key.substr(0, dot);
      out += (out.empty() ? "[" : "\n[") + section + "]\n";
    }
    out += key.substr(dot + 1) + " = " + render(b.field) + "\n";
  }
  return out;
}

void save_config(const std::filesystem::path& path, const Config& cfg) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << format_config(cfg);
}

}  // namespace linkinfer
