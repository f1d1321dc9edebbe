#pragma once

// INI configuration: every tunable default of the generator and the
// experiment pipeline, grouped into sections.

#include <filesystem>
#include <string>

#include "linkinfer/pipeline.hpp"
#include "linkinfer/synth.hpp"

namespace linkinfer {

struct Config {
  SynthConfig synth;
  ExperimentConfig experiment;
};

/// Missing keys keep their defaults. Unknown sections or keys and
/// unparsable values throw ConfigError.
Config load_config(const std::filesystem::path& path);
Config parse_config(const std::string& text);
void save_config(const std::filesystem::path& path, const Config& cfg);
std::string format_config(const Config& cfg);

}  // namespace linkinfer
