#ifndef SSAMC_CONFIG_HPP
#define SSAMC_CONFIG_HPP

#include <filesystem>
#include <string>

#include "ssamc/tracker.hpp"

namespace ssamc {

/// Full run description: every tracker parameter plus the I/O paths. Parsed
/// from flat "key=value" text, one key per line, '#' comments. Unknown keys
/// are rejected.
struct RunConfig {
  TrackerConfig tracker;
  bool dump_annf = false;
  std::string frames_dir;
  std::string out_dir;
  double init_x = -1, init_y = -1, init_w = -1, init_h = -1;

  Rect init_box() const { return Rect{init_x, init_y, init_w, init_h}; }
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Range-checks every parameter; throws naming the offending key.
void validate_config(const RunConfig& cfg);

/// Round-trip serialization: parsing the output reproduces the config
/// exactly (doubles use shortest round-trip formatting).
std::string serialize_config(const RunConfig& cfg);

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace ssamc

#endif
