#pragma once

#include <map>
#include <string>

#include "nsch/sim.hpp"

namespace nsch {

// Flat key=value text: one `key = value` pair per line, `#` starts a
// comment, blank lines are ignored. Later duplicates win. Throws
// ConfigError on lines without '='.
std::map<std::string, std::string> parse_config_text(const std::string& text);

// Applies pairs over the built-in defaults. Unknown keys, missing values
// and unparsable values are collected and reported together in a single
// ConfigError.
SimConfig make_sim_config(const std::map<std::string, std::string>& kv);

// Canonical `key = value` echo of every resolved setting, one per line, in
// the documented key order; reparseable by parse_config_text.
std::string echo_config(const SimConfig& cfg);

}  // namespace nsch
