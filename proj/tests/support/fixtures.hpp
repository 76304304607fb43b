#pragma once

#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>

#include "votesim/scenario.hpp"

namespace votesim::testing {

inline std::filesystem::path scenario_dir() { return VOTESIM_TEST_SCENARIO_DIR; }

inline std::string scenario_text(const std::string& name) {
    std::ifstream in(scenario_dir() / (name + ".scn"));
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Loaded once per process; scenarios are immutable.
inline std::shared_ptr<const Scenario> shipped(const std::string& name) {
    static std::map<std::string, std::shared_ptr<const Scenario>> cache;
    auto& s = cache[name];
    if (!s) s = std::make_shared<const Scenario>(load_scenario(scenario_dir() / (name + ".scn")));
    return s;
}

inline const char* const kShipped[] = {"same-baggage", "jackson-favored", "kingston-favored"};

}  // namespace votesim::testing
