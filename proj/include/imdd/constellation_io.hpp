#pragma once

// JSON interchange for constellations:
//   {"name": string, "bandwidth_model": "baseband"|"subcarrier",
//    "points": [[number, ...], ...]}
// Each point is written with `dim()` coordinates and round-trip precision.

#include <filesystem>
#include <string>

#include "imdd/signal_space.hpp"

namespace imdd {

std::string to_json(const Constellation& c, int indent = 2);
Constellation constellation_from_json(const std::string& text);

void save_constellation(const Constellation& c, const std::filesystem::path& path);
Constellation load_constellation(const std::filesystem::path& path);

}  // namespace imdd
