#pragma once

// Published dB gains at equal spectral efficiency and their recomputation
// from the catalog by union-bound inversion (optionally by simulation).

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "imdd/analysis.hpp"
#include "imdd/simulator.hpp"

namespace imdd::reproduce {

struct ReferenceGain {
  analysis::SnrDefinition definition;
  const char* format;  ///< catalog id of the better format
  const char* over;    ///< catalog id of the baseline
  double gain_db;
};

/// Electrical rows first, then optical; both at SER 1e-6.
std::span<const ReferenceGain> reference_gains();

inline constexpr double kGainToleranceDb = 0.05;

struct ReproducedGain {
  ReferenceGain reference;
  double nearest_db;  ///< nearest-neighbor approximation
  double full_db;     ///< full union bound
  std::optional<double> mc_db;

  bool nearest_matches() const { return std::abs(nearest_db - reference.gain_db) <= kGainToleranceDb; }
  bool full_matches() const { return std::abs(full_db - reference.gain_db) <= kGainToleranceDb; }
};

struct McOptions {
  simulator::StoppingRule stop;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

std::vector<ReproducedGain> reproduce_gains(double target_ser, const std::optional<McOptions>& mc = std::nullopt);

}  // namespace imdd::reproduce
