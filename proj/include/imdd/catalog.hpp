#pragma once

// Reference constellations, all normalized to unit minimum distance.
//
//   ook           {(0), (1)}                                  baseband, eta 1
//   qpsk          {(1, +-1/2, +-1/2)}                          eta 1
//   c4            regular tetrahedron with a vertex at the origin, eta 1
//   8psk          biased 8-PSK ring                            eta 3/2
//   8qam          star 8-QAM with constant bias (1+sqrt3)/sqrt2
//   8qam-varbias  star 8-QAM whose inner ring sits at bias 1
//   c-pe-8        8 points minimizing average electrical power
//   c-po-8        8 points minimizing average optical power (4-decimal point)
//   l8            best 8-point A3 lattice subset

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imdd/signal_space.hpp"

namespace imdd::catalog {

// optimized: cone packings and lattice subsets; subcarrier_reference: known
// subcarrier formats; classical: baseband on-off keying.
enum class Provenance { optimized, subcarrier_reference, classical };

std::string_view to_string(Provenance p) noexcept;

struct ExpectedMetrics {
  double d_min;
  double energy;        ///< mean squared norm
  double dc_amplitude;  ///< mean s1
  std::size_t kissing;
};

struct CatalogEntry {
  std::string id;
  Constellation constellation;
  Provenance provenance;
  /// Tolerance for unit d_min and cone membership checks on this entry.
  double tolerance;
  std::optional<ExpectedMetrics> expected;
  /// Set when construction had to adjust the literal coordinates.
  std::string note;
};

struct Listing {
  std::string id;
  std::size_t size;
  double spectral_efficiency;
  BandwidthModel bandwidth_model;
};

/// Throws Error(catalog_miss) listing the valid ids.
const CatalogEntry& get(std::string_view id);
std::vector<Listing> list();
const std::vector<std::string>& ids();

}  // namespace imdd::catalog
