#pragma once

// Union-bound symbol error rate and the two SNR conventions used to compare
// formats at equal spectral efficiency.
//
// With T_s = 1, c = 1 and R_b = log2(M) / T_s:
//   electrical  gamma = 10 log10( E_s / (log2(M) N0) )          (E_b = E_s / log2 M)
//   optical     gamma = 10 log10( E[s1] / sqrt(log2(M) N0) )    (c and T_s cancel)

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imdd/signal_space.hpp"

namespace imdd::analysis {

enum class SnrDefinition { electrical_eb, optical_po };
enum class BoundMode { nearest_neighbor, full };

std::string_view to_string(SnrDefinition d) noexcept;
std::string_view to_string(BoundMode m) noexcept;
/// Accepts "electrical" / "optical" (and the enum spellings).
SnrDefinition parse_definition(std::string_view text);

struct SnrPoint {
  double value_db;
  SnrDefinition definition;
};

/// a - b in dB; throws Error(invalid_argument) when the definitions differ.
double difference_db(const SnrPoint& a, const SnrPoint& b);

/// Gaussian tail probability P(X > x), X ~ N(0, 1).
double q_function(double x);

/// nearest_neighbor: (2K/M) Q(d_min / sqrt(2 N0));
/// full: (1/M) sum_i sum_{j != i} Q(|s_i - s_j| / sqrt(2 N0)), clipped to 1.
double ser_union_bound(const Constellation& c, double n0, BoundMode mode);

SnrPoint snr_from_n0(const Constellation& c, double n0, SnrDefinition definition);
double n0_from_snr(const Constellation& c, const SnrPoint& snr);

/// SNR at which the bound equals `target_ser`, found by bisection on
/// log N0 to 1e-4 dB. Throws Error(bracketing) if unreachable.
SnrPoint required_snr(const Constellation& c, double target_ser, SnrDefinition definition, BoundMode mode);

struct BoundRow {
  SnrPoint snr;
  double ser_nearest;
  double ser_full;
};

std::vector<BoundRow> bound_curve(const Constellation& c, std::span<const double> snr_db,
                                  SnrDefinition definition);

/// Parses "start:stop:step" (inclusive stop) or a single value.
std::vector<double> parse_db_grid(std::string_view spec);

struct GainTable {
  SnrDefinition definition;
  BoundMode mode;
  double target_ser;
  std::vector<std::string> names;
  std::vector<double> required_db;
  /// Set when the entries do not share one spectral efficiency.
  bool mixed_spectral_efficiency = false;

  /// Gain of entry a over entry b: required(b) - required(a).
  double gain(std::size_t a, std::size_t b) const { return required_db[b] - required_db[a]; }
};

GainTable gain_table(std::span<const Constellation> constellations, double target_ser, SnrDefinition definition,
                     BoundMode mode);

}  // namespace imdd::analysis
