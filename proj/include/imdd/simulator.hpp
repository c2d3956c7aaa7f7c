#pragma once

// Monte Carlo symbol error rate over the vector AWGN channel y = s + n with
// n ~ N(0, N0/2) per signal-space dimension and minimum-distance detection.
//
// Randomness is counter based: symbol k of batch b at grid point p draws
// from Philox blocks keyed by the seed with counter (k, b, p, word). Batches
// are accumulated in index order and the stopping rule is checked at batch
// boundaries, so results do not depend on the worker count.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "imdd/analysis.hpp"
#include "imdd/signal_space.hpp"

namespace imdd::simulator {

inline constexpr std::string_view kGaussianMethod = "box-muller over philox4x32-10";

struct StoppingRule {
  std::uint64_t min_errors = 200;
  std::uint64_t max_symbols = 1'000'000'000;
};

struct SimConfig {
  std::vector<double> snr_db;
  analysis::SnrDefinition definition = analysis::SnrDefinition::electrical_eb;
  StoppingRule stop;
  std::uint64_t seed = 1;
  std::size_t batch_size = 1u << 16;
  unsigned threads = 1;

  void validate() const;
};

enum class EstimateStatus {
  min_errors_reached,
  symbol_budget_exhausted,
  no_errors,  ///< budget exhausted without a single error; SER reported as 0
};

std::string_view to_string(EstimateStatus s) noexcept;

struct SerEstimate {
  analysis::SnrPoint snr;
  double n0;
  std::uint64_t errors;
  std::uint64_t trials;
  double ser;
  double ci95_halfwidth;
  EstimateStatus status;

  bool reliable() const noexcept { return status != EstimateStatus::no_errors; }
};

/// argmin_i |y - s_i|, smallest index on ties. `y` must have c.dim() entries.
std::size_t ml_detect(std::span<const double> y, const Constellation& c);

/// Unit-variance noise and uniform symbol indices for one batch.
struct BatchDraws {
  std::vector<std::uint32_t> symbols;
  std::vector<double> nx, ny, nz;  ///< zero beyond the constellation dimension
};

void draw_batch(std::uint64_t seed, std::uint32_t point_index, std::uint32_t batch_index, std::size_t m,
                std::size_t dim, std::size_t count, BatchDraws& out);

/// Symbol errors for one batch after scaling the unit noise by `sigma`.
std::uint64_t count_batch_errors(const Constellation& c, const BatchDraws& draws, double sigma);

SerEstimate simulate_point(const Constellation& c, double n0, const StoppingRule& stop, std::uint64_t seed,
                           std::uint32_t point_index, std::size_t batch_size = 1u << 16, unsigned threads = 1,
                           analysis::SnrDefinition definition = analysis::SnrDefinition::electrical_eb);

/// One estimate per grid point, grid index used as the point index.
std::vector<SerEstimate> simulate_curve(const Constellation& c, const SimConfig& config);

/// SNR where the simulated SER crosses `target`: simulates at the bound's
/// crossing and at offsets of +-`span_db`, then interpolates log10(SER)
/// linearly by weighted least squares.
struct Crossing {
  analysis::SnrPoint snr;
  std::vector<SerEstimate> samples;
};

Crossing estimate_crossing(const Constellation& c, double target_ser, analysis::SnrDefinition definition,
                           const StoppingRule& stop, std::uint64_t seed, unsigned threads = 1,
                           double span_db = 0.25);

}  // namespace imdd::simulator
