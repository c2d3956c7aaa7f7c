#include "imdd/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "imdd/kernels.hpp"
#include "imdd/parallel.hpp"
#include "imdd/rng.hpp"

namespace imdd::simulator {
namespace {

struct SoaPoints {
  std::vector<double> x, y, z;

  explicit SoaPoints(const Constellation& c) {
    for (const auto& p : c.points()) {
      x.push_back(p[0]);
      y.push_back(p[1]);
      z.push_back(p[2]);
    }
  }

  kernels::PointsView view() const { return {x.data(), y.data(), z.data(), x.size()}; }
};

struct Scratch {
  BatchDraws draws;
  std::vector<double> rx, ry, rz;
  std::vector<std::uint32_t> decided;
};

std::uint64_t run_batch(const Constellation& c, const SoaPoints& soa, double sigma, std::uint64_t seed,
                        std::uint32_t point_index, std::uint32_t batch_index, std::size_t count, Scratch& s) {
  draw_batch(seed, point_index, batch_index, c.size(), c.dim(), count, s.draws);
  s.rx.resize(count);
  s.ry.resize(count);
  s.rz.resize(count);
  s.decided.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    const auto sym = s.draws.symbols[k];
    s.rx[k] = soa.x[sym] + sigma * s.draws.nx[k];
    s.ry[k] = soa.y[sym] + sigma * s.draws.ny[k];
    s.rz[k] = soa.z[sym] + sigma * s.draws.nz[k];
  }
  kernels::nearest(soa.view(), {s.rx.data(), s.ry.data(), s.rz.data(), count}, s.decided.data());
  std::uint64_t errors = 0;
  for (std::size_t k = 0; k < count; ++k) errors += s.decided[k] != s.draws.symbols[k];
  return errors;
}

}  // namespace

void SimConfig::validate() const {
  if (stop.min_errors < 1) throw Error(ErrorKind::invalid_argument, "min_errors must be at least 1");
  if (batch_size < 1) throw Error(ErrorKind::invalid_argument, "batch size must be positive");
  if (stop.max_symbols < batch_size) {
    throw Error(ErrorKind::invalid_argument, "max_symbols must be at least the batch size");
  }
}

std::string_view to_string(EstimateStatus s) noexcept {
  switch (s) {
    case EstimateStatus::min_errors_reached: return "min_errors_reached";
    case EstimateStatus::symbol_budget_exhausted: return "symbol_budget_exhausted";
    case EstimateStatus::no_errors: return "no_errors";
  }
  return "unknown";
}

std::size_t ml_detect(std::span<const double> y, const Constellation& c) {
  if (y.size() != c.dim()) {
    throw Error(ErrorKind::dimension_mismatch, "received vector has " + std::to_string(y.size()) +
                                                   " coordinates, constellation has " + std::to_string(c.dim()));
  }
  Vec3 r{0.0, 0.0, 0.0};
  std::copy(y.begin(), y.end(), r.begin());
  double best = std::numeric_limits<double>::infinity();
  std::size_t index = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double d = squared_distance(r, c[i]);
    if (d < best) {
      best = d;
      index = i;
    }
  }
  return index;
}

void draw_batch(std::uint64_t seed, std::uint32_t point_index, std::uint32_t batch_index, std::size_t m,
                std::size_t dim, std::size_t count, BatchDraws& out) {
  const rng::Key key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  out.symbols.resize(count);
  out.nx.assign(count, 0.0);
  out.ny.assign(count, 0.0);
  out.nz.assign(count, 0.0);
  for (std::size_t k = 0; k < count; ++k) {
    const auto kk = static_cast<std::uint32_t>(k);
    const auto sym_block = rng::philox4x32({kk, batch_index, point_index, 0u}, key);
    out.symbols[k] = static_cast<std::uint32_t>((static_cast<std::uint64_t>(sym_block[0]) * m) >> 32);
    const auto n01 = rng::box_muller(rng::philox4x32({kk, batch_index, point_index, 1u}, key));
    out.nx[k] = n01[0];
    if (dim >= 2) out.ny[k] = n01[1];
    if (dim >= 3) out.nz[k] = rng::box_muller(rng::philox4x32({kk, batch_index, point_index, 2u}, key))[0];
  }
}

std::uint64_t count_batch_errors(const Constellation& c, const BatchDraws& draws, double sigma) {
  SoaPoints soa(c);
  const std::size_t count = draws.symbols.size();
  std::vector<double> rx(count), ry(count), rz(count);
  std::vector<std::uint32_t> decided(count);
  for (std::size_t k = 0; k < count; ++k) {
    const auto sym = draws.symbols[k];
    rx[k] = soa.x[sym] + sigma * draws.nx[k];
    ry[k] = soa.y[sym] + sigma * draws.ny[k];
    rz[k] = soa.z[sym] + sigma * draws.nz[k];
  }
  kernels::nearest(soa.view(), {rx.data(), ry.data(), rz.data(), count}, decided.data());
  std::uint64_t errors = 0;
  for (std::size_t k = 0; k < count; ++k) errors += decided[k] != draws.symbols[k];
  return errors;
}

SerEstimate simulate_point(const Constellation& c, double n0, const StoppingRule& stop, std::uint64_t seed,
                           std::uint32_t point_index, std::size_t batch_size, unsigned threads,
                           analysis::SnrDefinition definition) {
  if (!(n0 > 0.0)) throw Error(ErrorKind::invalid_argument, "N0 must be positive");
  SimConfig check;
  check.stop = stop;
  check.batch_size = batch_size;
  check.validate();

  const SoaPoints soa(c);
  const double sigma = std::sqrt(n0 / 2.0);
  const unsigned workers = std::max(1u, threads);
  std::vector<Scratch> scratch(workers);

  std::uint64_t errors = 0;
  std::uint64_t trials = 0;
  std::uint32_t next_batch = 0;
  bool done = false;
  while (!done) {
    // One wave of batches; counts are folded in batch order so the stopping
    // point is the same for any worker count.
    std::vector<std::size_t> sizes;
    std::uint64_t planned = trials;
    for (unsigned w = 0; w < workers && planned < stop.max_symbols; ++w) {
      const auto size = static_cast<std::size_t>(std::min<std::uint64_t>(batch_size, stop.max_symbols - planned));
      sizes.push_back(size);
      planned += size;
    }
    std::vector<std::uint64_t> wave_errors(sizes.size());
    parallel_for(sizes.size(), workers, [&](std::size_t w) {
      wave_errors[w] = run_batch(c, soa, sigma, seed, point_index, next_batch + static_cast<std::uint32_t>(w),
                                 sizes[w], scratch[w]);
    });
    for (std::size_t w = 0; w < sizes.size(); ++w) {
      errors += wave_errors[w];
      trials += sizes[w];
      if (errors >= stop.min_errors || trials >= stop.max_symbols) {
        done = true;
        break;
      }
    }
    next_batch += static_cast<std::uint32_t>(sizes.size());
  }

  SerEstimate est{};
  est.n0 = n0;
  est.snr = definition == analysis::SnrDefinition::optical_po && !cone_contains(c, 1e-3).admissible
                ? analysis::SnrPoint{std::numeric_limits<double>::quiet_NaN(), definition}
                : analysis::snr_from_n0(c, n0, definition);
  est.errors = errors;
  est.trials = trials;
  est.ser = static_cast<double>(errors) / static_cast<double>(trials);
  est.ci95_halfwidth = 1.96 * std::sqrt(est.ser * (1.0 - est.ser) / static_cast<double>(trials));
  est.status = errors >= stop.min_errors ? EstimateStatus::min_errors_reached
               : errors > 0             ? EstimateStatus::symbol_budget_exhausted
                                        : EstimateStatus::no_errors;
  return est;
}

std::vector<SerEstimate> simulate_curve(const Constellation& c, const SimConfig& config) {
  config.validate();
  std::vector<SerEstimate> out;
  out.reserve(config.snr_db.size());
  for (std::size_t i = 0; i < config.snr_db.size(); ++i) {
    const analysis::SnrPoint snr{config.snr_db[i], config.definition};
    const double n0 = analysis::n0_from_snr(c, snr);
    auto est = simulate_point(c, n0, config.stop, config.seed, static_cast<std::uint32_t>(i), config.batch_size,
                              config.threads, config.definition);
    est.snr = snr;
    out.push_back(est);
  }
  return out;
}

Crossing estimate_crossing(const Constellation& c, double target_ser, analysis::SnrDefinition definition,
                           const StoppingRule& stop, std::uint64_t seed, unsigned threads, double span_db) {
  const double center =
      analysis::required_snr(c, target_ser, definition, analysis::BoundMode::nearest_neighbor).value_db;
  SimConfig cfg;
  cfg.snr_db = {center - span_db, center, center + span_db};
  cfg.definition = definition;
  cfg.stop = stop;
  cfg.seed = seed;
  cfg.threads = threads;

  Crossing out;
  out.samples = simulate_curve(c, cfg);
  // Weighted least squares of log10(SER) on SNR; weight = error count, the
  // inverse variance of log(SER) under a Poisson error count.
  double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t used = 0;
  for (const auto& e : out.samples) {
    if (e.errors == 0) continue;
    const double w = static_cast<double>(e.errors);
    const double x = e.snr.value_db;
    const double y = std::log10(e.ser);
    sw += w;
    sx += w * x;
    sy += w * y;
    sxx += w * x * x;
    sxy += w * x * y;
    ++used;
  }
  const double denom = sw * sxx - sx * sx;
  if (used < 2 || !(std::abs(denom) > 0.0)) {
    throw Error(ErrorKind::bracketing, "too few simulated errors to locate the SER crossing for " + c.name());
  }
  const double slope = (sw * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / sw;
  if (!(slope < 0.0)) {
    throw Error(ErrorKind::bracketing, "simulated SER does not decrease with SNR for " + c.name());
  }
  out.snr = {(std::log10(target_ser) - intercept) / slope, definition};
  return out;
}

}  // namespace imdd::simulator
