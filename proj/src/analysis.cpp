#include "imdd/analysis.hpp"

#include <algorithm>
#include <optional>
#include <cmath>
#include <numbers>
#include <string>

namespace imdd::analysis {
namespace {

constexpr double kInversionTolDb = 1e-5;

double bits_per_symbol(const Constellation& c) { return std::log2(static_cast<double>(c.size())); }

double parse_number(std::string_view text) {
  // from_chars for double is not available everywhere yet
  std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) {
    throw Error(ErrorKind::invalid_argument, "not a number: '" + s + "'");
  }
  return v;
}

}  // namespace

std::string_view to_string(SnrDefinition d) noexcept {
  return d == SnrDefinition::electrical_eb ? "electrical" : "optical";
}

std::string_view to_string(BoundMode m) noexcept {
  return m == BoundMode::nearest_neighbor ? "nearest_neighbor" : "full";
}

SnrDefinition parse_definition(std::string_view text) {
  if (text == "electrical" || text == "electrical_eb") return SnrDefinition::electrical_eb;
  if (text == "optical" || text == "optical_po") return SnrDefinition::optical_po;
  throw Error(ErrorKind::invalid_argument,
              "SNR definition must be 'electrical' or 'optical', got '" + std::string(text) + "'");
}

double difference_db(const SnrPoint& a, const SnrPoint& b) {
  if (a.definition != b.definition) {
    throw Error(ErrorKind::invalid_argument, "cannot compare electrical and optical SNR values");
  }
  return a.value_db - b.value_db;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double ser_union_bound(const Constellation& c, double n0, BoundMode mode) {
  if (!(n0 > 0.0)) throw Error(ErrorKind::invalid_argument, "N0 must be positive");
  const double m = static_cast<double>(c.size());
  const double scale = 1.0 / std::sqrt(2.0 * n0);
  if (mode == BoundMode::nearest_neighbor) {
    const double k = static_cast<double>(kissing_count(c));
    return std::min(1.0, 2.0 * k / m * q_function(min_distance(c) * scale));
  }
  double sum = 0.0;
  const auto pts = c.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      sum += q_function(std::sqrt(squared_distance(pts[i], pts[j])) * scale);
    }
  }
  return std::min(1.0, 2.0 * sum / m);
}

SnrPoint snr_from_n0(const Constellation& c, double n0, SnrDefinition definition) {
  if (!(n0 > 0.0)) throw Error(ErrorKind::invalid_argument, "N0 must be positive");
  const double bits = bits_per_symbol(c);
  if (definition == SnrDefinition::electrical_eb) {
    return {10.0 * std::log10(avg_electrical_energy(c) / (bits * n0)), definition};
  }
  const auto cone = cone_contains(c, 1e-3);
  if (!cone.admissible) {
    throw Error(ErrorKind::not_admissible, "optical SNR needs a constellation inside the admissible cone");
  }
  return {10.0 * std::log10(avg_optical_amplitude(c) / std::sqrt(bits * n0)), definition};
}

double n0_from_snr(const Constellation& c, const SnrPoint& snr) {
  const double bits = bits_per_symbol(c);
  const double lin = std::pow(10.0, snr.value_db / 10.0);
  if (snr.definition == SnrDefinition::electrical_eb) {
    return avg_electrical_energy(c) / (bits * lin);
  }
  const double ratio = avg_optical_amplitude(c) / lin;
  return ratio * ratio / bits;
}

SnrPoint required_snr(const Constellation& c, double target_ser, SnrDefinition definition, BoundMode mode) {
  if (!(target_ser > 0.0 && target_ser < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "target SER must lie in (0, 1)");
  }
  // SER rises with N0; bracket in log N0 by doubling the span.
  auto excess = [&](double log_n0) { return ser_union_bound(c, std::exp(log_n0), mode) - target_ser; };
  double lo = std::log(min_distance(c) * min_distance(c)) - 1.0;
  double hi = lo;
  for (int i = 0; i < 200 && excess(lo) > 0.0; ++i) lo -= 1.0 + 0.5 * i;
  for (int i = 0; i < 200 && excess(hi) <= 0.0; ++i) hi += 1.0;
  if (excess(lo) > 0.0 || excess(hi) <= 0.0) {
    throw Error(ErrorKind::bracketing, "target SER " + std::to_string(target_ser) +
                                           " is not reachable by the union bound of " + c.name());
  }
  // 10 log10(N0) resolution well below 1e-4 dB for both definitions.
  while ((hi - lo) * 10.0 / std::numbers::ln10 > kInversionTolDb) {
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return snr_from_n0(c, std::exp(0.5 * (lo + hi)), definition);
}

std::vector<BoundRow> bound_curve(const Constellation& c, std::span<const double> snr_db, SnrDefinition definition) {
  std::vector<BoundRow> rows;
  rows.reserve(snr_db.size());
  for (double db : snr_db) {
    const SnrPoint snr{db, definition};
    const double n0 = n0_from_snr(c, snr);
    rows.push_back({snr, ser_union_bound(c, n0, BoundMode::nearest_neighbor), ser_union_bound(c, n0, BoundMode::full)});
  }
  return rows;
}

std::vector<double> parse_db_grid(std::string_view spec) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = spec.find(':', start);
    parts.push_back(spec.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (parts.size() == 1) return {parse_number(parts[0])};
  if (parts.size() != 3) {
    throw Error(ErrorKind::invalid_argument, "SNR grid must be 'start:stop:step', got '" + std::string(spec) + "'");
  }
  const double first = parse_number(parts[0]);
  const double last = parse_number(parts[1]);
  const double step = parse_number(parts[2]);
  if (!(step > 0.0)) throw Error(ErrorKind::invalid_argument, "SNR grid step must be positive");
  std::vector<double> grid;
  if (last < first) return grid;
  const auto count = static_cast<std::size_t>(std::floor((last - first) / step + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i) grid.push_back(first + static_cast<double>(i) * step);
  return grid;
}

GainTable gain_table(std::span<const Constellation> constellations, double target_ser, SnrDefinition definition,
                     BoundMode mode) {
  GainTable table{definition, mode, target_ser, {}, {}, false};
  std::optional<double> eta;
  for (const auto& c : constellations) {
    table.names.push_back(c.name());
    table.required_db.push_back(required_snr(c, target_ser, definition, mode).value_db);
    const double e = spectral_efficiency(c).bits_per_hz;
    if (eta && std::abs(*eta - e) > 1e-12) table.mixed_spectral_efficiency = true;
    if (!eta) eta = e;
  }
  return table;
}

}  // namespace imdd::analysis
