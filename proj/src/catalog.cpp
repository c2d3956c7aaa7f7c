#include "imdd/catalog.hpp"

#include <cmath>
#include <numbers>

namespace imdd::catalog {
namespace {

const double kSqrt2 = std::numbers::sqrt2;
const double kSqrt3 = std::numbers::sqrt3;
const double kBase = std::sqrt(2.0 / 3.0);  // DC level of the first tetrahedron layer

std::vector<Vec3> tetrahedron() {
  return {
      {0.0, 0.0, 0.0},
      {kBase, 0.0, 1.0 / kSqrt3},
      {kBase, 0.5, -kSqrt3 / 6.0},
      {kBase, -0.5, -kSqrt3 / 6.0},
  };
}

std::vector<Vec3> with_tetrahedron(std::initializer_list<Vec3> extra) {
  auto pts = tetrahedron();
  pts.insert(pts.end(), extra);
  return pts;
}

Constellation subcarrier(std::string name, std::vector<Vec3> pts) {
  return Constellation(std::move(name), BandwidthModel::subcarrier, 3, std::move(pts));
}

std::vector<Vec3> star_qam(double inner_bias) {
  const double outer_bias = (1.0 + kSqrt3) / kSqrt2;
  const double r = (1.0 + kSqrt3) / 2.0;
  return {
      {inner_bias, 0.5, 0.5},   {inner_bias, 0.5, -0.5},
      {inner_bias, -0.5, 0.5},  {inner_bias, -0.5, -0.5},
      {outer_bias, 0.0, r},     {outer_bias, 0.0, -r},
      {outer_bias, r, 0.0},     {outer_bias, -r, 0.0},
  };
}

// The hybrid star format has no published normalization proof; keep d_min
// at one by construction and record any rescale.
CatalogEntry checked_unit_dmin(CatalogEntry entry) {
  const double d = min_distance(entry.constellation);
  if (std::abs(d - 1.0) > 1e-12) {
    entry.note = "rescaled by 1/" + std::to_string(d) + " to restore unit d_min";
    entry.constellation = normalize_to_unit_dmin(entry.constellation);
  }
  return entry;
}

std::vector<CatalogEntry> build() {
  std::vector<CatalogEntry> entries;

  entries.push_back({"ook",
                     Constellation("ook", BandwidthModel::baseband, 1, {{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}}),
                     Provenance::classical, 1e-9, ExpectedMetrics{1.0, 0.5, 0.5, 1}, {}});

  entries.push_back({"qpsk",
                     subcarrier("qpsk", {{1.0, 0.5, 0.5}, {1.0, 0.5, -0.5}, {1.0, -0.5, 0.5}, {1.0, -0.5, -0.5}}),
                     Provenance::subcarrier_reference, 1e-9, ExpectedMetrics{1.0, 1.5, 1.0, 4}, {}});

  entries.push_back({"c4", subcarrier("c4", tetrahedron()), Provenance::optimized, 1e-9,
                     ExpectedMetrics{1.0, 0.75, 0.75 * kBase, 6}, {}});

  {
    const double k = 1.0 / std::sin(std::numbers::pi / 8.0);
    std::vector<Vec3> pts;
    for (int i = 0; i < 8; ++i) {
      const double a = std::numbers::pi * i / 4.0;
      pts.push_back({k / kSqrt2, k * std::cos(a) / 2.0, k * std::sin(a) / 2.0});
    }
    entries.push_back(checked_unit_dmin(
        {"8psk", subcarrier("8psk", std::move(pts)), Provenance::subcarrier_reference, 1e-9, std::nullopt, {}}));
  }

  entries.push_back(checked_unit_dmin({"8qam", subcarrier("8qam", star_qam((1.0 + kSqrt3) / kSqrt2)),
                                       Provenance::subcarrier_reference, 1e-9, std::nullopt, {}}));
  entries.push_back(checked_unit_dmin({"8qam-varbias", subcarrier("8qam-varbias", star_qam(1.0)),
                                       Provenance::subcarrier_reference, 1e-9, std::nullopt, {}}));

  const double upper = (5.0 / 3.0) * kBase;
  entries.push_back({"c-pe-8",
                     subcarrier("c-pe-8", with_tetrahedron({
                                              {upper, 0.0, -5.0 / (3.0 * kSqrt3)},
                                              {upper, 5.0 / 6.0, 5.0 / (6.0 * kSqrt3)},
                                              {upper, -5.0 / 6.0, 5.0 / (6.0 * kSqrt3)},
                                              {2.0 * kBase, 0.0, 0.0},
                                          })),
                     Provenance::optimized, 1e-9, ExpectedMetrics{1.0, 1.75, (3.0 + 3.0 * 5.0 / 3.0 + 2.0) * kBase / 8.0, 18},
                     {}});

  // Eighth point is only known to four decimals.
  entries.push_back({"c-po-8",
                     subcarrier("c-po-8", with_tetrahedron({
                                              {upper, 0.0, -5.0 / (3.0 * kSqrt3)},
                                              {upper, 5.0 / 6.0, 5.0 / (6.0 * kSqrt3)},
                                              {upper, -5.0 / 6.0, 5.0 / (6.0 * kSqrt3)},
                                              {1.6293, 0.9236, -0.6886},
                                          })),
                     Provenance::optimized, 1e-3, std::nullopt, {}});

  const double top = 2.0 * kBase;
  entries.push_back({"l8",
                     subcarrier("l8", with_tetrahedron({
                                          {top, 0.5, kSqrt3 / 6.0},
                                          {top, -0.5, kSqrt3 / 6.0},
                                          {top, 0.0, -1.0 / kSqrt3},
                                          {top, 1.0, -1.0 / kSqrt3},
                                      })),
                     Provenance::optimized, 1e-9, ExpectedMetrics{1.0, 2.0, 11.0 * kBase / 8.0, 18}, {}});
  return entries;
}

const std::vector<CatalogEntry>& entries() {
  static const std::vector<CatalogEntry> all = build();
  return all;
}

}  // namespace

std::string_view to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::optimized: return "optimized";
    case Provenance::subcarrier_reference: return "subcarrier_reference";
    case Provenance::classical: return "classical";
  }
  return "unknown";
}

const std::vector<std::string>& ids() {
  static const std::vector<std::string> all = [] {
    std::vector<std::string> out;
    for (const auto& e : entries()) out.push_back(e.id);
    return out;
  }();
  return all;
}

const CatalogEntry& get(std::string_view id) {
  for (const auto& e : entries()) {
    if (e.id == id) return e;
  }
  std::string valid;
  for (const auto& name : ids()) {
    if (!valid.empty()) valid += ", ";
    valid += name;
  }
  throw Error(ErrorKind::catalog_miss,
              "unknown constellation id '" + std::string(id) + "'; valid ids: " + valid);
}

std::vector<Listing> list() {
  std::vector<Listing> out;
  for (const auto& e : entries()) {
    out.push_back({e.id, e.constellation.size(), spectral_efficiency(e.constellation).bits_per_hz,
                   e.constellation.bandwidth_model()});
  }
  return out;
}

}  // namespace imdd::catalog
