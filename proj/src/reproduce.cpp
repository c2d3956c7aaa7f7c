#include "imdd/reproduce.hpp"

#include <array>
#include <cmath>
#include <map>
#include <string>

#include "imdd/catalog.hpp"

namespace imdd::reproduce {
namespace {

using analysis::SnrDefinition;

constexpr std::array<ReferenceGain, 14> kReference{{
    {SnrDefinition::electrical_eb, "c4", "ook", 0.86},
    {SnrDefinition::electrical_eb, "c4", "qpsk", 2.87},
    {SnrDefinition::electrical_eb, "c-pe-8", "c-po-8", 0.30},
    {SnrDefinition::electrical_eb, "c-pe-8", "l8", 0.58},
    {SnrDefinition::electrical_eb, "c-pe-8", "8qam-varbias", 2.55},
    {SnrDefinition::electrical_eb, "c-pe-8", "8qam", 4.35},
    {SnrDefinition::electrical_eb, "c-pe-8", "8psk", 4.39},
    {SnrDefinition::optical_po, "c4", "ook", 0.43},
    {SnrDefinition::optical_po, "c4", "qpsk", 2.06},
    {SnrDefinition::optical_po, "c-po-8", "c-pe-8", 0.04},
    {SnrDefinition::optical_po, "c-po-8", "l8", 0.46},
    {SnrDefinition::optical_po, "c-po-8", "8qam-varbias", 1.35},
    {SnrDefinition::optical_po, "c-po-8", "8psk", 2.48},
    {SnrDefinition::optical_po, "c-po-8", "8qam", 2.75},
}};

}  // namespace

std::span<const ReferenceGain> reference_gains() { return kReference; }

std::vector<ReproducedGain> reproduce_gains(double target_ser, const std::optional<McOptions>& mc) {
  // Simulated crossings are found once per format in N0 and converted to
  // either SNR definition.
  std::map<std::string, double> mc_n0;
  auto simulated_db = [&](const std::string& id, SnrDefinition definition) {
    const auto& c = catalog::get(id).constellation;
    auto it = mc_n0.find(id);
    if (it == mc_n0.end()) {
      const auto crossing = simulator::estimate_crossing(c, target_ser, SnrDefinition::electrical_eb, mc->stop,
                                                         mc->seed, mc->threads);
      it = mc_n0.emplace(id, analysis::n0_from_snr(c, crossing.snr)).first;
    }
    return analysis::snr_from_n0(c, it->second, definition).value_db;
  };

  std::vector<ReproducedGain> rows;
  for (const auto& ref : kReference) {
    const auto& a = catalog::get(ref.format).constellation;
    const auto& b = catalog::get(ref.over).constellation;
    auto gain = [&](analysis::BoundMode mode) {
      return analysis::difference_db(analysis::required_snr(b, target_ser, ref.definition, mode),
                                     analysis::required_snr(a, target_ser, ref.definition, mode));
    };
    ReproducedGain row{ref, gain(analysis::BoundMode::nearest_neighbor), gain(analysis::BoundMode::full), std::nullopt};
    if (mc) row.mc_db = simulated_db(ref.over, ref.definition) - simulated_db(ref.format, ref.definition);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace imdd::reproduce
