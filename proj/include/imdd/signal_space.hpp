#pragma once

// Geometry and power metrics of constellations in the three-dimensional
// IM/DD signal space spanned by a DC basis function (coordinate 0) and an
// electrical subcarrier pair (coordinates 1 and 2).
//
// Units: symbol period, modulator conversion factor and photodetector
// responsivity are all normalized to one, so the average electrical power is
// the mean squared norm and the average optical power is the mean DC
// coordinate.

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imdd/error.hpp"

namespace imdd {

/// A signal-space vector. Constellations of lower dimension keep the unused
/// trailing coordinates at zero.
using Vec3 = std::array<double, 3>;

enum class BandwidthModel {
  baseband,    ///< W = R_s (OOK, PAM)
  subcarrier,  ///< W = 2 R_s (single-subcarrier formats)
};

enum class Objective {
  electrical,  ///< mean squared norm
  optical,     ///< mean DC coordinate
};

std::string_view to_string(BandwidthModel model) noexcept;
std::string_view to_string(Objective objective) noexcept;
BandwidthModel parse_bandwidth_model(std::string_view text);
Objective parse_objective(std::string_view text);

inline double dot(const Vec3& a, const Vec3& b) noexcept {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double squared_distance(const Vec3& a, const Vec3& b) noexcept {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

/// Named, ordered, equiprobable signal set.
///
/// Construction enforces: at least two points, finite coordinates, pairwise
/// distinct points, dimension in {1, 2, 3}. Subcarrier constellations are
/// always three-dimensional; lower-dimensional input is zero padded.
class Constellation {
 public:
  Constellation(std::string name, BandwidthModel model, std::size_t dim,
                std::vector<Vec3> points);

  /// Builds from rows of 1..3 coordinates; the dimension is the longest row.
  static Constellation from_rows(std::string name, BandwidthModel model,
                                 const std::vector<std::vector<double>>& rows);

  const std::string& name() const noexcept { return name_; }
  BandwidthModel bandwidth_model() const noexcept { return model_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return points_.size(); }
  std::span<const Vec3> points() const noexcept { return points_; }
  const Vec3& operator[](std::size_t i) const noexcept { return points_[i]; }

  Constellation renamed(std::string name) const;
  Constellation scaled(double factor) const;
  /// Rotates every point by `angle` radians in the (s2, s3) plane, i.e. about
  /// the cone axis. Only meaningful for three-dimensional constellations.
  Constellation rotated_about_axis(double angle) const;
  /// Maps s3 -> -s3.
  Constellation reflected() const;

 private:
  std::string name_;
  BandwidthModel model_;
  std::size_t dim_;
  std::vector<Vec3> points_;
};

/// Nonnegativity region: s1 >= 0 and s1^2 >= 2 (s2^2 + s3^2), a circular cone
/// about the DC axis with apex angle arccos(1/3).
struct AdmissibleCone {
  double tolerance = 1e-9;

  /// Scale-free violation measure; <= 0 inside the cone.
  static double violation(const Vec3& p) noexcept;
  bool contains(const Vec3& p) const noexcept;
};

struct ConeViolation {
  std::size_t index;
  double magnitude;
};

struct ConeReport {
  bool admissible = true;
  std::vector<ConeViolation> violations;
};

double min_distance(const Constellation& c);
/// Pairs i < j with distance within (1 + rel_tol) d_min.
std::size_t kissing_count(const Constellation& c, double rel_tol = 1e-6);
double avg_electrical_energy(const Constellation& c);
/// Mean DC coordinate; throws not_admissible if any s1 < -tol.
double avg_optical_amplitude(const Constellation& c, double tol = 1e-9);
/// Mean of s1^2, the DC share of the electrical energy.
double mean_dc_energy(const Constellation& c);
ConeReport cone_contains(const Constellation& c, double tol = 1e-9);

struct SpectralEfficiency {
  double bits_per_hz;
  bool power_of_two;  ///< false flags a non-integer log2(M)
};

SpectralEfficiency spectral_efficiency(const Constellation& c);

Constellation normalize_to_unit_dmin(const Constellation& c);

/// Per-point contribution to an objective (squared norm or DC coordinate).
double objective_contribution(const Vec3& p, Objective objective) noexcept;
double objective_value(std::span<const Vec3> points, Objective objective);
double objective_value(const Constellation& c, Objective objective);

/// Sorted pairwise distances, length M(M-1)/2.
std::vector<double> pairwise_distances(std::span<const Vec3> points);

}  // namespace imdd
