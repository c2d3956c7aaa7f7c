#include <algorithm>
#include <cmath>
#include <numbers>

#include "imdd/optimizer.hpp"

namespace imdd::optimizer {
namespace {

constexpr double kCompareTol = 1e-8;
constexpr double kAxisTol = 1e-9;

bool tolerant_less(const Vec3& a, const Vec3& b) {
  for (int k = 0; k < 3; ++k) {
    if (std::abs(a[k] - b[k]) > kCompareTol) return a[k] < b[k];
  }
  return false;
}

// Insertion sort: the tolerant order is only a weak order for well separated
// points, so avoid std::sort's strict requirements.
void sort_points(std::vector<Vec3>& pts) {
  for (std::size_t i = 1; i < pts.size(); ++i) {
    for (std::size_t j = i; j > 0 && tolerant_less(pts[j], pts[j - 1]); --j) std::swap(pts[j], pts[j - 1]);
  }
}

std::vector<Vec3> transformed(std::span<const Vec3> pts, bool reflect, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  std::vector<Vec3> out(pts.begin(), pts.end());
  for (auto& p : out) {
    if (reflect) p[2] = -p[2];
    const double y = p[1];
    const double z = p[2];
    p[1] = c * y - s * z;
    p[2] = s * y + c * z;
  }
  sort_points(out);
  return out;
}

}  // namespace

Constellation canonicalize(const Constellation& c) {
  if (c.dim() != 3) {
    throw Error(ErrorKind::dimension_mismatch, "canonicalize needs a three-dimensional constellation");
  }
  // In the lexicographic minimum, the first off-axis point (in sorted order)
  // sits at angle pi in the (s2, s3) plane. Trying that placement for every
  // off-axis point and both reflections covers all candidates.
  std::vector<Vec3> best;
  bool have = false;
  for (int reflect = 0; reflect < 2; ++reflect) {
    for (const auto& p : c.points()) {
      const double z = reflect ? -p[2] : p[2];
      if (std::hypot(p[1], z) <= kAxisTol) continue;
      const double angle = std::numbers::pi - std::atan2(z, p[1]);
      auto candidate = transformed(c.points(), reflect != 0, angle);
      if (!have || std::lexicographical_compare(candidate.begin(), candidate.end(), best.begin(), best.end(),
                                                tolerant_less)) {
        best = std::move(candidate);
        have = true;
      }
    }
  }
  if (!have) best = transformed(c.points(), false, 0.0);
  // The chosen point is placed exactly on the negative s2 axis.
  for (auto& p : best) {
    if (std::abs(p[2]) < 1e-15) p[2] = 0.0;
  }
  return Constellation(c.name(), c.bandwidth_model(), 3, std::move(best));
}

}  // namespace imdd::optimizer
