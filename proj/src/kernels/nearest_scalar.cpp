#include <limits>

#include "imdd/kernels.hpp"

namespace imdd::kernels {

void nearest_scalar(PointsView points, SamplesView samples, std::uint32_t* out) {
  for (std::size_t i = 0; i < samples.count; ++i) {
    const double yx = samples.x[i];
    const double yy = samples.y[i];
    const double yz = samples.z[i];
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t index = 0;
    for (std::size_t j = 0; j < points.count; ++j) {
      const double dx = yx - points.x[j];
      const double dy = yy - points.y[j];
      const double dz = yz - points.z[j];
      const double d = dx * dx + dy * dy + dz * dz;
      if (d < best) {
        best = d;
        index = static_cast<std::uint32_t>(j);
      }
    }
    out[i] = index;
  }
}

}  // namespace imdd::kernels
