#include <arm_neon.h>

#include <limits>

#include "imdd/kernels.hpp"

namespace imdd::kernels {

void nearest_neon(PointsView points, SamplesView samples, std::uint32_t* out) {
  constexpr std::size_t kLanes = 2;
  const std::size_t body = samples.count - samples.count % kLanes;
  const float64x2_t inf = vdupq_n_f64(std::numeric_limits<double>::infinity());

  for (std::size_t i = 0; i < body; i += kLanes) {
    const float64x2_t yx = vld1q_f64(samples.x + i);
    const float64x2_t yy = vld1q_f64(samples.y + i);
    const float64x2_t yz = vld1q_f64(samples.z + i);
    float64x2_t best = inf;
    uint64x2_t index = vdupq_n_u64(0);
    for (std::size_t j = 0; j < points.count; ++j) {
      const float64x2_t dx = vsubq_f64(yx, vdupq_n_f64(points.x[j]));
      const float64x2_t dy = vsubq_f64(yy, vdupq_n_f64(points.y[j]));
      const float64x2_t dz = vsubq_f64(yz, vdupq_n_f64(points.z[j]));
      float64x2_t d = vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy));
      d = vaddq_f64(d, vmulq_f64(dz, dz));
      const uint64x2_t closer = vcltq_f64(d, best);
      best = vbslq_f64(closer, d, best);
      index = vbslq_u64(closer, vdupq_n_u64(j), index);
    }
    out[i] = static_cast<std::uint32_t>(vgetq_lane_u64(index, 0));
    out[i + 1] = static_cast<std::uint32_t>(vgetq_lane_u64(index, 1));
  }

  SamplesView tail{samples.x + body, samples.y + body, samples.z + body, samples.count - body};
  nearest_scalar(points, tail, out + body);
}

}  // namespace imdd::kernels
