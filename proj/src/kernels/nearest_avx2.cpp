// Built with -mavx2 only; called after a runtime CPU check.
#include <immintrin.h>

#include <limits>

#include "imdd/kernels.hpp"

namespace imdd::kernels {

void nearest_avx2(PointsView points, SamplesView samples, std::uint32_t* out) {
  constexpr std::size_t kLanes = 4;
  const std::size_t body = samples.count - samples.count % kLanes;
  const __m256d inf = _mm256_set1_pd(std::numeric_limits<double>::infinity());

  for (std::size_t i = 0; i < body; i += kLanes) {
    const __m256d yx = _mm256_loadu_pd(samples.x + i);
    const __m256d yy = _mm256_loadu_pd(samples.y + i);
    const __m256d yz = _mm256_loadu_pd(samples.z + i);
    __m256d best = inf;
    __m256d index = _mm256_setzero_pd();
    for (std::size_t j = 0; j < points.count; ++j) {
      const __m256d dx = _mm256_sub_pd(yx, _mm256_set1_pd(points.x[j]));
      const __m256d dy = _mm256_sub_pd(yy, _mm256_set1_pd(points.y[j]));
      const __m256d dz = _mm256_sub_pd(yz, _mm256_set1_pd(points.z[j]));
      __m256d d = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
      d = _mm256_add_pd(d, _mm256_mul_pd(dz, dz));
      const __m256d closer = _mm256_cmp_pd(d, best, _CMP_LT_OQ);
      best = _mm256_blendv_pd(best, d, closer);
      index = _mm256_blendv_pd(index, _mm256_set1_pd(static_cast<double>(j)), closer);
    }
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out + i), _mm256_cvttpd_epi32(index));
  }

  SamplesView tail{samples.x + body, samples.y + body, samples.z + body, samples.count - body};
  nearest_scalar(points, tail, out + body);
}

}  // namespace imdd::kernels
