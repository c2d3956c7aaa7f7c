// Built with -mavx512f only; called after a runtime CPU check.
#include <immintrin.h>

#include <limits>

#include "imdd/kernels.hpp"

namespace imdd::kernels {

void nearest_avx512(PointsView points, SamplesView samples, std::uint32_t* out) {
  constexpr std::size_t kLanes = 8;
  const std::size_t body = samples.count - samples.count % kLanes;
  const __m512d inf = _mm512_set1_pd(std::numeric_limits<double>::infinity());

  for (std::size_t i = 0; i < body; i += kLanes) {
    const __m512d yx = _mm512_loadu_pd(samples.x + i);
    const __m512d yy = _mm512_loadu_pd(samples.y + i);
    const __m512d yz = _mm512_loadu_pd(samples.z + i);
    __m512d best = inf;
    __m512d index = _mm512_setzero_pd();
    for (std::size_t j = 0; j < points.count; ++j) {
      const __m512d dx = _mm512_sub_pd(yx, _mm512_set1_pd(points.x[j]));
      const __m512d dy = _mm512_sub_pd(yy, _mm512_set1_pd(points.y[j]));
      const __m512d dz = _mm512_sub_pd(yz, _mm512_set1_pd(points.z[j]));
      __m512d d = _mm512_add_pd(_mm512_mul_pd(dx, dx), _mm512_mul_pd(dy, dy));
      d = _mm512_add_pd(d, _mm512_mul_pd(dz, dz));
      const __mmask8 closer = _mm512_cmp_pd_mask(d, best, _CMP_LT_OQ);
      best = _mm512_mask_blend_pd(closer, best, d);
      index = _mm512_mask_blend_pd(closer, index, _mm512_set1_pd(static_cast<double>(j)));
    }
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), _mm512_cvttpd_epi32(index));
  }

  SamplesView tail{samples.x + body, samples.y + body, samples.z + body, samples.count - body};
  nearest_scalar(points, tail, out + body);
}

}  // namespace imdd::kernels
