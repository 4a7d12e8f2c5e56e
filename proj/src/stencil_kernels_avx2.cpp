#include "halfspace/stencil_kernels.hpp"

#if defined(HALFSPACE_HAVE_AVX2)

#include <immintrin.h>

namespace halfspace::kernels {

void neg_laplacian_row_avx2(const StencilRow& row) {
  const double* c = row.center;
  const __m256d inv_hr2 = _mm256_set1_pd(row.inv_hr2);
  const __m256d inv_hz2 = _mm256_set1_pd(row.inv_hz2);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d sign = _mm256_set1_pd(-0.0);

  std::size_t t = 0;
  for (; t + 4 <= row.count; t += 4) {
    const __m256d mid = _mm256_loadu_pd(c + t);
    const __m256d left = _mm256_loadu_pd(c + t - 1);
    const __m256d right = _mm256_loadu_pd(c + t + 1);
    const __m256d up = _mm256_loadu_pd(row.up + t);
    const __m256d down = _mm256_loadu_pd(row.down + t);
    const __m256d coef = _mm256_loadu_pd(row.radial_coef + t);

    // second differences: (a + b) - 2 mid
    const __m256d d2r = _mm256_fnmadd_pd(two, mid, _mm256_add_pd(right, left));
    const __m256d d2z = _mm256_fnmadd_pd(two, mid, _mm256_add_pd(up, down));
    const __m256d d1r = _mm256_sub_pd(right, left);

    __m256d acc = _mm256_mul_pd(d2z, inv_hz2);
    acc = _mm256_fmadd_pd(d2r, inv_hr2, acc);
    acc = _mm256_fmadd_pd(coef, d1r, acc);
    _mm256_storeu_pd(row.out + t, _mm256_xor_pd(acc, sign));
  }
  for (; t < row.count; ++t) {
    const double radial =
        (c[t + 1] - 2.0 * c[t] + c[t - 1]) * row.inv_hr2 + row.radial_coef[t] * (c[t + 1] - c[t - 1]);
    const double vertical = (row.up[t] - 2.0 * c[t] + row.down[t]) * row.inv_hz2;
    row.out[t] = -(radial + vertical);
  }
}

}  // namespace halfspace::kernels

#endif
