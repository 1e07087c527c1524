// Compiled with -mavx2 only; never with -mfma, see kernels.hpp.
#include <immintrin.h>

#include "klentropy/kernels.hpp"

namespace klentropy::kernels::avx2 {

void euclidean_distances(const double* soa, std::size_t stride, int dim, std::size_t begin,
                         std::size_t end, const double* query, double* out) {
  std::size_t j = begin;
  for (; j + 4 <= end; j += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (int d = 0; d < dim; ++d) {
      const __m256d p = _mm256_loadu_pd(soa + static_cast<std::size_t>(d) * stride + j);
      const __m256d diff = _mm256_sub_pd(p, _mm256_set1_pd(query[d]));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
    }
    _mm256_storeu_pd(out + (j - begin), _mm256_sqrt_pd(acc));
  }
  if (j < end) scalar::euclidean_distances(soa, stride, dim, j, end, query, out + (j - begin));
}

void torus_distances(const double* soa, std::size_t stride, int dim, std::size_t begin,
                     std::size_t end, const double* query, double* out) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t j = begin;
  for (; j + 4 <= end; j += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (int d = 0; d < dim; ++d) {
      const __m256d p = _mm256_loadu_pd(soa + static_cast<std::size_t>(d) * stride + j);
      const __m256d diff = _mm256_andnot_pd(sign, _mm256_sub_pd(p, _mm256_set1_pd(query[d])));
      const __m256d m = _mm256_min_pd(diff, _mm256_sub_pd(one, diff));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(m, m));
    }
    _mm256_storeu_pd(out + (j - begin), _mm256_sqrt_pd(acc));
  }
  if (j < end) scalar::torus_distances(soa, stride, dim, j, end, query, out + (j - begin));
}

}  // namespace klentropy::kernels::avx2
