// Compiled with -mavx2; only reached after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>
#include <bit>
#include <cmath>

#include "edgescore/simd/kernels.hpp"

namespace edgescore::simd::avx2 {

namespace {

inline double horizontal_max(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d m = _mm_max_pd(lo, hi);
  m = _mm_max_sd(m, _mm_unpackhi_pd(m, m));
  return _mm_cvtsd_f64(m);
}

// Per-lane popcount of four 64-bit words (nibble lookup + byte sums).
inline __m256i popcount_epi64(__m256i v) {
  const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                          0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  const __m256i counts = _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo),
                                         _mm256_shuffle_epi8(lookup, hi));
  return _mm256_sad_epu8(counts, _mm256_setzero_si256());
}

// Exact for integers below 2^52.
inline __m256d small_u64_to_pd(__m256i v) {
  const __m256i magic_bits = _mm256_set1_epi64x(0x4330000000000000LL);
  const __m256d magic = _mm256_set1_pd(4503599627370496.0);
  return _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(v, magic_bits)), magic);
}

}  // namespace

void correlate(const double* src, std::size_t src_stride, std::size_t rows, std::size_t cols,
               const double* taps, std::size_t kernel_width, std::size_t kernel_height, double* dst,
               std::size_t dst_stride) {
  const std::size_t vector_cols = cols - cols % 4;
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t c = 0;
    for (; c < vector_cols; c += 4) {
      __m256d acc = _mm256_setzero_pd();
      for (std::size_t ky = 0; ky < kernel_height; ++ky) {
        const double* line = src + (r + ky) * src_stride + c;
        const double* k = taps + ky * kernel_width;
        for (std::size_t kx = 0; kx < kernel_width; ++kx) {
          const __m256d prod = _mm256_mul_pd(_mm256_set1_pd(k[kx]), _mm256_loadu_pd(line + kx));
          acc = _mm256_add_pd(acc, prod);
        }
      }
      _mm256_storeu_pd(dst + r * dst_stride + c, acc);
    }
    for (; c < cols; ++c) {
      double acc = 0.0;
      for (std::size_t ky = 0; ky < kernel_height; ++ky) {
        const double* line = src + (r + ky) * src_stride + c;
        const double* k = taps + ky * kernel_width;
        for (std::size_t kx = 0; kx < kernel_width; ++kx) {
          acc = acc + k[kx] * line[kx];
        }
      }
      dst[r * dst_stride + c] = acc;
    }
  }
}

void magnitude(const double* gx, const double* gy, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(gx + i);
    const __m256d y = _mm256_loadu_pd(gy + i);
    const __m256d sum = _mm256_add_pd(_mm256_mul_pd(x, x), _mm256_mul_pd(y, y));
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(sum));
  }
  for (; i < n; ++i) {
    out[i] = std::sqrt(gx[i] * gx[i] + gy[i] * gy[i]);
  }
}

double best_match(const std::uint64_t* patterns, const double* inverse_norms, std::size_t count,
                  std::uint64_t window) {
  const __m256i w = _mm256_set1_epi64x(static_cast<long long>(window));
  __m256d best = _mm256_setzero_pd();
  for (std::size_t j = 0; j < count; j += 4) {
    const __m256i p = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(patterns + j));
    const __m256d dot = small_u64_to_pd(popcount_epi64(_mm256_and_si256(p, w)));
    best = _mm256_max_pd(best, _mm256_mul_pd(dot, _mm256_loadu_pd(inverse_norms + j)));
  }
  return horizontal_max(best);
}

double ks_row_max(const double* le, const double* lt, const double* ys, std::size_t count, double x,
                  double n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d vx = _mm256_set1_pd(x);
  const __m256d vn = _mm256_set1_pd(n);
  __m256d best = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= count; k += 4) {
    const __m256d f = _mm256_mul_pd(vx, _mm256_loadu_pd(ys + k));
    const __m256d a = _mm256_sub_pd(_mm256_div_pd(_mm256_loadu_pd(le + k), vn), f);
    const __m256d b = _mm256_sub_pd(_mm256_div_pd(_mm256_loadu_pd(lt + k), vn), f);
    best = _mm256_max_pd(best, _mm256_andnot_pd(sign_mask, a));
    best = _mm256_max_pd(best, _mm256_andnot_pd(sign_mask, b));
  }
  double result = horizontal_max(best);
  for (; k < count; ++k) {
    const double f = x * ys[k];
    result = std::max(result, std::abs(le[k] / n - f));
    result = std::max(result, std::abs(lt[k] / n - f));
  }
  return result;
}

}  // namespace edgescore::simd::avx2
