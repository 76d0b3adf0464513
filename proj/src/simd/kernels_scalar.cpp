#include <algorithm>
#include <bit>
#include <cmath>

#include "edgescore/simd/kernels.hpp"

namespace edgescore::simd::scalar {

void correlate(const double* src, std::size_t src_stride, std::size_t rows, std::size_t cols,
               const double* taps, std::size_t kernel_width, std::size_t kernel_height, double* dst,
               std::size_t dst_stride) {
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
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
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::sqrt(gx[i] * gx[i] + gy[i] * gy[i]);
  }
}

double best_match(const std::uint64_t* patterns, const double* inverse_norms, std::size_t count,
                  std::uint64_t window) {
  double best = 0.0;
  for (std::size_t j = 0; j < count; ++j) {
    const double dot = static_cast<double>(std::popcount(patterns[j] & window));
    best = std::max(best, dot * inverse_norms[j]);
  }
  return best;
}

double ks_row_max(const double* le, const double* lt, const double* ys, std::size_t count, double x,
                  double n) {
  double best = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const double f = x * ys[k];
    best = std::max(best, std::abs(le[k] / n - f));
    best = std::max(best, std::abs(lt[k] / n - f));
  }
  return best;
}

}  // namespace edgescore::simd::scalar
