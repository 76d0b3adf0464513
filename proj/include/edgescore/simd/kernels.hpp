#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference and, where the
// build and CPU allow, an AVX2 variant that returns bit-identical results.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace edgescore::simd {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

/// dst(r, c) = sum over (ky, kx) in row-major order of
///   taps[ky * kernel_width + kx] * src(r + ky, c + kx)
/// for r < rows, c < cols. `src` is already padded by the kernel extent.
using CorrelateFn = void (*)(const double* src, std::size_t src_stride, std::size_t rows,
                             std::size_t cols, const double* taps, std::size_t kernel_width,
                             std::size_t kernel_height, double* dst, std::size_t dst_stride);

/// out[i] = sqrt(gx[i]^2 + gy[i]^2).
using MagnitudeFn = void (*)(const double* gx, const double* gy, double* out, std::size_t n);

/// max_j popcount(patterns[j] & window) * inverse_norms[j] over single-word
/// patterns; `count` is a multiple of 4.
using BestMatchFn = double (*)(const std::uint64_t* patterns, const double* inverse_norms,
                               std::size_t count, std::uint64_t window);

/// max_k max(|le[k]/n - x*ys[k]|, |lt[k]/n - x*ys[k]|).
using KsRowMaxFn = double (*)(const double* le, const double* lt, const double* ys,
                              std::size_t count, double x, double n);

struct Kernels {
  Isa isa;
  CorrelateFn correlate;
  MagnitudeFn magnitude;
  BestMatchFn best_match;
  KsRowMaxFn ks_row_max;
};

/// Best ISA supported by both the build and the running CPU.
Isa detected_isa();
bool supported(Isa isa);

/// Active kernel table. Defaults to detected_isa(); the EDGESCORE_ISA
/// environment variable ("scalar" or "avx2") overrides it at first use.
const Kernels& kernels();
/// Throws InvalidArgument when `isa` is not supported here.
void set_active_isa(Isa isa);
Isa active_isa();

/// Kernel table for one ISA, for equivalence testing.
const Kernels& kernels_for(Isa isa);

namespace scalar {
void correlate(const double* src, std::size_t src_stride, std::size_t rows, std::size_t cols,
               const double* taps, std::size_t kernel_width, std::size_t kernel_height, double* dst,
               std::size_t dst_stride);
void magnitude(const double* gx, const double* gy, double* out, std::size_t n);
double best_match(const std::uint64_t* patterns, const double* inverse_norms, std::size_t count,
                  std::uint64_t window);
double ks_row_max(const double* le, const double* lt, const double* ys, std::size_t count, double x,
                  double n);
}  // namespace scalar

namespace avx2 {
void correlate(const double* src, std::size_t src_stride, std::size_t rows, std::size_t cols,
               const double* taps, std::size_t kernel_width, std::size_t kernel_height, double* dst,
               std::size_t dst_stride);
void magnitude(const double* gx, const double* gy, double* out, std::size_t n);
double best_match(const std::uint64_t* patterns, const double* inverse_norms, std::size_t count,
                  std::uint64_t window);
double ks_row_max(const double* le, const double* lt, const double* ys, std::size_t count, double x,
                  double n);
}  // namespace avx2

}  // namespace edgescore::simd
