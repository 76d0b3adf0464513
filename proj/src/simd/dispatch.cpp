#include <atomic>
#include <cstdlib>
#include <string>

#include "edgescore/error.hpp"
#include "edgescore/simd/kernels.hpp"

namespace edgescore::simd {

namespace {

constexpr Kernels kScalarKernels{Isa::scalar, scalar::correlate, scalar::magnitude,
                                 scalar::best_match, scalar::ks_row_max};

#if defined(EDGESCORE_BUILD_AVX2)
constexpr Kernels kAvx2Kernels{Isa::avx2, avx2::correlate, avx2::magnitude, avx2::best_match,
                               avx2::ks_row_max};
#endif

Isa initial_isa() {
  Isa isa = detected_isa();
  if (const char* env = std::getenv("EDGESCORE_ISA")) {
    const std::string requested(env);
    if (requested == "scalar") {
      isa = Isa::scalar;
    } else if (requested == "avx2" && supported(Isa::avx2)) {
      isa = Isa::avx2;
    }
  }
  return isa;
}

std::atomic<const Kernels*>& active_table() {
  static std::atomic<const Kernels*> table{&kernels_for(initial_isa())};
  return table;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(EDGESCORE_BUILD_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa detected_isa() { return supported(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

const Kernels& kernels_for(Isa isa) {
  if (!supported(isa)) {
    throw InvalidArgument("instruction set not available: " + std::string(to_string(isa)));
  }
#if defined(EDGESCORE_BUILD_AVX2)
  if (isa == Isa::avx2) {
    return kAvx2Kernels;
  }
#endif
  return kScalarKernels;
}

const Kernels& kernels() { return *active_table().load(std::memory_order_acquire); }

void set_active_isa(Isa isa) { active_table().store(&kernels_for(isa), std::memory_order_release); }

Isa active_isa() { return kernels().isa; }

}  // namespace edgescore::simd
