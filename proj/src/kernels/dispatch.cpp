#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_internal.hpp"

namespace ttvseg::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(TTVSEG_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable& pick_default() {
  if (const char* env = std::getenv("TTVSEG_SIMD")) {
    const std::string want = env;
    Backend b = Backend::Scalar;
    if (want == "avx2") b = Backend::Avx2;
    else if (want == "neon") b = Backend::Neon;
    else if (want != "scalar") throw std::invalid_argument("TTVSEG_SIMD: unknown backend " + want);
    if (const KernelTable* t = kernels_for(b)) return *t;
    throw std::runtime_error("TTVSEG_SIMD: backend " + want + " not available on this machine");
  }
  for (Backend b : {Backend::Avx2, Backend::Neon}) {
    if (const KernelTable* t = kernels_for(b)) return *t;
  }
  return scalar_kernels();
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{&pick_default()};
  return slot;
}

}  // namespace

const KernelTable* kernels_for(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return &scalar_kernels();
    case Backend::Avx2:
#if defined(TTVSEG_HAVE_AVX2)
      if (cpu_has_avx2()) return &avx2_kernels();
#endif
      return nullptr;
    case Backend::Neon:
#if defined(TTVSEG_HAVE_NEON)
      return &neon_kernels();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const KernelTable& active() { return *active_slot().load(std::memory_order_acquire); }

void set_active(Backend b) {
  const KernelTable* t = kernels_for(b);
  if (!t) throw std::runtime_error("kernel backend " + std::string(backend_name(b)) + " unavailable");
  active_slot().store(t, std::memory_order_release);
}

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "unknown";
}

}  // namespace ttvseg::kernels
