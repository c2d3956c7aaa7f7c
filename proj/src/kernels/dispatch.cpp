#include <atomic>
#include <cstdlib>
#include <string>

#include "imdd/error.hpp"
#include "imdd/kernels.hpp"

namespace imdd::kernels {
namespace {

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
#if defined(IMDD_HAVE_X86_KERNELS)
    case Isa::avx2: return __builtin_cpu_supports("avx2");
    case Isa::avx512: return __builtin_cpu_supports("avx512f");
#endif
#if defined(IMDD_HAVE_NEON_KERNELS)
    case Isa::neon: return true;
#endif
    default: return false;
  }
}

Isa initial_isa() {
  const auto isas = available_isas();
  if (const char* env = std::getenv("IMDD_KERNEL"); env != nullptr && *env != '\0') {
    try {
      const Isa wanted = parse_isa(env);
      for (Isa isa : isas) {
        if (isa == wanted) return isa;
      }
    } catch (const Error&) {
      // unknown name: use the default
    }
  }
  return isas.back();
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::avx512: return "avx512";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

Isa parse_isa(std::string_view text) {
  for (Isa isa : {Isa::scalar, Isa::avx2, Isa::avx512, Isa::neon}) {
    if (text == to_string(isa)) return isa;
  }
  throw Error(ErrorKind::invalid_argument, "unknown kernel variant '" + std::string(text) + "'");
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::scalar, Isa::neon, Isa::avx2, Isa::avx512}) {
    if (cpu_supports(isa)) out.push_back(isa);
  }
  return out;
}

NearestFn nearest_kernel(Isa isa) {
  if (!cpu_supports(isa)) {
    throw Error(ErrorKind::invalid_argument,
                "kernel variant '" + std::string(to_string(isa)) + "' is not available on this machine");
  }
  switch (isa) {
#if defined(IMDD_HAVE_X86_KERNELS)
    case Isa::avx2: return nearest_avx2;
    case Isa::avx512: return nearest_avx512;
#endif
#if defined(IMDD_HAVE_NEON_KERNELS)
    case Isa::neon: return nearest_neon;
#endif
    default: return nearest_scalar;
  }
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  nearest_kernel(isa);  // validates
  active().store(isa, std::memory_order_relaxed);
}

void nearest(PointsView points, SamplesView samples, std::uint32_t* out) {
  nearest_kernel(active_isa())(points, samples, out);
}

}  // namespace imdd::kernels
