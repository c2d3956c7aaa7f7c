#pragma once

// Minimum-distance detection kernels.
//
// Every variant computes, for each received sample y, the index of the
// nearest constellation point with squared distance evaluated as
// ((dx*dx + dy*dy) + dz*dz) and a strict less-than scan in index order. With
// fused multiply-add disabled this makes all variants bit-identical to the
// scalar reference, ties included (smallest index wins).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace imdd::kernels {

enum class Isa { scalar, avx2, avx512, neon };

std::string_view to_string(Isa isa) noexcept;
Isa parse_isa(std::string_view text);

/// Structure-of-arrays view of constellation points (always 3 coordinates).
struct PointsView {
  const double* x;
  const double* y;
  const double* z;
  std::size_t count;
};

/// Structure-of-arrays received samples.
struct SamplesView {
  const double* x;
  const double* y;
  const double* z;
  std::size_t count;
};

using NearestFn = void (*)(PointsView points, SamplesView samples, std::uint32_t* out);

void nearest_scalar(PointsView points, SamplesView samples, std::uint32_t* out);
#if defined(IMDD_HAVE_X86_KERNELS)
void nearest_avx2(PointsView points, SamplesView samples, std::uint32_t* out);
void nearest_avx512(PointsView points, SamplesView samples, std::uint32_t* out);
#endif
#if defined(IMDD_HAVE_NEON_KERNELS)
void nearest_neon(PointsView points, SamplesView samples, std::uint32_t* out);
#endif

/// Variants compiled in and supported by this CPU, scalar first.
std::vector<Isa> available_isas();

/// Kernel for a specific variant; throws Error(invalid_argument) if the
/// variant is unavailable.
NearestFn nearest_kernel(Isa isa);

/// Variant used by `nearest`: IMDD_KERNEL if set and available, else the
/// widest available one.
Isa active_isa();
void set_active_isa(Isa isa);

void nearest(PointsView points, SamplesView samples, std::uint32_t* out);

}  // namespace imdd::kernels
