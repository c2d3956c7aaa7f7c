#pragma once

// A3 (face-centered cubic) lattice constellations inside the admissible cone.
//
// The lattice is the integer FCC model {q in Z^3 : q1 + q2 + q3 even} scaled
// by 1/sqrt(2) (minimum distance one), mapped into signal space as
// rotation * q / sqrt(2) + offset.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "imdd/geometry.hpp"
#include "imdd/signal_space.hpp"

namespace imdd::lattice {

struct LatticeFrame {
  Mat3 generator;  ///< rows generate the unit-minimum-distance lattice
  Mat3 rotation;
  Vec3 offset{0.0, 0.0, 0.0};

  /// One lattice tetrahedron has its apex at the origin and its
  /// circumscribed-cone axis along the DC axis; reproduces the tetrahedral
  /// four-point constellation as the lowest layer.
  static LatticeFrame aligned();

  Vec3 map(const std::array<int, 3>& fcc) const noexcept;
};

struct LatticeCandidateSet {
  std::vector<Vec3> points;  ///< sorted by DC level, then lexicographically
  LatticeFrame frame;
};

inline constexpr std::size_t kDefaultCandidateCap = 100000;

/// All lattice points inside the cone (tolerance 1e-9) with s1 <= h_max.
/// Throws Error(resource_cap) if more than `cap` points qualify.
LatticeCandidateSet enumerate_cone_lattice(const LatticeFrame& frame, double h_max,
                                           std::size_t cap = kDefaultCandidateCap);

struct SearchOptions {
  /// Exhaustive enumeration when C(n, M) is at most this, else branch and bound.
  std::uint64_t exhaustive_cap = 200000;
};

struct SearchStats {
  bool exhaustive = false;
  std::uint64_t nodes = 0;  ///< subsets (exhaustive) or tree nodes visited
};

/// Minimum-objective M-subset of the candidates. Ties on the objective are
/// broken by the other objective, then by the lexicographically smallest
/// sorted coordinate list. Throws Error(infeasible) if |candidates| < M.
Constellation search_lattice_constellation(const LatticeCandidateSet& candidates, std::size_t m,
                                           Objective objective, SearchOptions options = {},
                                           SearchStats* stats = nullptr);

enum class FrameGrid {
  aligned_only,  ///< the aligned frame alone
  grid,          ///< aligned frame and 24 tilts, each with 27 offsets
};

/// Frames in evaluation order; index 0 is always the aligned frame.
std::vector<LatticeFrame> frame_grid(FrameGrid grid);

struct FrameSearchResult {
  LatticeFrame frame;
  Constellation constellation;
  std::size_t frame_index;
  std::size_t frames_evaluated;
  double objective;
};

/// Best lattice constellation over the frame grid; ties keep the earliest frame.
FrameSearchResult optimize_frame(std::size_t m, Objective objective, FrameGrid grid = FrameGrid::aligned_only,
                                 double h_max = 3.0, SearchOptions options = {});

}  // namespace imdd::lattice
