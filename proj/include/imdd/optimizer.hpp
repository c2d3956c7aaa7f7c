#pragma once

// Numerical sphere packing in the admissible cone: place M points with
// pairwise distance at least d_min inside the cone while minimizing the mean
// squared norm (electrical) or the mean DC coordinate (optical).
//
// Each start draws a random configuration inside the cone and runs rounds of
// quasi-Newton minimization on the quadratic-penalty objective
//
//   f(x) + w * ( sum_{i<j} max(0, d^2 - |s_i - s_j|^2)^2
//              + sum_i max(0, 2(s2^2 + s3^2) - s1^2)^2 + max(0, -s1)^2 )
//
// with the weight w escalating per round. After every round the iterate is
// projected into the cone and rescaled to minimum distance exactly d_min,
// which yields a feasible candidate. A second candidate comes from first
// moving the iterate onto the manifold of its nearly active constraints
// (Gauss-Newton, minimum norm), which removes the O(w^-1/2) drift of points
// sitting at the cone apex. The best candidate over rounds and starts wins.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "imdd/signal_space.hpp"

namespace imdd::optimizer {

struct PenaltySchedule {
  double initial_weight = 1e2;
  double growth = 10.0;
  int rounds = 5;
};

struct LocalSolverTolerances {
  double gradient_norm = 1e-10;  ///< infinity norm, relative to max(1, |f|)
  double step = 1e-15;           ///< relative step length below which the solver stops
  int max_iterations = 3000;
};

struct PackingProblem {
  std::size_t m = 4;
  Objective objective = Objective::electrical;
  double d_min = 1.0;
  std::size_t starts = 200;
  std::uint64_t seed = 1;
  PenaltySchedule penalty;
  LocalSolverTolerances local;

  /// 200 starts for M <= 4, 2000 otherwise.
  static std::size_t default_starts(std::size_t m) noexcept { return m <= 4 ? 200 : 2000; }
  /// Throws Error(invalid_argument) on a malformed problem.
  void validate() const;
};

struct FeasibilityReport {
  double max_cone_violation = 0.0;
  double min_pair_distance = 0.0;
};

struct PackingResult {
  Constellation constellation;  ///< canonicalized, minimum distance d_min
  Objective objective;
  double objective_value;
  FeasibilityReport feasibility;
  std::size_t start_index;
  bool converged;
};

/// Outcome of one start; `objective_value` is the best feasible value found
/// by the end of each penalty round (nonincreasing by construction).
struct StartSummary {
  std::size_t start_index = 0;
  bool feasible = false;
  bool converged = false;
  double objective_value = 0.0;
  std::vector<double> round_best;
};

struct SolveOutcome {
  PackingResult best;
  std::vector<StartSummary> starts;
};

/// Best feasible result over all starts; ties keep the lowest start index.
/// Results do not depend on `threads`. Throws Error(infeasible) if no start
/// produced a feasible configuration.
SolveOutcome solve(const PackingProblem& problem, unsigned threads = 1);

/// Runs a single start; exposed for tests.
struct StartResult {
  StartSummary summary;
  std::vector<Vec3> points;  ///< best feasible configuration, empty if none
};
StartResult run_start(const PackingProblem& problem, std::size_t start_index);

/// Penalized objective at x = (s_0, s_1, ...) flattened; writes the gradient
/// into `grad` (same size as x) when non-empty.
double penalized_objective(std::span<const double> x, Objective objective, double d_min, double weight,
                           std::span<double> grad);

/// Quotient by the cone's symmetry group: picks the rotation about the DC
/// axis and optional s3 reflection giving the lexicographically smallest
/// sorted coordinate list. Requires a three-dimensional constellation.
Constellation canonicalize(const Constellation& c);

struct CongruenceReport {
  double objective_gap;            ///< result minus reference
  double hausdorff;                ///< after canonicalizing both
  double distance_multiset_deviation;  ///< max |sorted pairwise distance difference|
};

CongruenceReport compare_to_reference(const PackingResult& result, const Constellation& reference);
CongruenceReport compare_constellations(const Constellation& a, const Constellation& b, Objective objective);

FeasibilityReport feasibility(std::span<const Vec3> points);

}  // namespace imdd::optimizer
