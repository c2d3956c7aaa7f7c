#pragma once

#include <functional>
#include <span>
#include <vector>

namespace imdd::detail {

struct LbfgsOptions {
  int history = 8;
  double gradient_tol = 1e-10;  ///< on ||g||_inf / max(1, |f|)
  double step_tol = 1e-15;      ///< on ||dx|| / (1 + ||x||)
  int max_iterations = 3000;
};

enum class LbfgsStatus { gradient, small_step, no_descent, max_iterations };

struct LbfgsResult {
  double value = 0.0;
  int iterations = 0;
  LbfgsStatus status = LbfgsStatus::max_iterations;

  /// Anything but running out of iterations means the iterate is stationary
  /// to working precision.
  bool converged() const noexcept { return status != LbfgsStatus::max_iterations; }
};

/// Function value with gradient written to the second argument.
using GradientFn = std::function<double(std::span<const double>, std::span<double>)>;

/// Limited-memory BFGS with a weak-Wolfe bisection line search. `x` is
/// updated in place.
LbfgsResult lbfgs_minimize(std::vector<double>& x, const GradientFn& fn, const LbfgsOptions& options);

}  // namespace imdd::detail
