#include "imdd/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "imdd/parallel.hpp"
#include "imdd/rng.hpp"
#include "lbfgs.hpp"

namespace imdd::optimizer {
namespace {

std::vector<Vec3> unpack(std::span<const double> x) {
  std::vector<Vec3> pts(x.size() / 3);
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = {x[3 * i], x[3 * i + 1], x[3 * i + 2]};
  return pts;
}

double min_pair_distance(std::span<const Vec3> pts) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::min(best, squared_distance(pts[i], pts[j]));
  }
  return std::sqrt(best);
}

// Cone projection along the transverse direction, then rescale to minimum
// distance exactly d_min. Scaling keeps cone membership, so the result is
// feasible unless points coincide.
std::optional<std::vector<Vec3>> polish(std::span<const double> x, double d_min) {
  auto pts = unpack(x);
  for (auto& p : pts) {
    if (p[0] < 0.0) p[0] = 0.0;
    const double r = std::hypot(p[1], p[2]);
    const double r_max = p[0] / std::numbers::sqrt2;
    if (r > r_max) {
      const double shrink = r > 0.0 ? r_max / r : 0.0;
      p[1] *= shrink;
      p[2] *= shrink;
    }
  }
  const double d = min_pair_distance(pts);
  if (!(d > 1e-9 * d_min) || !std::isfinite(d)) return std::nullopt;
  const double scale = d_min / d;
  for (auto& p : pts) {
    for (auto& v : p) v *= scale;
  }
  return pts;
}

struct Constraint {
  enum class Kind { pair, cone, coordinate } kind;
  std::size_t i;
  std::size_t j;  // partner point for pairs, coordinate index otherwise
};

// Solves (A + ridge I) y = b for symmetric positive semidefinite A in place.
bool cholesky_solve(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
  double trace = 0.0;
  for (std::size_t k = 0; k < n; ++k) trace += a[k * n + k];
  const double ridge = 1e-13 * std::max(trace / static_cast<double>(n), 1.0);
  for (std::size_t k = 0; k < n; ++k) a[k * n + k] += ridge;
  for (std::size_t k = 0; k < n; ++k) {
    double d = a[k * n + k];
    for (std::size_t p = 0; p < k; ++p) d -= a[k * n + p] * a[k * n + p];
    if (!(d > 0.0)) return false;
    d = std::sqrt(d);
    a[k * n + k] = d;
    for (std::size_t r = k + 1; r < n; ++r) {
      double v = a[r * n + k];
      for (std::size_t p = 0; p < k; ++p) v -= a[r * n + p] * a[k * n + p];
      a[r * n + k] = v / d;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    double v = b[k];
    for (std::size_t p = 0; p < k; ++p) v -= a[k * n + p] * b[p];
    b[k] = v / a[k * n + k];
  }
  for (std::size_t k = n; k-- > 0;) {
    double v = b[k];
    for (std::size_t p = k + 1; p < n; ++p) v -= a[p * n + k] * b[p];
    b[k] = v / a[k * n + k];
  }
  return true;
}

// Moves the iterate onto the manifold where its nearly active constraints
// hold with equality, by minimum-norm Gauss-Newton steps.
std::optional<std::vector<double>> project_active(std::span<const double> x0, double d_min) {
  constexpr double kActive = 1e-3;
  const std::size_t m = x0.size() / 3;
  std::vector<double> x(x0.begin(), x0.end());
  std::vector<Constraint> active;
  for (std::size_t i = 0; i < m; ++i) {
    const double s1 = x[3 * i];
    const double r = std::hypot(x[3 * i + 1], x[3 * i + 2]);
    if (s1 < kActive * d_min) {
      for (std::size_t k = 0; k < 3; ++k) active.push_back({Constraint::Kind::coordinate, i, k});
    } else if (std::numbers::sqrt2 * r - s1 > -kActive * s1 && r > 0.0) {
      active.push_back({Constraint::Kind::cone, i, 0});
    }
    for (std::size_t j = i + 1; j < m; ++j) {
      const double d = std::sqrt(squared_distance({x[3 * i], x[3 * i + 1], x[3 * i + 2]},
                                                  {x[3 * j], x[3 * j + 1], x[3 * j + 2]}));
      if (std::abs(d - d_min) < kActive * d_min) active.push_back({Constraint::Kind::pair, i, j});
    }
  }
  if (active.empty()) return std::nullopt;

  const std::size_t n = active.size();
  const std::size_t dim = x.size();
  std::vector<double> jac(n * dim);
  std::vector<double> res(n);
  for (int iter = 0; iter < 50; ++iter) {
    std::fill(jac.begin(), jac.end(), 0.0);
    double worst = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      const auto& k = active[c];
      double* row = &jac[c * dim];
      const double* s = &x[3 * k.i];
      switch (k.kind) {
        case Constraint::Kind::coordinate:
          res[c] = s[k.j];
          row[3 * k.i + k.j] = 1.0;
          break;
        case Constraint::Kind::cone: {
          const double r = std::hypot(s[1], s[2]);
          if (!(r > 0.0)) return std::nullopt;
          res[c] = std::numbers::sqrt2 * r - s[0];
          row[3 * k.i] = -1.0;
          row[3 * k.i + 1] = std::numbers::sqrt2 * s[1] / r;
          row[3 * k.i + 2] = std::numbers::sqrt2 * s[2] / r;
          break;
        }
        case Constraint::Kind::pair: {
          const double* t = &x[3 * k.j];
          double dsq = 0.0;
          for (int a = 0; a < 3; ++a) {
            const double diff = s[a] - t[a];
            dsq += diff * diff;
            row[3 * k.i + a] = 2.0 * diff;
            row[3 * k.j + a] = -2.0 * diff;
          }
          res[c] = dsq - d_min * d_min;
          break;
        }
      }
      worst = std::max(worst, std::abs(res[c]));
    }
    if (worst < 1e-15 * std::max(1.0, d_min * d_min)) return x;
    std::vector<double> normal(n * n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b <= a; ++b) {
        double v = 0.0;
        for (std::size_t q = 0; q < dim; ++q) v += jac[a * dim + q] * jac[b * dim + q];
        normal[a * n + b] = v;
        normal[b * n + a] = v;
      }
    }
    std::vector<double> y = res;
    if (!cholesky_solve(normal, y, n)) return std::nullopt;
    double step = 0.0;
    for (std::size_t q = 0; q < dim; ++q) {
      double v = 0.0;
      for (std::size_t c = 0; c < n; ++c) v += jac[c * dim + q] * y[c];
      x[q] -= v;
      step = std::max(step, std::abs(v));
    }
    if (!std::isfinite(step) || step > 0.1 * d_min) return std::nullopt;
  }
  return x;
}

std::vector<double> initial_configuration(std::size_t m, std::uint64_t seed) {
  rng::Stream stream(seed);
  const double height = 1.5 * std::sqrt(static_cast<double>(m));
  std::vector<double> x(3 * m);
  for (std::size_t i = 0; i < m; ++i) {
    const double s1 = height * stream.uniform();
    // uniform in the disk of radius s1 / sqrt(2)
    const double r = (s1 / std::numbers::sqrt2) * std::sqrt(stream.uniform());
    const double a = 2.0 * std::numbers::pi * stream.uniform();
    x[3 * i] = s1;
    x[3 * i + 1] = r * std::cos(a);
    x[3 * i + 2] = r * std::sin(a);
  }
  return x;
}

}  // namespace

void PackingProblem::validate() const {
  if (m < 2) throw Error(ErrorKind::invalid_argument, "M must be at least 2");
  if (!(d_min > 0.0)) throw Error(ErrorKind::invalid_argument, "d_min must be positive");
  if (starts < 1) throw Error(ErrorKind::invalid_argument, "starts must be at least 1");
  if (!(penalty.growth > 1.0)) throw Error(ErrorKind::invalid_argument, "penalty growth factor must exceed 1");
  if (!(penalty.initial_weight > 0.0)) throw Error(ErrorKind::invalid_argument, "penalty weight must be positive");
  if (penalty.rounds < 1) throw Error(ErrorKind::invalid_argument, "penalty rounds must be at least 1");
}

FeasibilityReport feasibility(std::span<const Vec3> points) {
  FeasibilityReport report;
  report.max_cone_violation = 0.0;
  for (const auto& p : points) report.max_cone_violation = std::max(report.max_cone_violation, AdmissibleCone::violation(p));
  report.min_pair_distance = min_pair_distance(points);
  return report;
}

double penalized_objective(std::span<const double> x, Objective objective, double d_min, double weight,
                           std::span<double> grad) {
  const std::size_t m = x.size() / 3;
  const double inv_m = 1.0 / static_cast<double>(m);
  const bool want_grad = !grad.empty();
  if (want_grad) std::fill(grad.begin(), grad.end(), 0.0);

  double base = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double* s = &x[3 * i];
    if (objective == Objective::electrical) {
      base += s[0] * s[0] + s[1] * s[1] + s[2] * s[2];
      if (want_grad) {
        for (int k = 0; k < 3; ++k) grad[3 * i + k] += 2.0 * inv_m * s[k];
      }
    } else {
      base += s[0];
      if (want_grad) grad[3 * i] += inv_m;
    }
  }
  base *= inv_m;

  const double dsq = d_min * d_min;
  double penalty = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double dx = x[3 * i] - x[3 * j];
      const double dy = x[3 * i + 1] - x[3 * j + 1];
      const double dz = x[3 * i + 2] - x[3 * j + 2];
      const double h = dsq - (dx * dx + dy * dy + dz * dz);
      if (h <= 0.0) continue;
      penalty += h * h;
      if (want_grad) {
        // d(h^2)/ds_i = 2h * (-2 (s_i - s_j))
        const double c = -4.0 * weight * h;
        grad[3 * i] += c * dx;
        grad[3 * i + 1] += c * dy;
        grad[3 * i + 2] += c * dz;
        grad[3 * j] -= c * dx;
        grad[3 * j + 1] -= c * dy;
        grad[3 * j + 2] -= c * dz;
      }
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double s1 = x[3 * i];
    const double s2 = x[3 * i + 1];
    const double s3 = x[3 * i + 2];
    const double cone = 2.0 * (s2 * s2 + s3 * s3) - s1 * s1;
    if (cone > 0.0) {
      penalty += cone * cone;
      if (want_grad) {
        const double c = 2.0 * weight * cone;
        grad[3 * i] += c * (-2.0 * s1);
        grad[3 * i + 1] += c * (4.0 * s2);
        grad[3 * i + 2] += c * (4.0 * s3);
      }
    }
    if (s1 < 0.0) {
      penalty += s1 * s1;
      if (want_grad) grad[3 * i] += 2.0 * weight * s1;
    }
  }
  return base + weight * penalty;
}

StartResult run_start(const PackingProblem& problem, std::size_t start_index) {
  StartResult out;
  out.summary.start_index = start_index;
  std::vector<double> x = initial_configuration(problem.m, rng::derive_seed(problem.seed, start_index));

  detail::LbfgsOptions options;
  options.gradient_tol = problem.local.gradient_norm;
  options.step_tol = problem.local.step;
  options.max_iterations = problem.local.max_iterations;

  double best = std::numeric_limits<double>::infinity();
  double weight = problem.penalty.initial_weight;
  bool last_converged = false;
  for (int round = 0; round < problem.penalty.rounds; ++round, weight *= problem.penalty.growth) {
    auto fn = [&](std::span<const double> v, std::span<double> g) {
      return penalized_objective(v, problem.objective, problem.d_min, weight, g);
    };
    const auto local = detail::lbfgs_minimize(x, fn, options);
    last_converged = local.converged();
    auto consider = [&](std::span<const double> v) {
      if (auto candidate = polish(v, problem.d_min)) {
        const double value = objective_value(*candidate, problem.objective);
        if (value < best) {
          best = value;
          out.points = std::move(*candidate);
        }
      }
    };
    consider(x);
    if (auto projected = project_active(x, problem.d_min)) consider(*projected);
    out.summary.round_best.push_back(best);
  }
  out.summary.feasible = !out.points.empty();
  out.summary.converged = out.summary.feasible && last_converged;
  out.summary.objective_value = best;
  return out;
}

SolveOutcome solve(const PackingProblem& problem, unsigned threads) {
  problem.validate();
  std::vector<StartResult> runs(problem.starts);
  parallel_for(problem.starts, threads, [&](std::size_t i) { runs[i] = run_start(problem, i); });

  const StartResult* best = nullptr;
  for (const auto& r : runs) {
    if (!r.summary.feasible) continue;
    if (best == nullptr || r.summary.objective_value < best->summary.objective_value) best = &r;
  }
  if (best == nullptr) {
    throw Error(ErrorKind::infeasible, "no feasible configuration after " + std::to_string(problem.starts) +
                                           " starts");
  }

  std::string name = "opt-" + std::string(to_string(problem.objective)) + "-" + std::to_string(problem.m);
  Constellation raw(name, BandwidthModel::subcarrier, 3, best->points);
  Constellation canonical = canonicalize(raw);

  SolveOutcome outcome{
      PackingResult{canonical, problem.objective, objective_value(canonical, problem.objective),
                    feasibility(canonical.points()), best->summary.start_index, best->summary.converged},
      {}};
  outcome.starts.reserve(runs.size());
  for (auto& r : runs) outcome.starts.push_back(std::move(r.summary));
  return outcome;
}

CongruenceReport compare_constellations(const Constellation& a, const Constellation& b, Objective objective) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::invalid_argument, "cannot compare constellations of sizes " + std::to_string(a.size()) +
                                                 " and " + std::to_string(b.size()));
  }
  CongruenceReport report{};
  report.objective_gap = objective_value(a, objective) - objective_value(b, objective);

  const Constellation ca = canonicalize(a);
  const Constellation cb = canonicalize(b);
  auto directed = [](const Constellation& from, const Constellation& to) {
    double worst = 0.0;
    for (const auto& p : from.points()) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& q : to.points()) nearest = std::min(nearest, squared_distance(p, q));
      worst = std::max(worst, std::sqrt(nearest));
    }
    return worst;
  };
  report.hausdorff = std::max(directed(ca, cb), directed(cb, ca));

  const auto da = pairwise_distances(a.points());
  const auto db = pairwise_distances(b.points());
  for (std::size_t i = 0; i < da.size(); ++i) {
    report.distance_multiset_deviation = std::max(report.distance_multiset_deviation, std::abs(da[i] - db[i]));
  }
  return report;
}

CongruenceReport compare_to_reference(const PackingResult& result, const Constellation& reference) {
  return compare_constellations(result.constellation, reference, result.objective);
}

}  // namespace imdd::optimizer
