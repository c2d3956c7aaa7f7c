#include "lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

namespace imdd::detail {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double inf_norm(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

struct Correction {
  std::vector<double> s;
  std::vector<double> y;
  double rho;
};

}  // namespace

LbfgsResult lbfgs_minimize(std::vector<double>& x, const GradientFn& fn, const LbfgsOptions& options) {
  const std::size_t n = x.size();
  std::vector<double> g(n), d(n), x_new(n), g_new(n), alpha(static_cast<std::size_t>(options.history));
  std::deque<Correction> memory;

  LbfgsResult result;
  double f = fn(x, g);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    result.iterations = iter;
    if (inf_norm(g) <= options.gradient_tol * std::max(1.0, std::abs(f))) {
      result.status = LbfgsStatus::gradient;
      result.value = f;
      return result;
    }

    // two-loop recursion
    for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
    for (std::size_t k = memory.size(); k-- > 0;) {
      alpha[k] = memory[k].rho * dot(memory[k].s, d);
      for (std::size_t i = 0; i < n; ++i) d[i] -= alpha[k] * memory[k].y[i];
    }
    if (!memory.empty()) {
      const auto& last = memory.back();
      const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
      for (auto& v : d) v *= gamma;
    }
    for (std::size_t k = 0; k < memory.size(); ++k) {
      const double beta = memory[k].rho * dot(memory[k].y, d);
      for (std::size_t i = 0; i < n; ++i) d[i] += (alpha[k] - beta) * memory[k].s[i];
    }

    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      memory.clear();
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
      slope = dot(g, d);
    }

    double t = memory.empty() ? std::min(1.0, 1.0 / std::max(inf_norm(g), 1e-300)) : 1.0;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    double f_new = f;
    bool accepted = false;
    constexpr double c1 = 1e-4;
    constexpr double c2 = 0.9;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + t * d[i];
      f_new = fn(x_new, g_new);
      if (!(f_new <= f + c1 * t * slope)) {
        hi = t;
      } else if (dot(g_new, d) < c2 * slope) {
        lo = t;
      } else {
        accepted = true;
        break;
      }
      t = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * lo;
    }
    if (!accepted) {
      // Accept any strict decrease found at the last bracket point.
      if (lo > 0.0) {
        t = lo;
        for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + t * d[i];
        f_new = fn(x_new, g_new);
      }
      if (!(lo > 0.0) || !(f_new < f)) {
        result.status = LbfgsStatus::no_descent;
        result.value = f;
        return result;
      }
    }

    Correction c;
    c.s.resize(n);
    c.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      c.s[i] = x_new[i] - x[i];
      c.y[i] = g_new[i] - g[i];
    }
    const double step_norm = std::sqrt(dot(c.s, c.s));
    const double x_norm = std::sqrt(dot(x, x));
    const double sy = dot(c.s, c.y);
    x.swap(x_new);
    g.swap(g_new);
    f = f_new;
    if (sy > 1e-300) {
      c.rho = 1.0 / sy;
      memory.push_back(std::move(c));
      if (memory.size() > static_cast<std::size_t>(options.history)) memory.pop_front();
    }
    if (step_norm <= options.step_tol * (1.0 + x_norm)) {
      result.status = LbfgsStatus::small_step;
      result.value = f;
      return result;
    }
  }
  result.iterations = options.max_iterations;
  result.status = LbfgsStatus::max_iterations;
  result.value = f;
  return result;
}

}  // namespace imdd::detail
