#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "imdd/catalog.hpp"
#include "imdd/error.hpp"
#include "imdd/optimizer.hpp"
#include "oracles.hpp"

using namespace imdd;
using namespace imdd::optimizer;

namespace {

Constellation c4() {
  const auto p = oracle::c4();
  return Constellation("c4", BandwidthModel::subcarrier, 3, std::vector<Vec3>(p.begin(), p.end()));
}

std::vector<double> random_cone_points(std::mt19937_64& gen, std::size_t m, double height) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x;
  for (std::size_t i = 0; i < m; ++i) {
    const double s1 = height * u(gen);
    const double r = s1 / std::numbers::sqrt2 * std::sqrt(u(gen));
    const double a = 2 * std::numbers::pi * u(gen);
    x.insert(x.end(), {s1, r * std::cos(a), r * std::sin(a)});
  }
  return x;
}

void check_same(const Constellation& a, const Constellation& b, double tol) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (int k = 0; k < 3; ++k) CHECK(std::abs(a[i][k] - b[i][k]) <= tol);
}

}  // namespace

TEST_CASE("penalized gradient matches central differences") {
  std::mt19937_64 gen(29);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  int points = 0;
  for (int t = 0; t < 100; ++t, ++points) {
    const std::size_t m = 2 + t % 7;
    // low frustum so that pair penalties are active; jitter pushes some points out of the cone
    auto x = random_cone_points(gen, m, 1.2);
    if (t % 2) {
      for (auto& v : x) v += u(gen);
    }
    const auto obj = t % 3 ? Objective::electrical : Objective::optical;
    const double w = t % 4 ? 1e2 : 1e4;
    std::vector<double> g(x.size());
    penalized_objective(x, obj, 1.0, w, g);
    const double h = 1e-6;
    double err = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      auto xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      const double fd = (penalized_objective(xp, obj, 1.0, w, {}) - penalized_objective(xm, obj, 1.0, w, {})) / (2 * h);
      err = std::max(err, std::abs(fd - g[k]));
      scale = std::max(scale, std::abs(fd));
    }
    CHECK(err <= 1e-5 * std::max(1.0, scale));
  }
  CHECK(points == 100);
}

TEST_CASE("penalty vanishes on feasible configurations") {
  const auto p = oracle::c_pe_8();
  std::vector<double> x;
  for (const auto& v : p) x.insert(x.end(), v.begin(), v.end());
  CHECK(penalized_objective(x, Objective::electrical, 1.0 - 1e-9, 1e6, {}) == doctest::Approx(1.75).epsilon(1e-14));
}

TEST_CASE("canonicalize examples") {
  const auto base = canonicalize(c4());
  check_same(canonicalize(c4().rotated_about_axis(17.0 * std::numbers::pi / 180)), base, 1e-6);
  check_same(canonicalize(c4().reflected()), base, 1e-6);
  check_same(canonicalize(base), base, 1e-12);
  CHECK_THROWS_AS(canonicalize(Constellation::from_rows("o", BandwidthModel::baseband, {{0}, {1}})), Error);
}

TEST_CASE("canonicalize is a symmetry quotient") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
  for (int t = 0; t < 100; ++t) {
    const auto x = random_cone_points(gen, 3 + t % 6, 3.0);
    std::vector<Vec3> pts;
    for (std::size_t i = 0; i < x.size(); i += 3) pts.push_back({x[i], x[i + 1], x[i + 2]});
    const Constellation c("r", BandwidthModel::subcarrier, 3, pts);
    const auto k = canonicalize(c);
    check_same(canonicalize(k), k, 1e-12);
    check_same(canonicalize(c.rotated_about_axis(angle(gen))), k, 1e-6);
    check_same(canonicalize(c.reflected().rotated_about_axis(angle(gen))), k, 1e-6);
    CHECK(objective_value(k, Objective::electrical) == doctest::Approx(objective_value(c, Objective::electrical)));
  }
}

TEST_CASE("compare c4 to itself") {
  const auto r = compare_constellations(c4(), c4().rotated_about_axis(1.0), Objective::electrical);
  CHECK(std::abs(r.objective_gap) < 1e-15);
  CHECK(r.hausdorff < 1e-12);
  CHECK(r.distance_multiset_deviation < 1e-15);
}

TEST_CASE("two points") {
  // oracle: coarse brute force over the apex-anchored pair and a shifted pair
  double best_e = 1e9, best_o = 1e9;
  for (int a = 0; a <= 40; ++a) {
    const double s1 = 0.05 * a;
    for (int b = 0; b <= 180; ++b) {
      const double th = std::numbers::pi * b / 180;
      const oracle::P p0{s1, 0, 0};
      const oracle::P p1{s1 + std::cos(th), std::sin(th), 0};
      const std::vector<oracle::P> v{p0, p1};
      if (p1[0] < 0 || p1[0] * p1[0] < 2 * p1[1] * p1[1] - 1e-12) continue;
      best_e = std::min(best_e, oracle::energy(v));
      best_o = std::min(best_o, oracle::dc(v));
    }
  }
  for (auto o : {Objective::electrical, Objective::optical}) {
    PackingProblem p;
    p.m = 2;
    p.objective = o;
    p.starts = 50;
    const auto r = solve(p).best;
    const double want = o == Objective::electrical ? 0.5 : oracle::r23 / 2;
    CHECK(std::abs(r.objective_value - want) < 1e-5);
    CHECK(r.objective_value <= (o == Objective::electrical ? best_e : best_o) + 1e-9);
    CHECK(std::abs(min_distance(r.constellation) - 1.0) < 1e-12);
  }
}

TEST_CASE("four points recover c4") {
  for (auto o : {Objective::electrical, Objective::optical}) {
    PackingProblem p;
    p.m = 4;
    p.objective = o;
    p.starts = PackingProblem::default_starts(4);
    const auto out = solve(p);
    const double want = o == Objective::electrical ? 0.75 : 0.75 * oracle::r23;
    CHECK(std::abs(out.best.objective_value - want) < 1e-5);
    const auto rep = compare_to_reference(out.best, c4());
    CHECK(rep.distance_multiset_deviation < 1e-5);
    CHECK(rep.hausdorff < 1e-4);
    CHECK(out.best.feasibility.max_cone_violation <= 1e-6);
    CHECK(out.best.feasibility.min_pair_distance >= 1 - 1e-6);
    CHECK(out.starts.size() == p.starts);
  }
}

TEST_CASE("rounds never worsen the best feasible value") {
  PackingProblem p;
  p.m = 6;
  p.objective = Objective::optical;
  for (std::size_t s = 0; s < 30; ++s) {
    const auto r = run_start(p, s);
    REQUIRE(r.summary.round_best.size() == static_cast<std::size_t>(p.penalty.rounds));
    for (std::size_t k = 1; k < r.summary.round_best.size(); ++k) CHECK(r.summary.round_best[k] <= r.summary.round_best[k - 1]);
    if (r.summary.feasible) {
      const auto f = feasibility(r.points);
      CHECK(f.max_cone_violation <= 1e-6);
      CHECK(f.min_pair_distance >= 1 - 1e-6);
    }
  }
}

TEST_CASE("results do not depend on the worker count") {
  PackingProblem p;
  p.m = 5;
  p.objective = Objective::electrical;
  p.starts = 40;
  p.seed = 99;
  const auto a = solve(p, 1);
  const auto b = solve(p, 4);
  CHECK(a.best.start_index == b.best.start_index);
  CHECK(a.best.objective_value == b.best.objective_value);
  for (std::size_t i = 0; i < 5; ++i)
    for (int k = 0; k < 3; ++k) CHECK(a.best.constellation[i][k] == b.best.constellation[i][k]);
  for (std::size_t s = 0; s < p.starts; ++s) CHECK(a.starts[s].round_best == b.starts[s].round_best);
}

TEST_CASE("scaled minimum distance") {
  PackingProblem p;
  p.m = 4;
  p.d_min = 2.0;
  p.starts = 40;
  const auto r = solve(p).best;
  CHECK(r.objective_value == doctest::Approx(4 * 0.75).epsilon(1e-6));
  CHECK(min_distance(r.constellation) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("problem validation") {
  PackingProblem p;
  p.m = 1;
  CHECK_THROWS_AS(p.validate(), Error);
  p.m = 4;
  p.penalty.growth = 1.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p.penalty.growth = 10.0;
  p.starts = 0;
  CHECK_THROWS_AS(solve(p), Error);
}
