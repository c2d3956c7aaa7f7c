#include <doctest.h>

#include <random>

#include "imdd/catalog.hpp"
#include "imdd/error.hpp"
#include "imdd/kernels.hpp"

using namespace imdd;
using namespace imdd::kernels;

namespace {

struct Soa {
  std::vector<double> x, y, z;
  void push(double a, double b, double c) {
    x.push_back(a);
    y.push_back(b);
    z.push_back(c);
  }
};

// Reference: straightforward scan, strict less, same summation order.
std::uint32_t brute(const Soa& p, double a, double b, double c) {
  std::uint32_t best = 0;
  double bd = 0;
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    const double dx = a - p.x[i], dy = b - p.y[i], dz = c - p.z[i];
    const double d = (dx * dx + dy * dy) + dz * dz;
    if (i == 0 || d < bd) {
      bd = d;
      best = static_cast<std::uint32_t>(i);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("scalar is available first") {
  const auto isas = available_isas();
  REQUIRE_FALSE(isas.empty());
  CHECK(isas.front() == Isa::scalar);
  CHECK(parse_isa(to_string(active_isa())) == active_isa());
  CHECK_THROWS(parse_isa("mmx"));
}

TEST_CASE("all variants agree with the reference") {
  std::mt19937_64 gen(41);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (std::size_t m : {1u, 2u, 3u, 4u, 5u, 8u, 9u, 16u, 33u}) {
    Soa pts;
    for (std::size_t i = 0; i < m; ++i) pts.push(u(gen), u(gen), u(gen));
    for (std::size_t n : {0u, 1u, 3u, 7u, 8u, 15u, 1000u}) {
      Soa s;
      for (std::size_t i = 0; i < n; ++i) {
        if (i % 5 == 0) {
          // exact copy of a point and exact midpoints exercise ties
          const std::size_t a = i % m, b = (i / 5) % m;
          s.push(0.5 * (pts.x[a] + pts.x[b]), 0.5 * (pts.y[a] + pts.y[b]), 0.5 * (pts.z[a] + pts.z[b]));
        } else {
          s.push(u(gen), u(gen), u(gen));
        }
      }
      const PointsView pv{pts.x.data(), pts.y.data(), pts.z.data(), m};
      const SamplesView sv{s.x.data(), s.y.data(), s.z.data(), n};
      std::vector<std::uint32_t> want(n);
      for (std::size_t i = 0; i < n; ++i) want[i] = brute(pts, s.x[i], s.y[i], s.z[i]);
      for (auto isa : available_isas()) {
        CAPTURE(to_string(isa));
        std::vector<std::uint32_t> got(n, 999);
        nearest_kernel(isa)(pv, sv, got.data());
        CHECK(got == want);
      }
    }
  }
}

TEST_CASE("symmetric ties resolve to the smallest index") {
  Soa pts;
  pts.push(0, 0, 0);
  pts.push(0, 0, 0);  // duplicated on purpose
  pts.push(1, 0, 0);
  pts.push(-1, 0, 0);
  Soa s;
  for (int i = 0; i < 17; ++i) s.push(0, 0, 0);
  s.push(0.5, 0, 0);
  for (auto isa : available_isas()) {
    std::vector<std::uint32_t> got(s.x.size());
    nearest_kernel(isa)({pts.x.data(), pts.y.data(), pts.z.data(), 4}, {s.x.data(), s.y.data(), s.z.data(), s.x.size()},
                        got.data());
    for (int i = 0; i < 17; ++i) CHECK(got[i] == 0);
    CHECK(got[17] == 0);
  }
}

TEST_CASE("active variant can be switched") {
  const auto before = active_isa();
  for (auto isa : available_isas()) {
    set_active_isa(isa);
    CHECK(active_isa() == isa);
  }
  set_active_isa(before);
  for (auto isa : {Isa::scalar, Isa::avx2, Isa::avx512, Isa::neon}) {
    bool have = false;
    for (auto a : available_isas()) have |= a == isa;
    if (!have) CHECK_THROWS_AS(nearest_kernel(isa), Error);
  }
}
