#include <doctest.h>

#include <cmath>
#include <set>

#include "imdd/rng.hpp"

using namespace imdd::rng;

TEST_CASE("philox4x32-10 known answers") {
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("unit conversions stay in range") {
  CHECK(to_unit(0, 0) == 0.0);
  CHECK(to_unit(0xffffffff, 0xffffffff) < 1.0);
  CHECK(to_unit_open_low(0, 0) > 0.0);
  CHECK(to_unit_open_low(0xffffffff, 0xffffffff) == 1.0);
}

TEST_CASE("box muller moments") {
  const std::uint32_t n = 200000;
  double s = 0, s2 = 0, s4 = 0, cross = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto z = box_muller(philox4x32({i, 0, 0, 0}, {7, 9}));
    for (double v : z) {
      s += v;
      s2 += v * v;
      s4 += v * v * v * v;
    }
    cross += z[0] * z[1];
  }
  const double m = 2.0 * n;
  CHECK(std::abs(s / m) < 5 * std::sqrt(1 / m));
  CHECK(std::abs(s2 / m - 1) < 5 * std::sqrt(2 / m));
  CHECK(std::abs(s4 / m - 3) < 5 * std::sqrt(96 / m));
  CHECK(std::abs(cross / n) < 5 * std::sqrt(1.0 / n));
}

TEST_CASE("derived seeds and streams") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(derive_seed(42, i));
  CHECK(seen.size() == 10000);
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  Stream a(5), b(5), c(6);
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    CHECK(x != c.uniform());
  }
}
