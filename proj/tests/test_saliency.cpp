#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "saliency.hpp"
#include "synth.hpp"

using namespace gradfuse;

TEST_CASE("constant plane has zero saliency") {
  const RealMap s = tenengrad(Plane(9, 9, 0.3), 3);
  for (double v : s.data()) CHECK(v == 0.0);
  CHECK(total_tenengrad(Plane(9, 9, 0.3)) == 0.0);
}

TEST_CASE("unit vertical step gives energy 16 beside the edge") {
  Plane p(10, 6, 0.0);
  for (int y = 0; y < 6; ++y)
    for (int x = 5; x < 10; ++x) p(x, y) = 1.0;
  const RealMap e = tenengrad(p, 1);
  for (int y = 0; y < 6; ++y) {
    for (int x = 0; x < 10; ++x) {
      const double expected = (x == 4 || x == 5) ? 16.0 : 0.0;
      CHECK(e(x, y) == expected);
    }
  }
}

TEST_CASE("matches explicit Sobel and window summation on a random 9x9") {
  std::mt19937_64 rng(31);
  const Plane p = oracle::random_plane(9, 9, rng);
  const RealMap fast = tenengrad(p, 3);
  const RealMap slow = oracle::tenengrad(p, 3);
  for (std::size_t i = 0; i < fast.size(); ++i)
    CHECK(fast.data()[i] == doctest::Approx(slow.data()[i]).epsilon(1e-12));
}

TEST_CASE("window argument validation") {
  const Plane p(9, 7);
  CHECK_THROWS_AS(tenengrad(p, 4), Error);
  CHECK_THROWS_AS(tenengrad(p, 0), Error);
  CHECK_THROWS_AS(tenengrad(p, 9), Error);  // larger than min(W,H)
  CHECK_NOTHROW(tenengrad(p, 7));
}

TEST_CASE("total equals the interior sum of the tw=1 map") {
  std::mt19937_64 rng(8);
  const Plane p = oracle::random_plane(12, 10, rng);
  const RealMap e = tenengrad(p, 1);
  double interior = 0;
  for (int y = 1; y < 9; ++y)
    for (int x = 1; x < 11; ++x) interior += e(x, y);
  CHECK(total_tenengrad(p) == doctest::Approx(interior).epsilon(1e-12));
}

TEST_CASE("blur strictly lowers total Tenengrad on textured planes (property)") {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 10; ++trial) {
    const Plane p = oracle::textured_plane(48, 40, rng);
    CHECK(total_tenengrad(gaussian_blur(p, 1.5)) < total_tenengrad(p));
  }
}

TEST_CASE("non-negativity and window monotonicity (property)") {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 10; ++trial) {
    const Plane p = oracle::random_plane(21, 17, rng);
    double previous = -1;
    for (int tw = 1; tw <= 9; tw += 2) {
      const RealMap s = tenengrad(p, tw);
      double mass = 0;
      for (double v : s.data()) {
        CHECK(v >= 0.0);
        mass += v;
      }
      CHECK(mass > previous);
      previous = mass;
    }
  }
}

TEST_CASE("translation covariance away from borders") {
  std::mt19937_64 rng(46);
  const Plane p = oracle::random_plane(30, 30, rng);
  Plane shifted(30, 30);
  for (int y = 0; y < 30; ++y)
    for (int x = 0; x < 30; ++x) shifted(x, y) = p.clamped(x - 3, y - 2);
  const RealMap a = tenengrad(p, 5);
  const RealMap b = tenengrad(shifted, 5);
  for (int y = 8; y < 22; ++y)
    for (int x = 8; x < 22; ++x) CHECK(b(x, y) == doctest::Approx(a(x - 3, y - 2)).epsilon(1e-12));
}
