#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "refine.hpp"

using namespace gradfuse;

namespace {

DecisionMap from_rows(const std::vector<std::string>& rows) {
  DecisionMap m(static_cast<int>(rows[0].size()), static_cast<int>(rows.size()));
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) m(x, y) = rows[y][x] == '#' ? 1 : 0;
  return m;
}

int count(const DecisionMap& m) {
  int n = 0;
  for (auto v : m.data()) n += v;
  return n;
}

}  // namespace

TEST_CASE("adaptive area threshold") {
  CHECK(adaptive_area_threshold(0.02, 520, 520) == 5408);
  CHECK(adaptive_area_threshold(0.02, 100, 100) == 200);
  CHECK(adaptive_area_threshold(0.02, 5, 5) == 1);
}

TEST_CASE("area opening examples") {
  SUBCASE("isolated pixel removed, t = 2") {
    const auto m = from_rows({".....", "..#..", "....."});
    CHECK(count(area_open(m, 2, Connectivity::eight)) == 0);
  }
  SUBCASE("10x10 block survives t = 100, not t = 101") {
    DecisionMap m(20, 20, 0);
    for (int y = 5; y < 15; ++y)
      for (int x = 5; x < 15; ++x) m(x, y) = 1;
    CHECK(area_open(m, 100, Connectivity::eight) == m);
    CHECK(count(area_open(m, 101, Connectivity::eight)) == 0);
  }
  SUBCASE("t = 1 is the identity") {
    std::mt19937_64 rng(1);
    const auto m = oracle::random_binary(15, 12, 0.4, rng);
    CHECK(area_open(m, 1, Connectivity::four) == m);
  }
  SUBCASE("diagonal pair depends on connectivity") {
    const auto m = from_rows({"#...", ".#..", "...."});
    CHECK(count(area_open(m, 2, Connectivity::eight)) == 2);
    CHECK(count(area_open(m, 2, Connectivity::four)) == 0);
  }
  SUBCASE("invalid threshold") {
    CHECK_THROWS_AS(area_open(DecisionMap(4, 4, 0), 0, Connectivity::eight), Error);
  }
}

TEST_CASE("area opening matches label propagation; idempotent; anti-extensive (property)") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 40; ++trial) {
    const int w = 5 + static_cast<int>(rng() % 30), h = 5 + static_cast<int>(rng() % 30);
    const auto m = oracle::random_binary(w, h, 0.2 + 0.5 * oracle::unit(rng), rng);
    const int t = 1 + static_cast<int>(rng() % 40);
    for (bool eight : {false, true}) {
      const auto c = eight ? Connectivity::eight : Connectivity::four;
      const auto got = area_open(m, t, c);
      CHECK(got == oracle::area_open(m, t, eight));
      CHECK(area_open(got, t, c) == got);
      for (std::size_t i = 0; i < m.size(); ++i) CHECK(got.data()[i] <= m.data()[i]);
    }
  }
}

TEST_CASE("guided filter") {
  std::mt19937_64 rng(3);
  SUBCASE("matches the per-window definition") {
    for (int r : {1, 2, 4}) {
      for (double eps : {1e-3, 0.3}) {
        const Plane g = oracle::random_plane(17, 13, rng);
        const Plane p = oracle::random_plane(17, 13, rng);
        const Plane got = guided_filter(g, p, r, eps);
        const RealMap want = oracle::guided_filter(g, p, r, eps);
        for (std::size_t i = 0; i < got.size(); ++i)
          CHECK(got.data()[i] == doctest::Approx(want.data()[i]).epsilon(1e-9));
      }
    }
  }
  SUBCASE("constant guide gives the twice-applied box mean") {
    const Plane g(12, 12, 0.4);
    const Plane p = oracle::random_plane(12, 12, rng);
    const Plane got = guided_filter(g, p, 2, 0.3);
    RealMap once(12, 12);
    for (int y = 0; y < 12; ++y)
      for (int x = 0; x < 12; ++x) once(x, y) = oracle::window_mean(p, x, y, 2);
    for (int y = 0; y < 12; ++y)
      for (int x = 0; x < 12; ++x)
        CHECK(got(x, y) == doctest::Approx(oracle::window_mean(once, x, y, 2)).epsilon(1e-12));
  }
  SUBCASE("input equal to guide with tiny eps is near identity") {
    const Plane g = oracle::random_plane(14, 14, rng);
    const Plane got = guided_filter(g, g, 2, 1e-8);
    for (std::size_t i = 0; i < g.size(); ++i)
      CHECK(got.data()[i] == doctest::Approx(g.data()[i]).epsilon(1e-4));
  }
  SUBCASE("output stays in [0,1]") {
    const Plane g = oracle::random_plane(20, 20, rng);
    const Plane p = to_plane(oracle::random_binary(20, 20, 0.5, rng));
    for (double v : oracle::values(guided_filter(g, p, 3, 1e-4))) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
  SUBCASE("bad arguments") {
    const Plane g(8, 8);
    CHECK_THROWS_AS(guided_filter(g, g, 0, 0.1), Error);
    CHECK_THROWS_AS(guided_filter(g, g, 1, 0.0), Error);
    CHECK_THROWS_AS(guided_filter(g, Plane(9, 8), 1, 0.1), Error);
  }
}

TEST_CASE("consistency window side") {
  CHECK(consistency_window(5e-5, 520, 520) == 3);
  CHECK(consistency_window(5e-5, 1000, 1000) == 7);
  CHECK(consistency_window(5e-5, 10, 10) == 3);
  CHECK(consistency_window(0.01, 100, 100) == 9);  // 10 is even
}

TEST_CASE("consistency verification") {
  SUBCASE("lone pixel outvoted") {
    RealMap fm(9, 9, 0.0);
    fm(4, 4) = 1.0;
    for (auto v : oracle::values(consistency_verify(fm, 3))) CHECK(v == 0);
  }
  SUBCASE("lone hole filled") {
    RealMap fm(9, 9, 1.0);
    fm(4, 4) = 0.0;
    for (auto v : oracle::values(consistency_verify(fm, 3))) CHECK(v == 1);
  }
  SUBCASE("exact half counts as majority") {
    RealMap fm(3, 3, 0.5);
    for (auto v : oracle::values(consistency_verify(fm, 3))) CHECK(v == 1);
  }
  SUBCASE("monotone in the input (property)") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
      const RealMap lo = oracle::random_map(15, 15, rng);
      RealMap hi = lo;
      for (double& v : hi.data()) v += 0.3 * oracle::unit(rng);
      const auto a = consistency_verify(lo, 5), b = consistency_verify(hi, 5);
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.data()[i] <= b.data()[i]);
    }
  }
  SUBCASE("even side rejected") { CHECK_THROWS_AS(consistency_verify(RealMap(9, 9), 4), Error); }
}

TEST_CASE("conflict resolution") {
  const auto va = from_rows({"##..", "##.."});
  const auto vb = from_rows({"#.#.", "#.#."});
  const auto [fa, fb] = resolve_conflicts(va, vb);
  CHECK(fa == from_rows({"##..", "##.."}));
  CHECK(fb == from_rows({"..##", "..##"}));
  for (std::size_t i = 0; i < fa.size(); ++i) CHECK(fa.data()[i] + fb.data()[i] == 1);
}

TEST_CASE("binarize threshold") {
  RealMap m(3, 1);
  m(0, 0) = 0.4999;
  m(1, 0) = 0.5;
  m(2, 0) = 0.9;
  const auto b = binarize(m);
  CHECK(b(0, 0) == 0);
  CHECK(b(1, 0) == 1);
  CHECK(b(2, 0) == 1);
}

TEST_CASE("refinement keeps a clean half-plane map and removes specks") {
  const int n = 64;
  DecisionMap truth(n, n, 0);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n / 2; ++x) truth(x, y) = 1;
  DecisionMap noisy = truth;
  noisy(50, 10) = 1;
  noisy(10, 50) = 0;
  std::mt19937_64 rng(5);
  const Plane guide = oracle::textured_plane(n, n, rng);
  const FusionParams params;
  const auto trace = refine_maps(noisy, guide, guide, params);
  int wrong = 0;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      CHECK(trace.final_a(x, y) + trace.final_b(x, y) == 1);
      if (std::abs(x - n / 2) > 5) wrong += trace.final_a(x, y) != truth(x, y);
    }
  CHECK(wrong == 0);
  CHECK(trace.opened_a(50, 10) == 0);
  CHECK(trace.opened_b(10, 50) == 0);
}
