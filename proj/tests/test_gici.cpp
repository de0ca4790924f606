#include <cmath>
#include <random>

#include "doctest.h"
#include "gici.hpp"
#include "gradient.hpp"
#include "oracles.hpp"
#include "saliency.hpp"
#include "synth.hpp"

using namespace gradfuse;

namespace {

RealMap constant(int w, int h, double v) { return RealMap(w, h, v); }

}  // namespace

TEST_CASE("difference saliency") {
  std::mt19937_64 rng(1);
  const RealMap s = oracle::random_map(6, 5, rng);
  SUBCASE("equal inputs") {
    for (double v : oracle::values(difference_saliency(s, s))) CHECK(v == 0.0);
  }
  SUBCASE("offset input") {
    RealMap shifted = s;
    for (double& v : shifted.data()) v += 2.5;
    for (double v : oracle::values(difference_saliency(shifted, s))) CHECK(v == doctest::Approx(2.5));
  }
  SUBCASE("elementwise, negatives kept") {
    const RealMap t = oracle::random_map(6, 5, rng);
    const RealMap d = difference_saliency(s, t);
    bool saw_negative = false;
    for (std::size_t i = 0; i < d.size(); ++i) {
      CHECK(d.data()[i] == s.data()[i] - t.data()[i]);
      saw_negative |= d.data()[i] < 0;
    }
    CHECK(saw_negative);
  }
  SUBCASE("mismatch") { CHECK_THROWS_AS(difference_saliency(s, constant(5, 5, 0)), Error); }
}

TEST_CASE("enhanced difference") {
  SUBCASE("flat map gives zeros") {
    for (double v : oracle::values(enhanced_difference(constant(9, 9, -3.0), 3))) CHECK(v == 0.0);
  }
  SUBCASE("step reduces to Tenengrad of a unit step") {
    RealMap dif(10, 10, -7.0);
    Plane unit_step(10, 10, 0.0);
    for (int y = 0; y < 10; ++y)
      for (int x = 5; x < 10; ++x) {
        dif(x, y) = 12.0;
        unit_step(x, y) = 1.0;
      }
    const RealMap got = enhanced_difference(dif, 3);
    const RealMap want = oracle::tenengrad(unit_step, 3);
    for (std::size_t i = 0; i < got.size(); ++i)
      CHECK(got.data()[i] == doctest::Approx(want.data()[i]).epsilon(1e-12));
  }
  SUBCASE("offset invariance") {
    std::mt19937_64 rng(2);
    const RealMap d = oracle::random_map(12, 12, rng);
    RealMap e = d;
    for (double& v : e.data()) v += 40.0;
    const RealMap a = enhanced_difference(d, 5);
    const RealMap b = enhanced_difference(e, 5);
    for (std::size_t i = 0; i < a.size(); ++i)
      CHECK(a.data()[i] == doctest::Approx(b.data()[i]).epsilon(1e-9));
  }
}

TEST_CASE("enhance arithmetic") {
  SUBCASE("worked pixel with k = 0.5") {
    const auto q = enhance(constant(3, 3, 1), constant(3, 3, 0), constant(3, 3, 4),
                           constant(3, 3, 2), 0.5);
    CHECK(q.qa(1, 1) == 4.0);
    CHECK(q.qb(1, 1) == 0.0);
  }
  SUBCASE("k = 0") {
    std::mt19937_64 rng(3);
    const RealMap sa = oracle::random_map(5, 5, rng), sha = oracle::random_map(5, 5, rng);
    const auto q = enhance(sa, sa, sha, oracle::random_map(5, 5, rng), 0.0);
    for (std::size_t i = 0; i < sa.size(); ++i)
      CHECK(q.qa.data()[i] == sa.data()[i] + sha.data()[i]);
  }
  SUBCASE("symmetric enhanced maps") {
    std::mt19937_64 rng(4);
    const RealMap sa = oracle::random_map(5, 5, rng), sb = oracle::random_map(5, 5, rng);
    const RealMap sh = oracle::random_map(5, 5, rng);
    const double k = 0.3;
    const auto q = enhance(sa, sb, sh, sh, k);
    for (std::size_t i = 0; i < sa.size(); ++i) {
      CHECK(q.qa.data()[i] - sa.data()[i] == doctest::Approx((1 - k) * sh.data()[i]));
      CHECK(q.qb.data()[i] - sb.data()[i] == doctest::Approx((1 - k) * sh.data()[i]));
    }
  }
  SUBCASE("negative k rejected") {
    CHECK_THROWS_AS(enhance(constant(3, 3, 0), constant(3, 3, 0), constant(3, 3, 0),
                            constant(3, 3, 0), -1.0),
                    Error);
  }
}

TEST_CASE("enhance: sum identity and swap symmetry (property)") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const double k = oracle::unit(rng) * 2.0;
    RealMap m[4];
    for (auto& x : m) {
      x = oracle::random_map(7, 6, rng);
      for (double& v : x.data()) v *= 100.0;
    }
    const auto q = enhance(m[0], m[1], m[2], m[3], k);
    const auto swapped = enhance(m[1], m[0], m[3], m[2], k);
    for (std::size_t i = 0; i < q.qa.size(); ++i) {
      const double lhs = q.qa.data()[i] + q.qb.data()[i];
      const double rhs = m[0].data()[i] + m[1].data()[i] +
                         (1 - k) * (m[2].data()[i] + m[3].data()[i]);
      CHECK(std::abs(lhs - rhs) <= 1e-9);
      CHECK(swapped.qa.data()[i] == q.qb.data()[i]);
      CHECK(swapped.qb.data()[i] == q.qa.data()[i]);
    }
  }
}

TEST_CASE("initial decision") {
  std::mt19937_64 rng(6);
  const RealMap sf = oracle::random_map(8, 8, rng);
  SUBCASE("ties go to A") {
    for (auto v : oracle::values(initial_decision(sf, sf))) CHECK(v == 1);
  }
  SUBCASE("strictly below") {
    RealMap qa = sf;
    for (double& v : qa.data()) v -= 1.0;
    for (auto v : oracle::values(initial_decision(qa, sf))) CHECK(v == 0);
  }
  SUBCASE("pointwise comparison oracle; binary and complementary") {
    const RealMap qa = oracle::random_map(8, 8, rng);
    const DecisionMap ma = initial_decision(qa, sf);
    const DecisionMap mb = complement(ma);
    for (std::size_t i = 0; i < ma.size(); ++i) {
      CHECK(ma.data()[i] == (qa.data()[i] >= sf.data()[i] ? 1 : 0));
      CHECK(ma.data()[i] + mb.data()[i] == 1);
    }
  }
}

TEST_CASE("initial decision agrees with the synthetic focus mask before refinement") {
  const FusionParams params;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    for (MaskKind kind : {MaskKind::half, MaskKind::disk}) {
      const ColorImage base = procedural_base(128, 128, seed);
      const DecisionMap mask = make_mask(kind, 128, 128, seed);
      const auto pair = synth_pair({base, mask, 3.0, seed});
      const Plane la = luma(pair.a), lb = luma(pair.b);
      const Plane f = initial_fusion(la, lb);
      const auto d = detect_focus(tenengrad(la, params.tw), tenengrad(lb, params.tw),
                                  tenengrad(f, params.tw), params);
      CAPTURE(seed);
      CHECK(mask_accuracy(d.map_a, mask, 5) >= 0.90);
    }
  }
}
