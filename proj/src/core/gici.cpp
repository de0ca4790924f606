#include "gici.hpp"

#include <algorithm>

namespace gradfuse {

RealMap difference_saliency(const SaliencyMap& sf, const SaliencyMap& si) {
  require_same_shape(sf, si, "difference_saliency");
  RealMap out(sf.width(), sf.height());
  const auto f = sf.data();
  const auto s = si.data();
  auto o = out.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = f[i] - s[i];
  return out;
}

SaliencyMap enhanced_difference(const RealMap& dif, int tw, bool normalize) {
  if (!normalize) return tenengrad(dif, tw);
  const auto d = dif.data();
  const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
  if (d.empty() || *hi == *lo) return SaliencyMap(dif.width(), dif.height(), 0.0);
  const double min = *lo;
  const double range = *hi - *lo;
  RealMap scaled(dif.width(), dif.height());
  auto s = scaled.data();
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = (d[i] - min) / range;
  return tenengrad(scaled, tw);
}

EnhancedSaliency enhance(const SaliencyMap& sa, const SaliencyMap& sb, const SaliencyMap& sha,
                         const SaliencyMap& shb, double k) {
  require_same_shape(sa, sb, "enhance");
  require_same_shape(sa, sha, "enhance");
  require_same_shape(sa, shb, "enhance");
  if (!(k >= 0.0)) throw Error(Error::Code::invalid_argument, "enhance: k must be >= 0");
  EnhancedSaliency out{RealMap(sa.width(), sa.height()), RealMap(sa.width(), sa.height())};
  const auto a = sa.data();
  const auto b = sb.data();
  const auto ha = sha.data();
  const auto hb = shb.data();
  auto qa = out.qa.data();
  auto qb = out.qb.data();
  for (std::size_t i = 0; i < qa.size(); ++i) {
    qa[i] = a[i] + ha[i] - hb[i] * k;
    qb[i] = b[i] + hb[i] - ha[i] * k;
  }
  return out;
}

DecisionMap initial_decision(const RealMap& qa, const SaliencyMap& sf) {
  require_same_shape(qa, sf, "initial_decision");
  DecisionMap m(qa.width(), qa.height());
  const auto q = qa.data();
  const auto f = sf.data();
  auto o = m.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = q[i] >= f[i] ? 1 : 0;
  return m;
}

DecisionMap complement(const DecisionMap& m) {
  DecisionMap out(m.width(), m.height());
  const auto in = m.data();
  auto o = out.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = in[i] ? 0 : 1;
  return out;
}

FocusDetection detect_focus(const SaliencyMap& sa, const SaliencyMap& sb, const SaliencyMap& sf,
                            const FusionParams& params) {
  FocusDetection d{sa, sb, sf, {}, {}, {}, {}};
  if (!params.stages.enhance) {
    d.enhanced_a = SaliencyMap(sa.width(), sa.height(), 0.0);
    d.enhanced_b = d.enhanced_a;
    d.q = EnhancedSaliency{sa, sb};
  } else {
    const bool fused_ref = params.reference == DifferenceReference::fused;
    const RealMap dif_a = difference_saliency(fused_ref ? sf : sb, sa);
    const RealMap dif_b = difference_saliency(fused_ref ? sf : sa, sb);
    d.enhanced_a = enhanced_difference(dif_b, params.tw, params.normalize_difference);
    d.enhanced_b = enhanced_difference(dif_a, params.tw, params.normalize_difference);
    d.q = enhance(sa, sb, d.enhanced_a, d.enhanced_b, params.k);
  }
  d.map_a = initial_decision(d.q.qa, sf);
  return d;
}

}  // namespace gradfuse
