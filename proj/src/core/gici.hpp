#pragma once

#include "params.hpp"
#include "saliency.hpp"

namespace gradfuse {

/// Enhanced saliencies; values may be negative.
struct EnhancedSaliency {
  RealMap qa;
  RealMap qb;
};

/// sf - si, signed.
RealMap difference_saliency(const SaliencyMap& sf, const SaliencyMap& si);

/// Tenengrad of the difference map after min-max normalization to [0,1].
/// A flat map yields zeros. With `normalize` false the raw map is used.
SaliencyMap enhanced_difference(const RealMap& dif, int tw, bool normalize = true);

/// qa = sa + sha - k*shb, qb = sb + shb - k*sha.
EnhancedSaliency enhance(const SaliencyMap& sa, const SaliencyMap& sb, const SaliencyMap& sha,
                         const SaliencyMap& shb, double k);

/// 1 where qa >= sf, else 0. Ties go to A.
DecisionMap initial_decision(const RealMap& qa, const SaliencyMap& sf);

DecisionMap complement(const DecisionMap& m);

/// All saliency stages for one pair, kept for inspection.
struct FocusDetection {
  SaliencyMap sa;
  SaliencyMap sb;
  SaliencyMap sf;
  SaliencyMap enhanced_a;  // paired with source A in the enhancement
  SaliencyMap enhanced_b;
  EnhancedSaliency q;
  DecisionMap map_a;
};

/// Runs difference, enhancement and the initial decision.
///
/// A difference map is flat where its source is in focus and textured where it is not,
/// so its Tenengrad marks the *defocused* part of that source, which is the focused part
/// of the other one. Each source is therefore boosted by the enhanced difference of the
/// opposite source and penalised by k times its own: Q_a = S_a + Ŝ(dif_b) - k*Ŝ(dif_a).
/// With params.stages.enhance off, Q is the plain source saliency.
FocusDetection detect_focus(const SaliencyMap& sa, const SaliencyMap& sb, const SaliencyMap& sf,
                            const FusionParams& params);

}  // namespace gradfuse
