#pragma once

#include <utility>

#include "image.hpp"
#include "params.hpp"

namespace gradfuse {

/// round(th * width * height), at least 1.
int adaptive_area_threshold(double th, int width, int height);

/// Clears every foreground component whose area is below `t` pixels.
DecisionMap area_open(const DecisionMap& m, int t, Connectivity connectivity);

/// Local-linear guided filter with (2r+1)^2 box windows and replicate borders.
/// Output is clamped to [0,1].
Plane guided_filter(const Plane& guide, const Plane& input, int r, double eps);

/// Odd window side for consistency verification: round(sqrt(q*W*H)), even results
/// rounded down, minimum 3.
int consistency_window(double q, int width, int height);

/// Majority vote: 1 where the side x side window sum of `fm` is >= side^2 / 2.
DecisionMap consistency_verify(const RealMap& fm, int side);

/// Makes the pair complementary: both-0 goes to B, both-1 goes to A.
std::pair<DecisionMap, DecisionMap> resolve_conflicts(const DecisionMap& vma,
                                                      const DecisionMap& vmb);

Plane to_plane(const DecisionMap& m);

/// Threshold a soft map at 0.5 (inclusive).
DecisionMap binarize(const RealMap& m);

struct RefineTrace {
  DecisionMap opened_a, opened_b;
  Plane guided_a, guided_b;
  DecisionMap verified_a, verified_b;
  DecisionMap final_a, final_b;
};

/// Area opening, guided filtering, consistency verification and conflict resolution,
/// each skippable through params.stages. Guides are the source luminances.
RefineTrace refine_maps(const DecisionMap& map_a, const Plane& guide_a, const Plane& guide_b,
                        const FusionParams& params);

}  // namespace gradfuse
