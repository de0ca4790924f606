#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gici.hpp"
#include "image.hpp"
#include "params.hpp"
#include "refine.hpp"

namespace gradfuse {

struct StageTiming {
  std::string stage;
  double ms = 0.0;
};

/// Intermediate products kept for inspection and the CLI dump flags.
struct FusionTrace {
  Plane luma_a;
  Plane luma_b;
  FocusDetection focus;
  RefineTrace refine;
};

struct FusionResult {
  ColorImage fused;
  DecisionMap map_a;
  DecisionMap map_b;
  Plane initial_fused;
  FusionTrace trace;
  std::vector<StageTiming> timings;
};

/// Fuses two registered, equally sized sources. Luma drives every decision; all
/// channels are then copied from A or B by the final maps.
FusionResult fuse_pair(const ColorImage& a, const ColorImage& b, const FusionParams& params);

/// Per channel, F = ma*A + mb*B. The maps must be binary and complementary.
ColorImage compose(const ColorImage& a, const ColorImage& b, const DecisionMap& ma,
                   const DecisionMap& mb);

/// Defaults with at most one stage disabled:
/// full, no_enhance, no_enhance_paper, no_areaopen, no_guided, no_consistency.
FusionParams ablation_config(std::string_view name);

const std::vector<std::string>& ablation_names();

}  // namespace gradfuse
