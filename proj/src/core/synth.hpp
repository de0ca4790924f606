#pragma once

#include <cstdint>
#include <string_view>

#include "image.hpp"

namespace gradfuse {

enum class MaskKind { half, disk, blob };

MaskKind parse_mask_kind(std::string_view name);
const char* to_string(MaskKind kind);

struct SynthSpec {
  ColorImage base;    // all-in-focus ground truth
  DecisionMap mask;   // 1 where A is in focus
  double sigma = 3.0;
  std::uint64_t seed = 0;
};

struct SynthPair {
  ColorImage a;
  ColorImage b;
  ColorImage truth;
  DecisionMap mask;
};

/// Deterministic RGB texture: multi-scale value noise with overlaid shapes.
/// Same seed, same bits. Both sides must be at least 64.
ColorImage procedural_base(int width, int height, std::uint64_t seed);

DecisionMap make_mask(MaskKind kind, int width, int height, std::uint64_t seed);

/// Separable Gaussian, kernel radius ceil(3*sigma), replicate borders; sigma 0 is identity.
Plane gaussian_blur(const Plane& p, double sigma);
ColorImage gaussian_blur(const ColorImage& img, double sigma);

/// A is sharp where mask = 1 and blurred elsewhere; B is the reverse.
SynthPair synth_pair(const SynthSpec& spec);

/// Pixels within `band` (Chebyshev distance) of a place where the mask changes value.
DecisionMap boundary_band(const DecisionMap& mask, int band);

/// Fraction of pixels outside the boundary band where `map` equals `truth`.
double mask_accuracy(const DecisionMap& map, const DecisionMap& truth, int band = 5);

}  // namespace gradfuse
