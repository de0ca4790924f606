#pragma once

#include <filesystem>
#include <vector>

#include "grid.hpp"

namespace gradfuse {

inline constexpr int kMinSide = 3;

/// Single-channel intensity image with samples in [0,1], at least 3x3.
class Plane : public RealMap {
 public:
  Plane() = default;
  Plane(int width, int height, double fill = 0.0);

  /// Clamps every sample of `values` into [0,1].
  static Plane clamped_from(const RealMap& values);

  /// Checks the [0,1] range instead of clamping; throws on violation.
  static Plane checked_from(const RealMap& values);

  double mean() const;
};

enum class ColorSpace { gray, rgb, ycbcr };

const char* to_string(ColorSpace space);

class ColorImage {
 public:
  ColorImage() = default;
  ColorImage(ColorSpace space, std::vector<Plane> planes);

  static ColorImage gray(Plane plane);

  ColorSpace space() const noexcept { return space_; }
  int width() const noexcept { return planes_.empty() ? 0 : planes_.front().width(); }
  int height() const noexcept { return planes_.empty() ? 0 : planes_.front().height(); }
  int channels() const noexcept { return static_cast<int>(planes_.size()); }
  const Plane& plane(int c) const { return planes_.at(static_cast<std::size_t>(c)); }
  const std::vector<Plane>& planes() const noexcept { return planes_; }

  bool same_shape(const ColorImage& other) const noexcept {
    return width() == other.width() && height() == other.height();
  }

  friend bool operator==(const ColorImage& a, const ColorImage& b) {
    return a.space_ == b.space_ && a.planes_ == b.planes_;
  }

 private:
  ColorSpace space_ = ColorSpace::gray;
  std::vector<Plane> planes_;
};

// BT.601 full range, chroma offset by 0.5.
ColorImage rgb_to_ycbcr(const ColorImage& img);
ColorImage ycbcr_to_rgb(const ColorImage& img);

/// Luma of any color space; a Gray plane is returned unchanged.
Plane luma(const ColorImage& img);

/// Reads PNG, PGM or PPM at 8 or 16 bits per sample.
ColorImage load_image(const std::filesystem::path& path);

/// Writes an 8-bit PNG. YCbCr input is converted to RGB first.
void save_image(const ColorImage& img, const std::filesystem::path& path);
void save_plane(const Plane& plane, const std::filesystem::path& path);

/// Writes a binary map as black/white.
void save_mask(const DecisionMap& mask, const std::filesystem::path& path);

/// Writes a non-negative map divided by its maximum (all-zero maps stay black).
void save_normalized(const RealMap& map, const std::filesystem::path& path);

}  // namespace gradfuse
