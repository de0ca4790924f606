#include "image.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace gradfuse {

Plane::Plane(int width, int height, double fill) : RealMap(width, height, fill) {
  if (width < kMinSide || height < kMinSide) {
    throw Error(Error::Code::dimension,
                "dimensions below minimum: " + std::to_string(width) + "x" +
                    std::to_string(height) + " < 3x3");
  }
}

Plane Plane::clamped_from(const RealMap& values) {
  Plane out(values.width(), values.height());
  auto src = values.data();
  auto dst = out.data();
  std::transform(src.begin(), src.end(), dst.begin(),
                 [](double v) { return std::clamp(v, 0.0, 1.0); });
  return out;
}

Plane Plane::checked_from(const RealMap& values) {
  for (double v : values.data()) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(Error::Code::invalid_argument, "plane sample outside [0,1]");
    }
  }
  Plane out(values.width(), values.height());
  std::copy(values.data().begin(), values.data().end(), out.data().begin());
  return out;
}

double Plane::mean() const {
  auto d = data();
  return std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
}

const char* to_string(ColorSpace space) {
  switch (space) {
    case ColorSpace::gray: return "gray";
    case ColorSpace::rgb: return "rgb";
    case ColorSpace::ycbcr: return "ycbcr";
  }
  return "unknown";
}

ColorImage::ColorImage(ColorSpace space, std::vector<Plane> planes)
    : space_(space), planes_(std::move(planes)) {
  const std::size_t expected = space == ColorSpace::gray ? 1 : 3;
  if (planes_.size() != expected) {
    throw Error(Error::Code::invalid_argument,
                std::string(to_string(space)) + " image needs " + std::to_string(expected) +
                    " planes, got " + std::to_string(planes_.size()));
  }
  for (const auto& p : planes_) {
    if (!p.same_shape(planes_.front())) {
      throw Error(Error::Code::dimension, "color planes differ in size");
    }
  }
}

ColorImage ColorImage::gray(Plane plane) {
  std::vector<Plane> planes;
  planes.push_back(std::move(plane));
  return ColorImage(ColorSpace::gray, std::move(planes));
}

namespace {

// Plain 3x3 affine transform per pixel; no clamping so the inverse is exact.
ColorImage transform3(const ColorImage& img, ColorSpace target, const double (&m)[3][3],
                      const double (&offset_in)[3], const double (&offset_out)[3]) {
  const int w = img.width();
  const int h = img.height();
  std::vector<RealMap> raw(3, RealMap(w, h));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double in[3];
      for (int c = 0; c < 3; ++c) in[c] = img.plane(c)(x, y) - offset_in[c];
      for (int r = 0; r < 3; ++r) {
        raw[static_cast<std::size_t>(r)](x, y) =
            m[r][0] * in[0] + m[r][1] * in[1] + m[r][2] * in[2] + offset_out[r];
      }
    }
  }
  std::vector<Plane> planes;
  planes.reserve(3);
  // Sub-ulp excursions outside [0,1] are clamped; anything larger is a real gamut issue
  // and is clamped as well since Plane holds [0,1] intensities.
  for (const auto& r : raw) planes.push_back(Plane::clamped_from(r));
  return ColorImage(target, std::move(planes));
}

constexpr double kR = 0.299;
constexpr double kG = 0.587;
constexpr double kB = 0.114;

}  // namespace

ColorImage rgb_to_ycbcr(const ColorImage& img) {
  if (img.space() != ColorSpace::rgb) {
    throw Error(Error::Code::invalid_argument, "rgb_to_ycbcr expects an RGB image");
  }
  static constexpr double m[3][3] = {
      {kR, kG, kB},
      {-kR / (2.0 * (1.0 - kB)), -kG / (2.0 * (1.0 - kB)), 0.5},
      {0.5, -kG / (2.0 * (1.0 - kR)), -kB / (2.0 * (1.0 - kR))},
  };
  static constexpr double in[3] = {0.0, 0.0, 0.0};
  static constexpr double out[3] = {0.0, 0.5, 0.5};
  return transform3(img, ColorSpace::ycbcr, m, in, out);
}

ColorImage ycbcr_to_rgb(const ColorImage& img) {
  if (img.space() != ColorSpace::ycbcr) {
    throw Error(Error::Code::invalid_argument, "ycbcr_to_rgb expects a YCbCr image");
  }
  static constexpr double m[3][3] = {
      {1.0, 0.0, 2.0 * (1.0 - kR)},
      {1.0, -2.0 * (1.0 - kB) * kB / kG, -2.0 * (1.0 - kR) * kR / kG},
      {1.0, 2.0 * (1.0 - kB), 0.0},
  };
  static constexpr double in[3] = {0.0, 0.5, 0.5};
  static constexpr double out[3] = {0.0, 0.0, 0.0};
  return transform3(img, ColorSpace::rgb, m, in, out);
}

Plane luma(const ColorImage& img) {
  switch (img.space()) {
    case ColorSpace::gray:
    case ColorSpace::ycbcr:
      return img.plane(0);
    case ColorSpace::rgb: {
      RealMap y(img.width(), img.height());
      auto r = img.plane(0).data();
      auto g = img.plane(1).data();
      auto b = img.plane(2).data();
      auto out = y.data();
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = kR * r[i] + kG * g[i] + kB * b[i];
      return Plane::clamped_from(y);
    }
  }
  throw Error(Error::Code::invalid_argument, "unknown color space");
}

}  // namespace gradfuse
