#include "synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "box.hpp"

namespace gradfuse {

MaskKind parse_mask_kind(std::string_view name) {
  if (name == "half") return MaskKind::half;
  if (name == "disk") return MaskKind::disk;
  if (name == "blob") return MaskKind::blob;
  throw Error(Error::Code::invalid_argument, "unknown mask kind '" + std::string(name) + "'");
}

const char* to_string(MaskKind kind) {
  switch (kind) {
    case MaskKind::half: return "half";
    case MaskKind::disk: return "disk";
    case MaskKind::blob: return "blob";
  }
  return "unknown";
}

namespace {

// mt19937_64 output is fixed by the standard; the distributions are not, so the
// conversion to [0,1) is done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

double smooth(double t) { return t * t * (3.0 - 2.0 * t); }

// Bilinear value noise on a lattice with spacing `cell`, smoothstep weights.
RealMap value_noise(int w, int h, int cell, Rng& rng) {
  const int gw = w / cell + 2;
  const int gh = h / cell + 2;
  std::vector<double> lattice(static_cast<std::size_t>(gw) * gh);
  for (double& v : lattice) v = rng.uniform();
  RealMap out(w, h);
  for (int y = 0; y < h; ++y) {
    const int gy = y / cell;
    const double ty = smooth(static_cast<double>(y % cell) / cell);
    for (int x = 0; x < w; ++x) {
      const int gx = x / cell;
      const double tx = smooth(static_cast<double>(x % cell) / cell);
      const auto at = [&](int i, int j) { return lattice[static_cast<std::size_t>(j) * gw + i]; };
      const double top = at(gx, gy) * (1 - tx) + at(gx + 1, gy) * tx;
      const double bottom = at(gx, gy + 1) * (1 - tx) + at(gx + 1, gy + 1) * tx;
      out(x, y) = top * (1 - ty) + bottom * ty;
    }
  }
  return out;
}

RealMap textured_luminance(int w, int h, Rng& rng) {
  RealMap lum(w, h, 0.0);
  constexpr int cells[] = {3, 6, 12, 24, 48};
  constexpr double weights[] = {0.30, 0.25, 0.20, 0.15, 0.10};
  for (std::size_t s = 0; s < std::size(cells); ++s) {
    const RealMap layer = value_noise(w, h, cells[s], rng);
    for (std::size_t i = 0; i < lum.size(); ++i) lum.data()[i] += weights[s] * layer.data()[i];
  }
  return lum;
}

}  // namespace

ColorImage procedural_base(int width, int height, std::uint64_t seed) {
  if (width < 64 || height < 64) {
    throw Error(Error::Code::dimension, "procedural_base needs at least 64x64");
  }
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const RealMap lum = textured_luminance(width, height, rng);

  std::vector<RealMap> rgb(3, RealMap(width, height));
  double tint[3];
  for (double& t : tint) t = rng.uniform(0.6, 1.0);
  for (int c = 0; c < 3; ++c) {
    const RealMap detail = value_noise(width, height, 4, rng);
    for (std::size_t i = 0; i < lum.size(); ++i) {
      rgb[c].data()[i] = tint[c] * lum.data()[i] + 0.15 * detail.data()[i];
    }
  }

  // Flat-coloured shapes blended at half opacity keep the texture underneath,
  // so every region still carries gradients.
  const int shapes = 10;
  for (int s = 0; s < shapes; ++s) {
    const bool disk = rng.uniform() < 0.5;
    const double cx = rng.uniform(0, width);
    const double cy = rng.uniform(0, height);
    const double rx = rng.uniform(0.05, 0.18) * width;
    const double ry = rng.uniform(0.05, 0.18) * height;
    double color[3];
    for (double& v : color) v = rng.uniform(0.0, 1.2);
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const double dx = (x - cx) / rx;
        const double dy = (y - cy) / ry;
        const bool inside = disk ? dx * dx + dy * dy <= 1.0 : std::abs(dx) <= 1 && std::abs(dy) <= 1;
        if (!inside) continue;
        for (int c = 0; c < 3; ++c) rgb[c](x, y) = 0.5 * rgb[c](x, y) + 0.5 * color[c];
      }
    }
  }

  std::vector<Plane> planes;
  for (auto& channel : rgb) {
    const auto [lo, hi] = std::minmax_element(channel.data().begin(), channel.data().end());
    const double min = *lo;
    const double range = *hi - *lo > 0 ? *hi - *lo : 1.0;
    for (double& v : channel.data()) v = 0.05 + 0.9 * (v - min) / range;
    planes.push_back(Plane::clamped_from(channel));
  }
  return ColorImage(ColorSpace::rgb, std::move(planes));
}

DecisionMap make_mask(MaskKind kind, int width, int height, std::uint64_t seed) {
  DecisionMap m(width, height, 0);
  switch (kind) {
    case MaskKind::half:
      for (int y = 0; y < height; ++y)
        for (int x = 0; x < width / 2; ++x) m(x, y) = 1;
      break;
    case MaskKind::disk: {
      const double cx = (width - 1) / 2.0;
      const double cy = (height - 1) / 2.0;
      const double r = std::min(width, height) / 4.0;
      for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
          m(x, y) = (x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r;
      break;
    }
    case MaskKind::blob: {
      Rng rng(seed ^ 0xb10bb10bULL);
      const RealMap field = value_noise(width, height, std::max(8, std::min(width, height) / 3), rng);
      std::vector<double> sorted(field.data().begin(), field.data().end());
      std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
      const double median = sorted[sorted.size() / 2];
      for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = field.data()[i] >= median;
      break;
    }
  }
  return m;
}

Plane gaussian_blur(const Plane& p, double sigma) {
  if (sigma < 0) throw Error(Error::Code::invalid_argument, "sigma must be >= 0");
  if (sigma == 0) return p;
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * i * i / (sigma * sigma));
    kernel[static_cast<std::size_t>(i + radius)] = v;
    total += v;
  }
  for (double& v : kernel) v /= total;

  const int w = p.width();
  const int h = p.height();
  RealMap tmp(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        acc += kernel[static_cast<std::size_t>(i + radius)] * p.clamped(x + i, y);
      }
      tmp(x, y) = acc;
    }
  }
  RealMap out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        acc += kernel[static_cast<std::size_t>(i + radius)] * tmp.clamped(x, y + i);
      }
      out(x, y) = acc;
    }
  }
  return Plane::clamped_from(out);
}

ColorImage gaussian_blur(const ColorImage& img, double sigma) {
  std::vector<Plane> planes;
  for (const auto& p : img.planes()) planes.push_back(gaussian_blur(p, sigma));
  return ColorImage(img.space(), std::move(planes));
}

SynthPair synth_pair(const SynthSpec& spec) {
  if (spec.sigma < 0) throw Error(Error::Code::invalid_argument, "sigma must be >= 0");
  if (spec.base.width() != spec.mask.width() || spec.base.height() != spec.mask.height()) {
    throw Error(Error::Code::dimension, "synth mask and base differ in size");
  }
  const ColorImage blurred = gaussian_blur(spec.base, spec.sigma);
  std::vector<Plane> pa;
  std::vector<Plane> pb;
  for (int c = 0; c < spec.base.channels(); ++c) {
    Plane a = spec.base.plane(c);
    Plane b = spec.base.plane(c);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (spec.mask.data()[i]) {
        b.data()[i] = blurred.plane(c).data()[i];
      } else {
        a.data()[i] = blurred.plane(c).data()[i];
      }
    }
    pa.push_back(std::move(a));
    pb.push_back(std::move(b));
  }
  return {ColorImage(spec.base.space(), std::move(pa)),
          ColorImage(spec.base.space(), std::move(pb)), spec.base, spec.mask};
}

DecisionMap boundary_band(const DecisionMap& mask, int band) {
  const int w = mask.width();
  const int h = mask.height();
  RealMap edge(w, h, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto v = mask(x, y);
      const bool changes = (x + 1 < w && mask(x + 1, y) != v) || (x > 0 && mask(x - 1, y) != v) ||
                           (y + 1 < h && mask(x, y + 1) != v) || (y > 0 && mask(x, y - 1) != v);
      edge(x, y) = changes ? 1.0 : 0.0;
    }
  }
  // A replicate-border box sum only ever adds copies of real edge pixels; a
  // positive count means some edge pixel lies within the window.
  const RealMap near = box_sum(edge, band);
  DecisionMap out(w, h);
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = near.data()[i] > 0.5;
  return out;
}

double mask_accuracy(const DecisionMap& map, const DecisionMap& truth, int band) {
  require_same_shape(map, truth, "mask_accuracy");
  const DecisionMap excluded = boundary_band(truth, band);
  std::size_t counted = 0;
  std::size_t agree = 0;
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (excluded.data()[i]) continue;
    ++counted;
    agree += (map.data()[i] != 0) == (truth.data()[i] != 0);
  }
  return counted ? static_cast<double>(agree) / static_cast<double>(counted) : 1.0;
}

}  // namespace gradfuse
