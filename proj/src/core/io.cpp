#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "image.hpp"

namespace gradfuse {

namespace {

enum class FileKind { png, netpbm, unknown };

FileKind sniff(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Error::Code::io, "cannot open " + path.string());
  std::array<unsigned char, 8> head{};
  in.read(reinterpret_cast<char*>(head.data()), head.size());
  const auto got = in.gcount();
  static constexpr std::array<unsigned char, 8> png_sig = {0x89, 'P', 'N', 'G',
                                                           '\r', '\n', 0x1a, '\n'};
  if (got == 8 && head == png_sig) return FileKind::png;
  if (got >= 2 && head[0] == 'P' &&
      (head[1] == '2' || head[1] == '3' || head[1] == '5' || head[1] == '6')) {
    return FileKind::netpbm;
  }
  return FileKind::unknown;
}

std::uint8_t quantize(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

void write_png(const cv::Mat& mat, const std::filesystem::path& path) {
  const auto parent = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  if (!std::filesystem::is_directory(parent)) {
    throw Error(Error::Code::io, "directory does not exist: " + parent.string());
  }
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), mat, {cv::IMWRITE_PNG_COMPRESSION, 6});
  } catch (const cv::Exception& e) {
    throw Error(Error::Code::io, "cannot write " + path.string() + ": " + e.what());
  }
  if (!ok) throw Error(Error::Code::io, "cannot write " + path.string());
}

}  // namespace

ColorImage load_image(const std::filesystem::path& path) {
  if (sniff(path) == FileKind::unknown) {
    throw Error(Error::Code::format, "unsupported format (need PNG, PGM or PPM): " + path.string());
  }
  cv::Mat mat;
  try {
    mat = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  } catch (const cv::Exception& e) {
    throw Error(Error::Code::format, "cannot decode " + path.string() + ": " + e.what());
  }
  if (mat.empty()) throw Error(Error::Code::format, "cannot decode " + path.string());

  double scale = 0.0;
  if (mat.depth() == CV_8U) {
    scale = 255.0;
  } else if (mat.depth() == CV_16U) {
    scale = 65535.0;
  } else {
    throw Error(Error::Code::format, "unsupported bit depth in " + path.string());
  }
  const int channels = mat.channels();
  if (channels != 1 && channels != 3) {
    throw Error(Error::Code::format,
                "unsupported channel count " + std::to_string(channels) + " in " + path.string());
  }
  if (mat.cols < kMinSide || mat.rows < kMinSide) {
    throw Error(Error::Code::dimension, "dimensions below minimum: " + std::to_string(mat.cols) +
                                            "x" + std::to_string(mat.rows));
  }

  cv::Mat real;
  mat.convertTo(real, CV_64F);
  std::vector<cv::Mat> split;
  cv::split(real, split);
  if (channels == 3) std::swap(split[0], split[2]);  // BGR -> RGB

  std::vector<Plane> planes;
  for (const auto& ch : split) {
    Plane p(ch.cols, ch.rows);
    for (int y = 0; y < ch.rows; ++y) {
      const double* src = ch.ptr<double>(y);
      // Divide rather than multiply by 1/scale so each sample is the nearest double to v/scale.
      std::transform(src, src + ch.cols, p.row(y).begin(), [scale](double v) { return v / scale; });
    }
    planes.push_back(std::move(p));
  }
  return ColorImage(channels == 1 ? ColorSpace::gray : ColorSpace::rgb, std::move(planes));
}

void save_image(const ColorImage& img, const std::filesystem::path& path) {
  if (img.space() == ColorSpace::ycbcr) {
    save_image(ycbcr_to_rgb(img), path);
    return;
  }
  const int w = img.width();
  const int h = img.height();
  if (img.space() == ColorSpace::gray) {
    save_plane(img.plane(0), path);
    return;
  }
  cv::Mat mat(h, w, CV_8UC3);
  for (int y = 0; y < h; ++y) {
    auto* dst = mat.ptr<std::uint8_t>(y);
    for (int x = 0; x < w; ++x) {
      dst[3 * x + 0] = quantize(img.plane(2)(x, y));
      dst[3 * x + 1] = quantize(img.plane(1)(x, y));
      dst[3 * x + 2] = quantize(img.plane(0)(x, y));
    }
  }
  write_png(mat, path);
}

void save_plane(const Plane& plane, const std::filesystem::path& path) {
  cv::Mat mat(plane.height(), plane.width(), CV_8UC1);
  for (int y = 0; y < plane.height(); ++y) {
    auto* dst = mat.ptr<std::uint8_t>(y);
    for (int x = 0; x < plane.width(); ++x) dst[x] = quantize(plane(x, y));
  }
  write_png(mat, path);
}

void save_mask(const DecisionMap& mask, const std::filesystem::path& path) {
  cv::Mat mat(mask.height(), mask.width(), CV_8UC1);
  for (int y = 0; y < mask.height(); ++y) {
    auto* dst = mat.ptr<std::uint8_t>(y);
    for (int x = 0; x < mask.width(); ++x) dst[x] = mask(x, y) ? 255 : 0;
  }
  write_png(mat, path);
}

void save_normalized(const RealMap& map, const std::filesystem::path& path) {
  const auto d = map.data();
  const double peak = d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
  cv::Mat mat(map.height(), map.width(), CV_8UC1);
  for (int y = 0; y < map.height(); ++y) {
    auto* dst = mat.ptr<std::uint8_t>(y);
    for (int x = 0; x < map.width(); ++x) {
      dst[x] = peak > 0.0 ? quantize(map(x, y) / peak) : 0;
    }
  }
  write_png(mat, path);
}

}  // namespace gradfuse
