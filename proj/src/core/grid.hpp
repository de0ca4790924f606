#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gradfuse {

/// Error raised by every core operation. The code mirrors the C API status values.
class Error : public std::runtime_error {
 public:
  enum class Code { invalid_argument = 1, io = 2, format = 3, dimension = 4, no_pairs = 5 };

  Error(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

/// Row-major 2-D array, x is the column and y the row, origin at the top-left.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height) {
    if (width < 0 || height < 0) {
      throw Error(Error::Code::dimension, "negative grid dimensions");
    }
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(int x, int y) { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const { return data_[index(x, y)]; }

  /// Clamp-to-edge access used for replicate borders.
  const T& clamped(int x, int y) const {
    x = x < 0 ? 0 : (x >= width_ ? width_ - 1 : x);
    y = y < 0 ? 0 : (y >= height_ ? height_ - 1 : y);
    return data_[index(x, y)];
  }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }
  std::span<T> row(int y) { return std::span<T>(data_).subspan(index(0, y), width_); }
  std::span<const T> row(int y) const {
    return std::span<const T>(data_).subspan(index(0, y), width_);
  }

  bool same_shape(const Grid& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }
  template <typename U>
  bool same_shape(const Grid<U>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.data_ == b.data_;
  }

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

/// Unconstrained real map: gradients, saliency, differences, soft weights.
using RealMap = Grid<double>;

/// Binary map; every sample is exactly 0 or 1.
using DecisionMap = Grid<std::uint8_t>;

template <typename A, typename B>
void require_same_shape(const Grid<A>& a, const Grid<B>& b, const char* what) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(Error::Code::dimension, std::string(what) + ": dimension mismatch");
  }
}

}  // namespace gradfuse
