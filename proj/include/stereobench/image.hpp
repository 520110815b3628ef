#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace stereobench {

/// Row-major 2D array of reals. Used for luminance, disparity, depth and
/// latent channel planes. May be empty (0x0); the typed wrappers below are not.
class Plane {
 public:
  Plane() = default;
  Plane(int width, int height, double fill = 0.0);
  Plane(int width, int height, std::vector<double> values);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  double operator()(int x, int y) const noexcept { return values_[index(x, y)]; }
  double& operator()(int x, int y) noexcept { return values_[index(x, y)]; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

/// Luminance image with every value in [0, 255].
class GrayImage {
 public:
  GrayImage(int width, int height, double fill = 0.0);
  GrayImage(int width, int height, std::vector<double> values);
  explicit GrayImage(Plane plane);

  int width() const noexcept { return plane_.width(); }
  int height() const noexcept { return plane_.height(); }
  double operator()(int x, int y) const noexcept { return plane_(x, y); }
  std::span<const double> values() const noexcept { return plane_.values(); }
  const Plane& plane() const noexcept { return plane_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  Plane plane_;
};

/// Interleaved RGB image, real-valued intensities on the [0, 255] scale.
class Image {
 public:
  static constexpr int kChannels = 3;

  Image(int width, int height);
  Image(int width, int height, std::vector<double> rgb);
  static Image filled(int width, int height, double r, double g, double b);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  double operator()(int x, int y, int c) const noexcept { return values_[index(x, y, c)]; }
  double& operator()(int x, int y, int c) noexcept { return values_[index(x, y, c)]; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int x, int y, int c) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) *
               kChannels +
           static_cast<std::size_t>(c);
  }

  int width_;
  int height_;
  std::vector<double> values_;
};

/// Boolean mask, one byte per pixel (0 or 1).
class BinaryMap {
 public:
  BinaryMap(int width, int height, bool fill = false);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  bool operator()(int x, int y) const noexcept { return values_[index(x, y)] != 0; }
  void set(int x, int y, bool on) noexcept { values_[index(x, y)] = on ? 1 : 0; }

  std::span<const std::uint8_t> values() const noexcept { return values_; }
  std::size_t count() const noexcept;

  friend bool operator==(const BinaryMap&, const BinaryMap&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  std::vector<std::uint8_t> values_;
};

struct LumaWeights {
  double r = 0.299;
  double g = 0.587;
  double b = 0.114;
};

GrayImage to_grayscale(const Image& img, const LumaWeights& weights = {});

/// Replicates luminance into all three channels.
Image gray_to_rgb(const GrayImage& gray);

/// Left half is columns [0, w/2), right half [w/2, w). Throws OddWidth.
std::pair<Image, Image> split_side_by_side(const Image& frame);
Image concat_horizontal(const Image& left, const Image& right);

/// Bilinear resize with pixel-center-aligned sampling; same size is the identity.
Image resize(const Image& img, int new_width, int new_height);

/// Red-cyan composite: red from `left`, green and blue from `right`.
Image render_anaglyph(const Image& left, const Image& right);

/// Per-pixel |a - b|.
GrayImage diff_heatmap(const GrayImage& a, const GrayImage& b);

}  // namespace stereobench
