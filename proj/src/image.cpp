#include "stereobench/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "detail.hpp"
#include "stereobench/error.hpp"

namespace stereobench {
namespace {

std::size_t pixel_count(int width, int height) {
  return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
}

void require_positive(int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::ZeroDimension,
                "image dimensions must be >= 1, got " + std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

Plane::Plane(int width, int height, double fill) : width_(width), height_(height) {
  if (width < 0 || height < 0) {
    throw Error(ErrorCode::ZeroDimension, "negative plane dimensions");
  }
  values_.assign(pixel_count(width, height), fill);
}

Plane::Plane(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (width < 0 || height < 0) {
    throw Error(ErrorCode::ZeroDimension, "negative plane dimensions");
  }
  if (values_.size() != pixel_count(width, height)) {
    throw Error(ErrorCode::LengthMismatch, "plane data length " + std::to_string(values_.size()) +
                                               " does not match " + std::to_string(width) + "x" +
                                               std::to_string(height));
  }
}

GrayImage::GrayImage(int width, int height, double fill) : GrayImage(Plane(width, height, fill)) {}

GrayImage::GrayImage(int width, int height, std::vector<double> values)
    : GrayImage(Plane(width, height, std::move(values))) {}

GrayImage::GrayImage(Plane plane) : plane_(std::move(plane)) {
  require_positive(plane_.width(), plane_.height());
  for (double v : plane_.values()) {
    if (!(v >= 0.0 && v <= 255.0)) {
      throw Error(ErrorCode::OutOfRange, "gray value " + std::to_string(v) + " outside [0, 255]");
    }
  }
}

Image::Image(int width, int height) : width_(width), height_(height) {
  require_positive(width, height);
  values_.assign(pixel_count(width, height) * kChannels, 0.0);
}

Image::Image(int width, int height, std::vector<double> rgb)
    : width_(width), height_(height), values_(std::move(rgb)) {
  require_positive(width, height);
  if (values_.size() != pixel_count(width, height) * kChannels) {
    throw Error(ErrorCode::LengthMismatch, "RGB data length " + std::to_string(values_.size()) +
                                               " does not match " + std::to_string(width) + "x" +
                                               std::to_string(height) + "x3");
  }
}

Image Image::filled(int width, int height, double r, double g, double b) {
  Image img(width, height);
  auto v = img.values();
  for (std::size_t i = 0; i < v.size(); i += kChannels) {
    v[i] = r;
    v[i + 1] = g;
    v[i + 2] = b;
  }
  return img;
}

BinaryMap::BinaryMap(int width, int height, bool fill) : width_(width), height_(height) {
  require_positive(width, height);
  values_.assign(pixel_count(width, height), fill ? 1 : 0);
}

std::size_t BinaryMap::count() const noexcept {
  return static_cast<std::size_t>(std::count(values_.begin(), values_.end(), std::uint8_t{1}));
}

GrayImage to_grayscale(const Image& img, const LumaWeights& weights) {
  std::vector<double> out(pixel_count(img.width(), img.height()));
  const auto rgb = img.values();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double y = weights.r * rgb[3 * i] + weights.g * rgb[3 * i + 1] + weights.b * rgb[3 * i + 2];
    out[i] = std::clamp(y, 0.0, 255.0);
  }
  return GrayImage(img.width(), img.height(), std::move(out));
}

Image gray_to_rgb(const GrayImage& gray) {
  Image out(gray.width(), gray.height());
  auto dst = out.values();
  const auto src = gray.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[3 * i] = dst[3 * i + 1] = dst[3 * i + 2] = src[i];
  }
  return out;
}

std::pair<Image, Image> split_side_by_side(const Image& frame) {
  if (frame.width() % 2 != 0) {
    throw Error(ErrorCode::OddWidth, "side-by-side frame width " + std::to_string(frame.width()) + " is odd");
  }
  const int half = frame.width() / 2;
  Image left(half, frame.height());
  Image right(half, frame.height());
  for (int y = 0; y < frame.height(); ++y) {
    for (int x = 0; x < half; ++x) {
      for (int c = 0; c < Image::kChannels; ++c) {
        left(x, y, c) = frame(x, y, c);
        right(x, y, c) = frame(x + half, y, c);
      }
    }
  }
  return {std::move(left), std::move(right)};
}

Image concat_horizontal(const Image& left, const Image& right) {
  if (left.height() != right.height()) {
    throw Error(ErrorCode::DimensionMismatch, "heights differ: " + std::to_string(left.height()) + " vs " +
                                                  std::to_string(right.height()));
  }
  Image out(left.width() + right.width(), left.height());
  for (int y = 0; y < out.height(); ++y) {
    for (int c = 0; c < Image::kChannels; ++c) {
      for (int x = 0; x < left.width(); ++x) out(x, y, c) = left(x, y, c);
      for (int x = 0; x < right.width(); ++x) out(left.width() + x, y, c) = right(x, y, c);
    }
  }
  return out;
}

namespace {

struct Tap {
  int lo;
  int hi;
  double frac;
};

// Source taps for pixel-center-aligned bilinear sampling along one axis.
std::vector<Tap> bilinear_taps(int src, int dst) {
  std::vector<Tap> taps(static_cast<std::size_t>(dst));
  const double scale = static_cast<double>(src) / static_cast<double>(dst);
  for (int i = 0; i < dst; ++i) {
    const double s = std::clamp((i + 0.5) * scale - 0.5, 0.0, static_cast<double>(src - 1));
    const int lo = static_cast<int>(std::floor(s));
    const int hi = std::min(lo + 1, src - 1);
    taps[static_cast<std::size_t>(i)] = {lo, hi, s - lo};
  }
  return taps;
}

}  // namespace

Image resize(const Image& img, int new_width, int new_height) {
  if (new_width < 1 || new_height < 1) {
    throw Error(ErrorCode::ZeroDimension, "resize target " + std::to_string(new_width) + "x" +
                                              std::to_string(new_height) + " has a zero dimension");
  }
  if (new_width == img.width() && new_height == img.height()) return img;

  const auto xs = bilinear_taps(img.width(), new_width);
  const auto ys = bilinear_taps(img.height(), new_height);
  Image out(new_width, new_height);
  for (int y = 0; y < new_height; ++y) {
    const Tap& ty = ys[static_cast<std::size_t>(y)];
    for (int x = 0; x < new_width; ++x) {
      const Tap& tx = xs[static_cast<std::size_t>(x)];
      for (int c = 0; c < Image::kChannels; ++c) {
        const double top = img(tx.lo, ty.lo, c) * (1.0 - tx.frac) + img(tx.hi, ty.lo, c) * tx.frac;
        const double bottom = img(tx.lo, ty.hi, c) * (1.0 - tx.frac) + img(tx.hi, ty.hi, c) * tx.frac;
        out(x, y, c) = top * (1.0 - ty.frac) + bottom * ty.frac;
      }
    }
  }
  return out;
}

Image render_anaglyph(const Image& left, const Image& right) {
  detail::require_same_size(left, right);
  Image out = right;
  auto dst = out.values();
  const auto src = left.values();
  for (std::size_t i = 0; i < dst.size(); i += Image::kChannels) dst[i] = src[i];
  return out;
}

GrayImage diff_heatmap(const GrayImage& a, const GrayImage& b) {
  detail::require_same_size(a, b);
  std::vector<double> out(a.values().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::abs(a.values()[i] - b.values()[i]);
  return GrayImage(a.width(), a.height(), std::move(out));
}

}  // namespace stereobench
