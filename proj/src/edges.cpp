#include "stereobench/edges.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "stereobench/error.hpp"

namespace stereobench {
namespace {

// Rows are dy = -1..1, columns dx = -1..1.
constexpr std::array<std::array<double, 3>, 3> kSobelX{{{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}}};
constexpr std::array<std::array<double, 3>, 3> kSobelY{{{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}}};

int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

void require_nonempty(const Plane& p, const char* what) {
  if (p.width() == 0 || p.height() == 0) throw Error(ErrorCode::EmptyInput, std::string(what) + " is empty");
}

}  // namespace

void CannyParams::validate() const {
  if (!(gaussian_sigma > 0.0) || !std::isfinite(gaussian_sigma)) {
    throw Error(ErrorCode::InvalidParams, "canny sigma must be > 0");
  }
  if (!(low_threshold >= 0.0 && low_threshold <= 255.0 && high_threshold >= 0.0 && high_threshold <= 255.0)) {
    throw Error(ErrorCode::InvalidParams, "canny thresholds must lie in [0, 255]");
  }
  if (low_threshold > high_threshold) {
    throw Error(ErrorCode::InvalidParams, "canny low threshold exceeds high threshold");
  }
}

GradientField sobel(const Plane& field) {
  require_nonempty(field, "sobel input");
  const int w = field.width();
  const int h = field.height();
  GradientField out{Plane(w, h), Plane(w, h), Plane(w, h)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double gx = 0.0;
      double gy = 0.0;
      for (int dy = -1; dy <= 1; ++dy) {
        const int sy = clamp_index(y + dy, h);
        for (int dx = -1; dx <= 1; ++dx) {
          const double v = field(clamp_index(x + dx, w), sy);
          gx += kSobelX[dy + 1][dx + 1] * v;
          gy += kSobelY[dy + 1][dx + 1] * v;
        }
      }
      out.gx(x, y) = gx;
      out.gy(x, y) = gy;
      out.magnitude(x, y) = std::sqrt(gx * gx + gy * gy);
    }
  }
  return out;
}

Plane sobel_adjoint(const Plane& grad_gx, const Plane& grad_gy) {
  require_nonempty(grad_gx, "sobel adjoint input");
  if (grad_gx.width() != grad_gy.width() || grad_gx.height() != grad_gy.height()) {
    throw Error(ErrorCode::DimensionMismatch, "sobel adjoint gx/gy planes differ in size");
  }
  const int w = grad_gx.width();
  const int h = grad_gx.height();
  Plane out(w, h);
  // Transpose of the forward gather: every tap scatters back to the
  // (possibly clamped) source pixel it read from.
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double ax = grad_gx(x, y);
      const double ay = grad_gy(x, y);
      for (int dy = -1; dy <= 1; ++dy) {
        const int sy = clamp_index(y + dy, h);
        for (int dx = -1; dx <= 1; ++dx) {
          out(clamp_index(x + dx, w), sy) += kSobelX[dy + 1][dx + 1] * ax + kSobelY[dy + 1][dx + 1] * ay;
        }
      }
    }
  }
  return out;
}

int gaussian_radius(double sigma) { return std::max(1, static_cast<int>(std::lround(1.5 * sigma))); }

Plane gaussian_blur(const Plane& field, double sigma) {
  require_nonempty(field, "blur input");
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidParams, "blur sigma must be > 0");
  const int r = gaussian_radius(sigma);
  std::vector<double> kernel(static_cast<std::size_t>(2 * r + 1));
  double total = 0.0;
  for (int i = -r; i <= r; ++i) {
    const double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
    kernel[static_cast<std::size_t>(i + r)] = v;
    total += v;
  }
  for (double& v : kernel) v /= total;

  const int w = field.width();
  const int h = field.height();
  Plane horizontal(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += kernel[static_cast<std::size_t>(i + r)] * field(clamp_index(x + i, w), y);
      horizontal(x, y) = acc;
    }
  }
  Plane out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) {
        acc += kernel[static_cast<std::size_t>(i + r)] * horizontal(x, clamp_index(y + i, h));
      }
      out(x, y) = acc;
    }
  }
  return out;
}

BinaryMap canny(const GrayImage& gray, const CannyParams& params) {
  params.validate();
  const int w = gray.width();
  const int h = gray.height();
  const GradientField grad = sobel(gaussian_blur(gray.plane(), params.gaussian_sigma));
  const Plane& mag = grad.magnitude;

  // Magnitude outside the image counts as zero during suppression.
  auto mag_at = [&](int x, int y) {
    return (x < 0 || y < 0 || x >= w || y >= h) ? 0.0 : mag(x, y);
  };
  const double tan22 = std::tan(std::numbers::pi / 8.0);
  const double tan67 = std::tan(3.0 * std::numbers::pi / 8.0);

  enum : std::uint8_t { kNone = 0, kWeak = 1, kStrong = 2 };
  std::vector<std::uint8_t> state(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), kNone);
  std::vector<int> stack;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double m = mag(x, y);
      if (!(m > params.low_threshold)) continue;
      const double gx = grad.gx(x, y);
      const double gy = grad.gy(x, y);
      const double ax = std::abs(gx);
      const double ay = std::abs(gy);
      bool is_max = false;
      if (ay <= tan22 * ax) {
        is_max = m > mag_at(x - 1, y) && m >= mag_at(x + 1, y);
      } else if (ay > tan67 * ax) {
        is_max = m > mag_at(x, y - 1) && m >= mag_at(x, y + 1);
      } else if ((gx > 0) == (gy > 0)) {
        // Gradient along the main diagonal (image y grows downward).
        is_max = m > mag_at(x - 1, y - 1) && m > mag_at(x + 1, y + 1);
      } else {
        is_max = m > mag_at(x + 1, y - 1) && m > mag_at(x - 1, y + 1);
      }
      if (!is_max) continue;
      const std::size_t idx = static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x);
      if (m > params.high_threshold) {
        state[idx] = kStrong;
        stack.push_back(static_cast<int>(idx));
      } else {
        state[idx] = kWeak;
      }
    }
  }

  while (!stack.empty()) {
    const int idx = stack.back();
    stack.pop_back();
    const int x = idx % w;
    const int y = idx / w;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = x + dx;
        const int ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        const std::size_t n = static_cast<std::size_t>(ny) * static_cast<std::size_t>(w) + static_cast<std::size_t>(nx);
        if (state[n] == kWeak) {
          state[n] = kStrong;
          stack.push_back(static_cast<int>(n));
        }
      }
    }
  }

  BinaryMap edges(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      edges.set(x, y, state[static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x)] == kStrong);
    }
  }
  return edges;
}

}  // namespace stereobench
