#include "stereobench/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "stereobench/error.hpp"

namespace stereobench {
namespace {

double channel_value(const cv::Mat& m, int y, int x, int c) {
  switch (m.depth()) {
    case CV_8U: return m.ptr<std::uint8_t>(y)[x * m.channels() + c];
    // 16-bit images are rescaled onto the 8-bit range.
    case CV_16U: return m.ptr<std::uint16_t>(y)[x * m.channels() + c] / 257.0;
    default: throw Error(ErrorCode::Io, "unsupported pixel depth");
  }
}

void write_bgr(const std::filesystem::path& path, const cv::Mat& bgr) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), bgr);
  } catch (const cv::Exception& e) {
    throw Error(ErrorCode::Io, "cannot write " + path.string() + ": " + e.what());
  }
  if (!ok) throw Error(ErrorCode::Io, "cannot write " + path.string());
}

}  // namespace

std::uint8_t quantize_u8(double value) noexcept {
  return static_cast<std::uint8_t>(std::clamp(std::floor(value + 0.5), 0.0, 255.0));
}

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".json");
}

Image load_image(const std::filesystem::path& path) {
  cv::Mat m = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (m.empty()) throw Error(ErrorCode::Io, "cannot decode image " + path.string());
  const int ch = m.channels();
  if (ch == 4) {
    std::cerr << "warning: dropping alpha channel of " << path.string() << "\n";
  } else if (ch != 1 && ch != 3) {
    throw Error(ErrorCode::Io, path.string() + " has unsupported channel count " + std::to_string(ch));
  }
  Image img(m.cols, m.rows);
  for (int y = 0; y < m.rows; ++y) {
    for (int x = 0; x < m.cols; ++x) {
      if (ch == 1) {
        const double v = channel_value(m, y, x, 0);
        img(x, y, 0) = img(x, y, 1) = img(x, y, 2) = v;
      } else {
        // OpenCV stores BGR(A).
        img(x, y, 0) = channel_value(m, y, x, 2);
        img(x, y, 1) = channel_value(m, y, x, 1);
        img(x, y, 2) = channel_value(m, y, x, 0);
      }
    }
  }
  return img;
}

void save_image(const std::filesystem::path& path, const Image& img) {
  cv::Mat bgr(img.height(), img.width(), CV_8UC3);
  for (int y = 0; y < img.height(); ++y) {
    auto* row = bgr.ptr<std::uint8_t>(y);
    for (int x = 0; x < img.width(); ++x) {
      row[3 * x + 0] = quantize_u8(img(x, y, 2));
      row[3 * x + 1] = quantize_u8(img(x, y, 1));
      row[3 * x + 2] = quantize_u8(img(x, y, 0));
    }
  }
  write_bgr(path, bgr);
}

void save_gray(const std::filesystem::path& path, const GrayImage& gray) { save_image(path, gray_to_rgb(gray)); }

void save_mask(const std::filesystem::path& path, const BinaryMap& mask) {
  cv::Mat bgr(mask.height(), mask.width(), CV_8UC3);
  for (int y = 0; y < mask.height(); ++y) {
    auto* row = bgr.ptr<std::uint8_t>(y);
    for (int x = 0; x < mask.width(); ++x) {
      const std::uint8_t v = mask(x, y) ? 255 : 0;
      row[3 * x] = row[3 * x + 1] = row[3 * x + 2] = v;
    }
  }
  write_bgr(path, bgr);
}

BinaryMap load_mask(const std::filesystem::path& path) {
  const Image img = load_image(path);
  BinaryMap mask(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) mask.set(x, y, img(x, y, 0) >= 128.0);
  }
  return mask;
}

}  // namespace stereobench
