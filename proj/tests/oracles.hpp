// Independent reference implementations shared by the unit tests and the
// acceptance runner. None of them call into the code they check.
#pragma once

#include <opencv2/core.hpp>
#include <opencv2/imgproc.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "stereobench/geometry.hpp"
#include "stereobench/image.hpp"

namespace oracle {

inline const std::filesystem::path kDataDir{STEREOBENCH_TEST_DATA};
inline const std::vector<std::string> kImageNames{"astronaut", "coffee", "chelsea", "rocket", "motorcycle_left"};

// Rank by pair counting: 1 + (#smaller) + (#equal others) / 2.
inline std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    int less = 0, equal = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] < v[i]) ++less;
      if (j != i && v[j] == v[i]) ++equal;
    }
    r[i] = 1.0 + less + equal / 2.0;
  }
  return r;
}

// Pearson on ranks. For small n every intermediate is an exact multiple of
// 1/4, so only the final division and sqrt round.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  return sxy / std::sqrt(sxx * syy);
}

inline double kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
  std::int64_t concordant = 0, discordant = 0, tx = 0, ty = 0, pairs = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      ++pairs;
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0) ++tx;
      if (dy == 0) ++ty;
      if (dx * dy > 0) ++concordant;
      if (dx * dy < 0) ++discordant;
    }
  }
  return static_cast<double>(concordant - discordant) / std::sqrt(static_cast<double>((pairs - tx) * (pairs - ty)));
}

// Per target pixel: among sources whose x - d falls in (t - 0.5, t + 0.5],
// keep the one with the largest disparity.
inline stereobench::WarpResult warp(const stereobench::Image& left, const stereobench::DisparityMap& disp) {
  const int w = left.width();
  const int h = left.height();
  stereobench::WarpResult out{stereobench::Image(w, h), stereobench::BinaryMap(w, h, true)};
  for (int y = 0; y < h; ++y) {
    for (int t = 0; t < w; ++t) {
      int best = -1;
      for (int x = 0; x < w; ++x) {
        const double v = x - disp(x, y);
        if (v > t - 0.5 && v <= t + 0.5 && (best < 0 || disp(x, y) > disp(best, y))) best = x;
      }
      if (best < 0) continue;
      for (int c = 0; c < 3; ++c) out.warped(t, y, c) = left(best, y, c);
      out.occlusion.set(t, y, false);
    }
  }
  return out;
}

inline cv::Mat to_mat(const stereobench::GrayImage& g) {
  cv::Mat m(g.height(), g.width(), CV_32F);
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) m.at<float>(y, x) = static_cast<float>(g(x, y));
  }
  return m;
}

// OpenCV Canny on an externally blurred image, L2 gradient magnitude.
inline cv::Mat canny(const stereobench::GrayImage& g, double sigma, double low, double high) {
  const int radius = std::max(1, static_cast<int>(std::lround(1.5 * sigma)));
  cv::Mat blurred, dx, dy, dx16, dy16, edges;
  cv::GaussianBlur(to_mat(g), blurred, cv::Size(2 * radius + 1, 2 * radius + 1), sigma, sigma, cv::BORDER_REPLICATE);
  cv::Sobel(blurred, dx, CV_32F, 1, 0, 3, 1, 0, cv::BORDER_REPLICATE);
  cv::Sobel(blurred, dy, CV_32F, 0, 1, 3, 1, 0, cv::BORDER_REPLICATE);
  dx.convertTo(dx16, CV_16S);
  dy.convertTo(dy16, CV_16S);
  cv::Canny(dx16, dy16, edges, low, high, true);
  return edges;
}

inline double agreement(const stereobench::BinaryMap& ours, const cv::Mat& reference) {
  std::size_t same = 0;
  for (int y = 0; y < ours.height(); ++y) {
    for (int x = 0; x < ours.width(); ++x) same += (ours(x, y) == (reference.at<std::uint8_t>(y, x) != 0));
  }
  return static_cast<double>(same) / static_cast<double>(ours.width() * ours.height());
}

// Frozen scikit-image values for SSIM(gray(name), gray(name_degraded)).
inline std::map<std::string, double> ssim_reference() {
  std::ifstream in(kDataDir / "ssim_reference.json");
  return nlohmann::json::parse(in).get<std::map<std::string, double>>();
}

inline stereobench::Image random_image(std::mt19937_64& rng, int w, int h) {
  std::uniform_int_distribution<int> d(0, 255);
  stereobench::Image img(w, h);
  for (double& v : img.values()) v = d(rng);
  return img;
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("stereobench_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace oracle
