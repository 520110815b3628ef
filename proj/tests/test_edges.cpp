#include <gtest/gtest.h>

#include "oracles.hpp"
#include "stereobench/edges.hpp"
#include "stereobench/image_io.hpp"
#include "test_util.hpp"

using namespace stereobench;

namespace {

Plane random_plane(std::mt19937_64& rng, int w, int h) {
  std::normal_distribution<double> n;
  Plane p(w, h);
  for (double& v : p.values()) v = n(rng);
  return p;
}

double dot(const Plane& a, const Plane& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.values()[i] * b.values()[i];
  return s;
}

GrayImage step_image(int w, int h, bool vertical) {
  GrayImage g(w, h);
  Plane p(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) p(x, y) = (vertical ? x >= w / 2 : y >= h / 2) ? 200.0 : 20.0;
  }
  return GrayImage(std::move(p));
}

}  // namespace

TEST(Sobel, LinearRampHasConstantInteriorGradient) {
  Plane p(6, 5);
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 6; ++x) p(x, y) = 3.0 * x - 2.0 * y;
  }
  const GradientField g = sobel(p);
  for (int y = 1; y < 4; ++y) {
    for (int x = 1; x < 5; ++x) {
      EXPECT_DOUBLE_EQ(g.gx(x, y), 24.0);
      EXPECT_DOUBLE_EQ(g.gy(x, y), -16.0);
      EXPECT_DOUBLE_EQ(g.magnitude(x, y), std::hypot(24.0, 16.0));
    }
  }
  // Replicate padding halves the central difference at the border.
  EXPECT_DOUBLE_EQ(g.gx(0, 2), 12.0);
}

TEST(Sobel, AdjointSatisfiesDotProductIdentity) {
  std::mt19937_64 rng(11);
  for (auto [w, h] : {std::pair{1, 1}, std::pair{2, 3}, std::pair{8, 8}, std::pair{13, 7}}) {
    const Plane u = random_plane(rng, w, h);
    const Plane gx = random_plane(rng, w, h);
    const Plane gy = random_plane(rng, w, h);
    const GradientField su = sobel(u);
    const double lhs = dot(su.gx, gx) + dot(su.gy, gy);
    const double rhs = dot(u, sobel_adjoint(gx, gy));
    EXPECT_NEAR(lhs, rhs, 1e-10 * (1 + std::abs(lhs))) << w << "x" << h;
  }
}

TEST(Sobel, EmptyInputIsRejected) { EXPECT_EQ(code_of([] { sobel(Plane()); }), ErrorCode::EmptyInput); }

TEST(Gaussian, RadiusRule) {
  EXPECT_EQ(gaussian_radius(1.4), 2);
  EXPECT_EQ(gaussian_radius(0.2), 1);
  EXPECT_EQ(gaussian_radius(2.0), 3);
}

TEST(Gaussian, BlurPreservesConstantsAndMass) {
  const Plane c = gaussian_blur(Plane(7, 4, 42.0), 1.4);
  for (double v : c.values()) EXPECT_NEAR(v, 42.0, 1e-12);
  Plane impulse(21, 21);
  impulse(10, 10) = 1.0;
  const Plane b = gaussian_blur(impulse, 1.4);
  double sum = 0;
  for (double v : b.values()) sum += v;
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(b(8, 10), b(12, 10));
  EXPECT_DOUBLE_EQ(b(10, 8), b(8, 10));
  EXPECT_EQ(b(7, 10), 0.0);
}

TEST(CannyParams, Validation) {
  EXPECT_EQ(code_of([] { CannyParams{0.0, 50, 150}.validate(); }), ErrorCode::InvalidParams);
  EXPECT_EQ(code_of([] { CannyParams{1.4, 160, 150}.validate(); }), ErrorCode::InvalidParams);
  EXPECT_EQ(code_of([] { CannyParams{1.4, -1, 150}.validate(); }), ErrorCode::InvalidParams);
  EXPECT_NO_THROW(CannyParams{}.validate());
}

TEST(Canny, ConstantImageHasNoEdges) { EXPECT_EQ(canny(GrayImage(9, 9, 77.0)).count(), 0u); }

TEST(Canny, StepEdgesAreOnePixelThick) {
  for (bool vertical : {true, false}) {
    const GrayImage g = step_image(20, 16, vertical);
    const BinaryMap e = canny(g);
    const int lines = vertical ? g.height() : g.width();
    const int across = vertical ? g.width() : g.height();
    for (int i = 0; i < lines; ++i) {
      int count = 0;
      for (int j = 0; j < across; ++j) count += vertical ? e(j, i) : e(i, j);
      EXPECT_EQ(count, 1) << (vertical ? "row " : "column ") << i;
    }
  }
}

TEST(Canny, WeakEdgesNeedAStrongNeighbour) {
  // A faint step alone stays below the high threshold.
  Plane p(20, 10);
  for (int y = 0; y < 10; ++y) {
    for (int x = 0; x < 20; ++x) p(x, y) = x >= 10 ? 40.0 : 20.0;
  }
  EXPECT_EQ(canny(GrayImage(p)).count(), 0u);
  EXPECT_GT(canny(GrayImage(p), {1.4, 10.0, 20.0}).count(), 0u);
}

TEST(Canny, AgreesWithOpenCvReference) {
  for (const std::string& name : oracle::kImageNames) {
    const GrayImage g = to_grayscale(load_image(oracle::kDataDir / (name + ".png")));
    for (auto [low, high] : {std::pair{50.0, 150.0}, std::pair{20.0, 60.0}}) {
      const double agree = oracle::agreement(canny(g, {1.4, low, high}), oracle::canny(g, 1.4, low, high));
      EXPECT_GE(agree, 0.99) << name << " low " << low;
    }
  }
}
