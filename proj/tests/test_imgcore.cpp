#include <gtest/gtest.h>

#include <opencv2/imgcodecs.hpp>

#include "oracles.hpp"
#include "test_util.hpp"
#include "stereobench/error.hpp"
#include "stereobench/image.hpp"
#include "stereobench/image_io.hpp"

using namespace stereobench;

TEST(Image, GrayImageRejectsOutOfRangeValues) {
  EXPECT_EQ(code_of([] { GrayImage(2, 1, std::vector<double>{0.0, 255.5}); }), ErrorCode::OutOfRange);
  EXPECT_EQ(code_of([] { GrayImage(0, 3); }), ErrorCode::ZeroDimension);
  EXPECT_NO_THROW(GrayImage(1, 1, 255.0));
}

TEST(Image, GrayscaleUsesLumaWeights) {
  Image img = Image::filled(2, 2, 200, 100, 50);
  const GrayImage g = to_grayscale(img);
  EXPECT_DOUBLE_EQ(g(1, 1), 0.299 * 200 + 0.587 * 100 + 0.114 * 50);
  const GrayImage red_only = to_grayscale(img, {1.0, 0.0, 0.0});
  EXPECT_DOUBLE_EQ(red_only(0, 0), 200.0);
}

TEST(Image, GrayscaleClampsOutOfRangeResults) {
  const GrayImage g = to_grayscale(Image::filled(1, 1, 255, 255, 255), {1.0, 1.0, 1.0});
  EXPECT_DOUBLE_EQ(g(0, 0), 255.0);
}

TEST(Image, SideBySideSplitAndConcatRoundTrip) {
  std::mt19937_64 rng(3);
  for (int w : {2, 8, 34}) {
    const Image frame = oracle::random_image(rng, w, 5);
    const auto [l, r] = split_side_by_side(frame);
    EXPECT_EQ(l.width(), w / 2);
    EXPECT_EQ(l(0, 0, 0), frame(0, 0, 0));
    EXPECT_EQ(r(0, 4, 2), frame(w / 2, 4, 2));
    EXPECT_EQ(concat_horizontal(l, r), frame);
  }
}

TEST(Image, SideBySideRejectsOddWidth) {
  EXPECT_EQ(code_of([] { split_side_by_side(Image(5, 2)); }), ErrorCode::OddWidth);
}

TEST(Image, ResizeSameSizeIsIdentity) {
  std::mt19937_64 rng(4);
  const Image img = oracle::random_image(rng, 7, 3);
  EXPECT_EQ(resize(img, 7, 3), img);
}

TEST(Image, ResizeSamplesPixelCenters) {
  Image row(2, 1, {0, 0, 0, 100, 100, 100});
  const Image up = resize(row, 4, 1);
  const double expected[] = {0, 25, 75, 100};
  for (int x = 0; x < 4; ++x) EXPECT_NEAR(up(x, 0, 1), expected[x], 1e-12) << x;
}

TEST(Image, ResizeKeepsConstantImagesConstant) {
  const Image up = resize(Image::filled(3, 5, 10, 20, 30), 11, 2);
  for (int y = 0; y < 2; ++y) {
    for (int x = 0; x < 11; ++x) EXPECT_NEAR(up(x, y, 2), 30.0, 1e-12);
  }
}

TEST(Image, ResizeRejectsZeroTarget) {
  EXPECT_EQ(code_of([] { resize(Image(3, 3), 0, 3); }), ErrorCode::ZeroDimension);
}

TEST(Image, AnaglyphTakesRedFromLeft) {
  const Image a = Image::filled(2, 2, 10, 20, 30);
  const Image b = Image::filled(2, 2, 40, 50, 60);
  const Image ana = render_anaglyph(a, b);
  EXPECT_EQ(ana(1, 1, 0), 10);
  EXPECT_EQ(ana(1, 1, 1), 50);
  EXPECT_EQ(ana(1, 1, 2), 60);
  std::mt19937_64 rng(5);
  const Image x = oracle::random_image(rng, 6, 4);
  EXPECT_EQ(render_anaglyph(x, x), x);
  EXPECT_EQ(code_of([&] { render_anaglyph(x, Image(6, 3)); }), ErrorCode::DimensionMismatch);
}

TEST(Image, DiffHeatmapIsSymmetricAndZeroOnItself) {
  std::mt19937_64 rng(6);
  const GrayImage a = to_grayscale(oracle::random_image(rng, 9, 4));
  const GrayImage b = to_grayscale(oracle::random_image(rng, 9, 4));
  EXPECT_EQ(diff_heatmap(a, b), diff_heatmap(b, a));
  const GrayImage self = diff_heatmap(a, a);
  for (double v : self.values()) EXPECT_EQ(v, 0.0);
  EXPECT_DOUBLE_EQ(diff_heatmap(a, b)(3, 2), std::abs(a(3, 2) - b(3, 2)));
}

TEST(ImageIo, QuantizeRoundsHalfUpAndClamps) {
  EXPECT_EQ(quantize_u8(2.5), 3);
  EXPECT_EQ(quantize_u8(2.49), 2);
  EXPECT_EQ(quantize_u8(-4.0), 0);
  EXPECT_EQ(quantize_u8(300.0), 255);
}

TEST(ImageIo, PngRoundTripIsExactForIntegerImages) {
  std::mt19937_64 rng(7);
  const auto dir = oracle::scratch_dir("io_roundtrip");
  const Image img = oracle::random_image(rng, 13, 6);
  save_image(dir / "a.png", img);
  EXPECT_EQ(load_image(dir / "a.png"), img);
}

TEST(ImageIo, SixteenBitGrayAndAlphaInputs) {
  const auto dir = oracle::scratch_dir("io_formats");
  cv::Mat g16(2, 3, CV_16UC1, cv::Scalar(257 * 200));
  cv::imwrite((dir / "g16.png").string(), g16);
  const Image a = load_image(dir / "g16.png");
  EXPECT_DOUBLE_EQ(a(2, 1, 0), 200.0);
  EXPECT_DOUBLE_EQ(a(2, 1, 2), 200.0);

  cv::Mat bgra(1, 1, CV_8UC4, cv::Scalar(1, 2, 3, 4));
  cv::imwrite((dir / "alpha.png").string(), bgra);
  const Image b = load_image(dir / "alpha.png");
  EXPECT_EQ(b(0, 0, 0), 3);
  EXPECT_EQ(b(0, 0, 2), 1);
}

TEST(ImageIo, MissingFileIsAnIoError) {
  EXPECT_EQ(code_of([] { load_image("/nonexistent/definitely_missing.png"); }), ErrorCode::Io);
}

TEST(ImageIo, MaskRoundTrip) {
  const auto dir = oracle::scratch_dir("io_mask");
  BinaryMap m(4, 3);
  m.set(1, 2, true);
  m.set(3, 0, true);
  save_mask(dir / "m.png", m);
  EXPECT_EQ(load_mask(dir / "m.png"), m);
}
