#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "stereobench/rank_correlation.hpp"
#include "test_util.hpp"

using namespace stereobench;

namespace {

bool constant(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
}

}  // namespace

TEST(Ranks, TiesShareTheAverageRank) {
  const std::vector<double> v{10, 20, 20, 5, 20};
  EXPECT_EQ(average_ranks(v), (std::vector<double>{2, 4, 4, 1, 4}));
}

TEST(Spearman, HandExamples) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  EXPECT_DOUBLE_EQ(spearman(x, std::vector<double>{1, 3, 2, 5, 4}), 0.8);
  EXPECT_DOUBLE_EQ(spearman(x, x), 1.0);
  EXPECT_DOUBLE_EQ(spearman(x, std::vector<double>{9, 7, 5, 3, 1}), -1.0);
}

TEST(Kendall, HandExamples) {
  EXPECT_NEAR(kendall(std::vector<double>{1, 2, 3}, std::vector<double>{1, 3, 2}), 1.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(kendall(std::vector<double>{1, 2, 3, 4}, std::vector<double>{2, 4, 6, 8}), 1.0);
}

TEST(RankCorrelation, Errors) {
  const std::vector<double> a{1, 2, 3};
  EXPECT_EQ(code_of([&] { spearman(a, std::vector<double>{1, 2}); }), ErrorCode::LengthMismatch);
  EXPECT_EQ(code_of([&] { kendall(a, std::vector<double>{4, 4, 4}); }), ErrorCode::DegenerateInput);
  EXPECT_EQ(code_of([] { spearman(std::vector<double>{1}, std::vector<double>{2}); }), ErrorCode::DegenerateInput);
  EXPECT_EQ(code_of([&] { kendall(a, std::vector<double>{1, std::nan(""), 3}); }), ErrorCode::InvalidParams);
}

TEST(RankCorrelation, MatchesBruteForceExactly) {
  std::mt19937_64 rng(31);
  int checked = 0;
  while (checked < 1000) {
    const int n = std::uniform_int_distribution<int>(2, 10)(rng);
    const int levels = std::uniform_int_distribution<int>(2, 12)(rng);
    std::uniform_int_distribution<int> d(1, levels);
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = d(rng);
      y[i] = d(rng);
    }
    if (constant(x) || constant(y)) continue;
    ASSERT_EQ(spearman(x, y), oracle::spearman(x, y)) << "case " << checked;
    ASSERT_EQ(kendall(x, y), oracle::kendall_tau_b(x, y)) << "case " << checked;
    ++checked;
  }
}

TEST(RankCorrelation, InvariantUnderMonotoneTransforms) {
  std::mt19937_64 rng(32);
  std::normal_distribution<double> n;
  for (int t = 0; t < 50; ++t) {
    std::vector<double> x(9), y(9), fx(9);
    for (int i = 0; i < 9; ++i) {
      x[i] = std::round(3 * n(rng));
      y[i] = n(rng);
      fx[i] = std::exp(x[i]) + 7;
    }
    if (constant(x)) continue;
    EXPECT_EQ(spearman(fx, y), spearman(x, y));
    EXPECT_EQ(kendall(fx, y), kendall(x, y));
  }
}
