#pragma once

#include <span>
#include <vector>

namespace stereobench {

/// 1-based ranks; tied values share the average of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of the average ranks.
/// Throws LengthMismatch, or DegenerateInput when n < 2 or either input is constant.
double spearman(std::span<const double> x, std::span<const double> y);

/// Kendall tau-b, O(n log n) via merge-sort discordance counting.
/// Throws LengthMismatch, or DegenerateInput when n < 2 or either input is constant.
double kendall(std::span<const double> x, std::span<const double> y);

}  // namespace stereobench
