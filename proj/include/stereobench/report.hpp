#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "stereobench/metrics.hpp"

namespace stereobench {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct PairScores {
  std::string pair_id;
  std::string category;
  double siou = 0.0;
  double edge_iou = 0.0;
  double diff_iou = 0.0;
  double rmse = 0.0;
  double psnr = 0.0;
  double ssim = 0.0;
};

struct AggregateScores {
  std::size_t count = 0;
  double siou = 0.0;
  double edge_iou = 0.0;
  double diff_iou = 0.0;
  double rmse = 0.0;
  /// Mean of per-pair PSNR (+infinity if any pair is identical).
  double psnr = 0.0;
  double ssim = 0.0;
  /// PSNR of the mean RMSE, the dataset-level conversion.
  double psnr_of_mean_rmse = 0.0;
};

/// Scores for one evaluation run. `aggregates` holds "overall" plus one entry per category.
struct MetricReport {
  SiouConfig config;
  std::vector<PairScores> per_pair;
  std::map<std::string, AggregateScores> aggregates;
};

inline constexpr std::array<std::string_view, 6> kMetricNames{"siou", "edge_iou", "diff_iou", "rmse", "psnr", "ssim"};

double metric_value(const PairScores& scores, std::string_view metric);

/// Arithmetic means per category and overall.
std::map<std::string, AggregateScores> aggregate_scores(const std::vector<PairScores>& per_pair);

MetricReport make_report(const SiouConfig& config, std::vector<PairScores> per_pair);

/// JSON text; infinite PSNR values are written as the string "inf".
std::string report_to_json(const MetricReport& report);
MetricReport report_from_json(std::string_view text);

void write_report(const std::filesystem::path& path, const MetricReport& report);
MetricReport read_report(const std::filesystem::path& path);

}  // namespace stereobench
