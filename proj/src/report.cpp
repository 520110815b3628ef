#include "stereobench/report.hpp"

#include <cmath>
#include <limits>

#include "detail.hpp"
#include "json.hpp"
#include "stereobench/error.hpp"

namespace stereobench {
namespace {

using nlohmann::json;

json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
  return json(v);
}

double read_number(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw Error(ErrorCode::Parse, std::string("non-numeric value for ") + key);
  }
  return v.get<double>();
}

json config_to_json(const SiouConfig& cfg) {
  return {{"alpha", cfg.alpha},
          {"diff_threshold", cfg.diff_threshold},
          {"canny",
           {{"sigma", cfg.canny.gaussian_sigma},
            {"low_threshold", cfg.canny.low_threshold},
            {"high_threshold", cfg.canny.high_threshold}}}};
}

SiouConfig config_from_json(const json& j) {
  SiouConfig cfg;
  cfg.alpha = j.at("alpha").get<double>();
  cfg.diff_threshold = j.at("diff_threshold").get<double>();
  const json& c = j.at("canny");
  cfg.canny.gaussian_sigma = c.at("sigma").get<double>();
  cfg.canny.low_threshold = c.at("low_threshold").get<double>();
  cfg.canny.high_threshold = c.at("high_threshold").get<double>();
  cfg.validate();
  return cfg;
}

}  // namespace

double metric_value(const PairScores& s, std::string_view metric) {
  if (metric == "siou") return s.siou;
  if (metric == "edge_iou") return s.edge_iou;
  if (metric == "diff_iou") return s.diff_iou;
  if (metric == "rmse") return s.rmse;
  if (metric == "psnr") return s.psnr;
  if (metric == "ssim") return s.ssim;
  throw Error(ErrorCode::InvalidParams, "unknown metric " + std::string(metric));
}

std::map<std::string, AggregateScores> aggregate_scores(const std::vector<PairScores>& per_pair) {
  std::map<std::string, std::vector<const PairScores*>> groups;
  for (const auto& p : per_pair) {
    groups["overall"].push_back(&p);
    groups[p.category].push_back(&p);
  }
  std::map<std::string, AggregateScores> out;
  for (const auto& [name, members] : groups) {
    AggregateScores a;
    a.count = members.size();
    for (const PairScores* p : members) {
      a.siou += p->siou;
      a.edge_iou += p->edge_iou;
      a.diff_iou += p->diff_iou;
      a.rmse += p->rmse;
      a.psnr += p->psnr;
      a.ssim += p->ssim;
    }
    const double n = static_cast<double>(a.count);
    a.siou /= n;
    a.edge_iou /= n;
    a.diff_iou /= n;
    a.rmse /= n;
    a.psnr /= n;
    a.ssim /= n;
    a.psnr_of_mean_rmse = psnr_from_rmse(a.rmse);
    out[name] = a;
  }
  return out;
}

MetricReport make_report(const SiouConfig& config, std::vector<PairScores> per_pair) {
  MetricReport r;
  r.config = config;
  r.per_pair = std::move(per_pair);
  r.aggregates = aggregate_scores(r.per_pair);
  return r;
}

std::string report_to_json(const MetricReport& report) {
  json pairs = json::array();
  for (const auto& p : report.per_pair) {
    pairs.push_back({{"pair_id", p.pair_id},
                     {"category", p.category},
                     {"siou", p.siou},
                     {"edge_iou", p.edge_iou},
                     {"diff_iou", p.diff_iou},
                     {"rmse", p.rmse},
                     {"psnr", number_or_inf(p.psnr)},
                     {"ssim", p.ssim}});
  }
  json aggregates = json::object();
  for (const auto& [name, a] : report.aggregates) {
    aggregates[name] = {{"count", a.count},
                        {"siou", a.siou},
                        {"edge_iou", a.edge_iou},
                        {"diff_iou", a.diff_iou},
                        {"rmse", a.rmse},
                        {"psnr", number_or_inf(a.psnr)},
                        {"ssim", a.ssim},
                        {"psnr_of_mean_rmse", number_or_inf(a.psnr_of_mean_rmse)}};
  }
  json root = {{"tool_version", std::string(kToolVersion)},
               {"config", config_to_json(report.config)},
               {"per_pair", std::move(pairs)},
               {"aggregates", std::move(aggregates)}};
  return root.dump(2) + "\n";
}

MetricReport report_from_json(std::string_view text) {
  try {
    const json root = json::parse(text);
    MetricReport r;
    r.config = config_from_json(root.at("config"));
    for (const json& p : root.at("per_pair")) {
      PairScores s;
      s.pair_id = p.at("pair_id").get<std::string>();
      s.category = p.value("category", std::string("unlabeled"));
      s.siou = read_number(p, "siou");
      s.edge_iou = read_number(p, "edge_iou");
      s.diff_iou = read_number(p, "diff_iou");
      s.rmse = read_number(p, "rmse");
      s.psnr = read_number(p, "psnr");
      s.ssim = read_number(p, "ssim");
      r.per_pair.push_back(std::move(s));
    }
    for (const auto& [name, a] : root.at("aggregates").items()) {
      AggregateScores agg;
      agg.count = a.at("count").get<std::size_t>();
      agg.siou = read_number(a, "siou");
      agg.edge_iou = read_number(a, "edge_iou");
      agg.diff_iou = read_number(a, "diff_iou");
      agg.rmse = read_number(a, "rmse");
      agg.psnr = read_number(a, "psnr");
      agg.ssim = read_number(a, "ssim");
      agg.psnr_of_mean_rmse = read_number(a, "psnr_of_mean_rmse");
      r.aggregates[name] = agg;
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("malformed report JSON: ") + e.what());
  }
}

void write_report(const std::filesystem::path& path, const MetricReport& report) {
  detail::write_text_atomic(path, report_to_json(report));
}

MetricReport read_report(const std::filesystem::path& path) { return report_from_json(detail::read_text(path)); }

}  // namespace stereobench
