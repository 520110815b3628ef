#include "stereobench/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "detail.hpp"
#include "json.hpp"
#include "stereobench/error.hpp"
#include "stereobench/image_io.hpp"
#include "stereobench/rank_correlation.hpp"

namespace stereobench {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::array<Category, 6> kCategories{Category::Indoor, Category::Outdoor, Category::Animation,
                                              Category::Simple, Category::Complex, Category::Unlabeled};

}  // namespace

std::string_view to_string(Category c) {
  switch (c) {
    case Category::Indoor: return "indoor";
    case Category::Outdoor: return "outdoor";
    case Category::Animation: return "animation";
    case Category::Simple: return "simple";
    case Category::Complex: return "complex";
    case Category::Unlabeled: return "unlabeled";
  }
  return "unlabeled";
}

std::string_view to_string(Split s) { return s == Split::Test ? "test" : "train"; }

Category category_from_string(std::string_view name) {
  for (Category c : kCategories) {
    if (to_string(c) == name) return c;
  }
  throw Error(ErrorCode::Parse, "unknown category '" + std::string(name) + "'");
}

Split split_from_string(std::string_view name) {
  if (name == "train") return Split::Train;
  if (name == "test") return Split::Test;
  throw Error(ErrorCode::Parse, "unknown split '" + std::string(name) + "'");
}

std::string current_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch != nullptr && *epoch != '\0') {
    now = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  }
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

// ---------------------------------------------------------------------------
// Manifest I/O

namespace {

std::string stored_path(const fs::path& p, const fs::path& base) {
  const fs::path abs = fs::absolute(p).lexically_normal();
  const fs::path rel = abs.lexically_relative(fs::absolute(base).lexically_normal());
  if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
  return abs.generic_string();
}

}  // namespace

void write_manifest(const fs::path& path, const DatasetManifest& manifest) {
  const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::string out = json({{"manifest",
                           {{"schema_version", kManifestSchemaVersion},
                            {"created_at", manifest.created_at},
                            {"tool_version", manifest.tool_version}}}})
                        .dump() +
                    "\n";
  for (const PairRecord& r : manifest.records) {
    out += json({{"schema_version", kManifestSchemaVersion},
                 {"pair_id", r.pair_id},
                 {"left_path", stored_path(r.left_path, base)},
                 {"right_path", stored_path(r.right_path, base)},
                 {"category", std::string(to_string(r.category))},
                 {"split", std::string(to_string(r.split))},
                 {"source_id", r.source_id},
                 {"frame_index", r.frame_index}})
               .dump() +
           "\n";
  }
  detail::write_text_atomic(path, out);
}

DatasetManifest read_manifest(const fs::path& path) {
  const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::istringstream in(detail::read_text(path));
  DatasetManifest m;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(), [](unsigned char ch) { return std::isspace(ch); })) continue;
    try {
      const json j = json::parse(line);
      if (j.contains("manifest")) {
        const json& h = j.at("manifest");
        if (h.value("schema_version", kManifestSchemaVersion) > kManifestSchemaVersion) {
          throw Error(ErrorCode::Parse, "manifest schema version is newer than this tool");
        }
        m.created_at = h.value("created_at", std::string());
        m.tool_version = h.value("tool_version", std::string());
        continue;
      }
      PairRecord r;
      r.pair_id = j.at("pair_id").get<std::string>();
      auto resolve = [&](const std::string& s) {
        const fs::path p(s);
        return p.is_absolute() ? p : (base / p).lexically_normal();
      };
      r.left_path = resolve(j.at("left_path").get<std::string>());
      r.right_path = resolve(j.at("right_path").get<std::string>());
      r.category = category_from_string(j.value("category", std::string("unlabeled")));
      r.split = split_from_string(j.value("split", std::string("train")));
      r.source_id = j.value("source_id", std::string());
      r.frame_index = j.value("frame_index", 0);
      m.records.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::Parse, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return m;
}

void validate_manifest(const DatasetManifest& manifest, bool check_files) {
  std::set<std::string> ids;
  std::set<std::string> train_sources;
  std::set<std::string> test_sources;
  for (const PairRecord& r : manifest.records) {
    if (!ids.insert(r.pair_id).second) throw Error(ErrorCode::DuplicatePairId, "duplicate pair_id " + r.pair_id);
    (r.split == Split::Test ? test_sources : train_sources).insert(r.source_id);
    if (check_files) {
      for (const fs::path& p : {r.left_path, r.right_path}) {
        if (!fs::exists(p)) throw Error(ErrorCode::Io, "pair " + r.pair_id + " references missing file " + p.string());
      }
    }
  }
  for (const std::string& s : test_sources) {
    if (train_sources.count(s) != 0) {
      throw Error(ErrorCode::SourceOverlap, "source '" + s + "' appears in both train and test");
    }
  }
}

// ---------------------------------------------------------------------------
// Ingest

namespace {

bool is_image_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp" || ext == ".tif" || ext == ".tiff";
}

std::string pair_id_for(const std::string& source_id, int frame_index) {
  char idx[16];
  std::snprintf(idx, sizeof(idx), "%06d", frame_index);
  return source_id + "_" + idx;
}

}  // namespace

std::vector<PairRecord> ingest_frames(const fs::path& frame_dir, const fs::path& out_dir,
                                      const IngestOptions& options) {
  if (options.stride < 1) throw Error(ErrorCode::InvalidParams, "stride must be >= 1");
  if (options.target_width < 1 || options.target_height < 1) {
    throw Error(ErrorCode::ZeroDimension, "target view size must be >= 1");
  }
  if (options.source_id.empty()) throw Error(ErrorCode::InvalidParams, "source_id must not be empty");
  if (!fs::is_directory(frame_dir)) throw Error(ErrorCode::Io, frame_dir.string() + " is not a directory");

  std::vector<fs::path> frames;
  for (const auto& entry : fs::directory_iterator(frame_dir)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) frames.push_back(entry.path());
  }
  if (frames.empty()) throw Error(ErrorCode::EmptyDirectory, "no frames in " + frame_dir.string());
  std::sort(frames.begin(), frames.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });

  std::vector<PairRecord> records;
  for (std::size_t i = 0; i < frames.size(); i += static_cast<std::size_t>(options.stride)) {
    const Image frame = resize(load_image(frames[i]), 2 * options.target_width, options.target_height);
    const auto [left, right] = split_side_by_side(frame);
    PairRecord r;
    r.frame_index = static_cast<int>(i);
    r.pair_id = pair_id_for(options.source_id, r.frame_index);
    r.left_path = out_dir / "left" / (r.pair_id + ".png");
    r.right_path = out_dir / "right" / (r.pair_id + ".png");
    r.category = options.category;
    r.split = Split::Train;
    r.source_id = options.source_id;
    save_image(r.left_path, left);
    save_image(r.right_path, right);
    records.push_back(std::move(r));
  }
  return records;
}

// ---------------------------------------------------------------------------
// Partition

namespace {

// Fisher-Yates over raw mt19937_64 output, whose sequence is fixed by the
// standard (unlike std::shuffle and the distributions).
template <typename T>
void seeded_shuffle(std::vector<T>& v, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace

DatasetManifest partition(const DatasetManifest& manifest, std::size_t per_category_test, std::uint64_t seed,
                          PartitionStats* stats) {
  validate_manifest(manifest, false);
  const auto& recs = manifest.records;

  std::map<Category, std::size_t> quota;
  std::map<Category, std::size_t> available;
  for (const PairRecord& r : recs) {
    if (r.category == Category::Unlabeled) continue;
    quota[r.category] = per_category_test;
    ++available[r.category];
  }
  for (const auto& [cat, n] : available) {
    if (n < per_category_test) {
      throw Error(ErrorCode::InsufficientRecords, "category " + std::string(to_string(cat)) + " has " +
                                                      std::to_string(n) + " records, need " +
                                                      std::to_string(per_category_test));
    }
  }

  // Record indices per source and category, in frame order.
  std::map<std::string, std::map<Category, std::vector<std::size_t>>> by_source;
  for (std::size_t i = 0; i < recs.size(); ++i) by_source[recs[i].source_id][recs[i].category].push_back(i);
  for (auto& [src, cats] : by_source) {
    for (auto& [cat, idx] : cats) {
      std::stable_sort(idx.begin(), idx.end(),
                       [&](std::size_t a, std::size_t b) { return recs[a].frame_index < recs[b].frame_index; });
    }
  }
  std::vector<std::string> sources;
  for (const auto& [src, cats] : by_source) sources.push_back(src);
  seeded_shuffle(sources, seed);

  enum class Fate { Train, Test, Dropped };
  std::vector<Fate> fate(recs.size(), Fate::Train);
  std::map<Category, std::size_t> filled;
  std::set<std::string> used;

  auto labeled_counts = [&](const std::string& src) {
    std::map<Category, std::size_t> n;
    for (const auto& [cat, idx] : by_source.at(src)) {
      if (cat != Category::Unlabeled) n[cat] = idx.size();
    }
    return n;
  };
  auto mark_test = [&](const std::string& src, bool partial) {
    used.insert(src);
    for (const auto& [cat, idx] : by_source.at(src)) {
      for (std::size_t i : idx) {
        const bool takes = cat != Category::Unlabeled && (!partial || filled[cat] < quota[cat]);
        if (takes) {
          fate[i] = Fate::Test;
          ++filled[cat];
        } else {
          fate[i] = Fate::Dropped;
        }
      }
    }
  };

  // Whole sources that fit every category's remaining quota.
  for (const std::string& src : sources) {
    const auto n = labeled_counts(src);
    bool fits = false;
    bool overflows = false;
    for (const auto& [cat, count] : n) {
      if (count == 0) continue;
      if (filled[cat] + count > quota[cat]) overflows = true;
      if (filled[cat] < quota[cat]) fits = true;
    }
    if (fits && !overflows) mark_test(src, false);
  }
  // Top up remaining deficits with part of one more source each.
  for (const auto& [cat, q] : quota) {
    for (const std::string& src : sources) {
      if (filled[cat] >= q) break;
      if (used.count(src) != 0) continue;
      const auto n = labeled_counts(src);
      if (n.count(cat) == 0) continue;
      mark_test(src, true);
    }
    if (filled[cat] < q) {
      throw Error(ErrorCode::InsufficientRecords,
                  "cannot place " + std::to_string(q) + " test records for " + std::string(to_string(cat)));
    }
  }

  DatasetManifest out;
  out.created_at = manifest.created_at;
  out.tool_version = manifest.tool_version.empty() ? std::string(kToolVersion) : manifest.tool_version;
  PartitionStats st;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    if (fate[i] == Fate::Dropped) {
      ++st.dropped;
      continue;
    }
    PairRecord r = recs[i];
    r.split = fate[i] == Fate::Test ? Split::Test : Split::Train;
    ++(r.split == Split::Test ? st.test : st.train);
    out.records.push_back(std::move(r));
  }
  if (stats != nullptr) *stats = st;
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

PairScores score_pair(const Image& left, const Image& right, const Image& generated, const SiouConfig& cfg) {
  detail::require_same_size(left, right);
  const Image gen = resize(generated, right.width(), right.height());
  const GrayImage gl = to_grayscale(left);
  const GrayImage gr = to_grayscale(right);
  const GrayImage gg = to_grayscale(gen);
  const SiouScore s = siou(gl, gr, gg, cfg);
  PairScores out;
  out.siou = s.siou;
  out.edge_iou = s.edge_iou;
  out.diff_iou = s.diff_iou;
  out.rmse = rmse(gen, right);
  out.psnr = psnr_from_rmse(out.rmse);
  out.ssim = ssim(gg, gr);
  return out;
}

MetricReport run_eval(const DatasetManifest& manifest, const fs::path& candidates_dir, const SiouConfig& cfg,
                      unsigned threads) {
  cfg.validate();
  std::vector<const PairRecord*> tests;
  for (const PairRecord& r : manifest.records) {
    if (r.split == Split::Test) tests.push_back(&r);
  }
  if (tests.empty()) throw Error(ErrorCode::EmptyInput, "manifest has no test records");

  std::vector<std::string> missing;
  for (const PairRecord* r : tests) {
    if (!fs::exists(candidates_dir / (r->pair_id + ".png"))) missing.push_back(r->pair_id);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
    throw Error(ErrorCode::MissingCandidate, std::to_string(missing.size()) + " candidate(s) missing: " + list);
  }

  std::vector<PairScores> scores(tests.size());
  std::vector<std::exception_ptr> errors(tests.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tests.size(); i = next++) {
      try {
        const PairRecord& r = *tests[i];
        PairScores s = score_pair(load_image(r.left_path), load_image(r.right_path),
                                  load_image(candidates_dir / (r.pair_id + ".png")), cfg);
        s.pair_id = r.pair_id;
        s.category = std::string(to_string(r.category));
        scores[i] = std::move(s);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned n = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  n = static_cast<unsigned>(std::min<std::size_t>(n, tests.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return make_report(cfg, std::move(scores));
}

// ---------------------------------------------------------------------------
// Human correlation

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

AnnotationSet parse_annotations_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  AnnotationSet set;
  bool header = true;
  int line_no = 0;
  std::set<std::pair<std::string, std::string>> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (header) {
      if (cells.size() != 3 || cells[0] != "pair_id" || cells[1] != "annotator_id" || cells[2] != "score") {
        throw Error(ErrorCode::Parse, "annotation CSV header must be pair_id,annotator_id,score");
      }
      header = false;
      continue;
    }
    if (cells.size() != 3) throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": expected 3 columns");
    Annotation a{cells[0], cells[1], 0};
    std::size_t used = 0;
    try {
      a.score = std::stoi(cells[2], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != cells[2].size()) {
      throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": score '" + cells[2] + "' is not an integer");
    }
    if (a.score < 1 || a.score > 10) {
      throw Error(ErrorCode::OutOfRange, "line " + std::to_string(line_no) + ": score must be in [1, 10]");
    }
    if (!seen.insert({a.pair_id, a.annotator_id}).second) {
      throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": duplicate annotation for " + a.pair_id);
    }
    set.entries.push_back(std::move(a));
  }
  if (header) throw Error(ErrorCode::Parse, "annotation CSV is empty");
  return set;
}

AnnotationSet read_annotations(const fs::path& path) { return parse_annotations_csv(detail::read_text(path)); }

CorrelationResult correlate_with_humans(const MetricReport& report, const AnnotationSet& annotations) {
  std::map<std::string, const PairScores*> by_id;
  for (const PairScores& p : report.per_pair) by_id[p.pair_id] = &p;

  std::map<std::string, std::pair<double, int>> sums;
  for (const Annotation& a : annotations.entries) {
    if (by_id.count(a.pair_id) == 0) throw Error(ErrorCode::UnknownPairId, "annotated pair " + a.pair_id + " not in report");
    auto& s = sums[a.pair_id];
    s.first += a.score;
    ++s.second;
  }
  std::vector<double> human;
  std::vector<const PairScores*> rows;
  for (const auto& [id, s] : sums) {
    if (s.second < 2) {
      throw Error(ErrorCode::InsufficientAnnotations, "pair " + id + " has " + std::to_string(s.second) +
                                                          " annotator(s), need at least 2");
    }
    human.push_back(s.first / s.second);
    rows.push_back(by_id.at(id));
  }
  if (human.size() < 2) throw Error(ErrorCode::DegenerateInput, "need at least two annotated pairs");
  if (std::all_of(human.begin(), human.end(), [&](double v) { return v == human.front(); })) {
    throw Error(ErrorCode::DegenerateInput, "human scores are constant");
  }

  CorrelationResult out;
  out.pairs = human.size();
  for (std::string_view metric : kMetricNames) {
    std::vector<double> col;
    for (const PairScores* p : rows) col.push_back(metric_value(*p, metric));
    RankAgreement ra;
    if (std::all_of(col.begin(), col.end(), [&](double v) { return v == col.front(); })) {
      // A constant metric carries no ranking; reported as NaN rather than failing the others.
      ra.spearman = ra.kendall = std::numeric_limits<double>::quiet_NaN();
    } else {
      ra.spearman = spearman(col, human);
      ra.kendall = kendall(col, human);
    }
    out.by_metric[std::string(metric)] = ra;
  }
  return out;
}

std::string correlation_to_json(const CorrelationResult& result) {
  json metrics = json::object();
  auto num = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
  for (const auto& [name, ra] : result.by_metric) {
    metrics[name] = {{"spearman", num(ra.spearman)}, {"kendall", num(ra.kendall)}};
  }
  return json({{"pairs", result.pairs}, {"metrics", metrics}}).dump(2) + "\n";
}

}  // namespace stereobench
