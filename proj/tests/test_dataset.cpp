#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <set>

#include "oracles.hpp"
#include "stereobench/dataset.hpp"
#include "stereobench/image_io.hpp"
#include "test_util.hpp"

using namespace stereobench;
namespace fs = std::filesystem;

namespace {

// `per_source` records for each of `sources` sources, cycling through the categories.
DatasetManifest synthetic_manifest(int sources, int per_source, bool with_unlabeled = false) {
  constexpr Category kCats[] = {Category::Indoor, Category::Outdoor, Category::Animation, Category::Simple,
                                Category::Complex};
  DatasetManifest m;
  m.created_at = "2024-01-01T00:00:00Z";
  for (int s = 0; s < sources; ++s) {
    for (int f = 0; f < per_source; ++f) {
      PairRecord r;
      r.source_id = "film" + std::to_string(s);
      r.frame_index = 8 * f;
      r.pair_id = r.source_id + "_" + std::to_string(r.frame_index);
      r.category = with_unlabeled && f == per_source - 1 ? Category::Unlabeled : kCats[s % 5];
      r.left_path = "left/" + r.pair_id + ".png";
      r.right_path = "right/" + r.pair_id + ".png";
      m.records.push_back(r);
    }
  }
  return m;
}

// Side-by-side frame whose left half is `l` and right half is `r`.
Image sbs_frame(int w, int h, double l, double r) {
  Image img(2 * w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < 2 * w; ++x) {
      for (int c = 0; c < 3; ++c) img(x, y, c) = x < w ? l : r;
    }
  }
  return img;
}

// Left/right/candidate files for a small test-split manifest.
struct EvalFixture {
  fs::path dir;
  DatasetManifest manifest;
};

EvalFixture make_eval_fixture(const std::string& name, int pairs) {
  EvalFixture fx{oracle::scratch_dir(name), {}};
  std::mt19937_64 rng(61);
  for (int i = 0; i < pairs; ++i) {
    PairRecord r;
    r.pair_id = "p" + std::to_string(i);
    r.source_id = "s" + std::to_string(i);
    r.category = i % 2 ? Category::Outdoor : Category::Indoor;
    r.split = Split::Test;
    r.left_path = fx.dir / "left" / (r.pair_id + ".png");
    r.right_path = fx.dir / "right" / (r.pair_id + ".png");
    const Image left = oracle::random_image(rng, 24, 16);
    Image right(24, 16);
    for (int y = 0; y < 16; ++y) {
      for (int x = 0; x < 24; ++x) {
        for (int c = 0; c < 3; ++c) right(x, y, c) = left(std::min(x + 2, 23), y, c);
      }
    }
    save_image(r.left_path, left);
    save_image(r.right_path, right);
    save_image(fx.dir / "gt" / (r.pair_id + ".png"), right);
    save_image(fx.dir / "idm" / (r.pair_id + ".png"), left);
    fx.manifest.records.push_back(r);
  }
  return fx;
}

}  // namespace

TEST(Categories, StringRoundTrip) {
  for (Category c : {Category::Indoor, Category::Outdoor, Category::Animation, Category::Simple, Category::Complex,
                     Category::Unlabeled}) {
    EXPECT_EQ(category_from_string(to_string(c)), c);
  }
  EXPECT_EQ(split_from_string("test"), Split::Test);
  EXPECT_EQ(code_of([] { category_from_string("underwater"); }), ErrorCode::Parse);
}

TEST(Manifest, RoundTripStoresRelativePaths) {
  const fs::path dir = oracle::scratch_dir("manifest");
  DatasetManifest m = synthetic_manifest(2, 2);
  for (auto& r : m.records) {
    r.left_path = dir / r.left_path;
    r.right_path = dir / r.right_path;
  }
  m.records[0].split = Split::Test;
  m.tool_version = "0.1.0";
  write_manifest(dir / "m.jsonl", m);

  std::ifstream in(dir / "m.jsonl");
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(nlohmann::json::parse(header).at("manifest").at("schema_version"), kManifestSchemaVersion);
  EXPECT_EQ(nlohmann::json::parse(first).at("left_path"), "left/film0_0.png");

  const DatasetManifest back = read_manifest(dir / "m.jsonl");
  EXPECT_EQ(back.records, m.records);
  EXPECT_EQ(back.created_at, m.created_at);
}

TEST(Manifest, RejectsNewerSchemaAndBadLines) {
  const fs::path dir = oracle::scratch_dir("manifest_bad");
  std::ofstream(dir / "new.jsonl") << R"({"manifest":{"schema_version":99}})" << "\n";
  EXPECT_EQ(code_of([&] { read_manifest(dir / "new.jsonl"); }), ErrorCode::Parse);
  std::ofstream(dir / "junk.jsonl") << "{not json\n";
  EXPECT_EQ(code_of([&] { read_manifest(dir / "junk.jsonl"); }), ErrorCode::Parse);
}

TEST(Manifest, Validation) {
  DatasetManifest dup = synthetic_manifest(1, 2);
  dup.records[1].pair_id = dup.records[0].pair_id;
  EXPECT_EQ(code_of([&] { validate_manifest(dup, false); }), ErrorCode::DuplicatePairId);

  DatasetManifest overlap = synthetic_manifest(1, 2);
  overlap.records[0].split = Split::Test;
  EXPECT_EQ(code_of([&] { validate_manifest(overlap, false); }), ErrorCode::SourceOverlap);

  EXPECT_EQ(code_of([] { validate_manifest(synthetic_manifest(1, 1), true); }), ErrorCode::Io);
}

TEST(Timestamp, HonoursSourceDateEpoch) {
  setenv("SOURCE_DATE_EPOCH", "86400", 1);
  EXPECT_EQ(current_timestamp(), "1970-01-02T00:00:00Z");
  unsetenv("SOURCE_DATE_EPOCH");
  EXPECT_EQ(current_timestamp().size(), 20u);
}

TEST(Ingest, SamplesEveryStrideFramesAndSplits) {
  const fs::path dir = oracle::scratch_dir("ingest");
  for (int i = 0; i < 16; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%03d.png", i);
    save_image(dir / "frames" / name, sbs_frame(12, 6, 10.0 * i, 200.0));
  }
  std::ofstream(dir / "frames" / "notes.txt") << "not a frame\n";
  IngestOptions opt;
  opt.source_id = "clip";
  opt.category = Category::Simple;
  opt.target_width = 6;
  opt.target_height = 3;
  const auto recs = ingest_frames(dir / "frames", dir / "out", opt);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].pair_id, "clip_000000");
  EXPECT_EQ(recs[1].pair_id, "clip_000008");
  EXPECT_EQ(recs[1].category, Category::Simple);
  const Image left = load_image(recs[1].left_path);
  const Image right = load_image(recs[1].right_path);
  EXPECT_EQ(left.width(), 6);
  EXPECT_EQ(left.height(), 3);
  EXPECT_EQ(left(2, 1, 0), 80.0);
  EXPECT_EQ(right(2, 1, 0), 200.0);
}

TEST(Ingest, EmptyDirectory) {
  const fs::path dir = oracle::scratch_dir("ingest_empty");
  IngestOptions opt;
  opt.source_id = "x";
  EXPECT_EQ(code_of([&] { ingest_frames(dir, dir / "out", opt); }), ErrorCode::EmptyDirectory);
}

TEST(Partition, ExactQuotasAndSourceDisjoint) {
  const DatasetManifest m = synthetic_manifest(40, 6, true);
  for (std::uint64_t seed : {1ull, 42ull, 7777ull}) {
    PartitionStats st;
    const DatasetManifest p = partition(m, 10, seed, &st);
    std::map<Category, int> test_count;
    std::set<std::string> test_sources, train_sources;
    for (const auto& r : p.records) {
      if (r.split == Split::Test) {
        ++test_count[r.category];
        test_sources.insert(r.source_id);
        EXPECT_NE(r.category, Category::Unlabeled);
      } else {
        train_sources.insert(r.source_id);
      }
    }
    for (Category c : {Category::Indoor, Category::Outdoor, Category::Animation, Category::Simple, Category::Complex}) {
      EXPECT_EQ(test_count[c], 10) << to_string(c);
    }
    for (const auto& s : test_sources) EXPECT_EQ(train_sources.count(s), 0u) << s;
    EXPECT_EQ(st.test + st.train + st.dropped, m.records.size());
    EXPECT_EQ(st.test, 50u);
    EXPECT_NO_THROW(validate_manifest(p, false));
  }
}

TEST(Partition, DeterministicPerSeed) {
  const DatasetManifest m = synthetic_manifest(30, 4);
  EXPECT_EQ(partition(m, 5, 42).records, partition(m, 5, 42).records);
  EXPECT_NE(partition(m, 5, 42).records, partition(m, 5, 43).records);
  EXPECT_EQ(partition(m, 5, 42).created_at, m.created_at);
}

TEST(Partition, InsufficientRecords) {
  EXPECT_EQ(code_of([] { partition(synthetic_manifest(5, 2), 3, 1); }), ErrorCode::InsufficientRecords);
}

TEST(Eval, GroundTruthCandidatesScorePerfectly) {
  const EvalFixture fx = make_eval_fixture("eval_gt", 4);
  const MetricReport r = run_eval(fx.manifest, fx.dir / "gt", SiouConfig{}, 2);
  const AggregateScores& all = r.aggregates.at("overall");
  EXPECT_EQ(all.count, 4u);
  EXPECT_EQ(all.siou, 1.0);
  EXPECT_EQ(all.rmse, 0.0);
  EXPECT_NEAR(all.ssim, 1.0, 1e-12);
  EXPECT_EQ(r.aggregates.at("indoor").count, 2u);
  EXPECT_EQ(r.per_pair[3].pair_id, "p3");
}

TEST(Eval, IdentityCandidatesHaveZeroDiffTerm) {
  const EvalFixture fx = make_eval_fixture("eval_idm", 3);
  const MetricReport r = run_eval(fx.manifest, fx.dir / "idm", SiouConfig{}, 1);
  for (const auto& p : r.per_pair) EXPECT_EQ(p.diff_iou, 0.0) << p.pair_id;
}

TEST(Eval, SmallerCandidatesAreUpsampled) {
  const EvalFixture fx = make_eval_fixture("eval_up", 1);
  save_image(fx.dir / "small" / "p0.png", Image::filled(12, 8, 100, 100, 100));
  const MetricReport r = run_eval(fx.manifest, fx.dir / "small", SiouConfig{}, 1);
  const Image right = load_image(fx.manifest.records[0].right_path);
  EXPECT_NEAR(r.per_pair[0].rmse, rmse(Image::filled(24, 16, 100, 100, 100), right), 1e-12);
}

TEST(Eval, MissingCandidatesAreListed) {
  const EvalFixture fx = make_eval_fixture("eval_missing", 3);
  fs::remove(fx.dir / "gt" / "p1.png");
  try {
    run_eval(fx.manifest, fx.dir / "gt", SiouConfig{}, 1);
    FAIL() << "expected MissingCandidate";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingCandidate);
    EXPECT_NE(std::string(e.what()).find("p1"), std::string::npos);
  }
}

TEST(Annotations, ParsingRules) {
  const auto set = parse_annotations_csv("pair_id,annotator_id,score\r\na,u1,3\na,u2,10\n\n");
  ASSERT_EQ(set.entries.size(), 2u);
  EXPECT_EQ(set.entries[1].score, 10);
  EXPECT_EQ(code_of([] { parse_annotations_csv("pair,who,score\n"); }), ErrorCode::Parse);
  EXPECT_EQ(code_of([] { parse_annotations_csv("pair_id,annotator_id,score\na,u,11\n"); }), ErrorCode::OutOfRange);
  EXPECT_EQ(code_of([] { parse_annotations_csv("pair_id,annotator_id,score\na,u,2.5\n"); }), ErrorCode::Parse);
  EXPECT_EQ(code_of([] { parse_annotations_csv("pair_id,annotator_id,score\na,u,2\na,u,3\n"); }), ErrorCode::Parse);
}

TEST(Correlation, AgreesWithHumansAndChecksInputs) {
  std::vector<PairScores> rows;
  for (int i = 0; i < 5; ++i) {
    rows.push_back({"p" + std::to_string(i), "indoor", 0.1 * i, 0.1 * i, 0.2, 10.0 - i, 30.0 + i, 0.5});
  }
  const MetricReport report = make_report(SiouConfig{}, rows);
  std::string csv = "pair_id,annotator_id,score\n";
  for (int i = 0; i < 5; ++i) {
    csv += "p" + std::to_string(i) + ",u1," + std::to_string(i + 1) + "\n";
    csv += "p" + std::to_string(i) + ",u2," + std::to_string(i + 2) + "\n";
  }
  const CorrelationResult c = correlate_with_humans(report, parse_annotations_csv(csv));
  EXPECT_EQ(c.pairs, 5u);
  EXPECT_DOUBLE_EQ(c.by_metric.at("siou").spearman, 1.0);
  EXPECT_DOUBLE_EQ(c.by_metric.at("siou").kendall, 1.0);
  EXPECT_DOUBLE_EQ(c.by_metric.at("rmse").spearman, -1.0);
  EXPECT_TRUE(std::isnan(c.by_metric.at("ssim").spearman));
  const auto j = nlohmann::json::parse(correlation_to_json(c));
  EXPECT_TRUE(j.at("metrics").at("ssim").at("kendall").is_null());

  EXPECT_EQ(code_of([&] { correlate_with_humans(report, parse_annotations_csv(csv + "zz,u1,3\nzz,u2,3\n")); }),
            ErrorCode::UnknownPairId);
  EXPECT_EQ(code_of([&] {
              correlate_with_humans(report, parse_annotations_csv("pair_id,annotator_id,score\np0,u1,3\np1,u1,4\n"));
            }),
            ErrorCode::InsufficientAnnotations);
  EXPECT_EQ(code_of([&] {
              correlate_with_humans(report,
                                    parse_annotations_csv("pair_id,annotator_id,score\np0,u1,3\np0,u2,3\np1,u1,3\np1,u2,3\n"));
            }),
            ErrorCode::DegenerateInput);
}
