// Byte-level regression tests against the committed golden artifacts in
// tests/data/golden. The fixture datasets are first re-verified against the
// raster oracle, so the blessed reports rest on independently checked
// geometry, then every derived artifact must match the committed bytes
// exactly.

#include <filesystem>
#include <gtest/gtest.h>
#include <string>
#include <vector>

#include "sprayeval/digest.hpp"
#include "sprayeval/io.hpp"
#include "sprayeval/report.hpp"
#include "sprayeval/spray_model.hpp"
#include "sprayeval/synthetic.hpp"
#include "test_util.hpp"

namespace {

using sprayeval::Dataset;
using sprayeval::EvalConfig;
using sprayeval::NozzleConfig;
using sprayeval::Provenance;

const std::filesystem::path kGoldenDir =
    std::filesystem::path(SPRAYEVAL_TEST_DATA_DIR) / "golden";

Dataset load_golden(const std::string& name) {
  return sprayeval::load_dataset(kGoldenDir / name,
                                 sprayeval::DatasetFormat::canonical_json);
}

TEST(Golden, FixtureDatasetsPassTheRasterOracle) {
  for (const char* name : {"dataset_a.json", "dataset_b.json"}) {
    const Dataset d = load_golden(name);
    ASSERT_EQ(d.images.size(), 10u);
    for (const int n : {1, 2, 3, 4, 8}) {
      for (const double margin : {0.0, 5.0, 10.0}) {
        NozzleConfig cfg;
        cfg.nozzle_count = n;
        cfg.margin = margin;
        for (const auto& img : d.images) {
          const auto raster = sprayeval::raster_oracle(img, cfg);
          const auto plan = sprayeval::build_spray_plan(img, cfg);
          ASSERT_EQ(plan.sprayed_area, raster.sprayed_area)
              << name << " " << img.image_id << " n=" << n << " m=" << margin;
          std::size_t w = 0;
          for (const auto& gt : img.ground_truth) {
            if (gt.class_id != sprayeval::kWeedClass) continue;
            ASSERT_EQ(sprayeval::is_sprayed(gt, plan), raster.weed_sprayed[w])
                << name << " " << img.image_id << " weed " << w;
            ++w;
          }
        }
      }
    }
  }
}

std::string rebuild_report_json(const std::string& dataset_name) {
  const std::filesystem::path path = kGoldenDir / dataset_name;
  const Dataset d =
      sprayeval::load_dataset(path, sprayeval::DatasetFormat::canonical_json);
  Provenance prov;
  prov.input_digests[dataset_name] =
      "sha256:" + sprayeval::sha256_hex(testutil::slurp(path));
  const auto report = sprayeval::build_report(d, EvalConfig{}, {1, 2, 3, 4},
                                              0.0, sprayeval::kWeedClass, prov);
  return sprayeval::report_to_json(report).dump(2) + "\n";
}

std::string rebuild_report_csv(const std::string& dataset_name) {
  const Dataset d = sprayeval::load_dataset(
      kGoldenDir / dataset_name, sprayeval::DatasetFormat::canonical_json);
  const auto report = sprayeval::build_report(
      d, EvalConfig{}, {1, 2, 3, 4}, 0.0, sprayeval::kWeedClass, Provenance{});
  return sprayeval::report_to_csv(report);
}

TEST(Golden, ReportJsonMatchesCommittedBytes) {
  EXPECT_EQ(rebuild_report_json("dataset_a.json"),
            testutil::slurp(kGoldenDir / "report_a.json"));
  EXPECT_EQ(rebuild_report_json("dataset_b.json"),
            testutil::slurp(kGoldenDir / "report_b.json"));
}

TEST(Golden, ReportCsvMatchesCommittedBytes) {
  EXPECT_EQ(rebuild_report_csv("dataset_a.json"),
            testutil::slurp(kGoldenDir / "report_a.csv"));
  EXPECT_EQ(rebuild_report_csv("dataset_b.json"),
            testutil::slurp(kGoldenDir / "report_b.csv"));
}

TEST(Golden, PlotSeriesMatchCommittedBytes) {
  std::vector<sprayeval::PlotSource> sources;
  for (const char* stem : {"report_a", "report_b"}) {
    const auto j = nlohmann::json::parse(
        testutil::slurp(kGoldenDir / (std::string(stem) + ".json")));
    sources.push_back(sprayeval::plot_source_from_json(j, stem));
  }
  EXPECT_EQ(sprayeval::wcr_by_nozzles_csv(sources),
            testutil::slurp(kGoldenDir / "plots/wcr_by_nozzles.csv"));
  EXPECT_EQ(sprayeval::area_by_nozzles_csv(sources),
            testutil::slurp(kGoldenDir / "plots/area_by_nozzles.csv"));
  EXPECT_EQ(sprayeval::map_vs_wcr_csv(sources),
            testutil::slurp(kGoldenDir / "plots/map_vs_wcr.csv"));
  EXPECT_EQ(sprayeval::map_vs_area_csv(sources),
            testutil::slurp(kGoldenDir / "plots/map_vs_area.csv"));
}

// The committed mAP and coverage numbers themselves, pinned as values so a
// regenerated golden file cannot silently drift.
TEST(Golden, HeadlineNumbersArePinned) {
  const auto j =
      nlohmann::json::parse(testutil::slurp(kGoldenDir / "report_a.json"));
  EXPECT_DOUBLE_EQ(j.at("map_table").at("overall").get<double>(), 0.525044);
  EXPECT_DOUBLE_EQ(
      j.at("spray_table").at(0).at("weed_coverage_rate").get<double>(),
      41.9355);
  EXPECT_DOUBLE_EQ(j.at("spray_table").at(3).at("area_sprayed").get<double>(),
                   8.32031);
}

}  // namespace
