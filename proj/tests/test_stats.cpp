#include "sprayeval/stats.hpp"

#include <cmath>
#include <gtest/gtest.h>
#include <string>
#include <vector>

#include "sprayeval/errors.hpp"
#include "sprayeval/random.hpp"
#include "test_util.hpp"

namespace {

using sprayeval::BoundingBox;
using sprayeval::Dataset;
using sprayeval::DatasetStats;
using sprayeval::Rng;
using testutil::box;
using testutil::image;

std::vector<BoundingBox> random_integer_boxes(Rng& rng, int w, int h, int n) {
  std::vector<BoundingBox> boxes;
  for (int i = 0; i < n; ++i) {
    const int x1 = static_cast<int>(rng.uniform_int(0, w - 2));
    const int y1 = static_cast<int>(rng.uniform_int(0, h - 2));
    const int x2 = static_cast<int>(rng.uniform_int(x1 + 1, w));
    const int y2 = static_cast<int>(rng.uniform_int(y1 + 1, h));
    boxes.push_back(box(x1, y1, x2, y2, static_cast<int>(rng.uniform_int(0, 1))));
  }
  return boxes;
}

// --- oracles for the two geometric kernels ------------------------------------

TEST(RectUnionArea, MatchesPixelCountOracle) {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int w = 30, h = 30;
    const auto boxes =
        random_integer_boxes(rng, w, h, static_cast<int>(rng.uniform_int(0, 7)));
    EXPECT_DOUBLE_EQ(sprayeval::detail::rect_union_area(boxes),
                     static_cast<double>(testutil::pixel_union_area(boxes, w, h)))
        << "trial " << trial;
  }
}

TEST(OccludedArea, MatchesPixelCountOracle) {
  Rng rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    const int w = 30, h = 30;
    const auto boxes =
        random_integer_boxes(rng, w, h, static_cast<int>(rng.uniform_int(1, 6)));
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      // Pixel oracle: pixels inside boxes[i] that are also inside some other box.
      long long covered = 0;
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
          if (!testutil::pixel_in_box(x, y, boxes[i])) continue;
          for (std::size_t k = 0; k < boxes.size(); ++k)
            if (k != i && testutil::pixel_in_box(x, y, boxes[k])) {
              ++covered;
              break;
            }
        }
      EXPECT_DOUBLE_EQ(sprayeval::detail::occluded_area(boxes[i], boxes, i),
                       static_cast<double>(covered));
    }
  }
}

// --- hand-computed fixture ------------------------------------------------------

TEST(DatasetStats, HandComputedTwoImageFixture) {
  Dataset d;
  // Image a: two 10x10 class-1 boxes overlapping in a 5x10 strip.
  d.images.push_back(image("a", 100, 100,
                           {box(0, 0, 10, 10, 1), box(5, 0, 15, 10, 1)}, {}));
  // Image b: one isolated 20x10 class-0 box.
  d.images.push_back(image("b", 100, 100, {box(10, 10, 30, 20, 0)}, {}));
  sprayeval::finalize_dataset(d);

  const DatasetStats s = sprayeval::dataset_stats(d);
  EXPECT_EQ(s.image_count, 2);
  EXPECT_EQ(s.item_count, 3);
  EXPECT_DOUBLE_EQ(s.avg_items_per_image, 1.5);
  // Occlusion: each overlapping box has 50/100 covered; the isolated box 0.
  EXPECT_DOUBLE_EQ(s.avg_box_occluded_fraction, (0.5 + 0.5 + 0.0) / 3.0);
  // Occupied: image a union = 150/10000, image b = 200/10000.
  EXPECT_DOUBLE_EQ(s.avg_image_area_occupied, (0.015 + 0.02) / 2.0);
  EXPECT_DOUBLE_EQ(s.avg_box_area_fraction, (0.01 + 0.01 + 0.02) / 3.0);

  ASSERT_EQ(s.per_class.size(), 2u);
  EXPECT_EQ(s.per_class.at(1).count, 2);
  EXPECT_DOUBLE_EQ(s.per_class.at(1).avg_per_image, 1.0);
  EXPECT_DOUBLE_EQ(s.per_class.at(1).avg_occluded_fraction, 0.5);
  EXPECT_EQ(s.per_class.at(0).count, 1);
  EXPECT_DOUBLE_EQ(s.per_class.at(0).avg_occluded_fraction, 0.0);
  EXPECT_DOUBLE_EQ(s.per_class.at(0).avg_area_fraction, 0.02);
}

TEST(DatasetStats, EmptyDatasetIsRejected) {
  Dataset d;
  EXPECT_THROW(sprayeval::dataset_stats(d), sprayeval::ValidationError);
}

TEST(DatasetStats, ImagesWithoutBoxesContributeZeroes) {
  Dataset d;
  d.images.push_back(image("a", 100, 100, {}, {}));
  d.images.push_back(image("b", 100, 100, {box(0, 0, 10, 10, 1)}, {}));
  sprayeval::finalize_dataset(d);
  const DatasetStats s = sprayeval::dataset_stats(d);
  EXPECT_EQ(s.item_count, 1);
  EXPECT_DOUBLE_EQ(s.avg_items_per_image, 0.5);
  EXPECT_DOUBLE_EQ(s.avg_image_area_occupied, 0.005);
}

TEST(DatasetStats, ResultIndependentOfImageInsertionOrder) {
  Rng rng(23);
  Dataset d;
  for (int i = 0; i < 12; ++i)
    d.images.push_back(image("img-" + std::to_string(i), 64, 64,
                             random_integer_boxes(rng, 64, 64, 4), {}));
  sprayeval::finalize_dataset(d);

  Dataset reversed = d;
  std::reverse(reversed.images.begin(), reversed.images.end());

  const DatasetStats a = sprayeval::dataset_stats(d);
  const DatasetStats b = sprayeval::dataset_stats(reversed);
  EXPECT_EQ(a.avg_box_occluded_fraction, b.avg_box_occluded_fraction);
  EXPECT_EQ(a.avg_image_area_occupied, b.avg_image_area_occupied);
  EXPECT_EQ(a.avg_box_area_fraction, b.avg_box_area_fraction);
}

TEST(DatasetStats, DuplicatingEveryImageKeepsAverages) {
  Rng rng(24);
  Dataset d;
  for (int i = 0; i < 10; ++i)
    d.images.push_back(image("img-" + std::to_string(i), 64, 64,
                             random_integer_boxes(rng, 64, 64, 3), {}));
  sprayeval::finalize_dataset(d);

  Dataset doubled = d;
  for (int i = 0; i < 10; ++i) {
    sprayeval::ImageRecord copy = d.images[static_cast<std::size_t>(i)];
    copy.image_id = "copy-" + std::to_string(i);
    doubled.images.push_back(copy);
  }
  sprayeval::finalize_dataset(doubled);

  const DatasetStats a = sprayeval::dataset_stats(d);
  const DatasetStats b = sprayeval::dataset_stats(doubled);
  EXPECT_EQ(b.image_count, 2 * a.image_count);
  EXPECT_EQ(b.item_count, 2 * a.item_count);
  EXPECT_NEAR(b.avg_items_per_image, a.avg_items_per_image, 1e-12);
  EXPECT_NEAR(b.avg_box_occluded_fraction, a.avg_box_occluded_fraction, 1e-12);
  EXPECT_NEAR(b.avg_image_area_occupied, a.avg_image_area_occupied, 1e-12);
  EXPECT_NEAR(b.avg_box_area_fraction, a.avg_box_area_fraction, 1e-12);
}

// The published per-image annotation density for the full field dataset:
// 39246 items over 4402 pictures. A fixture with those counts must reproduce
// the quotient exactly.
TEST(DatasetStats, ReproducesPublishedAnnotationDensity) {
  Dataset d;
  auto add_images = [&](int n, int boxes_per_image, const std::string& prefix) {
    for (int i = 0; i < n; ++i) {
      std::vector<BoundingBox> gt;
      for (int k = 0; k < boxes_per_image; ++k)
        gt.push_back(box(4 * k, 4, 4 * k + 3, 7, k % 2));
      d.images.push_back(image(prefix + std::to_string(i), 640, 480, gt, {}));
    }
  };
  add_images(4030, 9, "dense-");
  add_images(372, 8, "sparse-");
  sprayeval::finalize_dataset(d);

  const DatasetStats s = sprayeval::dataset_stats(d);
  EXPECT_EQ(s.image_count, 4402);
  EXPECT_EQ(s.item_count, 39246);
  EXPECT_EQ(s.avg_items_per_image, 39246.0 / 4402.0);
  EXPECT_NEAR(s.avg_items_per_image, 8.915, 0.002);
}

}  // namespace
