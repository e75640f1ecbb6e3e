#include <gtest/gtest.h>

#include <limits>
#include <random>

#include "histeq/clahe.hpp"
#include "oracles.hpp"

using namespace histeq;

namespace {
constexpr double kNoClip = std::numeric_limits<double>::infinity();
}

TEST(ClipHistogram, InfiniteLimitIsIdentity) {
  std::mt19937_64 rng(1);
  const auto h = gen::random_histogram<kLevels>(rng, 500);
  EXPECT_EQ(clip_histogram(h, kNoClip), h);
}

TEST(ClipHistogram, UniformHistogramUntouched) {
  std::array<std::uint64_t, kLevels> c;
  c.fill(7);
  const auto h = Histogram::from_counts(c);
  EXPECT_EQ(clip_histogram(h, 1.01), h);
  EXPECT_EQ(clip_histogram(h, 2.0), h);
}

TEST(ClipHistogram, HandSimulatedPeak) {
  std::array<std::uint64_t, kLevels> c{};
  c[0] = 1000;
  for (int v = 1; v <= 24; ++v) c[v] = 10;
  const auto out = clip_histogram(Histogram::from_counts(c), 2.0);
  // ceiling ceil(2 * 1240 / 256) = 10; excess 990 = 3 * 256 + 222
  EXPECT_EQ(out.total, 1240u);
  std::uint64_t sum = 0;
  for (auto v : out.counts) sum += v;
  EXPECT_EQ(sum, 1240u);
  EXPECT_EQ(out.counts[0], 10u + 3u + 1u);
  EXPECT_EQ(out.counts[24], 10u + 3u + 1u);
  EXPECT_EQ(out.counts[221], 0u + 3u + 1u);
  EXPECT_EQ(out.counts[222], 3u);
  EXPECT_EQ(out.counts[255], 3u);
  EXPECT_LE(*std::max_element(out.counts.begin(), out.counts.end()), 10u + 4u);
}

TEST(ClipHistogram, RejectsLimitAtOrBelowOne) {
  std::mt19937_64 rng(2);
  const auto h = gen::random_histogram<kLevels>(rng, 5);
  try {
    clip_histogram(h, 1.0);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "clip limit must exceed uniform height");
  }
}

TEST(ClipHistogram, ConservesTotal) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lim(1.001, 6.0);
  for (int i = 0; i < 500; ++i) {
    const auto h = gen::random_histogram<kLevels>(rng, 2000);
    const auto out = clip_histogram(h, lim(rng));
    std::uint64_t sum = 0;
    for (auto v : out.counts) sum += v;
    ASSERT_EQ(sum, h.total);
    ASSERT_EQ(out.total, h.total);
  }
}

TEST(EnhanceClahe, SingleTileNoClipIsGlobalHe) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) {
    const auto img = gen::random_nonconstant(rng);
    ASSERT_EQ(enhance_clahe(img, {1, 1, kNoClip}), equalize(img));
  }
}

TEST(EnhanceClahe, ConstantImageStaysFlat) {
  const GrayImage flat(40, 30, 90);
  for (auto params : {ClaheParams{}, ClaheParams{3, 2, 4.0}, ClaheParams{1, 1, kNoClip}}) {
    const auto out = enhance_clahe(flat, params);
    const auto v = out.pixels()[0];
    for (auto p : out.pixels()) ASSERT_EQ(p, v);
  }
  EXPECT_EQ(enhance_clahe(flat, {1, 1, kNoClip}), GrayImage(40, 30, 255));
}

TEST(EnhanceClahe, TileTooSmall) {
  try {
    enhance_clahe(GrayImage(10, 10, 1), {8, 8, 2.0});
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "tile too small");
  }
  EXPECT_NO_THROW(enhance_clahe(GrayImage(10, 10, 1), {5, 5, 2.0}));
}

TEST(EnhanceClahe, QuadrantImageMatchesBilinearOracle) {
  GrayImage img(20, 16);
  for (std::size_t y = 0; y < 16; ++y) {
    for (std::size_t x = 0; x < 20; ++x) {
      img(x, y) = std::uint8_t((x < 10 ? 40 : 90) + (y < 8 ? 0 : 60));
    }
  }
  // a second level per quadrant so tile LUTs differ at the shared values
  img(0, 0) = 90;
  img(19, 15) = 40;
  const ClaheParams params{2, 2, kNoClip};
  const auto out = enhance_clahe(img, params);
  const auto luts = clahe_tile_luts(img, params);
  const auto g = oracle::grid(20, 16, 2, 2);
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 20; ++x) {
      ASSERT_EQ(out(x, y), oracle::clahe_pixel(luts, g, x, y, img(x, y)))
          << x << "," << y;
    }
  }
  // interior pixels of the top row blend the two upper tiles strictly
  // between their outputs whenever those differ
  const int v = img(9, 4);
  const int a = luts[0][v], b = luts[1][v];
  if (a != b) {
    const int lo = std::min(a, b), hi = std::max(a, b);
    EXPECT_GT(out(10, 4), lo);
    EXPECT_LT(out(9, 4), hi);
  }
}

TEST(EnhanceClahe, RandomImagesMatchOracle) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> dim(8, 60), tiles(1, 4);
  std::uniform_real_distribution<double> clip(1.5, 5.0);
  for (int i = 0; i < 40; ++i) {
    const auto img = gen::random_image(rng, dim(rng), dim(rng), 20, 120);
    const ClaheParams params{tiles(rng), tiles(rng), clip(rng)};
    const auto out = enhance_clahe(img, params);
    const auto luts = clahe_tile_luts(img, params);
    for (const auto& lut : luts) ASSERT_TRUE(is_monotone(lut));
    const auto g = oracle::grid(img.width(), img.height(), params.tiles_x, params.tiles_y);
    for (std::size_t y = 0; y < img.height(); ++y) {
      for (std::size_t x = 0; x < img.width(); ++x) {
        ASSERT_EQ(out(x, y), oracle::clahe_pixel(luts, g, int(x), int(y), img(x, y)));
      }
    }
  }
}

TEST(EnhanceClahe, HorizontalBlendingIsContinuous) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 30; ++i) {
    const auto img = gen::random_image(rng, 64, 16, 10, 14);
    const ClaheParams params{2, 1, 3.0};
    const auto out = enhance_clahe(img, params);
    const auto luts = clahe_tile_luts(img, params);
    for (std::size_t y = 0; y < img.height(); ++y) {
      for (std::size_t x = 0; x + 1 < img.width(); ++x) {
        if (img(x, y) != img(x + 1, y)) continue;
        const int v = img(x, y);
        const int spread = std::abs(luts[0][v] - luts[1][v]);
        ASSERT_LE(std::abs(int(out(x + 1, y)) - int(out(x, y))), spread);
      }
    }
  }
}
