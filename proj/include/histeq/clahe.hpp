#pragma once

#include <cmath>
#include <vector>

#include "histeq/global_he.hpp"
#include "histeq/image.hpp"
#include "histeq/params.hpp"

namespace histeq {

/// Cuts every bin above ceil(clip_limit * total / L) down to that ceiling and
/// spreads the excess evenly over all L bins in one pass. The integer
/// remainder goes to the lowest bins, one unit each, so the total is exact.
template <std::size_t Levels>
BasicHistogram<Levels> clip_histogram(const BasicHistogram<Levels>& h,
                                      double clip_limit) {
  if (h.total == 0) throw std::invalid_argument("empty histogram");
  if (!(clip_limit > 1.0)) {
    throw std::invalid_argument("clip limit must exceed uniform height");
  }
  if (std::isinf(clip_limit)) return h;

  const auto ceiling = static_cast<std::uint64_t>(
      std::ceil(clip_limit * double(h.total) / double(Levels)));
  BasicHistogram<Levels> out = h;
  std::uint64_t excess = 0;
  for (auto& c : out.counts) {
    if (c > ceiling) {
      excess += c - ceiling;
      c = ceiling;
    }
  }
  const std::uint64_t each = excess / Levels;
  const std::uint64_t residual = excess % Levels;
  for (std::size_t v = 0; v < Levels; ++v) {
    out.counts[v] += each + (v < residual ? 1 : 0);
  }
  return out;
}

namespace detail {

// Contiguous partition of `extent` pixels into `n` tiles; the last tile takes
// the remainder.
struct TileAxis {
  std::vector<std::size_t> begin;  // n + 1 boundaries
  std::vector<double> center;

  TileAxis(std::size_t extent, std::size_t n) : begin(n + 1), center(n) {
    const std::size_t step = extent / n;
    for (std::size_t i = 0; i < n; ++i) begin[i] = i * step;
    begin[n] = extent;
    for (std::size_t i = 0; i < n; ++i) {
      center[i] = 0.5 * double(begin[i] + begin[i + 1] - 1);
    }
  }

  std::size_t min_extent() const {
    std::size_t m = begin[1] - begin[0];
    for (std::size_t i = 1; i + 1 < begin.size(); ++i) {
      m = std::min(m, begin[i + 1] - begin[i]);
    }
    return m;
  }

  // Neighbouring tile pair and weight of the second one for coordinate x.
  // Outside the first/last centre both indices coincide.
  struct Blend {
    std::size_t lo;
    std::size_t hi;
    double w;
  };

  Blend blend(std::size_t x) const {
    const double p = double(x);
    const std::size_t n = center.size();
    if (p <= center.front()) return {0, 0, 0.0};
    if (p >= center.back()) return {n - 1, n - 1, 0.0};
    std::size_t i = 0;
    while (center[i + 1] <= p) ++i;
    return {i, i + 1, (p - center[i]) / (center[i + 1] - center[i])};
  }
};

}  // namespace detail

/// Per-tile level maps for the grid, row-major (tile_y * tiles_x + tile_x).
inline std::vector<Lut> clahe_tile_luts(const GrayImage& img,
                                        const ClaheParams& params) {
  validate(params);
  if (img.empty()) throw std::invalid_argument("empty image");
  const detail::TileAxis ax(img.width(), std::size_t(params.tiles_x));
  const detail::TileAxis ay(img.height(), std::size_t(params.tiles_y));
  if (img.width() < std::size_t(params.tiles_x) ||
      img.height() < std::size_t(params.tiles_y) || ax.min_extent() < 2 ||
      ay.min_extent() < 2) {
    throw std::invalid_argument("tile too small");
  }

  std::vector<Lut> luts;
  luts.reserve(std::size_t(params.tiles_x * params.tiles_y));
  for (int ty = 0; ty < params.tiles_y; ++ty) {
    for (int tx = 0; tx < params.tiles_x; ++tx) {
      Histogram h;
      for (std::size_t y = ay.begin[ty]; y < ay.begin[ty + 1]; ++y) {
        for (std::size_t x = ax.begin[tx]; x < ax.begin[tx + 1]; ++x) {
          ++h.counts[img(x, y)];
        }
      }
      h.total = (ay.begin[ty + 1] - ay.begin[ty]) *
                (ax.begin[tx + 1] - ax.begin[tx]);
      // a single-level tile has no contrast to limit; clipping it would only
      // smear mass by an amount that depends on the tile size
      luts.push_back(h.occupied_bins() < 2
                         ? he_lut(h)
                         : he_lut(clip_histogram(h, params.clip_limit)));
    }
  }
  return luts;
}

/// Contrast limited adaptive HE: clipped per-tile HE maps blended bilinearly
/// between the four nearest tile centres (linear along the borders, nearest
/// in the corners).
inline GrayImage enhance_clahe(const GrayImage& img,
                               const ClaheParams& params) {
  const auto luts = clahe_tile_luts(img, params);
  const detail::TileAxis ax(img.width(), std::size_t(params.tiles_x));
  const detail::TileAxis ay(img.height(), std::size_t(params.tiles_y));
  const std::size_t nx = std::size_t(params.tiles_x);

  std::vector<detail::TileAxis::Blend> col(img.width());
  for (std::size_t x = 0; x < img.width(); ++x) col[x] = ax.blend(x);

  GrayImage out(img.width(), img.height());
  for (std::size_t y = 0; y < img.height(); ++y) {
    const auto by = ay.blend(y);
    for (std::size_t x = 0; x < img.width(); ++x) {
      const auto& bx = col[x];
      const std::size_t v = img(x, y);
      const double top = (1.0 - bx.w) * luts[by.lo * nx + bx.lo][v] +
                         bx.w * luts[by.lo * nx + bx.hi][v];
      const double bottom = (1.0 - bx.w) * luts[by.hi * nx + bx.lo][v] +
                            bx.w * luts[by.hi * nx + bx.hi][v];
      const double blended = (1.0 - by.w) * top + by.w * bottom;
      out(x, y) = static_cast<std::uint8_t>(
          std::clamp(round_half_away(blended), 0.0, double(kMaxLevel)));
    }
  }
  return out;
}

}  // namespace histeq
