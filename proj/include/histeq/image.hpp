#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace histeq {

inline constexpr std::size_t kLevels = 256;
inline constexpr int kMaxLevel = 255;

// Raised when a statistic needs spread the image does not have.
class DegenerateImageError : public std::domain_error {
 public:
  DegenerateImageError() : std::domain_error("degenerate: constant image") {}
};

// Round half away from zero. std::round has exactly these semantics.
inline double round_half_away(double x) { return std::round(x); }

// Exact round(num / den) for non-negative integers, ties away from zero.
inline std::uint64_t round_ratio(std::uint64_t num, std::uint64_t den) {
  return (2 * num + den) / (2 * den);
}

/// 8-bit grayscale raster, row-major.
///
/// A default-constructed image is empty (0x0); every algorithm rejects it,
/// but the value itself is allowed so that I/O can report the condition.
class GrayImage {
 public:
  GrayImage() = default;

  GrayImage(std::size_t width, std::size_t height, std::uint8_t fill = 0)
      : width_(width), height_(height), pixels_(width * height, fill) {}

  GrayImage(std::size_t width, std::size_t height,
            std::vector<std::uint8_t> pixels)
      : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (pixels_.size() != width_ * height_) {
      throw std::invalid_argument("pixel count does not match " +
                                  std::to_string(width_) + "x" +
                                  std::to_string(height_));
    }
  }

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return pixels_.size(); }
  bool empty() const { return pixels_.empty(); }

  std::uint8_t operator()(std::size_t x, std::size_t y) const {
    return pixels_[y * width_ + x];
  }
  std::uint8_t& operator()(std::size_t x, std::size_t y) {
    return pixels_[y * width_ + x];
  }

  std::span<const std::uint8_t> pixels() const { return pixels_; }
  std::span<std::uint8_t> pixels() { return pixels_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Exact per-level pixel counts over an alphabet of `Levels` gray levels.
template <std::size_t Levels>
struct BasicHistogram {
  static_assert(Levels >= 3, "need room for two non-empty segments");
  static constexpr std::size_t levels = Levels;

  std::array<std::uint64_t, Levels> counts{};
  std::uint64_t total = 0;

  static BasicHistogram from_counts(std::span<const std::uint64_t> c) {
    if (c.size() != Levels) {
      throw std::invalid_argument("histogram needs " + std::to_string(Levels) +
                                  " bins");
    }
    BasicHistogram h;
    std::copy(c.begin(), c.end(), h.counts.begin());
    h.total = std::accumulate(c.begin(), c.end(), std::uint64_t{0});
    return h;
  }

  std::size_t occupied_bins() const {
    std::size_t n = 0;
    for (auto c : counts) n += c != 0;
    return n;
  }

  friend bool operator==(const BasicHistogram&, const BasicHistogram&) = default;
};

using Histogram = BasicHistogram<kLevels>;

template <std::size_t Levels>
struct BasicPmf {
  std::array<double, Levels> probs{};
};

template <std::size_t Levels>
struct BasicCdf {
  std::array<double, Levels> cum{};
};

using Pmf = BasicPmf<kLevels>;
using Cdf = BasicCdf<kLevels>;

/// Gray-level map; entries are validated when applied.
template <std::size_t Levels>
using BasicLut = std::array<int, Levels>;
using Lut = BasicLut<kLevels>;

inline Histogram histogram_of(const GrayImage& img) {
  if (img.empty()) throw std::invalid_argument("empty image");
  Histogram h;
  for (auto p : img.pixels()) ++h.counts[p];
  h.total = img.size();
  return h;
}

template <std::size_t Levels>
BasicPmf<Levels> pmf_of(const BasicHistogram<Levels>& h) {
  if (h.total == 0) throw std::invalid_argument("empty histogram");
  BasicPmf<Levels> p;
  const double total = static_cast<double>(h.total);
  for (std::size_t v = 0; v < Levels; ++v) {
    p.probs[v] = static_cast<double>(h.counts[v]) / total;
  }
  return p;
}

template <std::size_t Levels>
BasicCdf<Levels> cdf_of(const BasicPmf<Levels>& p) {
  BasicCdf<Levels> c;
  double acc = 0.0;
  for (std::size_t v = 0; v < Levels; ++v) {
    acc += p.probs[v];
    c.cum[v] = acc;
  }
  return c;
}

template <std::size_t Levels>
bool is_monotone(const BasicLut<Levels>& lut) {
  for (std::size_t k = 1; k < Levels; ++k) {
    if (lut[k] < lut[k - 1]) return false;
  }
  return true;
}

inline GrayImage apply_lut(const GrayImage& img, const Lut& lut) {
  for (int v : lut) {
    if (v < 0 || v > kMaxLevel) throw std::invalid_argument("invalid LUT");
  }
  std::array<std::uint8_t, kLevels> table{};
  for (std::size_t k = 0; k < kLevels; ++k) {
    table[k] = static_cast<std::uint8_t>(lut[k]);
  }
  GrayImage out(img.width(), img.height());
  auto src = img.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = table[src[i]];
  return out;
}

inline std::uint8_t max_pixel(const GrayImage& img) {
  std::uint8_t m = 0;
  for (auto p : img.pixels()) m = std::max(m, p);
  return m;
}

}  // namespace histeq
