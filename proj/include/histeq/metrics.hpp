#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "histeq/image.hpp"
#include "histeq/params.hpp"
#include "histeq/stats.hpp"

namespace histeq {

namespace detail {
inline void require_same_shape(const GrayImage& x, const GrayImage& y) {
  if (x.width() != y.width() || x.height() != y.height()) {
    throw std::invalid_argument(
        "dimension mismatch: " + std::to_string(x.width()) + "x" +
        std::to_string(x.height()) + " vs " + std::to_string(y.width()) + "x" +
        std::to_string(y.height()));
  }
  if (x.empty()) throw std::invalid_argument("empty image");
}
}  // namespace detail

inline double rmse(const GrayImage& x, const GrayImage& y) {
  detail::require_same_shape(x, y);
  auto a = x.pixels();
  auto b = y.pixels();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = double(a[i]) - double(b[i]);
    sum += d * d;
  }
  return std::sqrt(sum / double(a.size()));
}

/// PSNR in dB; +infinity when the images are identical.
///
/// MaxOfOutput uses max(y) as the peak, Fixed255 the conventional 255.
inline double psnr(const GrayImage& x, const GrayImage& y,
                   PeakMode mode = PeakMode::MaxOfOutput) {
  const double err = rmse(x, y);
  double peak = double(kMaxLevel);
  if (mode == PeakMode::MaxOfOutput) {
    peak = double(max_pixel(y));
    if (peak == 0.0) throw std::invalid_argument("zero peak");
  }
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(peak / err);
}

/// Absolute difference of the two images' modified means on the [0,1] scale.
/// Each image derives its own split decision under the same policy.
inline double ammbe(const GrayImage& x, const GrayImage& y,
                    const EnhanceParams& params) {
  const auto mx = select_split(x, params).mm_raw;
  const auto my = select_split(y, params).mm_raw;
  return std::abs(mx - my) / double(kMaxLevel);
}

struct MetricsReport {
  double psnr_db = 0.0;  // +inf when rmse == 0
  double rmse = 0.0;
  double ammbe = 0.0;    // NaN when a modified mean is undefined
  std::optional<SplitDecision> input_split;
  std::optional<SplitDecision> output_split;

  bool psnr_infinite() const { return std::isinf(psnr_db); }
};

/// All metrics for one (input, output) pair. A constant image on either side
/// leaves ammbe as NaN instead of throwing so batch runs can carry on.
inline MetricsReport evaluate(const GrayImage& input, const GrayImage& output,
                              const EnhanceParams& params) {
  MetricsReport r;
  r.rmse = rmse(input, output);
  r.psnr_db = psnr(input, output, params.peak_mode);
  try {
    r.input_split = select_split(input, params);
    r.output_split = select_split(output, params);
    r.ammbe = std::abs(r.input_split->mm_raw - r.output_split->mm_raw) /
              double(kMaxLevel);
  } catch (const DegenerateImageError&) {
    r.ammbe = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population
};

struct MethodSummary {
  MeanStd psnr;
  MeanStd ammbe;
  std::size_t count = 0;
  std::size_t psnr_infinite_excluded = 0;
  std::size_t ammbe_undefined_excluded = 0;
};

namespace detail {
template <typename Pick>
MeanStd mean_std(std::span<const MetricsReport> rs, Pick pick) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : rs) {
    const double v = pick(r);
    if (!std::isfinite(v)) continue;
    sum += v;
    ++n;
  }
  if (n == 0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan};
  }
  const double mean = sum / double(n);
  double ss = 0.0;
  for (const auto& r : rs) {
    const double v = pick(r);
    if (!std::isfinite(v)) continue;
    ss += (v - mean) * (v - mean);
  }
  return {mean, std::sqrt(ss / double(n))};
}
}  // namespace detail

/// Mean and population standard deviation over one method's reports.
/// Infinite PSNRs and undefined AMMBEs are left out and counted.
inline MethodSummary summarize(std::span<const MetricsReport> reports) {
  if (reports.empty()) throw std::invalid_argument("empty corpus");
  MethodSummary s;
  s.count = reports.size();
  for (const auto& r : reports) {
    s.psnr_infinite_excluded += r.psnr_infinite();
    s.ammbe_undefined_excluded += std::isnan(r.ammbe);
  }
  s.psnr = detail::mean_std(reports, [](const auto& r) { return r.psnr_db; });
  s.ammbe = detail::mean_std(reports, [](const auto& r) { return r.ammbe; });
  return s;
}

using CorpusSummary = std::map<Method, MethodSummary>;

}  // namespace histeq
