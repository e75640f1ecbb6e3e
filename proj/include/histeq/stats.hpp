#pragma once

#include <cmath>
#include <limits>
#include <optional>

#include "histeq/duo_lut.hpp"
#include "histeq/image.hpp"
#include "histeq/params.hpp"

namespace histeq {

/// Mean and population sigma in gray levels, plus the sixth standardized
/// central moment ("hyper-kurtosis"), which is >= 1 for any non-constant
/// distribution and 15 for a Gaussian.
struct MomentStats {
  double mean = 0.0;
  double sigma = 0.0;
  double beta = 0.0;
};

enum class SplitBranch { Sqrt, PowerLaw };

inline std::string_view to_string(SplitBranch b) {
  return b == SplitBranch::Sqrt ? "sqrt" : "power-law";
}

inline SplitBranch parse_split_branch(std::string_view s) {
  if (s == "sqrt") return SplitBranch::Sqrt;
  if (s == "power-law") return SplitBranch::PowerLaw;
  throw std::invalid_argument("unknown split branch '" + std::string(s) + "'");
}

struct SplitDecision {
  double beta = 0.0;
  SplitBranch branch = SplitBranch::Sqrt;
  std::optional<double> gamma_used;
  double mm_raw = 0.0;  // gray levels, before rounding and clamping
  int split_level = 1;

  friend bool operator==(const SplitDecision&, const SplitDecision&) = default;
};

inline constexpr int kGammaGridSteps = 20;  // 0.05, 0.10, ..., 1.00

template <std::size_t Levels>
MomentStats moment_stats(const BasicHistogram<Levels>& h) {
  if (h.total == 0) throw std::invalid_argument("empty histogram");
  if (h.occupied_bins() < 2) throw DegenerateImageError();
  const auto pmf = pmf_of(h);

  double mean = 0.0;
  for (std::size_t v = 0; v < Levels; ++v) mean += pmf.probs[v] * double(v);

  double m2 = 0.0;
  double m6 = 0.0;
  for (std::size_t v = 0; v < Levels; ++v) {
    const double d = double(v) - mean;
    const double d2 = d * d;
    m2 += pmf.probs[v] * d2;
    m6 += pmf.probs[v] * d2 * d2 * d2;
  }
  return {mean, std::sqrt(m2), m6 / (m2 * m2 * m2)};
}

inline MomentStats moment_stats(const GrayImage& img) {
  return moment_stats(histogram_of(img));
}

/// Raw modified mean in gray levels for a fixed gamma.
///
/// beta <  tau: sqrt(m + beta)
/// beta >= tau: (L-1) * (m / (L-1))^gamma
template <std::size_t Levels>
SplitDecision modified_mean(const MomentStats& s, double tau, double gamma,
                            MmScale scale) {
  constexpr double top = double(Levels - 1);
  SplitDecision d;
  d.beta = s.beta;
  if (s.beta < tau) {
    d.branch = SplitBranch::Sqrt;
    d.mm_raw = scale == MmScale::Native
                   ? std::sqrt(s.mean + s.beta)
                   : top * std::sqrt(s.mean / top + s.beta);
  } else {
    d.branch = SplitBranch::PowerLaw;
    d.gamma_used = gamma;
    d.mm_raw = top * std::pow(s.mean / top, gamma);
  }
  const double rounded = round_half_away(d.mm_raw);
  d.split_level = static_cast<int>(std::clamp(rounded, 1.0, top - 1.0));
  return d;
}

template <std::size_t Levels>
BasicHistogram<Levels> remap_histogram(const BasicHistogram<Levels>& h,
                                       const BasicLut<Levels>& lut) {
  BasicHistogram<Levels> out;
  for (std::size_t v = 0; v < Levels; ++v) {
    out.counts[static_cast<std::size_t>(lut[v])] += h.counts[v];
  }
  out.total = h.total;
  return out;
}

/// Chooses the duo-histogram split level.
///
/// With a fixed gamma this is modified_mean(). In search mode every gamma on
/// the 0.05 grid is tried and the one whose equalized output has the smallest
/// AMMBE against the input wins; ties go to the larger gamma. The search only
/// matters on the power-law branch.
template <std::size_t Levels>
SplitDecision select_split(const BasicHistogram<Levels>& h,
                           const EnhanceParams& params) {
  const auto stats = moment_stats(h);
  if (params.gamma) {
    return modified_mean<Levels>(stats, params.tau, *params.gamma,
                                 params.mm_scale);
  }

  auto best = modified_mean<Levels>(stats, params.tau, 1.0, params.mm_scale);
  if (best.branch == SplitBranch::Sqrt) {
    best.gamma_used.reset();
    return best;
  }

  constexpr double top = double(Levels - 1);
  double best_err = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= kGammaGridSteps; ++i) {
    const double gamma = double(i) / double(kGammaGridSteps);
    const auto cand =
        modified_mean<Levels>(stats, params.tau, gamma, params.mm_scale);
    const auto out = remap_histogram(h, duo_lut(h, cand.split_level).lut);
    if (out.occupied_bins() < 2) continue;
    const auto out_mm = modified_mean<Levels>(moment_stats(out), params.tau,
                                              gamma, params.mm_scale);
    const double err = std::abs(cand.mm_raw - out_mm.mm_raw) / top;
    if (err <= best_err) {
      best_err = err;
      best = cand;
    }
  }
  return best;
}

inline SplitDecision select_split(const GrayImage& img,
                                  const EnhanceParams& params) {
  return select_split(histogram_of(img), params);
}

}  // namespace histeq
