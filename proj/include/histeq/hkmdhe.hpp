#pragma once

#include "histeq/duo_lut.hpp"
#include "histeq/stats.hpp"

namespace histeq {

struct HkmdheResult {
  GrayImage image;
  std::optional<SplitDecision> split;  // empty only for a pass-through
  bool passthrough = false;
};

/// Hyper-kurtosis modified duo-histogram equalization.
///
/// Picks the split level from the image moments, equalizes the two
/// sub-histograms into [0, S] and [S, 255] and applies the combined map.
/// A constant image throws DegenerateImageError unless the params ask for
/// pass-through, in which case the input comes back unchanged and flagged.
inline HkmdheResult enhance_hkmdhe(const GrayImage& img,
                                   const EnhanceParams& params) {
  const auto hist = histogram_of(img);
  if (hist.occupied_bins() < 2) {
    if (params.on_constant == OnConstant::Passthrough) {
      return {img, std::nullopt, true};
    }
    throw DegenerateImageError();
  }
  const auto split = select_split(hist, params);
  const auto duo = duo_lut(hist, split.split_level);
  return {apply_lut(img, duo.lut), split, false};
}

}  // namespace histeq
