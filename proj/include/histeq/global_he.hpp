#pragma once

#include "histeq/image.hpp"

namespace histeq {

/// Classical HE level map: lut[k] = round((L-1) * CDF(k)), CDF inclusive of k.
///
/// The CDF is kept as an exact integer prefix sum so ties at .5 round the
/// same way on every platform.
template <std::size_t Levels>
BasicLut<Levels> he_lut(const BasicHistogram<Levels>& h) {
  if (h.total == 0) throw std::invalid_argument("empty histogram");
  constexpr std::uint64_t top = Levels - 1;
  BasicLut<Levels> lut{};
  std::uint64_t cum = 0;
  for (std::size_t k = 0; k < Levels; ++k) {
    cum += h.counts[k];
    lut[k] = static_cast<int>(round_ratio(top * cum, h.total));
  }
  return lut;
}

inline GrayImage equalize(const GrayImage& img) {
  return apply_lut(img, he_lut(histogram_of(img)));
}

}  // namespace histeq
