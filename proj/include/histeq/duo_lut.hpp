#pragma once

#include "histeq/image.hpp"

namespace histeq {

/// Level map of the duo-histogram equalizer together with its split level.
///
/// Levels [0, split] form the lower segment and are equalized onto
/// [0, split]; levels (split, L-1] are equalized onto [split, L-1]. A segment
/// that holds no pixels keeps the identity map.
template <std::size_t Levels>
struct BasicDuoLut {
  int split_level = 1;
  BasicLut<Levels> lut{};
};

using DuoLut = BasicDuoLut<kLevels>;

template <std::size_t Levels>
BasicDuoLut<Levels> duo_lut(const BasicHistogram<Levels>& h, int split_level) {
  if (h.total == 0) throw std::invalid_argument("empty histogram");
  if (split_level < 1 || split_level > static_cast<int>(Levels) - 2) {
    throw std::invalid_argument("split level " + std::to_string(split_level) +
                                " leaves an empty segment");
  }
  const auto s = static_cast<std::size_t>(split_level);
  const std::uint64_t upper_span = Levels - 1 - s;

  std::uint64_t lower_mass = 0;
  for (std::size_t t = 0; t <= s; ++t) lower_mass += h.counts[t];
  const std::uint64_t upper_mass = h.total - lower_mass;

  BasicDuoLut<Levels> out;
  out.split_level = split_level;

  std::uint64_t cum = 0;
  for (std::size_t t = 0; t <= s; ++t) {
    if (lower_mass == 0) {
      out.lut[t] = static_cast<int>(t);
      continue;
    }
    cum += h.counts[t];
    out.lut[t] = static_cast<int>(round_ratio(s * cum, lower_mass));
  }

  // S is an integer, so rounding (L-1-S)*CDF2 + S equals S + round((L-1-S)*CDF2).
  cum = 0;
  for (std::size_t t = s + 1; t < Levels; ++t) {
    if (upper_mass == 0) {
      out.lut[t] = static_cast<int>(t);
      continue;
    }
    cum += h.counts[t];
    out.lut[t] =
        static_cast<int>(s + round_ratio(upper_span * cum, upper_mass));
  }
  return out;
}

}  // namespace histeq
