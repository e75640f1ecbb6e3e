#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace histeq {

enum class Method { He, Clahe, Hkmdhe };

// How the mean enters the modified-mean formulas.
//   Native:     sqrt branch on gray levels, power law on the normalized mean
//               rescaled to gray levels.
//   Normalized: both branches on the [0,1] scale, rescaled to gray levels.
enum class MmScale { Native, Normalized };

enum class PeakMode { MaxOfOutput, Fixed255 };

enum class OnConstant { Error, Passthrough };

struct ClaheParams {
  int tiles_x = 8;
  int tiles_y = 8;
  double clip_limit = 2.0;  // infinity disables clipping

  friend bool operator==(const ClaheParams&, const ClaheParams&) = default;
};

/// Every tunable that influences an enhancement run or its metrics.
struct EnhanceParams {
  static constexpr double kDefaultTau = 3.0;
  static constexpr double kDefaultGamma = 0.75;

  Method method = Method::Hkmdhe;
  double tau = kDefaultTau;
  std::optional<double> gamma = kDefaultGamma;  // nullopt: grid search
  MmScale mm_scale = MmScale::Native;
  ClaheParams clahe;
  PeakMode peak_mode = PeakMode::MaxOfOutput;
  OnConstant on_constant = OnConstant::Error;

  bool gamma_search() const { return !gamma.has_value(); }

  friend bool operator==(const EnhanceParams&, const EnhanceParams&) = default;
};

inline void validate(const ClaheParams& p) {
  if (p.tiles_x < 1 || p.tiles_y < 1) {
    throw std::invalid_argument("tile grid must be at least 1x1");
  }
  if (!(p.clip_limit > 1.0)) {
    throw std::invalid_argument("clip limit must exceed uniform height");
  }
}

inline void validate(const EnhanceParams& p) {
  if (!std::isfinite(p.tau)) throw std::invalid_argument("tau must be finite");
  if (p.gamma && !(*p.gamma >= 0.0 && *p.gamma <= 1.0)) {
    throw std::invalid_argument("gamma must lie in [0,1]");
  }
  validate(p.clahe);
}

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::He: return "he";
    case Method::Clahe: return "clahe";
    case Method::Hkmdhe: return "hkmdhe";
  }
  return "?";
}

inline std::string_view to_string(MmScale s) {
  return s == MmScale::Native ? "native" : "normalized";
}

inline std::string_view to_string(PeakMode m) {
  return m == PeakMode::MaxOfOutput ? "max-of-output" : "fixed255";
}

inline std::string_view to_string(OnConstant c) {
  return c == OnConstant::Error ? "error" : "passthrough";
}

inline Method parse_method(std::string_view s) {
  if (s == "he") return Method::He;
  if (s == "clahe") return Method::Clahe;
  if (s == "hkmdhe") return Method::Hkmdhe;
  throw std::invalid_argument("unknown method '" + std::string(s) + "'");
}

inline MmScale parse_mm_scale(std::string_view s) {
  if (s == "native") return MmScale::Native;
  if (s == "normalized") return MmScale::Normalized;
  throw std::invalid_argument("unknown mm-scale '" + std::string(s) + "'");
}

inline PeakMode parse_peak_mode(std::string_view s) {
  if (s == "max-of-output") return PeakMode::MaxOfOutput;
  if (s == "fixed255") return PeakMode::Fixed255;
  throw std::invalid_argument("unknown peak-mode '" + std::string(s) + "'");
}

inline OnConstant parse_on_constant(std::string_view s) {
  if (s == "error") return OnConstant::Error;
  if (s == "passthrough") return OnConstant::Passthrough;
  throw std::invalid_argument("unknown on-constant policy '" + std::string(s) +
                              "'");
}

}  // namespace histeq
