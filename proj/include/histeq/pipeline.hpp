#pragma once

#include "histeq/clahe.hpp"
#include "histeq/global_he.hpp"
#include "histeq/hkmdhe.hpp"
#include "histeq/metrics.hpp"
#include "histeq/params.hpp"

namespace histeq {

struct Enhanced {
  GrayImage image;
  std::optional<SplitDecision> split;  // hkmdhe only
  bool passthrough = false;
};

/// Runs the method selected in `params`. Deterministic: equal inputs and
/// params give byte-identical output.
inline Enhanced enhance(const GrayImage& img, const EnhanceParams& params) {
  validate(params);
  switch (params.method) {
    case Method::He:
      return {equalize(img), std::nullopt, false};
    case Method::Clahe:
      return {enhance_clahe(img, params.clahe), std::nullopt, false};
    case Method::Hkmdhe: {
      auto r = enhance_hkmdhe(img, params);
      return {std::move(r.image), r.split, r.passthrough};
    }
  }
  throw std::logic_error("unhandled method");
}

}  // namespace histeq
