#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "histeq/image.hpp"
#include "histeq/parallel.hpp"

namespace histeq {

struct Ellipse {
  double cx = 0.0;  // pixel coordinates of the centre
  double cy = 0.0;
  double rx = 1.0;  // semi-axes in pixels
  double ry = 1.0;
  double angle_deg = 0.0;
  double delta = 0.0;  // added intensity inside, |delta| <= 20

  bool contains(double x, double y) const {
    const double a = angle_deg * std::numbers::pi / 180.0;
    const double c = std::cos(a);
    const double s = std::sin(a);
    const double dx = x - cx;
    const double dy = y - cy;
    const double u = (c * dx + s * dy) / rx;
    const double v = (-s * dx + c * dy) / ry;
    return u * u + v * v <= 1.0;
  }

  friend bool operator==(const Ellipse&, const Ellipse&) = default;
};

struct PhantomSpec {
  static constexpr double kMaxDelta = 20.0;

  std::string name;
  std::size_t width = 256;
  std::size_t height = 256;
  std::uint64_t seed = 0;
  double background_level = 0.0;
  std::vector<Ellipse> ellipses;
  double noise_sigma = 0.0;

  friend bool operator==(const PhantomSpec&, const PhantomSpec&) = default;
};

inline void validate(const PhantomSpec& s) {
  if (s.width == 0 || s.height == 0) {
    throw std::invalid_argument("phantom '" + s.name + "': empty raster");
  }
  if (!(s.background_level >= 0.0 && s.background_level <= kMaxLevel)) {
    throw std::invalid_argument("phantom '" + s.name +
                                "': background level outside [0,255]");
  }
  if (!(s.noise_sigma >= 0.0) || !std::isfinite(s.noise_sigma)) {
    throw std::invalid_argument("phantom '" + s.name +
                                "': noise sigma must be finite and >= 0");
  }
  for (const auto& e : s.ellipses) {
    if (!(e.rx > 0.0 && e.ry > 0.0) || !std::isfinite(e.rx) ||
        !std::isfinite(e.ry)) {
      throw std::invalid_argument("phantom '" + s.name +
                                  "': degenerate ellipse axes");
    }
    if (!(std::abs(e.delta) <= PhantomSpec::kMaxDelta)) {
      throw std::invalid_argument("phantom '" + s.name +
                                  "': ellipse delta exceeds 20 levels");
    }
  }
}

namespace detail {

// Uniform in [0,1) from the top 53 bits of one mt19937_64 output.
inline double unit_uniform(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller, cosine half only: consumes exactly two engine outputs.
inline double standard_normal(std::mt19937_64& rng) {
  const double u1 = 1.0 - unit_uniform(rng);  // (0,1]
  const double u2 = unit_uniform(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace detail

/// Renders a phantom. Pixels are visited row-major; each takes one Gaussian
/// sample (two mt19937_64 outputs) whether or not noise_sigma is zero, so the
/// draw sequence depends on the raster size only.
inline GrayImage generate(const PhantomSpec& spec) {
  validate(spec);
  std::mt19937_64 rng(spec.seed);
  GrayImage img(spec.width, spec.height);
  for (std::size_t y = 0; y < spec.height; ++y) {
    for (std::size_t x = 0; x < spec.width; ++x) {
      double v = spec.background_level;
      for (const auto& e : spec.ellipses) {
        if (e.contains(double(x), double(y))) v += e.delta;
      }
      v += spec.noise_sigma * detail::standard_normal(rng);
      img(x, y) = static_cast<std::uint8_t>(
          std::clamp(round_half_away(v), 0.0, double(kMaxLevel)));
    }
  }
  return img;
}

inline std::vector<GrayImage> generate_corpus(
    const std::vector<PhantomSpec>& specs, std::size_t threads = 1) {
  std::vector<GrayImage> out(specs.size());
  parallel_for(specs.size(), threads,
               [&](std::size_t i) { out[i] = generate(specs[i]); });
  return out;
}

/// The built-in 20-slice corpus: a skull ring, brain parenchyma, ventricles
/// and a small lesion whose sizes vary with the slice index, over a dark
/// background. Every value is a multiple of 0.5 so the manifest round-trips
/// through JSON exactly.
inline std::vector<PhantomSpec> default_corpus() {
  constexpr int kSlices = 20;
  auto half = [](double v) { return std::round(v * 2.0) / 2.0; };
  std::vector<PhantomSpec> specs;
  for (int i = 0; i < kSlices; ++i) {
    const double t = double(i) / double(kSlices - 1);
    const double scale = 0.55 + 0.4 * std::sin(std::numbers::pi * (0.1 + 0.8 * t));
    PhantomSpec s;
    s.name = "slice" + std::string(i < 10 ? "0" : "") + std::to_string(i);
    s.seed = std::uint64_t(i);
    s.background_level = 6.0;
    s.noise_sigma = 1.5;

    const double cx = 128.0;
    const double cy = half(128.0 + 6.0 * (t - 0.5));
    const double rx = half(100.0 * scale);
    const double ry = half(118.0 * scale);
    s.ellipses.push_back({cx, cy, rx, ry, 0.0, 20.0});               // skull
    s.ellipses.push_back({cx, cy, rx - 7.0, ry - 7.0, 0.0, -8.0});   // brain
    if (i >= 5 && i <= 15) {
      const double vr = half(8.0 + 10.0 * scale);
      s.ellipses.push_back({cx - 11.0, cy - 4.0, half(vr * 0.45), vr, 20.0, -5.0});
      s.ellipses.push_back({cx + 11.0, cy - 4.0, half(vr * 0.45), vr, -20.0, -5.0});
    }
    const double lx = half(cx + 0.45 * rx * std::cos(0.9 * i));
    const double ly = half(cy + 0.45 * ry * std::sin(0.9 * i));
    s.ellipses.push_back({lx, ly, 6.0 + (i % 3), 5.0 + (i % 4), 15.0 * i, 4.0});
    specs.push_back(std::move(s));
  }
  return specs;
}

// Manifest JSON: {"version":1,"phantoms":[{name,width,height,seed,
// background_level,noise_sigma,ellipses:[{cx,cy,rx,ry,angle_deg,delta}]}]}

inline constexpr int kManifestVersion = 1;

inline nlohmann::json manifest_to_json(const std::vector<PhantomSpec>& specs) {
  nlohmann::json phantoms = nlohmann::json::array();
  for (const auto& s : specs) {
    nlohmann::json ellipses = nlohmann::json::array();
    for (const auto& e : s.ellipses) {
      ellipses.push_back({{"cx", e.cx},
                          {"cy", e.cy},
                          {"rx", e.rx},
                          {"ry", e.ry},
                          {"angle_deg", e.angle_deg},
                          {"delta", e.delta}});
    }
    phantoms.push_back({{"name", s.name},
                        {"width", s.width},
                        {"height", s.height},
                        {"seed", s.seed},
                        {"background_level", s.background_level},
                        {"noise_sigma", s.noise_sigma},
                        {"ellipses", std::move(ellipses)}});
  }
  return {{"version", kManifestVersion}, {"phantoms", std::move(phantoms)}};
}

/// Parses and validates a manifest; throws std::invalid_argument naming the
/// offending entry on any problem.
inline std::vector<PhantomSpec> manifest_from_json(const nlohmann::json& j) {
  std::vector<PhantomSpec> specs;
  try {
    if (j.at("version").get<int>() != kManifestVersion) {
      throw std::invalid_argument("unsupported manifest version");
    }
    for (const auto& p : j.at("phantoms")) {
      PhantomSpec s;
      s.name = p.at("name").get<std::string>();
      s.width = p.at("width").get<std::size_t>();
      s.height = p.at("height").get<std::size_t>();
      s.seed = p.at("seed").get<std::uint64_t>();
      s.background_level = p.at("background_level").get<double>();
      s.noise_sigma = p.at("noise_sigma").get<double>();
      for (const auto& e : p.at("ellipses")) {
        s.ellipses.push_back({e.at("cx").get<double>(), e.at("cy").get<double>(),
                              e.at("rx").get<double>(), e.at("ry").get<double>(),
                              e.at("angle_deg").get<double>(),
                              e.at("delta").get<double>()});
      }
      validate(s);
      specs.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("manifest: ") + e.what());
  }
  if (specs.empty()) throw std::invalid_argument("manifest lists no phantoms");
  return specs;
}

}  // namespace histeq
