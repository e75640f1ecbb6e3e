#pragma once

#include <cctype>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "histeq/image.hpp"

namespace histeq {

class PgmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

class PgmHeaderReader {
 public:
  explicit PgmHeaderReader(std::span<const std::uint8_t> bytes) : b_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < b_.size()) {
      if (std::isspace(b_[pos_])) {
        ++pos_;
      } else if (b_[pos_] == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n' && b_[pos_] != '\r') ++pos_;
      } else {
        break;
      }
    }
  }

  std::uint64_t number(const char* what) {
    skip_space_and_comments();
    if (pos_ >= b_.size() || !std::isdigit(b_[pos_])) {
      throw PgmError(std::string("PGM header: expected ") + what);
    }
    std::uint64_t v = 0;
    while (pos_ < b_.size() && std::isdigit(b_[pos_])) {
      v = v * 10 + (b_[pos_++] - '0');
      if (v > (1ull << 30)) {
        throw PgmError(std::string("PGM header: ") + what + " too large");
      }
    }
    return v;
  }

  std::size_t& cursor() { return pos_; }

 private:
  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Decodes a binary (P5) PGM with maxval 255. Header comments are accepted.
inline GrayImage read_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw PgmError("not a binary PGM (expected magic P5)");
  }
  detail::PgmHeaderReader r(bytes);
  r.cursor() = 2;
  const auto width = r.number("width");
  const auto height = r.number("height");
  const auto maxval = r.number("maxval");
  if (maxval != 255) {
    throw PgmError("unsupported maxval " + std::to_string(maxval) +
                   " (only 255)");
  }
  if (width == 0 || height == 0) throw PgmError("empty image");
  std::size_t& pos = r.cursor();
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
    throw PgmError("PGM header: missing separator before raster");
  }
  ++pos;
  const std::size_t need = width * height;
  if (bytes.size() - pos < need) {
    throw PgmError("truncated PGM payload: expected " + std::to_string(need) +
                   " bytes, got " + std::to_string(bytes.size() - pos));
  }
  std::vector<std::uint8_t> px(bytes.begin() + std::ptrdiff_t(pos),
                               bytes.begin() + std::ptrdiff_t(pos + need));
  return GrayImage(width, height, std::move(px));
}

/// Canonical encoding: "P5 <w> <h> 255\n" followed by the raw raster.
inline std::vector<std::uint8_t> write_pgm(const GrayImage& img) {
  if (img.empty()) throw PgmError("empty image");
  const std::string header = "P5 " + std::to_string(img.width()) + " " +
                             std::to_string(img.height()) + " 255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.pixels().begin(), img.pixels().end());
  return out;
}

}  // namespace histeq
