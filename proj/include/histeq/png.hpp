#pragma once

// PNG adapter. Link against libpng when including this header.
// Only 8-bit grayscale files are accepted; pixel values pass through untouched.

#include <png.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "histeq/image.hpp"

namespace histeq {

inline GrayImage read_png(const std::string& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw std::runtime_error(path + ": " + image.message);
  }
  if (image.format & (PNG_FORMAT_FLAG_COLOR | PNG_FORMAT_FLAG_LINEAR)) {
    png_image_free(&image);
    throw std::runtime_error(path + ": only 8-bit grayscale PNG is supported");
  }
  image.format = PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> px(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, px.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw std::runtime_error(path + ": " + msg);
  }
  return GrayImage(image.width, image.height, std::move(px));
}

inline void write_png(const std::string& path, const GrayImage& img) {
  if (img.empty()) throw std::invalid_argument("empty image");
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.c_str(), 0, img.pixels().data(), 0,
                               nullptr)) {
    throw std::runtime_error(path + ": " + image.message);
  }
}

}  // namespace histeq
