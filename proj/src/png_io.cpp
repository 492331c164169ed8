// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#include "blobfield/png_io.hpp"

#include "blobfield/error.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>

namespace blobfield {

Rgb8Image quantize_rgb(const Grid& rgb) {
  if (rgb.channels() != 3) throw Error(ErrorKind::ShapeMismatch, "expected 3 channels", "image");
  Rgb8Image img;
  img.width = static_cast<int>(rgb.width());
  img.height = static_cast<int>(rgb.height());
  img.pixels.resize(static_cast<std::size_t>(rgb.data().size()));
  for (Eigen::Index r = 0; r < rgb.data().rows(); ++r) {
    for (Eigen::Index c = 0; c < 3; ++c) {
      const double v = std::clamp(rgb.data()(r, c), 0.0, 1.0);
      img.pixels[static_cast<std::size_t>(3 * r + c)] = static_cast<std::uint8_t>(std::lround(v * 255.0));
    }
  }
  return img;
}

std::string encode_png(const Rgb8Image& image) {
  png_image desc;
  std::memset(&desc, 0, sizeof(desc));
  desc.version = PNG_IMAGE_VERSION;
  desc.width = static_cast<png_uint_32>(image.width);
  desc.height = static_cast<png_uint_32>(image.height);
  desc.format = PNG_FORMAT_RGB;

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&desc, nullptr, &size, 0, image.pixels.data(), 0, nullptr))
    throw Error(ErrorKind::InvalidArgument, desc.message, "png");
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&desc, out.data(), &size, 0, image.pixels.data(), 0, nullptr))
    throw Error(ErrorKind::InvalidArgument, desc.message, "png");
  out.resize(size);
  return out;
}

Rgb8Image decode_png(std::string_view bytes) {
  png_image desc;
  std::memset(&desc, 0, sizeof(desc));
  desc.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&desc, bytes.data(), bytes.size()))
    throw Error(ErrorKind::MalformedDocument, desc.message, "png");
  desc.format = PNG_FORMAT_RGB;
  Rgb8Image img;
  img.width = static_cast<int>(desc.width);
  img.height = static_cast<int>(desc.height);
  img.pixels.resize(PNG_IMAGE_SIZE(desc));
  if (!png_image_finish_read(&desc, nullptr, img.pixels.data(), 0, nullptr)) {
    png_image_free(&desc);
    throw Error(ErrorKind::MalformedDocument, desc.message, "png");
  }
  return img;
}

}  // namespace blobfield
