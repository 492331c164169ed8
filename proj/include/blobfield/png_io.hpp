// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "blobfield/types.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace blobfield {

struct Rgb8Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major RGB

  [[nodiscard]] const std::uint8_t* at(int x, int y) const { return &pixels[static_cast<std::size_t>(3 * (y * width + x))]; }
};

/// Quantizes an H x W x 3 grid in [0,1] to 8 bits (round to nearest).
Rgb8Image quantize_rgb(const Grid& rgb);

std::string encode_png(const Rgb8Image& image);
Rgb8Image decode_png(std::string_view bytes);

}  // namespace blobfield
