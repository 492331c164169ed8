// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "blobfield/types.hpp"
#include "blobfield/upsampler.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace blobfield {

/// Named tensor container:
///   "BG3D" | u32 version (=1) | u32 entry count |
///   per entry: u16 name length, UTF-8 name, u32 ndim, ndim x u32 dims,
///   row-major f32 payload. All integers and floats little-endian.
struct Bg3dEntry {
  std::string name;
  std::vector<std::uint32_t> dims;
  std::vector<float> values;

  [[nodiscard]] std::size_t element_count() const;
  bool operator==(const Bg3dEntry&) const = default;
};

class Bg3dTensor {
 public:
  /// Throws SchemaViolation for duplicate names or a size/dims mismatch.
  void add(Bg3dEntry entry);
  void add(const std::string& name, const Map2D& map);
  /// Stores an H x W x C grid with dims [H, W, C].
  void add(const std::string& name, const Grid& grid);

  [[nodiscard]] const std::vector<Bg3dEntry>& entries() const { return entries_; }
  [[nodiscard]] const Bg3dEntry* find(std::string_view name) const;
  /// Throws SchemaViolation when absent.
  [[nodiscard]] const Bg3dEntry& at(std::string_view name) const;

  bool operator==(const Bg3dTensor&) const = default;

 private:
  std::vector<Bg3dEntry> entries_;
};

inline constexpr std::uint32_t kBg3dVersion = 1;

std::string encode_bg3d(const Bg3dTensor& tensor);
/// Throws MalformedDocument (truncation, bad magic/version, trailing bytes) or
/// SchemaViolation (duplicate names).
Bg3dTensor decode_bg3d(std::string_view bytes);

/// Views a 2-D entry as a double map. Throws ShapeMismatch.
Map2D entry_to_map(const Bg3dEntry& entry);
/// Slice `index` of the leading dimension of a 3-D entry [N, H, W].
Map2D entry_slice(const Bg3dEntry& entry, std::uint32_t index);

/// Entries `conv_weights` [4C, C], `mod_affine_w` [C, d_s], `mod_affine_b` [C].
Bg3dTensor upsampler_to_bg3d(const UpsamplerParams& params);
UpsamplerParams upsampler_from_bg3d(const Bg3dTensor& tensor);

}  // namespace blobfield
