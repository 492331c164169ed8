// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "blobfield/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace blobfield {

inline constexpr int kDefaultFeatureDim = 768;
inline constexpr int kDefaultStyleDim = 512;
inline constexpr int kDefaultBlobCount = 10;
inline constexpr double kDefaultSharpness = 0.02;
inline constexpr int kSceneFormatVersion = 1;

/// Center of the normalized scene cube [0,1]^3.
inline Vec3 scene_center() { return Vec3::Constant(0.5); }

/// One ellipsoidal scene object: 10 geometric parameters plus its feature
/// and style vectors.
struct Blob {
  Vec3 center = scene_center();
  double scale = 0.0;
  Vec3 aspect = Vec3::Ones();
  Vec3 euler = Vec3::Zero();  // radians, R = Rz * Ry * Rx
  VecX feature;
  VecX style;
  bool active = true;

  bool operator==(const Blob& o) const;
};

struct SceneLayout {
  std::vector<Blob> blobs;
  double sharpness = kDefaultSharpness;
  VecX background_feature;
  VecX background_style;
  int feature_dim = 0;
  int style_dim = 0;

  [[nodiscard]] int size() const { return static_cast<int>(blobs.size()); }
  bool operator==(const SceneLayout& o) const;
};

/// Throws Error(InvariantViolation / SchemaViolation) naming the offending path.
void validate(const SceneLayout& scene);

/// Parses a scene document. Errors: MalformedDocument, SchemaViolation,
/// InvariantViolation.
SceneLayout load_scene(std::string_view text);

/// Deterministic serialization: fixed key order, shortest round-trip decimals.
std::string save_scene(const SceneLayout& scene);

/// Test-scene generator; deterministic per (seed, counts).
SceneLayout sample_scene(std::uint64_t seed, int blob_count = kDefaultBlobCount,
                         int feature_dim = kDefaultFeatureDim, int style_dim = kDefaultStyleDim);

enum class EditKind { Move, Remove, Restore, Resize, Reshape, Rotate, Restyle, Duplicate, Swap };

std::string_view to_string(EditKind kind);
std::optional<EditKind> parse_edit_kind(std::string_view name);

/// A tagged scene mutation. Payload layout per kind:
///   Move/Rotate: translation or angle triple; Resize: [scale delta];
///   Reshape: new aspect triple; Restyle: new style vector, or empty with
///   `target2` naming the source blob; Duplicate: center offset triple (or empty);
///   Swap: empty, uses `target2`; Remove/Restore: empty.
struct EditOp {
  EditKind kind = EditKind::Move;
  int target = 0;
  std::optional<int> target2;
  std::vector<double> payload;

  bool operator==(const EditOp&) const = default;
};

}  // namespace blobfield
