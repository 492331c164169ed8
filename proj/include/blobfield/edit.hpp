// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "blobfield/camera.hpp"
#include "blobfield/scene.hpp"

#include <string>
#include <string_view>

namespace blobfield {

inline constexpr double kMovePastMargin = 0.05;

/// Applies one edit and returns the new scene; untouched blobs are copied
/// verbatim. Throws IndexOutOfRange, InvariantViolation, SchemaViolation
/// (wrong payload length).
SceneLayout apply_edit(const SceneLayout& scene, const EditOp& op);

/// Translates blob i along the camera forward axis so its centroid depth is
/// kMovePastMargin less than blob j's (just in front of j).
SceneLayout move_past(const SceneLayout& scene, int i, int j, const Camera& camera);

/// {"kind": string, "target": int, "target2": int?, "payload": number array}.
/// Throws MalformedDocument / SchemaViolation.
EditOp parse_edit_op(std::string_view json_text);
std::string edit_op_to_json(const EditOp& op);

}  // namespace blobfield
