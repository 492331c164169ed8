// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#include "blobfield/edit.hpp"

#include "blobfield/error.hpp"

#include <json.hpp>

#include <cmath>
#include <set>

namespace blobfield {

namespace {

void check_index(const SceneLayout& scene, int index, const char* field) {
  if (index < 0 || index >= scene.size())
    throw Error(ErrorKind::IndexOutOfRange,
                "index " + std::to_string(index) + " outside [0, " + std::to_string(scene.size()) + ")", field);
}

void check_payload(const EditOp& op, std::size_t expected) {
  if (op.payload.size() != expected)
    throw Error(ErrorKind::SchemaViolation,
                std::string(to_string(op.kind)) + " expects " + std::to_string(expected) + " payload values, got " +
                    std::to_string(op.payload.size()),
                "payload");
}

Vec3 triple(const EditOp& op) {
  check_payload(op, 3);
  return {op.payload[0], op.payload[1], op.payload[2]};
}

int second_target(const SceneLayout& scene, const EditOp& op) {
  if (!op.target2) throw Error(ErrorKind::SchemaViolation, "edit requires a second target", "target2");
  check_index(scene, *op.target2, "target2");
  return *op.target2;
}

}  // namespace

SceneLayout apply_edit(const SceneLayout& scene, const EditOp& op) {
  check_index(scene, op.target, "target");
  for (std::size_t k = 0; k < op.payload.size(); ++k) {
    if (!std::isfinite(op.payload[k]))
      throw Error(ErrorKind::InvariantViolation, "payload must be finite", "payload[" + std::to_string(k) + "]");
  }

  SceneLayout out = scene;
  Blob& blob = out.blobs[static_cast<std::size_t>(op.target)];
  switch (op.kind) {
    case EditKind::Move:
      blob.center = (blob.center + triple(op)).cwiseMax(0.0).cwiseMin(1.0);
      break;
    case EditKind::Remove:
      check_payload(op, 0);
      blob.active = false;
      break;
    case EditKind::Restore:
      check_payload(op, 0);
      blob.active = true;
      break;
    case EditKind::Resize:
      check_payload(op, 1);
      blob.scale += op.payload[0];
      break;
    case EditKind::Reshape: {
      const Vec3 aspect = triple(op);
      for (int k = 0; k < 3; ++k) {
        if (!(aspect(k) > 0.0 && aspect(k) <= 1.0))
          throw Error(ErrorKind::InvariantViolation, "aspect must lie in (0, 1]", "payload[" + std::to_string(k) + "]");
      }
      blob.aspect = aspect;
      break;
    }
    case EditKind::Rotate:
      blob.euler += triple(op);
      break;
    case EditKind::Restyle:
      if (op.target2) {
        check_payload(op, 0);
        blob.style = scene.blobs[static_cast<std::size_t>(second_target(scene, op))].style;
      } else {
        check_payload(op, static_cast<std::size_t>(scene.style_dim));
        blob.style = Eigen::Map<const VecX>(op.payload.data(), static_cast<Eigen::Index>(op.payload.size()));
      }
      break;
    case EditKind::Duplicate: {
      Blob copy = scene.blobs[static_cast<std::size_t>(op.target)];
      if (!op.payload.empty()) copy.center = (copy.center + triple(op)).cwiseMax(0.0).cwiseMin(1.0);
      out.blobs.push_back(std::move(copy));
      break;
    }
    case EditKind::Swap: {
      check_payload(op, 0);
      Blob& other = out.blobs[static_cast<std::size_t>(second_target(scene, op))];
      std::swap(blob.feature, other.feature);
      std::swap(blob.style, other.style);
      break;
    }
  }
  validate(out);
  return out;
}

SceneLayout move_past(const SceneLayout& scene, int i, int j, const Camera& camera) {
  check_index(scene, i, "i");
  check_index(scene, j, "j");
  if (i == j) throw Error(ErrorKind::InvalidArgument, "blob cannot move past itself", "j");
  const double depth_i = centroid_depth(camera, scene.blobs[static_cast<std::size_t>(i)].center);
  const double depth_j = centroid_depth(camera, scene.blobs[static_cast<std::size_t>(j)].center);
  const Vec3 shift = (depth_j - kMovePastMargin - depth_i) * camera.forward();
  return apply_edit(scene, EditOp{EditKind::Move, i, std::nullopt, {shift(0), shift(1), shift(2)}});
}

EditOp parse_edit_op(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::MalformedDocument, e.what(), "$");
  }
  if (!doc.is_object()) throw Error(ErrorKind::SchemaViolation, "edit must be an object", "$");
  static const std::set<std::string> known = {"kind", "target", "target2", "payload"};
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!known.count(it.key())) throw Error(ErrorKind::SchemaViolation, "unknown field", it.key());
  }
  EditOp op;
  if (!doc.contains("kind") || !doc["kind"].is_string()) throw Error(ErrorKind::SchemaViolation, "expected a string", "kind");
  const auto kind = parse_edit_kind(doc["kind"].get<std::string>());
  if (!kind) throw Error(ErrorKind::SchemaViolation, "unknown edit kind '" + doc["kind"].get<std::string>() + "'", "kind");
  op.kind = *kind;
  if (!doc.contains("target") || !doc["target"].is_number_integer())
    throw Error(ErrorKind::SchemaViolation, "expected an integer", "target");
  op.target = doc["target"].get<int>();
  if (doc.contains("target2") && !doc["target2"].is_null()) {
    if (!doc["target2"].is_number_integer()) throw Error(ErrorKind::SchemaViolation, "expected an integer", "target2");
    op.target2 = doc["target2"].get<int>();
  }
  if (doc.contains("payload")) {
    const auto& p = doc["payload"];
    if (!p.is_array()) throw Error(ErrorKind::SchemaViolation, "expected an array", "payload");
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (!p[k].is_number()) throw Error(ErrorKind::SchemaViolation, "expected a number", "payload[" + std::to_string(k) + "]");
      op.payload.push_back(p[k].get<double>());
    }
  }
  return op;
}

std::string edit_op_to_json(const EditOp& op) {
  nlohmann::ordered_json doc;
  doc["kind"] = std::string(to_string(op.kind));
  doc["target"] = op.target;
  if (op.target2) doc["target2"] = *op.target2;
  doc["payload"] = op.payload;
  return doc.dump();
}

}  // namespace blobfield
