// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#include "blobfield/scene.hpp"

#include "blobfield/error.hpp"
#include "blobfield/random.hpp"

#include <json.hpp>

#include <array>
#include <cctype>
#include <cmath>
#include <numbers>
#include <set>

namespace blobfield {

using Json = nlohmann::ordered_json;

bool Blob::operator==(const Blob& o) const {
  return center == o.center && scale == o.scale && aspect == o.aspect && euler == o.euler &&
         feature.size() == o.feature.size() && feature == o.feature && style.size() == o.style.size() &&
         style == o.style && active == o.active;
}

bool SceneLayout::operator==(const SceneLayout& o) const {
  return blobs == o.blobs && sharpness == o.sharpness && feature_dim == o.feature_dim &&
         style_dim == o.style_dim && background_feature.size() == o.background_feature.size() &&
         background_feature == o.background_feature &&
         background_style.size() == o.background_style.size() && background_style == o.background_style;
}

namespace {

[[noreturn]] void invariant(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::InvariantViolation, what, path);
}

[[noreturn]] void schema(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::SchemaViolation, what, path);
}

template <typename Derived>
void check_finite(const Eigen::MatrixBase<Derived>& v, const std::string& path) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (!std::isfinite(v(k))) invariant(path + "[" + std::to_string(k) + "]", "value is not finite");
  }
}

}  // namespace

void validate(const SceneLayout& scene) {
  if (scene.blobs.empty()) schema("blobs", "scene needs at least one blob");
  if (scene.feature_dim < 1) schema("feature_dim", "must be >= 1");
  if (scene.style_dim < 1) schema("style_dim", "must be >= 1");
  if (!std::isfinite(scene.sharpness) || scene.sharpness <= 0.0) invariant("sharpness", "must be finite and > 0");
  if (scene.background_feature.size() != scene.feature_dim)
    schema("background_feature", "length must equal feature_dim");
  if (scene.background_style.size() != scene.style_dim) schema("background_style", "length must equal style_dim");
  check_finite(scene.background_feature, "background_feature");
  check_finite(scene.background_style, "background_style");

  for (std::size_t i = 0; i < scene.blobs.size(); ++i) {
    const Blob& b = scene.blobs[i];
    const std::string base = "blobs[" + std::to_string(i) + "].";
    check_finite(b.center, base + "center");
    if (!std::isfinite(b.scale)) invariant(base + "scale", "value is not finite");
    check_finite(b.euler, base + "euler");
    for (int k = 0; k < 3; ++k) {
      const double a = b.aspect(k);
      if (!std::isfinite(a) || a <= 0.0 || a > 1.0)
        invariant(base + "aspect[" + std::to_string(k) + "]", "aspect must lie in (0, 1]");
    }
    if (b.feature.size() != scene.feature_dim) schema(base + "feature", "length must equal feature_dim");
    if (b.style.size() != scene.style_dim) schema(base + "style", "length must equal style_dim");
    check_finite(b.feature, base + "feature");
    check_finite(b.style, base + "style");
  }
}

namespace {

const Json& require(const Json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) schema(path + key, "missing field");
  return *it;
}

void reject_unknown(const Json& obj, std::initializer_list<const char*> allowed, const std::string& path) {
  std::set<std::string> known(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key())) schema(path + it.key(), "unknown field");
  }
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) schema(path, "expected a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) schema(path, "expected an integer");
  return j.get<int>();
}

VecX vector(const Json& j, const std::string& path, std::optional<Eigen::Index> length) {
  if (!j.is_array()) schema(path, "expected an array");
  if (length && static_cast<Eigen::Index>(j.size()) != *length)
    schema(path, "expected " + std::to_string(*length) + " elements, got " + std::to_string(j.size()));
  VecX v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v(static_cast<Eigen::Index>(k)) = number(j[k], path + "[" + std::to_string(k) + "]");
  return v;
}

Json to_array(const VecX& v) {
  Json a = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v(k));
  return a;
}

Json to_array(const Vec3& v) { return Json::array({v(0), v(1), v(2)}); }

}  // namespace

SceneLayout load_scene(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::MalformedDocument, e.what(), "$");
  }
  if (!doc.is_object()) schema("$", "document must be an object");
  reject_unknown(doc, {"version", "sharpness", "feature_dim", "style_dim", "background_feature", "background_style", "blobs"}, "");

  if (integer(require(doc, "version", ""), "version") != kSceneFormatVersion)
    schema("version", "unsupported version");

  SceneLayout scene;
  scene.sharpness = number(require(doc, "sharpness", ""), "sharpness");
  scene.feature_dim = integer(require(doc, "feature_dim", ""), "feature_dim");
  scene.style_dim = integer(require(doc, "style_dim", ""), "style_dim");
  if (scene.feature_dim < 1) schema("feature_dim", "must be >= 1");
  if (scene.style_dim < 1) schema("style_dim", "must be >= 1");
  scene.background_feature = vector(require(doc, "background_feature", ""), "background_feature", scene.feature_dim);
  scene.background_style = vector(require(doc, "background_style", ""), "background_style", scene.style_dim);

  const Json& blobs = require(doc, "blobs", "");
  if (!blobs.is_array()) schema("blobs", "expected an array");
  for (std::size_t i = 0; i < blobs.size(); ++i) {
    const std::string base = "blobs[" + std::to_string(i) + "]";
    const Json& jb = blobs[i];
    if (!jb.is_object()) schema(base, "expected an object");
    const std::string p = base + ".";
    reject_unknown(jb, {"center", "scale", "aspect", "euler", "feature", "style", "active"}, p);
    Blob b;
    b.center = vector(require(jb, "center", p), p + "center", 3);
    b.scale = number(require(jb, "scale", p), p + "scale");
    b.aspect = vector(require(jb, "aspect", p), p + "aspect", 3);
    b.euler = vector(require(jb, "euler", p), p + "euler", 3);
    b.feature = vector(require(jb, "feature", p), p + "feature", scene.feature_dim);
    b.style = vector(require(jb, "style", p), p + "style", scene.style_dim);
    const Json& active = require(jb, "active", p);
    if (!active.is_boolean()) schema(p + "active", "expected a boolean");
    b.active = active.get<bool>();
    scene.blobs.push_back(std::move(b));
  }
  validate(scene);
  return scene;
}

std::string save_scene(const SceneLayout& scene) {
  Json doc;
  doc["version"] = kSceneFormatVersion;
  doc["sharpness"] = scene.sharpness;
  doc["feature_dim"] = scene.feature_dim;
  doc["style_dim"] = scene.style_dim;
  doc["background_feature"] = to_array(scene.background_feature);
  doc["background_style"] = to_array(scene.background_style);
  Json blobs = Json::array();
  for (const Blob& b : scene.blobs) {
    Json jb;
    jb["center"] = to_array(b.center);
    jb["scale"] = b.scale;
    jb["aspect"] = to_array(b.aspect);
    jb["euler"] = to_array(b.euler);
    jb["feature"] = to_array(b.feature);
    jb["style"] = to_array(b.style);
    jb["active"] = b.active;
    blobs.push_back(std::move(jb));
  }
  doc["blobs"] = std::move(blobs);
  return doc.dump() + "\n";
}

SceneLayout sample_scene(std::uint64_t seed, int blob_count, int feature_dim, int style_dim) {
  if (blob_count < 1) throw Error(ErrorKind::InvalidArgument, "blob count must be >= 1", "M");
  if (feature_dim < 1) throw Error(ErrorKind::InvalidArgument, "feature dimension must be >= 1", "d_s");
  if (style_dim < 1) throw Error(ErrorKind::InvalidArgument, "style dimension must be >= 1", "d_t");

  Rng rng(seed);
  SceneLayout scene;
  scene.sharpness = kDefaultSharpness;
  scene.feature_dim = feature_dim;
  scene.style_dim = style_dim;
  constexpr double quarter_pi = std::numbers::pi / 4.0;
  for (int i = 0; i < blob_count; ++i) {
    Blob b;
    for (int k = 0; k < 3; ++k) b.center(k) = rng.uniform(0.2, 0.8);
    b.scale = rng.uniform(2.0, 6.0);
    // (0.3, 1]: flip the half-open draw so 1 is reachable and 0.3 is not.
    for (int k = 0; k < 3; ++k) b.aspect(k) = 1.0 - 0.7 * rng.uniform();
    for (int k = 0; k < 3; ++k) b.euler(k) = rng.uniform(-quarter_pi, quarter_pi);
    b.feature.resize(feature_dim);
    for (int k = 0; k < feature_dim; ++k) b.feature(k) = rng.normal();
    b.style.resize(style_dim);
    for (int k = 0; k < style_dim; ++k) b.style(k) = rng.normal();
    scene.blobs.push_back(std::move(b));
  }
  scene.background_feature = VecX::Zero(feature_dim);
  scene.background_style = VecX::Zero(style_dim);
  validate(scene);
  return scene;
}

std::string_view to_string(EditKind kind) {
  switch (kind) {
    case EditKind::Move: return "move";
    case EditKind::Remove: return "remove";
    case EditKind::Restore: return "restore";
    case EditKind::Resize: return "resize";
    case EditKind::Reshape: return "reshape";
    case EditKind::Rotate: return "rotate";
    case EditKind::Restyle: return "restyle";
    case EditKind::Duplicate: return "duplicate";
    case EditKind::Swap: return "swap";
  }
  return "unknown";
}

std::optional<EditKind> parse_edit_kind(std::string_view name) {
  std::string lower(name);
  for (char& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  static constexpr std::array kinds = {EditKind::Move,    EditKind::Remove,  EditKind::Restore,
                                       EditKind::Resize,  EditKind::Reshape, EditKind::Rotate,
                                       EditKind::Restyle, EditKind::Duplicate, EditKind::Swap};
  for (EditKind k : kinds) {
    if (to_string(k) == lower) return k;
  }
  return std::nullopt;
}

}  // namespace blobfield
