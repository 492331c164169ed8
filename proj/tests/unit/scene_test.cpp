// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#include "blobfield/error.hpp"
#include "blobfield/scene.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

using namespace blobfield;
using Json = nlohmann::ordered_json;

namespace {

std::pair<ErrorKind, std::string> failure(const std::string& text) {
  try {
    (void)load_scene(text);
  } catch (const Error& e) {
    return {e.kind(), e.path()};
  }
  return {ErrorKind::Io, "no error"};
}

Json small_doc() { return Json::parse(save_scene(sample_scene(3, 2, 3, 2))); }

}  // namespace

TEST(SampleScene, DeterministicAndInRange) {
  const SceneLayout a = sample_scene(7, 10, 16, 8);
  EXPECT_EQ(a, sample_scene(7, 10, 16, 8));
  EXPECT_NE(a, sample_scene(8, 10, 16, 8));
  ASSERT_EQ(a.size(), 10);
  for (const Blob& b : a.blobs) {
    EXPECT_TRUE((b.center.array() >= 0.2).all() && (b.center.array() <= 0.8).all());
    EXPECT_GE(b.scale, 2.0);
    EXPECT_LE(b.scale, 6.0);
    EXPECT_TRUE((b.aspect.array() > 0.0).all() && (b.aspect.array() <= 1.0).all());
    EXPECT_EQ(b.feature.size(), 16);
    EXPECT_EQ(b.style.size(), 8);
    EXPECT_TRUE(b.active);
  }
  EXPECT_NO_THROW(validate(a));
}

TEST(SampleScene, DefaultDimensions) {
  const SceneLayout s = sample_scene(1, 1);
  EXPECT_EQ(s.feature_dim, 768);
  EXPECT_EQ(s.style_dim, 512);
  EXPECT_EQ(s.sharpness, 0.02);
  EXPECT_THROW(sample_scene(1, 0), Error);
}

TEST(SceneJson, RoundTripIsExact) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SceneLayout s = sample_scene(seed, 1 + static_cast<int>(seed % 5), 6, 3);
    s.blobs[0].active = seed % 2 == 0;
    const std::string text = save_scene(s);
    const SceneLayout back = load_scene(text);
    EXPECT_EQ(back, s);
    EXPECT_EQ(save_scene(back), text);
  }
}

TEST(SceneJson, KeyOrderIsFixed) {
  const Json doc = small_doc();
  std::vector<std::string> keys;
  for (auto it = doc.begin(); it != doc.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"version", "sharpness", "feature_dim", "style_dim", "background_feature",
                                            "background_style", "blobs"}));
}

TEST(SceneJson, ReportsPathOfInvalidAspect) {
  Json doc = small_doc();
  doc["blobs"][1]["aspect"][2] = 1.5;
  EXPECT_EQ(failure(doc.dump()), std::make_pair(ErrorKind::InvariantViolation, std::string("blobs[1].aspect[2]")));
  doc["blobs"][1]["aspect"][2] = 0.0;
  EXPECT_EQ(failure(doc.dump()).second, "blobs[1].aspect[2]");
}

TEST(SceneJson, SchemaErrors) {
  Json doc = small_doc();
  doc["blobs"][0]["colour"] = 1;
  EXPECT_EQ(failure(doc.dump()), std::make_pair(ErrorKind::SchemaViolation, std::string("blobs[0].colour")));

  doc = small_doc();
  doc["blobs"][0].erase("scale");
  EXPECT_EQ(failure(doc.dump()).first, ErrorKind::SchemaViolation);

  doc = small_doc();
  doc["blobs"][1]["feature"].push_back(1.0);
  EXPECT_EQ(failure(doc.dump()).first, ErrorKind::SchemaViolation);

  doc = small_doc();
  doc["version"] = 2;
  EXPECT_EQ(failure(doc.dump()).first, ErrorKind::SchemaViolation);

  doc = small_doc();
  doc["blobs"] = Json::array();
  EXPECT_EQ(failure(doc.dump()).first, ErrorKind::SchemaViolation);

  EXPECT_EQ(failure("{\"version\": 1,").first, ErrorKind::MalformedDocument);
  EXPECT_EQ(failure("[]").first, ErrorKind::SchemaViolation);
}

TEST(EditKindNames, ParseIsCaseInsensitive) {
  EXPECT_EQ(parse_edit_kind("Move"), EditKind::Move);
  EXPECT_EQ(parse_edit_kind("RESTYLE"), EditKind::Restyle);
  EXPECT_EQ(to_string(EditKind::Duplicate), "duplicate");
  EXPECT_FALSE(parse_edit_kind("teleport"));
}
