// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#include "blobfield/service.hpp"

#include "blobfield/edit.hpp"
#include "blobfield/error.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>

namespace blobfield {

namespace {

using Json = nlohmann::ordered_json;
using Response = Service::Response;

Response json_response(int status, const Json& body) { return {status, "application/json", body.dump(), {}}; }

Response error_response(int status, const Error& e) {
  Json body;
  body["error"] = std::string(to_string(e.kind()));
  body["path"] = e.path();
  body["message"] = e.message();
  return json_response(status, body);
}

Response error_response(int status, const std::string& kind, const std::string& message) {
  Json body;
  body["error"] = kind;
  body["path"] = "";
  body["message"] = message;
  return json_response(status, body);
}

Response scene_response(const SceneLayout& scene) {
  Response r{200, "application/json", save_scene(scene), {}};
  r.headers["ETag"] = etag_for(r.body);
  return r;
}

}  // namespace

std::string etag_for(std::string_view body) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : body) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "\"%016llx\"", static_cast<unsigned long long>(h));
  return buf;
}

Service::Service(Options options)
    : options_(std::move(options)),
      scene_(std::make_shared<const SceneLayout>(
          sample_scene(options_.seed, options_.blob_count, options_.feature_dim, options_.style_dim))),
      camera_(Camera::make(0.0, 0.0)) {}

std::shared_ptr<const SceneLayout> Service::snapshot() const {
  std::shared_lock lock(mutex_);
  return scene_;
}

std::size_t Service::undo_depth() const {
  std::shared_lock lock(mutex_);
  return undo_.size();
}

void Service::push_undo_locked(std::shared_ptr<const SceneLayout> previous) {
  undo_.push_back(std::move(previous));
  while (undo_.size() > kUndoDepth) undo_.pop_front();
}

Response Service::get_scene() const { return scene_response(*snapshot()); }

Response Service::put_scene(const std::string& body) {
  std::shared_ptr<const SceneLayout> next;
  try {
    next = std::make_shared<const SceneLayout>(load_scene(body));
  } catch (const Error& e) {
    return error_response(400, e);
  }
  std::unique_lock lock(mutex_);
  push_undo_locked(scene_);
  scene_ = std::move(next);
  return {204, "", "", {}};
}

Response Service::render(const std::string& body) const {
  Json doc;
  try {
    doc = Json::parse(body);
  } catch (const Json::parse_error& e) {
    return error_response(400, "MalformedDocument", e.what());
  }
  if (!doc.is_object()) return error_response(400, "SchemaViolation", "render request must be an object");

  RenderMode mode = RenderMode::Layout;
  if (doc.contains("mode")) {
    const auto parsed = doc["mode"].is_string() ? parse_render_mode(doc["mode"].get<std::string>()) : std::nullopt;
    if (!parsed) return error_response(400, "SchemaViolation", "mode must be layout, weights, features or styles");
    mode = *parsed;
  }

  Camera camera = camera_;
  try {
    if (doc.contains("camera")) camera = camera_from_json(doc["camera"].dump());
  } catch (const Error& e) {
    return error_response(422, e);
  }
  if (doc.contains("resolution")) {
    if (!doc["resolution"].is_number_integer()) return error_response(400, "SchemaViolation", "resolution must be an integer");
    const int res = doc["resolution"].get<int>();
    if (res > kMaxRenderResolution) return error_response(413, "InvalidArgument", "resolution exceeds 512");
    if (res < 1) return error_response(422, "InvalidArgument", "resolution must be >= 1");
    camera = camera.with_resolution(res, res);
  }
  if (camera.width() > kMaxRenderResolution || camera.height() > kMaxRenderResolution)
    return error_response(413, "InvalidArgument", "resolution exceeds 512");

  const std::shared_ptr<const SceneLayout> scene = snapshot();
  try {
    RenderOutput out = blobfield::render(*scene, camera, mode, options_.render);
    return {200, out.content_type, std::move(out.bytes), {}};
  } catch (const Error& e) {
    return error_response(e.kind() == ErrorKind::EmptyScene ? 409 : 422, e);
  }
}

Response Service::edit(const std::string& body) {
  EditOp op;
  try {
    op = parse_edit_op(body);
  } catch (const Error& e) {
    return error_response(400, e);
  }
  std::unique_lock lock(mutex_);
  try {
    auto next = std::make_shared<const SceneLayout>(apply_edit(*scene_, op));
    push_undo_locked(scene_);
    scene_ = std::move(next);
  } catch (const Error& e) {
    return error_response(400, e);
  }
  return scene_response(*scene_);
}

Response Service::undo() {
  std::unique_lock lock(mutex_);
  if (undo_.empty()) return error_response(409, "EmptyUndo", "nothing to undo");
  scene_ = std::move(undo_.back());
  undo_.pop_back();
  return scene_response(*scene_);
}

Response Service::projections(const std::map<std::string, std::string>& query) const {
  Camera camera = camera_;
  try {
    if (auto it = query.find("camera"); it != query.end()) {
      camera = camera_from_json(it->second);
    } else if (!query.empty()) {
      Json cam = Json::object();
      for (const auto& [key, value] : query) {
        try {
          std::size_t used = 0;
          if (key == "width" || key == "height") {
            cam[key] = std::stoi(value, &used);
          } else {
            cam[key] = std::stod(value, &used);
          }
          if (used != value.size()) throw std::invalid_argument(key);
        } catch (const std::exception&) {
          throw Error(ErrorKind::InvalidArgument, "not a number", "camera." + key);
        }
      }
      camera = camera_from_json(cam.dump());
    }
  } catch (const Error& e) {
    return error_response(422, e);
  }

  const std::shared_ptr<const SceneLayout> scene = snapshot();
  Json out = Json::array();
  for (int i = 0; i < scene->size(); ++i) {
    const Blob& b = scene->blobs[static_cast<std::size_t>(i)];
    const double depth = centroid_depth(camera, b.center);
    Json entry;
    entry["index"] = i;
    if (depth > 0.0) {
      const PixelCoord uv = project(camera, b.center);
      entry["u"] = uv.u;
      entry["v"] = uv.v;
      entry["pixels_per_unit"] = pixels_per_unit(camera, depth);
    } else {
      entry["u"] = nullptr;
      entry["v"] = nullptr;
      entry["pixels_per_unit"] = nullptr;
    }
    entry["depth"] = depth;
    entry["active"] = b.active;
    out.push_back(std::move(entry));
  }
  return json_response(200, out);
}

Response Service::save(const std::string& body) const {
  Json doc;
  try {
    doc = Json::parse(body);
  } catch (const Json::parse_error& e) {
    return error_response(400, "MalformedDocument", e.what());
  }
  if (!doc.is_object() || !doc.contains("path") || !doc["path"].is_string())
    return error_response(400, "SchemaViolation", "expected {\"path\": string}");
  const std::string path = doc["path"].get<std::string>();
  const std::string text = save_scene(*snapshot());
  std::ofstream file(path, std::ios::binary);
  if (!file || !(file << text)) return error_response(500, "Io", "cannot write " + path);
  Json out;
  out["saved"] = path;
  out["etag"] = etag_for(text);
  return json_response(200, out);
}

Response Service::handle(const Request& request) {
  const std::string& m = request.method;
  const std::string& p = request.path;
  if (p == "/scene" && m == "GET") return get_scene();
  if (p == "/scene" && m == "PUT") return put_scene(request.body);
  if (p == "/render" && m == "POST") return render(request.body);
  if (p == "/edit" && m == "POST") return edit(request.body);
  if (p == "/undo" && m == "POST") return undo();
  if (p == "/blobs/projections" && m == "GET") return projections(request.query);
  if (p == "/save" && m == "POST") return save(request.body);
  return error_response(404, "NotFound", m + " " + p);
}

void bind_routes(httplib::Server& server, Service& service) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, PUT, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type, If-None-Match"},
                              {"Access-Control-Expose-Headers", "ETag"}});
  auto adapt = [&service](const httplib::Request& req, httplib::Response& res) {
    Service::Request r{req.method, req.path, req.body, {}};
    for (const auto& [key, value] : req.params) r.query.emplace(key, value);
    Service::Response out = service.handle(r);
    res.status = out.status;
    for (const auto& [key, value] : out.headers) res.set_header(key, value);
    if (!out.content_type.empty()) res.set_content(out.body, out.content_type);
  };
  for (const char* path : {"/scene", "/render", "/edit", "/undo", "/blobs/projections", "/save"}) {
    server.Get(path, adapt);
    server.Put(path, adapt);
    server.Post(path, adapt);
  }
  server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
}

int serve(Service& service, const std::string& host, int port) {
  httplib::Server server;
  bind_routes(server, service);
  std::cerr << "blobfield serving on http://" << host << ":" << port << "\n";
  if (!server.listen(host, port)) {
    std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
    return 1;
  }
  return 0;
}

}  // namespace blobfield
