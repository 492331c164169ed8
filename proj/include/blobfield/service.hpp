// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "blobfield/camera.hpp"
#include "blobfield/render.hpp"
#include "blobfield/scene.hpp"

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>

namespace httplib {
class Server;
}

namespace blobfield {

inline constexpr std::size_t kUndoDepth = 64;
inline constexpr int kDefaultPort = 8787;

/// Single-session scene editing service. Handlers are plain functions of a
/// request so they can be exercised without a socket; bind_routes() exposes
/// them over HTTP.
class Service {
 public:
  struct Options {
    std::uint64_t seed = 7;
    int blob_count = kDefaultBlobCount;
    int feature_dim = kDefaultFeatureDim;
    int style_dim = kDefaultStyleDim;
    RenderSettings render;
  };

  struct Request {
    std::string method;
    std::string path;
    std::string body;
    std::map<std::string, std::string> query;
  };

  struct Response {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
    std::map<std::string, std::string> headers;
  };

  explicit Service(Options options);

  Response handle(const Request& request);

  Response get_scene() const;
  Response put_scene(const std::string& body);
  Response render(const std::string& body) const;
  Response edit(const std::string& body);
  Response undo();
  Response projections(const std::map<std::string, std::string>& query) const;
  Response save(const std::string& body) const;

  [[nodiscard]] std::shared_ptr<const SceneLayout> snapshot() const;
  [[nodiscard]] std::size_t undo_depth() const;

 private:
  void push_undo_locked(std::shared_ptr<const SceneLayout> previous);

  Options options_;
  mutable std::shared_mutex mutex_;
  std::shared_ptr<const SceneLayout> scene_;
  std::deque<std::shared_ptr<const SceneLayout>> undo_;
  Camera camera_;
};

/// Content hash used as the scene ETag (quoted FNV-1a 64 hex).
std::string etag_for(std::string_view body);

void bind_routes(httplib::Server& server, Service& service);

/// Blocks serving on host:port until the process is stopped.
int serve(Service& service, const std::string& host, int port);

}  // namespace blobfield
