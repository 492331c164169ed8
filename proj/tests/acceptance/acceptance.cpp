// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails. `acceptance AC-3 AC-8` runs a subset.

#include "blobfield/bg3d.hpp"
#include "blobfield/cli.hpp"
#include "blobfield/compositor.hpp"
#include "blobfield/edit.hpp"
#include "blobfield/fit.hpp"
#include "blobfield/gradients.hpp"
#include "blobfield/random.hpp"
#include "blobfield/render.hpp"
#include "blobfield/upsampler.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

namespace bf = blobfield;
using bf::Vec3;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(3);
  ss << v;
  return ss.str();
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("blobfield_acceptance_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int code = bf::dispatch(args, o, e);
  if (out) *out = o.str();
  if (code != 0) std::cerr << e.str();
  return code;
}

bf::Camera random_camera(bf::Rng& rng, int w, int h) {
  return bf::Camera::make(rng.uniform(-3.1, 3.1), rng.uniform(-1.2, 1.2), rng.uniform(2.5, 4.0), rng.uniform(1.5, 3.0),
                          w, h);
}

Outcome ac1_gradients() {
  const auto start = Clock::now();
  std::string out;
  const int code = run_cli({"gradcheck", "--seed", "1", "--trials", "100"}, &out);
  const double elapsed = seconds_since(start);
  const auto doc = nlohmann::json::parse(out);
  const double err = doc["max_relative_error"].get<double>();
  return {code == 0 && err < 1e-4 && elapsed < 60.0,
          "max relative error " + fmt(err) + " over " + std::to_string(doc["checked"].get<int>()) + " parameters (" +
              std::to_string(doc["redrawn"].get<int>()) + " tie scenes redrawn), " + fmt(elapsed) + " s"};
}

Outcome ac2_volume_identity() {
  bf::Rng rng(2);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const bf::SceneLayout s = bf::sample_scene(rng.next(), 1, 1, 1);
    const bf::Camera cam = random_camera(rng, 32, 32);
    bf::SamplingConfig cfg = bf::SamplingConfig::for_camera(cam, 2 + static_cast<int>(rng.next() % 63));
    if (i % 2) cfg.stratified_seed = rng.next();
    const int px = static_cast<int>(rng.next() % 32), py = static_cast<int>(rng.next() % 32);
    const bf::Ray ray = bf::ray_for_pixel(cam, px, py);
    const auto index = static_cast<std::uint64_t>(i);
    const bf::RaySamples samples = bf::sample_ray(ray, cfg, index);
    std::vector<double> sigma;
    double tau = 0.0;
    for (std::size_t k = 0; k < samples.points.size(); ++k) {
      sigma.push_back(bf::density(samples.points[k], s.blobs[0], s.sharpness));
      tau += sigma.back() * samples.deltas[k];
    }
    const double closed = 1.0 - std::exp(-tau);
    worst = std::max(worst, std::abs(bf::accumulate_opacity(sigma, samples.deltas) - closed));
    worst = std::max(worst, std::abs(bf::opacity_along_ray(s.blobs[0], s.sharpness, ray, cfg, index) - closed));
  }
  return {worst <= 1e-12, "max |front-to-back - closed form| = " + fmt(worst) + " over 10^4 rays"};
}

Outcome ac3_partition_of_unity() {
  bf::Rng rng(3);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const bf::SceneLayout s = bf::sample_scene(rng.next(), 1 + i % 10, 4, 2);
    const bf::Camera cam = random_camera(rng, 32, 32);
    const bf::SceneComposite c = bf::composite_scene(s, cam, bf::SamplingConfig::for_camera(cam));
    bf::Map2D sum = c.weights.background;
    for (const bf::Map2D& w : c.weights.blobs) sum += w;
    worst = std::max(worst, (sum.array() - 1.0).abs().maxCoeff());
  }
  return {worst <= 1e-12, "max |sum w - 1| = " + fmt(worst) + " over 100 scenes x 1024 pixels"};
}

Outcome ac4_occlusion_flip() {
  // Two identical blobs on the principal ray; the nearer one projects larger.
  bf::SceneLayout s = bf::sample_scene(4, 2, 4, 2);
  for (bf::Blob& b : s.blobs) {
    b.scale = 5.0;
    b.aspect = Vec3(0.9, 0.7, 0.8);
    b.euler = Vec3(0.2, -0.1, 0.3);
  }
  s.blobs[0].center = Vec3(0.5, 0.5, 0.3);
  s.blobs[1].center = Vec3(0.5, 0.5, 0.7);
  const bf::Camera cam = bf::Camera::make(0.0, 0.0, 3.0, 2.5, 64, 64);
  const bf::SamplingConfig cfg = bf::SamplingConfig::for_camera(cam);
  const bf::SceneComposite before = bf::composite_scene(s, cam, cfg);
  std::swap(s.blobs[0].center.z(), s.blobs[1].center.z());
  const bf::SceneComposite after = bf::composite_scene(s, cam, cfg);

  int overlap = 0, flipped = 0;
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) {
      if (before.opacity[0](y, x) < 1e-3 || before.opacity[1](y, x) < 1e-3) continue;
      ++overlap;
      const int a = before.weights.blobs[0](y, x) > before.weights.blobs[1](y, x) ? 0 : 1;
      const int b = after.weights.blobs[0](y, x) > after.weights.blobs[1](y, x) ? 0 : 1;
      if (a != b) ++flipped;
    }
  }
  return {overlap > 100 && flipped == overlap,
          "argmax flipped at " + std::to_string(flipped) + " of " + std::to_string(overlap) + " overlap pixels"};
}

Outcome ac5_foreshortening() {
  const bf::Camera cam = bf::Camera::make(0.0, 0.0, 3.0, 2.5, 256, 256);
  auto separation = [&](double depth) {
    const Vec3 center = cam.position() + depth * cam.forward();
    const bf::PixelCoord l = bf::project(cam, center - 0.1 * cam.right());
    const bf::PixelCoord r = bf::project(cam, center + 0.1 * cam.right());
    return std::hypot(r.u - l.u, r.v - l.v);
  };
  const double near = separation(2.0), far = separation(4.0);
  const double ratio = far / near;

  // The rendered footprint (opacity mass, sqrt) follows the same law.
  bf::SceneLayout s = bf::sample_scene(5, 1, 4, 2);
  s.blobs[0].aspect = Vec3::Ones();
  bf::SamplingConfig cfg;
  cfg.near = 0.5;
  cfg.far = 6.0;
  cfg.samples = 256;
  auto footprint = [&](double depth) {
    s.blobs[0].center = cam.position() + depth * cam.forward();
    return std::sqrt(bf::opacity_map(s.blobs[0], s.sharpness, cam, cfg).sum());
  };
  const double rendered = footprint(4.0) / footprint(2.0);
  return {std::abs(ratio - 0.5) <= 0.005,
          "probe separation " + fmt(near) + " px -> " + fmt(far) + " px, ratio " + fmt(ratio) +
              " (rendered footprint ratio " + fmt(rendered) + ")"};
}

Outcome ac6_upsampler_zero_init() {
  bf::Rng rng(6);
  int identical = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto h = 1 + static_cast<Eigen::Index>(rng.next() % 8), w = 1 + static_cast<Eigen::Index>(rng.next() % 8),
               c = 1 + static_cast<Eigen::Index>(rng.next() % 4), d = 1 + static_cast<Eigen::Index>(rng.next() % 6);
    bf::Grid x(h, w, c);
    for (Eigen::Index k = 0; k < x.data().size(); ++k) x.data().data()[k] = rng.normal();
    bf::UpsamplerParams p = bf::UpsamplerParams::zero_init(c, d);
    for (Eigen::Index k = 0; k < p.mod_affine_w.size(); ++k) p.mod_affine_w.data()[k] = rng.normal();
    for (Eigen::Index k = 0; k < p.mod_affine_b.size(); ++k) p.mod_affine_b(k) = rng.normal();
    const bf::VecX f = bf::VecX::NullaryExpr(d, [&] { return rng.normal(); });
    const bf::Grid up = bf::upsample_block(x, p, f);
    const bf::Grid bl = bf::bilinear_2x(x);
    if (up.height() == bl.height() && up.width() == bl.width() && up.channels() == bl.channels() &&
        std::memcmp(up.data().data(), bl.data().data(), sizeof(double) * static_cast<std::size_t>(bl.data().size())) == 0)
      ++identical;
  }
  return {identical == 1000, std::to_string(identical) + " of 1000 grids bit-identical to bilinear_2x"};
}

Outcome ac7_determinism() {
  const std::string scene = temp_path("scene.json");
  if (run_cli({"sample", "--seed", "7", "-o", scene}) != 0) return {false, "sample failed"};
  struct Case {
    std::string mode;
    std::string res;
  };
  int compared = 0, equal = 0;
  for (const Case& c : {Case{"layout", "256"}, Case{"weights", "256"}, Case{"features", "64"}, Case{"styles", "64"}}) {
    std::vector<std::string> outputs;
    for (const char* threads : {"1", "8", "8"}) {
      const std::string path = temp_path(c.mode + "_" + threads + "_" + std::to_string(outputs.size()));
      if (run_cli({"render", "--scene", scene, "--yaw", "0.4", "--pitch", "0.2", "--res", c.res, "--mode", c.mode,
                   "--threads", threads, "-o", path}) != 0)
        return {false, "render " + c.mode + " failed"};
      outputs.push_back(slurp(path));
    }
    for (std::size_t k = 1; k < outputs.size(); ++k) {
      ++compared;
      if (!outputs[0].empty() && outputs[k] == outputs[0]) ++equal;
    }
  }
  return {equal == compared, std::to_string(equal) + " of " + std::to_string(compared) +
                                 " repeated / thread-varied renders byte-identical (layout, weights, features, styles)"};
}

Outcome ac8_inverse_rendering() {
  const auto start = Clock::now();
  const bf::SceneLayout truth = bf::sample_scene(8, 3, 8, 4);
  bf::SceneLayout init = truth;
  bf::Rng rng(80);
  for (bf::Blob& b : init.blobs) {
    const Vec3 dir = Vec3(rng.normal(), rng.normal(), rng.normal()).normalized();
    b.center += 0.05 * dir;
  }
  bf::FitTarget target;
  target.cameras = {bf::Camera::make(0.0, 0.0, 3.0, 2.5, 64, 64)};
  target.weights = {bf::render_weight_stack(truth, target.cameras[0], bf::kDefaultSamplesPerRay)};
  bf::FitConfig cfg;
  cfg.steps = 500;
  cfg.learning_rate = 0.5;
  const bf::FitReport r = bf::fit_scene(init, target, cfg, truth);
  const double elapsed = seconds_since(start);
  double worst = 0.0;
  for (double e : r.center_error) worst = std::max(worst, e);
  return {worst < 0.01 && elapsed < 60.0, "max center error " + fmt(worst) + " (loss " + fmt(r.loss_trace.front()) +
                                              " -> " + fmt(r.final_loss()) + "), " + fmt(elapsed) + " s"};
}

Outcome ac9_depth_loss() {
  bf::Rng rng(9);
  double worst_zero = 0.0, worst_rel = 0.0;
  int checks = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 1 + trial % 5;
    bf::SceneLayout s = bf::sample_scene(rng.next(), m, 4, 2);
    const bf::Camera cam = bf::Camera::make(rng.uniform(-1, 1), rng.uniform(-0.5, 0.5), 3.0, 2.5, 128, 128);
    bf::Map2D depth = bf::Map2D::Constant(128, 128, 3.0);
    std::set<std::pair<int, int>> used;
    bool distinct = true;
    auto pixel_of = [&](const Vec3& c) {
      const bf::PixelCoord uv = bf::project(cam, c);
      return std::make_pair(static_cast<int>(std::floor(uv.v)), static_cast<int>(std::floor(uv.u)));
    };
    for (const bf::Blob& b : s.blobs) {
      const auto px = pixel_of(b.center);
      distinct &= used.insert(px).second;
      depth(px.first, px.second) = bf::centroid_depth(cam, b.center);
    }
    if (!distinct) continue;
    const bf::DepthMap map(depth);
    worst_zero = std::max(worst_zero, std::abs(bf::depth_loss(s, cam, map)));

    const int i = static_cast<int>(rng.next() % static_cast<std::uint64_t>(m));
    for (double eps : {1e-2, 3e-3, 1e-3}) {
      bf::SceneLayout moved = s;
      moved.blobs[static_cast<std::size_t>(i)].center += eps * cam.forward();
      if (pixel_of(moved.blobs[static_cast<std::size_t>(i)].center) != pixel_of(s.blobs[static_cast<std::size_t>(i)].center))
        continue;
      const double expected = eps * eps / m;
      worst_rel = std::max(worst_rel, std::abs(bf::depth_loss(moved, cam, map) - expected) / expected);
      ++checks;
    }
  }
  return {worst_zero <= 1e-12 && worst_rel <= 1e-6 && checks >= 30,
          "loss at truth " + fmt(worst_zero) + ", max relative deviation from eps^2/M " + fmt(worst_rel) + " over " +
              std::to_string(checks) + " perturbations"};
}

Outcome ac10_edit_locality() {
  const bf::SceneLayout s = bf::sample_scene(10, 10, 16, 8);
  const auto blob_bytes = [](const bf::SceneLayout& scene) {
    std::vector<std::string> out;
    for (const auto& b : nlohmann::ordered_json::parse(bf::save_scene(scene))["blobs"]) out.push_back(b.dump());
    return out;
  };
  const auto base = blob_bytes(s);
  std::vector<double> style(8, 0.25);
  const std::vector<bf::EditOp> ops{{bf::EditKind::Move, 3, std::nullopt, {0.05, -0.02, 0.01}},
                                    {bf::EditKind::Remove, 3, std::nullopt, {}},
                                    {bf::EditKind::Restore, 3, std::nullopt, {}},
                                    {bf::EditKind::Resize, 3, std::nullopt, {0.7}},
                                    {bf::EditKind::Reshape, 3, std::nullopt, {0.3, 0.6, 0.9}},
                                    {bf::EditKind::Rotate, 3, std::nullopt, {0.1, 0.2, 0.3}},
                                    {bf::EditKind::Restyle, 3, std::nullopt, style},
                                    {bf::EditKind::Duplicate, 3, std::nullopt, {0.02, 0.0, 0.0}},
                                    {bf::EditKind::Swap, 3, 6, {}}};
  int local = 0;
  for (const bf::EditOp& op : ops) {
    const auto after = blob_bytes(bf::apply_edit(s, op));
    bool ok = after.size() >= base.size();
    for (std::size_t i = 0; ok && i < base.size(); ++i) {
      const bool targeted = static_cast<int>(i) == op.target || (op.target2 && static_cast<int>(i) == *op.target2);
      if (!targeted && after[i] != base[i]) ok = false;
    }
    if (ok) ++local;
  }

  const bf::Camera cam = bf::Camera::make(0.3, 0.1, 3.0, 2.5, 128, 128);
  const bf::RenderSettings settings;
  const std::string before = bf::render(s, cam, bf::RenderMode::Layout, settings).bytes;
  const std::string after = bf::render(bf::apply_edit(s, ops[6]), cam, bf::RenderMode::Layout, settings).bytes;
  const bool restyle_invariant = before == after;
  return {local == static_cast<int>(ops.size()) && restyle_invariant,
          std::to_string(local) + " of " + std::to_string(ops.size()) + " edit kinds local; restyle layout PNG " +
              (restyle_invariant ? "identical" : "changed")};
}

Outcome ac11_round_trips() {
  bf::Rng rng(11);
  int scenes = 0, tensors = 0;
  for (int i = 0; i < 100; ++i) {
    bf::SceneLayout s = bf::sample_scene(rng.next(), 1 + i % 12, 1 + i % 9, 1 + i % 5);
    for (bf::Blob& b : s.blobs) b.active = rng.uniform() < 0.7;
    s.background_feature = bf::VecX::NullaryExpr(s.feature_dim, [&] { return rng.normal(); });
    s.sharpness = rng.uniform(0.005, 0.05);
    const std::string text = bf::save_scene(s);
    const bf::SceneLayout back = bf::load_scene(text);
    if (back == s && bf::save_scene(back) == text) ++scenes;

    bf::Bg3dTensor t;
    for (int e = 0; e < 1 + i % 4; ++e) {
      bf::Bg3dEntry entry{"t" + std::to_string(e), {}, {}};
      std::size_t n = 1;
      for (int d = 0; d < 1 + (i + e) % 4; ++d) {
        entry.dims.push_back(1 + static_cast<std::uint32_t>(rng.next() % 5));
        n *= entry.dims.back();
      }
      for (std::size_t k = 0; k < n; ++k) entry.values.push_back(static_cast<float>(rng.normal()));
      t.add(std::move(entry));
    }
    const std::string bytes = bf::encode_bg3d(t);
    const bf::Bg3dTensor decoded = bf::decode_bg3d(bytes);
    if (decoded == t && bf::encode_bg3d(decoded) == bytes) ++tensors;
  }
  return {scenes == 100 && tensors == 100,
          std::to_string(scenes) + "/100 scene documents and " + std::to_string(tensors) + "/100 BG3D tensors exact"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC-1", ac1_gradients},         {"AC-2", ac2_volume_identity},  {"AC-3", ac3_partition_of_unity},
      {"AC-4", ac4_occlusion_flip},    {"AC-5", ac5_foreshortening},   {"AC-6", ac6_upsampler_zero_init},
      {"AC-7", ac7_determinism},       {"AC-8", ac8_inverse_rendering}, {"AC-9", ac9_depth_loss},
      {"AC-10", ac10_edit_locality},   {"AC-11", ac11_round_trips}};
  const std::set<std::string> only(argv + 1, argv + argc);
  int failed = 0;
  for (const auto& [id, check] : criteria) {
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << id << "  " << o.detail << std::endl;
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
