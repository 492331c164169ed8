// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#include "blobfield/cli.hpp"

#include "blobfield/bg3d.hpp"
#include "blobfield/edit.hpp"
#include "blobfield/error.hpp"
#include "blobfield/fit.hpp"
#include "blobfield/gradcheck.hpp"
#include "blobfield/render.hpp"
#include "blobfield/service.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace blobfield {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open for reading", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& bytes, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << bytes;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file || !(file << bytes)) throw Error(ErrorKind::Io, "cannot open for writing", path);
}

void report(std::ostream& err, std::string_view kind, std::string_view path, std::string_view message) {
  err << "error: kind=" << kind << " path=" << (path.empty() ? "-" : path) << " message=" << message << "\n";
}

struct CameraFlags {
  double yaw = 0.0;
  double pitch = 0.0;
  double radius = kDefaultRadius;
  double focal = kDefaultFocal;
  int res = 256;

  void attach(CLI::App* app, bool with_res) {
    app->add_option("--yaw", yaw, "Orbit yaw in radians");
    app->add_option("--pitch", pitch, "Orbit pitch in radians");
    app->add_option("--radius", radius, "Orbit radius");
    app->add_option("--focal", focal, "Focal length");
    if (with_res) app->add_option("--res", res, "Square render resolution");
  }
  [[nodiscard]] Camera camera(int width, int height) const { return Camera::make(yaw, pitch, radius, focal, width, height); }
};

/// Fit targets: `weights` [V, M+1, H, W] or [M+1, H, W], optional `cameras`
/// [V, 6] rows of (yaw, pitch, radius, focal, width, height), optional
/// `depth` [H, W] seen from the first view.
FitTarget load_fit_target(const Bg3dTensor& t, std::size_t blob_count, const CameraFlags& flags) {
  const Bg3dEntry& w = t.at("weights");
  std::uint32_t views = 1;
  std::vector<std::uint32_t> dims = w.dims;
  if (dims.size() == 4) {
    views = dims[0];
    dims.erase(dims.begin());
  }
  if (dims.size() != 3 || dims[0] != blob_count + 1)
    throw Error(ErrorKind::ShapeMismatch, "expected [V, M+1, H, W] or [M+1, H, W] with M the blob count", "weights");
  const std::uint32_t maps = dims[0], h = dims[1], wd = dims[2];

  FitTarget target;
  const Bg3dEntry* cams = t.find("cameras");
  if (cams && (cams->dims.size() != 2 || cams->dims[0] != views || cams->dims[1] != 6))
    throw Error(ErrorKind::ShapeMismatch, "expected [V, 6]", "cameras");
  for (std::uint32_t v = 0; v < views; ++v) {
    if (cams) {
      const float* row = cams->values.data() + static_cast<std::size_t>(v) * 6;
      target.cameras.push_back(Camera::make(row[0], row[1], row[2], row[3], static_cast<int>(row[4]),
                                            static_cast<int>(row[5])));
    } else {
      target.cameras.push_back(flags.camera(static_cast<int>(wd), static_cast<int>(h)));
    }
    std::vector<Map2D> stack;
    for (std::uint32_t m = 0; m < maps; ++m) {
      Map2D map(h, wd);
      const float* src = w.values.data() + (static_cast<std::size_t>(v) * maps + m) * h * wd;
      for (Eigen::Index k = 0; k < map.size(); ++k) map.data()[k] = src[k];
      stack.push_back(std::move(map));
    }
    target.weights.push_back(std::move(stack));
  }
  if (const Bg3dEntry* d = t.find("depth")) target.depth = DepthMap(entry_to_map(*d));
  return target;
}

ParamMask parse_mask(const std::vector<std::string>& names) {
  ParamMask mask{false, false, false, false};
  for (const std::string& n : names) {
    if (n == "center") mask.center = true;
    else if (n == "scale") mask.scale = true;
    else if (n == "aspect") mask.aspect = true;
    else if (n == "euler") mask.euler = true;
    else throw Error(ErrorKind::InvalidArgument, "expected center, scale, aspect or euler", "params");
  }
  return mask;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Differentiable blob-scene renderer", "blobfield"};
  app.require_subcommand(1);

  // sample
  auto* sample = app.add_subcommand("sample", "Write a randomly sampled scene");
  std::uint64_t sample_seed = 0;
  int sample_blobs = kDefaultBlobCount, feature_dim = kDefaultFeatureDim, style_dim = kDefaultStyleDim;
  std::string sample_out;
  sample->add_option("--seed", sample_seed, "Sampling seed");
  sample->add_option("--blobs", sample_blobs, "Blob count");
  sample->add_option("--feature-dim", feature_dim, "Feature vector length");
  sample->add_option("--style-dim", style_dim, "Style vector length");
  sample->add_option("-o,--output", sample_out, "Output path (stdout when omitted)");

  // render
  auto* render_cmd = app.add_subcommand("render", "Render a scene");
  std::string render_scene, render_mode = "layout", render_out;
  CameraFlags render_cam;
  RenderSettings settings;
  std::optional<std::uint64_t> stratified;
  render_cmd->add_option("--scene", render_scene, "Scene document")->required();
  render_cam.attach(render_cmd, true);
  render_cmd->add_option("--mode", render_mode, "layout, weights, features or styles");
  render_cmd->add_option("--samples", settings.samples_per_ray, "Samples per ray");
  render_cmd->add_option("--stratified-seed", stratified, "Jitter samples with this seed");
  render_cmd->add_option("--threads", settings.threads, "Worker threads (0 = all cores)");
  render_cmd->add_option("-o,--output", render_out, "Output path")->required();

  // edit
  auto* edit_cmd = app.add_subcommand("edit", "Apply one edit operation");
  std::string edit_scene, edit_op, edit_out;
  edit_cmd->add_option("--scene", edit_scene, "Scene document")->required();
  edit_cmd->add_option("--op", edit_op, "Edit operation document")->required();
  edit_cmd->add_option("-o,--output", edit_out, "Output path (stdout when omitted)");

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "Fit a scene to target weight maps");
  std::string fit_init, fit_target, fit_truth, fit_out;
  std::vector<std::string> fit_params{"center"};
  FitConfig fit_cfg;
  CameraFlags fit_cam;
  fit_cmd->add_option("--init", fit_init, "Initial scene document")->required();
  fit_cmd->add_option("--target", fit_target, "BG3D target tensor")->required();
  fit_cmd->add_option("--truth", fit_truth, "Ground-truth scene for center errors");
  fit_cmd->add_option("--steps", fit_cfg.steps, "Gradient steps");
  fit_cmd->add_option("--lr", fit_cfg.learning_rate, "Learning rate");
  fit_cmd->add_option("--depth-lambda", fit_cfg.depth_lambda, "Depth loss weight");
  fit_cmd->add_option("--params", fit_params, "Parameter groups to optimize")->delimiter(',');
  fit_cmd->add_option("--samples", fit_cfg.samples_per_ray, "Samples per ray");
  fit_cmd->add_option("--threads", fit_cfg.threads, "Worker threads (0 = all cores)");
  fit_cam.attach(fit_cmd, false);
  fit_cmd->add_option("-o,--output", fit_out, "Report path (stdout when omitted)");

  // gradcheck
  auto* gc_cmd = app.add_subcommand("gradcheck", "Compare analytic gradients with finite differences");
  GradcheckConfig gc;
  gc_cmd->add_option("--seed", gc.seed, "Trial seed");
  gc_cmd->add_option("--trials", gc.trials, "Number of random scenes");
  gc_cmd->add_option("--res", gc.resolution, "Render resolution");
  gc_cmd->add_option("--samples", gc.samples_per_ray, "Samples per ray");
  gc_cmd->add_option("--step", gc.step, "Central-difference step");
  gc_cmd->add_option("--threads", gc.threads, "Worker threads (0 = all cores)");
  double tolerance = 1e-4;
  gc_cmd->add_option("--tolerance", tolerance, "Failure threshold on the relative error");

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP editing service");
  Service::Options service_opts;
  int port = kDefaultPort;
  std::string host = "127.0.0.1";
  serve_cmd->add_option("--port", port, "Listening port");
  serve_cmd->add_option("--host", host, "Listening address");
  serve_cmd->add_option("--seed", service_opts.seed, "Seed of the initial scene");
  serve_cmd->add_option("--blobs", service_opts.blob_count, "Blob count of the initial scene");
  serve_cmd->add_option("--samples", service_opts.render.samples_per_ray, "Samples per ray");
  serve_cmd->add_option("--threads", service_opts.render.threads, "Worker threads (0 = all cores)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report(err, "Usage", "argv", e.what());
    return kExitValidation;
  }

  try {
    if (*sample) {
      write_output(sample_out, save_scene(sample_scene(sample_seed, sample_blobs, feature_dim, style_dim)), out);
    } else if (*render_cmd) {
      const auto mode = parse_render_mode(render_mode);
      if (!mode) throw Error(ErrorKind::InvalidArgument, "expected layout, weights, features or styles", "mode");
      if (render_cam.res > kMaxRenderResolution)
        throw Error(ErrorKind::InvalidArgument, "resolution exceeds 512", "res");
      settings.stratified_seed = stratified;
      const SceneLayout scene = load_scene(read_file(render_scene));
      write_output(render_out, render(scene, render_cam.camera(render_cam.res, render_cam.res), *mode, settings).bytes,
                   out);
    } else if (*edit_cmd) {
      const SceneLayout scene = load_scene(read_file(edit_scene));
      write_output(edit_out, save_scene(apply_edit(scene, parse_edit_op(read_file(edit_op)))), out);
    } else if (*fit_cmd) {
      fit_cfg.mask = parse_mask(fit_params);
      const SceneLayout init = load_scene(read_file(fit_init));
      const FitTarget target = load_fit_target(decode_bg3d(read_file(fit_target)), init.blobs.size(), fit_cam);
      std::optional<SceneLayout> truth;
      if (!fit_truth.empty()) truth = load_scene(read_file(fit_truth));
      write_output(fit_out, fit_scene(init, target, fit_cfg, truth).to_json(), out);
    } else if (*gc_cmd) {
      const GradcheckReport r = run_gradcheck(gc);
      out << r.to_json() << "\n";
      if (!(r.max_relative_error < tolerance)) {
        report(err, "GradientMismatch", r.worst.offending_parameter(),
               "max relative error " + std::to_string(r.max_relative_error) + " >= tolerance");
        return kExitInternal;
      }
    } else if (*serve_cmd) {
      Service service(service_opts);
      return serve(service, host, port) == 0 ? kExitOk : kExitInternal;
    }
  } catch (const Error& e) {
    report(err, to_string(e.kind()), e.path(), e.message());
    return is_validation_error(e.kind()) ? kExitValidation : kExitInternal;
  } catch (const std::exception& e) {
    report(err, "Internal", "", e.what());
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace blobfield
