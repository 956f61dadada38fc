/*
 * Copyright 2026 The autovis Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "autovis/calibration.hpp"
#include "autovis/classifier.hpp"
#include "autovis/detector.hpp"
#include "autovis/error.hpp"
#include "autovis/features.hpp"
#include "autovis/geometry.hpp"
#include "autovis/io.hpp"
#include "autovis/mapping.hpp"
#include "autovis/raster.hpp"
#include "autovis/segmentation.hpp"
#include "autovis/steering.hpp"
#include "json.hpp"

namespace autovis::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Files produced by a command, flushed to disk only after it succeeds.
class Outputs {
 public:
  void add(const fs::path& path, std::vector<std::uint8_t> bytes) {
    files_.emplace_back(path, std::move(bytes));
  }
  void add(const fs::path& path, const std::string& text) {
    add(path, std::vector<std::uint8_t>(text.begin(), text.end()));
  }
  void commit() const {
    for (const auto& [path, bytes] : files_) {
      if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
      }
      write_file_bytes(path.string(), bytes);
    }
  }

 private:
  std::vector<std::pair<fs::path, std::vector<std::uint8_t>>> files_;
};

std::string read_text(const std::string& path) {
  const auto bytes = read_file_bytes(path);
  return std::string(bytes.begin(), bytes.end());
}

fs::path sibling(const std::string& path, const std::string& ext) {
  fs::path p(path);
  p.replace_extension(ext);
  return p;
}

// Either write to `path` or, when no path was given, echo to stdout.
void emit(Outputs& outputs, const std::string& path, const std::string& text,
          std::string& stdout_buffer) {
  if (path.empty()) {
    stdout_buffer += text;
  } else {
    outputs.add(path, text);
  }
}

bool is_frame_file(const fs::path& p) {
  const auto ext = p.extension().string();
  return ext == ".pnm" || ext == ".ppm" || ext == ".pgm";
}

// --- option structs -------------------------------------------------------------

struct CalibrateArgs {
  std::string image;
  double distance = 0.0;
  double length = 0.0;
  std::string out;
  int edge_threshold = 60;
  double min_fill = 0.85;
  int blur_passes = 1;
};

struct SegmentArgs {
  std::string image;
  std::string method = "otsu";
  std::string out;
  std::string sidecar;
  int blur_passes = 1;
  int k = 2;
  int max_iter = 100;
  double tol = 1e-6;
};

struct LanesArgs {
  std::string image;
  std::string out;
  std::string annotated;
  double horizon = 0.6;
  double top_width = 0.2;
  int edge_threshold = 60;
  int min_votes = 20;
  int blur_passes = 1;
};

struct ExtractArgs {
  std::string patch_dir;
  std::string labels;
  std::string out;
  std::string layout;
  int hog_cell = 8;
  int hog_block = 2;
  int hog_bins = 9;
  int hist_bins = 32;
  int spatial = 32;
  bool hog_all_channels = false;
};

struct TrainArgs {
  std::string features;
  std::string out;
  std::string layout;
  double lambda = 1e-4;
  int epochs = 30;
};

struct DetectArgs {
  std::string frames;
  std::string model;
  std::string out;
  std::string bands;
  int threads = 1;
  double min_score = 0.0;
  int frame_memory = 1;
};

struct MapBuildArgs {
  std::string replay;
  std::string out;
  double cell_cm = 2.0;
  std::string method = "otsu";
  int blur_passes = 1;
  int k = 2;
  double patch_width = 80.0;
  double patch_depth = 60.0;
  double patch_offset = 20.0;
};

struct LocalizeArgs {
  std::string global;
  std::string partial;
  std::string out;
  int min_known = 50;
  double min_score = 0.6;
};

struct SmoothArgs {
  std::string angles;
  std::string out;
  double lambda = 5.0;
  double bin_width = 0.0;
};

// --- commands -------------------------------------------------------------------

void cmd_calibrate(const CalibrateArgs& a, Outputs& outputs, std::string& so) {
  geometry::RectangleConfig cfg;
  cfg.edge_threshold = a.edge_threshold;
  cfg.min_fill_ratio = a.min_fill;
  cfg.blur_passes = a.blur_passes;
  const auto img = read_pnm_file(a.image);
  const auto cam = calibration::calibrate_from_image(img, a.distance, a.length, cfg);
  emit(outputs, a.out, io::camera_to_json(cam), so);
}

segmentation::FloorConfig floor_config(const std::string& method, int blur, int k, int max_iter,
                                       double tol) {
  segmentation::FloorConfig cfg;
  cfg.method = segmentation::parse_method(method);
  cfg.blur_passes = blur;
  cfg.k = k;
  cfg.max_iter = max_iter;
  cfg.tol = tol;
  return cfg;
}

void cmd_segment(const SegmentArgs& a, Outputs& outputs) {
  const auto cfg = floor_config(a.method, a.blur_passes, a.k, a.max_iter, a.tol);
  const auto img = read_pnm_file(a.image);
  const auto mask = segmentation::segment_floor(img, cfg);
  outputs.add(a.out, write_pnm(segmentation::mask_to_raster(mask)));

  nlohmann::ordered_json side;
  side["num_labels"] = mask.num_labels;
  side["method"] = segmentation::method_name(cfg.method);
  side["params"] = {{"blur_passes", cfg.blur_passes}, {"k", cfg.k}, {"max_iter", cfg.max_iter},
                    {"tol", cfg.tol}};
  outputs.add(a.sidecar.empty() ? sibling(a.out, ".json") : fs::path(a.sidecar), side.dump(2) + "\n");
}

void cmd_lanes(const LanesArgs& a, Outputs& outputs) {
  geometry::LaneConfig cfg;
  cfg.horizon_frac = a.horizon;
  cfg.top_width_frac = a.top_width;
  cfg.edge_threshold = a.edge_threshold;
  cfg.min_votes = a.min_votes;
  cfg.blur_passes = a.blur_passes;
  auto img = read_pnm_file(a.image);
  const auto lane = geometry::detect_lane(img, cfg);
  outputs.add(a.out, io::lane_to_json(lane));
  if (lane.left.valid) geometry::draw_segment(img, lane.left);
  if (lane.right.valid) geometry::draw_segment(img, lane.right);
  outputs.add(a.annotated.empty() ? sibling(a.out, ".pnm") : fs::path(a.annotated), write_pnm(img));
}

features::FeatureConfig feature_config(const ExtractArgs& a) {
  features::FeatureConfig cfg;
  cfg.hog.cell_px = a.hog_cell;
  cfg.hog.block_cells = a.hog_block;
  cfg.hog.bins = a.hog_bins;
  cfg.hist_bins = a.hist_bins;
  cfg.spatial_px = a.spatial;
  cfg.hog_all_channels = a.hog_all_channels;
  cfg.validate();
  return cfg;
}

void cmd_extract(const ExtractArgs& a, Outputs& outputs) {
  const auto cfg = feature_config(a);
  std::istringstream labels(read_text(a.labels));
  std::string line;
  if (!std::getline(labels, line)) fail(ErrorKind::kParse, "labels CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "file,label") fail(ErrorKind::kParse, "labels CSV must start with the header file,label");

  io::FeatureTable table;
  std::optional<features::FeatureLayout> layout;
  int lineno = 1;
  while (std::getline(labels, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) fail(ErrorKind::kParse, "labels line " + std::to_string(lineno) + ": expected file,label");
    int label = 0;
    try {
      std::size_t used = 0;
      label = std::stoi(line.substr(comma + 1), &used);
      if (used != line.size() - comma - 1) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
      fail(ErrorKind::kParse, "labels line " + std::to_string(lineno) + ": label must be an integer");
    }
    const auto patch = read_pnm_file((fs::path(a.patch_dir) / line.substr(0, comma)).string());
    auto fv = features::extract_features(patch, cfg);
    if (layout && !(*layout == fv.layout)) fail(ErrorKind::kShape, "patches mix gray and colour");
    layout = fv.layout;
    table.labels.push_back(label);
    table.rows.push_back(std::move(fv.values));
  }
  if (table.rows.empty()) fail(ErrorKind::kShape, "labels CSV lists no patches");
  outputs.add(a.out, io::features_to_csv(table));
  outputs.add(a.layout.empty() ? sibling(a.out, ".layout.json") : fs::path(a.layout),
              io::layout_to_json(*layout));
}

void cmd_train(const TrainArgs& a, std::uint64_t seed, Outputs& outputs) {
  const auto table = io::features_from_csv(read_text(a.features));
  std::optional<features::FeatureLayout> layout;
  if (!a.layout.empty()) {
    layout = io::layout_from_json(read_text(a.layout));
  } else if (const auto guess = sibling(a.features, ".layout.json"); fs::exists(guess)) {
    layout = io::layout_from_json(read_text(guess.string()));
  }
  classifier::TrainConfig cfg;
  cfg.lambda = a.lambda;
  cfg.epochs = a.epochs;
  cfg.seed = seed;
  auto model = classifier::svm_train(table.rows, table.labels, cfg);
  if (layout) {
    if (layout->total != model.dim()) fail(ErrorKind::kShape, "feature layout does not match the CSV width");
    model.layout = layout;
  }
  outputs.add(a.out, io::model_to_json(model));
}

std::vector<detector::Band> read_bands(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text(path));
    std::vector<detector::Band> bands;
    for (const auto& b : j) {
      bands.push_back({b.at("y_top").get<int>(), b.at("y_bottom").get<int>(),
                       b.at("window_px").get<int>(), b.at("stride_px").get<int>()});
    }
    return bands;
  } catch (const json::exception& e) {
    fail(ErrorKind::kConfig, std::string("bands file: ") + e.what());
  }
}

void cmd_detect(const DetectArgs& a, Outputs& outputs) {
  const auto model = io::model_from_json(read_text(a.model));
  const auto bands = a.bands.empty() ? detector::default_bands() : read_bands(a.bands);
  detector::DetectConfig cfg;
  cfg.threads = a.threads;
  cfg.min_score = a.min_score;

  std::vector<fs::path> frames;
  const fs::path root(a.frames);
  if (fs::is_directory(root)) {
    for (const auto& entry : fs::directory_iterator(root)) {
      if (entry.is_regular_file() && is_frame_file(entry.path())) frames.push_back(entry.path());
    }
    std::sort(frames.begin(), frames.end());
  } else if (fs::is_regular_file(root)) {
    frames.push_back(root);
  } else {
    fail(ErrorKind::kIo, "no such frame file or directory: " + a.frames);
  }
  if (frames.empty()) fail(ErrorKind::kIo, "no .pnm frames in " + a.frames);

  std::map<std::pair<int, int>, detector::WindowPlan> plans;
  detector::FrameFuser fuser(a.frame_memory);
  for (const auto& path : frames) {
    auto frame = read_pnm_file(path.string());
    const auto key = std::make_pair(frame.width(), frame.height());
    auto it = plans.find(key);
    if (it == plans.end()) {
      it = plans.emplace(key, detector::plan_windows(frame.width(), frame.height(), bands,
                                                     detector::model_feature_config(model)))
               .first;
    }
    const auto dets =
        fuser.push(detector::detect_cars(frame, model, it->second, cfg), frame.width(), frame.height());
    const std::string stem = path.stem().string();
    outputs.add(fs::path(a.out) / (stem + ".json"), io::detections_to_json(stem, dets));
    detector::draw_detections(frame, dets);
    outputs.add(fs::path(a.out) / (stem + ".pnm"), write_pnm(frame));
  }
}

void cmd_map_build(const MapBuildArgs& a, Outputs& outputs) {
  mapping::ExploreConfig cfg;
  cfg.segmentation = floor_config(a.method, a.blur_passes, a.k, 100, 1e-6);
  cfg.patch_width_cm = a.patch_width;
  cfg.patch_depth_cm = a.patch_depth;
  cfg.patch_offset_cm = a.patch_offset;

  const fs::path base = fs::path(a.replay).parent_path();
  std::istringstream in(read_text(a.replay));
  mapping::OccupancyMap map(a.cell_cm);
  mapping::Pose pose;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string frame;
    mapping::Motion motion;
    try {
      const auto j = json::parse(line);
      frame = j.at("frame").get<std::string>();
      motion.forward_cm = j.value("forward_cm", 0.0);
      motion.rotate_deg = j.value("rotate_deg", 0.0);
    } catch (const json::exception& e) {
      fail(ErrorKind::kParse, "replay line " + std::to_string(lineno) + ": " + e.what());
    }
    const fs::path fp = fs::path(frame).is_absolute() ? fs::path(frame) : base / frame;
    auto step = mapping::explore_step(map, pose, read_pnm_file(fp.string()), motion, cfg);
    map = std::move(step.map);
    pose = step.pose;
  }
  if (map.empty()) fail(ErrorKind::kInsufficientMapContent, "insufficient map content: replay has no frames");
  outputs.add(a.out, mapping::write_map(map));
}

void cmd_localize(const LocalizeArgs& a, Outputs& outputs, std::string& so) {
  mapping::LocalizeConfig cfg;
  cfg.min_known = a.min_known;
  cfg.min_score = a.min_score;
  const auto global = mapping::read_map(read_file_bytes(a.global));
  const auto partial = mapping::read_map(read_file_bytes(a.partial));
  emit(outputs, a.out, io::localization_to_json(mapping::localize(global, partial, cfg)), so);
}

void cmd_smooth(const SmoothArgs& a, Outputs& outputs, std::string& so) {
  const auto series = steering::parse_series_csv(read_text(a.angles));
  auto smoothed = steering::smooth_series(series, a.lambda);
  if (a.bin_width > 0.0) {
    for (double& v : smoothed.angles) v = steering::bin_angle(v, a.bin_width);
  }
  emit(outputs, a.out, steering::format_series_csv(smoothed), so);
}

// --- config injection -------------------------------------------------------------

bool flag_given(const std::vector<std::string>& args, const std::string& name) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == name || a.rfind(name + "=", 0) == 0;
  });
}

std::string config_value(const std::string& key, const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return v.dump();
  throw UsageError("config key '" + key + "' must be a string, number or boolean");
}

// Turns config file entries into `--key=value` arguments for flags the user
// did not pass. Keys may sit at the top level or under the subcommand name.
std::vector<std::string> apply_config(const std::vector<std::string>& args, const CLI::App& app,
                                      const std::string& config_path) {
  const auto sub_it = std::find_if(args.begin(), args.end(),
                                   [](const std::string& a) { return !a.empty() && a[0] != '-'; });
  if (sub_it == args.end()) return args;
  const CLI::App* sub = nullptr;
  try {
    sub = app.get_subcommand(*sub_it);
  } catch (const CLI::OptionNotFound&) {
    return args;  // let the parser report the unknown subcommand
  }

  json cfg;
  try {
    cfg = json::parse(read_text(config_path));
  } catch (const json::exception& e) {
    throw UsageError(std::string("config file: ") + e.what());
  }
  if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");

  std::vector<std::pair<std::string, json>> entries;
  for (const auto& [key, value] : cfg.items()) {
    if (value.is_object()) {
      if (key != sub->get_name()) {
        if (!app.get_subcommand_no_throw(key)) throw UsageError("config section '" + key + "' names no subcommand");
        continue;
      }
      for (const auto& [k, v] : value.items()) entries.emplace_back(k, v);
    } else {
      entries.emplace_back(key, value);
    }
  }

  std::vector<std::string> out = args;
  for (const auto& [key, value] : entries) {
    const std::string flag = "--" + key;
    const bool known = sub->get_option_no_throw(flag) != nullptr || app.get_option_no_throw(flag) != nullptr;
    if (!known) {
      // Top-level keys may belong to other subcommands sharing the file.
      bool elsewhere = false;
      for (const auto* other : app.get_subcommands({})) elsewhere = elsewhere || other->get_option_no_throw(flag);
      if (!elsewhere) throw UsageError("config key '" + key + "' matches no option");
      continue;
    }
    if (flag_given(args, flag)) continue;
    out.push_back(flag + "=" + config_value(key, value));
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"autovis: classical vision tools for small autonomous vehicles", "autovis"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 42;
  std::string config_path;
  app.add_option("--seed", seed, "Seed for every random choice")->capture_default_str();
  app.add_option("--config", config_path, "JSON file with default option values");

  CalibrateArgs cal;
  auto* c = app.add_subcommand("calibrate", "Estimate the perceived focal length from a reference photo");
  c->add_option("image", cal.image, "Photo of a rectangle of known size (PNM)")->required();
  c->add_option("--distance", cal.distance, "Camera-to-object distance D in cm")->required()->check(CLI::PositiveNumber);
  c->add_option("--length", cal.length, "Object length L in cm")->required()->check(CLI::PositiveNumber);
  c->add_option("--out", cal.out, "Camera JSON path (stdout when omitted)");
  c->add_option("--edge-threshold", cal.edge_threshold, "Sobel magnitude threshold")->capture_default_str()->check(CLI::Range(0, 255));
  c->add_option("--min-fill", cal.min_fill, "Minimum filled-area to box ratio")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  c->add_option("--blur-passes", cal.blur_passes, "Gaussian blur passes")->capture_default_str()->check(CLI::NonNegativeNumber);

  SegmentArgs seg;
  auto* s = app.add_subcommand("segment", "Split floor from obstacles");
  s->add_option("image", seg.image, "Input image (PNM)")->required();
  s->add_option("--method", seg.method, "otsu, kmeans or watershed")->capture_default_str();
  s->add_option("--out", seg.out, "Mask PNM path")->required();
  s->add_option("--json", seg.sidecar, "Sidecar JSON path (default: mask path with .json)");
  s->add_option("--blur-passes", seg.blur_passes, "Gaussian blur passes")->capture_default_str()->check(CLI::NonNegativeNumber);
  s->add_option("--k", seg.k, "Clusters for kmeans")->capture_default_str()->check(CLI::Range(2, 256));
  s->add_option("--max-iter", seg.max_iter, "kmeans iteration cap")->capture_default_str()->check(CLI::PositiveNumber);
  s->add_option("--tol", seg.tol, "kmeans objective tolerance")->capture_default_str()->check(CLI::NonNegativeNumber);

  LanesArgs lan;
  auto* l = app.add_subcommand("lanes", "Find the left and right lane lines");
  l->add_option("image", lan.image, "Road frame (PNM)")->required();
  l->add_option("--out", lan.out, "Lane JSON path")->required();
  l->add_option("--annotated", lan.annotated, "Annotated frame path (default: JSON path with .pnm)");
  l->add_option("--horizon", lan.horizon, "Top of the region of interest as a fraction of height")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  l->add_option("--top-width", lan.top_width, "Region top width as a fraction of width")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  l->add_option("--edge-threshold", lan.edge_threshold, "Sobel magnitude threshold")->capture_default_str()->check(CLI::Range(0, 255));
  l->add_option("--min-votes", lan.min_votes, "Minimum Hough votes")->capture_default_str()->check(CLI::PositiveNumber);
  l->add_option("--blur-passes", lan.blur_passes, "Gaussian blur passes")->capture_default_str()->check(CLI::NonNegativeNumber);

  ExtractArgs ext;
  auto* e = app.add_subcommand("extract", "Compute feature vectors for labelled patches");
  e->add_option("patch_dir", ext.patch_dir, "Directory holding the patches")->required();
  e->add_option("--labels", ext.labels, "CSV with header file,label")->required();
  e->add_option("--out", ext.out, "Feature CSV path")->required();
  e->add_option("--layout", ext.layout, "Layout JSON path (default: <out>.layout.json)");
  e->add_option("--hog-cell", ext.hog_cell, "HOG cell size in pixels")->capture_default_str()->check(CLI::PositiveNumber);
  e->add_option("--hog-block", ext.hog_block, "HOG block size in cells")->capture_default_str()->check(CLI::PositiveNumber);
  e->add_option("--hog-bins", ext.hog_bins, "HOG orientation bins")->capture_default_str()->check(CLI::PositiveNumber);
  e->add_option("--hist-bins", ext.hist_bins, "Colour histogram bins per channel")->capture_default_str()->check(CLI::Range(1, 256));
  e->add_option("--spatial", ext.spatial, "Spatial feature size")->capture_default_str()->check(CLI::PositiveNumber);
  e->add_flag("--hog-all-channels", ext.hog_all_channels, "HOG on every colour channel instead of gray");

  TrainArgs tr;
  auto* t = app.add_subcommand("train", "Fit a linear SVM to a feature CSV");
  t->add_option("features", tr.features, "Feature CSV from extract")->required();
  t->add_option("--out", tr.out, "Model JSON path")->required();
  t->add_option("--layout", tr.layout, "Layout JSON (default: the one next to the CSV, if any)");
  t->add_option("--lambda", tr.lambda, "Regularisation strength")->capture_default_str()->check(CLI::PositiveNumber);
  t->add_option("--epochs", tr.epochs, "Passes over the data")->capture_default_str()->check(CLI::PositiveNumber);

  DetectArgs det;
  auto* d = app.add_subcommand("detect", "Find cars in road frames");
  d->add_option("frames", det.frames, "Frame directory or a single frame")->required();
  d->add_option("--model", det.model, "Model JSON from train")->required();
  d->add_option("--out", det.out, "Output directory")->required();
  d->add_option("--bands", det.bands, "JSON list of {y_top, y_bottom, window_px, stride_px}");
  d->add_option("--threads", det.threads, "Worker threads (0 = all cores)")->capture_default_str()->check(CLI::NonNegativeNumber);
  d->add_option("--min-score", det.min_score, "Keep windows scoring above this")->capture_default_str();
  d->add_option("--frame-memory", det.frame_memory, "Sum heatmaps over this many frames")->capture_default_str()->check(CLI::PositiveNumber);

  MapBuildArgs mb;
  auto* m = app.add_subcommand("map-build", "Build an occupancy map from a replay script");
  m->add_option("replay", mb.replay, "JSON lines {frame, forward_cm, rotate_deg}")->required();
  m->add_option("--out", mb.out, "Map file path")->required();
  m->add_option("--cell-cm", mb.cell_cm, "Map resolution in cm")->capture_default_str()->check(CLI::PositiveNumber);
  m->add_option("--method", mb.method, "Floor segmentation: otsu, kmeans or watershed")->capture_default_str();
  m->add_option("--blur-passes", mb.blur_passes, "Gaussian blur passes")->capture_default_str()->check(CLI::NonNegativeNumber);
  m->add_option("--k", mb.k, "Clusters for kmeans")->capture_default_str()->check(CLI::Range(2, 256));
  m->add_option("--patch-width", mb.patch_width, "Ground patch width in cm")->capture_default_str()->check(CLI::PositiveNumber);
  m->add_option("--patch-depth", mb.patch_depth, "Ground patch depth in cm")->capture_default_str()->check(CLI::PositiveNumber);
  m->add_option("--patch-offset", mb.patch_offset, "Distance to the patch near edge in cm")->capture_default_str()->check(CLI::PositiveNumber);

  LocalizeArgs loc;
  auto* lz = app.add_subcommand("localize", "Place a partial map inside a complete one");
  lz->add_option("global", loc.global, "Complete map file")->required();
  lz->add_option("partial", loc.partial, "Partial map file")->required();
  lz->add_option("--out", loc.out, "Pose JSON path (stdout when omitted)");
  lz->add_option("--min-known", loc.min_known, "Known cells required")->capture_default_str()->check(CLI::PositiveNumber);
  lz->add_option("--min-score", loc.min_score, "Lowest acceptable match score")->capture_default_str()->check(CLI::Range(0.0, 1.0));

  SmoothArgs sm;
  auto* so = app.add_subcommand("smooth", "Smooth a steering angle series");
  so->add_option("angles", sm.angles, "CSV with header frame_id,angle_deg")->required();
  so->add_option("--out", sm.out, "Output CSV path (stdout when omitted)");
  so->add_option("--lambda", sm.lambda, "Smoothness weight")->capture_default_str()->check(CLI::NonNegativeNumber);
  so->add_option("--bin-width", sm.bin_width, "Bin the smoothed angles to this width (0 = off)")->capture_default_str()->check(CLI::NonNegativeNumber);

  std::vector<std::string> args = raw_args;
  try {
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) {
        args = apply_config(args, app, args[i + 1]);
        break;
      }
      if (args[i].rfind("--config=", 0) == 0) {
        args = apply_config(args, app, args[i].substr(9));
        break;
      }
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& ex) {
    err << "usage error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& ex) {
    err << "usage error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const Error& ex) {
    err << "error (" << to_string(ex.kind()) << "): " << ex.what() << "\n";
    return ex.kind() == ErrorKind::kConfig ? kExitUsage : kExitRuntime;
  }

  Outputs outputs;
  std::string stdout_buffer;
  try {
    if (c->parsed()) cmd_calibrate(cal, outputs, stdout_buffer);
    else if (s->parsed()) cmd_segment(seg, outputs);
    else if (l->parsed()) cmd_lanes(lan, outputs);
    else if (e->parsed()) cmd_extract(ext, outputs);
    else if (t->parsed()) cmd_train(tr, seed, outputs);
    else if (d->parsed()) cmd_detect(det, outputs);
    else if (m->parsed()) cmd_map_build(mb, outputs);
    else if (lz->parsed()) cmd_localize(loc, outputs, stdout_buffer);
    else if (so->parsed()) cmd_smooth(sm, outputs, stdout_buffer);
    outputs.commit();
  } catch (const Error& ex) {
    err << "error (" << to_string(ex.kind()) << "): " << ex.what() << "\n";
    return (ex.kind() == ErrorKind::kConfig || ex.kind() == ErrorKind::kUsage) ? kExitUsage : kExitRuntime;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitRuntime;
  }
  out << stdout_buffer;
  return kExitOk;
}

}  // namespace autovis::cli
