// Copyright 2026 The OOSIS Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Command-line driver: synthesize scenes, run the occlusion-order
// labeling, evaluate predictions, and inspect boundary fields.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "oosis/boundary.hpp"
#include "oosis/core.hpp"
#include "oosis/energy.hpp"
#include "oosis/instances.hpp"
#include "oosis/metrics.hpp"
#include "oosis/moves.hpp"
#include "oosis/serial.hpp"
#include "oosis/synth.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

std::string default_out_dir() {
  const char* env = std::getenv("OOSIS_OUT_DIR");
  return env && *env ? env : ".";
}

fs::path ensure_dir(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  return p;
}

struct LabelParams {
  double lambda = oosis::kDefaultLambda;
  double mu = oosis::kDefaultMu;
  double tau = oosis::kDefaultTau;
  std::string algo = "jump";
  std::uint32_t l_max = 8;
};

void run_label_pipeline(const std::string& semantic_path,
                        const std::string& boundary_path, const LabelParams& lp,
                        const fs::path& out) {
  oosis::SemanticField semantic = oosis::load_semantic(semantic_path);
  oosis::OrientedBoundaryField boundary = oosis::load_boundary(boundary_path);
  if (semantic.grid != boundary.grid)
    throw oosis::Error(oosis::errc::bad_dimensions,
                       "semantic and boundary grids differ");
  oosis::ComposedBoundary composed = oosis::compose(boundary);
  oosis::ComposedBoundary thinned = oosis::nms_thin(composed, lp.tau);
  oosis::OcclusionPairSet pairs = oosis::extract_pairs(thinned, lp.tau);
  oosis::EnergyParams params{
      lp.lambda, lp.mu,
      oosis::default_c_inf(semantic.grid, pairs.size(), lp.lambda, lp.mu)};
  oosis::EnergyProblem problem(std::move(semantic), std::move(pairs), params);

  oosis::OptimizeResult result =
      lp.algo == "jump" ? oosis::optimize_jump(problem)
                        : oosis::expansion_cycle_increasing(problem, lp.l_max);

  oosis::InstanceSet instances =
      oosis::extract_instances(result.labeling, problem.semantic);
  // confidences come from the raw (pre-suppression) boundary probabilities
  instances = oosis::adhoc_confidence(instances, composed);
  oosis::OcclusionGraph graph =
      oosis::graph_from_labeling(instances, result.labeling);

  oosis::save_field(result.labeling, (out / "labeling.olbl").string());
  oosis::write_text_file((out / "instances.json").string(),
                         oosis::instances_to_json(instances));
  oosis::write_text_file((out / "graph.json").string(),
                         oosis::graph_to_json(graph));
  oosis::write_text_file((out / "trace.json").string(),
                         oosis::trace_to_json(result.trace));
  oosis::write_text_file(
      (out / "depth.pgm").string(),
      oosis::pgm_bytes(result.labeling.grid,
                       oosis::depth_map(instances, result.labeling)));
}

int run(int argc, char** argv) {
  CLI::App app{"Occlusion-ordered semantic instance segmentation"};
  app.require_subcommand(1);

  // --- synth ---------------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "generate a synthetic layered scene");
  oosis::SceneSpec spec;
  int height = 64, width = 64;
  std::string shapes = "mixed";
  std::string synth_out = default_out_dir();
  synth->add_option("--seed", spec.seed, "rng seed");
  synth->add_option("--instances", spec.instances, "number of instances");
  synth->add_option("--classes", spec.classes, "semantic classes incl. background");
  synth->add_option("--height", height, "grid height");
  synth->add_option("--width", width, "grid width");
  synth->add_option("--eta", spec.eta, "noise level in [0,1)");
  synth->add_option("--shapes", shapes, "rectangles|ellipses|mixed");
  synth->add_option("--out", synth_out, "output directory");

  // --- label ---------------------------------------------------------------
  auto* label = app.add_subcommand("label", "occlusion-order labeling pipeline");
  LabelParams lp;
  std::string semantic_path, boundary_path, batch_dir;
  std::string label_out = default_out_dir();
  int jobs = 1;
  label->add_option("--semantic", semantic_path, "semantic OGF file");
  label->add_option("--boundary", boundary_path, "oriented boundary OGF file");
  label->add_option("--batch", batch_dir,
                    "directory of scene subdirectories with semantic.ogf and "
                    "boundary.ogf; outputs are written next to the inputs");
  label->add_option("--lambda", lp.lambda, "smoothness weight")
      ->default_val(oosis::kDefaultLambda);
  label->add_option("--mu", lp.mu, "occlusion weight")->default_val(oosis::kDefaultMu);
  label->add_option("--tau", lp.tau, "boundary threshold")
      ->default_val(oosis::kDefaultTau);
  label->add_option("--algo", lp.algo, "jump|expansion1")->default_val("jump");
  label->add_option("--lmax", lp.l_max, "labels for the expansion cycle")
      ->default_val(8);
  label->add_option("--jobs", jobs, "parallel scenes in batch mode")->default_val(1);
  label->add_option("--out", label_out, "output directory");

  // --- eval ----------------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "evaluate predictions against GT");
  std::string pred_inst_path, pred_graph_path, gt_inst_path, gt_graph_path;
  std::string eval_out = default_out_dir();
  bool decycle = false;
  std::uint64_t decycle_seed = 0;
  eval->add_option("--pred-instances", pred_inst_path, "predicted instances JSON")
      ->required();
  eval->add_option("--pred-graph", pred_graph_path, "predicted graph JSON")
      ->required();
  eval->add_option("--gt-instances", gt_inst_path, "ground-truth instances JSON")
      ->required();
  eval->add_option("--gt-graph", gt_graph_path, "ground-truth graph JSON")
      ->required();
  auto* decycle_opt =
      eval->add_option("--decycle", decycle_seed, "decycle the predicted graph first");
  eval->add_option("--out", eval_out, "output directory");

  // --- boundary ------------------------------------------------------------
  auto* bnd = app.add_subcommand("boundary", "oriented boundary utilities");
  bnd->require_subcommand(1);
  std::string bnd_out = default_out_dir();

  auto* bnd_gt = bnd->add_subcommand("gt", "annotation to GT boundary field");
  std::string annotation_path;
  bnd_gt->add_option("--annotation", annotation_path, "annotation JSON")->required();
  bnd_gt->add_option("--out", bnd_out, "output directory");

  auto* bnd_check = bnd->add_subcommand(
      "check-identity", "compare both boundary cross-entropy decompositions");
  std::string check_gt_path, check_pred_path;
  std::uint64_t check_seed = 0;
  int check_h = 8, check_w = 8;
  bnd_check->add_option("--gt", check_gt_path, "GT boundary OGF");
  bnd_check->add_option("--pred", check_pred_path, "predicted boundary OGF");
  bnd_check->add_option("--seed", check_seed, "random fields when no files given");
  bnd_check->add_option("--height", check_h, "random field height");
  bnd_check->add_option("--width", check_w, "random field width");

  auto* bnd_loss = bnd->add_subcommand(
      "loss", "joint semantic + boundary + orientation cross-entropy");
  std::string loss_gt_semantic, loss_semantic, loss_gt_boundary, loss_boundary;
  double bce_weight = oosis::kDefaultBceWeight;
  bnd_loss->add_option("--gt-semantic", loss_gt_semantic, "one-hot semantic OGF")
      ->required();
  bnd_loss->add_option("--semantic", loss_semantic, "predicted semantic OGF")
      ->required();
  bnd_loss->add_option("--gt-boundary", loss_gt_boundary, "binary boundary OGF")
      ->required();
  bnd_loss->add_option("--boundary", loss_boundary, "predicted boundary OGF")
      ->required();
  bnd_loss->add_option("--w", bce_weight, "boundary cross-entropy weight")
      ->default_val(oosis::kDefaultBceWeight);

  auto* bnd_angles = bnd->add_subcommand("angles", "per-boundary-pixel angle CSV");
  std::string angles_field_path;
  double angles_tau = oosis::kDefaultTau;
  bnd_angles->add_option("--boundary", angles_field_path, "boundary OGF")->required();
  bnd_angles->add_option("--tau", angles_tau, "boundary threshold")
      ->default_val(oosis::kDefaultTau);
  bnd_angles->add_option("--out", bnd_out, "output directory");

  auto* bnd_thin = bnd->add_subcommand("thin", "non-maximum suppression");
  std::string thin_field_path;
  double thin_tau = oosis::kDefaultTau;
  bnd_thin->add_option("--boundary", thin_field_path, "boundary OGF")->required();
  bnd_thin->add_option("--tau", thin_tau, "boundary threshold")
      ->default_val(oosis::kDefaultTau);
  bnd_thin->add_option("--out", bnd_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  if (synth->parsed()) {
    spec.grid = oosis::Grid2D(height, width);
    if (shapes == "rectangles")
      spec.shapes = oosis::ShapeFamily::rectangles;
    else if (shapes == "ellipses")
      spec.shapes = oosis::ShapeFamily::ellipses;
    else if (shapes == "mixed")
      spec.shapes = oosis::ShapeFamily::mixed;
    else
      throw oosis::Error(oosis::errc::bad_argument, "unknown shape family");
    oosis::Scene scene = oosis::generate_scene(spec);
    fs::path out = ensure_dir(synth_out);
    oosis::write_text_file((out / "annotation.json").string(),
                           oosis::annotation_to_json(scene.annotation));
    oosis::save_field(scene.semantic, (out / "semantic.ogf").string());
    oosis::save_field(scene.boundary, (out / "boundary.ogf").string());
    oosis::write_text_file(
        (out / "gt_instances.json").string(),
        oosis::instances_to_json(oosis::instances_from_annotation(scene.annotation)));
    oosis::write_text_file(
        (out / "gt_graph.json").string(),
        oosis::graph_to_json(oosis::graph_from_annotation(scene.annotation)));
    return 0;
  }

  if (label->parsed()) {
    if (lp.algo != "jump" && lp.algo != "expansion1")
      throw oosis::Error(oosis::errc::bad_argument, "--algo must be jump|expansion1");
    if (batch_dir.empty()) {
      if (semantic_path.empty() || boundary_path.empty())
        throw oosis::Error(oosis::errc::bad_argument,
                           "need --semantic and --boundary (or --batch)");
      run_label_pipeline(semantic_path, boundary_path, lp, ensure_dir(label_out));
      return 0;
    }
    std::vector<fs::path> scenes;
    for (const auto& entry : fs::directory_iterator(batch_dir))
      if (entry.is_directory() && fs::exists(entry.path() / "semantic.ogf"))
        scenes.push_back(entry.path());
    std::sort(scenes.begin(), scenes.end());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex error_mutex;
    auto worker = [&] {
      for (;;) {
        std::size_t k = next.fetch_add(1);
        if (k >= scenes.size() || failed.load()) return;
        try {
          run_label_pipeline((scenes[k] / "semantic.ogf").string(),
                             (scenes[k] / "boundary.ogf").string(), lp, scenes[k]);
        } catch (const std::exception& ex) {
          std::lock_guard<std::mutex> lock(error_mutex);
          failed = true;
          if (first_error.empty()) first_error = ex.what();
        }
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < std::max(1, jobs); ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (failed)
      throw oosis::Error(oosis::errc::io_failure, "batch failed: " + first_error);
    return 0;
  }

  if (eval->parsed()) {
    oosis::InstanceSet pred =
        oosis::instances_from_json(oosis::read_text_file(pred_inst_path));
    oosis::InstanceSet gt =
        oosis::instances_from_json(oosis::read_text_file(gt_inst_path));
    oosis::OcclusionGraph pred_graph =
        oosis::graph_from_json(oosis::read_text_file(pred_graph_path));
    oosis::OcclusionGraph gt_graph =
        oosis::graph_from_json(oosis::read_text_file(gt_graph_path));
    decycle = decycle_opt->count() > 0;
    if (decycle) pred_graph = oosis::random_decycle(pred_graph, decycle_seed);
    fs::path out = ensure_dir(eval_out);
    oosis::write_text_file(
        (out / "oair_iou.csv").string(),
        oosis::oair_csv(oosis::oair_curve(pred, gt, pred_graph, gt_graph,
                                          oosis::SweepMode::iou)));
    oosis::write_text_file(
        (out / "oair_confidence.csv").string(),
        oosis::oair_csv(oosis::oair_curve(pred, gt, pred_graph, gt_graph,
                                          oosis::SweepMode::confidence)));
    std::ostringstream metrics;
    metrics.precision(17);
    metrics << "{\n";
    metrics << "  \"average_precision\": "
            << oosis::average_precision(pred, gt, oosis::coco_iou_thresholds())
            << ",\n";
    metrics << "  \"cycle_fraction\": " << oosis::cycle_stats(pred_graph) << ",\n";
    metrics << "  \"weighted_coverage\": " << oosis::weighted_coverage(gt, pred)
            << "\n}\n";
    oosis::write_text_file((out / "metrics.json").string(), metrics.str());
    return 0;
  }

  if (bnd_gt->parsed()) {
    oosis::InstanceAnnotation a =
        oosis::annotation_from_json(oosis::read_text_file(annotation_path));
    fs::path out = ensure_dir(bnd_out);
    oosis::save_field(oosis::gt_from_annotation(a),
                      (out / "gt_boundary.ogf").string());
    return 0;
  }

  if (bnd_check->parsed()) {
    oosis::OrientedBoundaryField gt_field, pred_field;
    if (!check_gt_path.empty() && !check_pred_path.empty()) {
      gt_field = oosis::load_boundary(check_gt_path);
      pred_field = oosis::load_boundary(check_pred_path);
    } else {
      // random binary GT plus a random prediction on the same grid
      std::mt19937_64 rng(check_seed);
      oosis::Grid2D g(check_h, check_w);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      gt_field.grid = pred_field.grid = g;
      gt_field.b.assign(g.size(), 0.0f);
      gt_field.e.assign(g.size() * 4, 0.0f);
      pred_field.b.resize(g.size());
      pred_field.e.resize(g.size() * 4);
      for (int p = 0; p < g.size(); ++p) {
        if (unit(rng) < 0.4) {
          gt_field.b[p] = 1.0f;
          int d = static_cast<int>(unit(rng) * 4) % 4;
          gt_field.e[p * 4 + d] = 1.0f;
        }
        pred_field.b[p] = static_cast<float>(0.05 + 0.9 * unit(rng));
        double sum = 0.0;
        double raw[4];
        for (double& v : raw) sum += v = 0.05 + unit(rng);
        for (int d = 0; d < 4; ++d)
          pred_field.e[p * 4 + d] = static_cast<float>(raw[d] / sum);
      }
    }
    oosis::LossIdentity id = oosis::loss_identity_check(gt_field, pred_field);
    std::cout.precision(17);
    std::cout << "lhs " << id.lhs << "\nrhs " << id.rhs << "\n|lhs-rhs| "
              << std::abs(id.lhs - id.rhs) << "\n";
    return 0;
  }

  if (bnd_loss->parsed()) {
    double loss = oosis::loss_joint(oosis::load_semantic(loss_gt_semantic),
                                    oosis::load_semantic(loss_semantic),
                                    oosis::load_boundary(loss_gt_boundary),
                                    oosis::load_boundary(loss_boundary), bce_weight);
    std::cout.precision(17);
    std::cout << "loss " << loss << "\n";
    return 0;
  }

  if (bnd_angles->parsed()) {
    oosis::OrientedBoundaryField f = oosis::load_boundary(angles_field_path);
    oosis::ComposedBoundary c = oosis::compose(f);
    std::ostringstream csv;
    csv.precision(17);
    csv << "row,col,normal,tangent\n";
    for (int p = 0; p < c.grid.size(); ++p) {
      if (c.mass(p) < angles_tau) continue;
      oosis::BoundaryAngles a = oosis::to_angle(c.at(p));
      csv << c.grid.row(p) << ',' << c.grid.col(p) << ',' << a.normal << ','
          << a.tangent << '\n';
    }
    oosis::write_text_file((ensure_dir(bnd_out) / "angles.csv").string(), csv.str());
    return 0;
  }

  if (bnd_thin->parsed()) {
    oosis::OrientedBoundaryField f = oosis::load_boundary(thin_field_path);
    oosis::ComposedBoundary thinned = oosis::nms_thin(oosis::compose(f), thin_tau);
    // back to the b/e representation for the OGF file
    oosis::OrientedBoundaryField out_field;
    out_field.grid = thinned.grid;
    out_field.b.resize(thinned.grid.size());
    out_field.e.assign(static_cast<std::size_t>(thinned.grid.size()) * 4, 0.0f);
    for (int p = 0; p < thinned.grid.size(); ++p) {
      double mass = thinned.mass(p);
      out_field.b[p] = static_cast<float>(mass);
      if (mass > 0.0)
        for (int d = 0; d < 4; ++d)
          out_field.e[p * 4 + d] =
              static_cast<float>(thinned.value(p, d) / mass);
    }
    oosis::save_field(out_field, (ensure_dir(bnd_out) / "thinned.ogf").string());
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const oosis::Error& ex) {
    bool internal = ex.code() == oosis::errc::non_submodular ||
                    ex.code() == oosis::errc::iteration_cap;
    std::cerr << "error: " << ex.what() << "\n";
    return internal ? kExitInternal : kExitUsage;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitUsage;
  }
}
