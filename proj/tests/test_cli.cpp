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

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "oosis/core.hpp"
#include "oosis/serial.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string cli_path() {
  const char* env = std::getenv("OOSIS_CLI");
  REQUIRE_MESSAGE(env != nullptr, "OOSIS_CLI must point at the binary");
  return env;
}

int run_cli(const std::string& args) {
  std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("oosis_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("synth is deterministic and writes the full scene") {
  fs::path a = fresh_dir("synth_a");
  fs::path b = fresh_dir("synth_b");
  std::string flags = "synth --seed 7 --instances 3 --height 48 --width 48 --out ";
  CHECK(run_cli(flags + a.string()) == 0);
  CHECK(run_cli(flags + b.string()) == 0);
  for (const char* name : {"annotation.json", "semantic.ogf", "boundary.ogf",
                           "gt_instances.json", "gt_graph.json"}) {
    CHECK(fs::exists(a / name));
    CHECK(slurp(a / name) == slurp(b / name));
  }
}

TEST_CASE("synth rejects an impossible instance count") {
  CHECK(run_cli("synth --instances 0 --out " + fresh_dir("synth_bad").string()) == 2);
}

TEST_CASE("unknown algorithm names exit with a usage error") {
  CHECK(run_cli("label --algo annealing --semantic x --boundary y") == 2);
}

TEST_CASE("the environment variable provides the default output directory") {
  fs::path dir = fresh_dir("env_out");
  std::string cmd = "OOSIS_OUT_DIR=" + dir.string() + " " + cli_path() +
                    " synth --seed 5 --height 32 --width 32 >/dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  CHECK(fs::exists(dir / "semantic.ogf"));
}

TEST_CASE("label writes labeling, instances, graph, trace and depth map") {
  fs::path scene = fresh_dir("label_scene");
  REQUIRE(run_cli("synth --seed 11 --instances 4 --height 48 --width 48 --out " +
                  scene.string()) == 0);
  fs::path out = fresh_dir("label_out");
  CHECK(run_cli("label --semantic " + (scene / "semantic.ogf").string() +
                " --boundary " + (scene / "boundary.ogf").string() + " --out " +
                out.string()) == 0);

  oosis::OcclusionLabeling labeling =
      oosis::load_labeling((out / "labeling.olbl").string());
  CHECK(labeling.grid.height == 48);

  json trace = json::parse(slurp(out / "trace.json"));
  CHECK(trace["algorithm"] == "jump");
  double prev = 1e300;
  for (const auto& move : trace["moves"]) {
    double before = move["energy_before"].get<double>();
    double after = move["energy_after"].get<double>();
    CHECK(after <= before);
    CHECK(before <= prev + 1e-12);
    prev = after;
  }

  std::string pgm = slurp(out / "depth.pgm");
  CHECK(pgm.rfind("P5\n48 48\n255\n", 0) == 0);
  CHECK(pgm.size() == 13 + 48 * 48);

  oosis::InstanceSet instances =
      oosis::instances_from_json(slurp(out / "instances.json"));
  CHECK(!instances.instances.empty());
  oosis::OcclusionGraph graph = oosis::graph_from_json(slurp(out / "graph.json"));
  CHECK(!graph.nodes.empty());
}

TEST_CASE("label with the expansion cycle records alpha moves") {
  fs::path scene = fresh_dir("label_exp_scene");
  REQUIRE(run_cli("synth --seed 3 --instances 3 --height 48 --width 48 --out " +
                  scene.string()) == 0);
  fs::path out = fresh_dir("label_exp_out");
  CHECK(run_cli("label --algo expansion1 --lmax 4 --semantic " +
                (scene / "semantic.ogf").string() + " --boundary " +
                (scene / "boundary.ogf").string() + " --out " + out.string()) == 0);
  json trace = json::parse(slurp(out / "trace.json"));
  CHECK(trace["algorithm"] == "expansion1");
  CHECK(trace["moves"].size() == 4);
}

TEST_CASE("label rejects mismatched grids with exit 2") {
  fs::path small = fresh_dir("mismatch_small");
  fs::path big = fresh_dir("mismatch_big");
  REQUIRE(run_cli("synth --seed 1 --height 32 --width 32 --out " + small.string()) == 0);
  REQUIRE(run_cli("synth --seed 1 --height 48 --width 48 --out " + big.string()) == 0);
  CHECK(run_cli("label --semantic " + (small / "semantic.ogf").string() +
                " --boundary " + (big / "boundary.ogf").string() + " --out " +
                fresh_dir("mismatch_out").string()) == 2);
}

TEST_CASE("eval of a prediction against itself is perfect") {
  fs::path scene = fresh_dir("eval_scene");
  REQUIRE(run_cli("synth --seed 19 --instances 4 --height 48 --width 48 --out " +
                  scene.string()) == 0);
  fs::path out = fresh_dir("eval_out");
  std::string gt_inst = (scene / "gt_instances.json").string();
  std::string gt_graph = (scene / "gt_graph.json").string();
  CHECK(run_cli("eval --pred-instances " + gt_inst + " --pred-graph " + gt_graph +
                " --gt-instances " + gt_inst + " --gt-graph " + gt_graph +
                " --out " + out.string()) == 0);
  json metrics = json::parse(slurp(out / "metrics.json"));
  CHECK(metrics["weighted_coverage"].get<double>() == 1.0);
  CHECK(metrics["cycle_fraction"].get<double>() == 0.0);
  CHECK(metrics["average_precision"].get<double>() == 1.0);

  // iou sweep: every row reads threshold,1,1
  std::istringstream csv(slurp(out / "oair_iou.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "threshold,recall,accuracy");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    CHECK(line.find(",1,1") != std::string::npos);
  }
  CHECK(rows == 10);
  CHECK(fs::exists(out / "oair_confidence.csv"));
}

TEST_CASE("eval reproduces the toy-graph point from fixture files") {
  fs::path dir = fresh_dir("toy");
  oosis::Grid2D g(8, 8);
  auto block = [&](int r0, int c0) {
    std::vector<int> px;
    for (int r = r0; r < r0 + 2; ++r)
      for (int c = c0; c < c0 + 2; ++c) px.push_back(g.index(r, c));
    return px;
  };
  auto inst = [&](int id, std::vector<int> px, double conf) {
    oosis::Instance i;
    i.id = id;
    i.pixels = std::move(px);
    i.semantic_class = 1;
    i.occlusion_label = 1;
    i.confidence = conf;
    return i;
  };
  // five ground-truth instances; predictions match the first four exactly
  // and add two stray detections that overlap nothing
  oosis::InstanceSet gt;
  gt.grid = g;
  gt.instances = {inst(1, block(0, 0), 0), inst(2, block(0, 3), 0),
                  inst(3, block(0, 6), 0), inst(4, block(3, 0), 0),
                  inst(5, block(3, 3), 0)};
  oosis::InstanceSet pred;
  pred.grid = g;
  pred.instances = {inst(10, block(0, 0), 0.9), inst(20, block(0, 3), 0.8),
                    inst(30, block(0, 6), 0.7), inst(40, block(3, 0), 0.6),
                    inst(60, block(6, 0), 0.5), inst(70, block(6, 3), 0.4)};
  oosis::OcclusionGraph gt_graph;
  gt_graph.nodes = {1, 2, 3, 4, 5};
  gt_graph.edges = {{1, 2}, {1, 5}, {2, 3}, {2, 4}, {4, 3}};
  oosis::OcclusionGraph pred_graph;
  pred_graph.nodes = {10, 20, 30, 40, 60, 70};
  pred_graph.edges = {{10, 20}, {20, 40}, {20, 60}, {60, 30}};

  oosis::write_text_file((dir / "gt_inst.json").string(),
                         oosis::instances_to_json(gt));
  oosis::write_text_file((dir / "pred_inst.json").string(),
                         oosis::instances_to_json(pred));
  oosis::write_text_file((dir / "gt_graph.json").string(),
                         oosis::graph_to_json(gt_graph));
  oosis::write_text_file((dir / "pred_graph.json").string(),
                         oosis::graph_to_json(pred_graph));

  CHECK(run_cli("eval --pred-instances " + (dir / "pred_inst.json").string() +
                " --pred-graph " + (dir / "pred_graph.json").string() +
                " --gt-instances " + (dir / "gt_inst.json").string() +
                " --gt-graph " + (dir / "gt_graph.json").string() + " --out " +
                dir.string()) == 0);
  std::istringstream csv(slurp(dir / "oair_iou.csv"));
  std::string line;
  std::getline(csv, line);
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    double threshold = 0, recall = 0, accuracy = 0;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &threshold, &recall,
                        &accuracy) == 3);
    CHECK(recall == 0.8);
    CHECK(accuracy == 0.75);
  }
  CHECK(rows == 10);
}

TEST_CASE("eval decycles the prediction when asked") {
  fs::path dir = fresh_dir("decycle");
  // two instances, cyclic prediction graph
  oosis::InstanceSet set;
  set.grid = oosis::Grid2D(4, 4);
  oosis::Instance a;
  a.id = 1;
  a.pixels = {0, 1};
  a.semantic_class = 1;
  a.occlusion_label = 1;
  oosis::Instance b;
  b.id = 2;
  b.pixels = {10, 11};
  b.semantic_class = 1;
  b.occlusion_label = 1;
  set.instances = {a, b};
  oosis::write_text_file((dir / "inst.json").string(), oosis::instances_to_json(set));
  oosis::OcclusionGraph cyclic;
  cyclic.nodes = {1, 2};
  cyclic.edges = {{1, 2}, {2, 1}};
  oosis::write_text_file((dir / "cyclic.json").string(), oosis::graph_to_json(cyclic));
  oosis::OcclusionGraph gt_graph;
  gt_graph.nodes = {1, 2};
  gt_graph.edges = {{1, 2}};
  oosis::write_text_file((dir / "gt_graph.json").string(),
                         oosis::graph_to_json(gt_graph));

  std::string common = "eval --pred-instances " + (dir / "inst.json").string() +
                       " --pred-graph " + (dir / "cyclic.json").string() +
                       " --gt-instances " + (dir / "inst.json").string() +
                       " --gt-graph " + (dir / "gt_graph.json").string() + " --out " +
                       dir.string();
  CHECK(run_cli(common) == 0);
  json metrics = json::parse(slurp(dir / "metrics.json"));
  CHECK(metrics["cycle_fraction"].get<double>() == 1.0);

  CHECK(run_cli(common + " --decycle 5") == 0);
  json decycled = json::parse(slurp(dir / "metrics.json"));
  CHECK(decycled["cycle_fraction"].get<double>() == 0.0);
}

TEST_CASE("eval rejects malformed JSON with exit 2") {
  fs::path dir = fresh_dir("eval_bad");
  oosis::write_text_file((dir / "broken.json").string(), "{not json");
  std::string f = (dir / "broken.json").string();
  CHECK(run_cli("eval --pred-instances " + f + " --pred-graph " + f +
                " --gt-instances " + f + " --gt-graph " + f + " --out " +
                dir.string()) == 2);
}

TEST_CASE("boundary gt emits the annotated orientation field") {
  fs::path dir = fresh_dir("bnd_gt");
  // 1x2 grid, the right pixel occludes its left (background) neighbor
  oosis::InstanceAnnotation a;
  a.grid = oosis::Grid2D(1, 2);
  a.instance_id = {0, 1};
  a.class_of[1] = 1;
  oosis::write_text_file((dir / "annotation.json").string(),
                         oosis::annotation_to_json(a));
  CHECK(run_cli("boundary gt --annotation " + (dir / "annotation.json").string() +
                " --out " + dir.string()) == 0);
  oosis::OrientedBoundaryField f =
      oosis::load_boundary((dir / "gt_boundary.ogf").string());
  CHECK(f.b[1] == 1.0f);
  CHECK(f.orient(1, 0) == 1.0f);  // left
  CHECK(f.orient(1, 1) == 0.0f);
}

TEST_CASE("boundary check-identity reports a tiny residual") {
  fs::path dir = fresh_dir("bnd_check");
  std::string cmd = cli_path() + " boundary check-identity --seed 5 --height 12" +
                    " --width 9 > " + (dir / "out.txt").string() + " 2>&1";
  REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  std::istringstream out(slurp(dir / "out.txt"));
  std::string key;
  double lhs, rhs, diff;
  out >> key >> lhs;
  CHECK(key == "lhs");
  out >> key >> rhs;
  CHECK(key == "rhs");
  out >> key >> diff;
  CHECK(diff <= 1e-9 * (1.0 + std::abs(lhs)));
}

TEST_CASE("boundary loss scores a prediction against ground truth") {
  fs::path scene = fresh_dir("bnd_loss");
  REQUIRE(run_cli("synth --seed 23 --height 32 --width 32 --out " + scene.string()) ==
          0);
  std::string cmd = cli_path() + " boundary loss --gt-semantic " +
                    (scene / "semantic.ogf").string() + " --semantic " +
                    (scene / "semantic.ogf").string() + " --gt-boundary " +
                    (scene / "boundary.ogf").string() + " --boundary " +
                    (scene / "boundary.ogf").string() + " > " +
                    (scene / "loss.txt").string() + " 2>&1";
  REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  std::istringstream out(slurp(scene / "loss.txt"));
  std::string key;
  double loss = -1.0;
  out >> key >> loss;
  CHECK(key == "loss");
  // a perfect prediction scores the ground-truth orientation entropy,
  // which is small and nonnegative
  CHECK(loss >= 0.0);
  CHECK(loss < 64.0);
}

TEST_CASE("boundary angles produces the arctangent fixture row") {
  fs::path dir = fresh_dir("bnd_angles");
  oosis::OrientedBoundaryField f;
  f.grid = oosis::Grid2D(1, 1);
  f.b = {1.0f};
  f.e = {0.5f, 0.1f, 0.4f, 0.0f};
  oosis::save_field(f, (dir / "field.ogf").string());
  CHECK(run_cli("boundary angles --boundary " + (dir / "field.ogf").string() +
                " --out " + dir.string()) == 0);
  std::istringstream csv(slurp(dir / "angles.csv"));
  std::string header, row;
  std::getline(csv, header);
  CHECK(header == "row,col,normal,tangent");
  REQUIRE(std::getline(csv, row));
  double normal = 0.0;
  std::sscanf(row.c_str(), "0,0,%lf", &normal);
  // the OGF file stores float32 components
  double expected = std::atan(static_cast<double>(0.5f) / static_cast<double>(0.4f));
  CHECK(std::abs(std::abs(normal) - expected) <= 1e-12);
}

TEST_CASE("boundary thin suppresses a flat ridge to its first pixel") {
  fs::path dir = fresh_dir("bnd_thin");
  oosis::OrientedBoundaryField f;
  f.grid = oosis::Grid2D(1, 3);
  f.b = {0.4f, 0.9f, 0.5f};
  f.e = {1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0};
  oosis::save_field(f, (dir / "field.ogf").string());
  CHECK(run_cli("boundary thin --boundary " + (dir / "field.ogf").string() +
                " --out " + dir.string()) == 0);
  oosis::OrientedBoundaryField thin =
      oosis::load_boundary((dir / "thinned.ogf").string());
  CHECK(thin.b[0] == 0.0f);
  CHECK(thin.b[1] == doctest::Approx(0.9f));
  CHECK(thin.b[2] == 0.0f);
}

TEST_CASE("batch labeling processes scene directories in parallel") {
  fs::path root = fresh_dir("batch");
  for (int k = 0; k < 2; ++k) {
    fs::path scene = root / ("scene" + std::to_string(k));
    fs::create_directories(scene);
    REQUIRE(run_cli("synth --seed " + std::to_string(100 + k) +
                    " --height 32 --width 32 --out " + scene.string()) == 0);
  }
  CHECK(run_cli("label --batch " + root.string() + " --jobs 2") == 0);
  CHECK(fs::exists(root / "scene0" / "labeling.olbl"));
  CHECK(fs::exists(root / "scene1" / "instances.json"));
}
