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

#include "oosis/serial.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace oosis {

namespace {

using nlohmann::json;

json rle_encode(const std::vector<int>& pixels) {
  json runs = json::array();
  std::size_t i = 0;
  while (i < pixels.size()) {
    std::size_t j = i + 1;
    while (j < pixels.size() && pixels[j] == pixels[j - 1] + 1) ++j;
    runs.push_back({pixels[i], static_cast<int>(j - i)});
    i = j;
  }
  return runs;
}

std::vector<int> rle_decode(const json& runs, int limit) {
  std::vector<int> pixels;
  for (const auto& run : runs) {
    if (!run.is_array() || run.size() != 2)
      throw Error(errc::bad_format, "run must be [start, length]");
    int start = run[0].get<int>();
    int length = run[1].get<int>();
    if (start < 0 || length < 1 || start + length > limit)
      throw Error(errc::bad_format, "run outside the grid");
    for (int k = 0; k < length; ++k) pixels.push_back(start + k);
  }
  return pixels;
}

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw Error(errc::bad_format, "malformed JSON");
  return j;
}

Grid2D grid_from(const json& j) {
  if (!j.contains("height") || !j.contains("width"))
    throw Error(errc::bad_format, "missing height/width");
  int h = j["height"].get<int>();
  int w = j["width"].get<int>();
  if (h < 1 || w < 1) throw Error(errc::bad_dimensions, "bad grid dimensions");
  return Grid2D(h, w);
}

}  // namespace

std::string annotation_to_json(const InstanceAnnotation& a) {
  json j;
  j["height"] = a.grid.height;
  j["width"] = a.grid.width;
  json instances = json::array();
  std::map<int, std::vector<int>> masks;
  for (int p = 0; p < a.grid.size(); ++p)
    if (a.instance_id[p] != 0) masks[a.instance_id[p]].push_back(p);
  for (const auto& [id, cls] : a.class_of) {
    json inst;
    inst["id"] = id;
    inst["class"] = cls;
    auto it = masks.find(id);
    inst["rle"] = rle_encode(it == masks.end() ? std::vector<int>{} : it->second);
    instances.push_back(inst);
  }
  j["instances"] = instances;
  json occ = json::array();
  for (const auto& [i, k] : a.occludes) occ.push_back({i, k});
  j["occludes"] = occ;
  return j.dump(2);
}

InstanceAnnotation annotation_from_json(const std::string& text) {
  json j = parse(text);
  InstanceAnnotation a;
  a.grid = grid_from(j);
  a.instance_id.assign(a.grid.size(), 0);
  if (!j.contains("instances") || !j["instances"].is_array())
    throw Error(errc::bad_format, "missing instances array");
  for (const auto& inst : j["instances"]) {
    int id = inst.at("id").get<int>();
    if (id <= 0) throw Error(errc::bad_format, "instance ids must be positive");
    a.class_of[id] = inst.at("class").get<int>();
    for (int p : rle_decode(inst.at("rle"), a.grid.size())) {
      if (a.instance_id[p] != 0)
        throw Error(errc::bad_format, "overlapping masks in annotation");
      a.instance_id[p] = id;
    }
  }
  if (j.contains("occludes"))
    for (const auto& pair : j["occludes"]) {
      if (!pair.is_array() || pair.size() != 2)
        throw Error(errc::bad_format, "occludes entries must be [i, j]");
      a.occludes.insert({pair[0].get<int>(), pair[1].get<int>()});
    }
  a.validate();
  return a;
}

std::string instances_to_json(const InstanceSet& s) {
  json j;
  j["height"] = s.grid.height;
  j["width"] = s.grid.width;
  json instances = json::array();
  for (const Instance& inst : s.instances) {
    json item;
    item["id"] = inst.id;
    item["class"] = inst.semantic_class;
    item["occlusion_label"] = inst.occlusion_label;
    item["confidence"] = inst.confidence;
    item["rle"] = rle_encode(inst.pixels);
    instances.push_back(item);
  }
  j["instances"] = instances;
  return j.dump(2);
}

InstanceSet instances_from_json(const std::string& text) {
  json j = parse(text);
  InstanceSet s;
  s.grid = grid_from(j);
  if (!j.contains("instances") || !j["instances"].is_array())
    throw Error(errc::bad_format, "missing instances array");
  for (const auto& item : j["instances"]) {
    Instance inst;
    inst.id = item.at("id").get<int>();
    inst.semantic_class = item.at("class").get<int>();
    inst.occlusion_label = item.at("occlusion_label").get<std::uint32_t>();
    inst.confidence = item.at("confidence").get<double>();
    inst.pixels = rle_decode(item.at("rle"), s.grid.size());
    // matching and IoU assume sorted masks; files need not order their runs
    std::sort(inst.pixels.begin(), inst.pixels.end());
    s.instances.push_back(std::move(inst));
  }
  s.validate(/*require_connected=*/false);
  return s;
}

std::string graph_to_json(const OcclusionGraph& g) {
  json j;
  j["nodes"] = g.nodes;
  json edges = json::array();
  for (const auto& [u, v] : g.edges) edges.push_back({u, v});
  j["edges"] = edges;
  return j.dump(2);
}

OcclusionGraph graph_from_json(const std::string& text) {
  json j = parse(text);
  OcclusionGraph g;
  if (!j.contains("nodes") || !j["nodes"].is_array())
    throw Error(errc::bad_format, "missing nodes array");
  for (const auto& n : j["nodes"]) g.nodes.push_back(n.get<int>());
  if (j.contains("edges"))
    for (const auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 2)
        throw Error(errc::bad_format, "edges must be [u, v]");
      g.edges.push_back({e[0].get<int>(), e[1].get<int>()});
    }
  std::sort(g.nodes.begin(), g.nodes.end());
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  g.validate();
  return g;
}

std::string trace_to_json(const MoveTrace& t) {
  json j;
  j["algorithm"] = t.algorithm;
  j["final_energy"] = t.final_energy;
  json moves = json::array();
  for (const MoveRecord& m : t.moves) {
    json rec;
    rec["index"] = m.index;
    rec["label"] = m.move_label;
    rec["energy_before"] = m.energy_before;
    rec["energy_after"] = m.energy_after;
    rec["pixels_changed"] = m.pixels_changed;
    rec["activated_pairs"] = m.activated_pairs;
    moves.push_back(rec);
  }
  j["moves"] = moves;
  return j.dump(2);
}

std::string oair_csv(const std::vector<OairPoint>& points) {
  std::ostringstream os;
  os << "threshold,recall,accuracy\n";
  os.precision(17);
  for (const OairPoint& pt : points) {
    os << pt.threshold << ',' << pt.recall << ',';
    if (pt.accuracy_defined) os << pt.accuracy;
    os << '\n';
  }
  return os.str();
}

std::string pgm_bytes(const Grid2D& grid, const std::vector<std::uint8_t>& img) {
  if (img.size() != static_cast<std::size_t>(grid.size()))
    throw Error(errc::bad_dimensions, "image size mismatch");
  std::ostringstream os;
  os << "P5\n" << grid.width << ' ' << grid.height << "\n255\n";
  os.write(reinterpret_cast<const char*>(img.data()),
           static_cast<std::streamsize>(img.size()));
  return os.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(errc::io_failure, "cannot open " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(errc::io_failure, "cannot open " + path + " for writing");
  os << text;
  if (!os) throw Error(errc::io_failure, "write failed: " + path);
}

}  // namespace oosis
