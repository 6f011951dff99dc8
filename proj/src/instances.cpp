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

#include "oosis/instances.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace oosis {

void InstanceSet::validate(bool require_connected) const {
  std::vector<std::uint8_t> taken(grid.size(), 0);
  std::set<int> ids;
  for (const Instance& inst : instances) {
    if (!ids.insert(inst.id).second)
      throw Error(errc::bad_argument, "duplicate instance id");
    if (inst.pixels.empty())
      throw Error(errc::bad_argument, "empty instance mask");
    for (int p : inst.pixels) {
      if (!grid.contains_pixel(p))
        throw Error(errc::bad_argument, "instance pixel out of bounds");
      if (taken[p]) throw Error(errc::bad_argument, "overlapping instances");
      taken[p] = 1;
    }
    if (require_connected) {
      if (inst.occlusion_label == 0)
        throw Error(errc::bad_argument, "instance with background label");
      std::set<int> mask(inst.pixels.begin(), inst.pixels.end());
      std::vector<int> stack = {inst.pixels.front()};
      std::set<int> seen = {inst.pixels.front()};
      while (!stack.empty()) {
        int p = stack.back();
        stack.pop_back();
        for (int d = 0; d < kDirCount; ++d) {
          int q = neighbor(grid, p, static_cast<Dir>(d));
          if (q >= 0 && mask.count(q) && !seen.count(q)) {
            seen.insert(q);
            stack.push_back(q);
          }
        }
      }
      if (seen.size() != mask.size())
        throw Error(errc::bad_argument, "instance mask not 4-connected");
    }
  }
}

void OcclusionGraph::validate() const {
  for (const auto& [i, j] : edges) {
    if (i == j) throw Error(errc::bad_argument, "self-loop in occlusion graph");
    if (!std::binary_search(nodes.begin(), nodes.end(), i) ||
        !std::binary_search(nodes.begin(), nodes.end(), j))
      throw Error(errc::bad_argument, "edge endpoint missing from nodes");
  }
}

InstanceSet extract_instances(const OcclusionLabeling& labeling,
                              const SemanticField& semantic) {
  if (labeling.grid != semantic.grid)
    throw Error(errc::bad_argument, "labeling and semantic grids differ");
  const Grid2D& g = labeling.grid;
  InstanceSet out;
  out.grid = g;
  std::vector<int> component(g.size(), -1);
  int next_id = 0;
  for (int start = 0; start < g.size(); ++start) {
    if (labeling.at(start) == 0 || component[start] >= 0) continue;
    // flood fill over equal nonzero labels; ids follow raster order of
    // each component's first pixel
    ++next_id;
    Instance inst;
    inst.id = next_id;
    inst.occlusion_label = labeling.at(start);
    std::vector<int> stack = {start};
    component[start] = next_id;
    while (!stack.empty()) {
      int p = stack.back();
      stack.pop_back();
      inst.pixels.push_back(p);
      for (int d = 0; d < kDirCount; ++d) {
        int q = neighbor(g, p, static_cast<Dir>(d));
        if (q >= 0 && component[q] < 0 && labeling.at(q) == inst.occlusion_label) {
          component[q] = next_id;
          stack.push_back(q);
        }
      }
    }
    std::sort(inst.pixels.begin(), inst.pixels.end());
    // soft majority vote, background class excluded
    std::vector<double> vote(semantic.classes, 0.0);
    for (int p : inst.pixels)
      for (int c = 1; c < semantic.classes; ++c) vote[c] += semantic.prob(p, c);
    int best = 1;
    for (int c = 2; c < semantic.classes; ++c)
      if (vote[c] > vote[best]) best = c;
    inst.semantic_class = best;
    out.instances.push_back(std::move(inst));
  }
  return out;
}

OcclusionGraph graph_from_labeling(const InstanceSet& inst,
                                   const OcclusionLabeling& labeling) {
  if (inst.grid != labeling.grid)
    throw Error(errc::bad_argument, "instance and labeling grids differ");
  const Grid2D& g = labeling.grid;
  std::vector<int> owner(g.size(), 0);
  for (const Instance& i : inst.instances)
    for (int p : i.pixels) owner[p] = i.id;
  std::set<std::pair<int, int>> edges;
  for (int r = 0; r < g.height; ++r) {
    for (int c = 0; c < g.width; ++c) {
      int p = g.index(r, c);
      for (int off : {1, g.width}) {
        if (off == 1 && c + 1 >= g.width) continue;
        if (off == g.width && r + 1 >= g.height) continue;
        int q = p + off;
        if (!owner[p] || !owner[q] || owner[p] == owner[q]) continue;
        if (labeling.at(p) > labeling.at(q))
          edges.insert({owner[p], owner[q]});
        else if (labeling.at(q) > labeling.at(p))
          edges.insert({owner[q], owner[p]});
      }
    }
  }
  OcclusionGraph out;
  for (const Instance& i : inst.instances) out.nodes.push_back(i.id);
  std::sort(out.nodes.begin(), out.nodes.end());
  out.edges.assign(edges.begin(), edges.end());
  out.validate();
  return out;
}

std::vector<std::uint8_t> depth_map(const InstanceSet& inst,
                                    const OcclusionLabeling& labeling) {
  if (inst.grid != labeling.grid)
    throw Error(errc::bad_argument, "instance and labeling grids differ");
  std::set<std::uint32_t> label_set;
  for (const Instance& i : inst.instances) label_set.insert(i.occlusion_label);
  if (label_set.size() > 255)
    throw Error(errc::bad_argument, "more than 255 distinct occlusion labels");
  std::map<std::uint32_t, std::uint8_t> intensity;
  int rank = 0;
  const int total = static_cast<int>(label_set.size());
  for (std::uint32_t l : label_set) {
    ++rank;
    intensity[l] =
        static_cast<std::uint8_t>(std::lround(255.0 * rank / total));
  }
  std::vector<std::uint8_t> img(inst.grid.size(), 0);
  for (const Instance& i : inst.instances)
    for (int p : i.pixels) img[p] = intensity[i.occlusion_label];
  return img;
}

InstanceSet instances_from_annotation(const InstanceAnnotation& a) {
  a.validate();
  InstanceSet out;
  out.grid = a.grid;
  std::map<int, Instance> by_id;
  for (int p = 0; p < a.grid.size(); ++p) {
    int id = a.instance_id[p];
    if (id == 0) continue;
    Instance& inst = by_id[id];
    inst.id = id;
    inst.semantic_class = a.class_of.at(id);
    inst.pixels.push_back(p);
  }
  for (auto& [id, inst] : by_id) out.instances.push_back(std::move(inst));
  out.validate(/*require_connected=*/false);
  return out;
}

OcclusionGraph graph_from_annotation(const InstanceAnnotation& a) {
  a.validate();
  OcclusionGraph g;
  for (const auto& [id, cls] : a.class_of) g.nodes.push_back(id);
  std::sort(g.nodes.begin(), g.nodes.end());
  g.edges.assign(a.occludes.begin(), a.occludes.end());
  g.validate();
  return g;
}

InstanceSet adhoc_confidence(const InstanceSet& inst,
                             const ComposedBoundary& composed) {
  if (inst.grid != composed.grid)
    throw Error(errc::bad_argument, "instance and boundary grids differ");
  const Grid2D& g = inst.grid;
  std::vector<int> owner(g.size(), 0);
  for (const Instance& i : inst.instances)
    for (int p : i.pixels) owner[p] = i.id;
  InstanceSet out = inst;
  for (Instance& i : out.instances) {
    double border = 0.0, interior = 0.0;
    for (int p : i.pixels) {
      // the image edge counts as outside: a clipped instance still has
      // its rim on the border
      bool on_border = false;
      for (int d = 0; d < kDirCount && !on_border; ++d) {
        int q = neighbor(g, p, static_cast<Dir>(d));
        on_border = q < 0 || owner[q] != i.id;
      }
      (on_border ? border : interior) += composed.mass(p);
    }
    i.confidence = border - interior;
  }
  return out;
}

}  // namespace oosis
