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

#include "oosis/synth.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <vector>

namespace oosis {

namespace {

constexpr int kMinVisiblePixels = 9;
constexpr int kMaxAttempts = 256;

struct Shape {
  bool ellipse;
  int row, col;        // center
  int half_h, half_w;  // extents

  bool covers(int r, int c) const {
    double dr = r - row, dc = c - col;
    if (!ellipse)
      return std::abs(dr) <= half_h && std::abs(dc) <= half_w;
    double a = half_h + 0.5, b = half_w + 0.5;
    return (dr * dr) / (a * a) + (dc * dc) / (b * b) <= 1.0;
  }
};

bool visible_connected(const Grid2D& g, const std::vector<int>& owner, int id,
                       int pixel_count) {
  int start = -1;
  for (int p = 0; p < g.size() && start < 0; ++p)
    if (owner[p] == id) start = p;
  if (start < 0) return false;
  std::vector<std::uint8_t> seen(g.size(), 0);
  std::vector<int> stack = {start};
  seen[start] = 1;
  int found = 0;
  while (!stack.empty()) {
    int p = stack.back();
    stack.pop_back();
    ++found;
    for (int d = 0; d < kDirCount; ++d) {
      int q = neighbor(g, p, static_cast<Dir>(d));
      if (q >= 0 && owner[q] == id && !seen[q]) {
        seen[q] = 1;
        stack.push_back(q);
      }
    }
  }
  return found == pixel_count;
}

// One generation attempt; returns false when the layout violates a scene
// constraint and a fresh seed should be tried.
bool try_generate(const SceneSpec& spec, std::mt19937_64& rng, Scene* out) {
  const Grid2D& g = spec.grid;
  const int n = spec.instances;
  std::uniform_int_distribution<int> row_dist(0, g.height - 1);
  std::uniform_int_distribution<int> col_dist(0, g.width - 1);
  int max_half_h = std::max(2, g.height / 4);
  int max_half_w = std::max(2, g.width / 4);
  std::uniform_int_distribution<int> hh_dist(2, max_half_h);
  std::uniform_int_distribution<int> hw_dist(2, max_half_w);
  std::uniform_int_distribution<int> class_dist(1, spec.classes - 1);
  std::uniform_int_distribution<int> coin(0, 1);

  std::vector<Shape> shapes(n + 1);       // 1-based
  std::vector<int> instance_class(n + 1);
  for (int id = 1; id <= n; ++id) {
    Shape s;
    s.ellipse = spec.shapes == ShapeFamily::ellipses ||
                (spec.shapes == ShapeFamily::mixed && coin(rng));
    if (id > 1 && coin(rng)) {
      // drop near an earlier shape so overlaps are common
      const Shape& anchor = shapes[1 + static_cast<int>(rng() % (id - 1))];
      std::uniform_int_distribution<int> jitter_r(-anchor.half_h, anchor.half_h);
      std::uniform_int_distribution<int> jitter_c(-anchor.half_w, anchor.half_w);
      s.row = std::clamp(anchor.row + jitter_r(rng) * 2, 0, g.height - 1);
      s.col = std::clamp(anchor.col + jitter_c(rng) * 2, 0, g.width - 1);
    } else {
      s.row = row_dist(rng);
      s.col = col_dist(rng);
    }
    s.half_h = hh_dist(rng);
    s.half_w = hw_dist(rng);
    shapes[id] = s;
    instance_class[id] = class_dist(rng);
  }

  // front-to-back painting, id n in front
  std::vector<int> owner(g.size(), 0);
  std::vector<std::vector<std::uint8_t>> full(n + 1,
                                              std::vector<std::uint8_t>(g.size(), 0));
  for (int r = 0; r < g.height; ++r) {
    for (int c = 0; c < g.width; ++c) {
      int p = g.index(r, c);
      for (int id = n; id >= 1; --id) {
        if (!shapes[id].covers(r, c)) continue;
        full[id][p] = 1;
        if (owner[p] == 0) owner[p] = id;
      }
    }
  }

  std::vector<int> visible_count(n + 1, 0);
  for (int p = 0; p < g.size(); ++p) ++visible_count[owner[p]];
  for (int id = 1; id <= n; ++id) {
    if (visible_count[id] < kMinVisiblePixels) return false;
    if (!visible_connected(g, owner, id, visible_count[id])) return false;
  }

  // Visible contact requires full-mask overlap; pure abutment would leave
  // an inter-instance border with no occlusion boundary on it. Both sides
  // of a contact must also be two pixels thick along the contact axis:
  // a rim backed by background ties with the facing rim during thinning
  // and the occlusion pairs there would be lost.
  std::set<std::pair<int, int>> contacts;
  for (int r = 0; r < g.height; ++r) {
    for (int c = 0; c < g.width; ++c) {
      int p = g.index(r, c);
      for (int off : {1, g.width}) {
        if (off == 1 && c + 1 >= g.width) continue;
        if (off == g.width && r + 1 >= g.height) continue;
        int q = p + off;
        int i = owner[p], j = owner[q];
        if (i == 0 || j == 0 || i == j) continue;
        Dir toward = off == 1 ? Dir::kRight : Dir::kBottom;
        int p_far = neighbor(g, p, opposite(toward));
        int q_far = neighbor(g, q, toward);
        if (p_far < 0 || owner[p_far] != i) return false;
        if (q_far < 0 || owner[q_far] != j) return false;
        contacts.insert({std::max(i, j), std::min(i, j)});
      }
    }
  }
  for (const auto& [front, back] : contacts) {
    bool overlap = false;
    for (int p = 0; p < g.size() && !overlap; ++p)
      overlap = full[front][p] && full[back][p];
    if (!overlap) return false;
  }

  // Two-level layering: no instance may both occlude another instance
  // and be occluded itself. Deeper chains leave the occludee rim of a
  // middle instance one label behind at the optimizer's fixed point
  // (the bound hides the smoothing gain of catching up), so chained
  // scenes would not be clean ground truth for the metric suite.
  std::set<int> occluders, occludees;
  for (const auto& [front, back] : contacts) {
    occluders.insert(front);
    occludees.insert(back);
  }
  for (int id : occluders)
    if (occludees.count(id)) return false;

  // multi-instance scenes should actually exercise occlusion
  if (n >= 2 && contacts.empty()) return false;

  out->annotation.grid = g;
  out->annotation.instance_id = owner;
  out->annotation.class_of.clear();
  out->annotation.occludes.clear();
  for (int id = 1; id <= n; ++id)
    out->annotation.class_of[id] = instance_class[id];
  for (const auto& [front, back] : contacts)
    out->annotation.occludes.insert({front, back});
  out->annotation.validate();

  // semantic field: one-hot of the visible class map, optionally blended
  // with the uniform distribution at rate eta
  SemanticField& sem = out->semantic;
  sem.grid = g;
  sem.classes = spec.classes;
  sem.probs.assign(static_cast<std::size_t>(g.size()) * spec.classes, 0.0f);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int p = 0; p < g.size(); ++p) {
    int cls = owner[p] == 0 ? 0 : instance_class[owner[p]];
    if (spec.eta > 0.0 && unit(rng) < spec.eta) {
      for (int c = 0; c < spec.classes; ++c)
        sem.probs[p * spec.classes + c] =
            static_cast<float>(spec.eta / spec.classes);
      sem.probs[p * spec.classes + cls] += static_cast<float>(1.0 - spec.eta);
    } else {
      sem.probs[p * spec.classes + cls] = 1.0f;
    }
  }
  sem.validate();

  out->boundary = gt_from_annotation(out->annotation);
  if (spec.eta > 0.0) {
    std::uniform_real_distribution<double> jitter(-spec.eta, spec.eta);
    for (int p = 0; p < g.size(); ++p) {
      if (unit(rng) >= spec.eta) continue;
      double b = std::clamp(out->boundary.b[p] + jitter(rng), 0.0, 1.0);
      out->boundary.b[p] = static_cast<float>(b);
      if (b > 0.0 && !out->boundary.orient_defined(p))
        for (int d = 0; d < kDirCount; ++d)
          out->boundary.e[p * kDirCount + d] = 0.25f;  // no direction known
    }
  }
  out->boundary.validate();
  return true;
}

}  // namespace

void SceneSpec::validate() const {
  if (instances < 1) throw Error(errc::bad_argument, "need at least one instance");
  if (classes < 2) throw Error(errc::bad_argument, "need at least two classes");
  if (eta < 0.0 || eta >= 1.0)
    throw Error(errc::bad_argument, "eta must lie in [0, 1)");
  if (grid.height < 8 || grid.width < 8)
    throw Error(errc::bad_argument, "scene grid too small");
}

Scene generate_scene(const SceneSpec& spec) {
  spec.validate();
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::mt19937_64 rng(spec.seed + 0x9e3779b97f4a7c15ull * attempt);
    Scene scene;
    if (try_generate(spec, rng, &scene)) return scene;
  }
  throw Error(errc::bad_argument,
              "could not realize scene spec after bounded retries");
}

}  // namespace oosis
