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

#include "oosis/boundary.hpp"

#include <algorithm>
#include <cmath>

namespace oosis {

namespace {

constexpr double kLogClamp = 1e-12;

double safe_log(double p) { return std::log(std::clamp(p, kLogClamp, 1.0)); }

// Requires ground-truth b values to be hard 0/1.
bool gt_boundary_bit(const OrientedBoundaryField& gt, int p) {
  float v = gt.b[p];
  if (v != 0.0f && v != 1.0f)
    throw Error(errc::bad_argument, "ground-truth boundary mask must be binary");
  return v == 1.0f;
}

}  // namespace

std::array<double, 5> ComposedBoundary::at(int p) const {
  std::array<double, 5> out;
  for (int k = 0; k < 5; ++k) out[k] = o[p * 5 + k];
  return out;
}

ComposedBoundary compose(const OrientedBoundaryField& f) {
  f.validate();
  ComposedBoundary c;
  c.grid = f.grid;
  c.o.resize(static_cast<std::size_t>(f.grid.size()) * 5);
  for (int p = 0; p < f.grid.size(); ++p) {
    float b = f.b[p];
    if (b > 1e-6f && !f.orient_defined(p))
      throw Error(errc::bad_argument,
                  "boundary probability without orientation distribution");
    for (int d = 0; d < kDirCount; ++d)
      c.o[p * 5 + d] = b * f.e[p * kDirCount + d];
    c.o[p * 5 + kNoBoundary] = 1.0f - b;
  }
  return c;
}

void InstanceAnnotation::validate() const {
  if (instance_id.size() != static_cast<std::size_t>(grid.size()))
    throw Error(errc::bad_dimensions, "instance map size mismatch");
  for (int id : instance_id) {
    if (id < 0) throw Error(errc::bad_argument, "negative instance id");
    if (id > 0 && !class_of.count(id))
      throw Error(errc::bad_argument,
                  "instance " + std::to_string(id) + " missing from class map");
  }
  for (const auto& [i, j] : occludes)
    if (i == j) throw Error(errc::bad_argument, "instance occluding itself");
}

bool InstanceAnnotation::pixel_occludes(int p, int q) const {
  int i = instance_id[p];
  int j = instance_id[q];
  if (i == 0 || i == j) return false;
  // Every instance occludes the background; between instances only the
  // annotated relation counts.
  return j == 0 || occludes.count({i, j}) > 0;
}

OrientedBoundaryField gt_from_annotation(const InstanceAnnotation& a) {
  a.validate();
  OrientedBoundaryField f;
  f.grid = a.grid;
  f.b.assign(a.grid.size(), 0.0f);
  f.e.assign(static_cast<std::size_t>(a.grid.size()) * kDirCount, 0.0f);
  for (int p = 0; p < a.grid.size(); ++p) {
    int hits = 0;
    bool occ[kDirCount] = {false, false, false, false};
    for (int d = 0; d < kDirCount; ++d) {
      int q = neighbor(a.grid, p, static_cast<Dir>(d));
      if (q >= 0 && a.pixel_occludes(p, q)) {
        occ[d] = true;
        ++hits;
      }
    }
    if (hits == 0) continue;
    f.b[p] = 1.0f;
    for (int d = 0; d < kDirCount; ++d)
      if (occ[d]) f.e[p * kDirCount + d] = 1.0f / static_cast<float>(hits);
  }
  return f;
}

double loss_joint(const SemanticField& gt_semantic, const SemanticField& semantic,
                  const OrientedBoundaryField& gt_boundary,
                  const OrientedBoundaryField& boundary, double w) {
  if (gt_semantic.grid != semantic.grid || gt_semantic.classes != semantic.classes ||
      gt_boundary.grid != boundary.grid || gt_semantic.grid != gt_boundary.grid)
    throw Error(errc::bad_argument, "loss inputs must share shapes");
  double total = 0.0;
  const int n = semantic.grid.size();
  for (int p = 0; p < n; ++p) {
    for (int c = 0; c < semantic.classes; ++c)
      total -= gt_semantic.prob(p, c) * safe_log(semantic.prob(p, c));
    bool on = gt_boundary_bit(gt_boundary, p);
    double b = boundary.b[p];
    total -= w * (on ? 1.0 : 0.0) * safe_log(b);
    total -= (1.0 - w) * (on ? 0.0 : 1.0) * safe_log(1.0 - b);
    if (on)
      for (int d = 0; d < kDirCount; ++d)
        total -= gt_boundary.orient(p, d) * safe_log(boundary.orient(p, d));
  }
  return total;
}

LossIdentity loss_identity_check(const OrientedBoundaryField& gt_boundary,
                                 const OrientedBoundaryField& boundary) {
  if (gt_boundary.grid != boundary.grid)
    throw Error(errc::bad_argument, "loss inputs must share shapes");
  boundary.validate();
  LossIdentity out{0.0, 0.0};
  const int n = boundary.grid.size();
  for (int p = 0; p < n; ++p) {
    bool on = gt_boundary_bit(gt_boundary, p);
    double b = boundary.b[p];
    // O_p = [B_p * E_p, 1 - B_p]. The identity needs sum_d E_p^d = 1
    // exactly, which float32 storage cannot promise (1/3 rows drift by
    // ~3e-8), so the weights are renormalized in double first; products
    // are also formed in double.
    double weight_sum = 0.0;
    if (on) {
      for (int d = 0; d < kDirCount; ++d) weight_sum += gt_boundary.orient(p, d);
      if (weight_sum <= 0.0)
        throw Error(errc::bad_argument,
                    "ground-truth boundary pixel without orientation");
    }
    if (on) {
      for (int d = 0; d < kDirCount; ++d)
        out.lhs -= gt_boundary.orient(p, d) / weight_sum *
                   safe_log(b * static_cast<double>(boundary.orient(p, d)));
    } else {
      out.lhs -= safe_log(1.0 - b);
    }
    out.rhs -= on ? safe_log(b) : safe_log(1.0 - b);
    if (on)
      for (int d = 0; d < kDirCount; ++d)
        out.rhs -= gt_boundary.orient(p, d) / weight_sum *
                   safe_log(boundary.orient(p, d));
  }
  return out;
}

namespace {

// true when the strongest orientation bin (smaller index on ties) thins
// along the horizontal axis
bool thins_horizontally(const ComposedBoundary& c, int p) {
  int best = 0;
  for (int d = 1; d < kDirCount; ++d)
    if (c.value(p, d) > c.value(p, best)) best = d;
  return best == static_cast<int>(Dir::kLeft) ||
         best == static_cast<int>(Dir::kRight);
}

}  // namespace

ComposedBoundary nms_thin(const ComposedBoundary& c, double tau) {
  if (tau < 0.0 || tau > 1.0)
    throw Error(errc::bad_argument, "tau must lie in [0,1]");
  const Grid2D& g = c.grid;
  ComposedBoundary out;
  out.grid = g;
  out.o.assign(c.o.size(), 0.0f);
  for (int r = 0; r < g.height; ++r) {
    for (int col = 0; col < g.width; ++col) {
      int p = g.index(r, col);
      double m = c.mass(p);
      bool keep = m >= tau && m > 0.0;
      if (keep) {
        bool horizontal = thins_horizontally(c, p);
        // A neighbor with strictly larger mass always suppresses. An
        // exact tie suppresses only the larger row-major pixel of a
        // same-axis pair: two ridges crossing at a corner are distinct
        // maxima, a plateau along one ridge is not.
        for (int step : {-1, 1}) {
          int qr = horizontal ? r : r + step;
          int qc = horizontal ? col + step : col;
          if (!g.contains(qr, qc)) continue;
          int q = g.index(qr, qc);
          double mq = c.mass(q);
          if (mq > m) keep = false;
          if (mq == m && step < 0 && thins_horizontally(c, q) == horizontal)
            keep = false;
        }
      }
      if (keep) {
        for (int k = 0; k < 5; ++k) out.o[p * 5 + k] = c.o[p * 5 + k];
      } else {
        out.o[p * 5 + kNoBoundary] = 1.0f;
      }
    }
  }
  return out;
}

OcclusionPairSet extract_pairs(const ComposedBoundary& c, double tau) {
  if (tau < 0.0 || tau > 1.0)
    throw Error(errc::bad_argument, "tau must lie in [0,1]");
  const Grid2D& g = c.grid;
  std::vector<PixelPair> kept;
  for (int p = 0; p < g.size(); ++p) {
    for (int d = 0; d < kDirCount; ++d) {
      double prob = c.value(p, d);
      if (prob < tau) continue;
      int q = neighbor(g, p, static_cast<Dir>(d));
      if (q < 0) continue;
      // Conflicting claim from the other side: keep the stronger one,
      // break exact ties toward the smaller first pixel.
      double back = c.value(q, static_cast<int>(opposite(static_cast<Dir>(d))));
      if (back >= tau) {
        if (back > prob) continue;
        if (back == prob && q < p) continue;
      }
      kept.push_back({p, q});
    }
  }
  return OcclusionPairSet(g, std::move(kept));
}

BoundaryAngles to_angle(const std::array<double, 5>& o) {
  double h = std::max(o[static_cast<int>(Dir::kLeft)],
                      o[static_cast<int>(Dir::kRight)]);
  double v = std::max(o[static_cast<int>(Dir::kTop)],
                      o[static_cast<int>(Dir::kBottom)]);
  if (h <= 0.0 && v <= 0.0)
    throw Error(errc::bad_argument, "orientation mass is zero");
  // ties between opposite bins resolve to left / top
  bool left_wins = o[static_cast<int>(Dir::kLeft)] >= o[static_cast<int>(Dir::kRight)];
  bool top_wins = o[static_cast<int>(Dir::kTop)] >= o[static_cast<int>(Dir::kBottom)];
  double rightward = left_wins ? -h : h;
  double upward = top_wins ? v : -v;
  BoundaryAngles a;
  a.normal = std::atan2(rightward, upward);
  a.tangent = a.normal - M_PI / 2.0;
  if (a.tangent <= -M_PI) a.tangent += 2.0 * M_PI;
  return a;
}

}  // namespace oosis
