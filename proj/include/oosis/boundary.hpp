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

#ifndef OOSIS_BOUNDARY_HPP_
#define OOSIS_BOUNDARY_HPP_

#include <array>
#include <map>
#include <set>
#include <vector>

#include "oosis/core.hpp"

namespace oosis {

inline constexpr int kNoBoundary = 4;      // index of the empty outcome
inline constexpr double kDefaultTau = 0.1;  // boundary threshold
inline constexpr double kDefaultBceWeight = 0.9;

/// Full oriented-boundary distribution o_p = [b_p * e_p, 1 - b_p] over
/// [left, right, top, bottom, no-boundary].
struct ComposedBoundary {
  Grid2D grid;
  std::vector<float> o;  // size()*5, pixel-major

  float value(int p, int k) const { return o[p * 5 + k]; }
  std::array<double, 5> at(int p) const;
  /// Total boundary probability 1 - o_p[no-boundary].
  double mass(int p) const { return 1.0 - o[p * 5 + kNoBoundary]; }
};

/// Rejects pixels carrying boundary probability but no orientation row.
ComposedBoundary compose(const OrientedBoundaryField& f);

/// Pixel-level instance annotation: id 0 is background, `occludes` holds
/// ordered instance pairs (i occludes j).
struct InstanceAnnotation {
  Grid2D grid;
  std::vector<int> instance_id;       // size()
  std::map<int, int> class_of;        // instance id -> semantic class
  std::set<std::pair<int, int>> occludes;

  void validate() const;
  /// True iff p lies in an instance and q in the background or in an
  /// instance the relation places behind p's.
  bool pixel_occludes(int p, int q) const;
};

/// Ground-truth oriented boundary: b is 1 on pixels that occlude a
/// 4-neighbor, and e is the normalized indicator over the occluded
/// directions (stored all-zero off the boundary, where it is undefined).
OrientedBoundaryField gt_from_annotation(const InstanceAnnotation& a);

/// Joint loss sum_p CE(S_p|s_p) + CE_w(B_p|b_p) + B_p CE(E_p|e_p) with
/// CE_w(B|b) = -w B ln b - (1-w)(1-B) ln(1-b). The orientation term is
/// gated by the ground-truth boundary mask. Probabilities are clamped to
/// [1e-12, 1] before every log.
double loss_joint(const SemanticField& gt_semantic, const SemanticField& semantic,
                  const OrientedBoundaryField& gt_boundary,
                  const OrientedBoundaryField& boundary, double w);

struct LossIdentity {
  double lhs;  // sum_p CE(O_p | o_p), with o_p composed from (b, e)
  double rhs;  // sum_p CE(B_p | b_p) + B_p CE(E_p | e_p)
};

/// Both decompositions of the oriented-boundary cross-entropy; they agree
/// to within 1e-9 relative for valid inputs.
LossIdentity loss_identity_check(const OrientedBoundaryField& gt_boundary,
                                 const OrientedBoundaryField& boundary);

/// Thresholds boundary mass at tau, then suppresses non-maxima along the
/// axis of each pixel's strongest orientation (horizontal for left/right,
/// vertical for top/bottom). A pixel survives if its mass is >= both axis
/// neighbors'; an exact tie keeps the smaller row-major pixel when both
/// pixels thin along the same axis, and keeps both when the ridges cross
/// (perpendicular boundaries meeting at a corner). Idempotent.
ComposedBoundary nms_thin(const ComposedBoundary& c, double tau);

/// Ordered pairs (p, n_d(p)) for every direction with o_p[d] >= tau. If
/// both (p,q) and (q,p) are generated, the larger generating probability
/// wins; exact ties keep the pair with the smaller first pixel.
OcclusionPairSet extract_pairs(const ComposedBoundary& c, double tau);

/// Angles in radians for the normal (occluder -> occludee) and the
/// boundary tangent. Zero points to the top of the image and positive
/// angles rotate toward the right, so "left" is -pi/2 and "bottom" is pi.
/// The magnitude relative to vertical is arctan(h/v) with h and v the
/// stronger horizontal / vertical components. The tangent follows the
/// left rule (normal - pi/2): walking along it keeps the occluder on the
/// left.
struct BoundaryAngles {
  double normal;
  double tangent;
};

/// Throws when the orientation mass o[0..3] is all zero.
BoundaryAngles to_angle(const std::array<double, 5>& o);

}  // namespace oosis

#endif  // OOSIS_BOUNDARY_HPP_
