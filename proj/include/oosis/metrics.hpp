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

#ifndef OOSIS_METRICS_HPP_
#define OOSIS_METRICS_HPP_

#include <cstdint>
#include <map>
#include <vector>

#include "oosis/instances.hpp"

namespace oosis {

/// Intersection over union of two sorted pixel index sets.
double iou(const std::vector<int>& a, const std::vector<int>& b);

/// Injective prediction-to-ground-truth assignment; matched pairs share a
/// semantic class and reach the IoU threshold.
struct Matching {
  std::map<int, int> pairs;  // predicted id -> ground-truth id
  double iou_threshold = 0.5;
  double confidence_threshold = 0.0;
};

/// Greedy matching over predictions in order of descending confidence
/// (ties: larger mask, then lower id). Predictions below conf_t are
/// skipped; each takes the unmatched same-class ground-truth instance of
/// highest positive IoU, kept only if IoU >= iou_t.
Matching match(const InstanceSet& pred, const InstanceSet& gt, double iou_t,
               double conf_t);

struct OairPoint {
  double threshold = 0.0;
  double recall = 0.0;
  double accuracy = 0.0;        // meaningful only when accuracy_defined
  bool accuracy_defined = false;  // false when no pair was recovered
};

struct OairCounts {
  std::size_t total = 0;      // ground-truth occlusion edges
  std::size_t recovered = 0;  // edges with both endpoints matched
  std::size_t correct = 0;    // recovered edges validated by a one-way path
};

OairCounts oair_counts(const OcclusionGraph& pred_graph,
                       const OcclusionGraph& gt_graph, const Matching& matching);

/// Recall = recovered/total, accuracy = correct/recovered. A ground-truth
/// edge counts as correct when the predicted graph has a directed path in
/// the matched direction and none in the reverse. Recall of an edgeless
/// ground truth is reported as 1.
OairPoint oair_point(const OcclusionGraph& pred_graph,
                     const OcclusionGraph& gt_graph, const Matching& matching);

enum class SweepMode { iou, confidence };

/// iou sweep: thresholds 0.50..0.95 in steps of 0.05 at conf_t = 0.
/// confidence sweep: six confidence thresholds at evenly spaced quantiles
/// of the predicted scores (the last one above the maximum, forcing
/// recall 0), matched at iou_t = 0.5.
std::vector<OairPoint> oair_curve(const InstanceSet& pred, const InstanceSet& gt,
                                  const OcclusionGraph& pred_graph,
                                  const OcclusionGraph& gt_graph, SweepMode mode);

/// WC(G, S) = (1/n) sum_i |r_i| max_j IoU(r_i, s_j), with n the total
/// ground-truth instance mass sum_i |r_i| so an exact segmentation scores
/// 1 regardless of how much background the image carries.
double weighted_coverage(const InstanceSet& gt, const InstanceSet& pred);

/// COCO-style AP: greedy confidence-ranked matching per IoU threshold,
/// 101-point interpolated precision, averaged over the thresholds.
double average_precision(const InstanceSet& pred, const InstanceSet& gt,
                         const std::vector<double>& iou_thresholds);

/// Thresholds 0.50..0.95 in steps of 0.05.
std::vector<double> coco_iou_thresholds();

/// Fraction of nodes lying on a directed cycle (strongly connected
/// component of size > 1, or a self-loop).
double cycle_stats(const OcclusionGraph& g);

/// Repeatedly finds a cycle and removes one of its edges uniformly at
/// random until the graph is acyclic. Deterministic for a fixed seed;
/// never touches edges outside a cycle.
OcclusionGraph random_decycle(const OcclusionGraph& g, std::uint64_t seed);

}  // namespace oosis

#endif  // OOSIS_METRICS_HPP_
