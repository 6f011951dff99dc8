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

#ifndef OOSIS_INSTANCES_HPP_
#define OOSIS_INSTANCES_HPP_

#include <cstdint>
#include <vector>

#include "oosis/boundary.hpp"
#include "oosis/core.hpp"

namespace oosis {

struct Instance {
  int id = 0;
  std::vector<int> pixels;  // sorted row-major indices
  std::uint32_t occlusion_label = 0;
  int semantic_class = 0;
  double confidence = 0.0;
};

/// Unambiguous segmentation: instance pixel sets are disjoint.
struct InstanceSet {
  Grid2D grid;
  std::vector<Instance> instances;

  /// Checks disjointness; with require_connected also 4-connectivity and
  /// a single nonzero label per instance (guaranteed for labeling-derived
  /// sets, not for arbitrary annotation files).
  void validate(bool require_connected) const;
};

/// Directed occlusion graph: nodes are instance ids, edges point from
/// occluder to occludee. Graphs derived from a labeling are acyclic.
struct OcclusionGraph {
  std::vector<int> nodes;                    // sorted
  std::vector<std::pair<int, int>> edges;    // sorted, deduplicated

  void validate() const;
};

/// 4-connected components of equal nonzero label. The semantic class is
/// the majority vote over the component, taken on summed class
/// probabilities with background excluded; confidence starts at 0.
InstanceSet extract_instances(const OcclusionLabeling& labeling,
                              const SemanticField& semantic);

/// Edge i -> j iff some adjacent pixel pair (p in i, q in j) has x_p > x_q.
OcclusionGraph graph_from_labeling(const InstanceSet& inst,
                                   const OcclusionLabeling& labeling);

/// Relative depth rendering: background 0, instance intensity strictly
/// increasing in occlusion label, linearly spread over [1, 255] by label
/// rank. Throws when more than 255 distinct labels are present.
std::vector<std::uint8_t> depth_map(const InstanceSet& inst,
                                    const OcclusionLabeling& labeling);

/// Border-minus-interior sum of boundary mass per instance, where the
/// border is the set of component pixels with a 4-neighborhood position
/// outside the component (the image edge counts as outside).
InstanceSet adhoc_confidence(const InstanceSet& inst,
                             const ComposedBoundary& composed);

/// Visible masks of an annotation as an instance set. Occlusion labels
/// and confidences are zero; masks from foreign annotations may be
/// disconnected.
InstanceSet instances_from_annotation(const InstanceAnnotation& a);

/// Annotated instances as nodes, the occludes relation as edges.
OcclusionGraph graph_from_annotation(const InstanceAnnotation& a);

}  // namespace oosis

#endif  // OOSIS_INSTANCES_HPP_
