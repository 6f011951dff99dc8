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

#ifndef OOSIS_SYNTH_HPP_
#define OOSIS_SYNTH_HPP_

#include <cstdint>

#include "oosis/boundary.hpp"
#include "oosis/core.hpp"

namespace oosis {

enum class ShapeFamily { rectangles, ellipses, mixed };

/// Layered scene: instance ids 1..n are painted front to back with id n
/// in front, which induces a strict depth order and therefore an acyclic
/// occlusion relation. eta = 0 produces exact ground-truth fields.
struct SceneSpec {
  Grid2D grid{64, 64};
  int instances = 3;
  int classes = 3;  // includes background class 0
  ShapeFamily shapes = ShapeFamily::mixed;
  double eta = 0.0;  // noise level in [0, 1)
  std::uint64_t seed = 0;

  void validate() const;
};

struct Scene {
  InstanceAnnotation annotation;
  SemanticField semantic;
  OrientedBoundaryField boundary;
};

/// Generates shapes until the layered scene is usable: every instance
/// keeps >= 9 visible pixels forming one 4-connected piece, visible
/// contact between two instances only occurs where their full masks
/// overlap (so every contact has a well-defined occluder), and no
/// instance both occludes and is occluded (two-level layering). i
/// occludes j iff i is in front and their visible masks touch. Retries
/// with derived seeds a bounded number of times, then throws.
Scene generate_scene(const SceneSpec& spec);

}  // namespace oosis

#endif  // OOSIS_SYNTH_HPP_
