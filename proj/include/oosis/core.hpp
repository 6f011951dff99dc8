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

#ifndef OOSIS_CORE_HPP_
#define OOSIS_CORE_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace oosis {

enum class errc {
  bad_magic,
  bad_dimensions,
  bad_probability_sum,
  truncated_file,
  io_failure,
  bad_argument,
  non_submodular,
  iteration_cap,
  bad_format,
};

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

/// Dense pixel grid. Pixel p in [0, height*width) maps to
/// (row, col) = (p / width, p % width).
struct Grid2D {
  int height = 0;
  int width = 0;

  Grid2D() = default;
  Grid2D(int h, int w) : height(h), width(w) {
    if (h < 1 || w < 1)
      throw Error(errc::bad_dimensions, "grid dimensions must be >= 1");
  }

  int size() const { return height * width; }
  int index(int row, int col) const { return row * width + col; }
  int row(int p) const { return p / width; }
  int col(int p) const { return p % width; }
  bool contains(int row, int col) const {
    return row >= 0 && row < height && col >= 0 && col < width;
  }
  bool contains_pixel(int p) const { return p >= 0 && p < size(); }
  bool operator==(const Grid2D&) const = default;
};

// Orientation bins, image convention: col-1 = left, col+1 = right,
// row-1 = top, row+1 = bottom.
enum class Dir : int { kLeft = 0, kRight = 1, kTop = 2, kBottom = 3 };

inline constexpr int kDirCount = 4;

Dir opposite(Dir d);

/// In-bounds 4-neighbor of p in direction d, or -1.
int neighbor(const Grid2D& g, int p, Dir d);

struct Neighbor {
  int pixel;
  Dir dir;
};

/// In-bounds 4-neighbors of p, in left/right/top/bottom order.
/// Throws for out-of-bounds p.
std::vector<Neighbor> neighbors4(const Grid2D& g, int p);

/// Per-pixel distribution over C semantic classes; class 0 is background.
struct SemanticField {
  Grid2D grid;
  int classes = 0;
  std::vector<float> probs;  // size()*classes, pixel-major

  float prob(int p, int c) const { return probs[p * classes + c]; }
  /// sigma_p, the background probability.
  float background(int p) const { return probs[p * classes]; }

  void validate() const;
};

/// Boundary probability b_p plus the conditional orientation distribution
/// e_p over the four bins. An all-zero e row marks pixels where the
/// conditional is undefined (ground truth stores zeros off the boundary).
struct OrientedBoundaryField {
  Grid2D grid;
  std::vector<float> b;  // size()
  std::vector<float> e;  // size()*4, pixel-major

  float orient(int p, int d) const { return e[p * kDirCount + d]; }
  bool orient_defined(int p) const;

  void validate() const;
};

/// Per-pixel occlusion-order labels; 0 is background.
struct OcclusionLabeling {
  Grid2D grid;
  std::vector<std::uint32_t> labels;

  std::uint32_t at(int p) const { return labels[p]; }
  bool operator==(const OcclusionLabeling&) const = default;
};

struct PixelPair {
  int p;  // occluder
  int q;  // occludee, 4-adjacent to p
  auto operator<=>(const PixelPair&) const = default;
};

/// Ordered occlusion pairs: (p, q) means p occludes q. At most one
/// direction per unordered pixel pair.
class OcclusionPairSet {
 public:
  OcclusionPairSet() = default;
  /// Validates adjacency, dedup and one-direction invariants; sorts.
  OcclusionPairSet(const Grid2D& g, std::vector<PixelPair> pairs);

  const std::vector<PixelPair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool contains(PixelPair pr) const;

 private:
  std::vector<PixelPair> pairs_;  // sorted
};

// ---------------------------------------------------------------------------
// Binary file formats (all integers and floats little-endian):
//
//   OGF  "OGRD" | u32 version=1 | u32 height | u32 width | u32 channels |
//        height*width*channels float32, row-major, channel-interleaved
//   OLBL "OLBL" | u32 version=1 | u32 height | u32 width | u32 labels[h*w]
//
// A SemanticField uses channels = C, an OrientedBoundaryField channels = 5
// with layout [b, e_left, e_right, e_top, e_bottom].
// ---------------------------------------------------------------------------

enum class FieldKind { semantic, boundary, labeling };

using Field = std::variant<SemanticField, OrientedBoundaryField, OcclusionLabeling>;

SemanticField load_semantic(const std::string& path);
OrientedBoundaryField load_boundary(const std::string& path);
OcclusionLabeling load_labeling(const std::string& path);
Field load_field(const std::string& path, FieldKind kind);

void save_field(const SemanticField& f, const std::string& path);
void save_field(const OrientedBoundaryField& f, const std::string& path);
void save_field(const OcclusionLabeling& f, const std::string& path);

}  // namespace oosis

#endif  // OOSIS_CORE_HPP_
