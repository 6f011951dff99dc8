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

#include "oosis/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

namespace oosis {

namespace {

constexpr double kLoadSumTol = 1e-4;   // reject beyond, renormalize within
constexpr double kFieldSumTol = 1e-6;  // construction-time invariant

// Caps height*width*channels so the payload size cannot overflow.
constexpr std::uint64_t kMaxElements = std::uint64_t{1} << 31;

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char buf[4] = {
      static_cast<unsigned char>(v & 0xff),
      static_cast<unsigned char>((v >> 8) & 0xff),
      static_cast<unsigned char>((v >> 16) & 0xff),
      static_cast<unsigned char>((v >> 24) & 0xff),
  };
  os.write(reinterpret_cast<const char*>(buf), 4);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char buf[4];
  if (!is.read(reinterpret_cast<char*>(buf), 4))
    throw Error(errc::truncated_file, "unexpected end of file");
  return static_cast<std::uint32_t>(buf[0]) |
         (static_cast<std::uint32_t>(buf[1]) << 8) |
         (static_cast<std::uint32_t>(buf[2]) << 16) |
         (static_cast<std::uint32_t>(buf[3]) << 24);
}

void put_f32(std::ostream& os, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(os, bits);
}

float get_f32(std::istream& is) {
  std::uint32_t bits = get_u32(is);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

void read_magic(std::istream& is, const char expect[4]) {
  char magic[4];
  if (!is.read(magic, 4))
    throw Error(errc::truncated_file, "file shorter than magic");
  if (std::memcmp(magic, expect, 4) != 0)
    throw Error(errc::bad_magic, "bad magic, expected " + std::string(expect, 4));
}

struct OgfHeader {
  Grid2D grid;
  int channels;
};

OgfHeader read_ogf_header(std::istream& is) {
  read_magic(is, "OGRD");
  std::uint32_t version = get_u32(is);
  if (version != 1)
    throw Error(errc::bad_format, "unsupported OGF version " + std::to_string(version));
  std::uint64_t h = get_u32(is);
  std::uint64_t w = get_u32(is);
  std::uint64_t c = get_u32(is);
  if (h < 1 || w < 1 || c < 1 || h * w * c > kMaxElements)
    throw Error(errc::bad_dimensions, "OGF dimensions out of range");
  return {Grid2D(static_cast<int>(h), static_cast<int>(w)), static_cast<int>(c)};
}

std::vector<float> read_payload(std::istream& is, std::size_t count) {
  std::vector<float> data(count);
  for (std::size_t i = 0; i < count; ++i) data[i] = get_f32(is);
  return data;
}

// Renormalizes a probability row in place. Rows already within the
// construction tolerance are left bit-identical so that save/load round
// trips exactly; rows drifting up to the load tolerance are rescaled.
void fix_row(float* row, int n, bool allow_zero) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(row[i]))
      throw Error(errc::bad_probability_sum, "non-finite probability value");
    sum += row[i];
  }
  if (allow_zero && sum == 0.0) return;
  if (std::abs(sum - 1.0) <= kFieldSumTol) return;
  if (std::abs(sum - 1.0) > kLoadSumTol)
    throw Error(errc::bad_probability_sum,
                "probability row sums to " + std::to_string(sum));
  for (int i = 0; i < n; ++i) row[i] = static_cast<float>(row[i] / sum);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(errc::io_failure, "cannot open " + path + " for writing");
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(errc::io_failure, "cannot open " + path);
  return is;
}

}  // namespace

Dir opposite(Dir d) {
  switch (d) {
    case Dir::kLeft: return Dir::kRight;
    case Dir::kRight: return Dir::kLeft;
    case Dir::kTop: return Dir::kBottom;
    case Dir::kBottom: return Dir::kTop;
  }
  throw Error(errc::bad_argument, "bad direction");
}

int neighbor(const Grid2D& g, int p, Dir d) {
  int r = g.row(p), c = g.col(p);
  switch (d) {
    case Dir::kLeft: c -= 1; break;
    case Dir::kRight: c += 1; break;
    case Dir::kTop: r -= 1; break;
    case Dir::kBottom: r += 1; break;
  }
  return g.contains(r, c) ? g.index(r, c) : -1;
}

std::vector<Neighbor> neighbors4(const Grid2D& g, int p) {
  if (!g.contains_pixel(p))
    throw Error(errc::bad_argument, "pixel out of bounds");
  std::vector<Neighbor> out;
  out.reserve(4);
  for (int d = 0; d < kDirCount; ++d) {
    int q = neighbor(g, p, static_cast<Dir>(d));
    if (q >= 0) out.push_back({q, static_cast<Dir>(d)});
  }
  return out;
}

void SemanticField::validate() const {
  if (classes < 2)
    throw Error(errc::bad_dimensions, "semantic field needs >= 2 classes");
  if (probs.size() != static_cast<std::size_t>(grid.size()) * classes)
    throw Error(errc::bad_dimensions, "semantic payload size mismatch");
  for (int p = 0; p < grid.size(); ++p) {
    double sum = 0.0;
    for (int c = 0; c < classes; ++c) {
      float v = probs[p * classes + c];
      if (!(v >= 0.0f) || !std::isfinite(v))
        throw Error(errc::bad_probability_sum, "bad class probability");
      sum += v;
    }
    if (std::abs(sum - 1.0) > kFieldSumTol)
      throw Error(errc::bad_probability_sum, "class probabilities do not sum to 1");
  }
}

bool OrientedBoundaryField::orient_defined(int p) const {
  for (int d = 0; d < kDirCount; ++d)
    if (e[p * kDirCount + d] != 0.0f) return true;
  return false;
}

void OrientedBoundaryField::validate() const {
  if (b.size() != static_cast<std::size_t>(grid.size()) ||
      e.size() != static_cast<std::size_t>(grid.size()) * kDirCount)
    throw Error(errc::bad_dimensions, "boundary payload size mismatch");
  for (int p = 0; p < grid.size(); ++p) {
    if (!(b[p] >= -1e-6f && b[p] <= 1.0f + 1e-6f))
      throw Error(errc::bad_probability_sum, "boundary probability outside [0,1]");
    double sum = 0.0;
    for (int d = 0; d < kDirCount; ++d) {
      float v = e[p * kDirCount + d];
      if (!(v >= 0.0f) || !std::isfinite(v))
        throw Error(errc::bad_probability_sum, "bad orientation probability");
      sum += v;
    }
    if (sum != 0.0 && std::abs(sum - 1.0) > kFieldSumTol)
      throw Error(errc::bad_probability_sum, "orientation row does not sum to 1");
  }
}

OcclusionPairSet::OcclusionPairSet(const Grid2D& g, std::vector<PixelPair> pairs)
    : pairs_(std::move(pairs)) {
  std::sort(pairs_.begin(), pairs_.end());
  if (std::adjacent_find(pairs_.begin(), pairs_.end()) != pairs_.end())
    throw Error(errc::bad_argument, "duplicate occlusion pair");
  for (const PixelPair& pr : pairs_) {
    if (pr.p == pr.q)
      throw Error(errc::bad_argument, "occlusion pair with p == q");
    if (!g.contains_pixel(pr.p) || !g.contains_pixel(pr.q))
      throw Error(errc::bad_argument, "occlusion pair out of bounds");
    bool adjacent = false;
    for (int d = 0; d < kDirCount; ++d)
      adjacent |= neighbor(g, pr.p, static_cast<Dir>(d)) == pr.q;
    if (!adjacent)
      throw Error(errc::bad_argument, "occlusion pair not 4-adjacent");
    if (std::binary_search(pairs_.begin(), pairs_.end(), PixelPair{pr.q, pr.p}))
      throw Error(errc::bad_argument, "occlusion pair present in both directions");
  }
}

bool OcclusionPairSet::contains(PixelPair pr) const {
  return std::binary_search(pairs_.begin(), pairs_.end(), pr);
}

SemanticField load_semantic(const std::string& path) {
  std::ifstream is = open_in(path);
  OgfHeader hdr = read_ogf_header(is);
  if (hdr.channels < 2)
    throw Error(errc::bad_dimensions, "semantic OGF needs >= 2 channels");
  SemanticField f;
  f.grid = hdr.grid;
  f.classes = hdr.channels;
  f.probs = read_payload(is, static_cast<std::size_t>(hdr.grid.size()) * hdr.channels);
  for (int p = 0; p < f.grid.size(); ++p)
    fix_row(f.probs.data() + static_cast<std::size_t>(p) * f.classes, f.classes,
            /*allow_zero=*/false);
  f.validate();
  return f;
}

OrientedBoundaryField load_boundary(const std::string& path) {
  std::ifstream is = open_in(path);
  OgfHeader hdr = read_ogf_header(is);
  if (hdr.channels != 1 + kDirCount)
    throw Error(errc::bad_dimensions, "boundary OGF needs 5 channels");
  OrientedBoundaryField f;
  f.grid = hdr.grid;
  f.b.resize(hdr.grid.size());
  f.e.resize(static_cast<std::size_t>(hdr.grid.size()) * kDirCount);
  std::vector<float> raw = read_payload(is, static_cast<std::size_t>(hdr.grid.size()) * 5);
  for (int p = 0; p < f.grid.size(); ++p) {
    f.b[p] = raw[p * 5];
    for (int d = 0; d < kDirCount; ++d) f.e[p * kDirCount + d] = raw[p * 5 + 1 + d];
    fix_row(f.e.data() + static_cast<std::size_t>(p) * kDirCount, kDirCount,
            /*allow_zero=*/true);
  }
  f.validate();
  return f;
}

OcclusionLabeling load_labeling(const std::string& path) {
  std::ifstream is = open_in(path);
  read_magic(is, "OLBL");
  std::uint32_t version = get_u32(is);
  if (version != 1)
    throw Error(errc::bad_format, "unsupported OLBL version " + std::to_string(version));
  std::uint64_t h = get_u32(is);
  std::uint64_t w = get_u32(is);
  if (h < 1 || w < 1 || h * w > kMaxElements)
    throw Error(errc::bad_dimensions, "OLBL dimensions out of range");
  OcclusionLabeling l;
  l.grid = Grid2D(static_cast<int>(h), static_cast<int>(w));
  l.labels.resize(l.grid.size());
  for (int p = 0; p < l.grid.size(); ++p) l.labels[p] = get_u32(is);
  return l;
}

Field load_field(const std::string& path, FieldKind kind) {
  switch (kind) {
    case FieldKind::semantic: return load_semantic(path);
    case FieldKind::boundary: return load_boundary(path);
    case FieldKind::labeling: return load_labeling(path);
  }
  throw Error(errc::bad_argument, "bad field kind");
}

void save_field(const SemanticField& f, const std::string& path) {
  std::ofstream os = open_out(path);
  os.write("OGRD", 4);
  put_u32(os, 1);
  put_u32(os, static_cast<std::uint32_t>(f.grid.height));
  put_u32(os, static_cast<std::uint32_t>(f.grid.width));
  put_u32(os, static_cast<std::uint32_t>(f.classes));
  for (float v : f.probs) put_f32(os, v);
  if (!os) throw Error(errc::io_failure, "write failed: " + path);
}

void save_field(const OrientedBoundaryField& f, const std::string& path) {
  std::ofstream os = open_out(path);
  os.write("OGRD", 4);
  put_u32(os, 1);
  put_u32(os, static_cast<std::uint32_t>(f.grid.height));
  put_u32(os, static_cast<std::uint32_t>(f.grid.width));
  put_u32(os, 1 + kDirCount);
  for (int p = 0; p < f.grid.size(); ++p) {
    put_f32(os, f.b[p]);
    for (int d = 0; d < kDirCount; ++d) put_f32(os, f.e[p * kDirCount + d]);
  }
  if (!os) throw Error(errc::io_failure, "write failed: " + path);
}

void save_field(const OcclusionLabeling& f, const std::string& path) {
  std::ofstream os = open_out(path);
  os.write("OLBL", 4);
  put_u32(os, 1);
  put_u32(os, static_cast<std::uint32_t>(f.grid.height));
  put_u32(os, static_cast<std::uint32_t>(f.grid.width));
  for (std::uint32_t v : f.labels) put_u32(os, v);
  if (!os) throw Error(errc::io_failure, "write failed: " + path);
}

}  // namespace oosis
