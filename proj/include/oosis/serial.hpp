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

#ifndef OOSIS_SERIAL_HPP_
#define OOSIS_SERIAL_HPP_

#include <string>
#include <vector>

#include "oosis/instances.hpp"
#include "oosis/metrics.hpp"
#include "oosis/moves.hpp"

namespace oosis {

// JSON texts are emitted deterministically (sorted keys, two-space
// indent) so identical data serializes to identical bytes. Pixel masks
// are [start, length] runs over row-major indices.

std::string annotation_to_json(const InstanceAnnotation& a);
InstanceAnnotation annotation_from_json(const std::string& text);

std::string instances_to_json(const InstanceSet& s);
InstanceSet instances_from_json(const std::string& text);

std::string graph_to_json(const OcclusionGraph& g);
OcclusionGraph graph_from_json(const std::string& text);

std::string trace_to_json(const MoveTrace& t);

/// CSV with header threshold,recall,accuracy; an undefined accuracy is an
/// empty cell.
std::string oair_csv(const std::vector<OairPoint>& points);

/// Binary PGM (P5, maxval 255).
std::string pgm_bytes(const Grid2D& grid, const std::vector<std::uint8_t>& img);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace oosis

#endif  // OOSIS_SERIAL_HPP_
