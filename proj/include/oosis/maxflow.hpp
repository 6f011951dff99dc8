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

#ifndef OOSIS_MAXFLOW_HPP_
#define OOSIS_MAXFLOW_HPP_

#include <cstdint>
#include <vector>

#include "oosis/core.hpp"

namespace oosis {

struct PairwiseTerm {
  int i;
  int j;
  double f00;
  double f01;
  double f10;
  double f11;
};

/// Pairwise binary energy. Every pairwise term must satisfy the
/// submodularity condition f00 + f11 <= f01 + f10; construction rejects
/// violations rather than clipping them.
class BinaryEnergy {
 public:
  BinaryEnergy(int n, std::vector<std::pair<double, double>> unary,
               std::vector<PairwiseTerm> pairwise);

  int size() const { return n_; }
  const std::vector<std::pair<double, double>>& unary() const { return unary_; }
  const std::vector<PairwiseTerm>& pairwise() const { return pairwise_; }

  double evaluate(const std::vector<std::uint8_t>& y) const;

 private:
  int n_;
  std::vector<std::pair<double, double>> unary_;   // (cost at 0, cost at 1)
  std::vector<PairwiseTerm> pairwise_;
};

/// s-t network over the energy's variable nodes. source_cap[i] is charged
/// when i takes label 1 and sink_cap[i] when it takes label 0; a
/// node-to-node edge (u, v) is charged by configurations (y_u, y_v) = (0, 1).
/// All capacities are nonnegative after reparametrization.
struct FlowGraph {
  struct Edge {
    int u;
    int v;
    double cap;
  };

  int n = 0;
  std::vector<double> source_cap;
  std::vector<double> sink_cap;
  std::vector<Edge> edges;
};

/// Kolmogorov-Zabih reduction of a submodular binary energy to a cut
/// problem: min-cut(graph) + constant equals the energy minimum, and the
/// cut side of each node encodes the minimizing assignment.
struct Reduction {
  FlowGraph graph;
  double constant = 0.0;
};

Reduction reduce(const BinaryEnergy& e);

/// Capacity of the cut induced by assignment y (label 1 = sink side).
/// Useful for checking the reparametrization identity.
double cut_capacity(const FlowGraph& g, const std::vector<std::uint8_t>& y);

struct MaxflowResult {
  double flow = 0.0;
  // Minimum cut with the fewest label-1 nodes: y_i = 1 iff node i can
  // still reach the sink in the residual network.
  std::vector<std::uint8_t> assignment;
};

MaxflowResult max_flow(const FlowGraph& g);

struct BinaryMinimum {
  std::vector<std::uint8_t> assignment;
  double value = 0.0;
};

/// Exact minimizer for submodular binary energies via graph cut.
BinaryMinimum minimize_binary(const BinaryEnergy& e);

}  // namespace oosis

#endif  // OOSIS_MAXFLOW_HPP_
