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

#ifndef OOSIS_MOVES_HPP_
#define OOSIS_MOVES_HPP_

#include <string>
#include <vector>

#include "oosis/energy.hpp"
#include "oosis/maxflow.hpp"

namespace oosis {

struct MoveRecord {
  int index = 0;             // position in the optimization run
  std::uint32_t move_label = 0;  // jump number, or alpha for expansions
  double energy_before = 0.0;
  double energy_after = 0.0;
  std::size_t pixels_changed = 0;
  std::size_t activated_pairs = 0;  // pairs with x_p > x_q after the move
};

struct MoveTrace {
  std::string algorithm;
  std::vector<MoveRecord> moves;
  double final_energy = 0.0;
};

/// Thrown when the jump optimizer exceeds its |O| + 2 move cap; carries
/// the trace collected so far.
class IterationCapError : public Error {
 public:
  IterationCapError(std::string what, MoveTrace trace)
      : Error(errc::iteration_cap, std::move(what)), trace_(std::move(trace)) {}
  const MoveTrace& trace() const { return trace_; }

 private:
  MoveTrace trace_;
};

/// Binary energy whose minimizer is the best jump from x_c (y_p = 1 means
/// x_p increases by 1). Unaries follow u, occlusion terms follow mu * o on
/// the shifted labels, and smoothness terms follow lambda * v except for
/// neighbor pairs whose current labels differ by exactly one: those are
/// not submodular and are replaced by the constant lambda, an upper bound
/// that keeps the move energy-nonincreasing.
BinaryEnergy build_jump_energy(const EnergyProblem& problem,
                               const OcclusionLabeling& x_c);

struct MoveResult {
  OcclusionLabeling labeling;
  bool changed = false;
};

/// One optimal (bounded) jump move from x_c.
MoveResult jump_move(const EnergyProblem& problem, const OcclusionLabeling& x_c);

struct OptimizeResult {
  OcclusionLabeling labeling;
  MoveTrace trace;
};

/// Jump moves from the all-zero labeling until the labeling stops
/// changing. Throws IterationCapError beyond |O| + 2 changing moves.
OptimizeResult optimize_jump(const EnergyProblem& problem);

/// One cycle of alpha-expansions for alpha = 1..l_max in increasing order
/// from the all-zero labeling. Every expansion in this regime is
/// submodular; a violation raises errc::non_submodular.
OptimizeResult expansion_cycle_increasing(const EnergyProblem& problem,
                                          std::uint32_t l_max);

}  // namespace oosis

#endif  // OOSIS_MOVES_HPP_
