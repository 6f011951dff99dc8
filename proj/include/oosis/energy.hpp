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

#ifndef OOSIS_ENERGY_HPP_
#define OOSIS_ENERGY_HPP_

#include <cstdint>

#include "oosis/core.hpp"

namespace oosis {

inline constexpr double kDefaultLambda = 20.0;
inline constexpr double kDefaultMu = 100.0;

/// Weights of the labeling energy. c_inf is the prohibitive cost charged
/// when an occludee out-labels its occluder; validity against a concrete
/// problem requires that a single prohibited pair outweighs everything
/// else the energy can accumulate, in weighted units:
///   mu * c_inf > |P| + lambda * |N| + mu * |O|.
struct EnergyParams {
  double lambda = kDefaultLambda;
  double mu = kDefaultMu;
  double c_inf = 0.0;
};

/// c_inf = 1 + |P| + lambda * |N| + mu * |O| for the given problem size.
double default_c_inf(const Grid2D& grid, std::size_t pair_count, double lambda,
                     double mu);

/// Number of unordered 4-adjacent pixel pairs.
std::size_t neighbor_pair_count(const Grid2D& grid);

/// E(x) = sum_p u_p(x_p) + lambda * sum_N v(x_p, x_q) + mu * sum_O o(x_p, x_q)
/// over the 4-connected grid (each unordered pair counted once) and the
/// ordered occlusion pairs.
struct EnergyProblem {
  SemanticField semantic;
  OcclusionPairSet pairs;
  EnergyParams params;

  EnergyProblem(SemanticField s, OcclusionPairSet o, EnergyParams p);

  const Grid2D& grid() const { return semantic.grid; }
};

/// (1 - sigma_p) [x_p = 0] + sigma_p [x_p != 0]
double unary(const EnergyProblem& problem, int p, std::uint32_t label);

/// Potts: [x_p != x_q]
double smooth(std::uint32_t xp, std::uint32_t xq);

/// c_inf [x_p < x_q] - [x_p > x_q]; -1 is an activated pair.
double occl(const EnergyParams& params, std::uint32_t xp, std::uint32_t xq);

double evaluate(const EnergyProblem& problem, const OcclusionLabeling& x);

/// Number of (p, q) in O with x_p > x_q.
std::size_t activated_pairs(const EnergyProblem& problem,
                            const OcclusionLabeling& x);

}  // namespace oosis

#endif  // OOSIS_ENERGY_HPP_
