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

#include "oosis/energy.hpp"

#include <utility>

namespace oosis {

std::size_t neighbor_pair_count(const Grid2D& grid) {
  return static_cast<std::size_t>(grid.height) * (grid.width - 1) +
         static_cast<std::size_t>(grid.width) * (grid.height - 1);
}

double default_c_inf(const Grid2D& grid, std::size_t pair_count, double lambda,
                     double mu) {
  return 1.0 + grid.size() + lambda * static_cast<double>(neighbor_pair_count(grid)) +
         mu * static_cast<double>(pair_count);
}

EnergyProblem::EnergyProblem(SemanticField s, OcclusionPairSet o, EnergyParams p)
    : semantic(std::move(s)), pairs(std::move(o)), params(p) {
  semantic.validate();
  if (params.lambda <= 0.0 || params.mu <= 0.0 || params.c_inf <= 0.0)
    throw Error(errc::bad_argument, "energy weights must be positive");
  for (const PixelPair& pr : pairs.pairs())
    if (!grid().contains_pixel(pr.p) || !grid().contains_pixel(pr.q))
      throw Error(errc::bad_argument, "occlusion pair outside semantic grid");
  // One prohibited pair must dominate any achievable total of the other
  // terms, so labelings violating an occlusion pair can never win.
  double achievable = static_cast<double>(grid().size()) +
                      params.lambda * static_cast<double>(neighbor_pair_count(grid())) +
                      params.mu * static_cast<double>(pairs.size());
  if (params.c_inf <= achievable || params.mu * params.c_inf <= achievable)
    throw Error(errc::bad_argument, "c_inf too small for this problem");
}

double unary(const EnergyProblem& problem, int p, std::uint32_t label) {
  if (!problem.grid().contains_pixel(p))
    throw Error(errc::bad_argument, "pixel out of bounds");
  double sigma = problem.semantic.background(p);
  return label == 0 ? 1.0 - sigma : sigma;
}

double smooth(std::uint32_t xp, std::uint32_t xq) { return xp != xq ? 1.0 : 0.0; }

double occl(const EnergyParams& params, std::uint32_t xp, std::uint32_t xq) {
  if (xp < xq) return params.c_inf;
  if (xp > xq) return -1.0;
  return 0.0;
}

double evaluate(const EnergyProblem& problem, const OcclusionLabeling& x) {
  if (x.grid != problem.grid())
    throw Error(errc::bad_argument, "labeling grid mismatch");
  const Grid2D& g = problem.grid();
  double total = 0.0;
  for (int p = 0; p < g.size(); ++p) total += unary(problem, p, x.at(p));
  double smooth_sum = 0.0;
  for (int r = 0; r < g.height; ++r) {
    for (int c = 0; c < g.width; ++c) {
      int p = g.index(r, c);
      if (c + 1 < g.width) smooth_sum += smooth(x.at(p), x.at(p + 1));
      if (r + 1 < g.height) smooth_sum += smooth(x.at(p), x.at(p + g.width));
    }
  }
  double occl_sum = 0.0;
  for (const PixelPair& pr : problem.pairs.pairs())
    occl_sum += occl(problem.params, x.at(pr.p), x.at(pr.q));
  return total + problem.params.lambda * smooth_sum + problem.params.mu * occl_sum;
}

std::size_t activated_pairs(const EnergyProblem& problem,
                            const OcclusionLabeling& x) {
  std::size_t count = 0;
  for (const PixelPair& pr : problem.pairs.pairs())
    if (x.at(pr.p) > x.at(pr.q)) ++count;
  return count;
}

}  // namespace oosis
