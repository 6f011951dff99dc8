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

#include <doctest.h>

#include <random>

#include "oosis/moves.hpp"
#include "scene_fixtures.hpp"

using namespace oosis;

namespace {

SemanticField background_field(const Grid2D& g, const std::vector<float>& sigma) {
  SemanticField f;
  f.grid = g;
  f.classes = 2;
  f.probs.resize(static_cast<std::size_t>(g.size()) * 2);
  for (int p = 0; p < g.size(); ++p) {
    f.probs[p * 2] = sigma[p];
    f.probs[p * 2 + 1] = 1.0f - sigma[p];
  }
  return f;
}

EnergyProblem make_problem(const Grid2D& g, const std::vector<float>& sigma,
                           std::vector<PixelPair> pairs) {
  OcclusionPairSet set(g, std::move(pairs));
  EnergyParams params{20.0, 100.0, default_c_inf(g, set.size(), 20.0, 100.0)};
  return EnergyProblem(background_field(g, sigma), std::move(set), params);
}

OcclusionLabeling apply_jump(const OcclusionLabeling& x,
                             const std::vector<std::uint8_t>& y) {
  OcclusionLabeling out = x;
  for (std::size_t p = 0; p < out.labels.size(); ++p)
    if (y[p]) ++out.labels[p];
  return out;
}

// Best jump by enumerating all 2^n subsets.
double brute_best_jump(const EnergyProblem& problem, const OcclusionLabeling& x) {
  const int n = problem.grid().size();
  double best = evaluate(problem, x);
  std::vector<std::uint8_t> y(n, 0);
  for (std::uint32_t bits = 1; bits < (1u << n); ++bits) {
    for (int i = 0; i < n; ++i) y[i] = (bits >> i) & 1u;
    best = std::min(best, evaluate(problem, apply_jump(x, y)));
  }
  return best;
}

// dyadic backgrounds keep all energy sums exact in doubles
std::vector<float> random_sigma(std::mt19937_64& rng, int n) {
  std::vector<float> sigma(n);
  for (auto& s : sigma) s = static_cast<float>(rng() % 257) / 256.0f;
  return sigma;
}

}  // namespace

TEST_CASE("jump energy from all-zero equals the move energy exactly") {
  std::mt19937_64 rng(3);
  Grid2D g(3, 3);
  EnergyProblem problem =
      make_problem(g, random_sigma(rng, 9), {{4, 5}, {1, 2}, {7, 4}});
  OcclusionLabeling zero{g, std::vector<std::uint32_t>(9, 0)};
  BinaryEnergy e = build_jump_energy(problem, zero);
  std::vector<std::uint8_t> y(9);
  for (int trial = 0; trial < 100; ++trial) {
    for (auto& v : y) v = rng() & 1;
    CHECK(e.evaluate(y) == evaluate(problem, apply_jump(zero, y)));
  }
}

TEST_CASE("labels one apart get the constant smoothness bound") {
  Grid2D g(1, 2);
  EnergyProblem problem = make_problem(g, {0.5f, 0.5f}, {});
  OcclusionLabeling x{g, {1, 2}};
  BinaryEnergy e = build_jump_energy(problem, x);
  REQUIRE(e.pairwise().size() == 1);
  const PairwiseTerm& t = e.pairwise()[0];
  CHECK(t.f00 == 20.0);
  CHECK(t.f01 == 20.0);
  CHECK(t.f10 == 20.0);
  CHECK(t.f11 == 20.0);
}

TEST_CASE("occlusion term of an equal-label pair activates on (1,0)") {
  Grid2D g(1, 2);
  EnergyProblem problem = make_problem(g, {0.5f, 0.5f}, {{0, 1}});
  OcclusionLabeling x{g, {1, 1}};
  BinaryEnergy e = build_jump_energy(problem, x);
  // the grid pair doubles as the occlusion pair, so the term carries both
  // lambda * v-hat and mu * o-hat; the occlusion part of (1,0) is -mu
  REQUIRE(e.pairwise().size() == 1);
  const PairwiseTerm& t = e.pairwise()[0];
  const double lambda = problem.params.lambda;
  const double mu = problem.params.mu;
  CHECK(t.f10 == lambda * smooth(2, 1) + mu * occl(problem.params, 2, 1));
  CHECK(t.f10 == lambda - mu);
  CHECK(t.f00 == 0.0);
  CHECK(t.f11 == 0.0);
  CHECK(t.f01 == lambda + mu * problem.params.c_inf);
}

TEST_CASE("background certainty with no pairs is a fixed point") {
  Grid2D g(3, 3);
  EnergyProblem problem = make_problem(g, std::vector<float>(9, 1.0f), {});
  OcclusionLabeling zero{g, std::vector<std::uint32_t>(9, 0)};
  MoveResult r = jump_move(problem, zero);
  CHECK_FALSE(r.changed);
  CHECK(r.labeling == zero);
}

TEST_CASE("certain foreground converges to all-ones after one jump") {
  Grid2D g(3, 3);
  EnergyProblem problem = make_problem(g, std::vector<float>(9, 0.0f), {});
  OptimizeResult r = optimize_jump(problem);
  for (auto v : r.labeling.labels) CHECK(v == 1);
  // one changing move plus the fixed-point check
  CHECK(r.trace.moves.size() == 2);
  CHECK(r.trace.moves[0].pixels_changed == 9);
  CHECK(r.trace.moves[1].pixels_changed == 0);
}

TEST_CASE("jump moves never increase the energy") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    Grid2D g(3, 4);
    std::vector<PixelPair> pairs;
    if (trial % 2) pairs = {{5, 6}, {1, 0}, {9, 10}};
    EnergyProblem problem = make_problem(g, random_sigma(rng, g.size()), pairs);
    OcclusionLabeling x{g, std::vector<std::uint32_t>(g.size(), 0)};
    for (int step = 0; step < 4; ++step) {
      MoveResult r = jump_move(problem, x);
      CHECK(evaluate(problem, r.labeling) <= evaluate(problem, x));
      x = r.labeling;
    }
  }
}

TEST_CASE("without (k, k+1) neighbors the jump is globally optimal") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    int h = 2, w = 2 + static_cast<int>(rng() % 2);
    Grid2D g(h, w);
    const int n = g.size();
    // even labels: no two adjacent labels can differ by exactly one
    OcclusionLabeling x{g, std::vector<std::uint32_t>(n)};
    for (auto& v : x.labels) v = 2 * (rng() % 3);
    std::vector<PixelPair> pairs;
    for (int p = 0; p < n; ++p)
      for (const Neighbor& nb : neighbors4(g, p))
        if (x.at(p) >= x.at(nb.pixel) && rng() % 3 == 0 &&
            !(x.at(p) == x.at(nb.pixel) && nb.pixel < p))
          pairs.push_back({p, nb.pixel});
    EnergyProblem problem = make_problem(g, random_sigma(rng, n), pairs);
    MoveResult r = jump_move(problem, x);
    CHECK(evaluate(problem, r.labeling) == brute_best_jump(problem, x));
  }
}

TEST_CASE("micro problem reaches the exhaustive multi-label optimum") {
  Grid2D g(3, 3);
  std::vector<float> sigma = {1.0f, 0.1f, 0.9f, 0.0f, 0.2f,
                              0.8f, 0.3f, 0.0f, 1.0f};
  EnergyProblem problem = make_problem(g, sigma, {{4, 1}, {3, 4}});
  OptimizeResult r = optimize_jump(problem);
  double best = 1e18;
  OcclusionLabeling probe{g, std::vector<std::uint32_t>(9, 0)};
  for (int code = 0; code < 262144; ++code) {  // 4^9 labelings
    int rest = code;
    for (int p = 0; p < 9; ++p) {
      probe.labels[p] = rest & 3;
      rest >>= 2;
    }
    best = std::min(best, evaluate(problem, probe));
  }
  CHECK(r.trace.final_energy == best);
}

TEST_CASE("expansion on label 1 coincides with the first jump") {
  std::mt19937_64 rng(13);
  Grid2D g(3, 4);
  EnergyProblem problem =
      make_problem(g, random_sigma(rng, g.size()), {{5, 6}, {1, 0}});
  OcclusionLabeling zero{g, std::vector<std::uint32_t>(g.size(), 0)};
  MoveResult jump = jump_move(problem, zero);
  OptimizeResult expansion = expansion_cycle_increasing(problem, 1);
  CHECK(expansion.labeling == jump.labeling);
}

TEST_CASE("without occlusion pairs expansion matches jump optimization") {
  std::mt19937_64 rng(17);
  Grid2D g(3, 4);
  EnergyProblem problem = make_problem(g, random_sigma(rng, g.size()), {});
  OptimizeResult jump = optimize_jump(problem);
  OptimizeResult expansion = expansion_cycle_increasing(problem, 3);
  CHECK(expansion.labeling == jump.labeling);
  CHECK(expansion.trace.final_energy == jump.trace.final_energy);
}

TEST_CASE("three-layer scene: jump beats one increasing expansion cycle") {
  testing::LayeredScene scene = testing::three_layer_scene();
  EnergyProblem problem = testing::scene_problem(scene);

  OptimizeResult jump = optimize_jump(problem);
  OptimizeResult expansion = expansion_cycle_increasing(problem, 3);

  CHECK(jump.trace.final_energy < expansion.trace.final_energy);

  // the jump fixed point separates the cars: the back car stays at 1,
  // the bodies of the two front cars reach 2, and the middle car's rim
  // occluded by the front car is left one label behind (the submodular
  // bound hides the gain of catching up)
  const Grid2D& g = problem.grid();
  CHECK(jump.labeling.at(g.index(5, 5)) == 1);    // back car
  CHECK(jump.labeling.at(g.index(5, 12)) == 2);   // middle car body
  CHECK(jump.labeling.at(g.index(5, 15)) == 1);   // middle car rim under front
  CHECK(jump.labeling.at(g.index(5, 20)) == 2);   // front car
  // the expansion cycle cannot lift the occluded rims off the background
  CHECK(expansion.labeling.at(g.index(5, 15)) == 0);

  // all surviving occlusion pairs are activated at the jump fixed point
  CHECK(activated_pairs(problem, jump.labeling) == problem.pairs.size());

  for (const MoveRecord& m : jump.trace.moves) CHECK(m.energy_after <= m.energy_before);
  for (const MoveRecord& m : expansion.trace.moves)
    CHECK(m.energy_after <= m.energy_before);
}

TEST_CASE("monotone activated-pair counts on the layered scene") {
  testing::LayeredScene scene = testing::three_layer_scene();
  EnergyProblem problem = testing::scene_problem(scene);
  OptimizeResult jump = optimize_jump(problem);
  std::size_t prev = 0;
  for (const MoveRecord& m : jump.trace.moves) {
    CHECK(m.activated_pairs >= prev);
    prev = m.activated_pairs;
  }
}

TEST_CASE("the bounded jump energy upper-bounds the true move energy") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    Grid2D g(2, 3);
    EnergyProblem problem = make_problem(g, random_sigma(rng, 6), {{0, 1}});
    OcclusionLabeling x{g, std::vector<std::uint32_t>(6)};
    for (auto& v : x.labels) v = rng() % 3;
    x.labels[0] = std::max(x.labels[0], x.labels[1]);  // keep (0,1) legal
    BinaryEnergy bounded = build_jump_energy(problem, x);
    std::vector<std::uint8_t> y(6);
    for (std::uint32_t bits = 0; bits < 64; ++bits) {
      for (int i = 0; i < 6; ++i) y[i] = (bits >> i) & 1u;
      double truth = evaluate(problem, apply_jump(x, y));
      double bound = bounded.evaluate(y);
      CHECK(bound >= truth);
      // the bound is tight unless some move levels a one-apart pair
      bool leveled = false;
      for (int p = 0; p < 6; ++p)
        for (const Neighbor& nb : neighbors4(g, p)) {
          std::uint32_t a = x.at(p) + y[p], b = x.at(nb.pixel) + y[nb.pixel];
          if (a == b && x.at(p) != x.at(nb.pixel) &&
              (x.at(p) + 1 == x.at(nb.pixel) || x.at(nb.pixel) + 1 == x.at(p)))
            leveled = true;
        }
      if (!leveled) CHECK(bound == truth);
    }
  }
}

TEST_CASE("optimizer never leaves a prohibited pair behind") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    Grid2D g(3, 3);
    std::vector<PixelPair> pairs = {{4, 1}, {4, 7}, {3, 0}};
    EnergyProblem problem = make_problem(g, random_sigma(rng, 9), pairs);
    OptimizeResult r = optimize_jump(problem);
    for (const PixelPair& pr : problem.pairs.pairs())
      CHECK(r.labeling.at(pr.p) >= r.labeling.at(pr.q));
  }
}
