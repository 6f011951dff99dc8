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

#include "oosis/moves.hpp"

#include <map>
#include <utility>

namespace oosis {

namespace {

void check_labeling(const EnergyProblem& problem, const OcclusionLabeling& x) {
  if (x.grid != problem.grid() ||
      x.labels.size() != static_cast<std::size_t>(problem.grid().size()))
    throw Error(errc::bad_argument, "labeling grid mismatch");
}

// Accumulates pairwise entries per unordered pixel pair. A pair that is
// both a grid neighbor and an occlusion pair contributes one merged term
// (a sum of submodular terms stays submodular).
class PairAccumulator {
 public:
  void add(int p, int q, double f00, double f01, double f10, double f11) {
    if (p > q) {
      std::swap(p, q);
      std::swap(f01, f10);
    }
    auto [it, fresh] = index_.try_emplace({p, q}, terms_.size());
    if (fresh) terms_.push_back({p, q, 0.0, 0.0, 0.0, 0.0});
    PairwiseTerm& t = terms_[it->second];
    t.f00 += f00;
    t.f01 += f01;
    t.f10 += f10;
    t.f11 += f11;
  }

  std::vector<PairwiseTerm> take() { return std::move(terms_); }

 private:
  std::map<std::pair<int, int>, std::size_t> index_;
  std::vector<PairwiseTerm> terms_;
};

template <typename MakeEntries>
void add_neighbor_terms(const EnergyProblem& problem, const OcclusionLabeling& x_c,
                        PairAccumulator& acc, const MakeEntries& make) {
  const Grid2D& g = problem.grid();
  for (int r = 0; r < g.height; ++r) {
    for (int c = 0; c < g.width; ++c) {
      int p = g.index(r, c);
      if (c + 1 < g.width) make(acc, p, p + 1, x_c.at(p), x_c.at(p + 1));
      if (r + 1 < g.height)
        make(acc, p, p + g.width, x_c.at(p), x_c.at(p + g.width));
    }
  }
}

OcclusionLabeling apply_binary(const OcclusionLabeling& x_c,
                               const std::vector<std::uint8_t>& y,
                               std::uint32_t alpha_or_zero,
                               std::size_t* pixels_changed) {
  OcclusionLabeling x = x_c;
  std::size_t changed = 0;
  for (std::size_t p = 0; p < x.labels.size(); ++p) {
    if (!y[p]) continue;
    std::uint32_t next = alpha_or_zero == 0 ? x.labels[p] + 1 : alpha_or_zero;
    if (next != x.labels[p]) {
      x.labels[p] = next;
      ++changed;
    }
  }
  if (pixels_changed) *pixels_changed = changed;
  return x;
}

BinaryEnergy build_expansion_energy(const EnergyProblem& problem,
                                    const OcclusionLabeling& x_c,
                                    std::uint32_t alpha) {
  check_labeling(problem, x_c);
  const Grid2D& g = problem.grid();
  const double lambda = problem.params.lambda;
  const double mu = problem.params.mu;
  std::vector<std::pair<double, double>> unaries(g.size());
  for (int p = 0; p < g.size(); ++p)
    unaries[p] = {unary(problem, p, x_c.at(p)), unary(problem, p, alpha)};
  PairAccumulator acc;
  add_neighbor_terms(problem, x_c, acc,
                     [&](PairAccumulator& a, int p, int q, std::uint32_t xp,
                         std::uint32_t xq) {
                       a.add(p, q, lambda * smooth(xp, xq),
                             lambda * smooth(xp, alpha), lambda * smooth(alpha, xq),
                             0.0);
                     });
  for (const PixelPair& pr : problem.pairs.pairs()) {
    std::uint32_t xp = x_c.at(pr.p), xq = x_c.at(pr.q);
    acc.add(pr.p, pr.q, mu * occl(problem.params, xp, xq),
            mu * occl(problem.params, xp, alpha),
            mu * occl(problem.params, alpha, xq),
            mu * occl(problem.params, alpha, alpha));
  }
  return BinaryEnergy(g.size(), std::move(unaries), acc.take());
}

}  // namespace

BinaryEnergy build_jump_energy(const EnergyProblem& problem,
                               const OcclusionLabeling& x_c) {
  check_labeling(problem, x_c);
  const Grid2D& g = problem.grid();
  const double lambda = problem.params.lambda;
  const double mu = problem.params.mu;
  std::vector<std::pair<double, double>> unaries(g.size());
  for (int p = 0; p < g.size(); ++p)
    unaries[p] = {unary(problem, p, x_c.at(p)), unary(problem, p, x_c.at(p) + 1)};
  PairAccumulator acc;
  add_neighbor_terms(
      problem, x_c, acc,
      [&](PairAccumulator& a, int p, int q, std::uint32_t xp, std::uint32_t xq) {
        // v(xp + a, xq + b) is not submodular when the current labels
        // differ by exactly one; the constant 1 upper-bounds it (only the
        // configuration that levels the pair is overcharged).
        if (xp + 1 == xq || xq + 1 == xp) {
          a.add(p, q, lambda, lambda, lambda, lambda);
          return;
        }
        a.add(p, q, lambda * smooth(xp, xq), lambda * smooth(xp, xq + 1),
              lambda * smooth(xp + 1, xq), lambda * smooth(xp + 1, xq + 1));
      });
  for (const PixelPair& pr : problem.pairs.pairs()) {
    std::uint32_t xp = x_c.at(pr.p), xq = x_c.at(pr.q);
    acc.add(pr.p, pr.q, mu * occl(problem.params, xp, xq),
            mu * occl(problem.params, xp, xq + 1),
            mu * occl(problem.params, xp + 1, xq),
            mu * occl(problem.params, xp + 1, xq + 1));
  }
  return BinaryEnergy(g.size(), std::move(unaries), acc.take());
}

MoveResult jump_move(const EnergyProblem& problem, const OcclusionLabeling& x_c) {
  BinaryMinimum best = minimize_binary(build_jump_energy(problem, x_c));
  MoveResult out;
  std::size_t changed = 0;
  out.labeling = apply_binary(x_c, best.assignment, 0, &changed);
  out.changed = changed > 0;
  return out;
}

OptimizeResult optimize_jump(const EnergyProblem& problem) {
  OptimizeResult out;
  out.labeling.grid = problem.grid();
  out.labeling.labels.assign(problem.grid().size(), 0);
  out.trace.algorithm = "jump";
  const std::size_t cap = problem.pairs.size() + 2;
  double energy_now = evaluate(problem, out.labeling);
  std::size_t changing_moves = 0;
  for (int move = 1;; ++move) {
    MoveResult next = jump_move(problem, out.labeling);
    MoveRecord rec;
    rec.index = static_cast<int>(out.trace.moves.size());
    rec.move_label = static_cast<std::uint32_t>(move);
    rec.energy_before = energy_now;
    rec.pixels_changed = 0;
    for (std::size_t p = 0; p < next.labeling.labels.size(); ++p)
      rec.pixels_changed += next.labeling.labels[p] != out.labeling.labels[p];
    rec.energy_after = next.changed ? evaluate(problem, next.labeling) : energy_now;
    rec.activated_pairs = activated_pairs(problem, next.labeling);
    out.trace.moves.push_back(rec);
    if (!next.changed) break;
    out.labeling = std::move(next.labeling);
    energy_now = rec.energy_after;
    if (++changing_moves > cap) {
      out.trace.final_energy = energy_now;
      throw IterationCapError("jump moves exceeded cap of |O| + 2 = " +
                                  std::to_string(cap),
                              out.trace);
    }
  }
  out.trace.final_energy = energy_now;
  return out;
}

OptimizeResult expansion_cycle_increasing(const EnergyProblem& problem,
                                          std::uint32_t l_max) {
  if (l_max < 1) throw Error(errc::bad_argument, "l_max must be >= 1");
  OptimizeResult out;
  out.labeling.grid = problem.grid();
  out.labeling.labels.assign(problem.grid().size(), 0);
  out.trace.algorithm = "expansion1";
  double energy_now = evaluate(problem, out.labeling);
  for (std::uint32_t alpha = 1; alpha <= l_max; ++alpha) {
    BinaryMinimum best =
        minimize_binary(build_expansion_energy(problem, out.labeling, alpha));
    MoveRecord rec;
    rec.index = static_cast<int>(out.trace.moves.size());
    rec.move_label = alpha;
    rec.energy_before = energy_now;
    OcclusionLabeling next =
        apply_binary(out.labeling, best.assignment, alpha, &rec.pixels_changed);
    rec.energy_after =
        rec.pixels_changed > 0 ? evaluate(problem, next) : energy_now;
    rec.activated_pairs = activated_pairs(problem, next);
    out.trace.moves.push_back(rec);
    out.labeling = std::move(next);
    energy_now = rec.energy_after;
  }
  out.trace.final_energy = energy_now;
  return out;
}

}  // namespace oosis
