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

#include "oosis/maxflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace oosis {

namespace {

// Tolerance for the submodularity check; pairwise entries come straight
// from multiplications by lambda/mu/c_inf, so violations are either exact
// or far larger than rounding noise.
double submod_eps(const PairwiseTerm& t) {
  double m = std::max({std::abs(t.f00), std::abs(t.f01), std::abs(t.f10),
                       std::abs(t.f11), 1.0});
  return 1e-12 * m;
}

}  // namespace

BinaryEnergy::BinaryEnergy(int n, std::vector<std::pair<double, double>> unary,
                           std::vector<PairwiseTerm> pairwise)
    : n_(n), unary_(std::move(unary)), pairwise_(std::move(pairwise)) {
  if (n_ < 0 || unary_.size() != static_cast<std::size_t>(n_))
    throw Error(errc::bad_argument, "unary term count mismatch");
  std::set<std::pair<int, int>> seen;
  for (const PairwiseTerm& t : pairwise_) {
    if (t.i == t.j || t.i < 0 || t.j < 0 || t.i >= n_ || t.j >= n_)
      throw Error(errc::bad_argument, "bad pairwise variable index");
    if (!seen.insert({std::min(t.i, t.j), std::max(t.i, t.j)}).second)
      throw Error(errc::bad_argument, "duplicate pairwise term");
    if (t.f00 + t.f11 > t.f01 + t.f10 + submod_eps(t))
      throw Error(errc::non_submodular,
                  "pairwise term violates f00 + f11 <= f01 + f10");
  }
}

double BinaryEnergy::evaluate(const std::vector<std::uint8_t>& y) const {
  double total = 0.0;
  for (int i = 0; i < n_; ++i) total += y[i] ? unary_[i].second : unary_[i].first;
  for (const PairwiseTerm& t : pairwise_) {
    if (y[t.i])
      total += y[t.j] ? t.f11 : t.f10;
    else
      total += y[t.j] ? t.f01 : t.f00;
  }
  return total;
}

Reduction reduce(const BinaryEnergy& e) {
  const int n = e.size();
  Reduction r;
  r.graph.n = n;
  // Accumulated per-node costs; cost1 ends up on the source edge.
  std::vector<double> cost0(n, 0.0), cost1(n, 0.0);
  for (int i = 0; i < n; ++i) {
    cost0[i] += e.unary()[i].first;
    cost1[i] += e.unary()[i].second;
  }
  for (const PairwiseTerm& t : e.pairwise()) {
    // f = [f00 f01; f10 f11] splits into node terms plus one or two
    // nonnegative correction edges (B + C - A - D >= 0 by submodularity).
    cost1[t.i] += t.f11;
    cost0[t.i] += t.f00;
    double b = t.f01 - t.f00;
    double c = t.f10 - t.f11;
    if (b < 0.0) {
      cost0[t.i] += b;
      cost0[t.j] -= b;
      if (b + c > 0.0) r.graph.edges.push_back({t.j, t.i, b + c});
    } else if (c < 0.0) {
      cost0[t.i] -= c;
      cost0[t.j] += c;
      if (b + c > 0.0) r.graph.edges.push_back({t.i, t.j, b + c});
    } else {
      if (b > 0.0) r.graph.edges.push_back({t.i, t.j, b});
      if (c > 0.0) r.graph.edges.push_back({t.j, t.i, c});
    }
  }
  r.graph.source_cap.resize(n);
  r.graph.sink_cap.resize(n);
  for (int i = 0; i < n; ++i) {
    double m = std::min(cost0[i], cost1[i]);
    r.constant += m;
    r.graph.source_cap[i] = cost1[i] - m;
    r.graph.sink_cap[i] = cost0[i] - m;
  }
  return r;
}

double cut_capacity(const FlowGraph& g, const std::vector<std::uint8_t>& y) {
  double total = 0.0;
  for (int i = 0; i < g.n; ++i)
    total += y[i] ? g.source_cap[i] : g.sink_cap[i];
  for (const FlowGraph::Edge& e : g.edges)
    if (!y[e.u] && y[e.v]) total += e.cap;
  return total;
}

namespace {

// Dinic's algorithm on an adjacency-list residual network. Nodes
// 0..n-1 are variables, n is the source, n+1 the sink.
class Dinic {
 public:
  explicit Dinic(const FlowGraph& g)
      : n_(g.n), source_(g.n), sink_(g.n + 1), head_(g.n + 2) {
    for (int i = 0; i < n_; ++i) {
      if (g.source_cap[i] > 0.0) add_edge(source_, i, g.source_cap[i]);
      if (g.sink_cap[i] > 0.0) add_edge(i, sink_, g.sink_cap[i]);
    }
    for (const FlowGraph::Edge& e : g.edges)
      if (e.cap > 0.0) add_edge(e.u, e.v, e.cap);
  }

  double run() {
    double flow = 0.0;
    while (bfs()) {
      cursor_.assign(head_.size(), 0);
      for (;;) {
        double pushed = augment();
        if (pushed <= 0.0) break;
        flow += pushed;
      }
    }
    return flow;
  }

  // Nodes that can still reach the sink in the residual network. This set
  // is the same for every maximum flow, so the returned cut neither
  // depends on edge insertion order nor on augmentation history, and it is
  // the minimum cut with the fewest label-1 nodes.
  std::vector<std::uint8_t> sink_side() const {
    std::vector<std::uint8_t> reach(head_.size(), 0);
    std::vector<int> stack = {sink_};
    reach[sink_] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int idx : head_[v]) {
        int u = edges_[idx].to;
        // residual capacity of (u -> v) lives on the paired edge
        if (!reach[u] && edges_[idx ^ 1].cap > 0.0) {
          reach[u] = 1;
          stack.push_back(u);
        }
      }
    }
    return {reach.begin(), reach.begin() + n_};
  }

 private:
  struct EdgeRec {
    int to;
    double cap;
  };

  void add_edge(int u, int v, double cap) {
    head_[u].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({v, cap});
    head_[v].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({u, 0.0});
  }

  bool bfs() {
    level_.assign(head_.size(), -1);
    level_[source_] = 0;
    std::vector<int> queue = {source_};
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      int u = queue[qi];
      for (int idx : head_[u]) {
        const EdgeRec& e = edges_[idx];
        if (e.cap > 0.0 && level_[e.to] < 0) {
          level_[e.to] = level_[u] + 1;
          queue.push_back(e.to);
        }
      }
    }
    return level_[sink_] >= 0;
  }

  // One blocking-flow augmentation along the level graph, iterative so
  // deep level paths on large grids cannot exhaust the stack.
  double augment() {
    path_.clear();
    int u = source_;
    for (;;) {
      if (u == sink_) {
        double bottleneck = std::numeric_limits<double>::infinity();
        for (int idx : path_) bottleneck = std::min(bottleneck, edges_[idx].cap);
        for (int idx : path_) {
          edges_[idx].cap -= bottleneck;
          edges_[idx ^ 1].cap += bottleneck;
        }
        return bottleneck;
      }
      bool advanced = false;
      for (std::size_t& i = cursor_[u]; i < head_[u].size(); ++i) {
        int idx = head_[u][i];
        const EdgeRec& e = edges_[idx];
        if (e.cap > 0.0 && level_[e.to] == level_[u] + 1) {
          path_.push_back(idx);
          u = e.to;
          advanced = true;
          break;
        }
      }
      if (advanced) continue;
      level_[u] = -1;  // dead end: prune and backtrack
      if (path_.empty()) return 0.0;
      u = edges_[path_.back() ^ 1].to;  // the edge's source node
      path_.pop_back();
    }
  }

  int n_;
  int source_;
  int sink_;
  std::vector<std::vector<int>> head_;
  std::vector<EdgeRec> edges_;
  std::vector<int> level_;
  std::vector<std::size_t> cursor_;
  std::vector<int> path_;
};

}  // namespace

MaxflowResult max_flow(const FlowGraph& g) {
  if (g.n < 0 || g.source_cap.size() != static_cast<std::size_t>(g.n) ||
      g.sink_cap.size() != static_cast<std::size_t>(g.n))
    throw Error(errc::bad_argument, "terminal capacity count mismatch");
  for (int i = 0; i < g.n; ++i)
    if (g.source_cap[i] < 0.0 || g.sink_cap[i] < 0.0)
      throw Error(errc::bad_argument, "negative terminal capacity");
  for (const FlowGraph::Edge& e : g.edges)
    if (e.u < 0 || e.u >= g.n || e.v < 0 || e.v >= g.n || e.cap < 0.0)
      throw Error(errc::bad_argument, "bad flow edge");
  Dinic dinic(g);
  MaxflowResult out;
  out.flow = dinic.run();
  out.assignment = dinic.sink_side();
  return out;
}

BinaryMinimum minimize_binary(const BinaryEnergy& e) {
  Reduction r = reduce(e);
  MaxflowResult mf = max_flow(r.graph);
  BinaryMinimum out;
  out.assignment = mf.assignment;
  out.value = mf.flow + r.constant;
  return out;
}

}  // namespace oosis
