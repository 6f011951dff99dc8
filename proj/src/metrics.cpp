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

#include "oosis/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace oosis {

namespace {

// Adjacency over dense indices for graph queries.
struct IndexedGraph {
  std::map<int, int> index_of;
  std::vector<std::vector<int>> adj;
  bool self_loop_free = true;

  explicit IndexedGraph(const OcclusionGraph& g) {
    for (int id : g.nodes) index_of.emplace(id, static_cast<int>(index_of.size()));
    adj.resize(index_of.size());
    for (const auto& [u, v] : g.edges) {
      if (u == v) self_loop_free = false;
      adj[index_of.at(u)].push_back(index_of.at(v));
    }
    for (auto& a : adj) {
      std::sort(a.begin(), a.end());
      a.erase(std::unique(a.begin(), a.end()), a.end());
    }
  }

  bool reaches(int from, int to) const {
    if (from == to) return true;
    std::vector<std::uint8_t> seen(adj.size(), 0);
    std::vector<int> stack = {from};
    seen[from] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : adj[u]) {
        if (v == to) return true;
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    return false;
  }
};

std::vector<const Instance*> ranked_predictions(const InstanceSet& pred) {
  std::vector<const Instance*> order;
  order.reserve(pred.instances.size());
  for (const Instance& i : pred.instances) order.push_back(&i);
  std::sort(order.begin(), order.end(), [](const Instance* a, const Instance* b) {
    if (a->confidence != b->confidence) return a->confidence > b->confidence;
    if (a->pixels.size() != b->pixels.size()) return a->pixels.size() > b->pixels.size();
    return a->id < b->id;
  });
  return order;
}

// Iterative Tarjan SCC; returns the component id per node index.
std::vector<int> tarjan_components(const std::vector<std::vector<int>>& adj,
                                   std::vector<int>* component_size) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> indices(n, -1), low(n, 0), comp(n, -1);
  std::vector<std::uint8_t> on_stack(n, 0);
  std::vector<int> stack;
  int next_index = 0, next_comp = 0;
  struct Frame {
    int v;
    std::size_t child;
  };
  for (int root = 0; root < n; ++root) {
    if (indices[root] >= 0) continue;
    std::vector<Frame> frames = {{root, 0}};
    indices[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.child < adj[f.v].size()) {
        int w = adj[f.v][f.child++];
        if (indices[w] < 0) {
          indices[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], indices[w]);
        }
      } else {
        if (low[f.v] == indices[f.v]) {
          int size = 0;
          for (;;) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            comp[w] = next_comp;
            ++size;
            if (w == f.v) break;
          }
          if (component_size) component_size->push_back(size);
          ++next_comp;
        }
        int v = f.v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      }
    }
  }
  return comp;
}

// Any directed cycle, as a closed edge sequence, or empty when acyclic.
std::vector<std::pair<int, int>> find_cycle(const IndexedGraph& g,
                                            const std::vector<int>& ids) {
  const int n = static_cast<int>(g.adj.size());
  std::vector<int> color(n, 0), parent(n, -1);
  for (int root = 0; root < n; ++root) {
    if (color[root]) continue;
    std::vector<std::pair<int, std::size_t>> stack = {{root, 0}};
    color[root] = 1;
    while (!stack.empty()) {
      auto& [v, child] = stack.back();
      if (child < g.adj[v].size()) {
        int w = g.adj[v][child++];
        if (color[w] == 0) {
          color[w] = 1;
          parent[w] = v;
          stack.push_back({w, 0});
        } else if (color[w] == 1) {
          // walk back from v to w along parents
          std::vector<std::pair<int, int>> cycle;
          int cur = v;
          cycle.push_back({ids[v], ids[w]});
          std::vector<std::pair<int, int>> back;
          while (cur != w) {
            back.push_back({ids[parent[cur]], ids[cur]});
            cur = parent[cur];
          }
          std::reverse(back.begin(), back.end());
          back.push_back(cycle.front());
          return back;
        }
      } else {
        color[v] = 2;
        stack.pop_back();
      }
    }
  }
  return {};
}

}  // namespace

double iou(const std::vector<int>& a, const std::vector<int>& b) {
  std::size_t inter = 0, ai = 0, bi = 0;
  while (ai < a.size() && bi < b.size()) {
    if (a[ai] == b[bi]) {
      ++inter;
      ++ai;
      ++bi;
    } else if (a[ai] < b[bi]) {
      ++ai;
    } else {
      ++bi;
    }
  }
  std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

Matching match(const InstanceSet& pred, const InstanceSet& gt, double iou_t,
               double conf_t) {
  if (pred.grid != gt.grid)
    throw Error(errc::bad_argument, "instance sets on different grids");
  Matching m;
  m.iou_threshold = iou_t;
  m.confidence_threshold = conf_t;
  std::set<int> gt_taken;
  for (const Instance* p : ranked_predictions(pred)) {
    if (p->confidence < conf_t) continue;
    const Instance* best = nullptr;
    double best_iou = 0.0;
    for (const Instance& g : gt.instances) {
      if (gt_taken.count(g.id) || g.semantic_class != p->semantic_class) continue;
      double v = iou(p->pixels, g.pixels);
      if (v > best_iou || (v == best_iou && v > 0.0 && best && g.id < best->id)) {
        best = &g;
        best_iou = v;
      }
    }
    if (best && best_iou >= iou_t && best_iou > 0.0) {
      m.pairs.emplace(p->id, best->id);
      gt_taken.insert(best->id);
    }
  }
  return m;
}

OairCounts oair_counts(const OcclusionGraph& pred_graph,
                       const OcclusionGraph& gt_graph, const Matching& matching) {
  std::map<int, int> pred_of;  // gt id -> matched pred id
  for (const auto& [p, g] : matching.pairs) pred_of.emplace(g, p);
  IndexedGraph pg(pred_graph);
  OairCounts counts;
  counts.total = gt_graph.edges.size();
  for (const auto& [g1, g2] : gt_graph.edges) {
    auto it1 = pred_of.find(g1);
    auto it2 = pred_of.find(g2);
    if (it1 == pred_of.end() || it2 == pred_of.end()) continue;
    ++counts.recovered;
    int a = pg.index_of.at(it1->second);
    int b = pg.index_of.at(it2->second);
    if (a != b && pg.reaches(a, b) && !pg.reaches(b, a)) ++counts.correct;
  }
  return counts;
}

OairPoint oair_point(const OcclusionGraph& pred_graph,
                     const OcclusionGraph& gt_graph, const Matching& matching) {
  OairCounts c = oair_counts(pred_graph, gt_graph, matching);
  OairPoint pt;
  pt.recall = c.total == 0
                  ? 1.0
                  : static_cast<double>(c.recovered) / static_cast<double>(c.total);
  if (c.recovered > 0) {
    pt.accuracy = static_cast<double>(c.correct) / static_cast<double>(c.recovered);
    pt.accuracy_defined = true;
  }
  return pt;
}

std::vector<OairPoint> oair_curve(const InstanceSet& pred, const InstanceSet& gt,
                                  const OcclusionGraph& pred_graph,
                                  const OcclusionGraph& gt_graph, SweepMode mode) {
  std::vector<OairPoint> curve;
  if (mode == SweepMode::iou) {
    for (int k = 0; k < 10; ++k) {
      double t = 0.5 + 0.05 * k;
      OairPoint pt = oair_point(pred_graph, gt_graph, match(pred, gt, t, 0.0));
      pt.threshold = t;
      curve.push_back(pt);
    }
    return curve;
  }
  std::vector<double> confidences;
  for (const Instance& i : pred.instances) confidences.push_back(i.confidence);
  std::sort(confidences.begin(), confidences.end());
  for (int k = 0; k < 6; ++k) {
    double t;
    if (confidences.empty()) {
      t = static_cast<double>(k);
    } else if (k == 5) {
      t = confidences.back() + 1.0;  // above every score: recall 0
    } else {
      std::size_t pos = confidences.size() == 1
                            ? 0
                            : (k * (confidences.size() - 1)) / 5;
      t = confidences[pos];
    }
    OairPoint pt = oair_point(pred_graph, gt_graph, match(pred, gt, 0.5, t));
    pt.threshold = t;
    curve.push_back(pt);
  }
  return curve;
}

double weighted_coverage(const InstanceSet& gt, const InstanceSet& pred) {
  if (pred.grid != gt.grid)
    throw Error(errc::bad_argument, "instance sets on different grids");
  double total = 0.0;
  std::size_t gt_mass = 0;
  for (const Instance& r : gt.instances) {
    double best = 0.0;
    for (const Instance& s : pred.instances)
      best = std::max(best, iou(r.pixels, s.pixels));
    total += static_cast<double>(r.pixels.size()) * best;
    gt_mass += r.pixels.size();
  }
  return gt_mass == 0 ? 0.0 : total / static_cast<double>(gt_mass);
}

std::vector<double> coco_iou_thresholds() {
  std::vector<double> t;
  for (int k = 0; k < 10; ++k) t.push_back(0.5 + 0.05 * k);
  return t;
}

double average_precision(const InstanceSet& pred, const InstanceSet& gt,
                         const std::vector<double>& iou_thresholds) {
  if (pred.grid != gt.grid)
    throw Error(errc::bad_argument, "instance sets on different grids");
  if (gt.instances.empty())
    throw Error(errc::bad_argument, "average precision needs ground truth");
  std::vector<const Instance*> order = ranked_predictions(pred);
  double ap_sum = 0.0;
  for (double t : iou_thresholds) {
    std::set<int> taken;
    std::vector<bool> tp;
    tp.reserve(order.size());
    for (const Instance* p : order) {
      const Instance* best = nullptr;
      double best_iou = 0.0;
      for (const Instance& g : gt.instances) {
        if (taken.count(g.id) || g.semantic_class != p->semantic_class) continue;
        double v = iou(p->pixels, g.pixels);
        if (v > best_iou || (v == best_iou && v > 0.0 && best && g.id < best->id)) {
          best = &g;
          best_iou = v;
        }
      }
      if (best && best_iou >= t && best_iou > 0.0) {
        taken.insert(best->id);
        tp.push_back(true);
      } else {
        tp.push_back(false);
      }
    }
    // precision over the ranked list, then 101-point interpolation
    std::vector<double> precision, recall;
    std::size_t hits = 0;
    for (std::size_t k = 0; k < tp.size(); ++k) {
      if (tp[k]) ++hits;
      precision.push_back(static_cast<double>(hits) / static_cast<double>(k + 1));
      recall.push_back(static_cast<double>(hits) /
                       static_cast<double>(gt.instances.size()));
    }
    for (int k = static_cast<int>(precision.size()) - 2; k >= 0; --k)
      precision[k] = std::max(precision[k], precision[k + 1]);
    double ap = 0.0;
    for (int k = 0; k <= 100; ++k) {
      double r = k / 100.0;
      auto it = std::lower_bound(recall.begin(), recall.end(), r);
      if (it != recall.end()) ap += precision[it - recall.begin()];
    }
    ap_sum += ap / 101.0;
  }
  return ap_sum / static_cast<double>(iou_thresholds.size());
}

double cycle_stats(const OcclusionGraph& g) {
  if (g.nodes.empty()) return 0.0;
  IndexedGraph ig(g);
  std::vector<int> comp_size;
  std::vector<int> comp = tarjan_components(ig.adj, &comp_size);
  std::set<std::pair<int, int>> edge_set(g.edges.begin(), g.edges.end());
  std::size_t in_cycle = 0;
  for (int id : g.nodes) {
    int v = ig.index_of.at(id);
    if (comp_size[comp[v]] > 1 || edge_set.count({id, id})) ++in_cycle;
  }
  return static_cast<double>(in_cycle) / static_cast<double>(g.nodes.size());
}

OcclusionGraph random_decycle(const OcclusionGraph& g, std::uint64_t seed) {
  OcclusionGraph out = g;
  std::sort(out.nodes.begin(), out.nodes.end());
  std::sort(out.edges.begin(), out.edges.end());
  std::mt19937_64 rng(seed);
  for (;;) {
    IndexedGraph ig(out);
    std::vector<std::pair<int, int>> cycle = find_cycle(ig, out.nodes);
    if (cycle.empty()) return out;
    std::uniform_int_distribution<std::size_t> pick(0, cycle.size() - 1);
    std::pair<int, int> victim = cycle[pick(rng)];
    out.edges.erase(std::remove(out.edges.begin(), out.edges.end(), victim),
                    out.edges.end());
  }
}

}  // namespace oosis
