// Copyright 2026 The spatnet Authors
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

#include "spatnet/analysis.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <queue>

#include "spatnet/error.h"

namespace spatnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFlowEps = 1e-12;

std::string Str(ObjectId id) { return std::to_string(id.value); }

struct Arc {
  std::size_t to;
  double weight;
  LinkId link;
};

// Objects renumbered densely in ascending id order; out-arcs sorted by
// target so that iteration order is smallest id first.
struct DenseGraph {
  std::vector<ObjectId> ids;
  std::map<ObjectId, std::size_t> index;
  std::vector<std::vector<Arc>> out;

  DenseGraph(const Network& net, const WeightSpec& w) {
    for (const auto& [id, obj] : net.objects()) {
      index.emplace(id, ids.size());
      ids.push_back(id);
    }
    out.resize(ids.size());
    for (const auto& [lid, link] : net.links()) {
      out[index.at(link.from)].push_back(Arc{index.at(link.to), w.WeightOf(link), lid});
    }
    for (auto& arcs : out) {
      std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) { return a.to < b.to; });
    }
  }

  std::size_t IndexOf(ObjectId id) const {
    auto it = index.find(id);
    if (it == index.end()) throw Error(ErrorCode::kUnknownObject, "unknown object " + Str(id));
    return it->second;
  }
};

bool Tight(double du, double w, double dv) {
  if (!std::isfinite(du) || !std::isfinite(dv)) return false;
  return std::abs(du + w - dv) <= 1e-9 * std::max(1.0, std::abs(dv));
}

// Lexicographically smallest simple path from src to dst using only arcs
// that lie on some shortest path from src (du + w == dv).
PathResult TightPath(const DenseGraph& g, const std::vector<double>& dist, std::size_t src,
                     std::size_t dst) {
  const std::size_t n = g.ids.size();
  std::vector<bool> used(n, false);
  auto reaches = [&](std::size_t from) {
    if (from == dst) return true;
    std::vector<bool> seen(used);
    std::vector<std::size_t> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (const Arc& a : g.out[u]) {
        if (seen[a.to] || !Tight(dist[u], a.weight, dist[a.to])) continue;
        if (a.to == dst) return true;
        seen[a.to] = true;
        stack.push_back(a.to);
      }
    }
    return false;
  };

  PathResult result;
  result.path.push_back(g.ids[src]);
  used[src] = true;
  std::size_t cur = src;
  while (cur != dst) {
    const Arc* next = nullptr;
    for (const Arc& a : g.out[cur]) {
      if (used[a.to] || !Tight(dist[cur], a.weight, dist[a.to])) continue;
      if (reaches(a.to)) {
        next = &a;
        break;
      }
    }
    if (next == nullptr) {
      throw Error(ErrorCode::kInvalidArgument, "no shortest path could be reconstructed");
    }
    result.distance += next->weight;
    cur = next->to;
    used[cur] = true;
    result.path.push_back(g.ids[cur]);
  }
  return result;
}

}  // namespace

WeightSpec WeightSpec::Parse(std::string_view text) {
  if (text == "unit") return Unit();
  constexpr std::string_view kPrefix = "param:";
  if (text.substr(0, kPrefix.size()) == kPrefix && text.size() > kPrefix.size()) {
    return LinkParam(std::string(text.substr(kPrefix.size())));
  }
  throw Error(ErrorCode::kInvalidArgument,
              "weights must be 'unit' or 'param:NAME', got '" + std::string(text) + "'");
}

double WeightSpec::WeightOf(const Link& link) const {
  if (!param_) return 1.0;
  const ParamValue* v = link.params.Find(*param_);
  if (v == nullptr) {
    throw Error(ErrorCode::kMissingParameter, "link " + std::to_string(link.id.value) +
                                                  " has no weight parameter '" + *param_ + "'");
  }
  if (!IsNumeric(*v)) {
    throw Error(ErrorCode::kSchemaMismatch, "link " + std::to_string(link.id.value) +
                                                ": weight parameter '" + *param_ +
                                                "' is not numeric");
  }
  return AsReal(*v);
}

PathOutcome ShortestPathDijkstra(const Network& net, ObjectId src, ObjectId dst,
                                 const WeightSpec& w) {
  const DenseGraph g(net, w);
  const std::size_t s = g.IndexOf(src);
  const std::size_t t = g.IndexOf(dst);
  for (const auto& arcs : g.out) {
    for (const Arc& a : arcs) {
      if (a.weight < 0) {
        throw Error(ErrorCode::kNegativeWeight,
                    "link " + std::to_string(a.link.value) + " has negative weight");
      }
    }
  }
  std::vector<double> dist(g.ids.size(), kInf);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
  dist[s] = 0.0;
  pq.emplace(0.0, s);
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (const Arc& a : g.out[u]) {
      if (d + a.weight < dist[a.to]) {
        dist[a.to] = d + a.weight;
        pq.emplace(dist[a.to], a.to);
      }
    }
  }
  if (!std::isfinite(dist[t])) return Unreachable{};
  return TightPath(g, dist, s, t);
}

PathOutcome ShortestPathBellmanFord(const Network& net, ObjectId src, ObjectId dst,
                                    const WeightSpec& w) {
  const DenseGraph g(net, w);
  const std::size_t s = g.IndexOf(src);
  const std::size_t t = g.IndexOf(dst);
  const std::size_t n = g.ids.size();
  std::vector<double> dist(n, kInf);
  dist[s] = 0.0;
  for (std::size_t round = 0; round + 1 < n; ++round) {
    bool changed = false;
    for (std::size_t u = 0; u < n; ++u) {
      if (!std::isfinite(dist[u])) continue;
      for (const Arc& a : g.out[u]) {
        if (dist[u] + a.weight < dist[a.to]) {
          dist[a.to] = dist[u] + a.weight;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  for (std::size_t u = 0; u < n; ++u) {
    if (!std::isfinite(dist[u])) continue;
    for (const Arc& a : g.out[u]) {
      if (dist[u] + a.weight < dist[a.to]) return NegativeCycle{};
    }
  }
  if (!std::isfinite(dist[t])) return Unreachable{};
  return TightPath(g, dist, s, t);
}

DistanceMatrix::DistanceMatrix(std::vector<ObjectId> ids, std::vector<std::optional<double>> cells)
    : ids_(std::move(ids)), cells_(std::move(cells)) {}

std::size_t DistanceMatrix::IndexOf(ObjectId id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) {
    throw Error(ErrorCode::kUnknownObject, "unknown object " + Str(id));
  }
  return static_cast<std::size_t>(it - ids_.begin());
}

std::optional<double> DistanceMatrix::at(ObjectId from, ObjectId to) const {
  return cells_[IndexOf(from) * ids_.size() + IndexOf(to)];
}

DistanceMatrix AllPairsFloydWarshall(const Network& net, const WeightSpec& w) {
  const DenseGraph g(net, w);
  const std::size_t n = g.ids.size();
  std::vector<double> d(n * n, kInf);
  for (std::size_t i = 0; i < n; ++i) {
    d[i * n + i] = 0.0;
    for (const Arc& a : g.out[i]) d[i * n + a.to] = std::min(d[i * n + a.to], a.weight);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(d[i * n + k])) continue;
      for (std::size_t j = 0; j < n; ++j) {
        const double via = d[i * n + k] + d[k * n + j];
        if (via < d[i * n + j]) d[i * n + j] = via;
      }
    }
  }
  std::vector<std::optional<double>> cells(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i * n + i] < 0) {
      throw Error(ErrorCode::kNegativeCycle,
                  "negative cycle through object " + Str(g.ids[i]));
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (std::isfinite(d[i * n + j])) cells[i * n + j] = d[i * n + j];
    }
  }
  return DistanceMatrix(g.ids, std::move(cells));
}

std::set<ObjectId> ReachableSet(const Network& net, ObjectId src, TraversalMode mode) {
  const DenseGraph g(net, WeightSpec::Unit());
  const std::size_t s = g.IndexOf(src);
  std::vector<bool> seen(g.ids.size(), false);
  std::set<ObjectId> out;
  if (mode == TraversalMode::kBfs) {
    std::deque<std::size_t> queue{s};
    seen[s] = true;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      out.insert(g.ids[u]);
      for (const Arc& a : g.out[u]) {
        if (!seen[a.to]) {
          seen[a.to] = true;
          queue.push_back(a.to);
        }
      }
    }
  } else {
    // Recursive-order DFS with an explicit stack of (node, next arc).
    std::vector<std::pair<std::size_t, std::size_t>> stack{{s, 0}};
    seen[s] = true;
    out.insert(g.ids[s]);
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      if (next == g.out[u].size()) {
        stack.pop_back();
        continue;
      }
      const std::size_t v = g.out[u][next++].to;
      if (!seen[v]) {
        seen[v] = true;
        out.insert(g.ids[v]);
        stack.emplace_back(v, 0);
      }
    }
  }
  return out;
}

FlowResult MaxFlowFordFulkerson(const Network& net, ObjectId src, ObjectId dst,
                                const WeightSpec& capacity) {
  const DenseGraph g(net, capacity);
  const std::size_t s = g.IndexOf(src);
  const std::size_t t = g.IndexOf(dst);
  if (s == t) throw Error(ErrorCode::kInvalidArgument, "max-flow needs distinct source and sink");

  struct ResidualArc {
    std::size_t to;
    double residual;
    std::size_t reverse;
  };
  const std::size_t n = g.ids.size();
  std::vector<ResidualArc> arcs;
  std::vector<std::vector<std::size_t>> adj(n);
  std::map<LinkId, std::size_t> forward_of;
  std::vector<double> cap;
  for (const auto& [lid, link] : net.links()) {
    const double c = capacity.WeightOf(link);
    if (c < 0) {
      throw Error(ErrorCode::kNegativeCapacity,
                  "link " + std::to_string(lid.value) + " has negative capacity");
    }
    const std::size_t u = g.index.at(link.from);
    const std::size_t v = g.index.at(link.to);
    forward_of[lid] = arcs.size();
    arcs.push_back({v, c, arcs.size() + 1});
    arcs.push_back({u, 0.0, arcs.size() - 1});
    cap.push_back(c);
    cap.push_back(0.0);
    adj[u].push_back(arcs.size() - 2);
    adj[v].push_back(arcs.size() - 1);
  }
  for (auto& list : adj) {
    std::stable_sort(list.begin(), list.end(), [&](std::size_t a, std::size_t b) {
      return arcs[a].to < arcs[b].to;
    });
  }

  FlowResult result;
  std::vector<std::size_t> via(n);
  while (true) {
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> queue{s};
    seen[s] = true;
    while (!queue.empty() && !seen[t]) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t ai : adj[u]) {
        const ResidualArc& a = arcs[ai];
        if (!seen[a.to] && a.residual > kFlowEps) {
          seen[a.to] = true;
          via[a.to] = ai;
          queue.push_back(a.to);
        }
      }
    }
    if (!seen[t]) break;
    double bottleneck = kInf;
    for (std::size_t v = t; v != s; v = arcs[arcs[via[v]].reverse].to) {
      bottleneck = std::min(bottleneck, arcs[via[v]].residual);
    }
    for (std::size_t v = t; v != s; v = arcs[arcs[via[v]].reverse].to) {
      arcs[via[v]].residual -= bottleneck;
      arcs[arcs[via[v]].reverse].residual += bottleneck;
    }
    result.value += bottleneck;
  }
  for (const auto& [lid, ai] : forward_of) {
    result.link_flow[lid] = cap[ai] - arcs[ai].residual;
  }
  return result;
}

std::vector<ObjectId> PointNoFlow(const Network& net) {
  std::set<ObjectId> from;
  std::set<ObjectId> to;
  for (const auto& [id, link] : net.links()) {
    from.insert(link.from);
    to.insert(link.to);
  }
  std::vector<ObjectId> out;
  std::set_symmetric_difference(from.begin(), from.end(), to.begin(), to.end(),
                                std::back_inserter(out));
  return out;
}

}  // namespace spatnet
