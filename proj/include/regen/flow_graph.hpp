#pragma once

// Capacitated DAG for information-flow analysis plus an exact max-flow.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "regen/error.hpp"
#include "regen/rational.hpp"

namespace regen {

enum class NodeRole { Source, StorageIn, StorageOut, DataCollector };

struct FlowEdge {
  int from = 0;
  int to = 0;
  std::optional<Rational> capacity;  // empty: infinite
};

class FlowGraph {
 public:
  FlowGraph() {
    source_ = add_node("S", NodeRole::Source);
    sink_ = add_node("DC", NodeRole::DataCollector);
  }

  int add_node(std::string name, NodeRole role) {
    names_.push_back(std::move(name));
    roles_.push_back(role);
    return static_cast<int>(names_.size()) - 1;
  }

  void add_edge(int from, int to, std::optional<Rational> capacity) {
    if (from < 0 || to < 0 || from >= node_count() || to >= node_count()) {
      throw Error(ErrorCode::InvalidConstruction, "edge endpoint out of range");
    }
    if (capacity && *capacity < 0) {
      throw Error(ErrorCode::InvalidConstruction, "negative capacity");
    }
    edges_.push_back({from, to, std::move(capacity)});
  }

  /// Adds an in/out pair joined by an edge of capacity alpha; returns the in id.
  int add_storage_node(const std::string& name, const Rational& alpha) {
    int in = add_node(name + ".in", NodeRole::StorageIn);
    int out = add_node(name + ".out", NodeRole::StorageOut);
    add_edge(in, out, alpha);
    return in;
  }

  int source() const noexcept { return source_; }
  int sink() const noexcept { return sink_; }
  int node_count() const noexcept { return static_cast<int>(names_.size()); }
  const std::vector<FlowEdge>& edges() const noexcept { return edges_; }
  const std::string& name(int id) const { return names_.at(id); }
  NodeRole role(int id) const { return roles_.at(id); }

  int find(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    return it == names_.end() ? -1 : static_cast<int>(it - names_.begin());
  }

  bool is_acyclic() const {
    std::vector<int> indeg(names_.size(), 0);
    std::vector<std::vector<int>> adj(names_.size());
    for (const auto& e : edges_) {
      adj[e.from].push_back(e.to);
      ++indeg[e.to];
    }
    std::deque<int> ready;
    for (int v = 0; v < node_count(); ++v) {
      if (indeg[v] == 0) ready.push_back(v);
    }
    int seen = 0;
    while (!ready.empty()) {
      int v = ready.front();
      ready.pop_front();
      ++seen;
      for (int w : adj[v]) {
        if (--indeg[w] == 0) ready.push_back(w);
      }
    }
    return seen == node_count();
  }

  /// One line per edge: `from to num/den`, with `inf` for infinite capacity.
  void dump(std::ostream& os) const {
    for (const auto& e : edges_) {
      os << names_[e.from] << ' ' << names_[e.to] << ' ';
      if (e.capacity) {
        os << numer(*e.capacity) << '/' << denom(*e.capacity);
      } else {
        os << "inf";
      }
      os << '\n';
    }
  }

 private:
  std::vector<std::string> names_;
  std::vector<NodeRole> roles_;
  std::vector<FlowEdge> edges_;
  int source_ = 0;
  int sink_ = 0;
};

namespace detail {

// Edmonds-Karp on integer capacities.
template <typename Cap>
class IntegerNetwork {
 public:
  explicit IntegerNetwork(int n) : adj_(n) {}

  void add_edge(int from, int to, Cap cap) {
    adj_[from].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({to, cap});
    adj_[to].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({from, Cap(0)});
  }

  Cap max_flow(int s, int t) {
    Cap total = 0;
    const int n = static_cast<int>(adj_.size());
    std::vector<int> parent_arc(n);
    while (true) {
      std::fill(parent_arc.begin(), parent_arc.end(), -1);
      std::deque<int> queue{s};
      parent_arc[s] = -2;
      while (!queue.empty() && parent_arc[t] == -1) {
        int v = queue.front();
        queue.pop_front();
        for (int a : adj_[v]) {
          const Arc& arc = arcs_[a];
          if (arc.residual > 0 && parent_arc[arc.to] == -1) {
            parent_arc[arc.to] = a;
            queue.push_back(arc.to);
          }
        }
      }
      if (parent_arc[t] == -1) return total;

      Cap bottleneck = -1;
      for (int v = t; v != s; v = arcs_[parent_arc[v] ^ 1].to) {
        const Cap& r = arcs_[parent_arc[v]].residual;
        if (bottleneck < 0 || r < bottleneck) bottleneck = r;
      }
      for (int v = t; v != s; v = arcs_[parent_arc[v] ^ 1].to) {
        arcs_[parent_arc[v]].residual -= bottleneck;
        arcs_[parent_arc[v] ^ 1].residual += bottleneck;
      }
      total += bottleneck;
    }
  }

 private:
  struct Arc {
    int to;
    Cap residual;
  };
  std::vector<std::vector<int>> adj_;
  std::vector<Arc> arcs_;
};

template <typename Cap, typename Convert>
Integer run_integer_flow(const FlowGraph& g, const std::vector<Integer>& scaled,
                         const Integer& infinite, Convert convert) {
  IntegerNetwork<Cap> net(g.node_count());
  const auto& edges = g.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    net.add_edge(edges[i].from, edges[i].to,
                 convert(edges[i].capacity ? scaled[i] : infinite));
  }
  return Integer(net.max_flow(g.source(), g.sink()));
}

}  // namespace detail

/// Exact maximum flow from source to sink. Capacities are scaled to integers
/// by their common denominator; an infinite edge becomes one more than the sum
/// of all finite capacities, which no finite cut can reach.
inline Rational max_flow(const FlowGraph& g) {
  Integer scale = 1;
  for (const auto& e : g.edges()) {
    if (e.capacity) scale = boost::multiprecision::lcm(scale, denom(*e.capacity));
  }
  std::vector<Integer> scaled(g.edges().size(), 0);
  Integer finite_sum = 0;
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    const auto& cap = g.edges()[i].capacity;
    if (cap) {
      scaled[i] = numer(*cap) * (scale / denom(*cap));
      finite_sum += scaled[i];
    }
  }
  const Integer infinite = finite_sum + 1;

  // The flow never exceeds the sum of all capacities, so 64-bit suffices when
  // that sum (with every infinite edge counted) stays small.
  const Integer bound = finite_sum + infinite * static_cast<long>(g.edges().size());
  Integer flow;
  if (bound < Integer(std::numeric_limits<std::int64_t>::max() / 4)) {
    flow = detail::run_integer_flow<std::int64_t>(
        g, scaled, infinite, [](const Integer& v) { return v.convert_to<std::int64_t>(); });
  } else {
    flow = detail::run_integer_flow<Integer>(g, scaled, infinite,
                                             [](const Integer& v) { return v; });
  }
  return Rational(flow, scale);
}

}  // namespace regen
