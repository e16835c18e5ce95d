#pragma once

#include <deque>
#include <functional>
#include <map>
#include <variant>
#include <vector>

#include "oclone/lazy.hpp"
#include "oclone/term.hpp"

namespace oclone {

// ============================================================================
// Graph<L>: a regular tree with ports, presented as its unique unfolding
// witness. Vertex 0 is the root; every vertex is reachable from it. Port
// vertices are leaves. The unfolding of vertex 0 is the denoted tree; as
// with Term, the denoted tree of rank n uses ports exactly 1..n and the
// single-port unfolding is excluded.
// ============================================================================

template <class L>
class Graph {
 public:
  struct Vertex {
    std::variant<int, L> label;  // port name or letter-like label
    std::vector<int> succ;

    bool is_port() const { return std::holds_alternative<int>(label); }
    int port() const { return std::get<int>(label); }
    const L& lab() const { return std::get<L>(label); }
  };

  static Graph adopt(std::vector<Vertex> vs) {
    if (vs.empty()) fail(Errc::Malformed, "graph with no vertices");
    const int n = static_cast<int>(vs.size());
    for (int v = 0; v < n; ++v) {
      const Vertex& vx = vs[static_cast<size_t>(v)];
      if (vx.is_port()) {
        if (vx.port() < 1) fail(Errc::Malformed, "port name must be >= 1");
        if (!vx.succ.empty()) fail(Errc::Malformed, "port vertex with successors");
        continue;
      }
      if (static_cast<int>(vx.succ.size()) != rank_of(vx.lab()))
        fail(Errc::ArityMismatch, "vertex " + std::to_string(v) + " has " +
                                      std::to_string(vx.succ.size()) + " successors, label rank is " +
                                      std::to_string(rank_of(vx.lab())));
      for (int s : vx.succ)
        if (s < 0 || s >= n)
          fail(Errc::Malformed, "successor id " + std::to_string(s) + " out of range");
    }
    // Reachability from the root; unreachable vertices are malformed rather
    // than silently dropped (builders prune before adopting).
    std::vector<bool> seen(static_cast<size_t>(n), false);
    std::deque<int> q{0};
    seen[0] = true;
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int s : vs[static_cast<size_t>(v)].succ)
        if (!seen[static_cast<size_t>(s)]) {
          seen[static_cast<size_t>(s)] = true;
          q.push_back(s);
        }
    }
    for (int v = 0; v < n; ++v)
      if (!seen[static_cast<size_t>(v)])
        fail(Errc::Malformed, "vertex " + std::to_string(v) + " unreachable from root");
    if (vs[0].is_port()) {
      if (vs[0].port() == 1) fail(Errc::TrivialTerm, "root port alone denotes the excluded trivial term");
      fail(Errc::PortGap, "root is port " + std::to_string(vs[0].port()) + ", port 1 never occurs");
    }
    int max_port = 0;
    for (const Vertex& vx : vs)
      if (vx.is_port()) max_port = std::max(max_port, vx.port());
    std::vector<bool> used(static_cast<size_t>(max_port) + 1, false);
    for (const Vertex& vx : vs)
      if (vx.is_port()) used[static_cast<size_t>(vx.port())] = true;
    for (int i = 1; i <= max_port; ++i)
      if (!used[static_cast<size_t>(i)])
        fail(Errc::PortGap, "port " + std::to_string(i) + " never occurs (max port is " +
                                std::to_string(max_port) + ")");
    return Graph(std::move(vs), max_port);
  }

  // Prunes vertices unreachable from `root`, renumbers the rest in
  // breadth-first order (so the result is canonical for its shape), and
  // validates. Builders use this instead of adopting raw vertex lists.
  static Graph reachable(const std::vector<Vertex>& vs, int root) {
    std::vector<int> order, where(vs.size(), -1);
    std::deque<int> q{root};
    where[static_cast<size_t>(root)] = 0;
    order.push_back(root);
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int s : vs[static_cast<size_t>(v)].succ)
        if (where[static_cast<size_t>(s)] < 0) {
          where[static_cast<size_t>(s)] = static_cast<int>(order.size());
          order.push_back(s);
          q.push_back(s);
        }
    }
    std::vector<Vertex> out;
    out.reserve(order.size());
    for (int v : order) {
      Vertex nv = vs[static_cast<size_t>(v)];
      for (int& s : nv.succ) s = where[static_cast<size_t>(s)];
      out.push_back(std::move(nv));
    }
    return adopt(std::move(out));
  }

  int rank() const { return rank_; }
  int size() const { return static_cast<int>(vertices_.size()); }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const Vertex& at(int v) const { return vertices_.at(static_cast<size_t>(v)); }

  friend bool operator==(const Graph& x, const Graph& y) { return compare(x, y) == 0; }
  friend bool operator!=(const Graph& x, const Graph& y) { return !(x == y); }
  friend bool operator<(const Graph& x, const Graph& y) { return compare(x, y) < 0; }

  friend int compare(const Graph& x, const Graph& y) {
    if (x.rank_ != y.rank_) return x.rank_ < y.rank_ ? -1 : 1;
    if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
    for (int v = 0; v < x.size(); ++v) {
      const Vertex& a = x.at(v);
      const Vertex& b = y.at(v);
      if (a.is_port() != b.is_port()) return a.is_port() ? -1 : 1;
      if (a.is_port()) {
        if (a.port() != b.port()) return a.port() < b.port() ? -1 : 1;
      } else {
        if (a.lab() < b.lab()) return -1;
        if (b.lab() < a.lab()) return 1;
      }
      if (a.succ != b.succ) return a.succ < b.succ ? -1 : 1;
    }
    return 0;
  }

 private:
  Graph(std::vector<Vertex> vs, int rank) : vertices_(std::move(vs)), rank_(rank) {}

  std::vector<Vertex> vertices_;
  int rank_ = 0;
};

using TermGraph = Graph<Letter>;

enum class Multiplicity { Zero, One, Many };

inline const char* multiplicity_name(Multiplicity m) {
  switch (m) {
    case Multiplicity::Zero: return "zero";
    case Multiplicity::One: return "one";
    case Multiplicity::Many: return "many";
  }
  return "?";
}

// ============================================================================
// Strongly connected components (iterative Tarjan). comp[v] is the component
// id; on_cycle[v] is true when v lies on some directed cycle.
// ============================================================================

struct SccInfo {
  std::vector<int> comp;
  std::vector<bool> on_cycle;
  int count = 0;
};

SccInfo scc_of(const std::vector<std::vector<int>>& adj);

template <class L>
std::vector<std::vector<int>> adjacency(const Graph<L>& g) {
  std::vector<std::vector<int>> adj(static_cast<size_t>(g.size()));
  for (int v = 0; v < g.size(); ++v) adj[static_cast<size_t>(v)] = g.at(v).succ;
  return adj;
}

// ============================================================================
// Unfolding prefix.
// ============================================================================

namespace detail {

template <class L>
Prefix<L> unfold_graph_impl(const Graph<L>& g, int v, int depth_left) {
  const auto& vx = g.at(v);
  if (vx.is_port()) return Prefix<L>::port_leaf(vx.port());
  if (vx.succ.empty()) return Prefix<L>::inner(vx.lab(), {});
  if (depth_left == 0) return Prefix<L>::cut();
  std::vector<Prefix<L>> kids;
  kids.reserve(vx.succ.size());
  for (int s : vx.succ) kids.push_back(unfold_graph_impl(g, s, depth_left - 1));
  return Prefix<L>::inner(vx.lab(), std::move(kids));
}

}  // namespace detail

template <class L>
Prefix<L> unfold_prefix(const Graph<L>& g, int depth, int from = 0) {
  if (depth < 0) fail(Errc::Malformed, "negative unfold depth");
  return detail::unfold_graph_impl(g, from, depth);
}

// ============================================================================
// Port analyses on the unfolding.
// ============================================================================

// True iff every node of the unfolding has a port somewhere below it, i.e.
// every vertex reaches a port vertex.
template <class L>
bool every_subtree_has_port(const Graph<L>& g) {
  std::vector<std::vector<int>> pred(static_cast<size_t>(g.size()));
  std::deque<int> q;
  std::vector<bool> hit(static_cast<size_t>(g.size()), false);
  for (int v = 0; v < g.size(); ++v) {
    for (int s : g.at(v).succ) pred[static_cast<size_t>(s)].push_back(v);
    if (g.at(v).is_port()) {
      hit[static_cast<size_t>(v)] = true;
      q.push_back(v);
    }
  }
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int p : pred[static_cast<size_t>(v)])
      if (!hit[static_cast<size_t>(p)]) {
        hit[static_cast<size_t>(p)] = true;
        q.push_back(p);
      }
  }
  for (int v = 0; v < g.size(); ++v)
    if (!hit[static_cast<size_t>(v)]) return false;
  return true;
}

// Vertices that reach a port vertex. Complement = the port-free region.
template <class L>
std::vector<bool> reaches_port(const Graph<L>& g) {
  std::vector<std::vector<int>> pred(static_cast<size_t>(g.size()));
  std::deque<int> q;
  std::vector<bool> hit(static_cast<size_t>(g.size()), false);
  for (int v = 0; v < g.size(); ++v) {
    for (int s : g.at(v).succ) pred[static_cast<size_t>(s)].push_back(v);
    if (g.at(v).is_port()) {
      hit[static_cast<size_t>(v)] = true;
      q.push_back(v);
    }
  }
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int p : pred[static_cast<size_t>(v)])
      if (!hit[static_cast<size_t>(p)]) {
        hit[static_cast<size_t>(p)] = true;
        q.push_back(p);
      }
  }
  return hit;
}

// How often port `name` occurs in the unfolding: zero, exactly once, or two
// or more. Many iff there are two distinct root paths to vertices carrying
// the port, or some such path passes through a cycle.
template <class L>
Multiplicity port_multiplicity(const Graph<L>& g, int name) {
  const int n = g.size();
  std::vector<bool> is_target(static_cast<size_t>(n), false);
  bool any = false;
  for (int v = 0; v < n; ++v)
    if (g.at(v).is_port() && g.at(v).port() == name) {
      is_target[static_cast<size_t>(v)] = true;
      any = true;
    }
  if (!any) return Multiplicity::Zero;
  // relevant = on some root->target path = reaches a target (all vertices
  // are root-reachable by the graph invariant).
  std::vector<std::vector<int>> pred(static_cast<size_t>(n));
  for (int v = 0; v < n; ++v)
    for (int s : g.at(v).succ) pred[static_cast<size_t>(s)].push_back(v);
  std::vector<bool> relevant(static_cast<size_t>(n), false);
  std::deque<int> q;
  for (int v = 0; v < n; ++v)
    if (is_target[static_cast<size_t>(v)]) {
      relevant[static_cast<size_t>(v)] = true;
      q.push_back(v);
    }
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int p : pred[static_cast<size_t>(v)])
      if (!relevant[static_cast<size_t>(p)]) {
        relevant[static_cast<size_t>(p)] = true;
        q.push_back(p);
      }
  }
  SccInfo scc = scc_of(adjacency(g));
  for (int v = 0; v < n; ++v)
    if (relevant[static_cast<size_t>(v)] && scc.on_cycle[static_cast<size_t>(v)])
      return Multiplicity::Many;
  // The relevant region is a DAG: count root->target paths, saturating at 2.
  // Topological order by repeated in-degree removal within the region.
  std::vector<int> indeg(static_cast<size_t>(n), 0);
  for (int v = 0; v < n; ++v)
    if (relevant[static_cast<size_t>(v)])
      for (int s : g.at(v).succ)
        if (relevant[static_cast<size_t>(s)]) ++indeg[static_cast<size_t>(s)];
  std::deque<int> topo;
  for (int v = 0; v < n; ++v)
    if (relevant[static_cast<size_t>(v)] && indeg[static_cast<size_t>(v)] == 0) topo.push_back(v);
  std::vector<int> paths(static_cast<size_t>(n), 0);
  if (relevant[0]) paths[0] = 1;
  int total = 0;
  while (!topo.empty()) {
    int v = topo.front();
    topo.pop_front();
    if (is_target[static_cast<size_t>(v)]) total = std::min(2, total + paths[static_cast<size_t>(v)]);
    for (int s : g.at(v).succ)
      if (relevant[static_cast<size_t>(s)]) {
        paths[static_cast<size_t>(s)] = std::min(2, paths[static_cast<size_t>(s)] + paths[static_cast<size_t>(v)]);
        if (--indeg[static_cast<size_t>(s)] == 0) topo.push_back(s);
      }
  }
  return total >= 2 ? Multiplicity::Many : Multiplicity::One;
}

// ============================================================================
// Bisimulation minimization. Two vertices are merged iff their unfoldings
// are equal. The result is renumbered in breadth-first order from the root,
// which makes minimization idempotent on the nose.
// ============================================================================

template <class L>
Graph<L> minimize_bisim(const Graph<L>& g) {
  const int n = g.size();
  // Initial partition by label.
  std::vector<int> cls(static_cast<size_t>(n), 0);
  {
    std::map<std::pair<int, int>, int> port_cls;  // (1, name)
    std::vector<int> letter_reps;                 // class representative per distinct label
    for (int v = 0; v < n; ++v) {
      if (g.at(v).is_port()) {
        auto [it, fresh] = port_cls.emplace(std::make_pair(1, g.at(v).port()), -1);
        if (fresh) it->second = v;
        cls[static_cast<size_t>(v)] = it->second;
      } else {
        int rep = -1;
        for (int r : letter_reps)
          if (!(g.at(r).lab() < g.at(v).lab()) && !(g.at(v).lab() < g.at(r).lab())) {
            rep = r;
            break;
          }
        if (rep < 0) {
          letter_reps.push_back(v);
          rep = v;
        }
        cls[static_cast<size_t>(v)] = rep;
      }
    }
  }
  // Refine until stable: signature = (class, classes of successors).
  for (;;) {
    std::map<std::vector<int>, int> sig_cls;
    std::vector<int> next(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v) {
      std::vector<int> sig{cls[static_cast<size_t>(v)]};
      for (int s : g.at(v).succ) sig.push_back(cls[static_cast<size_t>(s)]);
      auto [it, fresh] = sig_cls.emplace(std::move(sig), v);
      next[static_cast<size_t>(v)] = it->second;
    }
    if (next == cls) break;
    cls = std::move(next);
  }
  // Quotient on class representatives, then canonical renumbering.
  std::vector<typename Graph<L>::Vertex> vs(static_cast<size_t>(n));
  for (int v = 0; v < n; ++v) {
    vs[static_cast<size_t>(v)].label = g.at(v).label;
    for (int s : g.at(v).succ)
      vs[static_cast<size_t>(v)].succ.push_back(cls[static_cast<size_t>(s)]);
  }
  return Graph<L>::reachable(vs, cls[0]);
}

// ============================================================================
// Conversions between finite terms and graphs.
// ============================================================================

// A term becomes a graph with one vertex per distinct DAG node and one
// vertex per port name. The unfolding of the result is the denoted tree.
template <class L>
Graph<L> term_to_graph(const Term<L>& t) {
  std::vector<typename Graph<L>::Vertex> vs;
  std::unordered_map<const typename Term<L>::Node*, int> node_id;
  std::map<int, int> port_id;
  auto port_vertex = [&](int name) {
    auto [it, fresh] = port_id.emplace(name, static_cast<int>(vs.size()));
    if (fresh) vs.push_back({name, {}});
    return it->second;
  };
  for_each_node(t, [&](const typename Term<L>::NodePtr& n) {
    if (n->is_port()) return;
    typename Graph<L>::Vertex vx;
    vx.label = n->label();
    for (const auto& c : n->children())
      vx.succ.push_back(c->is_port() ? port_vertex(c->port()) : node_id.at(c.get()));
    node_id[n.get()] = static_cast<int>(vs.size());
    vs.push_back(std::move(vx));
  });
  return Graph<L>::reachable(vs, node_id.at(t.root().get()));
}

// Inverse direction; defined only when the graph is acyclic, i.e. when the
// unfolding is finite.
template <class L>
Term<L> graph_to_term(const Graph<L>& g) {
  SccInfo scc = scc_of(adjacency(g));
  for (int v = 0; v < g.size(); ++v)
    if (scc.on_cycle[static_cast<size_t>(v)])
      fail(Errc::Malformed, "graph has an infinite unfolding, not a finite term");
  std::unordered_map<int, typename Term<L>::NodePtr> memo;
  // Vertices in reverse topological order via simple recursion (depth is
  // bounded by the vertex count on a DAG).
  std::function<typename Term<L>::NodePtr(int)> build = [&](int v) -> typename Term<L>::NodePtr {
    if (auto it = memo.find(v); it != memo.end()) return it->second;
    const auto& vx = g.at(v);
    typename Term<L>::NodePtr r;
    if (vx.is_port()) {
      r = Term<L>::Node::make_port(vx.port());
    } else {
      std::vector<typename Term<L>::NodePtr> kids;
      kids.reserve(vx.succ.size());
      for (int s : vx.succ) kids.push_back(build(s));
      r = Term<L>::Node::make(vx.lab(), std::move(kids));
    }
    memo.emplace(v, r);
    return r;
  };
  return Term<L>::adopt(build(0));
}

// Node-wise relabelling of a graph; f must preserve ranks.
template <class L, class F>
auto map_vertices(const Graph<L>& g, F&& f) -> Graph<std::decay_t<decltype(f(g.at(0).lab()))>> {
  using M = std::decay_t<decltype(f(g.at(0).lab()))>;
  std::vector<typename Graph<M>::Vertex> vs;
  vs.reserve(static_cast<size_t>(g.size()));
  for (int v = 0; v < g.size(); ++v) {
    typename Graph<M>::Vertex vx;
    vx.succ = g.at(v).succ;
    if (g.at(v).is_port()) {
      vx.label = g.at(v).port();
    } else {
      M m = f(g.at(v).lab());
      if (rank_of(m) != rank_of(g.at(v).lab()))
        fail(Errc::RankChanged, "relabelling changed rank at vertex " + std::to_string(v));
      vx.label = std::move(m);
    }
    vs.push_back(std::move(vx));
  }
  return Graph<M>::adopt(std::move(vs));
}

// ============================================================================
// graph_flatten: the product construction. A node of the flattened unfolding
// is determined by an outer vertex v together with a non-port vertex w of
// v's label; edges step inside the label, and an edge into a label port p
// hops to outer successor p (or to an output port when that successor is an
// outer port vertex). The outer root's label contributes the root, so the
// result is never the trivial term.
// ============================================================================

template <class L>
Graph<L> graph_flatten(const Graph<Graph<L>>& outer) {
  std::vector<typename Graph<L>::Vertex> vs;
  std::map<std::pair<int, int>, int> id;  // (outer vertex, inner vertex) -> output id
  std::map<int, int> port_id;
  auto port_vertex = [&](int name) {
    auto [it, fresh] = port_id.emplace(name, -1);
    if (fresh) {
      it->second = static_cast<int>(vs.size());
      vs.push_back({name, {}});
    }
    return it->second;
  };
  std::deque<std::pair<int, int>> q;
  auto intern = [&](int v, int w) {
    auto [it, fresh] = id.emplace(std::make_pair(v, w), -1);
    if (fresh) {
      it->second = static_cast<int>(vs.size());
      vs.push_back({outer.at(v).lab().at(w).lab(), {}});
      q.emplace_back(v, w);
    }
    return it->second;
  };
  // resolve the j-th child of (v, w): stays inside the label, or hops
  // through a label port to the outer successor.
  auto resolve = [&](int v, int u) -> int {
    const Graph<L>& s = outer.at(v).lab();
    if (!s.at(u).is_port()) return intern(v, u);
    int p = s.at(u).port();
    int x = outer.at(v).succ.at(static_cast<size_t>(p - 1));
    if (outer.at(x).is_port()) return port_vertex(outer.at(x).port());
    return intern(x, 0);
  };
  if (outer.at(0).is_port()) fail(Errc::TrivialResult, "flattening would be a bare port");
  int root = intern(0, 0);
  while (!q.empty()) {
    auto [v, w] = q.front();
    q.pop_front();
    const Graph<L>& s = outer.at(v).lab();
    std::vector<int> succ;
    succ.reserve(s.at(w).succ.size());
    for (int u : s.at(w).succ) succ.push_back(resolve(v, u));
    vs[static_cast<size_t>(id.at(std::make_pair(v, w)))].succ = std::move(succ);
  }
  return Graph<L>::reachable(vs, root);
}

// Convenience: nested graphs whose labels are finite terms.
template <class L>
Graph<L> graph_flatten(const Graph<Term<L>>& outer) {
  return graph_flatten(map_vertices(outer, [](const Term<L>& t) { return term_to_graph(t); }));
}

}  // namespace oclone
