#include "oclone/random_gen.hpp"

#include <algorithm>
#include <functional>

namespace oclone {

namespace {

const Letter kA{"a", 2};
const Letter kB{"b", 2};

Letter random_letter(Rng& rng) { return rng.chance(1, 2) ? kA : kB; }

// Shapes are grown first and ports named afterwards, so that the "every
// port occurs" invariant can be met without backtracking.
struct Skel {
  bool leaf = true;
  Letter label;
  std::vector<Skel> kids;
};

Skel grow_skel(Rng& rng, int depth) {
  Skel s;
  if (depth == 0 || rng.chance(2, 5)) return s;  // leaf
  s.leaf = false;
  s.label = random_letter(rng);
  s.kids.resize(2);
  for (Skel& k : s.kids) k = grow_skel(rng, depth - 1);
  return s;
}

int count_leaves(const Skel& s) {
  if (s.leaf) return 1;
  int n = 0;
  for (const Skel& k : s.kids) n += count_leaves(k);
  return n;
}

FiniteTerm::NodePtr realize(const Skel& s, const std::vector<int>& names, size_t& next) {
  if (s.leaf) return FiniteTerm::Node::make_port(names[next++]);
  std::vector<FiniteTerm::NodePtr> kids;
  kids.reserve(s.kids.size());
  for (const Skel& k : s.kids) kids.push_back(realize(k, names, next));
  return FiniteTerm::Node::make(s.label, std::move(kids));
}

// Port names for `leaves` slots covering 1..rank: every name at least once,
// the rest uniform.
std::vector<int> cover_names(Rng& rng, int leaves, int rank) {
  std::vector<int> names(static_cast<size_t>(leaves));
  for (int i = 0; i < leaves; ++i) names[static_cast<size_t>(i)] = rng.range(1, rank);
  // Overwrite `rank` distinct positions with 1..rank so every name occurs.
  std::vector<int> pos(static_cast<size_t>(leaves));
  for (int i = 0; i < leaves; ++i) pos[static_cast<size_t>(i)] = i;
  for (int i = 0; i < rank; ++i) {
    int j = rng.range(i, leaves - 1);
    std::swap(pos[static_cast<size_t>(i)], pos[static_cast<size_t>(j)]);
    names[static_cast<size_t>(pos[static_cast<size_t>(i)])] = i + 1;
  }
  return names;
}

}  // namespace

FiniteTerm random_ab_term(Rng& rng, int rank, int max_depth) {
  if (rank < 1) fail(Errc::Malformed, "finite {a,b}-terms have rank >= 1");
  for (int attempt = 0; attempt < 20000; ++attempt) {
    Skel s = grow_skel(rng, max_depth);
    if (s.leaf) continue;  // bare port is not a term
    int leaves = count_leaves(s);
    if (leaves < rank) continue;
    std::vector<int> names = cover_names(rng, leaves, rank);
    size_t next = 0;
    return FiniteTerm::adopt(realize(s, names, next));
  }
  fail(Errc::Malformed, "depth " + std::to_string(max_depth) + " cannot reach rank " +
                            std::to_string(rank));
}

FiniteTerm random_kind4_term(Rng& rng, int rank) {
  if (rank < 2) fail(Errc::Malformed, "kind-4 terms over a binary alphabet have rank >= 2");
  // A binary shape with exactly `rank` leaves, then a random permutation of
  // port names.
  std::function<Skel(int)> split = [&](int leaves) {
    Skel s;
    if (leaves == 1) return s;
    s.leaf = false;
    s.label = random_letter(rng);
    int left = rng.range(1, leaves - 1);
    s.kids.push_back(split(left));
    s.kids.push_back(split(leaves - left));
    return s;
  };
  Skel s = split(rank);
  std::vector<int> names(static_cast<size_t>(rank));
  for (int i = 0; i < rank; ++i) names[static_cast<size_t>(i)] = i + 1;
  for (int i = rank - 1; i > 0; --i) std::swap(names[static_cast<size_t>(i)], names[static_cast<size_t>(rng.range(0, i))]);
  size_t next = 0;
  return FiniteTerm::adopt(realize(s, names, next));
}

namespace {

struct NSkel {
  bool leaf = true;
  int label_rank = 0;
  std::vector<NSkel> kids;
};

NSkel grow_nested_skel(Rng& rng, int depth, int max_label_rank) {
  NSkel s;
  if (depth == 0 || rng.chance(1, 3)) return s;
  s.leaf = false;
  s.label_rank = rng.range(1, max_label_rank);
  s.kids.resize(static_cast<size_t>(s.label_rank));
  for (NSkel& k : s.kids) k = grow_nested_skel(rng, depth - 1, max_label_rank);
  return s;
}

int count_nested_leaves(const NSkel& s) {
  if (s.leaf) return 1;
  int n = 0;
  for (const NSkel& k : s.kids) n += count_nested_leaves(k);
  return n;
}

NestedFiniteTerm::NodePtr realize_nested(Rng& rng, const NSkel& s, const std::vector<int>& names,
                                         size_t& next, int label_depth) {
  if (s.leaf) return NestedFiniteTerm::Node::make_port(names[next++]);
  std::vector<NestedFiniteTerm::NodePtr> kids;
  kids.reserve(s.kids.size());
  for (const NSkel& k : s.kids) kids.push_back(realize_nested(rng, k, names, next, label_depth));
  return NestedFiniteTerm::Node::make(random_ab_term(rng, s.label_rank, label_depth), std::move(kids));
}

}  // namespace

NestedFiniteTerm random_nested_ab(Rng& rng, int rank, int outer_depth, int label_depth,
                                  int max_label_rank) {
  if (rank < 1) fail(Errc::Malformed, "nested {a,b}-terms have rank >= 1");
  for (int attempt = 0; attempt < 20000; ++attempt) {
    NSkel s = grow_nested_skel(rng, outer_depth, max_label_rank);
    if (s.leaf) continue;
    int leaves = count_nested_leaves(s);
    if (leaves < rank) continue;
    std::vector<int> names = cover_names(rng, leaves, rank);
    size_t next = 0;
    return NestedFiniteTerm::adopt(realize_nested(rng, s, names, next, label_depth));
  }
  fail(Errc::Malformed, "outer depth " + std::to_string(outer_depth) + " cannot reach rank " +
                            std::to_string(rank));
}

Term<NestedFiniteTerm> random_triple_ab(Rng& rng, int rank, int outer_depth) {
  using T3 = Term<NestedFiniteTerm>;
  for (int attempt = 0; attempt < 20000; ++attempt) {
    NSkel s = grow_nested_skel(rng, outer_depth, 3);
    if (s.leaf) continue;
    int leaves = count_nested_leaves(s);
    if (leaves < rank) continue;
    std::vector<int> names = cover_names(rng, leaves, rank);
    size_t next = 0;
    std::function<T3::NodePtr(const NSkel&)> realize3 = [&](const NSkel& k) -> T3::NodePtr {
      if (k.leaf) return T3::Node::make_port(names[next++]);
      std::vector<T3::NodePtr> kids;
      kids.reserve(k.kids.size());
      for (const NSkel& c : k.kids) kids.push_back(realize3(c));
      return T3::Node::make(random_nested_ab(rng, k.label_rank, 2, 2, 3), std::move(kids));
    };
    return T3::adopt(realize3(s));
  }
  fail(Errc::Malformed, "outer depth " + std::to_string(outer_depth) + " cannot reach rank " +
                            std::to_string(rank));
}

TermGraph random_term_graph(Rng& rng, int rank, int max_inner) {
  for (int attempt = 0;; ++attempt) {
    int inner = rng.range(1, max_inner);
    int n = inner + rank;
    std::vector<TermGraph::Vertex> vs(static_cast<size_t>(n));
    for (int v = 0; v < inner; ++v) {
      vs[static_cast<size_t>(v)].label = random_letter(rng);
      vs[static_cast<size_t>(v)].succ = {rng.below(n), rng.below(n)};
    }
    for (int p = 1; p <= rank; ++p) vs[static_cast<size_t>(inner + p - 1)].label = p;
    try {
      return TermGraph::adopt(std::move(vs));
    } catch (const Error&) {
      // Rejection dominates for high rank with few inner vertices; attempts
      // are O(n), so a generous cap keeps spurious exhaustion impossible.
      if (attempt > 50000) fail(Errc::Malformed, "could not sample a valid term graph");
    }
  }
}

TermGraph random_portful_term_graph(Rng& rng, int rank, int max_inner) {
  if (rank < 1) fail(Errc::Malformed, "a portful graph needs rank >= 1");
  for (int attempt = 0;; ++attempt) {
    TermGraph g = random_term_graph(rng, rank, max_inner);
    if (every_subtree_has_port(g)) return g;
    if (attempt > 10000) fail(Errc::Malformed, "could not sample a portful term graph");
  }
}

Graph<TermGraph> random_nested_graph(Rng& rng, const NestedGraphOptions& opt) {
  auto make_label = [&](int k) -> TermGraph {
    if (opt.kind4_labels) return term_to_graph(random_kind4_term(rng, std::max(2, k)));
    if (opt.portful_labels) return random_portful_term_graph(rng, k, opt.max_label_inner);
    return random_term_graph(rng, k, opt.max_label_inner);
  };
  auto label_rank = [&]() {
    return opt.kind4_labels ? rng.range(2, std::max(2, opt.max_label_rank))
                            : rng.range(1, opt.max_label_rank);
  };

  if (opt.outer_tree) {
    // Acyclic outer graphs need a port somewhere downstream of every vertex,
    // so this mode only exists for positive rank. Edges are drawn forward
    // (v -> w implies v < w) and every non-root vertex is given a parent, so
    // the sample never has to be rejected.
    if (opt.rank < 1) fail(Errc::Malformed, "an acyclic nested graph needs rank >= 1");
    int inner = rng.range(1, opt.max_outer);
    int n = inner + opt.rank;
    std::vector<std::vector<int>> succ(static_cast<size_t>(inner));
    for (int v = 0; v < inner; ++v) succ[static_cast<size_t>(v)].assign(static_cast<size_t>(label_rank()), -1);
    for (int w = 1; w < n; ++w) {
      int limit = std::min(w, inner);
      std::vector<int> cands;
      for (int v = 0; v < limit; ++v)
        if (std::count(succ[static_cast<size_t>(v)].begin(), succ[static_cast<size_t>(v)].end(), -1) > 0)
          cands.push_back(v);
      int v = cands.empty() ? rng.below(limit) : rng.pick(cands);
      if (cands.empty()) succ[static_cast<size_t>(v)].push_back(-1);
      *std::find(succ[static_cast<size_t>(v)].begin(), succ[static_cast<size_t>(v)].end(), -1) = w;
    }
    std::vector<typename Graph<TermGraph>::Vertex> vs(static_cast<size_t>(n));
    for (int v = 0; v < inner; ++v) {
      auto& vx = vs[static_cast<size_t>(v)];
      vx.succ = succ[static_cast<size_t>(v)];
      for (int& w : vx.succ)
        if (w < 0) w = v + 1 + rng.below(n - 1 - v);
      vx.label = make_label(static_cast<int>(vx.succ.size()));
    }
    for (int p = 1; p <= opt.rank; ++p) vs[static_cast<size_t>(inner + p - 1)].label = p;
    return Graph<TermGraph>::adopt(std::move(vs));
  }

  for (int attempt = 0;; ++attempt) {
    if (attempt > 4000) fail(Errc::Malformed, "could not sample a nested graph");
    const int inner = rng.range(1, opt.max_outer);
    const int trap_size = opt.trap_region ? rng.range(1, 2) : 0;
    const int n = inner + trap_size + opt.rank;
    const int port_base = inner + trap_size;

    // Arities first; the spanning construction below needs every slot known.
    std::vector<int> arity(static_cast<size_t>(n), 0);
    for (int v = 0; v < inner; ++v) arity[static_cast<size_t>(v)] = label_rank();
    for (int v = inner; v < port_base; ++v)
      arity[static_cast<size_t>(v)] = opt.kind4_labels ? 2 : rng.range(1, opt.max_label_rank);

    std::vector<std::vector<int>> succ(static_cast<size_t>(n));
    for (int v = 0; v < port_base; ++v)
      succ[static_cast<size_t>(v)].assign(static_cast<size_t>(arity[static_cast<size_t>(v)]), -1);

    // Forced edges: the root enters the trap; the trap is chained so all of
    // it is reached, and its remaining slots stay inside it (a port-free
    // region by construction).
    if (trap_size > 0) {
      succ[0][0] = inner;
      for (int t = 0; t + 1 < trap_size; ++t) succ[static_cast<size_t>(inner + t)][0] = inner + t + 1;
      for (int t = 0; t < trap_size; ++t)
        for (int& w : succ[static_cast<size_t>(inner + t)])
          if (w < 0) w = inner + rng.below(trap_size);
    }

    // Spanning edges: every other inner vertex and every port gets a parent
    // slot owned by an already-reached vertex, so adopt never rejects the
    // sample. Leftover slots land anywhere, which is what creates cycles and
    // repeated ports.
    std::vector<std::pair<int, int>> pool;
    const auto add_slots = [&](int v) {
      for (int j = 0; j < arity[static_cast<size_t>(v)]; ++j)
        if (succ[static_cast<size_t>(v)][static_cast<size_t>(j)] < 0)
          pool.emplace_back(v, j);
    };
    add_slots(0);
    bool stuck = false;
    for (int w = 1; w < n; ++w) {
      if (w >= inner && w < port_base) continue;  // trap is wired already
      if (pool.empty()) {
        stuck = true;
        break;
      }
      const int pick = rng.below(static_cast<int>(pool.size()));
      const auto [v, j] = pool[static_cast<size_t>(pick)];
      pool[static_cast<size_t>(pick)] = pool.back();
      pool.pop_back();
      succ[static_cast<size_t>(v)][static_cast<size_t>(j)] = w;
      if (w < inner) add_slots(w);
    }
    if (stuck) continue;  // the drawn arities cannot carry the ports
    for (const auto& [v, j] : pool)
      succ[static_cast<size_t>(v)][static_cast<size_t>(j)] = rng.below(n);

    std::vector<typename Graph<TermGraph>::Vertex> vs(static_cast<size_t>(n));
    for (int v = 0; v < port_base; ++v) {
      auto& vx = vs[static_cast<size_t>(v)];
      vx.succ = succ[static_cast<size_t>(v)];
      vx.label = make_label(arity[static_cast<size_t>(v)]);
    }
    for (int p = 1; p <= opt.rank; ++p) vs[static_cast<size_t>(port_base + p - 1)].label = p;
    return Graph<TermGraph>::adopt(std::move(vs));
  }
}

namespace {

// Port slots are grown as placeholder ports named 1 and renamed afterwards;
// the first `rank` slots (in a random order) receive each name once so the
// result always covers 1..rank.
std::vector<int> assign_port_names(Rng& rng, int slots, int rank) {
  std::vector<int> names(static_cast<size_t>(slots), 1);
  if (rank == 0) return names;
  std::vector<int> pos(static_cast<size_t>(slots));
  for (int i = 0; i < slots; ++i) pos[static_cast<size_t>(i)] = i;
  for (int i = 0; i < rank; ++i) {
    const int j = rng.range(i, slots - 1);
    std::swap(pos[static_cast<size_t>(i)], pos[static_cast<size_t>(j)]);
  }
  for (int i = 0; i < slots; ++i) names[static_cast<size_t>(i)] = rng.range(1, rank);
  for (int i = 0; i < rank; ++i) names[static_cast<size_t>(pos[static_cast<size_t>(i)])] = i + 1;
  return names;
}

template <class L>
typename Term<L>::NodePtr rename_slots(const typename Term<L>::NodePtr& n,
                                        const std::vector<int>& names, int& next) {
  if (n->is_port()) return Term<L>::Node::make_port(names[static_cast<size_t>(next++)]);
  std::vector<typename Term<L>::NodePtr> kids;
  kids.reserve(n->children().size());
  for (const auto& c : n->children()) kids.push_back(rename_slots<L>(c, names, next));
  return Term<L>::Node::make(n->label(), std::move(kids));
}

}  // namespace

KindElement random_kind_element(Rng& rng, int max_rank) {
  if (max_rank < 0) fail(Errc::Malformed, "negative rank bound");
  const int top = max_rank >= 2 ? 4 : (max_rank >= 1 ? 3 : 2);
  const int kind = rng.range(1, top);
  if (kind == 4) return KindElement::kind4(random_kind4_term(rng, rng.range(2, max_rank)));
  return KindElement::tag(kind, rng.range(kind == 3 ? 1 : 0, max_rank));
}

CATerm random_ca_term(Rng& rng, int rank, int max_depth, int max_label_rank) {
  if (rank < 0) fail(Errc::Malformed, "negative rank");
  if (max_depth < 1 || max_label_rank < 1) fail(Errc::Malformed, "bounds must be positive");
  // Unary labels can never branch, so at most one port slot would ever exist.
  if (rank >= 2 && max_label_rank < 2) fail(Errc::Malformed, "rank needs labels of rank 2+");
  for (int attempt = 0;; ++attempt) {
    int slots = 0;
    std::function<CATerm::NodePtr(int)> grow = [&](int depth) -> CATerm::NodePtr {
      if (depth <= 0 || rng.chance(1, 3)) {
        if (rank > 0 && rng.chance(2, 3)) {
          ++slots;
          return CATerm::Node::make_port(1);
        }
        return CATerm::Node::make(KindElement::tag(rng.range(1, 2), 0), {});
      }
      KindElement e = random_kind_element(rng, max_label_rank);
      const int r = e.rank();
      std::vector<CATerm::NodePtr> kids;
      kids.reserve(static_cast<size_t>(r));
      for (int i = 0; i < r; ++i) kids.push_back(grow(depth - 1));
      return CATerm::Node::make(std::move(e), std::move(kids));
    };
    KindElement root_label = random_kind_element(rng, max_label_rank);
    const int r = root_label.rank();
    std::vector<CATerm::NodePtr> kids;
    kids.reserve(static_cast<size_t>(r));
    for (int i = 0; i < r; ++i) kids.push_back(grow(max_depth - 1));
    CATerm::NodePtr root = CATerm::Node::make(std::move(root_label), std::move(kids));
    if (slots < rank) {
      if (attempt > 20000) fail(Errc::Malformed, "could not sample a CA term");
      continue;
    }
    const std::vector<int> names = assign_port_names(rng, slots, rank);
    int next = 0;
    return CATerm::adopt(rename_slots<KindElement>(root, names, next));
  }
}

Term<CATerm> random_nested_ca_term(Rng& rng, int rank, int outer_depth) {
  if (rank < 0) fail(Errc::Malformed, "negative rank");
  if (outer_depth < 1) fail(Errc::Malformed, "depth must be positive");
  using Outer = Term<CATerm>;
  for (int attempt = 0;; ++attempt) {
    int slots = 0;
    std::function<Outer::NodePtr(int)> grow = [&](int depth) -> Outer::NodePtr {
      if (depth <= 0 || rng.chance(1, 3)) {
        if (rank > 0 && rng.chance(2, 3)) {
          ++slots;
          return Outer::Node::make_port(1);
        }
        return Outer::Node::make(random_ca_term(rng, 0, 2, 2), {});
      }
      const int r = rng.range(0, 3);
      CATerm label = random_ca_term(rng, r, 2, 2);
      std::vector<Outer::NodePtr> kids;
      kids.reserve(static_cast<size_t>(r));
      for (int i = 0; i < r; ++i) kids.push_back(grow(depth - 1));
      return Outer::Node::make(std::move(label), std::move(kids));
    };
    const int root_rank = rng.range(rank > 0 ? 1 : 0, 3);
    CATerm root_label = random_ca_term(rng, root_rank, 2, 2);
    std::vector<Outer::NodePtr> kids;
    kids.reserve(static_cast<size_t>(root_rank));
    for (int i = 0; i < root_rank; ++i) kids.push_back(grow(outer_depth - 1));
    Outer::NodePtr root = Outer::Node::make(std::move(root_label), std::move(kids));
    if (slots < rank) {
      if (attempt > 20000) fail(Errc::Malformed, "could not sample a nested CA term");
      continue;
    }
    const std::vector<int> names = assign_port_names(rng, slots, rank);
    int next = 0;
    return Outer::adopt(rename_slots<CATerm>(root, names, next));
  }
}

GameArena random_arena(Rng& rng, int max_vertices, int max_priority, int max_degree) {
  const int n = rng.range(1, max_vertices);
  std::vector<GameArena::Vertex> vs(static_cast<size_t>(n));
  std::vector<int> targets(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) targets[static_cast<size_t>(i)] = i;
  for (auto& vx : vs) {
    vx.owner = rng.chance(1, 2) ? Player::Even : Player::Odd;
    vx.priority = rng.range(0, max_priority);
    const int deg = rng.range(1, std::min(max_degree, n));
    for (int i = 0; i < deg; ++i) {
      const int j = rng.range(i, n - 1);
      std::swap(targets[static_cast<size_t>(i)], targets[static_cast<size_t>(j)]);
      vx.edges.push_back(targets[static_cast<size_t>(i)]);
    }
    std::sort(vx.edges.begin(), vx.edges.end());
  }
  return GameArena::adopt(std::move(vs));
}

ParityAutomaton random_automaton(Rng& rng, int max_states, int max_priority) {
  const int n = rng.range(1, max_states);
  std::vector<std::string> states;
  std::vector<int> priority;
  for (int q = 0; q < n; ++q) {
    states.push_back("q" + std::to_string(q));
    priority.push_back(rng.range(0, max_priority));
  }
  std::map<std::string, std::vector<ParityAutomaton::Transition>> trans;
  for (const Letter& l : RankedAlphabet::ab().letters())
    for (int q = 0; q < n; ++q) {
      const int k = rng.range(0, 2);
      for (int t = 0; t < k; ++t) {
        ParityAutomaton::Transition tr;
        tr.from = q;
        for (int i = 0; i < l.rank; ++i) tr.to.push_back(rng.below(n));
        trans[l.name].push_back(std::move(tr));
      }
    }
  return ParityAutomaton::adopt(RankedAlphabet::ab(), std::move(states), rng.below(n),
                                std::move(priority), std::move(trans));
}

}  // namespace oclone
