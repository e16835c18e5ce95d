#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "oclone/alphabet.hpp"
#include "oclone/error.hpp"

namespace oclone {

// Node addresses are 0-based child indices from the root; {} is the root.
using Address = std::vector<int>;

inline std::string address_to_string(const Address& a) {
  std::string s = "[";
  for (size_t i = 0; i < a.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(a[i]);
  }
  return s + "]";
}

// ============================================================================
// Term<L>: a finite tree whose leaves are ports 1..n (each present at least
// once) or rank-0 labels, and whose inner nodes carry a label of matching
// arity. The single-node tree "port 1" is not a term; no term has a bare
// port as its root.
//
// Terms are immutable and share structure freely: substitution reuses the
// same child for every occurrence of a port, so the object graph is a DAG
// even though the term it denotes is a tree. Algorithms below memoize on
// node identity to stay linear in the DAG.
// ============================================================================

template <class L>
class Term {
 public:
  class Node;
  using NodePtr = std::shared_ptr<const Node>;

  class Node {
   public:
    struct Inner {
      L label;
      std::vector<NodePtr> children;
    };

    static NodePtr make_port(int name) { return NodePtr(new Node(name)); }
    static NodePtr make(L label, std::vector<NodePtr> children) {
      return NodePtr(new Node(Inner{std::move(label), std::move(children)}));
    }

    bool is_port() const { return std::holds_alternative<int>(data_); }
    int port() const { return std::get<int>(data_); }
    const L& label() const { return std::get<Inner>(data_).label; }
    const std::vector<NodePtr>& children() const { return std::get<Inner>(data_).children; }

   private:
    explicit Node(int port) : data_(port) {}
    explicit Node(Inner inner) : data_(std::move(inner)) {}
    std::variant<int, Inner> data_;
  };

  Term(const Term&) = default;
  Term(Term&&) noexcept = default;
  Term& operator=(const Term&) = default;
  Term& operator=(Term&&) noexcept = default;

  // Validates a raw node tree and wraps it as a term. Checks, in this order:
  // port names are positive, arities match label ranks, the root is not a
  // bare port (TrivialTerm for port 1, PortGap otherwise), and the ports
  // used are exactly 1..n for some n >= 0.
  static Term adopt(NodePtr root) {
    if (!root) fail(Errc::Malformed, "term with null root");
    int max_port = 0;
    std::unordered_map<const Node*, bool> seen;
    std::vector<bool> used;
    check_nodes(root, seen, used, max_port);
    if (root->is_port()) {
      if (root->port() == 1) fail(Errc::TrivialTerm, "the single-node term 'port 1' is excluded");
      fail(Errc::PortGap, "root is port " + std::to_string(root->port()) + ", port 1 never occurs");
    }
    for (int i = 1; i <= max_port; ++i)
      if (!used[static_cast<size_t>(i)])
        fail(Errc::PortGap, "port " + std::to_string(i) + " never occurs (max port is " +
                                std::to_string(max_port) + ")");
    return Term(std::move(root), max_port);
  }

  int rank() const { return rank_; }
  const NodePtr& root() const { return root_; }

  friend bool operator==(const Term& x, const Term& y) { return compare(x, y) == 0; }
  friend bool operator!=(const Term& x, const Term& y) { return compare(x, y) != 0; }
  friend bool operator<(const Term& x, const Term& y) { return compare(x, y) < 0; }

  // Total order: by rank, then structurally (ports before inner nodes).
  friend int compare(const Term& x, const Term& y) {
    if (x.rank_ != y.rank_) return x.rank_ < y.rank_ ? -1 : 1;
    return compare_nodes(x.root_, y.root_);
  }

  static int compare_nodes(const NodePtr& x, const NodePtr& y) {
    if (x.get() == y.get()) return 0;
    if (x->is_port() != y->is_port()) return x->is_port() ? -1 : 1;
    if (x->is_port()) {
      if (x->port() != y->port()) return x->port() < y->port() ? -1 : 1;
      return 0;
    }
    if (x->label() < y->label()) return -1;
    if (y->label() < x->label()) return 1;
    const auto& xc = x->children();
    const auto& yc = y->children();
    if (xc.size() != yc.size()) return xc.size() < yc.size() ? -1 : 1;
    for (size_t i = 0; i < xc.size(); ++i)
      if (int c = compare_nodes(xc[i], yc[i]); c != 0) return c;
    return 0;
  }

 private:
  Term(NodePtr root, int rank) : root_(std::move(root)), rank_(rank) {}

  static void check_nodes(const NodePtr& n, std::unordered_map<const Node*, bool>& seen,
                          std::vector<bool>& used, int& max_port) {
    if (n->is_port()) {
      int p = n->port();
      if (p < 1) fail(Errc::Malformed, "port name must be >= 1, got " + std::to_string(p));
      if (p > max_port) max_port = p;
      if (static_cast<size_t>(p) >= used.size()) used.resize(static_cast<size_t>(p) + 1, false);
      used[static_cast<size_t>(p)] = true;
      return;
    }
    auto [it, fresh] = seen.emplace(n.get(), true);
    if (!fresh) return;
    int want = rank_of(n->label());
    if (want < 0) fail(Errc::Malformed, "label with negative rank");
    if (static_cast<int>(n->children().size()) != want)
      fail(Errc::ArityMismatch, "label of rank " + std::to_string(want) + " has " +
                                    std::to_string(n->children().size()) + " children");
    for (const NodePtr& c : n->children()) {
      if (!c) fail(Errc::Malformed, "term with null child");
      check_nodes(c, seen, used, max_port);
    }
  }

  template <class M>
  friend class Term;

  NodePtr root_;
  int rank_ = 0;
};

using FiniteTerm = Term<Letter>;
using NestedFiniteTerm = Term<Term<Letter>>;

// ============================================================================
// Traversal helpers (DAG-aware: each distinct node visited once).
// ============================================================================

namespace detail {

template <class L, class F>
void post_order_impl(const typename Term<L>::NodePtr& n,
                     std::unordered_map<const typename Term<L>::Node*, bool>& seen, F&& f) {
  auto [it, fresh] = seen.emplace(n.get(), true);
  if (!fresh) return;
  if (!n->is_port())
    for (const auto& c : n->children()) post_order_impl<L>(c, seen, f);
  f(n);
}

}  // namespace detail

// Visits each distinct node of the term DAG once, children before parents.
template <class L, class F>
void for_each_node(const Term<L>& t, F&& f) {
  std::unordered_map<const typename Term<L>::Node*, bool> seen;
  detail::post_order_impl<L>(t.root(), seen, f);
}

// Number of distinct nodes in the shared representation.
template <class L>
size_t dag_size(const Term<L>& t) {
  size_t k = 0;
  for_each_node(t, [&](const auto&) { ++k; });
  return k;
}

// Number of nodes of the denoted tree (counts shared nodes once per path).
template <class L>
uint64_t tree_size(const Term<L>& t) {
  std::unordered_map<const typename Term<L>::Node*, uint64_t> memo;
  for_each_node(t, [&](const typename Term<L>::NodePtr& n) {
    uint64_t s = 1;
    if (!n->is_port())
      for (const auto& c : n->children()) s += c->is_port() ? 1 : memo.at(c.get());
    memo[n.get()] = s;
  });
  return t.root()->is_port() ? 1 : memo.at(t.root().get());
}

template <class L>
int term_depth(const Term<L>& t) {
  std::unordered_map<const typename Term<L>::Node*, int> memo;
  for_each_node(t, [&](const typename Term<L>::NodePtr& n) {
    int d = 0;
    if (!n->is_port())
      for (const auto& c : n->children()) d = std::max(d, 1 + (c->is_port() ? 0 : memo.at(c.get())));
    memo[n.get()] = d;
  });
  return t.root()->is_port() ? 0 : memo.at(t.root().get());
}

// Port multiplicities of the denoted tree, saturated at 2. counts[i] for
// port i+1 is 0, 1, or 2 ("two or more").
template <class L>
std::vector<int> port_counts_saturated(const Term<L>& t) {
  int n = t.rank();
  std::unordered_map<const typename Term<L>::Node*, std::vector<int>> memo;
  auto counts_of = [&](const typename Term<L>::NodePtr& c) {
    std::vector<int> v(static_cast<size_t>(n), 0);
    if (c->is_port()) {
      if (c->port() <= n) v[static_cast<size_t>(c->port() - 1)] = 1;
    } else {
      v = memo.at(c.get());
    }
    return v;
  };
  for_each_node(t, [&](const typename Term<L>::NodePtr& nd) {
    std::vector<int> v(static_cast<size_t>(n), 0);
    if (!nd->is_port())
      for (const auto& c : nd->children()) {
        std::vector<int> cv = counts_of(c);
        for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = std::min(2, v[static_cast<size_t>(i)] + cv[static_cast<size_t>(i)]);
      }
    memo[nd.get()] = std::move(v);
  });
  return counts_of(t.root());
}

// Port occurrence names of the denoted tree in depth-first order. This walks
// the tree, not the DAG; intended for small terms (profiles, labels).
template <class L>
void port_occurrences_dfs(const typename Term<L>::NodePtr& n, std::vector<int>& out) {
  if (n->is_port()) {
    out.push_back(n->port());
    return;
  }
  for (const auto& c : n->children()) port_occurrences_dfs<L>(c, out);
}

template <class L>
std::vector<int> port_occurrences_dfs(const Term<L>& t) {
  std::vector<int> out;
  port_occurrences_dfs<L>(t.root(), out);
  return out;
}

// ============================================================================
// The monad operations.
// ============================================================================

// unit: a letter sigma of rank n becomes the term sigma(1, ..., n).
template <class L>
Term<L> unit(const L& label) {
  int n = rank_of(label);
  std::vector<typename Term<L>::NodePtr> kids;
  kids.reserve(static_cast<size_t>(n));
  for (int i = 1; i <= n; ++i) kids.push_back(Term<L>::Node::make_port(i));
  return Term<L>::adopt(Term<L>::Node::make(label, std::move(kids)));
}

// unit over a declared alphabet; rejects letters outside it.
inline Term<Letter> unit(const Letter& l, const RankedAlphabet& sigma) {
  if (!sigma.contains(l)) fail(Errc::UnknownLetter, "letter '" + l.name + "' not in alphabet");
  return unit(l);
}

// Node-wise relabelling. f must preserve ranks; ports are untouched.
template <class L, class F>
auto map_labels(const Term<L>& t, F&& f) -> Term<std::decay_t<decltype(f(t.root()->label()))>> {
  using M = std::decay_t<decltype(f(t.root()->label()))>;
  using NodeM = typename Term<M>::Node;
  std::unordered_map<const typename Term<L>::Node*, typename Term<M>::NodePtr> memo;
  for_each_node(t, [&](const typename Term<L>::NodePtr& n) {
    if (n->is_port()) return;
    std::vector<typename Term<M>::NodePtr> kids;
    kids.reserve(n->children().size());
    for (const auto& c : n->children())
      kids.push_back(c->is_port() ? NodeM::make_port(c->port()) : memo.at(c.get()));
    M m = f(n->label());
    if (rank_of(m) != rank_of(n->label()))
      fail(Errc::RankChanged, "relabelling changed rank " + std::to_string(rank_of(n->label())) +
                                  " -> " + std::to_string(rank_of(m)));
    memo[n.get()] = NodeM::make(std::move(m), std::move(kids));
  });
  return Term<M>::adopt(memo.at(t.root().get()));
}

namespace detail {

// Substitutes subst[i-1] for every occurrence of port i in the tree under n.
template <class L>
typename Term<L>::NodePtr substitute_ports(
    const typename Term<L>::NodePtr& n, const std::vector<typename Term<L>::NodePtr>& subst,
    std::unordered_map<const typename Term<L>::Node*, typename Term<L>::NodePtr>& memo) {
  if (n->is_port()) return subst.at(static_cast<size_t>(n->port() - 1));
  if (auto it = memo.find(n.get()); it != memo.end()) return it->second;
  std::vector<typename Term<L>::NodePtr> kids;
  kids.reserve(n->children().size());
  for (const auto& c : n->children()) kids.push_back(substitute_ports<L>(c, subst, memo));
  auto r = Term<L>::Node::make(n->label(), std::move(kids));
  memo.emplace(n.get(), r);
  return r;
}

}  // namespace detail

// flatten: a term whose labels are themselves terms collapses to a term,
// substituting the flattened i-th child for every occurrence of port i in
// each label. A child that is a port flattens to that port. The result keeps
// the outer rank; its root comes from a label's root, so it is never the
// excluded trivial term.
template <class L>
Term<L> flatten(const Term<Term<L>>& t) {
  using NodeL = typename Term<L>::Node;
  std::unordered_map<const typename Term<Term<L>>::Node*, typename Term<L>::NodePtr> memo;
  for_each_node(t, [&](const typename Term<Term<L>>::NodePtr& n) {
    if (n->is_port()) return;
    const Term<L>& s = n->label();
    std::vector<typename Term<L>::NodePtr> subst;
    subst.reserve(n->children().size());
    for (const auto& c : n->children())
      subst.push_back(c->is_port() ? NodeL::make_port(c->port()) : memo.at(c.get()));
    std::unordered_map<const typename Term<L>::Node*, typename Term<L>::NodePtr> smemo;
    memo[n.get()] = detail::substitute_ports<L>(s.root(), subst, smemo);
  });
  return Term<L>::adopt(memo.at(t.root().get()));
}

// ============================================================================
// subtree_at: the subtree rooted at a 0-based address, plus the renumbering
// that makes it a term in its own right.
// ============================================================================

template <class L>
struct SubtreeView {
  // Set when the address points at a port occurrence; port_of_parent is its
  // name in the enclosing term.
  std::optional<int> port_of_parent;
  std::optional<Term<L>> term;
  // Original port name -> canonical name (1.. in depth-first first-occurrence
  // order). Empty when the address points at a port.
  std::map<int, int> port_map;
};

namespace detail {

template <class L>
typename Term<L>::NodePtr renumber_ports(const typename Term<L>::NodePtr& n,
                                         std::map<int, int>& pmap) {
  if (n->is_port()) {
    auto [it, fresh] = pmap.emplace(n->port(), static_cast<int>(pmap.size()) + 1);
    return Term<L>::Node::make_port(it->second);
  }
  std::vector<typename Term<L>::NodePtr> kids;
  kids.reserve(n->children().size());
  for (const auto& c : n->children()) kids.push_back(renumber_ports<L>(c, pmap));
  return Term<L>::Node::make(n->label(), std::move(kids));
}

}  // namespace detail

template <class L>
SubtreeView<L> subtree_at(const Term<L>& t, const Address& addr) {
  typename Term<L>::NodePtr n = t.root();
  for (size_t i = 0; i < addr.size(); ++i) {
    if (n->is_port())
      fail(Errc::BadAddress, "address descends through a port at step " + std::to_string(i));
    int k = addr[i];
    if (k < 0 || static_cast<size_t>(k) >= n->children().size())
      fail(Errc::BadAddress, "child index " + std::to_string(k) + " out of range at step " +
                                 std::to_string(i));
    n = n->children()[static_cast<size_t>(k)];
  }
  SubtreeView<L> out;
  if (n->is_port()) {
    out.port_of_parent = n->port();
    return out;
  }
  // Renumbering walks the denoted tree so that first-occurrence order matches
  // the depth-first reading of the subtree.
  out.term = Term<L>::adopt(detail::renumber_ports<L>(n, out.port_map));
  return out;
}

}  // namespace oclone
