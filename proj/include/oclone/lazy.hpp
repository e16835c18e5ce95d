#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "oclone/term.hpp"

namespace oclone {

// Certificate tags a LazyTree may carry. Certificates are trusted facts
// established by the construction of the tree, not checked here; a
// depth-bounded inspection alone can never certify either property.
inline constexpr const char* kCertAntiregular = "antiregular-by-construction";
inline constexpr const char* kCertPortsEverywhere = "all-subtrees-have-ports";

// A tree presented as a label oracle. label_at must be total on addresses
// consistent with the ranks of the labels it returns (children 0..rank-1
// under a letter, none under a port).
struct LazyTree {
  std::function<std::variant<int, Letter>(const Address&)> label_at;
  int rank = 0;
  std::optional<std::string> certificate;

  bool certified(const char* tag) const { return certificate && *certificate == tag; }
};

// ============================================================================
// Depth-bounded unfolding. Nodes at the cutoff depth that still have
// children are replaced by a cut marker; leaves at the cutoff stay leaves.
// ============================================================================

template <class L>
struct Prefix {
  enum class Tag { Cut, Port, Inner };

  Tag tag = Tag::Cut;
  int port = 0;
  std::optional<L> label;
  std::vector<Prefix> children;

  static Prefix cut() { return Prefix{}; }
  static Prefix port_leaf(int name) {
    Prefix p;
    p.tag = Tag::Port;
    p.port = name;
    return p;
  }
  static Prefix inner(L l, std::vector<Prefix> kids) {
    Prefix p;
    p.tag = Tag::Inner;
    p.label = std::move(l);
    p.children = std::move(kids);
    return p;
  }

  friend bool operator==(const Prefix& x, const Prefix& y) {
    if (x.tag != y.tag) return false;
    switch (x.tag) {
      case Tag::Cut: return true;
      case Tag::Port: return x.port == y.port;
      case Tag::Inner: return *x.label == *y.label && x.children == y.children;
    }
    return false;
  }
  friend bool operator!=(const Prefix& x, const Prefix& y) { return !(x == y); }
};

namespace detail {

inline Prefix<Letter> unfold_lazy_impl(const LazyTree& t, Address& addr, int depth_left) {
  std::variant<int, Letter> l = t.label_at(addr);
  if (std::holds_alternative<int>(l)) return Prefix<Letter>::port_leaf(std::get<int>(l));
  const Letter& letter = std::get<Letter>(l);
  if (letter.rank == 0) return Prefix<Letter>::inner(letter, {});
  if (depth_left == 0) return Prefix<Letter>::cut();
  std::vector<Prefix<Letter>> kids;
  kids.reserve(static_cast<size_t>(letter.rank));
  for (int i = 0; i < letter.rank; ++i) {
    addr.push_back(i);
    kids.push_back(unfold_lazy_impl(t, addr, depth_left - 1));
    addr.pop_back();
  }
  return Prefix<Letter>::inner(letter, std::move(kids));
}

template <class L>
Prefix<L> unfold_term_impl(const typename Term<L>::NodePtr& n, int depth_left) {
  if (n->is_port()) return Prefix<L>::port_leaf(n->port());
  if (n->children().empty()) return Prefix<L>::inner(n->label(), {});
  if (depth_left == 0) return Prefix<L>::cut();
  std::vector<Prefix<L>> kids;
  kids.reserve(n->children().size());
  for (const auto& c : n->children()) kids.push_back(unfold_term_impl<L>(c, depth_left - 1));
  return Prefix<L>::inner(n->label(), std::move(kids));
}

}  // namespace detail

inline Prefix<Letter> unfold_prefix(const LazyTree& t, int depth) {
  if (depth < 0) fail(Errc::Malformed, "negative unfold depth");
  Address addr;
  return detail::unfold_lazy_impl(t, addr, depth);
}

template <class L>
Prefix<L> unfold_prefix(const Term<L>& t, int depth) {
  if (depth < 0) fail(Errc::Malformed, "negative unfold depth");
  return detail::unfold_term_impl<L>(t.root(), depth);
}

// A finite term seen as a label oracle (no sharing concerns; addresses walk
// the denoted tree).
LazyTree term_view(const FiniteTerm& t);

}  // namespace oclone
