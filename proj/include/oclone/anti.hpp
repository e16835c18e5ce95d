#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oclone/graph.hpp"
#include "oclone/kind.hpp"
#include "oclone/lazy.hpp"

namespace oclone {

// A language of finite binary words given by a total membership test.
// certified_singleton_nerode is a trusted construction fact: every
// Myhill-Nerode class of the language is a singleton. Nothing here can
// establish it; it only propagates to the tree built from the language.
struct WordLanguagePredicate {
  std::function<bool(const std::string&)> member;
  std::string name;
  bool certified_singleton_nerode = false;
};

// Built-in languages: "palindromes" (certified), "all", "empty",
// "zeros-star". ParseError on any other name.
WordLanguagePredicate builtin_predicate(const std::string& name);

// Predicate expressions, for languages beyond the built-ins:
//
//   pred := or
//   or   := and ("or" and)*
//   and  := not ("and" not)*
//   not  := "not" not | atom
//   atom := "(" pred ")" | "true" | "false" | "palindrome"
//         | "is" word | "begins" word | "ends" word | "has" word
//         | "length" cmp nat
//   cmp  := "==" | "!=" | "<=" | ">=" | "<" | ">"
//   word := double-quoted string of 0s and 1s, possibly empty
//
// "has" tests for a factor. The result is never certified.
WordLanguagePredicate parse_predicate(const std::string& text);

// A built-in name if it matches one, otherwise the parsed expression.
WordLanguagePredicate resolve_predicate(const std::string& text);

// The rank-0 tree over {a:2, b:2} whose node at address w is labeled a
// iff w is in the language, reading 0 as a left turn and 1 as a right
// turn. Certified antiregular iff the predicate is.
LazyTree tree_from_language(const WordLanguagePredicate& pred);

// Shortest w with |w| <= maxlen and member(u w) != member(v w), or none
// within the bound. Ties break toward the lexicographically least w.
// EqualWords when u = v.
std::optional<std::string> nerode_witness(const WordLanguagePredicate& pred, const std::string& u,
                                          const std::string& v, int maxlen);

// Searches all pairs of addresses of depth <= node_depth for two whose
// subtrees agree on every extension of length <= witness_len, in
// lexicographic order on (shorter-first) address pairs. Such a pair
// refutes antiregularity within the budget; none is evidence for it, and
// proof only when the tree carries the antiregularity certificate.
std::optional<std::pair<Address, Address>> antiregular_refute(const LazyTree& t, int node_depth,
                                                              int witness_len);

// Two distinct addresses of the unfolding with equal subtrees: the first
// class repetition along the leftmost branch of the bisimulation
// quotient. Every rank-0 graph has one within size(quotient) + 1 steps.
std::pair<Address, Address> equal_subtree_pair(const TermGraph& g);

// One generated graph of the experiment, with its classification and the
// repetition witnessing that its unfolding is not antiregular.
struct ExperimentSample {
  TermGraph graph;
  KindElement element;
  std::pair<Address, Address> repetition;
};

struct ExperimentReport {
  std::map<int, int> kind_histogram;
  std::vector<ExperimentSample> samples;
};

// Draws `count` random rank-0 graphs over {a:2, b:2} with at most
// size_bound vertices and classifies each. Regular trees never land
// outside kind 1; the report carries the per-sample evidence.
ExperimentReport regular_kind1_experiment(uint64_t seed, int count, int size_bound);

}  // namespace oclone
