#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oclone/graph.hpp"
#include "oclone/lazy.hpp"

namespace oclone {

// ============================================================================
// The four kinds of trees with ports over {a:2, b:2}, and the rank-wise
// finite algebra built from them.
//
// kind 1: some subtree is port-free and not densely antiregular.
// kind 2: some subtree is port-free and every port-free subtree is densely
//         antiregular.
// kind 3: every subtree has a port and some port name occurs at least twice.
// kind 4: every subtree has a port and every port name occurs exactly once.
//
// A tree is antiregular when all of its nodes root pairwise distinct
// subtrees, and densely antiregular when below every node there is a node
// rooting an antiregular subtree. Kind-4 trees are necessarily finite and
// are kept whole; the other kinds collapse to a (kind, rank) tag.
// ============================================================================

class KindElement {
 public:
  // Tags exist for kinds 1..3 only. Kind 3 requires a repeated port, so a
  // rank-0 tag of kind 3 is invalid.
  static KindElement tag(int kind, int rank);

  // Wraps a kind-4 term: letters drawn from {a:2, b:2} and every port name
  // used exactly once (which forces every subtree to contain a port).
  static KindElement kind4(FiniteTerm t);

  int kind() const { return kind_; }
  int rank() const { return rank_; }
  bool is_term() const { return term_.has_value(); }
  const FiniteTerm& term() const;

  friend bool operator==(const KindElement& x, const KindElement& y);
  friend bool operator!=(const KindElement& x, const KindElement& y) { return !(x == y); }
  friend bool operator<(const KindElement& x, const KindElement& y);

 private:
  KindElement(int kind, int rank, std::optional<FiniteTerm> term)
      : kind_(kind), rank_(rank), term_(std::move(term)) {}

  int kind_ = 1;
  int rank_ = 0;
  std::optional<FiniteTerm> term_;
};

// Terms and graphs labeled by algebra elements (label rank = child count).
using CATerm = Term<KindElement>;
using CAGraph = Graph<KindElement>;

// "T<kind>/<rank>" for tags, "K4 <term>" for kind-4 elements.
std::string print_kind_element(const KindElement& e);
KindElement parse_kind_element(const std::string& text);

// CATerm text reuses the term S-expression shape with elements as letters:
// "(K4 (a 1 2) 1 (T2/0))". CAGraph text reuses the graph line format:
// "0: K4 (a 1 2) 1 2" or "0: T3/2 1 1". Child counts must match element
// ranks (WrongArity).
std::string print_ca_term(const CATerm& t);
CATerm parse_ca_term(const std::string& text);
std::string print_ca_graph_file(const CAGraph& g);
CAGraph parse_ca_graph_file(const std::string& text);

// ============================================================================
// Classification of concrete trees over {a:2, b:2}.
// ============================================================================

// The kind of the denoted tree, packaged as an element. Finite terms only
// ever land in kinds 3/4 (both letters have rank 2, so every finite subtree
// ends in ports). Graph unfoldings with a port-free region land in kind 1:
// a regular tree has finitely many distinct subtrees, so along any infinite
// branch two nodes repeat a subtree and no subtree is antiregular.
KindElement classify(const FiniteTerm& t);
KindElement classify(const TermGraph& g);

// Sound partial classification of a tree given only as a label oracle.
struct PartialVerdict {
  enum class Status { Definite, RefutedCandidates, Unknown };

  Status status = Status::Unknown;
  // The element, when definite.
  std::optional<KindElement> element;
  // Kinds not ruled out, ascending. Singleton exactly when definite.
  std::vector<int> candidates;
  bool fully_explored = false;
  std::string evidence;
};

// Explores at most depth_budget levels and witness_budget label queries.
// Definite verdicts arise from full exploration (the tree is finite), or
// from certificates: "all-subtrees-have-ports" plus an observed repeated
// port pins kind 3; "antiregular-by-construction" on a rank-0 tree pins
// kind 2. A bounded inspection alone can never certify kinds 1/2, so
// without a certificate those stay candidates.
PartialVerdict classify_lazy(const LazyTree& t, int depth_budget, int witness_budget);

// The homomorphism into the algebra: classify on decidable inputs; on lazy
// inputs requires a definite verdict (Undetermined otherwise).
KindElement hom_h(const FiniteTerm& t);
KindElement hom_h(const TermGraph& g);
KindElement hom_h(const LazyTree& t);

// Membership in the recognizing set B = {Tag(2,0)}.
bool is_accepting_element(const KindElement& e);

// True iff the rank-0 input denotes a densely antiregular tree, decided
// through hom_h. NonZeroRank when the input has ports.
bool recognizes_densely_antiregular(const TermGraph& g);
bool recognizes_densely_antiregular(const LazyTree& t);

// ============================================================================
// The product CA -> A, computed by a decision list on the term's shape and
// labels. Each rule is named by what it detects; they are tried in order.
// ============================================================================

enum class DiagramCase {
  Kind1Label,        // some label has kind 1
  UnguardedPortFree, // a port-free region escapes every kind-2 label
  GuardedPortFree,   // every port-free region leads to a kind-2 label
  Kind2Label,        // all regions portful, some label kind 2
  Kind3Label,        // all regions portful, some label kind 3
  RepeatedPort,      // all labels kind 4, some port name used twice
  Flattened,         // all labels kind 4, each port once: materialize
};

const char* diagram_case_name(DiagramCase c);

struct PrOutcome {
  KindElement value;
  DiagramCase rule;
};

PrOutcome pr_A_traced(const CATerm& t);
PrOutcome pr_A_traced(const CAGraph& g);
KindElement pr_A(const CATerm& t);
KindElement pr_A(const CAGraph& g);

// ============================================================================
// Randomized law checking for the clone axioms.
// ============================================================================

struct LawReport {
  int unit_trials = 0;
  int unit_failures = 0;
  int flatten_trials = 0;
  int flatten_failures = 0;
  std::string first_failure;

  bool ok() const { return unit_failures == 0 && flatten_failures == 0; }
};

// Axiom 1 (product of a unit is the element itself): exhaustive over tags of
// rank <= 6 plus sampled kind-4 elements, at least `trials` cases in total.
// Axiom 2 (product commutes with flattening): `trials` random two-level
// terms, both evaluation orders compared. The product function is
// injectable so that a deliberately broken product demonstrably fails.
LawReport check_clone_laws(uint64_t seed, int trials);
LawReport check_clone_laws(uint64_t seed, int trials,
                           const std::function<KindElement(const CATerm&)>& product);

// ============================================================================
// Finite generation: every element of rank <= R decomposes over the twelve
// generators (the eight tags of rank <= 2 and the four one-node kind-4
// terms a(1,2), a(2,1), b(1,2), b(2,1)).
// ============================================================================

class GeneratorSearch {
 public:
  GeneratorSearch();

  static const std::vector<KindElement>& generators();

  // The first CATerm over the generators, in term-size-then-lexicographic
  // order, whose product is `target`; verified by pr_A before returning.
  // Kind-4 targets use the structural mirror of their own term; tags are
  // found by leveled enumeration. Since terms compare by rank first, only
  // terms of the target's rank are materialized. SearchExhausted when no
  // witness exists within the node budget implied by rank_bound; TooLarge
  // when rank(target) > rank_bound.
  CATerm decompose(const KindElement& target, int rank_bound);

 private:
  void fill_level(int node_count, int rank);

  // Per target rank, the largest node count already enumerated.
  std::map<int, int> filled_;
  std::map<KindElement, CATerm> found_;
};

CATerm generator_decompose(const KindElement& target, int rank_bound);

}  // namespace oclone
