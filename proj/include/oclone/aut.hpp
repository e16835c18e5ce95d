#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "oclone/alphabet.hpp"
#include "oclone/graph.hpp"
#include "oclone/term.hpp"

namespace oclone {

// ============================================================================
// ParityAutomaton: a nondeterministic parity automaton on ranked trees, with
// max-parity acceptance. A run labels every tree node with a state so that
// each node's (state, child states) pair is a transition of the node's
// letter; it is accepting when on every infinite branch the maximal state
// priority seen infinitely often is even. Finite branches (below rank-0
// letters) are unconstrained.
// ============================================================================

class ParityAutomaton {
 public:
  // Reading a letter of rank r in state `from` sends child i to state to[i].
  struct Transition {
    int from = 0;
    std::vector<int> to;

    friend bool operator==(const Transition& x, const Transition& y) {
      return x.from == y.from && x.to == y.to;
    }
    friend bool operator<(const Transition& x, const Transition& y) {
      if (x.from != y.from) return x.from < y.from;
      return x.to < y.to;
    }
  };

  // Validates: at least one state, distinct nonempty state names, initial in
  // range, one priority >= 0 per state, every transition letter in the
  // alphabet with matching arity, every referenced state in range. Each
  // per-letter list is sorted and deduplicated; empty lists are dropped.
  static ParityAutomaton adopt(RankedAlphabet alphabet, std::vector<std::string> states,
                               int initial, std::vector<int> priority,
                               std::map<std::string, std::vector<Transition>> transitions);

  const RankedAlphabet& alphabet() const { return alphabet_; }
  int state_count() const { return static_cast<int>(states_.size()); }
  const std::string& state_name(int q) const { return states_.at(static_cast<size_t>(q)); }
  int find_state(const std::string& name) const;
  int initial() const { return initial_; }
  int priority(int q) const { return priority_.at(static_cast<size_t>(q)); }
  // Transitions reading the named letter; empty when none are declared.
  const std::vector<Transition>& delta(const std::string& letter) const;
  const std::map<std::string, std::vector<Transition>>& transitions() const {
    return transitions_;
  }

  friend bool operator==(const ParityAutomaton& x, const ParityAutomaton& y) {
    return x.alphabet_ == y.alphabet_ && x.states_ == y.states_ && x.initial_ == y.initial_ &&
           x.priority_ == y.priority_ && x.transitions_ == y.transitions_;
  }
  friend bool operator!=(const ParityAutomaton& x, const ParityAutomaton& y) { return !(x == y); }

 private:
  ParityAutomaton() = default;

  RankedAlphabet alphabet_;
  std::vector<std::string> states_;
  int initial_ = 0;
  std::vector<int> priority_;
  std::map<std::string, std::vector<Transition>> transitions_;
};

// Text form. Four header statements in this order, then one statement per
// transition (grammar in docs/formats.md):
//   alphabet a:2 b:2;
//   states qa qb;
//   init qa;
//   priority qa=1 qb=2;
//   a: qa -> qa qa;
// A rank-0 letter writes `c: q0 ->;`. aut_read reports ParseError with the
// offending line; aut_write emits the canonical form (letters in alphabet
// order, transitions sorted), which round-trips.
ParityAutomaton aut_read(const std::string& text);
std::string aut_write(const ParityAutomaton& aut);

// ============================================================================
// Membership and emptiness for regular trees.
// ============================================================================

// True iff the unfolding of g is accepted. Decided on the product parity
// game: at (vertex, state) the automaton (even) picks a transition, then the
// pathfinder (odd) picks a child to descend into; state priorities carry
// over, choice positions are neutral. AlphabetMismatch when g uses a letter
// the automaton does not know, NonZeroRank when g has ports.
bool membership(const ParityAutomaton& aut, const TermGraph& g);

// A memoryless accepting run: one node per (vertex, state) pair the play can
// reach under the automaton's winning strategy, on the minimized graph.
struct RunAnnotation {
  struct Node {
    int vertex = 0;
    int state = 0;
    int transition = 0;  // index into delta(letter at vertex)
    std::vector<int> next;
  };

  TermGraph graph;  // minimized input; node 0 covers (root, initial state)
  std::vector<Node> nodes;
};

// The annotation induced by a winning strategy, or none when g is rejected.
std::optional<RunAnnotation> extract_run(const ParityAutomaton& aut, const TermGraph& g);

// Structural consistency of the annotation, plus the parity condition:
// every cycle through the annotation has even maximal state priority.
bool verify_run(const ParityAutomaton& aut, const RunAnnotation& run);

// Membership oracle, independent of the game solvers: backtracking search
// over per-(vertex, state) transition choices, pruning as soon as the chosen
// edges close a cycle with odd maximal priority. TooLarge when the product
// has more than 64 positions.
bool membership_exhaustive(const ParityAutomaton& aut, const TermGraph& g);

struct EmptinessResult {
  bool empty = true;
  std::optional<TermGraph> witness;  // present iff non-empty
};

// Emptiness game: the automaton picks a letter and a transition, the
// pathfinder picks a child. A non-empty language yields a regular witness
// read off the automaton's memoryless strategy; it passes membership.
EmptinessResult is_empty_with_witness(const ParityAutomaton& aut);

// ============================================================================
// Run profiles on finite terms.
// ============================================================================

// One port occurrence of a run: the state reached at the leaf, the maximal
// priority on the root-to-leaf path with both endpoint states included, and
// the occurrence's port name.
struct PortRecord {
  int state = 0;
  int max_priority = 0;
  int port = 0;

  friend bool operator==(const PortRecord& x, const PortRecord& y) {
    return x.state == y.state && x.max_priority == y.max_priority && x.port == y.port;
  }
  friend bool operator<(const PortRecord& x, const PortRecord& y) {
    return std::tie(x.state, x.max_priority, x.port) < std::tie(y.state, y.max_priority, y.port);
  }
};

// The profile of one run: root state plus one record per port occurrence of
// the term, in depth-first order.
struct Profile {
  int root_state = 0;
  std::vector<PortRecord> records;

  friend bool operator==(const Profile& x, const Profile& y) {
    return x.root_state == y.root_state && x.records == y.records;
  }
  friend bool operator<(const Profile& x, const Profile& y) {
    if (x.root_state != y.root_state) return x.root_state < y.root_state;
    return x.records < y.records;
  }
};

using ProfileSet = std::set<Profile>;

// View that forgets occurrence order and multiplicity.
std::set<std::tuple<int, int, int>> record_set(const Profile& p);

// Port names at t's leaves, one entry per occurrence, in depth-first order.
std::vector<int> port_occurrences(const FiniteTerm& t);

// The profiles of all runs on t, from every root state. AlphabetMismatch
// when t uses a letter the automaton does not know.
ProfileSet profiles_finite(const ParityAutomaton& aut, const FiniteTerm& t);

// A term piece carrying its profile set, for composition along a nested term.
struct ProfiledTerm {
  FiniteTerm term;
  ProfileSet profiles;

  int rank() const { return term.rank(); }
};

// Stitches the labels' profiles along the outer shape: each parent port
// record continues into a child profile whose root state matches, and the
// path maxima merge by running maximum across the seam. When every label
// carries exactly its term's profiles, the result equals profiles_finite of
// the flattened term. ShapeMismatch when a profile disagrees with its own
// term's port occurrences.
ProfileSet profile_product(const Term<ProfiledTerm>& outer);

}  // namespace oclone
