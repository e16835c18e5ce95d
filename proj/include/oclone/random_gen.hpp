#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "oclone/aut.hpp"
#include "oclone/game.hpp"
#include "oclone/graph.hpp"
#include "oclone/kind.hpp"
#include "oclone/term.hpp"

namespace oclone {

// Deterministic RNG. mt19937_64 output is pinned by the standard and the
// derived draws below avoid std::uniform_int_distribution (whose mapping is
// implementation-defined), so a seed reproduces byte-identical streams on
// any platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t raw() { return eng_(); }

  // Uniform in [0, n). Modulo bias is irrelevant at test-harness scale.
  int below(int n) { return static_cast<int>(raw() % static_cast<uint64_t>(n)); }

  // Uniform in [lo, hi].
  int range(int lo, int hi) { return lo + below(hi - lo + 1); }

  // True with probability num/den.
  bool chance(int num, int den) { return below(den) < num; }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<size_t>(below(static_cast<int>(v.size())))];
  }

 private:
  std::mt19937_64 eng_;
};

// ============================================================================
// Random instances over {a:2, b:2}. All generators produce valid objects
// (rejection-sampled where needed) and are deterministic in the Rng state.
// ============================================================================

// A term of the given rank >= 1; every inner node binary, leaves are ports.
FiniteTerm random_ab_term(Rng& rng, int rank, int max_depth);

// A term where each port 1..rank occurs exactly once (rank >= 2; binary
// letters force at least two leaves).
FiniteTerm random_kind4_term(Rng& rng, int rank);

// A nested term: outer nodes labeled by terms of matching rank 1..max_label_rank.
NestedFiniteTerm random_nested_ab(Rng& rng, int rank, int outer_depth, int label_depth,
                                  int max_label_rank);

// Three layers deep, for associativity checks.
Term<NestedFiniteTerm> random_triple_ab(Rng& rng, int rank, int outer_depth);

// A term graph of the given rank with at most max_inner non-port vertices.
// Labels and successors uniform, rejection until the graph is valid.
TermGraph random_term_graph(Rng& rng, int rank, int max_inner);

// As above but every subtree of the unfolding has a port (backward-closure
// rejection on top of validity).
TermGraph random_portful_term_graph(Rng& rng, int rank, int max_inner);

// Outer graph labeled with term graphs. Label ranks match successor counts.
// When trap_region is set, the outer graph contains a cycle that cannot
// reach any port vertex but all labels still have ports everywhere (the
// port-free region then comes from the outer shape alone).
struct NestedGraphOptions {
  int rank = 0;
  int max_outer = 5;
  int max_label_inner = 4;
  int max_label_rank = 3;
  bool portful_labels = false;  // labels pass every_subtree_has_port
  bool kind4_labels = false;    // labels are graphs of kind-4 terms
  bool trap_region = false;     // outer port-free cycle
  bool outer_tree = false;      // outer shape is a tree (each port once)
};
Graph<TermGraph> random_nested_graph(Rng& rng, const NestedGraphOptions& opt);

// A random algebra element: a tag of rank <= max_rank or, when max_rank
// allows, a kind-4 term element (those have rank >= 2).
KindElement random_kind_element(Rng& rng, int max_rank);

// A term over algebra elements with ports exactly 1..rank; element labels
// have rank <= max_label_rank and branches bottom out in rank-0 tag leaves.
CATerm random_ca_term(Rng& rng, int rank, int max_depth, int max_label_rank);

// An outer term whose labels are CA terms of matching ranks, for checking
// that the product commutes with flattening.
Term<CATerm> random_nested_ca_term(Rng& rng, int rank, int outer_depth);

// An arena with 1..max_vertices vertices, priorities in [0, max_priority],
// out-degrees in [1, max_degree], distinct successors per vertex.
GameArena random_arena(Rng& rng, int max_vertices, int max_priority, int max_degree);

// An automaton over {a:2, b:2} with 1..max_states states, priorities in
// [0, max_priority], and 0..2 transitions per (letter, source) pair.
ParityAutomaton random_automaton(Rng& rng, int max_states, int max_priority);

}  // namespace oclone
