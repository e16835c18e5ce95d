#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "oclone/kind.hpp"

namespace oclone {

// Trigger counts of the product's decision rules, aggregated across the
// homomorphism and law suites.
using CaseHistogram = std::map<DiagramCase, long>;

struct SuiteReport {
  std::string name;
  long trials = 0;
  long failures = 0;
  double seconds = 0.0;
  // Wall-clock bound the suite must stay under; 0 means none.
  double budget_seconds = 0.0;
  std::string detail;
  std::string first_failure;

  bool ok() const {
    return failures == 0 && (budget_seconds <= 0.0 || seconds < budget_seconds);
  }
};

std::string format_report(const SuiteReport& r);
std::string format_histogram(const CaseHistogram& cases);

// Homomorphism square on random finite nested terms: evaluating labels
// first and flattening first give the same element. Rules taken by the
// product side are tallied into `cases` when given.
SuiteReport suite_hom_square(uint64_t seed, int trials, CaseHistogram* cases);

// The same square through graph_flatten on random nested regular
// instances, including port-free trap regions and kind-4 label batches.
SuiteReport suite_regular_square(uint64_t seed, int trials, CaseHistogram* cases);

// Both clone axioms: unit exhaustively over tags of rank <= 6 plus sampled
// kind-4 elements, flattening on random two-level element terms.
SuiteReport suite_clone_laws(uint64_t seed, int trials, CaseHistogram* cases);

// Threshold check over the aggregated histogram: the three rules reachable
// from plain {a,b} inputs need 200 hits each, the four that require
// injected tags or port-free regions need 50.
SuiteReport suite_case_coverage(const CaseHistogram& cases);

// The two flattening lemmas on random nested regular instances: ports
// everywhere in the flattening iff outer and labels are portful, and port
// repetition comes from the outer shape or a kind-3 label.
SuiteReport suite_flatten_lemmas(uint64_t seed, int trials);

// Zielonka against the brute-force oracle: every arena with <= 4 vertices,
// priorities <= 3 and out-degree <= 2 (one representative per
// vertex-permutation orbit), plus `random_trials` random arenas with <= 8
// vertices. All strategies must pass verify_strategy.
SuiteReport suite_parity_solver(uint64_t seed, int random_trials);

// The three fixed automata on random rank-0 graphs: membership agrees with
// the exhaustive run search wherever the product stays within 64
// positions, and emptiness witnesses pass membership.
SuiteReport suite_automata(uint64_t seed, int graphs_per_automaton);

// Profile compositionality: stitching per-label profile sets equals the
// profile set of the flattened term.
SuiteReport suite_profiles(uint64_t seed, int trials);

// The palindrome tree survives the refutation search at the given budgets,
// and every pair of distinct words up to word_len has a Nerode witness.
SuiteReport suite_antiregular(int node_depth, int witness_len, int word_len);

// Random regular rank-0 trees all classify to Tag(1,0) and are rejected,
// while the certified palindrome tree is accepted.
SuiteReport suite_not_regular(uint64_t seed, int trials, int size_bound);

// Every element of rank <= 4 decomposes over the twelve generators, with
// the witness re-verified through the product.
SuiteReport suite_generators(uint64_t seed, int kind4_samples);

// The full gate in order, at the pinned acceptance scales, with the case
// histogram threaded from the first three suites into the coverage check.
std::vector<SuiteReport> run_all_suites(uint64_t seed);

}  // namespace oclone
