#include "oclone/suites.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <sstream>

#include "oclone/anti.hpp"
#include "oclone/aut.hpp"
#include "oclone/game.hpp"
#include "oclone/io.hpp"
#include "oclone/random_gen.hpp"

namespace oclone {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void tally(CaseHistogram* cases, DiagramCase c) {
  if (cases) ++(*cases)[c];
}

void record_failure(SuiteReport& r, const std::string& what) {
  ++r.failures;
  if (r.first_failure.empty()) r.first_failure = what;
}

constexpr DiagramCase kAllCases[] = {
    DiagramCase::Kind1Label,  DiagramCase::UnguardedPortFree, DiagramCase::GuardedPortFree,
    DiagramCase::Kind2Label,  DiagramCase::Kind3Label,        DiagramCase::RepeatedPort,
    DiagramCase::Flattened};

}  // namespace

std::string format_report(const SuiteReport& r) {
  std::ostringstream os;
  os << (r.ok() ? "PASS" : "FAIL") << ' ' << r.name << ": " << r.trials << " checks, "
     << r.failures << " failures, ";
  os.setf(std::ios::fixed);
  os.precision(2);
  os << r.seconds << "s";
  if (r.budget_seconds > 0.0) os << " (budget " << r.budget_seconds << "s)";
  if (!r.detail.empty()) os << "; " << r.detail;
  if (!r.first_failure.empty()) os << "; first failure: " << r.first_failure;
  return os.str();
}

std::string format_histogram(const CaseHistogram& cases) {
  std::ostringstream os;
  bool first = true;
  for (DiagramCase c : kAllCases) {
    const auto it = cases.find(c);
    os << (first ? "" : " ") << diagram_case_name(c) << '='
       << (it == cases.end() ? 0L : it->second);
    first = false;
  }
  return os.str();
}

// ============================================================================
// Suites 1-3: the commuting square and the clone laws
// ============================================================================

SuiteReport suite_hom_square(uint64_t seed, int trials, CaseHistogram* cases) {
  SuiteReport r;
  r.name = "hom-square-terms";
  r.budget_seconds = 60.0;
  const auto t0 = Clock::now();
  Rng rng(seed);
  const auto h = [](const FiniteTerm& u) { return classify(u); };
  for (int i = 0; i < trials; ++i) {
    // Labels can have rank 3, which binary letters only reach at depth 2.
    const NestedFiniteTerm t =
        random_nested_ab(rng, rng.range(1, 3), rng.range(1, 3), rng.range(2, 3), 3);
    const KindElement lhs = classify(flatten(t));
    const PrOutcome rhs = pr_A_traced(map_labels(t, h));
    tally(cases, rhs.rule);
    ++r.trials;
    if (lhs != rhs.value)
      record_failure(r, "trial " + std::to_string(i) + ": " + print_kind_element(lhs) +
                            " != " + print_kind_element(rhs.value));
  }
  r.seconds = seconds_since(t0);
  return r;
}

SuiteReport suite_regular_square(uint64_t seed, int trials, CaseHistogram* cases) {
  SuiteReport r;
  r.name = "hom-square-graphs";
  r.budget_seconds = 120.0;
  const auto t0 = Clock::now();
  Rng rng(seed);
  const auto h = [](const TermGraph& u) { return classify(u); };
  for (int i = 0; i < trials; ++i) {
    NestedGraphOptions opt;
    opt.rank = rng.range(0, 2);
    opt.max_outer = rng.range(1, 6);
    switch (i % 4) {
      case 0: break;
      case 1: opt.portful_labels = true; break;
      case 2:
        opt.portful_labels = true;
        opt.kind4_labels = true;
        break;
      case 3:
        opt.trap_region = true;
        opt.portful_labels = true;
        break;
    }
    // Covering two ports, or escaping a trap region, takes labels of rank 2+;
    // rank-3 labels in turn need two inner vertices to supply enough edges.
    opt.max_label_rank =
        (opt.rank >= 2 || (opt.trap_region && opt.rank >= 1)) ? rng.range(2, 3) : rng.range(1, 3);
    opt.max_label_inner = rng.range(opt.max_label_rank >= 3 ? 2 : 1, 8);
    // A lone outer vertex cannot both feed the trap and reach two ports.
    if (opt.trap_region && opt.rank >= 2) opt.max_outer = std::max(opt.max_outer, 2);
    const Graph<TermGraph> G = random_nested_graph(rng, opt);
    const KindElement lhs = classify(graph_flatten(G));
    const PrOutcome rhs = pr_A_traced(map_vertices(G, h));
    tally(cases, rhs.rule);
    ++r.trials;
    if (lhs != rhs.value)
      record_failure(r, "trial " + std::to_string(i) + ": " + print_kind_element(lhs) +
                            " != " + print_kind_element(rhs.value));
  }
  r.seconds = seconds_since(t0);
  return r;
}

SuiteReport suite_clone_laws(uint64_t seed, int trials, CaseHistogram* cases) {
  SuiteReport r;
  r.name = "clone-laws";
  const auto t0 = Clock::now();
  const LawReport law = check_clone_laws(seed, trials, [&](const CATerm& t) {
    const PrOutcome o = pr_A_traced(t);
    tally(cases, o.rule);
    return o.value;
  });
  r.trials = law.unit_trials + law.flatten_trials;
  r.failures = law.unit_failures + law.flatten_failures;
  r.first_failure = law.first_failure;
  r.detail = "unit: " + std::to_string(law.unit_trials) +
             ", flatten: " + std::to_string(law.flatten_trials);
  r.seconds = seconds_since(t0);
  return r;
}

SuiteReport suite_case_coverage(const CaseHistogram& cases) {
  SuiteReport r;
  r.name = "case-coverage";
  const auto t0 = Clock::now();
  struct Need {
    DiagramCase c;
    long need;
  };
  // The three rules reachable from plain {a,b} inputs carry the bulk; the
  // other four need injected tags or port-free regions.
  const Need needs[] = {{DiagramCase::Kind3Label, 200},   {DiagramCase::RepeatedPort, 200},
                        {DiagramCase::Flattened, 200},    {DiagramCase::Kind1Label, 50},
                        {DiagramCase::UnguardedPortFree, 50}, {DiagramCase::GuardedPortFree, 50},
                        {DiagramCase::Kind2Label, 50}};
  for (const Need& n : needs) {
    ++r.trials;
    const auto it = cases.find(n.c);
    const long got = it == cases.end() ? 0L : it->second;
    if (got < n.need)
      record_failure(r, std::string(diagram_case_name(n.c)) + " hit " + std::to_string(got) +
                            " times, needs " + std::to_string(n.need));
  }
  r.detail = format_histogram(cases);
  r.seconds = seconds_since(t0);
  return r;
}

// ============================================================================
// Suite 5: the flattening lemmas
// ============================================================================

SuiteReport suite_flatten_lemmas(uint64_t seed, int trials) {
  SuiteReport r;
  r.name = "flatten-lemmas";
  const auto t0 = Clock::now();
  Rng rng(seed);

  const auto labels_all_portful = [](const Graph<TermGraph>& G) {
    for (int v = 0; v < G.size(); ++v)
      if (!G.at(v).is_port() && !every_subtree_has_port(G.at(v).lab())) return false;
    return true;
  };
  const auto some_label_kind3 = [](const Graph<TermGraph>& G) {
    for (int v = 0; v < G.size(); ++v)
      if (!G.at(v).is_port() && classify(G.at(v).lab()).kind() == 3) return true;
    return false;
  };
  const auto some_port_many = [](const auto& g) {
    for (int p = 1; p <= g.rank(); ++p)
      if (port_multiplicity(g, p) == Multiplicity::Many) return true;
    return false;
  };

  // Ports-everywhere biconditional, free mix of shapes.
  for (int i = 0; i < trials; ++i) {
    NestedGraphOptions opt;
    opt.rank = rng.range(0, 2);
    opt.max_outer = rng.range(1, 4);
    opt.max_label_inner = 3;
    opt.portful_labels = (i % 3 != 0);
    opt.trap_region = (i % 5 == 0);
    opt.max_label_rank =
        (opt.rank >= 2 || (opt.trap_region && opt.rank >= 1)) ? rng.range(2, 3) : rng.range(1, 3);
    if (opt.trap_region && opt.rank >= 2) opt.max_outer = std::max(opt.max_outer, 2);
    const Graph<TermGraph> G = random_nested_graph(rng, opt);
    const TermGraph flat = graph_flatten(G);
    ++r.trials;
    if (every_subtree_has_port(flat) != (every_subtree_has_port(G) && labels_all_portful(G)))
      record_failure(r, "ports-everywhere biconditional, trial " + std::to_string(i));
  }

  // Port-repetition biconditional under the ports-everywhere premise.
  int got = 0;
  int attempts = 0;
  while (got < trials) {
    if (++attempts > 20 * trials + 20000) {
      record_failure(r, "could not sample enough portful instances");
      break;
    }
    NestedGraphOptions opt;
    opt.rank = rng.range(0, 2);
    opt.max_outer = rng.range(1, 4);
    opt.max_label_inner = 3;
    opt.portful_labels = true;
    opt.max_label_rank = opt.rank >= 2 ? rng.range(2, 3) : rng.range(1, 3);
    const Graph<TermGraph> G = random_nested_graph(rng, opt);
    const TermGraph flat = graph_flatten(G);
    if (!every_subtree_has_port(flat)) continue;
    ++got;
    ++r.trials;
    if (some_port_many(flat) != (some_port_many(G) || some_label_kind3(G)))
      record_failure(r, "port-repetition biconditional, instance " + std::to_string(got));
  }
  r.seconds = seconds_since(t0);
  return r;
}

// ============================================================================
// Suite 6: the parity solver against the oracle
// ============================================================================

namespace {

// Enumerates every arena with n in [1, max_n] vertices, priorities up to
// max_priority and out-degree up to 2, visiting one representative per
// vertex-permutation orbit: a candidate is visited iff no permutation
// remaps its per-vertex code tuple to a lexicographically smaller one.
template <class F>
long exhaustive_small_arenas(int max_n, int max_priority, F&& visit) {
  long count = 0;
  for (int n = 1; n <= max_n; ++n) {
    std::vector<std::vector<int>> sets;
    for (int x = 0; x < n; ++x) sets.push_back({x});
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y) sets.push_back({x, y});
    const int ns = static_cast<int>(sets.size());
    const int prs = max_priority + 1;
    const int m = 2 * prs * ns;

    std::map<std::vector<int>, int> set_idx;
    for (int i = 0; i < ns; ++i) set_idx.emplace(sets[static_cast<size_t>(i)], i);

    // Non-identity permutations: inverse plus the induced code remap.
    std::vector<std::vector<int>> pinvs, remaps;
    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    while (std::next_permutation(perm.begin(), perm.end())) {
      std::vector<int> pinv(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) pinv[static_cast<size_t>(perm[static_cast<size_t>(i)])] = i;
      std::vector<int> remap(static_cast<size_t>(m));
      for (int c = 0; c < m; ++c) {
        std::vector<int> s = sets[static_cast<size_t>(c % ns)];
        for (int& x : s) x = perm[static_cast<size_t>(x)];
        std::sort(s.begin(), s.end());
        remap[static_cast<size_t>(c)] = (c / ns) * ns + set_idx.at(s);
      }
      pinvs.push_back(std::move(pinv));
      remaps.push_back(std::move(remap));
    }

    std::vector<int> d(static_cast<size_t>(n), 0);
    for (;;) {
      bool canonical = true;
      for (size_t pi = 0; pi < pinvs.size() && canonical; ++pi) {
        const std::vector<int>& pinv = pinvs[pi];
        const std::vector<int>& remap = remaps[pi];
        for (int i = 0; i < n; ++i) {
          const int e = remap[static_cast<size_t>(d[static_cast<size_t>(pinv[static_cast<size_t>(i)])])];
          if (e != d[static_cast<size_t>(i)]) {
            canonical = e > d[static_cast<size_t>(i)];
            break;
          }
        }
      }
      if (canonical) {
        std::vector<GameArena::Vertex> vs(static_cast<size_t>(n));
        for (int v = 0; v < n; ++v) {
          const int c = d[static_cast<size_t>(v)];
          vs[static_cast<size_t>(v)].owner = (c / ns) / prs == 0 ? Player::Even : Player::Odd;
          vs[static_cast<size_t>(v)].priority = (c / ns) % prs;
          vs[static_cast<size_t>(v)].edges = sets[static_cast<size_t>(c % ns)];
        }
        visit(GameArena::adopt(std::move(vs)));
        ++count;
      }
      int i = n - 1;
      while (i >= 0 && d[static_cast<size_t>(i)] == m - 1) d[static_cast<size_t>(i--)] = 0;
      if (i < 0) break;
      ++d[static_cast<size_t>(i)];
    }
  }
  return count;
}

}  // namespace

SuiteReport suite_parity_solver(uint64_t seed, int random_trials) {
  SuiteReport r;
  r.name = "parity-solver";
  r.budget_seconds = 60.0;
  const auto t0 = Clock::now();

  const auto check = [&r](const GameArena& a, bool full) {
    ++r.trials;
    const Solution z = solve_zielonka(a);
    const Solution b = solve_bruteforce(a);
    bool good = z.win_even == b.win_even && z.win_odd == b.win_odd;
    good = good && verify_strategy(a, Player::Even, z.strategy_even) &&
           verify_strategy(a, Player::Odd, z.strategy_odd) &&
           verify_strategy(a, Player::Even, b.strategy_even) &&
           verify_strategy(a, Player::Odd, b.strategy_odd);
    if (full) good = good && verify_solution(a, z) && verify_solution(a, b);
    if (!good) record_failure(r, "arena " + pg_write(a));
  };

  const long reps = exhaustive_small_arenas(4, 3, [&](const GameArena& a) { check(a, false); });
  Rng rng(seed);
  for (int i = 0; i < random_trials; ++i) {
    const GameArena a = i % 2 == 0 ? random_arena(rng, 8, 5, 2) : random_arena(rng, 5, 4, 3);
    check(a, true);
  }
  r.detail = std::to_string(reps) + " orbit representatives, " + std::to_string(random_trials) +
             " random arenas";
  r.seconds = seconds_since(t0);
  return r;
}

// ============================================================================
// Suite 7: automata membership and emptiness
// ============================================================================

namespace {

const char* kUniversalAut =
    "alphabet a:2 b:2;\n"
    "states q;\n"
    "init q;\n"
    "priority q=0;\n"
    "a: q -> q q;\n"
    "b: q -> q q;\n";

const char* kNoBAut =
    "alphabet a:2 b:2;\n"
    "states q;\n"
    "init q;\n"
    "priority q=0;\n"
    "a: q -> q q;\n";

// The state entering a node is the letter of its parent, so a branch visits
// priority 2 infinitely often iff it reads b infinitely often.
const char* kBInfinitelyOftenAut =
    "alphabet a:2 b:2;\n"
    "states qa qb;\n"
    "init qa;\n"
    "priority qa=1 qb=2;\n"
    "a: qa -> qa qa;\n"
    "a: qb -> qa qa;\n"
    "b: qa -> qb qb;\n"
    "b: qb -> qb qb;\n";

}  // namespace

SuiteReport suite_automata(uint64_t seed, int graphs_per_automaton) {
  SuiteReport r;
  r.name = "automata";
  const auto t0 = Clock::now();
  Rng rng(seed);
  long compared = 0;
  long skipped = 0;
  const std::pair<const char*, const char*> fixed[] = {
      {"universal", kUniversalAut},
      {"b-forbidden", kNoBAut},
      {"b-infinitely-often", kBInfinitelyOftenAut}};
  for (const auto& [label, text] : fixed) {
    const ParityAutomaton aut = aut_read(text);
    for (int i = 0; i < graphs_per_automaton; ++i) {
      const TermGraph g = random_term_graph(rng, 0, 8);
      const bool mem = membership(aut, g);
      ++r.trials;
      bool good = true;
      try {
        good = membership_exhaustive(aut, g) == mem;
        ++compared;
      } catch (const Error& e) {
        if (e.code() != Errc::TooLarge) throw;
        ++skipped;
      }
      const auto run = extract_run(aut, g);
      good = good && run.has_value() == mem && (!run || verify_run(aut, *run));
      if (!good)
        record_failure(r, std::string(label) + ", graph " + std::to_string(i));
    }
    const EmptinessResult er = is_empty_with_witness(aut);
    ++r.trials;
    const bool witness_good =
        er.empty ? !er.witness.has_value() : er.witness && membership(aut, *er.witness);
    if (!witness_good) record_failure(r, std::string(label) + ": emptiness witness");
  }
  r.detail = std::to_string(compared) + " membership comparisons, " + std::to_string(skipped) +
             " over the position cap";
  r.seconds = seconds_since(t0);
  return r;
}

// ============================================================================
// Suite 8: profile compositionality
// ============================================================================

SuiteReport suite_profiles(uint64_t seed, int trials) {
  SuiteReport r;
  r.name = "profile-compositionality";
  const auto t0 = Clock::now();
  Rng rng(seed);
  for (int i = 0; i < trials; ++i) {
    const ParityAutomaton aut = random_automaton(rng, 3, 3);
    const int rank = rng.range(1, 2);
    // Exact profile sets grow with the number of runs, which is exponential
    // in the flattened tree's size; deep outer shapes get shallow labels.
    const int outer_depth = rng.range(1, 3);
    const int label_depth = outer_depth >= 3 ? 1 : rng.range(1, 2);
    const NestedFiniteTerm t = random_nested_ab(rng, rank, outer_depth, label_depth, 2);
    const ProfileSet lhs = profiles_finite(aut, flatten(t));
    const ProfileSet rhs = profile_product(
        map_labels(t, [&](const FiniteTerm& s) { return ProfiledTerm{s, profiles_finite(aut, s)}; }));
    ++r.trials;
    if (lhs != rhs) record_failure(r, "trial " + std::to_string(i));
  }
  r.seconds = seconds_since(t0);
  return r;
}

// ============================================================================
// Suites 9-10: antiregularity
// ============================================================================

SuiteReport suite_antiregular(int node_depth, int witness_len, int word_len) {
  SuiteReport r;
  r.name = "antiregularity";
  r.budget_seconds = 60.0;
  const auto t0 = Clock::now();
  const WordLanguagePredicate pal = builtin_predicate("palindromes");

  ++r.trials;
  const auto refuted = antiregular_refute(tree_from_language(pal), node_depth, witness_len);
  if (refuted)
    record_failure(r, "refutation pair " + address_to_string(refuted->first) + ", " +
                          address_to_string(refuted->second));

  std::vector<std::string> words{""};
  for (size_t i = 0; i < words.size(); ++i)
    if (static_cast<int>(words[i].size()) < word_len) {
      words.push_back(words[i] + "0");
      words.push_back(words[i] + "1");
    }
  const int maxlen = 2 * word_len + 1;
  for (size_t i = 0; i < words.size(); ++i)
    for (size_t j = i + 1; j < words.size(); ++j) {
      ++r.trials;
      if (!nerode_witness(pal, words[i], words[j], maxlen))
        record_failure(r, "no witness for \"" + words[i] + "\" vs \"" + words[j] + "\"");
    }
  r.detail = "depth " + std::to_string(node_depth) + " pairs exhausted, " +
             std::to_string(words.size()) + " words separated pairwise";
  r.seconds = seconds_since(t0);
  return r;
}

SuiteReport suite_not_regular(uint64_t seed, int trials, int size_bound) {
  SuiteReport r;
  r.name = "not-regular-experiment";
  const auto t0 = Clock::now();
  const ExperimentReport rep = regular_kind1_experiment(seed, trials, size_bound);
  for (size_t i = 0; i < rep.samples.size(); ++i) {
    const ExperimentSample& s = rep.samples[i];
    ++r.trials;
    const bool good = s.element == KindElement::tag(1, 0) &&
                      !recognizes_densely_antiregular(s.graph) &&
                      s.repetition.first != s.repetition.second;
    if (!good) record_failure(r, "sample " + std::to_string(i));
  }
  ++r.trials;
  if (!recognizes_densely_antiregular(tree_from_language(builtin_predicate("palindromes"))))
    record_failure(r, "palindrome tree rejected");
  std::string hist;
  for (const auto& [kind, n] : rep.kind_histogram)
    hist += (hist.empty() ? "" : " ") + std::string("kind") + std::to_string(kind) + "=" +
            std::to_string(n);
  r.detail = hist + "; palindrome tree accepted";
  r.seconds = seconds_since(t0);
  return r;
}

// ============================================================================
// Suite 11: finite generation
// ============================================================================

SuiteReport suite_generators(uint64_t seed, int kind4_samples) {
  SuiteReport r;
  r.name = "finite-generation";
  const auto t0 = Clock::now();
  GeneratorSearch search;
  const std::vector<KindElement>& gens = GeneratorSearch::generators();
  const auto check = [&](const KindElement& e) {
    ++r.trials;
    try {
      const CATerm w = search.decompose(e, 4);
      bool good = pr_A(w) == e;
      for_each_node(w, [&](const CATerm::NodePtr& n) {
        if (!n->is_port() && std::find(gens.begin(), gens.end(), n->label()) == gens.end())
          good = false;
      });
      if (!good) record_failure(r, print_kind_element(e) + ": bad witness");
    } catch (const Error& err) {
      record_failure(r, print_kind_element(e) + ": " + err.what());
    }
  };
  for (int rank = 0; rank <= 4; ++rank) {
    check(KindElement::tag(1, rank));
    check(KindElement::tag(2, rank));
    if (rank >= 1) check(KindElement::tag(3, rank));
  }
  Rng rng(seed);
  for (int i = 0; i < kind4_samples; ++i)
    check(KindElement::kind4(random_kind4_term(rng, rng.range(2, 4))));
  r.detail = "14 tags, " + std::to_string(kind4_samples) + " sampled kind-4 elements";
  r.seconds = seconds_since(t0);
  return r;
}

// ============================================================================
// The full gate
// ============================================================================

std::vector<SuiteReport> run_all_suites(uint64_t seed) {
  std::vector<SuiteReport> out;
  CaseHistogram cases;
  out.push_back(suite_hom_square(seed, 5000, &cases));
  out.push_back(suite_regular_square(seed + 1, 500, &cases));
  out.push_back(suite_clone_laws(seed + 2, 2000, &cases));
  out.push_back(suite_case_coverage(cases));
  out.push_back(suite_flatten_lemmas(seed + 3, 1000));
  out.push_back(suite_parity_solver(seed + 4, 1000));
  out.push_back(suite_automata(seed + 5, 20));
  out.push_back(suite_profiles(seed + 6, 1000));
  out.push_back(suite_antiregular(6, 13, 8));
  out.push_back(suite_not_regular(seed + 7, 1000, 8));
  out.push_back(suite_generators(seed + 8, 100));
  return out;
}

}  // namespace oclone
