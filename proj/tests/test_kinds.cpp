#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "doctest.h"
#include "oclone/io.hpp"
#include "oclone/kind.hpp"
#include "oclone/random_gen.hpp"

using namespace oclone;

namespace {

const RankedAlphabet& AB = RankedAlphabet::ab();

FiniteTerm T(const std::string& s) { return parse_term_sexpr(s, AB); }

template <class F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::EqualWords;  // sentinel: "did not throw"
}

LazyTree lazy_of(std::function<std::variant<int, Letter>(const Address&)> f, int rank,
                 std::optional<std::string> cert = std::nullopt) {
  LazyTree t;
  t.label_at = std::move(f);
  t.rank = rank;
  t.certificate = std::move(cert);
  return t;
}

// The everywhere-a tree: one vertex, both successors itself.
std::variant<int, Letter> full_a(const Address&) { return Letter{"a", 2}; }

std::vector<int> kinds_of(const PartialVerdict& v) { return v.candidates; }

}  // namespace

TEST_CASE("kind elements validate and compare") {
  const KindElement t10 = KindElement::tag(1, 0);
  CHECK(t10.kind() == 1);
  CHECK(t10.rank() == 0);
  CHECK_FALSE(t10.is_term());

  CHECK(code_of([] { KindElement::tag(3, 0); }) == Errc::Kind3RankZero);
  CHECK(code_of([] { KindElement::tag(0, 1); }) == Errc::Malformed);
  CHECK(code_of([] { KindElement::tag(4, 1); }) == Errc::Malformed);
  CHECK(code_of([] { KindElement::tag(1, -1); }) == Errc::Malformed);

  const KindElement k4 = KindElement::kind4(T("(a 1 2)"));
  CHECK(k4.kind() == 4);
  CHECK(k4.rank() == 2);
  CHECK(k4.is_term());
  CHECK(k4.term() == T("(a 1 2)"));

  // Repeated port: not a kind-4 term.
  CHECK(code_of([] { KindElement::kind4(T("(a 1 1)")); }) == Errc::Malformed);
  // Foreign letter.
  CHECK(code_of([] {
          KindElement::kind4(FiniteTerm::adopt(FiniteTerm::Node::make(
              Letter{"c", 2}, {FiniteTerm::Node::make_port(1), FiniteTerm::Node::make_port(2)})));
        }) == Errc::WrongAlphabet);
  // Tags carry no term.
  CHECK(code_of([&] { (void)t10.term(); }) == Errc::Malformed);

  CHECK(t10 == KindElement::tag(1, 0));
  CHECK(t10 != KindElement::tag(2, 0));
  CHECK(t10 != KindElement::tag(1, 1));
  CHECK(k4 == KindElement::kind4(T("(a 1 2)")));
  CHECK(k4 != KindElement::kind4(T("(b 1 2)")));
  CHECK(k4 != KindElement::tag(1, 2));
  CHECK(t10 < KindElement::tag(2, 0));
  CHECK(KindElement::tag(2, 0) < k4);
  CHECK_FALSE(k4 < k4);
}

TEST_CASE("element text round-trips") {
  for (const std::string s : {"T1/0", "T2/3", "T3/1", "K4 (a 1 2)", "K4 (b (a 1 3) 2)"}) {
    CHECK(print_kind_element(parse_kind_element(s)) == s);
  }
  CHECK(parse_kind_element("  T1/2 ") == KindElement::tag(1, 2));
  CHECK(code_of([] { parse_kind_element("T3/0"); }) == Errc::Kind3RankZero);
  CHECK(code_of([] { parse_kind_element("T5/1"); }) == Errc::Malformed);
  CHECK(code_of([] { parse_kind_element("T1"); }) == Errc::ParseError);
  CHECK(code_of([] { parse_kind_element("K4"); }) == Errc::ParseError);
  CHECK(code_of([] { parse_kind_element("K4 x"); }) == Errc::ParseError);
  CHECK(code_of([] { parse_kind_element("banana"); }) == Errc::ParseError);
  CHECK(code_of([] { parse_kind_element("K4 (a 1 1)"); }) == Errc::Malformed);
}

TEST_CASE("CA terms parse and print") {
  for (const std::string s :
       {"(T2/0)", "(T3/2 1 (K4 (b 1 2) 1 2))", "(K4 (a 1 2) (T2/0) (T2/0))",
        "(T1/2 (T2/1 1) (K4 (a 1 (b 2 3)) 2 1 1))"}) {
    CHECK(print_ca_term(parse_ca_term(s)) == s);
  }
  CHECK(parse_ca_term("(T1/1 1)").rank() == 1);
  CHECK(parse_ca_term("(T2/0)").rank() == 0);

  CHECK(code_of([] { parse_ca_term("(T1/2 1)"); }) == Errc::WrongArity);
  CHECK(code_of([] { parse_ca_term("(K4 (a 1 2) 1)"); }) == Errc::WrongArity);
  CHECK(code_of([] { parse_ca_term("(T1/2 1 2"); }) == Errc::ParseError);
  CHECK(code_of([] { parse_ca_term("(T1/1 1) junk"); }) == Errc::ParseError);
  CHECK(code_of([] { parse_ca_term("()"); }) == Errc::ParseError);
  CHECK(code_of([] { parse_ca_term("1"); }) == Errc::TrivialTerm);
  CHECK(code_of([] { parse_ca_term("(T1/2 1 3)"); }) == Errc::PortGap);
  CHECK(code_of([] { parse_ca_term("(K4 (c 1 2) 1 2)"); }) == Errc::WrongAlphabet);
}

TEST_CASE("CA graphs parse and print") {
  const std::string good =
      "rank 2\n"
      "0: K4 (a 1 2) 1 2\n"
      "1: T3/2 2 3\n"
      "2: port 1\n"
      "3: port 2\n";
  const CAGraph g = parse_ca_graph_file(good);
  CHECK(g.rank() == 2);
  CHECK(g.size() == 4);
  CHECK(g.at(0).lab() == KindElement::kind4(T("(a 1 2)")));
  CHECK(g.at(1).lab() == KindElement::tag(3, 2));
  CHECK(print_ca_graph_file(g) == good);
  CHECK(parse_ca_graph_file(print_ca_graph_file(g)) == g);

  CHECK(code_of([] { parse_ca_graph_file(""); }) == Errc::ParseError);
  CHECK(code_of([] { parse_ca_graph_file("rank 0\n0: T1/1 0 0\n"); }) == Errc::WrongArity);
  CHECK(code_of([] { parse_ca_graph_file("rank 0\n0: K4 (a 1 2) 0\n"); }) == Errc::WrongArity);
  CHECK(code_of([] { parse_ca_graph_file("rank 1\n0: T1/1 1\n1: port 1\n2: port 1\n"); }) ==
        Errc::Malformed);  // unreachable vertex
  CHECK(code_of([] { parse_ca_graph_file("rank 2\n0: T1/1 1\n1: port 1\n"); }) ==
        Errc::ParseError);  // declared rank is wrong
  CHECK(code_of([] { parse_ca_graph_file("rank 0\n1: T1/0\n"); }) == Errc::ParseError);
  CHECK(code_of([] { parse_ca_graph_file("rank 0\n0: T3/0\n"); }) == Errc::Kind3RankZero);
}

TEST_CASE("classify on finite terms") {
  CHECK(classify(T("(a 1 2)")) == KindElement::kind4(T("(a 1 2)")));
  CHECK(classify(T("(a 1 1)")) == KindElement::tag(3, 1));
  CHECK(classify(T("(a (b 1 2) 3)")) == KindElement::kind4(T("(a (b 1 2) 3)")));
  CHECK(classify(T("(a (b 1 2) 1)")) == KindElement::tag(3, 2));
  CHECK(code_of([] {
          classify(FiniteTerm::adopt(FiniteTerm::Node::make(
              Letter{"c", 2}, {FiniteTerm::Node::make_port(1), FiniteTerm::Node::make_port(2)})));
        }) == Errc::WrongAlphabet);

  // Every finite term lands in kind 3 or kind 4: binary letters leave no
  // port-free finite subtree.
  Rng rng(2024);
  for (int i = 0; i < 200; ++i) {
    const int rank = rng.range(1, 4);
    const FiniteTerm t = random_ab_term(rng, rank, rng.range(rank > 2 ? 2 : 1, 5));
    const KindElement e = classify(t);
    CHECK((e.kind() == 3 || e.kind() == 4));
    CHECK(e.rank() == t.rank());
  }
}

TEST_CASE("classify on term graphs") {
  // One vertex, both edges to itself: the regular everywhere-a tree.
  CHECK(classify(parse_graph_file("rank 0\n0: a 0 0\n")) == KindElement::tag(1, 0));
  // A cycle that passes a port repeats it.
  CHECK(classify(parse_graph_file("rank 1\n0: a 0 1\n1: port 1\n")) == KindElement::tag(3, 1));
  // Acyclic, every port once: the graph is just a shared term.
  const TermGraph shared = parse_graph_file("rank 2\n0: a 1 2\n1: port 1\n2: port 2\n");
  CHECK(classify(shared) == KindElement::kind4(T("(a 1 2)")));
  // Portful overall but with a port-free trap region.
  CHECK(classify(parse_graph_file("rank 1\n0: a 1 2\n1: b 1 1\n2: port 1\n")) ==
        KindElement::tag(1, 1));

  CHECK(code_of([] { classify(parse_graph_file("rank 0\n0: c 0 0\n")); }) == Errc::WrongAlphabet);

  // Against the term route: a term seen as a graph classifies identically.
  Rng rng(77);
  for (int i = 0; i < 200; ++i) {
    const int rank = rng.range(1, 4);
    const FiniteTerm t = random_ab_term(rng, rank, rng.range(rank > 2 ? 2 : 1, 5));
    CHECK(classify(term_to_graph(t)) == classify(t));
  }
}

TEST_CASE("product decision list on pinned inputs") {
  const auto run = [](const std::string& s) { return pr_A_traced(parse_ca_term(s)); };

  PrOutcome o = run("(T1/0)");
  CHECK(o.value == KindElement::tag(1, 0));
  CHECK(o.rule == DiagramCase::Kind1Label);

  o = run("(K4 (a 1 2) (T1/0) 1)");
  CHECK(o.value == KindElement::tag(1, 1));
  CHECK(o.rule == DiagramCase::Kind1Label);

  o = run("(K4 (a 1 2) (T2/0) (T2/0))");
  CHECK(o.value == KindElement::tag(2, 0));
  CHECK(o.rule == DiagramCase::GuardedPortFree);

  o = run("(T3/2 (T2/0) 1)");
  CHECK(o.value == KindElement::tag(2, 1));
  CHECK(o.rule == DiagramCase::GuardedPortFree);

  o = run("(K4 (a 1 2) (T2/1 1) 2)");
  CHECK(o.value == KindElement::tag(2, 2));
  CHECK(o.rule == DiagramCase::Kind2Label);

  o = run("(K4 (a 1 2) (T3/1 1) 2)");
  CHECK(o.value == KindElement::tag(3, 2));
  CHECK(o.rule == DiagramCase::Kind3Label);

  o = run("(K4 (a 1 2) 1 1)");
  CHECK(o.value == KindElement::tag(3, 1));
  CHECK(o.rule == DiagramCase::RepeatedPort);

  o = run("(K4 (a 1 2) 1 2)");
  CHECK(o.value == KindElement::kind4(T("(a 1 2)")));
  CHECK(o.rule == DiagramCase::Flattened);

  o = run("(K4 (a 1 2) 1 (K4 (b 1 2) 2 3))");
  CHECK(o.value == KindElement::kind4(T("(a 1 (b 2 3))")));
  CHECK(o.rule == DiagramCase::Flattened);

  // The unguarded case needs a port-free region that avoids kind-2 labels,
  // which no finite term can build (its leaves would be kind-1/2 tags); a
  // cyclic graph can.
  PrOutcome go = pr_A_traced(parse_ca_graph_file("rank 0\n0: T3/1 0\n"));
  CHECK(go.value == KindElement::tag(1, 0));
  CHECK(go.rule == DiagramCase::UnguardedPortFree);

  go = pr_A_traced(parse_ca_graph_file("rank 0\n0: T3/1 1\n1: T2/0\n"));
  CHECK(go.value == KindElement::tag(2, 0));
  CHECK(go.rule == DiagramCase::GuardedPortFree);

  go = pr_A_traced(parse_ca_graph_file("rank 1\n0: K4 (a 1 2) 0 1\n1: port 1\n"));
  CHECK(go.value == KindElement::tag(3, 1));
  CHECK(go.rule == DiagramCase::RepeatedPort);

  go = pr_A_traced(parse_ca_graph_file("rank 2\n0: K4 (a 1 2) 1 2\n1: port 1\n2: port 2\n"));
  CHECK(go.value == KindElement::kind4(T("(a 1 2)")));
  CHECK(go.rule == DiagramCase::Flattened);

  go = pr_A_traced(parse_ca_graph_file("rank 1\n0: T3/2 1 0\n1: port 1\n"));
  CHECK(go.value == KindElement::tag(3, 1));
  CHECK(go.rule == DiagramCase::Kind3Label);

  CHECK(diagram_case_name(DiagramCase::Flattened) == std::string("flattened"));
  CHECK(diagram_case_name(DiagramCase::UnguardedPortFree) == std::string("unguarded-port-free"));
}

TEST_CASE("product agrees between term and graph routes") {
  Rng rng(4242);
  for (int i = 0; i < 300; ++i) {
    // Ranks above 1 need binary labels somewhere, and rank 3 needs two levels
    // of them, so the bounds scale with the requested rank.
    const int rank = rng.range(0, 3);
    const CATerm t = random_ca_term(rng, rank, rng.range(rank >= 3 ? 2 : 1, 3),
                                    rank >= 2 ? 2 : rng.range(1, 3));
    const PrOutcome via_term = pr_A_traced(t);
    const PrOutcome via_graph = pr_A_traced(term_to_graph(t));
    CHECK(via_term.value == via_graph.value);
    CHECK(via_term.rule == via_graph.rule);
  }
}

TEST_CASE("homomorphism square on finite nested terms") {
  Rng rng(555);
  const auto h = [](const FiniteTerm& u) { return classify(u); };
  for (int i = 0; i < 400; ++i) {
    // Labels can have rank 3, which binary letters only reach at depth 2.
    const NestedFiniteTerm t =
        random_nested_ab(rng, rng.range(1, 3), rng.range(1, 3), rng.range(2, 3), 3);
    const KindElement lhs = classify(flatten(t));
    const KindElement rhs = pr_A(map_labels(t, h));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("homomorphism square on nested term graphs") {
  Rng rng(556);
  const auto h = [](const TermGraph& u) { return classify(u); };
  int checked = 0;
  for (int i = 0; i < 240; ++i) {
    NestedGraphOptions opt;
    opt.rank = rng.range(0, 2);
    opt.max_outer = rng.range(1, 4);
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
    opt.max_label_inner = rng.range(opt.max_label_rank >= 3 ? 2 : 1, 3);
    // A lone outer vertex cannot both feed the trap and reach two ports.
    if (opt.trap_region && opt.rank >= 2) opt.max_outer = std::max(opt.max_outer, 2);
    const Graph<TermGraph> G = random_nested_graph(rng, opt);
    const KindElement lhs = classify(graph_flatten(G));
    const KindElement rhs = pr_A(map_vertices(G, h));
    CHECK(lhs == rhs);
    ++checked;
  }
  CHECK(checked == 240);
}

TEST_CASE("lazy classification") {
  CHECK(code_of([] { classify_lazy(lazy_of(full_a, 0), 0, 10); }) == Errc::BudgetZero);
  CHECK(code_of([] { classify_lazy(lazy_of(full_a, 0), 10, 0); }) == Errc::BudgetZero);

  // Uncertified regular tree: rank arithmetic alone, so still unknown.
  PartialVerdict v = classify_lazy(lazy_of(full_a, 0), 3, 1000);
  CHECK(v.status == PartialVerdict::Status::Unknown);
  CHECK(kinds_of(v) == std::vector<int>{1, 2});
  CHECK_FALSE(v.fully_explored);
  CHECK_FALSE(v.element.has_value());

  // The witness budget alone can cut the exploration too.
  v = classify_lazy(lazy_of(full_a, 0), 50, 5);
  CHECK(v.status == PartialVerdict::Status::Unknown);
  CHECK(kinds_of(v) == std::vector<int>{1, 2});

  // A trusted antiregularity certificate pins rank 0 to kind 2.
  v = classify_lazy(lazy_of(full_a, 0, kCertAntiregular), 3, 1000);
  CHECK(v.status == PartialVerdict::Status::Definite);
  CHECK(*v.element == KindElement::tag(2, 0));
  CHECK_FALSE(v.fully_explored);

  // Ports-everywhere certificate plus an observed repeated port pins kind 3.
  const auto spine = [](const Address& a) -> std::variant<int, Letter> {
    for (int step : a)
      if (step == 0) return 1;
    return Letter{"a", 2};
  };
  v = classify_lazy(lazy_of(spine, 1, kCertPortsEverywhere), 4, 1000);
  CHECK(v.status == PartialVerdict::Status::Definite);
  CHECK(*v.element == KindElement::tag(3, 1));

  const auto reuse2 = [](const Address& a) -> std::variant<int, Letter> {
    // Depth-2 leaves: ports 1, 1, 1, 2 left to right; above them all a.
    if (a.size() == 2) return (a[0] == 1 && a[1] == 1) ? 2 : 1;
    return Letter{"a", 2};
  };
  v = classify_lazy(lazy_of(reuse2, 2), 10, 1000);
  CHECK(v.fully_explored);
  CHECK(v.status == PartialVerdict::Status::Definite);
  CHECK(*v.element == KindElement::tag(3, 2));

  const auto reuse_deep = [](const Address& a) -> std::variant<int, Letter> {
    // Ports 1 and 1 at depth 1 under the left child; the right spine is all a.
    if (a.size() == 2 && a[0] == 0) return 1;
    if (a.size() == 4 && a[0] == 1 && a[1] == 1 && a[2] == 1) return 2;
    if (a.size() >= 5) return 1;  // unreachable within small budgets
    return Letter{"a", 2};
  };
  v = classify_lazy(lazy_of(reuse_deep, 2), 3, 1000);
  CHECK_FALSE(v.fully_explored);
  CHECK(v.status == PartialVerdict::Status::RefutedCandidates);
  CHECK(kinds_of(v) == std::vector<int>{1, 2, 3});

  // Ports-everywhere certificate with no observed reuse: kinds 3 and 4 remain.
  const auto ladder = [](const Address& a) -> std::variant<int, Letter> {
    if (!a.empty() && a.back() == 0) return static_cast<int>(a.size());
    return Letter{"a", 2};
  };
  v = classify_lazy(lazy_of(ladder, 3, kCertPortsEverywhere), 2, 1000);
  CHECK(v.status == PartialVerdict::Status::RefutedCandidates);
  CHECK(kinds_of(v) == std::vector<int>{3, 4});
  CHECK_FALSE(v.fully_explored);

  // Contradictory: rank 0 cannot have ports everywhere.
  CHECK(code_of([] { classify_lazy(lazy_of(full_a, 0, kCertPortsEverywhere), 3, 100); }) ==
        Errc::Malformed);

  // Full exploration of finite trees gives the exact element.
  v = classify_lazy(term_view(T("(a 1 2)")), 10, 1000);
  CHECK(v.fully_explored);
  CHECK(*v.element == KindElement::kind4(T("(a 1 2)")));
  v = classify_lazy(term_view(T("(a 1 1)")), 10, 1000);
  CHECK(*v.element == KindElement::tag(3, 1));

  // Oracle misbehavior surfaces as Malformed / WrongAlphabet.
  CHECK(code_of([] {
          classify_lazy(lazy_of([](const Address&) -> std::variant<int, Letter> { return 5; }, 2),
                        3, 100);
        }) == Errc::Malformed);
  CHECK(code_of([] {
          classify_lazy(
              lazy_of([](const Address&) -> std::variant<int, Letter> { return Letter{"c", 2}; },
                      0),
              3, 100);
        }) == Errc::WrongAlphabet);
}

TEST_CASE("hom_h and recognition") {
  CHECK(hom_h(T("(a 1 1)")) == KindElement::tag(3, 1));
  CHECK(hom_h(parse_graph_file("rank 0\n0: a 0 0\n")) == KindElement::tag(1, 0));
  CHECK(hom_h(lazy_of(full_a, 0, kCertAntiregular)) == KindElement::tag(2, 0));
  CHECK(hom_h(term_view(T("(a 1 2)"))) == KindElement::kind4(T("(a 1 2)")));
  CHECK(code_of([] { hom_h(lazy_of(full_a, 0)); }) == Errc::Undetermined);

  CHECK(is_accepting_element(KindElement::tag(2, 0)));
  CHECK_FALSE(is_accepting_element(KindElement::tag(1, 0)));
  CHECK_FALSE(is_accepting_element(KindElement::tag(2, 1)));

  CHECK_FALSE(recognizes_densely_antiregular(parse_graph_file("rank 0\n0: a 0 0\n")));
  CHECK(recognizes_densely_antiregular(lazy_of(full_a, 0, kCertAntiregular)));
  CHECK(code_of([] {
          recognizes_densely_antiregular(parse_graph_file("rank 1\n0: a 0 1\n1: port 1\n"));
        }) == Errc::NonZeroRank);
  CHECK(code_of([] { recognizes_densely_antiregular(lazy_of(full_a, 1)); }) == Errc::NonZeroRank);
  CHECK(code_of([] { recognizes_densely_antiregular(lazy_of(full_a, 0)); }) == Errc::Undetermined);

  // Every regular rank-0 tree is refused: it has a port-free (everything)
  // region with no antiregular subtree.
  Rng rng(91);
  for (int i = 0; i < 100; ++i) {
    const TermGraph g = random_term_graph(rng, 0, rng.range(1, 5));
    CHECK(hom_h(g) == KindElement::tag(1, 0));
    CHECK_FALSE(recognizes_densely_antiregular(g));
  }
}

TEST_CASE("clone laws hold for the product") {
  const LawReport rep = check_clone_laws(1234, 300);
  CHECK(rep.ok());
  CHECK(rep.unit_trials == 300);
  CHECK(rep.flatten_trials == 300);
  CHECK(rep.unit_failures == 0);
  CHECK(rep.flatten_failures == 0);
  CHECK(rep.first_failure.empty());
}

TEST_CASE("a broken product fails the laws") {
  // Position-dependent corruption: when the kind-3-label rule fires and the
  // root itself carries the kind-3 label, report kind 2 instead. Uniform
  // relabelings would stay homomorphic; this one cannot.
  const auto mutant = [](const CATerm& t) {
    const PrOutcome o = pr_A_traced(t);
    if (o.rule == DiagramCase::Kind3Label && !t.root()->is_port() &&
        t.root()->label().kind() == 3)
      return KindElement::tag(2, t.rank());
    return o.value;
  };

  const LawReport rep = check_clone_laws(1234, 300, mutant);
  CHECK_FALSE(rep.ok());
  CHECK(rep.unit_failures > 0);  // unit of any T3/n lands in the mutated rule
  CHECK_FALSE(rep.first_failure.empty());

  // An explicit flattening counterexample, independent of sampling.
  using Outer = Term<CATerm>;
  const Outer s = Outer::adopt(Outer::Node::make(
      parse_ca_term("(K4 (a 1 2) 1 2)"),
      {Outer::Node::make(parse_ca_term("(T3/1 1)"), {Outer::Node::make_port(1)}),
       Outer::Node::make_port(2)}));
  const KindElement flat_route = mutant(flatten(s));
  const KindElement pointwise =
      mutant(map_labels(s, [&](const CATerm& inner) { return mutant(inner); }));
  CHECK(flat_route == KindElement::tag(3, 2));
  CHECK(pointwise == KindElement::tag(2, 2));
  CHECK_FALSE(flat_route == pointwise);

  // The honest product agrees with itself on the same input.
  CHECK(pr_A(flatten(s)) ==
        pr_A(map_labels(s, [](const CATerm& inner) { return pr_A(inner); })));
}

TEST_CASE("generator decomposition") {
  const auto& gens = GeneratorSearch::generators();
  CHECK(gens.size() == 12);

  const auto is_generator = [&](const KindElement& e) {
    return std::find(gens.begin(), gens.end(), e) != gens.end();
  };

  GeneratorSearch search;
  std::vector<KindElement> targets;
  for (int kind = 1; kind <= 3; ++kind)
    for (int rank = 0; rank <= 4; ++rank) {
      if (kind == 3 && rank == 0) continue;
      targets.push_back(KindElement::tag(kind, rank));
    }
  CHECK(targets.size() == 14);
  for (const KindElement& target : targets) {
    const CATerm w = search.decompose(target, 4);
    CHECK(pr_A(w) == target);
    for_each_node(w, [&](const CATerm::NodePtr& n) {
      if (!n->is_port()) CHECK(is_generator(n->label()));
    });
  }

  // Kind-4 targets mirror their own term.
  const CATerm mirror = search.decompose(KindElement::kind4(T("(a 1 (b 2 3))")), 4);
  CHECK(print_ca_term(mirror) == "(K4 (a 1 2) 1 (K4 (b 1 2) 2 3))");
  CHECK(pr_A(mirror) == KindElement::kind4(T("(a 1 (b 2 3))")));

  Rng rng(31337);
  for (int i = 0; i < 50; ++i) {
    const KindElement target = KindElement::kind4(random_kind4_term(rng, rng.range(2, 4)));
    const CATerm w = search.decompose(target, 4);
    CHECK(pr_A(w) == target);
  }

  // Deterministic: a fresh search finds the same witnesses.
  GeneratorSearch other;
  for (const KindElement& target : targets)
    CHECK(print_ca_term(other.decompose(target, 4)) ==
          print_ca_term(search.decompose(target, 4)));

  CHECK(code_of([&] { search.decompose(KindElement::tag(1, 5), 4); }) == Errc::TooLarge);
  CHECK(pr_A(generator_decompose(KindElement::tag(2, 3), 4)) == KindElement::tag(2, 3));

  // Generators decompose to themselves (single node, smallest witness).
  for (const KindElement& g : gens)
    if (!g.is_term()) CHECK(print_ca_term(search.decompose(g, 4)) == print_ca_term(unit(g)));
}

TEST_CASE("flattening lemmas on nested terms") {
  Rng rng(808);
  for (int i = 0; i < 300; ++i) {
    const NestedFiniteTerm t =
        random_nested_ab(rng, rng.range(1, 3), rng.range(1, 3), rng.range(2, 3), 3);
    const FiniteTerm flat = flatten(t);

    // Some port repeats in the flattening iff it repeats outside or some
    // label repeats one of its own ports (labels here are finite, so their
    // kind is 3 exactly when they repeat a port).
    bool flat_repeats = false;
    for (int c : port_counts_saturated(flat)) flat_repeats = flat_repeats || c >= 2;
    bool outer_repeats = false;
    for (int c : port_counts_saturated(t)) outer_repeats = outer_repeats || c >= 2;
    bool kind3_label = false;
    for_each_node(t, [&](const NestedFiniteTerm::NodePtr& n) {
      if (!n->is_port()) kind3_label = kind3_label || classify(n->label()).kind() == 3;
    });
    CHECK(flat_repeats == (outer_repeats || kind3_label));
  }
}

TEST_CASE("flattening lemmas on nested graphs") {
  Rng rng(809);
  for (int i = 0; i < 300; ++i) {
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

    // Every subtree of the flattening has a port iff the outer graph is
    // portful and every label is (labels of kinds 3 and 4 exactly).
    bool labels_portful = true;
    bool labels_34 = true;
    for (int v = 0; v < G.size(); ++v) {
      if (G.at(v).is_port()) continue;
      labels_portful = labels_portful && every_subtree_has_port(G.at(v).lab());
      const int k = classify(G.at(v).lab()).kind();
      labels_34 = labels_34 && (k == 3 || k == 4);
    }
    CHECK(labels_portful == labels_34);
    CHECK(every_subtree_has_port(flat) ==
          (every_subtree_has_port(G) && labels_portful));

    // Under that premise, some port repeats in the flattening iff some outer
    // port multiplicity is already "many" or some label is kind 3.
    if (every_subtree_has_port(flat)) {
      bool flat_many = false;
      for (int p = 1; p <= flat.rank(); ++p)
        flat_many = flat_many || port_multiplicity(flat, p) == Multiplicity::Many;
      bool outer_many = false;
      for (int p = 1; p <= G.rank(); ++p)
        outer_many = outer_many || port_multiplicity(G, p) == Multiplicity::Many;
      bool kind3_label = false;
      for (int v = 0; v < G.size(); ++v)
        if (!G.at(v).is_port())
          kind3_label = kind3_label || classify(G.at(v).lab()).kind() == 3;
      CHECK(flat_many == (outer_many || kind3_label));
    }
  }
}
