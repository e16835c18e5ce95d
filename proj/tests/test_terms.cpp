#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "oclone/io.hpp"
#include "oclone/lazy.hpp"
#include "oclone/random_gen.hpp"
#include "oclone/term.hpp"

using namespace oclone;

namespace {

const RankedAlphabet& AB = RankedAlphabet::ab();

FiniteTerm T(const std::string& s) { return parse_term_sexpr(s, AB); }
NestedFiniteTerm NT(const std::string& s) { return parse_nested_term_sexpr(s, AB); }

// Reference flattening: plain recursive substitution on the denoted trees,
// no sharing, no caches. Deliberately the dumbest correct implementation.
FiniteTerm::NodePtr subst_tree(const FiniteTerm::NodePtr& n,
                               const std::vector<FiniteTerm::NodePtr>& args) {
  if (n->is_port()) return args.at(static_cast<size_t>(n->port() - 1));
  std::vector<FiniteTerm::NodePtr> kids;
  for (const auto& c : n->children()) kids.push_back(subst_tree(c, args));
  return FiniteTerm::Node::make(n->label(), std::move(kids));
}

FiniteTerm::NodePtr naive_flatten_node(const NestedFiniteTerm::NodePtr& n) {
  if (n->is_port()) return FiniteTerm::Node::make_port(n->port());
  std::vector<FiniteTerm::NodePtr> args;
  for (const auto& c : n->children()) args.push_back(naive_flatten_node(c));
  return subst_tree(n->label().root(), args);
}

FiniteTerm naive_flatten(const NestedFiniteTerm& t) {
  return FiniteTerm::adopt(naive_flatten_node(t.root()));
}

// Reference port counting on the denoted tree, unsaturated.
void count_ports(const FiniteTerm::NodePtr& n, std::map<int, long>& acc) {
  if (n->is_port()) {
    ++acc[n->port()];
    return;
  }
  for (const auto& c : n->children()) count_ports(c, acc);
}

}  // namespace

TEST_CASE("term validation accepts the basic shapes") {
  CHECK(T("(a 1 2)").rank() == 2);
  CHECK(T("(a 1 1)").rank() == 1);
  CHECK(T("(b (a 1 2) 3)").rank() == 3);
  CHECK(T("(a (a 1 2) (b 2 1))").rank() == 2);
}

TEST_CASE("term validation rejects bad terms with the right codes") {
  auto code_of = [](const std::string& s) {
    try {
      T(s);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::EqualWords;  // sentinel: "did not throw"
  };
  CHECK(code_of("1") == Errc::TrivialTerm);
  CHECK(code_of("2") == Errc::PortGap);
  CHECK(code_of("(a 1 3)") == Errc::PortGap);  // port 2 missing
  CHECK(code_of("(a 2 2)") == Errc::PortGap);  // port 1 missing
  CHECK(code_of("(a 1)") == Errc::ArityMismatch);
  CHECK(code_of("(a 1 2 3)") == Errc::ArityMismatch);
  CHECK(code_of("(c 1 2)") == Errc::UnknownLetter);
  CHECK(code_of("(a 0 1)") == Errc::ParseError);  // rejected before adoption
  // The same bad name is caught at adoption when built programmatically.
  try {
    (void)FiniteTerm::adopt(FiniteTerm::Node::make(
        Letter{"a", 2}, {FiniteTerm::Node::make_port(0), FiniteTerm::Node::make_port(1)}));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::Malformed);
  }
  CHECK(code_of("(a 1 2") == Errc::ParseError);
  CHECK(code_of("(a 1 2))") == Errc::ParseError);
}

TEST_CASE("rank-0 terms over a rank-2 alphabet cannot be finite") {
  // Exhaustive check: no closed term of depth <= 4 exists, because every
  // branch of a finite {a,b}-tree ends in a leaf and both letters need two
  // children. The generator refuses rank 0 as well.
  Rng rng(7);
  CHECK_THROWS_AS((void)random_ab_term(rng, 0, 4), Error);
}

TEST_CASE("equality is structural on the denoted tree") {
  CHECK(T("(a 1 2)") == T("(a 1 2)"));
  CHECK(T("(a 1 2)") != T("(b 1 2)"));
  CHECK(T("(a 1 2)") != T("(a 2 1)"));
  // Same tree built with and without sharing.
  auto p1 = FiniteTerm::Node::make_port(1);
  auto leaf = FiniteTerm::Node::make(Letter{"b", 2}, {p1, p1});
  auto shared = FiniteTerm::adopt(FiniteTerm::Node::make(Letter{"a", 2}, {leaf, leaf}));
  CHECK(shared == T("(a (b 1 1) (b 1 1))"));
  CHECK(dag_size(shared) == 3);           // a-node, b-node, one port node
  CHECK(dag_size(T("(a (b 1 1) (b 1 1))")) >= 3);
  CHECK(tree_size(shared) == 7);
}

TEST_CASE("sizes and depth on a fixed example") {
  FiniteTerm t = T("(a (b 1 1) 2)");
  CHECK(t.rank() == 2);
  CHECK(tree_size(t) == 5);
  CHECK(term_depth(t) == 2);
  CHECK(port_counts_saturated(t) == std::vector<int>{2, 1});
  CHECK(port_occurrences_dfs(t) == std::vector<int>{1, 1, 2});
}

TEST_CASE("port counts saturate at two") {
  FiniteTerm t = T("(a (a 1 1) (a 1 2))");
  CHECK(port_counts_saturated(t) == std::vector<int>{2, 1});
  std::map<int, long> acc;
  count_ports(t.root(), acc);
  CHECK(acc[1] == 3);
}

TEST_CASE("unit builds sigma(1,..,n)") {
  FiniteTerm u = unit(Letter{"a", 2});
  CHECK(u == T("(a 1 2)"));
  CHECK(u.rank() == 2);
  CHECK_THROWS_AS((void)unit(Letter{"c", 2}, AB), Error);
}

TEST_CASE("map_labels relabels nodes and rejects rank changes") {
  auto swap_ab = [](const Letter& l) { return l.name == "a" ? Letter{"b", 2} : Letter{"a", 2}; };
  CHECK(map_labels(T("(a (b 1 1) 2)"), swap_ab) == T("(b (a 1 1) 2)"));
  auto shrink = [](const Letter&) { return Letter{"x", 1}; };
  CHECK_THROWS_AS((void)map_labels(T("(a 1 2)"), shrink), Error);
}

TEST_CASE("flatten on pinned examples") {
  // Root label a(1,2); second child is b(1,1) applied to port 2.
  CHECK(flatten(NT("((a 1 2) 1 ((b 1 1) 2))")) == T("(a 1 (b 2 2))"));
  // A repeated port in the label duplicates the argument.
  CHECK(flatten(NT("((a 1 1) ((b 1 2) 1 2))")) == T("(a (b 1 2) (b 1 2))"));
  // A label can ignore nothing: every port occurs, but order may shuffle.
  CHECK(flatten(NT("((a 2 1) 1 2)")) == T("(a 2 1)"));
}

TEST_CASE("flatten agrees with naive substitution on random nested terms") {
  Rng rng(101);
  for (int i = 0; i < 300; ++i) {
    int rank = rng.range(1, 3);
    NestedFiniteTerm t = random_nested_ab(rng, rank, 3, 2, 3);
    FiniteTerm got = flatten(t);
    CHECK(got == naive_flatten(t));
    CHECK(got.rank() == t.rank());
  }
}

TEST_CASE("monad unit laws") {
  Rng rng(202);
  for (int i = 0; i < 200; ++i) {
    FiniteTerm t = random_ab_term(rng, rng.range(1, 4), 4);
    // Wrapping t as a single nested node over the identity frame is a no-op.
    NestedFiniteTerm wrapped = unit<FiniteTerm>(t);
    CHECK(flatten(wrapped) == t);
    // Replacing every letter by its one-node term is a no-op too.
    NestedFiniteTerm expanded = map_labels(t, [](const Letter& l) { return unit(l); });
    CHECK(flatten(expanded) == t);
  }
}

TEST_CASE("monad associativity on doubly nested terms") {
  Rng rng(303);
  for (int i = 0; i < 120; ++i) {
    int rank = rng.range(1, 3);
    Term<NestedFiniteTerm> s = random_triple_ab(rng, rank, 3);
    FiniteTerm lhs = flatten(flatten(s));
    FiniteTerm rhs = flatten(map_labels(s, [](const NestedFiniteTerm& l) { return flatten(l); }));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("map_labels commutes with flatten") {
  Rng rng(404);
  auto swap_ab = [](const Letter& l) { return Letter{l.name == "a" ? "b" : "a", l.rank}; };
  for (int i = 0; i < 150; ++i) {
    NestedFiniteTerm t = random_nested_ab(rng, rng.range(1, 3), 3, 2, 3);
    FiniteTerm lhs = map_labels(flatten(t), swap_ab);
    FiniteTerm rhs =
        flatten(map_labels(t, [&](const FiniteTerm& l) { return map_labels(l, swap_ab); }));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("flatten keeps sharing linear while the denoted tree doubles") {
  // A chain of n nested nodes whose labels duplicate their argument denotes
  // a tree of size 2^n; the shared representation must stay O(n).
  FiniteTerm dupl = T("(a 1 1)");  // rank 1, uses its port twice
  NestedFiniteTerm::NodePtr n = NestedFiniteTerm::Node::make_port(1);
  for (int i = 0; i < 40; ++i) n = NestedFiniteTerm::Node::make(dupl, {n});
  NestedFiniteTerm chain = NestedFiniteTerm::adopt(n);
  FiniteTerm flat = flatten(chain);
  CHECK(dag_size(flat) <= 90);
  CHECK(tree_size(flat) > (uint64_t{1} << 40));
  CHECK(port_counts_saturated(flat) == std::vector<int>{2});
}

TEST_CASE("subtree_at extracts and renumbers") {
  FiniteTerm t = T("(a (b 3 2) (a 1 (b 2 2)))");
  CHECK(t.rank() == 3);

  SubtreeView<Letter> whole = subtree_at(t, {});
  REQUIRE(whole.term.has_value());
  // Names are reassigned in depth-first first-occurrence order: 3, 2, 1.
  CHECK(*whole.term == T("(a (b 1 2) (a 3 (b 2 2)))"));
  CHECK(whole.port_map == std::map<int, int>{{1, 3}, {2, 2}, {3, 1}});

  SubtreeView<Letter> left = subtree_at(t, {0});
  REQUIRE(left.term.has_value());
  CHECK(*left.term == T("(b 1 2)"));
  CHECK(left.port_map == std::map<int, int>{{3, 1}, {2, 2}});

  SubtreeView<Letter> port = subtree_at(t, {1, 0});
  CHECK(!port.term.has_value());
  CHECK(port.port_of_parent == 1);

  CHECK_THROWS_AS((void)subtree_at(t, {5}), Error);
  CHECK_THROWS_AS((void)subtree_at(t, {1, 0, 0}), Error);
}

TEST_CASE("subtree_at port_map is first-occurrence depth-first") {
  Rng rng(505);
  for (int i = 0; i < 100; ++i) {
    FiniteTerm t = random_ab_term(rng, rng.range(2, 4), 4);
    SubtreeView<Letter> v = subtree_at(t, {});
    REQUIRE(v.term.has_value());
    // First occurrences in the original, in depth-first order, must map to
    // 1, 2, ... in that order.
    std::vector<int> occs = port_occurrences_dfs(t);
    std::vector<int> firsts;
    for (int p : occs)
      if (std::find(firsts.begin(), firsts.end(), p) == firsts.end()) firsts.push_back(p);
    for (size_t j = 0; j < firsts.size(); ++j)
      CHECK(v.port_map.at(firsts[j]) == static_cast<int>(j) + 1);
    CHECK(v.term->rank() == t.rank());
  }
}

TEST_CASE("prefixes cut below the depth bound") {
  FiniteTerm t = T("(a (b 1 1) 2)");
  using P = Prefix<Letter>;
  CHECK(unfold_prefix(t, 0) == P::cut());
  CHECK(unfold_prefix(t, 1) == P::inner(Letter{"a", 2}, {P::cut(), P::port_leaf(2)}));
  CHECK(unfold_prefix(t, 2) ==
        P::inner(Letter{"a", 2},
                 {P::inner(Letter{"b", 2}, {P::port_leaf(1), P::port_leaf(1)}), P::port_leaf(2)}));
  CHECK(unfold_prefix(t, 9) == unfold_prefix(t, 2));
  CHECK_THROWS_AS((void)unfold_prefix(t, -1), Error);
}

TEST_CASE("a term and its label oracle unfold identically") {
  Rng rng(606);
  for (int i = 0; i < 80; ++i) {
    FiniteTerm t = random_ab_term(rng, rng.range(1, 3), 4);
    LazyTree view = term_view(t);
    CHECK(view.rank == t.rank());
    for (int d = 0; d <= 5; ++d) CHECK(unfold_prefix(view, d) == unfold_prefix(t, d));
  }
}

TEST_CASE("term files round-trip") {
  Rng rng(707);
  for (int i = 0; i < 120; ++i) {
    FiniteTerm t = random_ab_term(rng, rng.range(1, 4), 4);
    TermFile back = parse_term_file(print_term_file(AB, t));
    CHECK(back.alphabet == AB);
    CHECK(back.term == t);
  }
}

TEST_CASE("nested term files round-trip") {
  Rng rng(808);
  for (int i = 0; i < 80; ++i) {
    NestedFiniteTerm t = random_nested_ab(rng, rng.range(1, 3), 3, 2, 3);
    NestedTermFile back = parse_nested_term_file(print_nested_term_file(AB, t));
    CHECK(back.term == t);
  }
}

TEST_CASE("random generators respect their contracts") {
  Rng rng(909);
  for (int i = 0; i < 150; ++i) {
    int rank = rng.range(1, 4);
    FiniteTerm t = random_ab_term(rng, rank, 4);
    CHECK(t.rank() == rank);
  }
  for (int i = 0; i < 150; ++i) {
    int rank = rng.range(2, 5);
    FiniteTerm t = random_kind4_term(rng, rank);
    CHECK(t.rank() == rank);
    // Every port exactly once.
    std::vector<int> occs = port_occurrences_dfs(t);
    std::sort(occs.begin(), occs.end());
    std::vector<int> want;
    for (int p = 1; p <= rank; ++p) want.push_back(p);
    CHECK(occs == want);
  }
}

TEST_CASE("identical seeds reproduce identical samples") {
  Rng r1(4242), r2(4242);
  for (int i = 0; i < 40; ++i) {
    CHECK(random_ab_term(r1, 2, 4) == random_ab_term(r2, 2, 4));
  }
  Rng r3(1), r4(2);
  bool all_equal = true;
  for (int i = 0; i < 40; ++i)
    all_equal = all_equal && random_ab_term(r3, 2, 4) == random_ab_term(r4, 2, 4);
  CHECK(!all_equal);
}
