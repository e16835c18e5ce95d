#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "doctest.h"
#include "oclone/anti.hpp"
#include "oclone/io.hpp"
#include "oclone/kind.hpp"
#include "oclone/random_gen.hpp"

using namespace oclone;

namespace {

const Letter A{"a", 2};
const Letter B{"b", 2};

template <class F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::TrivialTerm;  // sentinel: "did not throw"
}

Address addr(const std::string& s) {
  Address a;
  for (char c : s) a.push_back(c == '1' ? 1 : 0);
  return a;
}

Letter label_at(const LazyTree& t, const std::string& at) {
  return std::get<Letter>(t.label_at(addr(at)));
}

// The subtree of t hanging at the given address, as its own tree.
LazyTree shifted(const LazyTree& t, const std::string& at) {
  LazyTree s;
  s.rank = t.rank;
  const Address base = addr(at);
  const auto f = t.label_at;
  s.label_at = [f, base](const Address& a) {
    Address full = base;
    full.insert(full.end(), a.begin(), a.end());
    return f(full);
  };
  return s;
}

TermGraph mk(std::vector<TermGraph::Vertex> vs) { return TermGraph::adopt(std::move(vs)); }

// Vertex of g reached by walking the address from the root.
int walk(const TermGraph& g, const Address& a) {
  int v = 0;
  for (int step : a) v = g.at(v).succ[static_cast<size_t>(step)];
  return v;
}

}  // namespace

TEST_CASE("built-in predicates decide their languages") {
  const WordLanguagePredicate pal = builtin_predicate("palindromes");
  CHECK(pal.name == "palindromes");
  CHECK(pal.certified_singleton_nerode);
  for (const char* w : {"", "0", "1", "00", "11", "010", "0110", "10101"})
    CHECK(pal.member(w));
  for (const char* w : {"01", "10", "100", "0011", "110"}) CHECK_FALSE(pal.member(w));

  const WordLanguagePredicate all = builtin_predicate("all");
  CHECK(all.member(""));
  CHECK(all.member("0101"));
  CHECK_FALSE(all.certified_singleton_nerode);

  const WordLanguagePredicate none = builtin_predicate("empty");
  CHECK_FALSE(none.member(""));
  CHECK_FALSE(none.member("0"));

  const WordLanguagePredicate zs = builtin_predicate("zeros-star");
  CHECK(zs.member(""));
  CHECK(zs.member("0000"));
  CHECK_FALSE(zs.member("1"));
  CHECK_FALSE(zs.member("01"));

  CHECK(code_of([] { builtin_predicate("bogus"); }) == Errc::ParseError);
}

TEST_CASE("predicate expressions evaluate with the documented precedence") {
  const WordLanguagePredicate zs = parse_predicate("not has \"1\"");
  const WordLanguagePredicate zs_builtin = builtin_predicate("zeros-star");
  for (int len = 0; len <= 6; ++len)
    for (int m = 0; m < (1 << len); ++m) {
      std::string w;
      for (int b = len - 1; b >= 0; --b) w.push_back((m >> b) & 1 ? '1' : '0');
      CHECK(zs.member(w) == zs_builtin.member(w));
    }
  CHECK_FALSE(zs.certified_singleton_nerode);
  CHECK(zs.name == "not has \"1\"");

  const WordLanguagePredicate p1 = parse_predicate("begins \"01\" and ends \"10\"");
  CHECK(p1.member("0110"));
  CHECK(p1.member("010"));
  CHECK_FALSE(p1.member("01"));
  CHECK_FALSE(p1.member("10"));

  // not binds tighter than and: on the empty word the left test passes and
  // the right fails, while a not over the whole conjunction would pass.
  const WordLanguagePredicate p2 = parse_predicate("not begins \"1\" and has \"0\"");
  CHECK_FALSE(p2.member(""));
  CHECK(p2.member("0"));
  CHECK_FALSE(p2.member("10"));

  // and binds tighter than or.
  const WordLanguagePredicate p3 = parse_predicate("is \"\" or is \"0\" and is \"1\"");
  CHECK(p3.member(""));
  CHECK_FALSE(p3.member("0"));

  const WordLanguagePredicate p4 = parse_predicate("(is \"\" or is \"0\") and not is \"0\"");
  CHECK(p4.member(""));
  CHECK_FALSE(p4.member("0"));
  CHECK_FALSE(p4.member("1"));

  const WordLanguagePredicate p5 = parse_predicate("length >= 2 and length <= 3");
  CHECK_FALSE(p5.member("0"));
  CHECK(p5.member("00"));
  CHECK(p5.member("010"));
  CHECK_FALSE(p5.member("0101"));

  CHECK(parse_predicate("length == 0").member(""));
  CHECK_FALSE(parse_predicate("length != 0").member(""));
  CHECK(parse_predicate("length < 1").member(""));
  CHECK(parse_predicate("length > 1").member("00"));
  CHECK(parse_predicate("palindrome").member("0110"));
  CHECK_FALSE(parse_predicate("palindrome").member("011"));
  CHECK(parse_predicate("is \"\"").member(""));
  CHECK_FALSE(parse_predicate("is \"\"").member("0"));
  CHECK(parse_predicate("true").member("1"));
  CHECK_FALSE(parse_predicate("false").member("1"));
  CHECK(parse_predicate("has \"\"").member(""));
}

TEST_CASE("predicate expression parse errors") {
  CHECK(code_of([] { parse_predicate(""); }) == Errc::ParseError);
  CHECK(code_of([] { parse_predicate("has 01"); }) == Errc::ParseError);
  CHECK(code_of([] { parse_predicate("(is \"0\""); }) == Errc::ParseError);
  CHECK(code_of([] { parse_predicate("length =="); }) == Errc::ParseError);
  CHECK(code_of([] { parse_predicate("true false"); }) == Errc::ParseError);
  CHECK(code_of([] { parse_predicate("palindrom"); }) == Errc::ParseError);
  CHECK(code_of([] { parse_predicate("has \"02\""); }) == Errc::ParseError);
  CHECK(code_of([] { parse_predicate("is \"01"); }) == Errc::ParseError);
  CHECK(code_of([] { parse_predicate("length = 3"); }) == Errc::ParseError);
  CHECK(code_of([] { parse_predicate("is \"0\" @"); }) == Errc::ParseError);
  CHECK(code_of([] { parse_predicate("not"); }) == Errc::ParseError);
  CHECK(code_of([] { parse_predicate("length == 9999999999"); }) == Errc::ParseError);

  CHECK(resolve_predicate("palindromes").certified_singleton_nerode);
  CHECK(resolve_predicate("zeros-star").name == "zeros-star");
  CHECK(resolve_predicate("true").member("0"));
  CHECK(code_of([] { resolve_predicate("zeros star"); }) == Errc::ParseError);
}

TEST_CASE("tree_from_language labels nodes by membership") {
  const LazyTree pal = tree_from_language(builtin_predicate("palindromes"));
  CHECK(pal.rank == 0);
  CHECK(pal.certified(kCertAntiregular));
  CHECK(label_at(pal, "") == A);
  CHECK(label_at(pal, "0") == A);
  CHECK(label_at(pal, "01") == B);
  CHECK(label_at(pal, "010") == A);
  CHECK(label_at(pal, "10") == B);
  CHECK(label_at(pal, "0110") == A);

  const LazyTree full_a = tree_from_language(builtin_predicate("all"));
  CHECK_FALSE(full_a.certificate.has_value());
  for (const char* at : {"", "0", "1", "0101"}) CHECK(label_at(full_a, at) == A);

  const LazyTree full_b = tree_from_language(builtin_predicate("empty"));
  for (const char* at : {"", "0", "1", "0101"}) CHECK(label_at(full_b, at) == B);

  CHECK(recognizes_densely_antiregular(pal));

  CHECK(code_of([] { tree_from_language(WordLanguagePredicate{}); }) == Errc::Malformed);
}

TEST_CASE("nerode_witness returns the shortest separator") {
  const WordLanguagePredicate pal = builtin_predicate("palindromes");
  CHECK(nerode_witness(pal, "0", "1", 8) == "0");
  CHECK(nerode_witness(pal, "01", "10", 8) == "0");
  CHECK(nerode_witness(pal, "0", "00", 1) == std::nullopt);
  CHECK(nerode_witness(pal, "0", "00", 2) == "10");
  CHECK(nerode_witness(pal, "0", "00", 8) == "10");

  const WordLanguagePredicate zs = builtin_predicate("zeros-star");
  CHECK(nerode_witness(zs, "0", "1", 4) == "");

  const WordLanguagePredicate all = builtin_predicate("all");
  CHECK(nerode_witness(all, "0", "1", 8) == std::nullopt);
  CHECK(code_of([&] { nerode_witness(all, "01", "01", 4); }) == Errc::EqualWords);
  CHECK(code_of([&] { nerode_witness(all, "02", "01", 4); }) == Errc::Malformed);
  CHECK(code_of([&] { nerode_witness(all, "0", "1", -1); }) == Errc::Malformed);
  CHECK(code_of([&] { nerode_witness(all, "0", "1", 25); }) == Errc::TooLarge);

  // Every returned witness separates, and none exists below its length.
  Rng rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    std::string u, v;
    for (int i = rng.range(0, 4); i > 0; --i) u.push_back(rng.chance(1, 2) ? '1' : '0');
    for (int i = rng.range(0, 4); i > 0; --i) v.push_back(rng.chance(1, 2) ? '1' : '0');
    if (u == v) continue;
    const auto w = nerode_witness(pal, u, v, 10);
    REQUIRE(w.has_value());
    CHECK(pal.member(u + *w) != pal.member(v + *w));
    if (!w->empty())
      CHECK(nerode_witness(pal, u, v, static_cast<int>(w->size()) - 1) == std::nullopt);
  }
}

TEST_CASE("antiregular_refute finds the first agreeing pair in shortlex order") {
  const LazyTree full_a = tree_from_language(builtin_predicate("all"));
  CHECK(antiregular_refute(full_a, 1, 0) == std::make_pair(addr(""), addr("0")));
  CHECK(antiregular_refute(full_a, 3, 7) == std::make_pair(addr(""), addr("0")));

  const WordLanguagePredicate zs_pred = builtin_predicate("zeros-star");
  const LazyTree zs = tree_from_language(zs_pred);
  CHECK(antiregular_refute(zs, 2, 13) == std::make_pair(addr(""), addr("0")));
  // The subtrees at "1" and "10" agree as well: no extension of either is
  // in 0*, so both are the full-b tree.
  for (int len = 0; len <= 6; ++len)
    for (int m = 0; m < (1 << len); ++m) {
      std::string w;
      for (int b = len - 1; b >= 0; --b) w.push_back((m >> b) & 1 ? '1' : '0');
      CHECK_FALSE(zs_pred.member("1" + w));
      CHECK_FALSE(zs_pred.member("10" + w));
    }

  const LazyTree pal = tree_from_language(builtin_predicate("palindromes"));
  CHECK(antiregular_refute(pal, 2, 0) == std::make_pair(addr(""), addr("0")));
  CHECK(antiregular_refute(pal, 2, 1) == std::make_pair(addr("0"), addr("00")));
  CHECK(antiregular_refute(pal, 4, 9) == std::nullopt);
  for (int d = 1; d <= 3; ++d) CHECK(antiregular_refute(pal, d, 2 * d + 1) == std::nullopt);

  // Once no pair agrees at some witness budget, none agrees at any larger
  // budget either.
  bool seen_none = false;
  for (int len = 0; len <= 8; ++len) {
    const bool found = antiregular_refute(pal, 3, len).has_value();
    if (seen_none) CHECK_FALSE(found);
    if (!found) seen_none = true;
  }
  CHECK(seen_none);

  // Subtrees of a certified antiregular tree pass at matching budgets.
  CHECK(antiregular_refute(shifted(pal, "01"), 2, 9) == std::nullopt);
  CHECK(antiregular_refute(shifted(pal, "110"), 2, 11) == std::nullopt);

  // Trees with ports: the two leaves of (a 1 1) carry the same port.
  CHECK(antiregular_refute(term_view(parse_term_sexpr("(a 1 1)", RankedAlphabet::ab())), 1, 2) ==
        std::make_pair(addr("0"), addr("1")));

  CHECK(code_of([&] { antiregular_refute(pal, -1, 2); }) == Errc::Malformed);
  CHECK(code_of([&] { antiregular_refute(pal, 2, -1); }) == Errc::Malformed);
  CHECK(code_of([&] { antiregular_refute(full_a, 22, 0); }) == Errc::TooLarge);
}

TEST_CASE("equal_subtree_pair walks the quotient to the first repetition") {
  CHECK(equal_subtree_pair(mk({{A, {0, 0}}})) == std::make_pair(addr(""), addr("0")));
  CHECK(equal_subtree_pair(mk({{A, {1, 1}}, {B, {0, 0}}})) ==
        std::make_pair(addr(""), addr("00")));
  CHECK(equal_subtree_pair(mk({{A, {1, 0}}, {B, {1, 1}}})) ==
        std::make_pair(addr("0"), addr("00")));
  // Three bisimilar vertices collapse to one, so the root repeats at once.
  CHECK(equal_subtree_pair(mk({{A, {1, 2}}, {A, {2, 0}}, {A, {0, 1}}})) ==
        std::make_pair(addr(""), addr("0")));

  CHECK(code_of([] { equal_subtree_pair(mk({{A, {1, 1}}, {1, {}}})); }) == Errc::NonZeroRank);

  Rng rng(733);
  for (int trial = 0; trial < 50; ++trial) {
    const TermGraph g = random_term_graph(rng, 0, 8);
    const auto [u, v] = equal_subtree_pair(g);
    CHECK(u != v);
    CHECK(u.size() < v.size());
    CHECK(v.size() <= static_cast<size_t>(g.size()) + 1);
    CHECK(unfold_prefix(g, 4, walk(g, u)) == unfold_prefix(g, 4, walk(g, v)));
  }
}

TEST_CASE("regular_kind1_experiment reports kind 1 on every sample") {
  const ExperimentReport rep = regular_kind1_experiment(7, 40, 8);
  REQUIRE(rep.samples.size() == 40);
  REQUIRE(rep.kind_histogram.size() == 1);
  CHECK(rep.kind_histogram.at(1) == 40);
  for (const ExperimentSample& s : rep.samples) {
    CHECK(s.element == KindElement::tag(1, 0));
    CHECK(s.repetition.first != s.repetition.second);
    CHECK(unfold_prefix(s.graph, 3, walk(s.graph, s.repetition.first)) ==
          unfold_prefix(s.graph, 3, walk(s.graph, s.repetition.second)));
  }

  // Same seed, same report.
  const ExperimentReport again = regular_kind1_experiment(7, 40, 8);
  for (size_t i = 0; i < rep.samples.size(); ++i) {
    CHECK(rep.samples[i].graph == again.samples[i].graph);
    CHECK(rep.samples[i].repetition == again.samples[i].repetition);
  }

  CHECK(code_of([] { regular_kind1_experiment(7, 0, 8); }) == Errc::Malformed);
  CHECK(code_of([] { regular_kind1_experiment(7, 1, 0); }) == Errc::Malformed);
}
