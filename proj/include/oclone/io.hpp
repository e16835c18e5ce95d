#pragma once

#include <string>

#include "oclone/graph.hpp"
#include "oclone/lazy.hpp"
#include "oclone/term.hpp"

namespace oclone {

// ============================================================================
// Text formats. Exact grammars in docs/formats.md. All printers produce the
// canonical spelling, and parse(print(x)) == x.
// ============================================================================

// "alphabet a:2 b:2"
RankedAlphabet parse_alphabet_line(const std::string& line);
std::string print_alphabet_line(const RankedAlphabet& sigma);

// Term S-expressions: ports are bare numbers, inner nodes are
// "(letter child...)", e.g. "(a (b 1 1) 2)".
FiniteTerm parse_term_sexpr(const std::string& text, const RankedAlphabet& sigma);
std::string print_term(const FiniteTerm& t);

struct TermFile {
  RankedAlphabet alphabet;
  FiniteTerm term;
};
TermFile parse_term_file(const std::string& text);
std::string print_term_file(const RankedAlphabet& sigma, const FiniteTerm& t);

// Nested terms label outer nodes with term S-expressions:
// "((a 1 2) 1 ((b 1 1) 2))".
NestedFiniteTerm parse_nested_term_sexpr(const std::string& text, const RankedAlphabet& sigma);
std::string print_nested_term(const NestedFiniteTerm& t);

struct NestedTermFile {
  RankedAlphabet alphabet;
  NestedFiniteTerm term;
};
NestedTermFile parse_nested_term_file(const std::string& text);
std::string print_nested_term_file(const RankedAlphabet& sigma, const NestedFiniteTerm& t);

// Term graphs: a "rank n" line, then one "<id>: <letter> <succ>..." or
// "<id>: port <i>" line per vertex. Ids must be 0..n-1 in order; vertex 0 is
// the root. Letter ranks are inferred from successor counts and must be
// consistent across the file.
TermGraph parse_graph_file(const std::string& text);
std::string print_graph_file(const TermGraph& g);

// Depth-bounded unfoldings print like terms with "#" as the cut marker.
std::string print_prefix(const Prefix<Letter>& p);

}  // namespace oclone
