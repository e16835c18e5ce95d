// omegaclone: one binary over the text formats.
//
// Exit codes: 0 success or positive verdict, 1 negative verdict (reject,
// non-member, none, failed suite), 2 usage or parse error, 3 internal error.
// With --porcelain only the stable machine-readable lines are printed;
// identical argv and seed produce byte-identical porcelain output. --echo
// reprints each parsed input in canonical form instead of running the
// command, so every format round-trips.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oclone/anti.hpp"
#include "oclone/aut.hpp"
#include "oclone/game.hpp"
#include "oclone/io.hpp"
#include "oclone/kind.hpp"
#include "oclone/suites.hpp"

namespace {

using namespace oclone;

int g_exit = 0;

void line(const std::string& s) { std::printf("%s\n", s.c_str()); }

// Multi-line canonical text (already newline-terminated).
void block(const std::string& s) { std::fputs(s.c_str(), stdout); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::ParseError, "cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string word_of(const Address& a) {
  std::string s = "\"";
  for (int d : a) s += std::to_string(d);
  return s + "\"";
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (int x : v) s += " " + std::to_string(x);
  return s;
}

std::string strategy_line(const char* who, const Strategy& st) {
  std::string s = std::string("strategy ") + who + ":";
  for (const auto& [v, w] : st) s += " " + std::to_string(v) + "->" + std::to_string(w);
  return s;
}

std::string print_solution(const Solution& s) {
  return "even:" + join_ints(s.win_even) + "\nodd:" + join_ints(s.win_odd) + "\n" +
         strategy_line("even", s.strategy_even) + "\n" + strategy_line("odd", s.strategy_odd) +
         "\n";
}

// Inverse of print_solution: four lines in fixed order.
Solution parse_solution(const std::string& text) {
  std::istringstream in(text);
  std::string ln;
  Solution s;
  const auto next = [&](const std::string& head) {
    if (!std::getline(in, ln) || ln.rfind(head, 0) != 0)
      fail(Errc::ParseError, "solution file: expected a line starting with '" + head + "'");
    return ln.substr(head.size());
  };
  const auto ints = [](const std::string& rest) {
    std::istringstream ts(rest);
    std::vector<int> out;
    int x;
    while (ts >> x) out.push_back(x);
    if (!ts.eof()) fail(Errc::ParseError, "solution file: expected vertex numbers, got '" + rest + "'");
    return out;
  };
  const auto moves = [](const std::string& rest) {
    std::istringstream ts(rest);
    Strategy st;
    std::string tok;
    while (ts >> tok) {
      const size_t arrow = tok.find("->");
      if (arrow == std::string::npos)
        fail(Errc::ParseError, "solution file: expected v->w, got '" + tok + "'");
      st[std::stoi(tok.substr(0, arrow))] = std::stoi(tok.substr(arrow + 2));
    }
    return st;
  };
  s.win_even = ints(next("even:"));
  s.win_odd = ints(next("odd:"));
  s.strategy_even = moves(next("strategy even:"));
  s.strategy_odd = moves(next("strategy odd:"));
  return s;
}

std::string print_profile(const ParityAutomaton& aut, const Profile& p) {
  std::string s = "root=" + aut.state_name(p.root_state) + " records=";
  for (const PortRecord& r : p.records)
    s += "(" + aut.state_name(r.state) + "," + std::to_string(r.max_priority) + "," +
         std::to_string(r.port) + ")";
  return s;
}

std::string suite_porcelain(const SuiteReport& r) {
  return "suite " + r.name + " checks=" + std::to_string(r.trials) +
         " failures=" + std::to_string(r.failures);
}

// ----------------------------------------------------------------------------
// Subcommand wiring. Callbacks run at the end of parsing; they print and set
// g_exit. Shared flag targets live in this struct.
// ----------------------------------------------------------------------------

struct Args {
  bool porcelain = false;
  bool echo = false;
  bool trace = false;
  uint64_t seed = 0;
  std::optional<int> trials;
  int depth = 6;
  int wlen = 13;
  int maxlen = 20;
  int count = 100;
  int size_bound = 8;
  int rank_bound = 4;
  std::string alphabet_line = "alphabet a:2 b:2";
  std::string term_text, nested_text, element_text, pred_text, u, v, suite;
  std::string graph_path, aut_path, game_path, solution_path, file_path;
};

void want_one(const std::string& x, const std::string& y, const char* what) {
  if (x.empty() == y.empty()) fail(Errc::ParseError, what);
}

void cmd_classify(const Args& a) {
  want_one(a.term_text, a.graph_path, "classify needs exactly one of --term, --graph");
  if (!a.term_text.empty()) {
    const FiniteTerm t = parse_term_sexpr(a.term_text, parse_alphabet_line(a.alphabet_line));
    if (a.echo) return line(print_term(t));
    line(print_kind_element(classify(t)));
  } else {
    const TermGraph g = parse_graph_file(read_file(a.graph_path));
    if (a.echo) return block(print_graph_file(g));
    line(print_kind_element(classify(g)));
  }
}

void cmd_flatten(const Args& a) {
  if (!a.nested_text.empty()) {
    const NestedFiniteTerm t =
        parse_nested_term_sexpr(a.nested_text, parse_alphabet_line(a.alphabet_line));
    if (a.echo) return line(print_nested_term(t));
    line(print_term(flatten(t)));
  } else {
    const NestedTermFile f = parse_nested_term_file(read_file(a.file_path));
    if (a.echo) return block(print_nested_term_file(f.alphabet, f.term));
    line(print_term(flatten(f.term)));
  }
}

void cmd_product(const Args& a) {
  PrOutcome o{KindElement::tag(1, 0), DiagramCase::Flattened};
  if (!a.term_text.empty()) {
    const CATerm t = parse_ca_term(a.term_text);
    if (a.echo) return line(print_ca_term(t));
    o = pr_A_traced(t);
  } else {
    const CAGraph g = parse_ca_graph_file(read_file(a.graph_path));
    if (a.echo) return block(print_ca_graph_file(g));
    o = pr_A_traced(g);
  }
  line(print_kind_element(o.value));
  if (a.trace) line(std::string("rule ") + diagram_case_name(o.rule));
}

void cmd_laws(const Args& a) {
  const LawReport law = check_clone_laws(a.seed, a.trials.value_or(500));
  line("unit trials=" + std::to_string(law.unit_trials) +
       " failures=" + std::to_string(law.unit_failures));
  line("flatten trials=" + std::to_string(law.flatten_trials) +
       " failures=" + std::to_string(law.flatten_failures));
  if (law.ok()) return line("ok");
  line("failed " + law.first_failure);
  g_exit = 1;
}

void cmd_decompose(const Args& a) {
  const KindElement target = parse_kind_element(a.element_text);
  if (a.echo) return line(print_kind_element(target));
  try {
    const CATerm w = generator_decompose(target, a.rank_bound);
    line(print_ca_term(w));
    if (!a.porcelain) line("product " + print_kind_element(pr_A(w)));
  } catch (const Error& e) {
    if (e.code() != Errc::SearchExhausted) throw;
    line("none");
    g_exit = 1;
  }
}

void cmd_game_solve(const Args& a) {
  const GameArena arena = pg_read(read_file(a.game_path));
  if (a.echo) return block(pg_write(arena));
  block(print_solution(solve_zielonka(arena)));
}

void cmd_game_verify(const Args& a) {
  const GameArena arena = pg_read(read_file(a.game_path));
  const Solution s = parse_solution(read_file(a.solution_path));
  if (a.echo) {
    block(pg_write(arena));
    block(print_solution(s));
    return;
  }
  if (verify_solution(arena, s)) return line("verified");
  line("rejected");
  g_exit = 1;
}

void cmd_aut_member(const Args& a) {
  const ParityAutomaton aut = aut_read(read_file(a.aut_path));
  const TermGraph g = parse_graph_file(read_file(a.graph_path));
  if (a.echo) {
    block(aut_write(aut));
    block(print_graph_file(g));
    return;
  }
  if (membership(aut, g)) return line("accept");
  line("reject");
  g_exit = 1;
}

void cmd_aut_empty(const Args& a) {
  const ParityAutomaton aut = aut_read(read_file(a.aut_path));
  if (a.echo) return block(aut_write(aut));
  if (is_empty_with_witness(aut).empty) return line("empty");
  line("non-empty");
  g_exit = 1;
}

void cmd_aut_witness(const Args& a) {
  const ParityAutomaton aut = aut_read(read_file(a.aut_path));
  if (a.echo) return block(aut_write(aut));
  const EmptinessResult r = is_empty_with_witness(aut);
  if (r.empty) {
    line("empty");
    g_exit = 1;
    return;
  }
  block(print_graph_file(*r.witness));
}

void cmd_aut_profiles(const Args& a) {
  const ParityAutomaton aut = aut_read(read_file(a.aut_path));
  const FiniteTerm t = parse_term_sexpr(a.term_text, aut.alphabet());
  if (a.echo) {
    block(aut_write(aut));
    line(print_term(t));
    return;
  }
  const ProfileSet ps = profiles_finite(aut, t);
  line("profiles " + std::to_string(ps.size()));
  for (const Profile& p : ps) line(print_profile(aut, p));
}

void cmd_anti_gen(const Args& a) {
  const WordLanguagePredicate pred = resolve_predicate(a.pred_text);
  if (a.echo) return line(pred.name);
  line(print_prefix(unfold_prefix(tree_from_language(pred), a.depth)));
}

void cmd_anti_refute(const Args& a) {
  const WordLanguagePredicate pred = resolve_predicate(a.pred_text);
  if (a.echo) return line(pred.name);
  const auto r = antiregular_refute(tree_from_language(pred), a.depth, a.wlen);
  if (r) return line("pair " + word_of(r->first) + " " + word_of(r->second));
  line("none");
  g_exit = 1;
}

void cmd_anti_nerode(const Args& a) {
  const WordLanguagePredicate pred = resolve_predicate(a.pred_text);
  if (a.echo) return line(pred.name);
  const auto w = nerode_witness(pred, a.u, a.v, a.maxlen);
  if (w) return line("witness \"" + *w + "\"");
  line("none");
  g_exit = 1;
}

void cmd_anti_experiment(const Args& a) {
  const ExperimentReport rep = regular_kind1_experiment(a.seed, a.count, a.size_bound);
  std::string hist;
  for (const auto& [kind, n] : rep.kind_histogram)
    hist += (hist.empty() ? "" : " ") + std::string("kind") + std::to_string(kind) + "=" +
            std::to_string(n);
  line(hist);
  for (size_t i = 0; i < rep.samples.size(); ++i)
    line("sample " + std::to_string(i) + " " + print_kind_element(rep.samples[i].element) +
         " pair " + word_of(rep.samples[i].repetition.first) + " " +
         word_of(rep.samples[i].repetition.second));
}

void cmd_oracle(const Args& a) {
  std::vector<SuiteReport> reports;
  CaseHistogram cases;
  bool show_cases = false;
  const int t = a.trials.value_or(-1);
  if (a.suite == "hom") {
    reports.push_back(suite_hom_square(a.seed, t < 0 ? 5000 : t, &cases));
  } else if (a.suite == "regular") {
    reports.push_back(suite_regular_square(a.seed, t < 0 ? 500 : t, &cases));
  } else if (a.suite == "laws") {
    reports.push_back(suite_clone_laws(a.seed, t < 0 ? 2000 : t, &cases));
  } else if (a.suite == "corollary") {
    const int n = t < 0 ? 5000 : t;
    reports.push_back(suite_hom_square(a.seed, n, &cases));
    reports.push_back(suite_regular_square(a.seed + 1, std::max(n / 10, 1), &cases));
    reports.push_back(suite_clone_laws(a.seed + 2, std::max(2 * n / 5, 1), &cases));
    reports.push_back(suite_case_coverage(cases));
    show_cases = true;
  } else if (a.suite == "lemmas") {
    reports.push_back(suite_flatten_lemmas(a.seed, t < 0 ? 1000 : t));
  } else if (a.suite == "games") {
    reports.push_back(suite_parity_solver(a.seed, t < 0 ? 1000 : t));
  } else if (a.suite == "automata") {
    reports.push_back(suite_automata(a.seed, t < 0 ? 20 : t));
  } else if (a.suite == "profiles") {
    reports.push_back(suite_profiles(a.seed, t < 0 ? 1000 : t));
  } else if (a.suite == "antiregular") {
    reports.push_back(suite_antiregular(a.depth, a.wlen, t < 0 ? 8 : t));
  } else if (a.suite == "notregular") {
    reports.push_back(suite_not_regular(a.seed, t < 0 ? 1000 : t, a.size_bound));
  } else if (a.suite == "generators") {
    reports.push_back(suite_generators(a.seed, t < 0 ? 100 : t));
  } else if (a.suite == "all") {
    reports = run_all_suites(a.seed);
  } else {
    fail(Errc::ParseError,
         "unknown suite '" + a.suite +
             "' (expected hom, regular, laws, corollary, lemmas, games, automata, profiles, "
             "antiregular, notregular, generators, or all)");
  }
  bool ok = true;
  for (const SuiteReport& r : reports) {
    line(a.porcelain ? suite_porcelain(r) : format_report(r));
    ok = ok && r.ok();
  }
  if (show_cases) line("cases " + format_histogram(cases));
  if (ok) return line("all passed");
  line("failed");
  g_exit = 1;
}

}  // namespace

int main(int argc, char** argv) {
  Args a;
  CLI::App app{"sort-wise finite algebra toolkit for infinite trees"};
  app.require_subcommand(1);

  const auto common = [&](CLI::App* c) {
    c->add_flag("--porcelain", a.porcelain, "machine-readable output only");
    c->add_flag("--echo", a.echo, "reprint parsed inputs canonically and exit");
    return c;
  };
  const auto seeded = [&](CLI::App* c) {
    c->add_option("--seed", a.seed, "random seed")->envname("OMEGACLONE_SEED")->required();
    return c;
  };

  CLI::App* classify = common(app.add_subcommand("classify", "kind of a term or graph unfolding"));
  classify->add_option("--term", a.term_text, "term S-expression");
  classify->add_option("--graph", a.graph_path, "term graph file");
  classify->add_option("--alphabet", a.alphabet_line, "alphabet line for --term");
  classify->callback([&] { cmd_classify(a); });

  CLI::App* flat = common(app.add_subcommand("flatten", "flatten a nested term"));
  flat->add_option("--nested", a.nested_text, "nested term S-expression");
  flat->add_option("--file", a.file_path, "nested term file");
  flat->add_option("--alphabet", a.alphabet_line, "alphabet line for --nested");
  flat->callback([&] { cmd_flatten(a); });

  CLI::App* product = common(app.add_subcommand("product", "evaluate the algebra product"));
  product->add_option("--term", a.term_text, "element-labeled term S-expression");
  product->add_option("--graph", a.graph_path, "element-labeled graph file");
  product->add_flag("--trace", a.trace, "also print the decision rule that fired");
  product->callback([&] { cmd_product(a); });

  CLI::App* laws = seeded(common(app.add_subcommand("laws", "randomized algebra law check")));
  laws->add_option("--trials", a.trials, "family size (default 500)");
  laws->callback([&] { cmd_laws(a); });

  CLI::App* dec = common(app.add_subcommand("decompose", "write an element over the generators"));
  dec->add_option("--element", a.element_text, "target element, e.g. T3/2")->required();
  dec->add_option("--rank-bound", a.rank_bound, "largest admissible rank (default 4)");
  dec->callback([&] { cmd_decompose(a); });

  CLI::App* game = app.add_subcommand("game", "parity games");
  game->require_subcommand(1);
  CLI::App* gs = common(game->add_subcommand("solve", "winning regions and strategies"));
  gs->add_option("--game", a.game_path, "pgsolver format file")->required();
  gs->callback([&] { cmd_game_solve(a); });
  CLI::App* gv = common(game->add_subcommand("verify", "check a claimed solution"));
  gv->add_option("--game", a.game_path, "pgsolver format file")->required();
  gv->add_option("--solution", a.solution_path, "solution file (game solve output)")->required();
  gv->callback([&] { cmd_game_verify(a); });

  CLI::App* aut = app.add_subcommand("aut", "parity tree automata");
  aut->require_subcommand(1);
  CLI::App* am = common(aut->add_subcommand("member", "does the unfolding satisfy the automaton"));
  am->add_option("--aut", a.aut_path, "automaton file")->required();
  am->add_option("--graph", a.graph_path, "rank-0 term graph file")->required();
  am->callback([&] { cmd_aut_member(a); });
  CLI::App* ae = common(aut->add_subcommand("empty", "is the language empty"));
  ae->add_option("--aut", a.aut_path, "automaton file")->required();
  ae->callback([&] { cmd_aut_empty(a); });
  CLI::App* aw = common(aut->add_subcommand("witness", "a regular tree in the language"));
  aw->add_option("--aut", a.aut_path, "automaton file")->required();
  aw->callback([&] { cmd_aut_witness(a); });
  CLI::App* ap = common(aut->add_subcommand("profiles", "run profiles of a term"));
  ap->add_option("--aut", a.aut_path, "automaton file")->required();
  ap->add_option("--term", a.term_text, "term over the automaton's alphabet")->required();
  ap->callback([&] { cmd_aut_profiles(a); });

  CLI::App* anti = app.add_subcommand("anti", "antiregular trees from word languages");
  anti->require_subcommand(1);
  CLI::App* ag = common(anti->add_subcommand("gen", "print a depth-bounded prefix"));
  ag->add_option("--pred", a.pred_text, "built-in name or predicate expression")->required();
  ag->add_option("--depth", a.depth, "prefix depth (default 6)");
  ag->callback([&] { cmd_anti_gen(a); });
  CLI::App* ar = common(anti->add_subcommand("refute", "search for two equal bounded subtrees"));
  ar->add_option("--pred", a.pred_text, "built-in name or predicate expression")->required();
  ar->add_option("--depth", a.depth, "node depth to search (default 6)");
  ar->add_option("--wlen", a.wlen, "witness depth per pair (default 13)");
  ar->callback([&] { cmd_anti_refute(a); });
  CLI::App* an = common(anti->add_subcommand("nerode", "shortest separating extension"));
  an->add_option("--pred", a.pred_text, "built-in name or predicate expression")->required();
  an->add_option("--u", a.u, "first word");
  an->add_option("--v", a.v, "second word");
  an->add_option("--maxlen", a.maxlen, "longest extension tried (default 20)");
  an->callback([&] { cmd_anti_nerode(a); });
  CLI::App* ax = seeded(common(anti->add_subcommand("experiment", "classify random rank-0 graphs")));
  ax->add_option("--count", a.count, "sample count (default 100)");
  ax->add_option("--size-bound", a.size_bound, "largest graph size (default 8)");
  ax->callback([&] { cmd_anti_experiment(a); });

  CLI::App* oracle = seeded(common(app.add_subcommand("oracle", "randomized verification suites")));
  oracle->add_option("--suite", a.suite, "hom, regular, laws, corollary, lemmas, games, automata, "
                                         "profiles, antiregular, notregular, generators, or all")
      ->required();
  oracle->add_option("--trials", a.trials, "override the suite's trial count");
  oracle->add_option("--depth", a.depth, "antiregular: node depth (default 6)");
  oracle->add_option("--wlen", a.wlen, "antiregular: witness depth (default 13)");
  oracle->add_option("--size-bound", a.size_bound, "notregular: largest graph size (default 8)");
  oracle->callback([&] { cmd_oracle(a); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 3;
  }
  return g_exit;
}
