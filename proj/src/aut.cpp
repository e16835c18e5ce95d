#include "oclone/aut.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

#include "oclone/game.hpp"

namespace oclone {

// ============================================================================
// Construction
// ============================================================================

ParityAutomaton ParityAutomaton::adopt(RankedAlphabet alphabet, std::vector<std::string> states,
                                       int initial, std::vector<int> priority,
                                       std::map<std::string, std::vector<Transition>> transitions) {
  const int n = static_cast<int>(states.size());
  if (n == 0) fail(Errc::Malformed, "automaton needs at least one state");
  for (size_t i = 0; i < states.size(); ++i) {
    if (states[i].empty()) fail(Errc::Malformed, "state with empty name");
    for (size_t j = 0; j < i; ++j)
      if (states[j] == states[i]) fail(Errc::Malformed, "duplicate state name '" + states[i] + "'");
  }
  if (initial < 0 || initial >= n) fail(Errc::Malformed, "initial state out of range");
  if (priority.size() != states.size()) fail(Errc::Malformed, "need exactly one priority per state");
  for (int p : priority)
    if (p < 0) fail(Errc::Malformed, "negative priority");
  for (auto it = transitions.begin(); it != transitions.end();) {
    const Letter* l = alphabet.find(it->first);
    if (l == nullptr)
      fail(Errc::UnknownLetter, "transition letter '" + it->first + "' not in the alphabet");
    for (const Transition& tr : it->second) {
      if (tr.from < 0 || tr.from >= n)
        fail(Errc::Malformed, "transition source state out of range");
      if (static_cast<int>(tr.to.size()) != l->rank)
        fail(Errc::ArityMismatch, "transition on '" + it->first + "' names " +
                                      std::to_string(tr.to.size()) + " children, letter rank is " +
                                      std::to_string(l->rank));
      for (int q : tr.to)
        if (q < 0 || q >= n) fail(Errc::Malformed, "transition target state out of range");
    }
    std::sort(it->second.begin(), it->second.end());
    it->second.erase(std::unique(it->second.begin(), it->second.end()), it->second.end());
    if (it->second.empty())
      it = transitions.erase(it);
    else
      ++it;
  }
  ParityAutomaton a;
  a.alphabet_ = std::move(alphabet);
  a.states_ = std::move(states);
  a.initial_ = initial;
  a.priority_ = std::move(priority);
  a.transitions_ = std::move(transitions);
  return a;
}

int ParityAutomaton::find_state(const std::string& name) const {
  for (size_t i = 0; i < states_.size(); ++i)
    if (states_[i] == name) return static_cast<int>(i);
  return -1;
}

const std::vector<ParityAutomaton::Transition>& ParityAutomaton::delta(
    const std::string& letter) const {
  static const std::vector<Transition> kEmpty;
  const auto it = transitions_.find(letter);
  return it == transitions_.end() ? kEmpty : it->second;
}

// ============================================================================
// Text form
// ============================================================================

namespace {

enum class TK { Ident, Colon, Eq, Arrow };

struct Tok {
  TK k = TK::Ident;
  std::string text;
  int line = 1;
};

[[noreturn]] void perr(int line, const std::string& msg) {
  fail(Errc::ParseError, "line " + std::to_string(line) + ": " + msg);
}

std::vector<std::vector<Tok>> lex_statements(const std::string& text) {
  std::vector<std::vector<Tok>> stmts;
  std::vector<Tok> cur;
  int line = 1;
  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == ';') {
      if (cur.empty()) perr(line, "empty statement");
      stmts.push_back(std::move(cur));
      cur.clear();
      ++i;
    } else if (c == ':') {
      cur.push_back({TK::Colon, ":", line});
      ++i;
    } else if (c == '=') {
      cur.push_back({TK::Eq, "=", line});
      ++i;
    } else if (c == '-') {
      if (i + 1 < n && text[i + 1] == '>') {
        cur.push_back({TK::Arrow, "->", line});
        i += 2;
      } else {
        perr(line, "stray '-'");
      }
    } else {
      size_t j = i;
      while (j < n && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != ';' &&
             text[j] != ':' && text[j] != '=' && text[j] != '-')
        ++j;
      cur.push_back({TK::Ident, text.substr(i, j - i), line});
      i = j;
    }
  }
  if (!cur.empty()) perr(cur.front().line, "statement without ';'");
  return stmts;
}

int parse_aut_nat(const Tok& t, const char* what) {
  if (t.k != TK::Ident || t.text.empty() || t.text.size() > 9) perr(t.line, std::string("expected ") + what);
  for (char c : t.text)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      perr(t.line, std::string("expected ") + what + ", got '" + t.text + "'");
  return std::stoi(t.text);
}

const Tok& need(const std::vector<Tok>& st, size_t i, TK kind, const char* what) {
  if (i >= st.size()) perr(st.back().line, std::string("expected ") + what);
  if (st[i].k != kind) perr(st[i].line, std::string("expected ") + what + ", got '" + st[i].text + "'");
  return st[i];
}

}  // namespace

ParityAutomaton aut_read(const std::string& text) {
  const std::vector<std::vector<Tok>> stmts = lex_statements(text);
  if (stmts.size() < 4)
    fail(Errc::ParseError, "line 1: expected 'alphabet', 'states', 'init' and 'priority' statements");

  const auto header = [&](size_t si, const char* kw) -> const std::vector<Tok>& {
    const std::vector<Tok>& st = stmts[si];
    if (st[0].k != TK::Ident || st[0].text != kw)
      perr(st[0].line, std::string("expected '") + kw + " ...;', got '" + st[0].text + "'");
    return st;
  };

  const std::vector<Tok>& st0 = header(0, "alphabet");
  std::vector<Letter> letters;
  for (size_t i = 1; i < st0.size(); i += 3) {
    const Tok& name = need(st0, i, TK::Ident, "a letter name");
    need(st0, i + 1, TK::Colon, "':' after the letter name");
    const int rank = parse_aut_nat(need(st0, i + 2, TK::Ident, "a rank"), "a rank");
    letters.push_back({name.text, rank});
  }
  RankedAlphabet sigma;
  try {
    sigma = RankedAlphabet(std::move(letters));
  } catch (const Error& e) {
    perr(st0[0].line, e.what());
  }

  const std::vector<Tok>& st1 = header(1, "states");
  if (st1.size() < 2) perr(st1[0].line, "expected at least one state name");
  std::vector<std::string> states;
  for (size_t i = 1; i < st1.size(); ++i) {
    if (st1[i].k != TK::Ident) perr(st1[i].line, "expected a state name, got '" + st1[i].text + "'");
    states.push_back(st1[i].text);
  }
  const auto state_of = [&](const Tok& t) {
    for (size_t i = 0; i < states.size(); ++i)
      if (states[i] == t.text) return static_cast<int>(i);
    perr(t.line, "unknown state '" + t.text + "'");
  };

  const std::vector<Tok>& st2 = header(2, "init");
  if (st2.size() != 2 || st2[1].k != TK::Ident) perr(st2[0].line, "expected 'init <state>;'");
  const int initial = state_of(st2[1]);

  const std::vector<Tok>& st3 = header(3, "priority");
  std::vector<int> priority(states.size(), -1);
  for (size_t i = 1; i < st3.size(); i += 3) {
    const Tok& name = need(st3, i, TK::Ident, "a state name");
    const int q = state_of(name);
    need(st3, i + 1, TK::Eq, "'=' after the state name");
    const int p = parse_aut_nat(need(st3, i + 2, TK::Ident, "a priority"), "a priority");
    if (priority[static_cast<size_t>(q)] >= 0) perr(name.line, "state '" + name.text + "' listed twice");
    priority[static_cast<size_t>(q)] = p;
  }
  for (size_t q = 0; q < states.size(); ++q)
    if (priority[q] < 0) perr(st3[0].line, "state '" + states[q] + "' has no priority");

  std::map<std::string, std::vector<ParityAutomaton::Transition>> transitions;
  for (size_t si = 4; si < stmts.size(); ++si) {
    const std::vector<Tok>& st = stmts[si];
    const Tok& lname = need(st, 0, TK::Ident, "a letter name");
    const Letter* l = sigma.find(lname.text);
    if (l == nullptr) perr(lname.line, "unknown letter '" + lname.text + "'");
    need(st, 1, TK::Colon, "':' after the letter");
    ParityAutomaton::Transition tr;
    tr.from = state_of(need(st, 2, TK::Ident, "a source state"));
    need(st, 3, TK::Arrow, "'->'");
    for (size_t i = 4; i < st.size(); ++i) tr.to.push_back(state_of(st[i]));
    if (static_cast<int>(tr.to.size()) != l->rank)
      perr(lname.line, "transition on '" + lname.text + "' names " + std::to_string(tr.to.size()) +
                           " children, letter rank is " + std::to_string(l->rank));
    transitions[lname.text].push_back(std::move(tr));
  }
  return ParityAutomaton::adopt(std::move(sigma), std::move(states), initial, std::move(priority),
                                std::move(transitions));
}

std::string aut_write(const ParityAutomaton& aut) {
  std::ostringstream o;
  o << "alphabet";
  for (const Letter& l : aut.alphabet().letters()) o << ' ' << l.name << ':' << l.rank;
  o << ";\nstates";
  for (int q = 0; q < aut.state_count(); ++q) o << ' ' << aut.state_name(q);
  o << ";\ninit " << aut.state_name(aut.initial()) << ";\npriority";
  for (int q = 0; q < aut.state_count(); ++q)
    o << ' ' << aut.state_name(q) << '=' << aut.priority(q);
  o << ";\n";
  for (const Letter& l : aut.alphabet().letters())
    for (const auto& tr : aut.delta(l.name)) {
      o << l.name << ": " << aut.state_name(tr.from) << " ->";
      for (int q : tr.to) o << ' ' << aut.state_name(q);
      o << ";\n";
    }
  return o.str();
}

// ============================================================================
// Membership
// ============================================================================

namespace {

void check_member_input(const ParityAutomaton& aut, const TermGraph& g) {
  if (g.rank() != 0)
    fail(Errc::NonZeroRank, "membership needs a rank-0 graph, got rank " + std::to_string(g.rank()));
  for (int v = 0; v < g.size(); ++v)
    if (!g.at(v).is_port() && !aut.alphabet().contains(g.at(v).lab()))
      fail(Errc::AlphabetMismatch,
           "letter '" + g.at(v).lab().name + "' is not in the automaton's alphabet");
}

// Product game positions: (vertex, state) pairs owned by even at the state's
// priority, then two sinks, then one odd choice position per applicable
// transition. State position id = vertex * Q + state.
struct ProductGame {
  GameArena arena;
  int q_count;
  int first_choice;
  struct Choice {
    int vertex;
    int state;
    int ti;  // index into delta(letter at vertex)
  };
  std::vector<Choice> choices;
};

ProductGame build_membership_game(const ParityAutomaton& aut, const TermGraph& g) {
  const int V = g.size(), Q = aut.state_count();
  const int win_e = V * Q, win_o = V * Q + 1;
  const int first_choice = V * Q + 2;
  std::vector<GameArena::Vertex> vs(static_cast<size_t>(first_choice));
  vs[static_cast<size_t>(win_e)] = {Player::Odd, 0, {win_e}};
  vs[static_cast<size_t>(win_o)] = {Player::Even, 1, {win_o}};
  std::vector<ProductGame::Choice> choices;
  for (int v = 0; v < V; ++v) {
    const Letter& l = g.at(v).lab();
    const auto& dl = aut.delta(l.name);
    for (int q = 0; q < Q; ++q) {
      const int pos = v * Q + q;
      vs[static_cast<size_t>(pos)].owner = Player::Even;
      vs[static_cast<size_t>(pos)].priority = aut.priority(q);
      for (size_t ti = 0; ti < dl.size(); ++ti) {
        if (dl[ti].from != q) continue;
        const int cpos = first_choice + static_cast<int>(choices.size());
        choices.push_back({v, q, static_cast<int>(ti)});
        GameArena::Vertex cv{Player::Odd, 0, {}};
        if (l.rank == 0) {
          cv.edges = {win_e};
        } else {
          for (int i = 0; i < l.rank; ++i)
            cv.edges.push_back(g.at(v).succ[static_cast<size_t>(i)] * Q +
                               dl[ti].to[static_cast<size_t>(i)]);
        }
        vs.push_back(std::move(cv));
        vs[static_cast<size_t>(pos)].edges.push_back(cpos);
      }
      if (vs[static_cast<size_t>(pos)].edges.empty())
        vs[static_cast<size_t>(pos)].edges = {win_o};
    }
  }
  return {GameArena::adopt(std::move(vs)), Q, first_choice, std::move(choices)};
}

}  // namespace

bool membership(const ParityAutomaton& aut, const TermGraph& g) {
  check_member_input(aut, g);
  const ProductGame pg = build_membership_game(aut, g);
  const Solution s = solve_zielonka(pg.arena);
  return std::binary_search(s.win_even.begin(), s.win_even.end(), aut.initial());
}

std::optional<RunAnnotation> extract_run(const ParityAutomaton& aut, const TermGraph& g) {
  check_member_input(aut, g);
  TermGraph m = minimize_bisim(g);
  const ProductGame pg = build_membership_game(aut, m);
  const Solution s = solve_zielonka(pg.arena);
  const int Q = pg.q_count;
  if (!std::binary_search(s.win_even.begin(), s.win_even.end(), aut.initial()))
    return std::nullopt;

  std::map<int, int> node_of;  // product position -> annotation node
  std::vector<RunAnnotation::Node> nodes;
  std::vector<int> queue;
  const auto intern = [&](int pos) {
    const auto [it, fresh] = node_of.emplace(pos, static_cast<int>(nodes.size()));
    if (fresh) {
      nodes.push_back({pos / Q, pos % Q, 0, {}});
      queue.push_back(pos);
    }
    return it->second;
  };
  intern(aut.initial());
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    const int pos = queue[qi];
    const int id = node_of.at(pos);
    const ProductGame::Choice ch = pg.choices[static_cast<size_t>(s.strategy_even.at(pos) - pg.first_choice)];
    nodes[static_cast<size_t>(id)].transition = ch.ti;
    const auto& tr = aut.delta(m.at(ch.vertex).lab().name)[static_cast<size_t>(ch.ti)];
    for (size_t i = 0; i < tr.to.size(); ++i) {
      const int kid = intern(m.at(ch.vertex).succ[i] * Q + tr.to[i]);
      nodes[static_cast<size_t>(id)].next.push_back(kid);
    }
  }
  return RunAnnotation{std::move(m), std::move(nodes)};
}

bool verify_run(const ParityAutomaton& aut, const RunAnnotation& run) {
  const TermGraph& g = run.graph;
  if (g.rank() != 0 || run.nodes.empty()) return false;
  for (int v = 0; v < g.size(); ++v)
    if (!g.at(v).is_port() && !aut.alphabet().contains(g.at(v).lab())) return false;
  if (run.nodes[0].vertex != 0 || run.nodes[0].state != aut.initial()) return false;
  const int N = static_cast<int>(run.nodes.size());
  for (const RunAnnotation::Node& nd : run.nodes) {
    if (nd.vertex < 0 || nd.vertex >= g.size()) return false;
    if (g.at(nd.vertex).is_port()) return false;
    if (nd.state < 0 || nd.state >= aut.state_count()) return false;
    const auto& dl = aut.delta(g.at(nd.vertex).lab().name);
    if (nd.transition < 0 || static_cast<size_t>(nd.transition) >= dl.size()) return false;
    const auto& tr = dl[static_cast<size_t>(nd.transition)];
    if (tr.from != nd.state) return false;
    if (nd.next.size() != tr.to.size()) return false;
    for (size_t i = 0; i < nd.next.size(); ++i) {
      const int k = nd.next[i];
      if (k < 0 || k >= N) return false;
      if (run.nodes[static_cast<size_t>(k)].vertex != g.at(nd.vertex).succ[i]) return false;
      if (run.nodes[static_cast<size_t>(k)].state != tr.to[i]) return false;
    }
  }
  std::vector<std::vector<int>> adj(static_cast<size_t>(N));
  std::vector<int> prio(static_cast<size_t>(N));
  for (int i = 0; i < N; ++i) {
    adj[static_cast<size_t>(i)] = run.nodes[static_cast<size_t>(i)].next;
    prio[static_cast<size_t>(i)] = aut.priority(run.nodes[static_cast<size_t>(i)].state);
  }
  return cycles_avoid_parity(adj, prio, 1);
}

bool membership_exhaustive(const ParityAutomaton& aut, const TermGraph& g) {
  check_member_input(aut, g);
  const int V = g.size(), Q = aut.state_count();
  const int P = V * Q;
  if (P > 64)
    fail(Errc::TooLarge, "product has " + std::to_string(P) + " positions, the oracle bound is 64");

  std::vector<std::vector<int>> options(static_cast<size_t>(P));
  std::vector<int> prio(static_cast<size_t>(P));
  for (int v = 0; v < V; ++v) {
    const auto& dl = aut.delta(g.at(v).lab().name);
    for (int q = 0; q < Q; ++q) {
      prio[static_cast<size_t>(v * Q + q)] = aut.priority(q);
      for (size_t ti = 0; ti < dl.size(); ++ti)
        if (dl[ti].from == q) options[static_cast<size_t>(v * Q + q)].push_back(static_cast<int>(ti));
    }
  }

  std::vector<int> choice(static_cast<size_t>(P), -1);
  const auto succs = [&](int p) {
    const int v = p / Q;
    const auto& tr = aut.delta(g.at(v).lab().name)[static_cast<size_t>(choice[static_cast<size_t>(p)])];
    std::vector<int> out;
    out.reserve(tr.to.size());
    for (size_t i = 0; i < tr.to.size(); ++i)
      out.push_back(g.at(v).succ[i] * Q + tr.to[i]);
    return out;
  };
  const int root = aut.initial();
  // Assigned positions stay reachable further down the search (choices only
  // accumulate), so a wrong-parity cycle among them already refutes every
  // extension of the current partial annotation.
  std::function<bool()> extend = [&]() -> bool {
    std::vector<char> seen(static_cast<size_t>(P), 0);
    std::vector<int> order{root};
    seen[static_cast<size_t>(root)] = 1;
    int open = -1;
    for (size_t qi = 0; qi < order.size(); ++qi) {
      const int p = order[qi];
      if (choice[static_cast<size_t>(p)] < 0) {
        if (options[static_cast<size_t>(p)].empty()) return false;
        if (open < 0) open = p;
        continue;
      }
      for (int s : succs(p))
        if (!seen[static_cast<size_t>(s)]) {
          seen[static_cast<size_t>(s)] = 1;
          order.push_back(s);
        }
    }
    std::vector<std::vector<int>> adj(static_cast<size_t>(P));
    for (int p = 0; p < P; ++p)
      if (choice[static_cast<size_t>(p)] >= 0) adj[static_cast<size_t>(p)] = succs(p);
    if (!cycles_avoid_parity(adj, prio, 1)) return false;
    if (open < 0) return true;
    for (int ti : options[static_cast<size_t>(open)]) {
      choice[static_cast<size_t>(open)] = ti;
      if (extend()) {
        choice[static_cast<size_t>(open)] = -1;
        return true;
      }
      choice[static_cast<size_t>(open)] = -1;
    }
    return false;
  };
  return extend();
}

EmptinessResult is_empty_with_witness(const ParityAutomaton& aut) {
  const int Q = aut.state_count();
  const int win_e = Q, win_o = Q + 1;
  const int first_choice = Q + 2;
  std::vector<GameArena::Vertex> vs(static_cast<size_t>(first_choice));
  vs[static_cast<size_t>(win_e)] = {Player::Odd, 0, {win_e}};
  vs[static_cast<size_t>(win_o)] = {Player::Even, 1, {win_o}};
  for (int q = 0; q < Q; ++q) {
    vs[static_cast<size_t>(q)].owner = Player::Even;
    vs[static_cast<size_t>(q)].priority = aut.priority(q);
  }
  std::vector<std::pair<std::string, int>> choices;  // (letter, delta index)
  for (const auto& [name, dl] : aut.transitions()) {
    const int rank = aut.alphabet().find(name)->rank;
    for (size_t ti = 0; ti < dl.size(); ++ti) {
      const int cpos = first_choice + static_cast<int>(choices.size());
      choices.emplace_back(name, static_cast<int>(ti));
      GameArena::Vertex cv{Player::Odd, 0, {}};
      if (rank == 0)
        cv.edges = {win_e};
      else
        cv.edges = dl[ti].to;
      const int from = dl[ti].from;
      vs.push_back(std::move(cv));
      vs[static_cast<size_t>(from)].edges.push_back(cpos);
    }
  }
  for (int q = 0; q < Q; ++q)
    if (vs[static_cast<size_t>(q)].edges.empty()) vs[static_cast<size_t>(q)].edges = {win_o};

  const Solution s = solve_zielonka(GameArena::adopt(std::move(vs)));
  if (!std::binary_search(s.win_even.begin(), s.win_even.end(), aut.initial()))
    return {true, std::nullopt};

  std::map<int, int> vertex_of;
  std::vector<TermGraph::Vertex> gvs;
  std::vector<int> queue;
  const auto intern = [&](int q) {
    const auto [it, fresh] = vertex_of.emplace(q, static_cast<int>(gvs.size()));
    if (fresh) {
      gvs.push_back({});
      queue.push_back(q);
    }
    return it->second;
  };
  intern(aut.initial());
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    const int q = queue[qi];
    const auto& [lname, ti] = choices[static_cast<size_t>(s.strategy_even.at(q) - first_choice)];
    const auto& tr = aut.delta(lname)[static_cast<size_t>(ti)];
    TermGraph::Vertex gv;
    gv.label = *aut.alphabet().find(lname);
    for (int t2 : tr.to) {
      const int kid = intern(t2);
      gv.succ.push_back(kid);
    }
    gvs[static_cast<size_t>(vertex_of.at(q))] = std::move(gv);
  }
  return {false, TermGraph::adopt(std::move(gvs))};
}

// ============================================================================
// Profiles
// ============================================================================

std::set<std::tuple<int, int, int>> record_set(const Profile& p) {
  std::set<std::tuple<int, int, int>> out;
  for (const PortRecord& r : p.records) out.emplace(r.state, r.max_priority, r.port);
  return out;
}

std::vector<int> port_occurrences(const FiniteTerm& t) {
  std::vector<int> out;
  std::function<void(const FiniteTerm::NodePtr&)> walk = [&](const FiniteTerm::NodePtr& n) {
    if (n->is_port()) {
      out.push_back(n->port());
      return;
    }
    for (const auto& c : n->children()) walk(c);
  };
  walk(t.root());
  return out;
}

namespace {

using Run = std::vector<PortRecord>;
using RunSet = std::set<Run>;

std::vector<Run> cross_runs(const std::vector<Run>& partial, const std::vector<Run>& options) {
  std::vector<Run> next;
  next.reserve(partial.size() * options.size());
  for (const Run& pre : partial)
    for (const Run& opt : options) {
      Run r = pre;
      r.insert(r.end(), opt.begin(), opt.end());
      next.push_back(std::move(r));
    }
  return next;
}

}  // namespace

ProfileSet profiles_finite(const ParityAutomaton& aut, const FiniteTerm& t) {
  for_each_node(t, [&](const FiniteTerm::NodePtr& n) {
    if (!n->is_port() && !aut.alphabet().contains(n->label()))
      fail(Errc::AlphabetMismatch,
           "letter '" + n->label().name + "' is not in the automaton's alphabet");
  });
  std::map<std::pair<const FiniteTerm::Node*, int>, RunSet> memo;
  std::function<const RunSet&(const FiniteTerm::NodePtr&, int)> runs =
      [&](const FiniteTerm::NodePtr& n, int q) -> const RunSet& {
    const auto key = std::make_pair(n.get(), q);
    if (const auto it = memo.find(key); it != memo.end()) return it->second;
    RunSet out;
    if (n->is_port()) {
      out.insert(Run{PortRecord{q, aut.priority(q), n->port()}});
    } else {
      const int prq = aut.priority(q);
      for (const auto& tr : aut.delta(n->label().name)) {
        if (tr.from != q) continue;
        std::vector<Run> partial{Run{}};
        for (size_t i = 0; i < n->children().size() && !partial.empty(); ++i) {
          const RunSet& kid = runs(n->children()[i], tr.to[i]);
          partial = cross_runs(partial, std::vector<Run>(kid.begin(), kid.end()));
        }
        for (Run& r : partial) {
          for (PortRecord& rec : r) rec.max_priority = std::max(rec.max_priority, prq);
          out.insert(std::move(r));
        }
      }
    }
    return memo.emplace(key, std::move(out)).first->second;
  };
  ProfileSet ps;
  for (int q = 0; q < aut.state_count(); ++q)
    for (const Run& r : runs(t.root(), q)) ps.insert(Profile{q, r});
  return ps;
}

ProfileSet profile_product(const Term<ProfiledTerm>& outer) {
  using NT = Term<ProfiledTerm>;
  std::map<const NT::Node*, ProfileSet> memo;
  std::function<const ProfileSet&(const NT::NodePtr&)> compose =
      [&](const NT::NodePtr& n) -> const ProfileSet& {
    if (const auto it = memo.find(n.get()); it != memo.end()) return it->second;
    const ProfiledTerm& lab = n->label();
    const std::vector<int> occ = port_occurrences(lab.term);
    ProfileSet out;
    for (const Profile& phi : lab.profiles) {
      if (phi.records.size() != occ.size())
        fail(Errc::ShapeMismatch, "profile has " + std::to_string(phi.records.size()) +
                                      " records, its term has " + std::to_string(occ.size()) +
                                      " port occurrences");
      std::vector<Run> partial{Run{}};
      for (size_t j = 0; j < occ.size() && !partial.empty(); ++j) {
        const PortRecord& rec = phi.records[j];
        if (rec.port != occ[j])
          fail(Errc::ShapeMismatch, "record " + std::to_string(j) + " names port " +
                                        std::to_string(rec.port) + ", the occurrence there is port " +
                                        std::to_string(occ[j]));
        const auto& child = n->children()[static_cast<size_t>(rec.port - 1)];
        std::vector<Run> options;
        if (child->is_port()) {
          options.push_back(Run{PortRecord{rec.state, rec.max_priority, child->port()}});
        } else {
          for (const Profile& psi : compose(child)) {
            if (psi.root_state != rec.state) continue;
            Run r = psi.records;
            for (PortRecord& rr : r) rr.max_priority = std::max(rr.max_priority, rec.max_priority);
            options.push_back(std::move(r));
          }
        }
        partial = cross_runs(partial, options);
      }
      for (Run& r : partial) out.insert(Profile{phi.root_state, std::move(r)});
    }
    return memo.emplace(n.get(), std::move(out)).first->second;
  };
  return compose(outer.root());
}

}  // namespace oclone
