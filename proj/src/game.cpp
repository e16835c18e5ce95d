#include "oclone/game.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace oclone {

const char* player_name(Player p) { return p == Player::Even ? "even" : "odd"; }

GameArena GameArena::adopt(std::vector<Vertex> vs) {
  const int n = static_cast<int>(vs.size());
  if (n == 0) fail(Errc::Malformed, "arena with no vertices");
  for (int v = 0; v < n; ++v) {
    const Vertex& vx = vs[static_cast<size_t>(v)];
    if (vx.priority < 0)
      fail(Errc::Malformed, "vertex " + std::to_string(v) + " has a negative priority");
    if (vx.edges.empty())
      fail(Errc::Malformed, "vertex " + std::to_string(v) + " is a dead end");
    for (int w : vx.edges)
      if (w < 0 || w >= n)
        fail(Errc::Malformed, "vertex " + std::to_string(v) + " has an edge to " +
                                  std::to_string(w) + ", outside the arena");
  }
  return GameArena(std::move(vs));
}

// ============================================================================
// Cycle analysis
// ============================================================================

namespace {

struct TarjanFrame {
  int v;
  size_t ei;
};

// Tarjan over the subgraph induced by in[v] != 0. comp[v] = -1 outside.
std::vector<int> scc_ids(const std::vector<std::vector<int>>& adj, const std::vector<char>& in,
                         int& ncomp) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> idx(static_cast<size_t>(n), -1), low(static_cast<size_t>(n), 0),
      comp(static_cast<size_t>(n), -1);
  std::vector<char> onstack(static_cast<size_t>(n), 0);
  std::vector<int> stk;
  std::vector<TarjanFrame> frames;
  int next = 0;
  ncomp = 0;
  for (int s = 0; s < n; ++s) {
    if (!in[static_cast<size_t>(s)] || idx[static_cast<size_t>(s)] >= 0) continue;
    idx[static_cast<size_t>(s)] = low[static_cast<size_t>(s)] = next++;
    stk.push_back(s);
    onstack[static_cast<size_t>(s)] = 1;
    frames.push_back({s, 0});
    while (!frames.empty()) {
      TarjanFrame& f = frames.back();
      if (f.ei < adj[static_cast<size_t>(f.v)].size()) {
        const int w = adj[static_cast<size_t>(f.v)][f.ei++];
        if (!in[static_cast<size_t>(w)]) continue;
        if (idx[static_cast<size_t>(w)] < 0) {
          idx[static_cast<size_t>(w)] = low[static_cast<size_t>(w)] = next++;
          stk.push_back(w);
          onstack[static_cast<size_t>(w)] = 1;
          frames.push_back({w, 0});
        } else if (onstack[static_cast<size_t>(w)]) {
          low[static_cast<size_t>(f.v)] =
              std::min(low[static_cast<size_t>(f.v)], idx[static_cast<size_t>(w)]);
        }
      } else {
        const int v = f.v;
        if (low[static_cast<size_t>(v)] == idx[static_cast<size_t>(v)]) {
          for (;;) {
            const int w = stk.back();
            stk.pop_back();
            onstack[static_cast<size_t>(w)] = 0;
            comp[static_cast<size_t>(w)] = ncomp;
            if (w == v) break;
          }
          ++ncomp;
        }
        frames.pop_back();
        if (!frames.empty())
          low[static_cast<size_t>(frames.back().v)] =
              std::min(low[static_cast<size_t>(frames.back().v)], low[static_cast<size_t>(v)]);
      }
    }
  }
  return comp;
}

// Marks (in `out`) every vertex lying on a cycle, within the subgraph induced
// by `in`, whose maximal priority has parity `bad` (0 or 1). Peels priorities
// downward: a nontrivial SCC whose top priority has the bad parity is bad
// throughout (any vertex closes a cycle through a top vertex); otherwise bad
// cycles must avoid the top vertices, so recurse without them.
void mark_wrong_cycles(const std::vector<int>& pr, const std::vector<std::vector<int>>& adj,
                       const std::vector<char>& in, int bad, std::vector<char>& out) {
  const int n = static_cast<int>(pr.size());
  int ncomp = 0;
  const std::vector<int> comp = scc_ids(adj, in, ncomp);
  if (ncomp == 0) return;
  std::vector<int> sz(static_cast<size_t>(ncomp), 0), maxpr(static_cast<size_t>(ncomp), -1);
  std::vector<char> loop(static_cast<size_t>(ncomp), 0);
  for (int v = 0; v < n; ++v) {
    if (!in[static_cast<size_t>(v)]) continue;
    const int c = comp[static_cast<size_t>(v)];
    ++sz[static_cast<size_t>(c)];
    maxpr[static_cast<size_t>(c)] = std::max(maxpr[static_cast<size_t>(c)], pr[static_cast<size_t>(v)]);
    for (int w : adj[static_cast<size_t>(v)])
      if (w == v) loop[static_cast<size_t>(c)] = 1;
  }
  for (int c = 0; c < ncomp; ++c) {
    if (sz[static_cast<size_t>(c)] < 2 && !loop[static_cast<size_t>(c)]) continue;
    const int m = maxpr[static_cast<size_t>(c)];
    if (m % 2 == bad) {
      for (int v = 0; v < n; ++v)
        if (in[static_cast<size_t>(v)] && comp[static_cast<size_t>(v)] == c)
          out[static_cast<size_t>(v)] = 1;
    } else {
      std::vector<char> sub(static_cast<size_t>(n), 0);
      bool any = false;
      for (int v = 0; v < n; ++v)
        if (in[static_cast<size_t>(v)] && comp[static_cast<size_t>(v)] == c &&
            pr[static_cast<size_t>(v)] != m) {
          sub[static_cast<size_t>(v)] = 1;
          any = true;
        }
      if (any) mark_wrong_cycles(pr, adj, sub, bad, out);
    }
  }
}

std::vector<int> priorities_of(const GameArena& a) {
  std::vector<int> pr(static_cast<size_t>(a.size()));
  for (int v = 0; v < a.size(); ++v) pr[static_cast<size_t>(v)] = a.at(v).priority;
  return pr;
}

// Vertices from which `player` loses the one-player game `adj` (the other
// side fixed): those that can reach a cycle whose maximal priority has the
// opponent's parity. Every path in adj is realizable by the free player.
std::vector<char> losing_from(const GameArena& a, const std::vector<std::vector<int>>& adj,
                              Player player) {
  const int n = a.size();
  std::vector<char> all(static_cast<size_t>(n), 1);
  std::vector<char> bad(static_cast<size_t>(n), 0);
  mark_wrong_cycles(priorities_of(a), adj, all, player == Player::Even ? 1 : 0, bad);
  std::vector<std::vector<int>> radj(static_cast<size_t>(n));
  for (int v = 0; v < n; ++v)
    for (int w : adj[static_cast<size_t>(v)]) radj[static_cast<size_t>(w)].push_back(v);
  std::vector<int> queue;
  for (int v = 0; v < n; ++v)
    if (bad[static_cast<size_t>(v)]) queue.push_back(v);
  for (size_t qi = 0; qi < queue.size(); ++qi)
    for (int v : radj[static_cast<size_t>(queue[qi])])
      if (!bad[static_cast<size_t>(v)]) {
        bad[static_cast<size_t>(v)] = 1;
        queue.push_back(v);
      }
  return bad;
}

}  // namespace

// ============================================================================
// Zielonka
// ============================================================================

namespace {

class ZSolver {
 public:
  explicit ZSolver(const GameArena& g) : a_(g), preds_(static_cast<size_t>(g.size())) {
    for (int v = 0; v < a_.size(); ++v)
      for (int w : a_.at(v).edges) preds_[static_cast<size_t>(w)].push_back(v);
  }

  struct Sub {
    std::vector<char> win_even, win_odd;
    Strategy se, so;
  };

  Sub solve(const std::vector<char>& alive, int count) {
    const int n = a_.size();
    Sub out{std::vector<char>(static_cast<size_t>(n), 0),
            std::vector<char>(static_cast<size_t>(n), 0),
            {},
            {}};
    if (count == 0) return out;

    int m = -1;
    for (int v = 0; v < n; ++v)
      if (alive[static_cast<size_t>(v)]) m = std::max(m, a_.at(v).priority);
    const Player p = (m % 2 == 0) ? Player::Even : Player::Odd;

    std::vector<char> target(static_cast<size_t>(n), 0);
    for (int v = 0; v < n; ++v)
      if (alive[static_cast<size_t>(v)] && a_.at(v).priority == m)
        target[static_cast<size_t>(v)] = 1;
    Strategy pull;
    const std::vector<char> A = attract(alive, target, p, pull);

    std::vector<char> rest(static_cast<size_t>(n), 0);
    int rest_count = 0;
    for (int v = 0; v < n; ++v)
      if (alive[static_cast<size_t>(v)] && !A[static_cast<size_t>(v)]) {
        rest[static_cast<size_t>(v)] = 1;
        ++rest_count;
      }
    Sub sub = solve(rest, rest_count);

    std::vector<char>& sub_opp_win = (p == Player::Even) ? sub.win_odd : sub.win_even;
    bool opp_empty = true;
    for (int v = 0; v < n && opp_empty; ++v)
      if (sub_opp_win[static_cast<size_t>(v)]) opp_empty = false;

    if (opp_empty) {
      // p wins all of `alive`: stay via the sub-strategy, fall back into the
      // attractor, and from a top vertex move anywhere alive (the play then
      // either revisits priority m forever or settles in the subgame).
      std::vector<char>& wp = (p == Player::Even) ? out.win_even : out.win_odd;
      Strategy& sp = (p == Player::Even) ? out.se : out.so;
      wp = alive;
      sp = (p == Player::Even) ? std::move(sub.se) : std::move(sub.so);
      for (const auto& kv : pull) sp.insert(kv);
      for (int v = 0; v < n; ++v) {
        if (!target[static_cast<size_t>(v)] || a_.at(v).owner != p) continue;
        for (int w : a_.at(v).edges)
          if (alive[static_cast<size_t>(w)]) {
            sp.emplace(v, w);
            break;
          }
      }
      return out;
    }

    Strategy opp_pull;
    const Player opp = opponent(p);
    const std::vector<char> B = attract(alive, sub_opp_win, opp, opp_pull);
    std::vector<char> rest2(static_cast<size_t>(n), 0);
    int rest2_count = 0;
    for (int v = 0; v < n; ++v)
      if (alive[static_cast<size_t>(v)] && !B[static_cast<size_t>(v)]) {
        rest2[static_cast<size_t>(v)] = 1;
        ++rest2_count;
      }
    Sub sub2 = solve(rest2, rest2_count);

    std::vector<char>& wp2 = (p == Player::Even) ? sub2.win_even : sub2.win_odd;
    std::vector<char>& wo2 = (p == Player::Even) ? sub2.win_odd : sub2.win_even;
    std::vector<char>& out_wp = (p == Player::Even) ? out.win_even : out.win_odd;
    std::vector<char>& out_wo = (p == Player::Even) ? out.win_odd : out.win_even;
    out_wp = std::move(wp2);
    for (int v = 0; v < n; ++v)
      out_wo[static_cast<size_t>(v)] =
          static_cast<char>(wo2[static_cast<size_t>(v)] || B[static_cast<size_t>(v)]);
    Strategy& out_sp = (p == Player::Even) ? out.se : out.so;
    Strategy& out_so = (p == Player::Even) ? out.so : out.se;
    out_sp = (p == Player::Even) ? std::move(sub2.se) : std::move(sub2.so);
    out_so = (p == Player::Even) ? std::move(sub2.so) : std::move(sub2.se);
    const Strategy& sub_so = (p == Player::Even) ? sub.so : sub.se;
    for (const auto& kv : sub_so) out_so.insert(kv);
    for (const auto& kv : opp_pull) out_so.insert(kv);
    return out;
  }

 private:
  // Attractor of `target` for p inside `alive`. Fills `pull` with one edge
  // per p-owned vertex added on the way in (targets excluded: they are
  // handled by the caller).
  std::vector<char> attract(const std::vector<char>& alive, const std::vector<char>& target,
                            Player p, Strategy& pull) {
    const int n = a_.size();
    std::vector<char> inA(static_cast<size_t>(n), 0);
    std::vector<int> pending(static_cast<size_t>(n), 0);
    std::vector<int> queue;
    for (int v = 0; v < n; ++v) {
      if (!alive[static_cast<size_t>(v)]) continue;
      if (target[static_cast<size_t>(v)]) {
        inA[static_cast<size_t>(v)] = 1;
        queue.push_back(v);
      } else if (a_.at(v).owner != p) {
        int cnt = 0;
        for (int w : a_.at(v).edges)
          if (alive[static_cast<size_t>(w)]) ++cnt;
        pending[static_cast<size_t>(v)] = cnt;
      }
    }
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      const int w = queue[qi];
      for (int v : preds_[static_cast<size_t>(w)]) {
        if (!alive[static_cast<size_t>(v)] || inA[static_cast<size_t>(v)]) continue;
        if (a_.at(v).owner == p) {
          inA[static_cast<size_t>(v)] = 1;
          pull.emplace(v, w);
          queue.push_back(v);
        } else if (--pending[static_cast<size_t>(v)] == 0) {
          inA[static_cast<size_t>(v)] = 1;
          queue.push_back(v);
        }
      }
    }
    return inA;
  }

  const GameArena& a_;
  std::vector<std::vector<int>> preds_;
};

Solution assemble(const GameArena& a, const std::vector<char>& we, const std::vector<char>& wo,
                  Strategy se, Strategy so) {
  Solution s;
  for (int v = 0; v < a.size(); ++v) {
    const bool e = we[static_cast<size_t>(v)] != 0, o = wo[static_cast<size_t>(v)] != 0;
    if (e == o) fail(Errc::Malformed, "solver bug: winning regions do not partition the arena");
    (e ? s.win_even : s.win_odd).push_back(v);
  }
  s.strategy_even = std::move(se);
  s.strategy_odd = std::move(so);
  return s;
}

}  // namespace

Solution solve_zielonka(const GameArena& a) {
  ZSolver z(a);
  std::vector<char> alive(static_cast<size_t>(a.size()), 1);
  ZSolver::Sub sub = z.solve(alive, a.size());
  return assemble(a, sub.win_even, sub.win_odd, std::move(sub.se), std::move(sub.so));
}

// ============================================================================
// Brute force
// ============================================================================

namespace {

// Calls f(choice) for every assignment of one edge index per owned vertex.
template <class F>
void for_each_choice(const GameArena& a, const std::vector<int>& owned, F&& f) {
  std::vector<size_t> c(owned.size(), 0);
  for (;;) {
    f(c);
    size_t i = 0;
    while (i < c.size()) {
      if (++c[i] < a.at(owned[i]).edges.size()) break;
      c[i++] = 0;
    }
    if (i == c.size()) break;
  }
}

std::vector<std::vector<int>> induced_graph(const GameArena& a, Player p,
                                            const std::vector<int>& owned,
                                            const std::vector<size_t>& choice) {
  std::vector<std::vector<int>> adj(static_cast<size_t>(a.size()));
  for (int v = 0; v < a.size(); ++v)
    if (a.at(v).owner != p) adj[static_cast<size_t>(v)] = a.at(v).edges;
  for (size_t i = 0; i < owned.size(); ++i)
    adj[static_cast<size_t>(owned[i])] = {
        a.at(owned[i]).edges[choice[i]]};
  return adj;
}

}  // namespace

Solution solve_bruteforce(const GameArena& a) {
  const int n = a.size();
  if (n > 12) fail(Errc::TooLarge, "brute force handles at most 12 vertices");

  std::vector<char> win_even, win_odd;
  Strategy se, so;
  const auto run_player = [&](Player p, std::vector<char>& win, Strategy& strat) {
    std::vector<int> owned;
    for (int v = 0; v < n; ++v)
      if (a.at(v).owner == p) owned.push_back(v);
    win.assign(static_cast<size_t>(n), 0);
    for_each_choice(a, owned, [&](const std::vector<size_t>& c) {
      const std::vector<char> lost = losing_from(a, induced_graph(a, p, owned, c), p);
      for (int v = 0; v < n; ++v)
        if (!lost[static_cast<size_t>(v)]) win[static_cast<size_t>(v)] = 1;
    });
    // Memoryless determinacy: some single choice wins everywhere the union
    // does; keep the first such witness.
    bool found = false;
    for_each_choice(a, owned, [&](const std::vector<size_t>& c) {
      if (found) return;
      const std::vector<char> lost = losing_from(a, induced_graph(a, p, owned, c), p);
      for (int v = 0; v < n; ++v)
        if (win[static_cast<size_t>(v)] && lost[static_cast<size_t>(v)]) return;
      found = true;
      for (size_t i = 0; i < owned.size(); ++i)
        if (win[static_cast<size_t>(owned[i])])
          strat.emplace(owned[i], a.at(owned[i]).edges[c[i]]);
    });
    if (!found) fail(Errc::Malformed, "solver bug: no uniform winning strategy found");
  };
  run_player(Player::Even, win_even, se);
  run_player(Player::Odd, win_odd, so);
  return assemble(a, win_even, win_odd, std::move(se), std::move(so));
}

// ============================================================================
// Verification
// ============================================================================

bool verify_strategy(const GameArena& a, Player player, const Strategy& strategy) {
  const int n = a.size();
  for (const auto& [v, w] : strategy) {
    if (v < 0 || v >= n) fail(Errc::Malformed, "strategy names a vertex outside the arena");
    if (a.at(v).owner != player)
      fail(Errc::Malformed,
           "strategy has an entry on vertex " + std::to_string(v) + ", which the player does not own");
    const auto& es = a.at(v).edges;
    if (std::find(es.begin(), es.end(), w) == es.end())
      fail(Errc::Malformed, "strategy moves " + std::to_string(v) + " -> " + std::to_string(w) +
                                " along a missing edge");
  }

  std::vector<char> in(static_cast<size_t>(n), 0);
  std::vector<int> queue;
  const auto push = [&](int v) {
    if (!in[static_cast<size_t>(v)]) {
      in[static_cast<size_t>(v)] = 1;
      queue.push_back(v);
    }
  };
  for (const auto& kv : strategy) push(kv.first);
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    const int v = queue[qi];
    if (a.at(v).owner == player) {
      const auto it = strategy.find(v);
      if (it == strategy.end())
        fail(Errc::PartialStrategy,
             "the play can reach vertex " + std::to_string(v) + ", which the strategy does not cover");
      push(it->second);
    } else {
      for (int w : a.at(v).edges) push(w);
    }
  }

  std::vector<std::vector<int>> adj(static_cast<size_t>(n));
  for (int v = 0; v < n; ++v) {
    if (!in[static_cast<size_t>(v)]) continue;
    if (a.at(v).owner == player)
      adj[static_cast<size_t>(v)] = {strategy.at(v)};
    else
      adj[static_cast<size_t>(v)] = a.at(v).edges;
  }
  std::vector<char> bad(static_cast<size_t>(n), 0);
  mark_wrong_cycles(priorities_of(a), adj, in, player == Player::Even ? 1 : 0, bad);
  for (int v = 0; v < n; ++v)
    if (bad[static_cast<size_t>(v)]) return false;
  return true;
}

bool verify_solution(const GameArena& a, const Solution& s) {
  const int n = a.size();
  std::vector<int> side(static_cast<size_t>(n), -1);
  const auto place = [&](const std::vector<int>& vs, int tag) {
    for (int v : vs) {
      if (v < 0 || v >= n || side[static_cast<size_t>(v)] != -1) return false;
      side[static_cast<size_t>(v)] = tag;
    }
    return true;
  };
  if (!place(s.win_even, 0) || !place(s.win_odd, 1)) return false;
  for (int v = 0; v < n; ++v)
    if (side[static_cast<size_t>(v)] == -1) return false;

  const auto check_region = [&](Player p, const Strategy& strat, int tag) {
    size_t owned_in_region = 0;
    for (int v = 0; v < n; ++v)
      if (side[static_cast<size_t>(v)] == tag && a.at(v).owner == p) ++owned_in_region;
    if (strat.size() != owned_in_region) return false;
    for (const auto& [v, w] : strat) {
      if (v < 0 || v >= n || side[static_cast<size_t>(v)] != tag || a.at(v).owner != p)
        return false;
      const auto& es = a.at(v).edges;
      if (std::find(es.begin(), es.end(), w) == es.end()) return false;
      if (side[static_cast<size_t>(w)] != tag) return false;
    }
    std::vector<char> in(static_cast<size_t>(n), 0);
    std::vector<std::vector<int>> adj(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v) {
      if (side[static_cast<size_t>(v)] != tag) continue;
      in[static_cast<size_t>(v)] = 1;
      if (a.at(v).owner == p) {
        adj[static_cast<size_t>(v)] = {strat.at(v)};
      } else {
        // The opponent must be unable to leave the region.
        for (int w : a.at(v).edges)
          if (side[static_cast<size_t>(w)] != tag) return false;
        adj[static_cast<size_t>(v)] = a.at(v).edges;
      }
    }
    std::vector<char> bad(static_cast<size_t>(n), 0);
    mark_wrong_cycles(priorities_of(a), adj, in, p == Player::Even ? 1 : 0, bad);
    for (int v = 0; v < n; ++v)
      if (bad[static_cast<size_t>(v)]) return false;
    return true;
  };
  return check_region(Player::Even, s.strategy_even, 0) &&
         check_region(Player::Odd, s.strategy_odd, 1);
}

bool cycles_avoid_parity(const std::vector<std::vector<int>>& adj,
                         const std::vector<int>& priority, int bad) {
  if (adj.size() != priority.size())
    fail(Errc::Malformed, "adjacency and priority lists disagree on the vertex count");
  const size_t n = adj.size();
  for (const auto& row : adj)
    for (int w : row)
      if (w < 0 || static_cast<size_t>(w) >= n)
        fail(Errc::Malformed, "edge target out of range");
  std::vector<char> in(n, 1), out(n, 0);
  mark_wrong_cycles(priority, adj, in, bad, out);
  for (size_t v = 0; v < n; ++v)
    if (out[v]) return false;
  return true;
}

// ============================================================================
// pgsolver text
// ============================================================================

namespace {

struct Stmt {
  int line = 1;
  std::vector<std::string> tokens;
};

bool digits_only(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

int parse_nat(const Stmt& st, const std::string& tok, const char* what) {
  if (!digits_only(tok) || tok.size() > 9)
    fail(Errc::ParseError,
         "line " + std::to_string(st.line) + ": expected " + std::string(what) + ", got '" + tok + "'");
  return std::stoi(tok);
}

}  // namespace

GameArena pg_read(const std::string& text) {
  std::vector<Stmt> stmts;
  Stmt cur;
  std::string tok;
  int line = 1;
  bool any = false;
  const auto flush_tok = [&]() {
    if (!tok.empty()) {
      if (!any) {
        cur.line = line;
        any = true;
      }
      cur.tokens.push_back(tok);
      tok.clear();
    }
  };
  for (char c : text) {
    if (c == ';') {
      flush_tok();
      if (!any) fail(Errc::ParseError, "line " + std::to_string(line) + ": empty statement");
      stmts.push_back(std::move(cur));
      cur = Stmt{};
      any = false;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      flush_tok();
      if (c == '\n') ++line;
    } else {
      if (tok.empty() && !any) cur.line = line;
      tok.push_back(c);
      if (!any) any = true;
    }
  }
  flush_tok();
  if (any) fail(Errc::ParseError, "line " + std::to_string(cur.line) + ": statement without ';'");
  if (stmts.empty()) fail(Errc::ParseError, "line 1: missing 'parity <maxid>;' header");

  const Stmt& head = stmts[0];
  if (head.tokens.size() != 2 || head.tokens[0] != "parity")
    fail(Errc::ParseError, "line " + std::to_string(head.line) + ": expected 'parity <maxid>;'");
  const int maxid = parse_nat(head, head.tokens[1], "the highest vertex id");
  const int n = maxid + 1;

  std::vector<GameArena::Vertex> vs(static_cast<size_t>(n));
  std::vector<char> seen(static_cast<size_t>(n), 0);
  for (size_t si = 1; si < stmts.size(); ++si) {
    const Stmt& st = stmts[si];
    const auto err = [&](const std::string& msg) {
      fail(Errc::ParseError, "line " + std::to_string(st.line) + ": " + msg);
    };
    if (st.tokens.size() < 3) err("expected '<id> <priority> <owner> <succ,...>'");
    const int id = parse_nat(st, st.tokens[0], "a vertex id");
    if (id > maxid) err("vertex id " + std::to_string(id) + " exceeds the declared maximum");
    if (seen[static_cast<size_t>(id)]) err("vertex " + std::to_string(id) + " defined twice");
    seen[static_cast<size_t>(id)] = 1;
    GameArena::Vertex& vx = vs[static_cast<size_t>(id)];
    vx.priority = parse_nat(st, st.tokens[1], "a priority");
    const int owner = parse_nat(st, st.tokens[2], "an owner (0 or 1)");
    if (owner != 0 && owner != 1) err("owner must be 0 (even) or 1 (odd)");
    vx.owner = owner == 0 ? Player::Even : Player::Odd;
    if (st.tokens.size() < 4) err("missing successor list");
    const std::string& succ = st.tokens[3];
    std::string part;
    std::istringstream ss(succ);
    while (std::getline(ss, part, ',')) {
      const int w = parse_nat(st, part, "a successor id");
      if (w > maxid) err("successor " + std::to_string(w) + " exceeds the declared maximum");
      vx.edges.push_back(w);
    }
    if (vx.edges.empty() || succ.back() == ',') err("malformed successor list '" + succ + "'");
    if (st.tokens.size() > 4) {
      // Optional quoted name; accepted and dropped.
      const std::string& first = st.tokens[4];
      const std::string& last = st.tokens.back();
      if (first.front() != '"' || last.back() != '"') err("unexpected tokens after the successors");
    }
  }
  for (int v = 0; v < n; ++v)
    if (!seen[static_cast<size_t>(v)])
      fail(Errc::ParseError,
           "line " + std::to_string(head.line) + ": vertex " + std::to_string(v) + " never defined");
  return GameArena::adopt(std::move(vs));
}

std::string pg_write(const GameArena& a) {
  std::ostringstream out;
  out << "parity " << a.size() - 1 << ";\n";
  for (int v = 0; v < a.size(); ++v) {
    const GameArena::Vertex& vx = a.at(v);
    out << v << ' ' << vx.priority << ' ' << (vx.owner == Player::Even ? 0 : 1) << ' ';
    for (size_t i = 0; i < vx.edges.size(); ++i) {
      if (i) out << ',';
      out << vx.edges[i];
    }
    out << ";\n";
  }
  return out.str();
}

}  // namespace oclone
