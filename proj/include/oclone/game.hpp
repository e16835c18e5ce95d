#pragma once

#include <map>
#include <string>
#include <vector>

#include "oclone/error.hpp"

namespace oclone {

enum class Player { Even, Odd };

inline Player opponent(Player p) { return p == Player::Even ? Player::Odd : Player::Even; }

const char* player_name(Player p);

// ============================================================================
// GameArena: a finite parity game. Every vertex has at least one outgoing
// edge, so plays never get stuck. The objective is max-parity: a play is won
// by Even iff the maximal priority seen infinitely often is even.
// ============================================================================

class GameArena {
 public:
  struct Vertex {
    Player owner = Player::Even;
    int priority = 0;
    std::vector<int> edges;

    friend bool operator==(const Vertex& x, const Vertex& y) {
      return x.owner == y.owner && x.priority == y.priority && x.edges == y.edges;
    }
  };

  // Validates: at least one vertex, every vertex has >= 1 edge, edge targets
  // in range, priorities >= 0.
  static GameArena adopt(std::vector<Vertex> vs);

  int size() const { return static_cast<int>(vs_.size()); }
  const Vertex& at(int v) const { return vs_[static_cast<size_t>(v)]; }

  friend bool operator==(const GameArena& x, const GameArena& y) { return x.vs_ == y.vs_; }
  friend bool operator!=(const GameArena& x, const GameArena& y) { return !(x == y); }

 private:
  explicit GameArena(std::vector<Vertex> vs) : vs_(std::move(vs)) {}
  std::vector<Vertex> vs_;
};

// Memoryless strategy: owned vertex -> chosen successor.
using Strategy = std::map<int, int>;

// win_even / win_odd partition the vertices; each strategy is defined exactly
// on the player-owned vertices of that player's winning region and never
// leaves it.
struct Solution {
  std::vector<int> win_even;
  std::vector<int> win_odd;
  Strategy strategy_even;
  Strategy strategy_odd;
};

// Exact winning regions with memoryless witness strategies, by the recursive
// attractor decomposition. Linear-space; recursion depth bounded by the
// number of distinct priorities.
Solution solve_zielonka(const GameArena& a);

// Oracle: enumerates every memoryless strategy of each player in turn and
// keeps the vertices from which all reachable cycles of the induced graph
// have the right parity. At most 12 vertices (TooLarge beyond that).
Solution solve_bruteforce(const GameArena& a);

// Checks that `strategy` wins for `player` on its own claimed region: the
// closure of the strategy's domain under strategy moves (player's vertices)
// and all moves (opponent's vertices). True iff every cycle in that closure
// has its maximal priority of the player's parity. PartialStrategy if the
// closure reaches a player vertex the strategy does not cover; Malformed if
// an entry names a foreign vertex or a non-edge.
bool verify_strategy(const GameArena& a, Player player, const Strategy& strategy);

// Full check of a claimed solution: the regions partition the arena, each
// strategy is total on its owned region, stays inside it, the opponent
// cannot leave it, and all cycles have the right parity.
bool verify_solution(const GameArena& a, const Solution& s);

// True iff no cycle of the graph has a maximal priority of parity `bad`
// (0 or 1). adj and priority are indexed by vertex.
bool cycles_avoid_parity(const std::vector<std::vector<int>>& adj,
                         const std::vector<int>& priority, int bad);

// pgsolver text format. Header `parity <maxid>;`, then one statement per
// vertex: `<id> <priority> <owner> <succ,succ,...> ["name"];` with owner 0
// for Even. pg_write never emits names; pg_read accepts and drops them.
// Vertex ids must cover 0..maxid exactly (any order).
GameArena pg_read(const std::string& text);
std::string pg_write(const GameArena& a);

}  // namespace oclone
