#include "oclone/graph.hpp"

namespace oclone {

// Iterative Tarjan. Kept iterative so adversarial chains cannot exhaust the
// call stack.
SccInfo scc_of(const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  SccInfo out;
  out.comp.assign(static_cast<size_t>(n), -1);
  out.on_cycle.assign(static_cast<size_t>(n), false);

  std::vector<int> index(static_cast<size_t>(n), -1), low(static_cast<size_t>(n), 0);
  std::vector<bool> on_stack(static_cast<size_t>(n), false);
  std::vector<int> stack;
  int next_index = 0;

  struct Frame {
    int v;
    size_t child;
  };
  std::vector<Frame> frames;

  for (int start = 0; start < n; ++start) {
    if (index[static_cast<size_t>(start)] >= 0) continue;
    frames.push_back({start, 0});
    index[static_cast<size_t>(start)] = low[static_cast<size_t>(start)] = next_index++;
    stack.push_back(start);
    on_stack[static_cast<size_t>(start)] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      int v = f.v;
      if (f.child < adj[static_cast<size_t>(v)].size()) {
        int w = adj[static_cast<size_t>(v)][f.child++];
        if (index[static_cast<size_t>(w)] < 0) {
          index[static_cast<size_t>(w)] = low[static_cast<size_t>(w)] = next_index++;
          stack.push_back(w);
          on_stack[static_cast<size_t>(w)] = true;
          frames.push_back({w, 0});
        } else if (on_stack[static_cast<size_t>(w)]) {
          low[static_cast<size_t>(v)] = std::min(low[static_cast<size_t>(v)], index[static_cast<size_t>(w)]);
        }
        continue;
      }
      if (low[static_cast<size_t>(v)] == index[static_cast<size_t>(v)]) {
        int size = 0;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[static_cast<size_t>(w)] = false;
          out.comp[static_cast<size_t>(w)] = out.count;
          ++size;
        } while (w != v);
        // A component lies on a cycle iff it has more than one vertex or a
        // self-loop.
        if (size > 1) {
          for (int u = 0; u < n; ++u)
            if (out.comp[static_cast<size_t>(u)] == out.count) out.on_cycle[static_cast<size_t>(u)] = true;
        } else {
          for (int s : adj[static_cast<size_t>(v)])
            if (s == v) out.on_cycle[static_cast<size_t>(v)] = true;
        }
        ++out.count;
      }
      frames.pop_back();
      if (!frames.empty()) {
        int p = frames.back().v;
        low[static_cast<size_t>(p)] = std::min(low[static_cast<size_t>(p)], low[static_cast<size_t>(v)]);
      }
    }
  }
  return out;
}

}  // namespace oclone
