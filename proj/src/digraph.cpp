#include "kemeny/digraph.hpp"

#include <algorithm>
#include <utility>

namespace kemeny {

Condensation condense(const Adjacency& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> index(n, -1), low(n, 0), raw_comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  std::vector<std::pair<int, std::size_t>> call;  // (vertex, next edge)
  int counter = 0, n_comp = 0;

  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, edge] = call.back();
      if (edge < adj[v].size()) {
        const int w = adj[v][edge++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const int done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          raw_comp[w] = n_comp;
        } while (w != done);
        ++n_comp;
      }
    }
  }

  // renumber components by smallest member
  std::vector<int> first_seen(n_comp, -1);
  int next = 0;
  for (int v = 0; v < n; ++v)
    if (first_seen[raw_comp[v]] < 0) first_seen[raw_comp[v]] = next++;

  Condensation out;
  out.components.resize(n_comp);
  out.component_of.resize(n);
  for (int v = 0; v < n; ++v) {
    out.component_of[v] = first_seen[raw_comp[v]];
    out.components[out.component_of[v]].push_back(v);
  }
  std::vector<bool> has_out(n_comp, false);
  for (int v = 0; v < n; ++v)
    for (int w : adj[v])
      if (out.component_of[v] != out.component_of[w]) has_out[out.component_of[v]] = true;
  for (int c = 0; c < n_comp; ++c)
    if (!has_out[c]) out.terminal.push_back(c);
  return out;
}

}  // namespace kemeny
