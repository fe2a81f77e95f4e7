#pragma once

#include <vector>

namespace kemeny {

/// Adjacency-list digraph on vertices 0..n-1.
using Adjacency = std::vector<std::vector<int>>;

struct Condensation {
  std::vector<std::vector<int>> components;  // each sorted ascending
  std::vector<int> component_of;             // vertex -> component index
  std::vector<int> terminal;                 // components with no out-arcs
};

/// Strongly connected components (Tarjan, iterative) and the sinks of the
/// condensation. Components are numbered by their smallest vertex.
Condensation condense(const Adjacency& adj);

}  // namespace kemeny
