#pragma once

#include <vector>

namespace eq {

using Adj = std::vector<std::vector<int>>;
using Mask = std::vector<char>;

Adj adjacency_of(int n, const std::vector<std::pair<int, int>>& edges);

// vertices reachable from `from` inside `allowed` (all if empty)
Mask reachable(const Adj& adj, const std::vector<int>& from, const Mask& allowed = {});
Mask reachable(const Adj& adj, int from, const Mask& allowed = {});

// Strongly connected components of the subgraph induced by `allowed`.
// comp[v] = -1 outside `allowed`; components numbered in reverse topological order.
std::vector<int> scc(const Adj& adj, const Mask& allowed, int& count);

// vertex sets of the SCCs of G[allowed] that contain a cycle
std::vector<std::vector<int>> nontrivial_sccs(const Adj& adj, const Mask& allowed);

Mask full_mask(int n);
int count(const Mask& m);

}
