#pragma once

// Shared test utilities. The reachability check here is deliberately naive
// (repeated DFS over the arc list) so it can serve as a cross-check for the
// incrementally maintained descendant matrix in Dag.

#include <vector>

#include "kesbn/graph.hpp"
#include "kesbn/rng.hpp"

namespace kesbn::test {

inline bool reaches_naive(const Dag& g, int from, int to) {
    std::vector<std::uint8_t> seen(g.node_count(), 0);
    std::vector<int> stack{from};
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w = 0; w < g.node_count(); ++w) {
            if (g.arc(v, w) && !seen[w]) {
                if (w == to) return true;
                seen[w] = 1;
                stack.push_back(w);
            }
        }
    }
    return false;
}

// A random DAG built by attempting `tries` arc insertions between random
// ordered pairs, skipping the ones that are illegal.
inline Dag random_dag(int n, int tries, Rng& rng) {
    Dag g(n);
    for (int t = 0; t < tries; ++t) {
        const int x = static_cast<int>(rng.uniform_int(n));
        const int y = static_cast<int>(rng.uniform_int(n));
        if (x == y || g.adjacent(x, y) || g.reaches(y, x)) continue;
        g = add_arc(g, {x, y});
    }
    return g;
}

}  // namespace kesbn::test
