#include "kesbn/graph.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

namespace kesbn {

Dag::Dag(int n) : n_(n) {
    if (n < 0) throw DomainError("node count must be nonnegative");
    adj_.assign(static_cast<std::size_t>(n) * n, 0);
    desc_.assign(static_cast<std::size_t>(n) * n, 0);
}

Dag Dag::from_arcs(int n, std::span<const Arc> arcs) {
    Dag g(n);
    for (Arc a : arcs) g = add_arc(g, a);
    return g;
}

Dag Dag::from_arcs(int n, std::initializer_list<Arc> arcs) {
    return from_arcs(n, std::span<const Arc>(arcs.begin(), arcs.size()));
}

void Dag::check_node(int v) const {
    if (v < 0 || v >= n_) throw IndexError("node index out of range");
}

int Dag::arc_count() const {
    int c = 0;
    for (auto b : adj_) c += b;
    return c;
}

std::vector<Arc> Dag::arcs() const {
    std::vector<Arc> out;
    for (int x = 0; x < n_; ++x)
        for (int y = 0; y < n_; ++y)
            if (arc(x, y)) out.push_back({x, y});
    return out;
}

std::vector<int> Dag::parents(int y) const {
    check_node(y);
    std::vector<int> out;
    for (int x = 0; x < n_; ++x)
        if (arc(x, y)) out.push_back(x);
    return out;
}

std::vector<Arc> Dag::covered_arcs() const {
    std::vector<Arc> out;
    for (int x = 0; x < n_; ++x)
        for (int y = 0; y < n_; ++y)
            if (arc(x, y) && is_covered(*this, {x, y})) out.push_back({x, y});
    return out;
}

// Depth-first recomputation of the descendant matrix from the adjacency
// matrix. Used after removals and reversals, where incremental maintenance
// would have to undo closure entries.
void Dag::recompute_closure() {
    std::fill(desc_.begin(), desc_.end(), 0);
    std::vector<int> stack;
    std::vector<std::uint8_t> seen(n_, 0);
    for (int s = 0; s < n_; ++s) {
        std::fill(seen.begin(), seen.end(), 0);
        stack.clear();
        stack.push_back(s);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w = 0; w < n_; ++w) {
                if (arc(v, w) && !seen[w]) {
                    seen[w] = 1;
                    desc_[idx(s, w)] = 1;
                    stack.push_back(w);
                }
            }
        }
    }
}

Dag add_arc(const Dag& g, Arc a) {
    g.check_node(a.tail);
    g.check_node(a.head);
    if (a.tail == a.head) throw DomainError("self loops are not allowed");
    if (g.adjacent(a.tail, a.head)) throw AdjacentError("nodes are already joined by an arc");
    if (g.reaches(a.head, a.tail)) throw CycleError("arc would close a directed cycle");

    Dag out = g;
    out.adj_[out.idx(a.tail, a.head)] = 1;
    // Incremental closure: every node that reaches the tail (and the tail
    // itself) now reaches the head and everything the head reaches.
    for (int u = 0; u < out.n_; ++u) {
        if (u == a.tail || out.reaches(u, a.tail)) {
            out.desc_[out.idx(u, a.head)] = 1;
            for (int w = 0; w < out.n_; ++w)
                if (out.reaches(a.head, w)) out.desc_[out.idx(u, w)] = 1;
        }
    }
    return out;
}

Dag remove_arc(const Dag& g, Arc a) {
    g.check_node(a.tail);
    g.check_node(a.head);
    if (!g.arc(a.tail, a.head)) throw MissingArcError("arc not present");
    Dag out = g;
    out.adj_[out.idx(a.tail, a.head)] = 0;
    out.recompute_closure();
    return out;
}

bool is_covered(const Dag& g, Arc a) {
    if (a.tail < 0 || a.tail >= g.node_count() || a.head < 0 || a.head >= g.node_count())
        throw IndexError("node index out of range");
    if (!g.arc(a.tail, a.head)) throw MissingArcError("arc not present");
    // Pa(head) = Fa(tail): apart from the arc itself, head and tail must have
    // identical parent sets.
    for (int v = 0; v < g.node_count(); ++v) {
        if (v == a.tail) continue;
        if (g.arc(v, a.head) != g.arc(v, a.tail)) return false;
    }
    return true;
}

Dag reverse_covered_arc(const Dag& g, Arc a) {
    if (!is_covered(g, a)) throw NotCoveredError("arc is not covered");
    Dag out = g;
    out.adj_[out.idx(a.tail, a.head)] = 0;
    out.adj_[out.idx(a.head, a.tail)] = 1;
    out.recompute_closure();
    return out;
}

Dag random_car(const Dag& g, Rng& rng) {
    const auto covered = g.covered_arcs();
    if (covered.empty()) return g;
    const Arc pick = covered[rng.uniform_int(covered.size())];
    return reverse_covered_arc(g, pick);
}

std::vector<int> causal_order(const Dag& g) {
    const int n = g.node_count();
    std::vector<int> indeg(n, 0);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (g.arc(x, y)) ++indeg[y];

    std::vector<int> order;
    std::vector<std::uint8_t> placed(n, 0);
    order.reserve(n);
    for (int step = 0; step < n; ++step) {
        int pick = -1;
        for (int v = 0; v < n; ++v) {
            if (!placed[v] && indeg[v] == 0) { pick = v; break; }
        }
        // The type invariant guarantees acyclicity, so a source always exists.
        order.push_back(pick);
        placed[pick] = 1;
        for (int w = 0; w < n; ++w)
            if (g.arc(pick, w)) --indeg[w];
    }
    return order;
}

namespace {

std::vector<std::uint8_t> membership(int n, std::span<const int> vs) {
    std::vector<std::uint8_t> m(n, 0);
    for (int v : vs) {
        if (v < 0 || v >= n) throw IndexError("node index out of range");
        m[v] = 1;
    }
    return m;
}

}  // namespace

bool d_separated(const Dag& g, std::span<const int> xs, std::span<const int> ys,
                 std::span<const int> zs) {
    const int n = g.node_count();
    const auto in_x = membership(n, xs);
    const auto in_y = membership(n, ys);
    const auto in_z = membership(n, zs);
    for (int v = 0; v < n; ++v)
        if (in_x[v] + in_y[v] + in_z[v] > 1)
            throw OverlapError("d-separation arguments must be disjoint");
    if (xs.empty() || ys.empty()) return true;

    // Ball bouncing over states (node, arrived-from). A ball arriving from a
    // child may pass to parents and children unless the node is conditioned
    // on; a ball arriving from a parent passes to children when the node is
    // unconditioned and bounces back to parents when it is (the collider rule;
    // conditioning on descendants is covered by the walk itself).
    enum : int { kFromChild = 0, kFromParent = 1 };
    std::vector<std::array<std::uint8_t, 2>> visited(n, {0, 0});
    std::queue<std::pair<int, int>> frontier;
    for (int x : xs) {
        frontier.push({x, kFromChild});
        visited[x][kFromChild] = 1;
    }

    auto schedule = [&](int v, int dir) {
        if (!visited[v][dir]) {
            visited[v][dir] = 1;
            frontier.push({v, dir});
        }
    };

    while (!frontier.empty()) {
        const auto [v, dir] = frontier.front();
        frontier.pop();
        if (in_y[v]) return false;

        if (dir == kFromChild) {
            if (in_z[v]) continue;
            for (int w = 0; w < n; ++w) {
                if (g.arc(w, v)) schedule(w, kFromChild);
                if (g.arc(v, w)) schedule(w, kFromParent);
            }
        } else {
            if (in_z[v]) {
                for (int w = 0; w < n; ++w)
                    if (g.arc(w, v)) schedule(w, kFromChild);
            } else {
                for (int w = 0; w < n; ++w)
                    if (g.arc(v, w)) schedule(w, kFromParent);
            }
        }
    }
    return true;
}

Fingerprint fingerprint(const Dag& g) {
    Fingerprint fp;
    const int n = g.node_count();
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (g.adjacent(a, b)) fp.skeleton.push_back({a, b});
    for (int c = 0; c < n; ++c) {
        const auto ps = g.parents(c);
        for (std::size_t i = 0; i < ps.size(); ++i)
            for (std::size_t j = i + 1; j < ps.size(); ++j)
                if (!g.adjacent(ps[i], ps[j]))
                    fp.vstructures.push_back({ps[i], c, ps[j]});
    }
    std::sort(fp.vstructures.begin(), fp.vstructures.end());
    return fp;
}

bool same_model(const Dag& g1, const Dag& g2) {
    if (g1.node_count() != g2.node_count())
        throw SizeMismatchError("graphs have different node counts");
    return fingerprint(g1) == fingerprint(g2);
}

std::string to_string(const Fingerprint& fp) {
    std::ostringstream os;
    for (std::size_t i = 0; i < fp.skeleton.size(); ++i) {
        if (i) os << ',';
        os << fp.skeleton[i].first << '-' << fp.skeleton[i].second;
    }
    os << ';';
    for (std::size_t i = 0; i < fp.vstructures.size(); ++i) {
        if (i) os << ',';
        os << fp.vstructures[i][0] << '>' << fp.vstructures[i][1] << '<' << fp.vstructures[i][2];
    }
    return os.str();
}

std::string to_dot(const Dag& g, std::span<const std::string> names) {
    auto name = [&](int v) -> std::string {
        if (v < static_cast<int>(names.size())) return names[v];
        return "v" + std::to_string(v);
    };
    std::ostringstream os;
    os << "digraph g {\n";
    for (int v = 0; v < g.node_count(); ++v)
        os << "  \"" << name(v) << "\";\n";
    for (const Arc a : g.arcs())
        os << "  \"" << name(a.tail) << "\" -> \"" << name(a.head) << "\";\n";
    os << "}\n";
    return os.str();
}

}  // namespace kesbn
