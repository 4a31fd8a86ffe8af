#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kesbn/errors.hpp"
#include "kesbn/rng.hpp"

namespace kesbn {

// A directed arc tail -> head between node indices.
struct Arc {
    int tail = 0;
    int head = 0;

    friend bool operator==(const Arc&, const Arc&) = default;
    friend auto operator<=>(const Arc&, const Arc&) = default;
};

// Canonical label of a Markov equivalence class: the skeleton (unordered
// adjacencies) plus the set of v-structures a -> c <- b with a, b
// non-adjacent. Two DAGs induce the same distribution family exactly when
// these agree, so Fingerprint equality is model equality and the total order
// below gives a deterministic tie-break among models.
struct Fingerprint {
    std::vector<std::pair<int, int>> skeleton;       // (a, b) with a < b, sorted
    std::vector<std::array<int, 3>> vstructures;     // {a, c, b} with a < b, sorted

    friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
    friend auto operator<=>(const Fingerprint&, const Fingerprint&) = default;
};

// Short printable form, e.g. "0-1,1-2;0>1<2" (skeleton;vstructures).
std::string to_string(const Fingerprint& fp);

// Directed acyclic graph over nodes 0..n-1.
//
// Alongside the adjacency matrix the graph carries its descendant matrix
// (transitive closure over paths of length >= 1), which makes the acyclicity
// check for an arc addition a single lookup. Instances are immutable: the
// editing operations below return new values, so graphs can be shared across
// threads freely.
class Dag {
public:
    explicit Dag(int n);

    // Builds a DAG by adding the given arcs in order; throws like add_arc.
    static Dag from_arcs(int n, std::span<const Arc> arcs);
    static Dag from_arcs(int n, std::initializer_list<Arc> arcs);

    int node_count() const { return n_; }
    bool arc(int x, int y) const { return adj_[idx(x, y)] != 0; }
    bool adjacent(int x, int y) const { return arc(x, y) || arc(y, x); }
    // True iff y is reachable from x by a directed path of length >= 1.
    bool reaches(int x, int y) const { return desc_[idx(x, y)] != 0; }

    int arc_count() const;
    std::vector<Arc> arcs() const;                 // lexicographic order
    std::vector<int> parents(int y) const;         // ascending
    std::vector<Arc> covered_arcs() const;         // lexicographic order

    friend bool operator==(const Dag&, const Dag&) = default;

    friend Dag add_arc(const Dag& g, Arc a);
    friend Dag remove_arc(const Dag& g, Arc a);
    friend Dag reverse_covered_arc(const Dag& g, Arc a);

private:
    std::size_t idx(int x, int y) const { return static_cast<std::size_t>(x) * n_ + y; }
    void check_node(int v) const;
    void recompute_closure();

    int n_;
    std::vector<std::uint8_t> adj_;    // adj_[x*n+y] <=> arc x -> y
    std::vector<std::uint8_t> desc_;   // desc_[x*n+y] <=> directed path x ~> y
};

// Adds arc a. Throws AdjacentError if the pair is already joined either way,
// CycleError if the addition would close a directed cycle.
Dag add_arc(const Dag& g, Arc a);

// Removes arc a. Throws MissingArcError if absent.
Dag remove_arc(const Dag& g, Arc a);

// True iff a is present and Pa(head) = {tail} u Pa(tail).
bool is_covered(const Dag& g, Arc a);

// Reverses a covered arc; the result represents the same model (equal
// fingerprint) and is acyclic by construction. Throws NotCoveredError.
Dag reverse_covered_arc(const Dag& g, Arc a);

// Reverses one covered arc chosen uniformly at random, or returns g unchanged
// when no arc is covered. Never changes the fingerprint.
Dag random_car(const Dag& g, Rng& rng);

// A topological order of g: tails precede heads. Deterministic
// (smallest-index-first among the available nodes).
std::vector<int> causal_order(const Dag& g);

// Classic d-separation of node sets X and Y given Z, decided by the
// ball-bouncing reachability procedure. X and Y empty are trivially
// separated; overlapping sets raise OverlapError.
bool d_separated(const Dag& g, std::span<const int> xs, std::span<const int> ys,
                 std::span<const int> zs);

Fingerprint fingerprint(const Dag& g);

// Whether g1 and g2 represent the same model. Throws SizeMismatchError when
// node counts differ.
bool same_model(const Dag& g1, const Dag& g2);

// GraphViz rendering for debugging. `names` may be empty (indices are used).
std::string to_dot(const Dag& g, std::span<const std::string> names = {});

}  // namespace kesbn
