#pragma once

#include <span>
#include <vector>

#include "kesbn/data.hpp"
#include "kesbn/errors.hpp"
#include "kesbn/graph.hpp"
#include "kesbn/score.hpp"

namespace kesbn {

// One Markov equivalence class: its label, every member DAG, and the exact
// inclusion boundary (the classes reachable by a single arc addition or
// removal on any member).
struct ClassInfo {
    Fingerprint fp;
    std::vector<Dag> members;       // enumeration order
    std::vector<Fingerprint> ib;    // sorted, never contains fp
};

// Exhaustive map of all equivalence classes on n nodes (n <= 5; 29281 DAGs,
// built in well under a second). Construction verifies that every class is
// closed under covered-arc reversal. Immutable afterwards.
class ModelAtlas {
public:
    explicit ModelAtlas(int n);

    int node_count() const { return n_; }
    const std::vector<ClassInfo>& classes() const { return classes_; }
    bool contains(const Fingerprint& f) const;
    const ClassInfo& class_of(const Fingerprint& f) const;  // UnknownClassError

private:
    int n_;
    std::vector<ClassInfo> classes_;  // sorted by fingerprint
};

// All labeled DAGs on n nodes in a fixed order (each unordered node pair
// cycles through none / forward arc / backward arc). TooLargeError for n > 5.
std::vector<Dag> enumerate_dags(int n);

inline ModelAtlas enumerate_classes(int n) { return ModelAtlas(n); }

// The exact inclusion boundary of the class labeled f.
const std::vector<Fingerprint>& exact_ib(const ModelAtlas& atlas, const Fingerprint& f);

// Table-level conditional independence: X and Y independent given Z when for
// every z with p(z) > 0, max_{x,y} |p(x,y|z) - p(x|z)p(y|z)| < tol.
bool exact_ci(const JointTable& j, std::span<const int> xs, std::span<const int> ys,
              std::span<const int> zs, double tol);

// Classes that contain the distribution and are minimal with that property:
// no class with a strictly larger independence set (equivalently, a strictly
// smaller model) also contains it. Membership is decided by testing every
// d-separation statement of a representative DAG against the table.
// TooLargeError beyond 4 variables.
std::vector<Fingerprint> inclusion_optimal_models(const JointTable& j, double tol = 1e-9);

struct LocalOptimum {
    Fingerprint fp;
    double score = 0;
    bool strict = false;  // strictly beats every exact-IB neighbor
};

// Classes scoring at least as well as every class in their exact inclusion
// boundary, sorted by fingerprint; the strict ones beat all neighbors
// strictly. SizeMismatchError if atlas and dataset disagree on n.
std::vector<LocalOptimum> local_optima(const ModelAtlas& atlas, const Dataset& d, ScoreKind kind);

}  // namespace kesbn
