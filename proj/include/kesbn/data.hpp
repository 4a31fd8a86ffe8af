#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kesbn/errors.hpp"
#include "kesbn/graph.hpp"
#include "kesbn/rng.hpp"

namespace kesbn {

// A categorical variable: display name, number of states, and (for data read
// from CSV) the original label of each state code. Empty `labels` means the
// codes themselves are the labels.
struct Variable {
    std::string name;
    int cardinality = 0;
    std::vector<std::string> labels;
};

// A complete categorical data table. Values are dense state codes in
// 0..cardinality-1, stored row-major. Immutable after construction.
class Dataset {
public:
    Dataset(std::vector<Variable> variables, std::vector<int> values);

    int var_count() const { return static_cast<int>(variables_.size()); }
    int row_count() const { return rows_; }
    const Variable& variable(int v) const { return variables_.at(v); }
    const std::vector<Variable>& variables() const { return variables_; }
    std::vector<int> cardinalities() const;

    int value(int row, int var) const {
        return values_[static_cast<std::size_t>(row) * variables_.size() + var];
    }
    std::span<const int> row(int r) const {
        return {values_.data() + static_cast<std::size_t>(r) * variables_.size(),
                variables_.size()};
    }

private:
    std::vector<Variable> variables_;
    std::vector<int> values_;
    int rows_ = 0;
};

// CSV ingestion: header row of names, body of category labels. Labels
// (integer-looking or not) are coded by first appearance per column, so a
// given file always produces the same codes. Commas always split; there is no
// quoting. Throws ParseError (ragged row, empty cell), EmptyDataError (no
// header, no columns or no rows), SingleStateError (constant column).
Dataset load_csv(const std::string& path);
void save_csv(const Dataset& d, const std::string& path);
std::string to_csv(const Dataset& d);

// The new dataset keeps the listed columns, in the order given.
Dataset select_columns(const Dataset& d, std::span<const int> cols);

// Sufficient statistics of one family: counts(j,k) = rows with parent
// configuration j and child state k. Parent configurations are mixed-radix
// encoded over the parents in ascending node order, first parent most
// significant.
struct FamilyCounts {
    int r = 0;                       // child cardinality
    std::int64_t q = 1;              // parent configuration count
    std::vector<int> counts;         // q*r, configuration-major
    std::vector<int> config_total;   // per-configuration row totals
    int total = 0;                   // dataset rows
};

FamilyCounts family_counts(const Dataset& d, int child, std::span<const int> parents);

// A parameterized network: structure, cardinalities, and one conditional
// table per node. cpts[x] is row-major over parent configurations (same
// encoding as FamilyCounts) times child states.
struct BayesNet {
    Dag dag{0};
    std::vector<Variable> variables;
    std::vector<std::vector<double>> cpts;

    // Shape and normalization checks (each conditional row sums to 1 within
    // 1e-12). Throws SizeMismatchError / DomainError.
    void validate() const;
};

// Structured-text (JSON) round trip. Field layout:
//   {"schema_version": 1,
//    "variables": [{"name": "A", "states": 2}, ...],
//    "arcs": [[tail, head], ...],
//    "cpts": [[[p, ...r], ...q], ...n]}
// Throws ParseError with a location on malformed input, IoError on I/O.
BayesNet load_bn(const std::string& path);
void save_bn(const BayesNet& bn, const std::string& path);

// A network over `dag` with every conditional row drawn from a flat Dirichlet
// (all entries strictly positive almost surely).
BayesNet random_cpts(const Dag& dag, std::span<const int> cards, Rng& rng);

// n i.i.d. rows sampled ancestrally in causal order. Deterministic per seed.
Dataset forward_sample(const BayesNet& bn, int n, std::uint64_t seed);

// An explicit joint distribution as a dense table, row-major with the first
// variable most significant.
struct JointTable {
    std::vector<Variable> variables;
    std::vector<double> probabilities;

    std::size_t cell_count() const { return probabilities.size(); }
    std::size_t index(std::span<const int> assignment) const;
    // Dense marginal over an ascending subset of variable indices.
    std::vector<double> marginal(std::span<const int> subset) const;
    void validate() const;  // mass 1 within 1e-12, entries >= 0
};

JointTable joint_from_bn(const BayesNet& bn);

// Iterative proportional fitting: starting from the uniform table, cyclically
// rescales to match each clique's target marginal until the largest absolute
// marginal deviation drops below tol. Cliques are strictly ascending index
// subsets and must cover all variables; each target is row-major over its
// clique and sums to 1. Throws ConvergenceError after max_iter sweeps.
JointTable ipf_fit(std::span<const int> cardinalities,
                   const std::vector<std::vector<int>>& cliques,
                   const std::vector<std::vector<double>>& targets,
                   double tol = 1e-10, int max_iter = 100000);

// n i.i.d. rows from an explicit table. Deterministic per seed.
Dataset sample_joint(const JointTable& j, int n, std::uint64_t seed);

// The four-variable cell distribution the trap construction repeats: X with
// four states and binary Y, Z, U, coupled pairwise around the cycle
// X-Y-Z-U-X. The two conditional independencies X _||_ Z | {Y,U} and
// Y _||_ U | {X,Z} hold exactly, and exactly two model classes both include
// the distribution and are minimal with that property: a 19-parameter one
// (the global score optimum at large samples) and a 23-parameter one that
// greedy search tends to return.
JointTable trap_cell_joint();
std::vector<int> trap_cell_cardinalities();   // {4, 2, 2, 2}
Dag trap_cell_sparse_optimum();               // 19 free parameters
Dag trap_cell_dense_optimum();                // 23 free parameters

// `groups` independent copies of the cell distribution side by side
// (variables X0,Y0,Z0,U0,X1,...), `rows` joint samples. The resulting
// landscape has one local optimum per choice of sparse/dense structure in
// each group.
Dataset trap_dataset(int groups, int rows, std::uint64_t seed);

}  // namespace kesbn
