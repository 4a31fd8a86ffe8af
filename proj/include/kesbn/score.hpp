#pragma once

#include <cstdint>
#include <span>

#include "kesbn/cache.hpp"
#include "kesbn/data.hpp"
#include "kesbn/errors.hpp"
#include "kesbn/graph.hpp"

namespace kesbn {

// Which decomposable score to use. Both choices are score equivalent
// (equivalent structures score identically) and locally consistent.
struct ScoreKind {
    enum class Family { bic, bdeu };

    Family family = Family::bic;
    double ess = 1.0;  // equivalent sample size, bdeu only

    static ScoreKind bic() { return {Family::bic, 1.0}; }
    static ScoreKind bdeu(double ess = 1.0) {
        if (ess <= 0) throw DomainError("equivalent sample size must be positive");
        return {Family::bdeu, ess};
    }
};

// Maximized log-likelihood of one family minus the dimension penalty
// (q(r-1)/2)·ln N, natural logarithm, with 0·ln 0 = 0. An empty dataset
// (N = 0) scores 0.
double family_score_bic(const FamilyCounts& fc, int total_rows);

// Log marginal likelihood of one family under a Dirichlet prior with uniform
// mass ess spread over the q·r cells.
double family_score_bdeu(const FamilyCounts& fc, double ess);

double family_score(const FamilyCounts& fc, int total_rows, ScoreKind kind);

// Sum of family scores over all nodes, each fetched through the cache. The
// cache must be used with a single (dataset, kind) pair.
double dag_score(const Dag& g, const Dataset& d, ScoreKind kind, ScoreCache& cache);

// Number of free parameters: sum over nodes of (r_X - 1) times the product of
// the parents' cardinalities.
std::int64_t dimension(const Dag& g, std::span<const int> cardinalities);

}  // namespace kesbn
