#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kesbn/cache.hpp"
#include "kesbn/data.hpp"
#include "kesbn/errors.hpp"
#include "kesbn/graph.hpp"
#include "kesbn/rng.hpp"
#include "kesbn/score.hpp"

namespace kesbn {

// Knobs of one search run. k interpolates between pure stochastic ascent
// (k = 0: one random neighbor per iteration) and greedy search over the whole
// neighborhood (k = 1); internally k is translated to the oversampling factor
// k* = min(cap, -ln(1-k)), chosen so that drawing k*·|IB| neighbors with
// replacement covers an expected fraction k of the boundary.
struct SearchConfig {
    double k = 0.0;
    double k_star_cap = 20.0;
    std::optional<int> patience;  // consecutive non-improving iterations before stop;
                                  // defaults to 2·n·(n-1)
    int cars_per_draw = 1;        // covered-arc reversals before each draw
    std::uint64_t seed = 0;
    ScoreKind score{};
    std::size_t cache_cap = 0;
};

// Scores and labels of the models accepted along a run, in order.
struct RunTrace {
    std::vector<double> accepted_scores;
    std::vector<Fingerprint> accepted_fingerprints;
};

struct RunResult {
    Dag dag{0};
    double score = 0;
    Fingerprint fp;
    std::int64_t iterations = 0;  // improvement attempts (batches)
    std::int64_t draws = 0;       // neighbors sampled in total
    std::uint64_t cache_hits = 0;
    std::uint64_t cache_misses = 0;
    std::uint64_t seed = 0;
};

// min(cap, -ln(1-k)); 0 at k=0, cap at k=1. DomainError outside [0,1].
double k_star(double k, double cap);

// Size proxy for the inclusion boundary: the n(n-1) arcs addable to the empty
// graph. The true boundary size varies by class; this fixed estimate keeps
// batch sizes predictable.
std::int64_t ib_size_estimate(int n);

// One draw from the inclusion boundary of M(g): apply `cars` random
// covered-arc reversals, then pick uniformly among the ordered node pairs
// admitting a legal move (remove the pair's arc, or add one if the pair is
// non-adjacent and the arc keeps the graph acyclic) and apply it.
// NoMoveError when no pair admits a move (only possible for n < 2).
Dag sample_ib_neighbor(const Dag& g, Rng& rng, int cars);

// One improvement attempt: draw max(1, round(k*·n(n-1))) neighbors, score
// them through the cache, and return the best one scoring strictly above g
// (score ties broken toward the lexicographically smallest fingerprint), or
// nothing if no sampled neighbor improves. Draws are taken from an evolving
// representative: n reversals up front, then cars_per_draw before each draw.
std::optional<Dag> kes_step(const Dag& g, const Dataset& d, const SearchConfig& cfg,
                            ScoreCache& cache, Rng& rng);

// Full run: start from the empty graph, repeat kes_step, stop after
// `patience` consecutive non-improving attempts. Deterministic given
// (dataset, config). The accepted-score sequence is checked to be strictly
// increasing. EmptyDataError on a rowless dataset.
RunResult run_kes(const Dataset& d, const SearchConfig& cfg, RunTrace* trace = nullptr);

}  // namespace kesbn
