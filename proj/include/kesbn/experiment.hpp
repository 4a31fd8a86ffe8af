#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kesbn/data.hpp"
#include "kesbn/search.hpp"

namespace kesbn {

// Aggregates of all runs at one k, compared against the single greedy (k=1)
// reference run.
struct KEntry {
    double k = 0;
    double k_star = 0;
    double best = 0;                            // highest final score
    int better = 0;                             // strictly above the reference score
    int worse = 0;                              // strictly below
    int equal = 0;                              // same model or same score
    int better_distinct = 0;                    // distinct models among `better`
    int worse_distinct = 0;
    std::vector<double> sorted_scores;          // all final scores, ascending
    std::vector<Fingerprint> final_fingerprints;  // per run, run order
};

struct ExperimentSummary {
    std::vector<KEntry> entries;  // one per requested k, in request order
    double ges_score = 0;
    Fingerprint ges_fp;
    int runs = 0;
    std::uint64_t base_seed = 0;
    std::string dataset_digest;
};

// FNV-1a over the canonical CSV serialization, as a hex string.
std::string dataset_digest(const Dataset& d);

// `runs` independent searches per k, run i seeded with substream i of the
// base seed (so the same run index sees the same stream at every k), plus one
// greedy reference run on substream 0. Runs execute in parallel when built
// with OpenMP; the summary is identical either way. The KESBN_THREADS
// environment variable caps the worker count.
ExperimentSummary run_experiment(const Dataset& d, std::span<const double> ks, int runs,
                                 const SearchConfig& base);

// Same computation on one thread, kept as the reference the parallel path is
// checked against.
ExperimentSummary run_experiment_serial(const Dataset& d, std::span<const double> ks, int runs,
                                        const SearchConfig& base);

}  // namespace kesbn
