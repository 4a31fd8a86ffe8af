#include "kesbn/experiment.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kesbn {

std::string dataset_digest(const Dataset& d) {
    const std::string csv = to_csv(d);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : csv) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = hex[h & 0xf];
        h >>= 4;
    }
    return out;
}

namespace {

int worker_count() {
#ifdef _OPENMP
    int threads = omp_get_max_threads();
#else
    int threads = 1;
#endif
    if (const char* env = std::getenv("KESBN_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && v < threads) threads = static_cast<int>(v);
    }
    return threads;
}

ExperimentSummary summarize(const Dataset& d, std::span<const double> ks, int runs,
                            const SearchConfig& base, const RunResult& ges,
                            const std::vector<RunResult>& all) {
    ExperimentSummary sum;
    sum.runs = runs;
    sum.base_seed = base.seed;
    sum.dataset_digest = dataset_digest(d);
    sum.ges_score = ges.score;
    sum.ges_fp = ges.fp;

    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
        KEntry e;
        e.k = ks[ki];
        e.k_star = k_star(ks[ki], base.k_star_cap);
        std::set<Fingerprint> better_fps, worse_fps;
        for (int i = 0; i < runs; ++i) {
            const RunResult& r = all[ki * runs + i];
            e.sorted_scores.push_back(r.score);
            e.final_fingerprints.push_back(r.fp);
            if (r.fp == ges.fp || r.score == ges.score) {
                ++e.equal;
            } else if (r.score > ges.score) {
                ++e.better;
                better_fps.insert(r.fp);
            } else {
                ++e.worse;
                worse_fps.insert(r.fp);
            }
        }
        std::sort(e.sorted_scores.begin(), e.sorted_scores.end());
        e.best = e.sorted_scores.back();
        e.better_distinct = static_cast<int>(better_fps.size());
        e.worse_distinct = static_cast<int>(worse_fps.size());
        sum.entries.push_back(std::move(e));
    }
    return sum;
}

ExperimentSummary run_all(const Dataset& d, std::span<const double> ks, int runs,
                          const SearchConfig& base, bool parallel) {
    if (runs < 1) throw DomainError("need at least one run");
    if (ks.empty()) throw DomainError("need at least one k");
    for (double k : ks) k_star(k, base.k_star_cap);  // validate the list up front

    SearchConfig ges_cfg = base;
    ges_cfg.k = 1.0;
    ges_cfg.seed = Rng::substream(base.seed, 0);
    const RunResult ges = run_kes(d, ges_cfg);

    const std::int64_t total = static_cast<std::int64_t>(ks.size()) * runs;
    std::vector<RunResult> all(total);
    auto one = [&](std::int64_t t) {
        SearchConfig cfg = base;
        cfg.k = ks[static_cast<std::size_t>(t / runs)];
        cfg.seed = Rng::substream(base.seed, static_cast<std::uint64_t>(t % runs));
        all[t] = run_kes(d, cfg);
    };

#ifdef _OPENMP
    const int threads = parallel ? worker_count() : 1;
    if (threads > 1) {
        // exceptions may not unwind out of the parallel region
        std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (std::int64_t t = 0; t < total; ++t) {
            try {
                one(t);
            } catch (...) {
#pragma omp critical
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
    } else {
        for (std::int64_t t = 0; t < total; ++t) one(t);
    }
#else
    (void)parallel;
    for (std::int64_t t = 0; t < total; ++t) one(t);
#endif

    return summarize(d, ks, runs, base, ges, all);
}

}  // namespace

ExperimentSummary run_experiment(const Dataset& d, std::span<const double> ks, int runs,
                                 const SearchConfig& base) {
    return run_all(d, ks, runs, base, true);
}

ExperimentSummary run_experiment_serial(const Dataset& d, std::span<const double> ks, int runs,
                                        const SearchConfig& base) {
    return run_all(d, ks, runs, base, false);
}

}  // namespace kesbn
