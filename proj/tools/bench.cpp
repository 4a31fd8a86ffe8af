// Compares the parallel experiment runner against the serial reference on a
// moderate workload and checks they produce identical summaries.

#include <chrono>
#include <cstdio>

#include "kesbn/experiment.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool same(const kesbn::ExperimentSummary& a, const kesbn::ExperimentSummary& b) {
    if (a.ges_score != b.ges_score || !(a.ges_fp == b.ges_fp)) return false;
    if (a.entries.size() != b.entries.size()) return false;
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        const auto& x = a.entries[i];
        const auto& y = b.entries[i];
        if (x.sorted_scores != y.sorted_scores || x.final_fingerprints != y.final_fingerprints ||
            x.better != y.better || x.worse != y.worse || x.equal != y.equal)
            return false;
    }
    return true;
}

}  // namespace

int main() {
    const kesbn::Dataset d = kesbn::trap_dataset(2, 5000, 7);
    const double ks[] = {0.0, 0.4};
    const int runs = 40;
    kesbn::SearchConfig cfg;
    cfg.seed = 11;

    std::printf("dataset: %d variables, %d rows; %d runs x %zu k values\n", d.var_count(),
                d.row_count(), runs, std::size(ks));

    auto t0 = Clock::now();
    const auto serial = kesbn::run_experiment_serial(d, ks, runs, cfg);
    const double ts = seconds_since(t0);
    std::printf("serial:   %.2fs\n", ts);

    t0 = Clock::now();
    const auto parallel = kesbn::run_experiment(d, ks, runs, cfg);
    const double tp = seconds_since(t0);
    std::printf("parallel: %.2fs  (speedup %.2fx)\n", tp, ts / tp);

    if (!same(serial, parallel)) {
        std::printf("MISMATCH: parallel summary differs from serial reference\n");
        return 1;
    }
    std::printf("summaries identical\n");
    return 0;
}
