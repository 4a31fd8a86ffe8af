#include "kesbn/score.hpp"

#include <cmath>

namespace kesbn {

namespace {

// std::lgamma writes the sign to a process-wide global on common libms;
// the reentrant variant avoids that data race under parallel scoring.
double log_gamma(double x) {
#if defined(__GLIBC__)
    int sign = 0;
    return lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

}  // namespace

double family_score_bic(const FamilyCounts& fc, int total_rows) {
    if (total_rows == 0) return 0.0;
    double ll = 0;
    for (std::int64_t j = 0; j < fc.q; ++j) {
        const int nj = fc.config_total[static_cast<std::size_t>(j)];
        if (nj == 0) continue;
        for (int k = 0; k < fc.r; ++k) {
            const int njk = fc.counts[static_cast<std::size_t>(j) * fc.r + k];
            if (njk > 0) ll += njk * std::log(static_cast<double>(njk) / nj);
        }
    }
    const double penalty =
        0.5 * std::log(static_cast<double>(total_rows)) * static_cast<double>(fc.q) * (fc.r - 1);
    return ll - penalty;
}

double family_score_bdeu(const FamilyCounts& fc, double ess) {
    if (ess <= 0) throw DomainError("equivalent sample size must be positive");
    const double alpha_j = ess / static_cast<double>(fc.q);
    const double alpha_jk = alpha_j / fc.r;
    double s = 0;
    for (std::int64_t j = 0; j < fc.q; ++j) {
        const int nj = fc.config_total[static_cast<std::size_t>(j)];
        if (nj == 0) continue;  // all terms cancel
        s += log_gamma(alpha_j) - log_gamma(alpha_j + nj);
        for (int k = 0; k < fc.r; ++k) {
            const int njk = fc.counts[static_cast<std::size_t>(j) * fc.r + k];
            if (njk > 0) s += log_gamma(alpha_jk + njk) - log_gamma(alpha_jk);
        }
    }
    return s;
}

double family_score(const FamilyCounts& fc, int total_rows, ScoreKind kind) {
    return kind.family == ScoreKind::Family::bic ? family_score_bic(fc, total_rows)
                                                 : family_score_bdeu(fc, kind.ess);
}

double dag_score(const Dag& g, const Dataset& d, ScoreKind kind, ScoreCache& cache) {
    if (g.node_count() != d.var_count())
        throw SizeMismatchError("graph and dataset disagree on variable count");
    double s = 0;
    for (int x = 0; x < g.node_count(); ++x) {
        const std::vector<int> parents = g.parents(x);
        s += cache.get_or_compute(x, parents, [&] {
            return family_score(family_counts(d, x, parents), d.row_count(), kind);
        });
    }
    return s;
}

std::int64_t dimension(const Dag& g, std::span<const int> cardinalities) {
    if (static_cast<int>(cardinalities.size()) != g.node_count())
        throw SizeMismatchError("cardinality list does not match node count");
    std::int64_t dim = 0;
    for (int x = 0; x < g.node_count(); ++x) {
        std::int64_t q = 1;
        for (int p : g.parents(x)) q *= cardinalities[p];
        dim += q * (cardinalities[x] - 1);
    }
    return dim;
}

}  // namespace kesbn
