#include "kesbn/search.hpp"

#include <cmath>

namespace kesbn {

double k_star(double k, double cap) {
    if (k < 0 || k > 1) throw DomainError("k must lie in [0, 1]");
    if (cap <= 0) throw DomainError("k* cap must be positive");
    if (k == 1) return cap;
    return std::min(cap, -std::log1p(-k));
}

std::int64_t ib_size_estimate(int n) {
    return static_cast<std::int64_t>(n) * (n - 1);
}

namespace {

std::int64_t batch_size(const SearchConfig& cfg, int n) {
    const double raw = k_star(cfg.k, cfg.k_star_cap) * static_cast<double>(ib_size_estimate(n));
    return std::max<std::int64_t>(1, std::llround(raw));
}

// ordered pairs admitting a move on g: arc present -> removable; otherwise
// addable when non-adjacent and acyclic
std::vector<Arc> legal_moves(const Dag& g) {
    std::vector<Arc> moves;
    const int n = g.node_count();
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            if (x == y) continue;
            if (g.arc(x, y) || (!g.adjacent(x, y) && !g.reaches(y, x)))
                moves.push_back({x, y});
        }
    return moves;
}

}  // namespace

Dag sample_ib_neighbor(const Dag& g, Rng& rng, int cars) {
    if (cars < 0) throw DomainError("reversal count must be nonnegative");
    Dag rep = g;
    for (int i = 0; i < cars; ++i) rep = random_car(rep, rng);
    const std::vector<Arc> moves = legal_moves(rep);
    if (moves.empty()) throw NoMoveError("no legal arc change exists");
    const Arc pick = moves[rng.uniform_int(moves.size())];
    return rep.arc(pick.tail, pick.head) ? remove_arc(rep, pick) : add_arc(rep, pick);
}

std::optional<Dag> kes_step(const Dag& g, const Dataset& d, const SearchConfig& cfg,
                            ScoreCache& cache, Rng& rng) {
    const int n = g.node_count();
    if (n < 2) return std::nullopt;
    if (cfg.cars_per_draw < 0) throw DomainError("reversal count must be nonnegative");

    const std::int64_t batch = batch_size(cfg, n);
    const double current = dag_score(g, d, cfg.score, cache);

    Dag rep = g;
    for (int i = 0; i < n; ++i) rep = random_car(rep, rng);

    std::optional<Dag> best;
    double best_score = 0;
    Fingerprint best_fp;
    for (std::int64_t b = 0; b < batch; ++b) {
        for (int i = 0; i < cfg.cars_per_draw; ++i) rep = random_car(rep, rng);
        Dag cand = sample_ib_neighbor(rep, rng, 0);
        const double s = dag_score(cand, d, cfg.score, cache);
        if (s <= current) continue;
        Fingerprint fp = fingerprint(cand);
        if (!best || s > best_score || (s == best_score && fp < best_fp)) {
            best = std::move(cand);
            best_score = s;
            best_fp = std::move(fp);
        }
    }
    return best;
}

RunResult run_kes(const Dataset& d, const SearchConfig& cfg, RunTrace* trace) {
    if (d.row_count() == 0) throw EmptyDataError("cannot learn from a rowless dataset");
    const int n = d.var_count();
    const int patience =
        cfg.patience ? *cfg.patience : static_cast<int>(std::max<std::int64_t>(1, 2 * ib_size_estimate(n)));
    if (patience < 1) throw DomainError("patience must be at least 1");

    Dag g(n);
    ScoreCache cache(cfg.cache_cap);
    Rng rng(cfg.seed);
    double score = dag_score(g, d, cfg.score, cache);

    RunResult res;
    res.seed = cfg.seed;
    const std::int64_t batch = n >= 2 ? batch_size(cfg, n) : 0;

    int since_improvement = 0;
    while (since_improvement < patience) {
        std::optional<Dag> next = kes_step(g, d, cfg, cache, rng);
        ++res.iterations;
        res.draws += batch;
        if (!next) {
            ++since_improvement;
            continue;
        }
        const double next_score = dag_score(*next, d, cfg.score, cache);
        if (!(next_score > score))
            throw Error("accepted model does not improve the score");
        g = std::move(*next);
        score = next_score;
        since_improvement = 0;
        if (trace) {
            trace->accepted_scores.push_back(score);
            trace->accepted_fingerprints.push_back(fingerprint(g));
        }
    }

    res.dag = std::move(g);
    res.score = score;
    res.fp = fingerprint(res.dag);
    res.cache_hits = cache.hits();
    res.cache_misses = cache.misses();
    return res;
}

}  // namespace kesbn
