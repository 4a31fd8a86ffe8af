#include "kesbn/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace kesbn {

std::vector<Dag> enumerate_dags(int n) {
    if (n < 0) throw DomainError("node count must be nonnegative");
    if (n > 5) throw TooLargeError("exhaustive enumeration capped at 5 nodes");

    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) pairs.push_back({a, b});
    const int m = static_cast<int>(pairs.size());

    std::vector<Dag> out;
    std::vector<int> state(m, 0);  // 0 none, 1 a->b, 2 b->a
    // odometer over 3^m pair states; the acyclicity filter keeps DAGs only
    while (true) {
        Dag g(n);
        bool ok = true;
        for (int i = 0; i < m && ok; ++i) {
            if (state[i] == 0) continue;
            const Arc a = state[i] == 1 ? Arc{pairs[i].first, pairs[i].second}
                                        : Arc{pairs[i].second, pairs[i].first};
            if (g.reaches(a.head, a.tail)) {
                ok = false;
            } else {
                g = add_arc(g, a);
            }
        }
        if (ok) out.push_back(std::move(g));

        int pos = m - 1;
        while (pos >= 0 && state[pos] == 2) state[pos--] = 0;
        if (pos < 0) break;
        ++state[pos];
    }
    return out;
}

ModelAtlas::ModelAtlas(int n) : n_(n) {
    std::map<Fingerprint, std::vector<Dag>> groups;
    for (Dag& g : enumerate_dags(n)) groups[fingerprint(g)].push_back(std::move(g));

    // closure check: covered-arc reversal may never leave the class
    for (const auto& [fp, members] : groups)
        for (const Dag& g : members)
            for (const Arc a : g.covered_arcs())
                if (fingerprint(reverse_covered_arc(g, a)) != fp)
                    throw Error("equivalence class not closed under covered-arc reversal");

    classes_.reserve(groups.size());
    for (auto& [fp, members] : groups) {
        ClassInfo info;
        info.fp = fp;
        info.members = std::move(members);
        classes_.push_back(std::move(info));
    }

    for (ClassInfo& info : classes_) {
        std::set<Fingerprint> ib;
        for (const Dag& g : info.members) {
            for (const Arc a : g.arcs()) ib.insert(fingerprint(remove_arc(g, a)));
            for (int x = 0; x < n_; ++x)
                for (int y = 0; y < n_; ++y)
                    if (x != y && !g.adjacent(x, y) && !g.reaches(y, x))
                        ib.insert(fingerprint(add_arc(g, {x, y})));
        }
        ib.erase(info.fp);
        info.ib.assign(ib.begin(), ib.end());
    }
}

bool ModelAtlas::contains(const Fingerprint& f) const {
    const auto it = std::lower_bound(classes_.begin(), classes_.end(), f,
                                     [](const ClassInfo& c, const Fingerprint& x) { return c.fp < x; });
    return it != classes_.end() && it->fp == f;
}

const ClassInfo& ModelAtlas::class_of(const Fingerprint& f) const {
    const auto it = std::lower_bound(classes_.begin(), classes_.end(), f,
                                     [](const ClassInfo& c, const Fingerprint& x) { return c.fp < x; });
    if (it == classes_.end() || !(it->fp == f)) throw UnknownClassError("no such class: " + to_string(f));
    return *it;
}

const std::vector<Fingerprint>& exact_ib(const ModelAtlas& atlas, const Fingerprint& f) {
    return atlas.class_of(f).ib;
}

bool exact_ci(const JointTable& j, std::span<const int> xs, std::span<const int> ys,
              std::span<const int> zs, double tol) {
    const int n = static_cast<int>(j.variables.size());
    std::vector<int> role(n, -1);  // 0 x, 1 y, 2 z
    auto mark = [&](std::span<const int> vs, int r) {
        for (int v : vs) {
            if (v < 0 || v >= n) throw IndexError("variable index out of range");
            if (role[v] != -1) throw OverlapError("conditional independence sets must be disjoint");
            role[v] = r;
        }
    };
    mark(xs, 0);
    mark(ys, 1);
    mark(zs, 2);
    if (xs.empty() || ys.empty()) return true;

    std::vector<int> u;  // ascending union
    for (int v = 0; v < n; ++v)
        if (role[v] != -1) u.push_back(v);
    const std::vector<double> m = j.marginal(u);

    // radix of each union variable inside the x / y / z sub-index
    std::size_t xc = 1, yc = 1, zc = 1;
    for (int v : u) {
        const std::size_t card = j.variables[v].cardinality;
        if (role[v] == 0) xc *= card;
        else if (role[v] == 1) yc *= card;
        else zc *= card;
    }

    std::vector<double> pxyz(xc * yc * zc, 0.0);
    {
        std::vector<int> assign(u.size(), 0);
        for (std::size_t cell = 0; cell < m.size(); ++cell) {
            std::size_t rest = cell;
            for (int i = static_cast<int>(u.size()) - 1; i >= 0; --i) {
                assign[i] = static_cast<int>(rest % j.variables[u[i]].cardinality);
                rest /= j.variables[u[i]].cardinality;
            }
            std::size_t xi = 0, yi = 0, zi = 0;
            for (std::size_t i = 0; i < u.size(); ++i) {
                const std::size_t card = j.variables[u[i]].cardinality;
                if (role[u[i]] == 0) xi = xi * card + assign[i];
                else if (role[u[i]] == 1) yi = yi * card + assign[i];
                else zi = zi * card + assign[i];
            }
            pxyz[(zi * xc + xi) * yc + yi] += m[cell];
        }
    }

    std::vector<double> px(xc), py(yc);
    for (std::size_t zi = 0; zi < zc; ++zi) {
        double pz = 0;
        std::fill(px.begin(), px.end(), 0.0);
        std::fill(py.begin(), py.end(), 0.0);
        for (std::size_t xi = 0; xi < xc; ++xi)
            for (std::size_t yi = 0; yi < yc; ++yi) {
                const double p = pxyz[(zi * xc + xi) * yc + yi];
                pz += p;
                px[xi] += p;
                py[yi] += p;
            }
        if (pz <= 0) continue;
        for (std::size_t xi = 0; xi < xc; ++xi)
            for (std::size_t yi = 0; yi < yc; ++yi) {
                const double lhs = pxyz[(zi * xc + xi) * yc + yi] / pz;
                const double rhs = (px[xi] / pz) * (py[yi] / pz);
                if (std::abs(lhs - rhs) >= tol) return false;
            }
    }
    return true;
}

namespace {

struct Triple {
    int x, y;
    std::vector<int> z;
};

// every (x, y, Z) with x < y singletons and Z ranging over subsets of the rest
std::vector<Triple> canonical_triples(int n) {
    std::vector<Triple> out;
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y) {
            std::vector<int> rest;
            for (int v = 0; v < n; ++v)
                if (v != x && v != y) rest.push_back(v);
            for (unsigned mask = 0; mask < (1u << rest.size()); ++mask) {
                Triple t{x, y, {}};
                for (std::size_t i = 0; i < rest.size(); ++i)
                    if (mask & (1u << i)) t.z.push_back(rest[i]);
                out.push_back(std::move(t));
            }
        }
    return out;
}

}  // namespace

std::vector<Fingerprint> inclusion_optimal_models(const JointTable& j, double tol) {
    j.validate();
    const int n = static_cast<int>(j.variables.size());
    if (n > 4) throw TooLargeError("inclusion-optimality testing capped at 4 variables");

    const ModelAtlas atlas(n);
    const std::vector<Triple> triples = canonical_triples(n);

    std::vector<std::uint8_t> holds(triples.size());
    for (std::size_t t = 0; t < triples.size(); ++t) {
        const int xs[] = {triples[t].x};
        const int ys[] = {triples[t].y};
        holds[t] = exact_ci(j, xs, ys, triples[t].z, tol);
    }

    // dsep[c][t] — the independence set of class c over the canonical triples.
    // Singleton-pair statements over all conditioning sets determine the full
    // set-valued independence structure, so set inclusion of these bit rows is
    // model inclusion (reversed).
    const std::size_t nc = atlas.classes().size();
    std::vector<std::vector<std::uint8_t>> dsep(nc, std::vector<std::uint8_t>(triples.size()));
    std::vector<std::uint8_t> includes(nc, 1);
    for (std::size_t c = 0; c < nc; ++c) {
        const Dag& rep = atlas.classes()[c].members.front();
        for (std::size_t t = 0; t < triples.size(); ++t) {
            const int xs[] = {triples[t].x};
            const int ys[] = {triples[t].y};
            dsep[c][t] = d_separated(rep, xs, ys, triples[t].z);
            if (dsep[c][t] && !holds[t]) includes[c] = 0;
        }
    }

    std::vector<Fingerprint> out;
    for (std::size_t c = 0; c < nc; ++c) {
        if (!includes[c]) continue;
        bool minimal = true;
        for (std::size_t o = 0; o < nc && minimal; ++o) {
            if (o == c || !includes[o]) continue;
            // o strictly below c: dsep(o) a proper superset of dsep(c)
            bool superset = true, strict = false;
            for (std::size_t t = 0; t < triples.size(); ++t) {
                if (dsep[c][t] && !dsep[o][t]) { superset = false; break; }
                if (dsep[o][t] && !dsep[c][t]) strict = true;
            }
            if (superset && strict) minimal = false;
        }
        if (minimal) out.push_back(atlas.classes()[c].fp);
    }
    return out;
}

std::vector<LocalOptimum> local_optima(const ModelAtlas& atlas, const Dataset& d, ScoreKind kind) {
    if (atlas.node_count() != d.var_count())
        throw SizeMismatchError("atlas and dataset disagree on variable count");

    ScoreCache cache;
    std::map<Fingerprint, double> score;
    for (const ClassInfo& c : atlas.classes())
        score[c.fp] = dag_score(c.members.front(), d, kind, cache);

    std::vector<LocalOptimum> out;
    for (const ClassInfo& c : atlas.classes()) {
        const double s = score[c.fp];
        bool weak = true, strict = true;
        for (const Fingerprint& nb : c.ib) {
            const double ns = score[nb];
            if (ns > s) weak = false;
            if (ns >= s) strict = false;
        }
        if (weak) out.push_back({c.fp, s, strict});
    }
    return out;
}

}  // namespace kesbn
