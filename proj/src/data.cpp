#include "kesbn/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace kesbn {

namespace {

constexpr std::int64_t kCellCap = 10'000'000;  // family table allocation guard

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path);
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("cannot write " + path);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

}  // namespace

Dataset::Dataset(std::vector<Variable> variables, std::vector<int> values)
    : variables_(std::move(variables)), values_(std::move(values)) {
    for (const Variable& v : variables_) {
        if (v.cardinality < 2) throw DomainError("variable " + v.name + " needs at least 2 states");
        if (!v.labels.empty() && static_cast<int>(v.labels.size()) != v.cardinality)
            throw SizeMismatchError("label list does not match cardinality");
    }
    if (variables_.empty()) {
        if (!values_.empty()) throw SizeMismatchError("values without variables");
        return;
    }
    if (values_.size() % variables_.size() != 0)
        throw SizeMismatchError("value count is not a multiple of the variable count");
    rows_ = static_cast<int>(values_.size() / variables_.size());
    for (int r = 0; r < rows_; ++r)
        for (int v = 0; v < var_count(); ++v)
            if (value(r, v) < 0 || value(r, v) >= variables_[v].cardinality)
                throw IndexError("value out of range at row " + std::to_string(r));
}

std::vector<int> Dataset::cardinalities() const {
    std::vector<int> out;
    out.reserve(variables_.size());
    for (const Variable& v : variables_) out.push_back(v.cardinality);
    return out;
}

Dataset load_csv(const std::string& path) {
    const std::string text = read_file(path);

    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        start = end + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();

    if (lines.empty()) throw EmptyDataError(path + ": no header row");
    const std::vector<std::string> header = split_fields(lines[0]);
    const std::size_t cols = header.size();
    if (cols == 1 && header[0].empty()) throw EmptyDataError(path + ": no columns");
    if (lines.size() == 1) throw EmptyDataError(path + ": no data rows");

    std::vector<Variable> vars(cols);
    std::vector<std::unordered_map<std::string, int>> codes(cols);
    for (std::size_t c = 0; c < cols; ++c) vars[c].name = header[c];

    std::vector<int> values;
    values.reserve((lines.size() - 1) * cols);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_fields(lines[i]);
        if (fields.size() != cols)
            throw ParseError(path + " line " + std::to_string(i + 1) + ": expected " +
                             std::to_string(cols) + " fields, got " + std::to_string(fields.size()));
        for (std::size_t c = 0; c < cols; ++c) {
            if (fields[c].empty())
                throw ParseError(path + " line " + std::to_string(i + 1) + ": empty cell");
            auto [it, inserted] = codes[c].try_emplace(fields[c], static_cast<int>(codes[c].size()));
            if (inserted) vars[c].labels.push_back(fields[c]);
            values.push_back(it->second);
        }
    }

    for (std::size_t c = 0; c < cols; ++c) {
        vars[c].cardinality = static_cast<int>(vars[c].labels.size());
        if (vars[c].cardinality < 2)
            throw SingleStateError(path + ": column " + vars[c].name + " has a single value");
    }
    return Dataset(std::move(vars), std::move(values));
}

std::string to_csv(const Dataset& d) {
    std::ostringstream os;
    for (int v = 0; v < d.var_count(); ++v) {
        if (v) os << ',';
        os << d.variable(v).name;
    }
    os << '\n';
    for (int r = 0; r < d.row_count(); ++r) {
        for (int v = 0; v < d.var_count(); ++v) {
            if (v) os << ',';
            const Variable& var = d.variable(v);
            if (var.labels.empty())
                os << d.value(r, v);
            else
                os << var.labels[d.value(r, v)];
        }
        os << '\n';
    }
    return os.str();
}

void save_csv(const Dataset& d, const std::string& path) { write_file(path, to_csv(d)); }

Dataset select_columns(const Dataset& d, std::span<const int> cols) {
    std::vector<Variable> vars;
    for (int c : cols) vars.push_back(d.variable(c));
    std::vector<int> values;
    values.reserve(static_cast<std::size_t>(d.row_count()) * cols.size());
    for (int r = 0; r < d.row_count(); ++r)
        for (int c : cols) values.push_back(d.value(r, c));
    return Dataset(std::move(vars), std::move(values));
}

FamilyCounts family_counts(const Dataset& d, int child, std::span<const int> parents) {
    if (child < 0 || child >= d.var_count()) throw IndexError("child index out of range");
    for (int p : parents) {
        if (p < 0 || p >= d.var_count()) throw IndexError("parent index out of range");
        if (p == child) throw OverlapError("child cannot be its own parent");
    }
    std::vector<int> ps(parents.begin(), parents.end());
    std::sort(ps.begin(), ps.end());
    if (std::adjacent_find(ps.begin(), ps.end()) != ps.end())
        throw OverlapError("duplicate parent");

    FamilyCounts fc;
    fc.r = d.variable(child).cardinality;
    for (int p : ps) {
        fc.q *= d.variable(p).cardinality;
        if (fc.q * fc.r > kCellCap) throw TooLargeError("family table exceeds cell cap");
    }
    fc.counts.assign(static_cast<std::size_t>(fc.q) * fc.r, 0);
    fc.config_total.assign(static_cast<std::size_t>(fc.q), 0);
    fc.total = d.row_count();

    for (int r = 0; r < d.row_count(); ++r) {
        std::int64_t j = 0;
        for (int p : ps) j = j * d.variable(p).cardinality + d.value(r, p);
        ++fc.counts[static_cast<std::size_t>(j) * fc.r + d.value(r, child)];
        ++fc.config_total[static_cast<std::size_t>(j)];
    }
    return fc;
}

void BayesNet::validate() const {
    const int n = dag.node_count();
    if (static_cast<int>(variables.size()) != n || static_cast<int>(cpts.size()) != n)
        throw SizeMismatchError("network pieces disagree on node count");
    for (int x = 0; x < n; ++x) {
        if (variables[x].cardinality < 2)
            throw DomainError("variable " + variables[x].name + " needs at least 2 states");
        std::int64_t q = 1;
        for (int p : dag.parents(x)) q *= variables[p].cardinality;
        const int r = variables[x].cardinality;
        if (static_cast<std::int64_t>(cpts[x].size()) != q * r)
            throw SizeMismatchError("conditional table for " + variables[x].name +
                                    " has the wrong shape");
        for (std::int64_t j = 0; j < q; ++j) {
            double s = 0;
            for (int k = 0; k < r; ++k) {
                const double p = cpts[x][static_cast<std::size_t>(j) * r + k];
                if (p < 0) throw DomainError("negative probability");
                s += p;
            }
            if (std::abs(s - 1.0) > 1e-12)
                throw DomainError("conditional row does not sum to 1");
        }
    }
}

BayesNet load_bn(const std::string& path) {
    const std::string text = read_file(path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    try {
        BayesNet bn;
        const auto& jvars = doc.at("variables");
        for (const auto& jv : jvars) {
            Variable v;
            v.name = jv.at("name").get<std::string>();
            v.cardinality = jv.at("states").get<int>();
            bn.variables.push_back(std::move(v));
        }
        const int n = static_cast<int>(bn.variables.size());
        std::vector<Arc> arcs;
        for (const auto& ja : doc.at("arcs"))
            arcs.push_back({ja.at(0).get<int>(), ja.at(1).get<int>()});
        bn.dag = Dag::from_arcs(n, arcs);
        for (const auto& jt : doc.at("cpts"))
            bn.cpts.push_back(jt.get<std::vector<double>>());
        bn.validate();
        return bn;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void save_bn(const BayesNet& bn, const std::string& path) {
    bn.validate();
    nlohmann::json doc;
    doc["schema_version"] = 1;
    doc["variables"] = nlohmann::json::array();
    for (const Variable& v : bn.variables)
        doc["variables"].push_back({{"name", v.name}, {"states", v.cardinality}});
    doc["arcs"] = nlohmann::json::array();
    for (const Arc a : bn.dag.arcs()) doc["arcs"].push_back({a.tail, a.head});
    doc["cpts"] = bn.cpts;
    write_file(path, doc.dump(2) + "\n");
}

BayesNet random_cpts(const Dag& dag, std::span<const int> cards, Rng& rng) {
    if (static_cast<int>(cards.size()) != dag.node_count())
        throw SizeMismatchError("cardinality list does not match node count");
    BayesNet bn;
    bn.dag = dag;
    for (int x = 0; x < dag.node_count(); ++x)
        bn.variables.push_back({"v" + std::to_string(x), cards[x], {}});
    for (int x = 0; x < dag.node_count(); ++x) {
        std::int64_t q = 1;
        for (int p : dag.parents(x)) q *= cards[p];
        const int r = cards[x];
        std::vector<double> table(static_cast<std::size_t>(q) * r);
        for (std::int64_t j = 0; j < q; ++j) {
            // flat Dirichlet row via normalized exponentials
            double s = 0;
            for (int k = 0; k < r; ++k) {
                double u = rng.next_double();
                while (u == 0.0) u = rng.next_double();
                const double e = -std::log(u);
                table[static_cast<std::size_t>(j) * r + k] = e;
                s += e;
            }
            for (int k = 0; k < r; ++k) table[static_cast<std::size_t>(j) * r + k] /= s;
        }
        bn.cpts.push_back(std::move(table));
    }
    return bn;
}

Dataset forward_sample(const BayesNet& bn, int n, std::uint64_t seed) {
    bn.validate();
    if (n < 0) throw DomainError("row count must be nonnegative");
    const int nv = bn.dag.node_count();
    const std::vector<int> order = causal_order(bn.dag);
    std::vector<std::vector<int>> parents(nv);
    for (int x = 0; x < nv; ++x) parents[x] = bn.dag.parents(x);

    Rng rng(seed);
    std::vector<int> values(static_cast<std::size_t>(n) * nv);
    std::vector<int> row(nv);
    for (int i = 0; i < n; ++i) {
        for (int x : order) {
            std::int64_t j = 0;
            for (int p : parents[x]) j = j * bn.variables[p].cardinality + row[p];
            const int r = bn.variables[x].cardinality;
            const double u = rng.next_double();
            double acc = 0;
            int k = r - 1;  // fallback soaks up rounding slack
            for (int c = 0; c < r; ++c) {
                acc += bn.cpts[x][static_cast<std::size_t>(j) * r + c];
                if (u < acc) { k = c; break; }
            }
            row[x] = k;
        }
        for (int x = 0; x < nv; ++x) values[static_cast<std::size_t>(i) * nv + x] = row[x];
    }
    return Dataset(bn.variables, std::move(values));
}

std::size_t JointTable::index(std::span<const int> assignment) const {
    if (assignment.size() != variables.size())
        throw SizeMismatchError("assignment length does not match variable count");
    std::size_t idx = 0;
    for (std::size_t v = 0; v < variables.size(); ++v) {
        if (assignment[v] < 0 || assignment[v] >= variables[v].cardinality)
            throw IndexError("assignment value out of range");
        idx = idx * variables[v].cardinality + assignment[v];
    }
    return idx;
}

std::vector<double> JointTable::marginal(std::span<const int> subset) const {
    for (std::size_t i = 0; i < subset.size(); ++i) {
        if (subset[i] < 0 || subset[i] >= static_cast<int>(variables.size()))
            throw IndexError("subset index out of range");
        if (i > 0 && subset[i] <= subset[i - 1])
            throw DomainError("subset must be strictly ascending");
    }
    std::size_t out_cells = 1;
    for (int v : subset) out_cells *= variables[v].cardinality;
    std::vector<double> out(out_cells, 0.0);

    const int n = static_cast<int>(variables.size());
    std::vector<int> assign(n, 0);
    for (std::size_t cell = 0; cell < probabilities.size(); ++cell) {
        std::size_t rest = cell;
        for (int v = n - 1; v >= 0; --v) {
            assign[v] = static_cast<int>(rest % variables[v].cardinality);
            rest /= variables[v].cardinality;
        }
        std::size_t j = 0;
        for (int v : subset) j = j * variables[v].cardinality + assign[v];
        out[j] += probabilities[cell];
    }
    return out;
}

void JointTable::validate() const {
    std::size_t cells = 1;
    for (const Variable& v : variables) {
        if (v.cardinality < 2) throw DomainError("variable " + v.name + " needs at least 2 states");
        cells *= v.cardinality;
    }
    if (probabilities.size() != cells) throw SizeMismatchError("table size mismatch");
    double s = 0;
    for (double p : probabilities) {
        if (p < 0) throw DomainError("negative probability");
        s += p;
    }
    if (std::abs(s - 1.0) > 1e-12) throw DomainError("total mass is not 1");
}

JointTable joint_from_bn(const BayesNet& bn) {
    bn.validate();
    const int n = bn.dag.node_count();
    JointTable j;
    j.variables = bn.variables;
    std::size_t cells = 1;
    for (const Variable& v : bn.variables) cells *= v.cardinality;
    if (cells > static_cast<std::size_t>(kCellCap)) throw TooLargeError("joint table too large");
    j.probabilities.assign(cells, 0.0);

    std::vector<std::vector<int>> parents(n);
    for (int x = 0; x < n; ++x) parents[x] = bn.dag.parents(x);
    std::vector<int> assign(n, 0);
    for (std::size_t cell = 0; cell < cells; ++cell) {
        std::size_t rest = cell;
        for (int v = n - 1; v >= 0; --v) {
            assign[v] = static_cast<int>(rest % bn.variables[v].cardinality);
            rest /= bn.variables[v].cardinality;
        }
        double p = 1.0;
        for (int x = 0; x < n; ++x) {
            std::int64_t cfg = 0;
            for (int par : parents[x]) cfg = cfg * bn.variables[par].cardinality + assign[par];
            p *= bn.cpts[x][static_cast<std::size_t>(cfg) * bn.variables[x].cardinality + assign[x]];
        }
        j.probabilities[cell] = p;
    }
    return j;
}

JointTable ipf_fit(std::span<const int> cardinalities,
                   const std::vector<std::vector<int>>& cliques,
                   const std::vector<std::vector<double>>& targets, double tol, int max_iter) {
    const int n = static_cast<int>(cardinalities.size());
    if (n == 0) throw EmptyDataError("no variables");
    if (cliques.size() != targets.size())
        throw SizeMismatchError("clique and target counts differ");

    std::vector<std::uint8_t> covered(n, 0);
    for (std::size_t c = 0; c < cliques.size(); ++c) {
        std::size_t cells = 1;
        for (std::size_t i = 0; i < cliques[c].size(); ++i) {
            const int v = cliques[c][i];
            if (v < 0 || v >= n) throw IndexError("clique variable out of range");
            if (i > 0 && v <= cliques[c][i - 1])
                throw DomainError("clique must be strictly ascending");
            covered[v] = 1;
            cells *= cardinalities[v];
        }
        if (targets[c].size() != cells) throw SizeMismatchError("target table size mismatch");
        double s = 0;
        for (double p : targets[c]) {
            if (p < 0) throw DomainError("negative target probability");
            s += p;
        }
        if (std::abs(s - 1.0) > 1e-9) throw DomainError("target marginal does not sum to 1");
    }
    for (int v = 0; v < n; ++v)
        if (!covered[v]) throw DomainError("cliques do not cover all variables");

    JointTable j;
    for (int v = 0; v < n; ++v)
        j.variables.push_back({"v" + std::to_string(v), cardinalities[v], {}});
    std::size_t cells = 1;
    for (int v = 0; v < n; ++v) cells *= cardinalities[v];
    if (cells > static_cast<std::size_t>(kCellCap)) throw TooLargeError("joint table too large");
    j.probabilities.assign(cells, 1.0 / static_cast<double>(cells));

    // precompute each cell's projection onto each clique
    std::vector<std::vector<std::size_t>> proj(cliques.size(),
                                               std::vector<std::size_t>(cells));
    std::vector<int> assign(n, 0);
    for (std::size_t cell = 0; cell < cells; ++cell) {
        std::size_t rest = cell;
        for (int v = n - 1; v >= 0; --v) {
            assign[v] = static_cast<int>(rest % cardinalities[v]);
            rest /= cardinalities[v];
        }
        for (std::size_t c = 0; c < cliques.size(); ++c) {
            std::size_t k = 0;
            for (int v : cliques[c]) k = k * cardinalities[v] + assign[v];
            proj[c][cell] = k;
        }
    }

    std::vector<double> m;
    for (int sweep = 0; sweep < max_iter; ++sweep) {
        for (std::size_t c = 0; c < cliques.size(); ++c) {
            m.assign(targets[c].size(), 0.0);
            for (std::size_t cell = 0; cell < cells; ++cell)
                m[proj[c][cell]] += j.probabilities[cell];
            for (std::size_t cell = 0; cell < cells; ++cell) {
                const double denom = m[proj[c][cell]];
                j.probabilities[cell] =
                    denom > 0 ? j.probabilities[cell] * targets[c][proj[c][cell]] / denom : 0.0;
            }
        }
        double dev = 0;
        for (std::size_t c = 0; c < cliques.size(); ++c) {
            m.assign(targets[c].size(), 0.0);
            for (std::size_t cell = 0; cell < cells; ++cell)
                m[proj[c][cell]] += j.probabilities[cell];
            for (std::size_t k = 0; k < m.size(); ++k)
                dev = std::max(dev, std::abs(m[k] - targets[c][k]));
        }
        if (dev < tol) return j;
    }
    throw ConvergenceError("marginal fitting did not reach tolerance");
}

Dataset sample_joint(const JointTable& j, int n, std::uint64_t seed) {
    j.validate();
    if (n < 0) throw DomainError("row count must be nonnegative");
    std::vector<double> cumulative(j.probabilities.size());
    double acc = 0;
    for (std::size_t i = 0; i < j.probabilities.size(); ++i) {
        acc += j.probabilities[i];
        cumulative[i] = acc;
    }
    cumulative.back() = 1.0;

    const int nv = static_cast<int>(j.variables.size());
    Rng rng(seed);
    std::vector<int> values(static_cast<std::size_t>(n) * nv);
    for (int i = 0; i < n; ++i) {
        const double u = rng.next_double();
        const std::size_t cell =
            std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin();
        std::size_t rest = cell;
        for (int v = nv - 1; v >= 0; --v) {
            values[static_cast<std::size_t>(i) * nv + v] =
                static_cast<int>(rest % j.variables[v].cardinality);
            rest /= j.variables[v].cardinality;
        }
    }
    return Dataset(j.variables, std::move(values));
}

JointTable trap_cell_joint() {
    const std::vector<int> cards{4, 2, 2, 2};
    const std::vector<std::vector<int>> cliques{{0, 1}, {1, 2}, {2, 3}, {0, 3}};
    const std::vector<std::vector<double>> targets{
        {0.22, 0.03, 0.03, 0.22, 0.22, 0.03, 0.03, 0.22},  // (X,Y)
        {0.35, 0.15, 0.15, 0.35},                          // (Y,Z)
        {0.35, 0.15, 0.15, 0.35},                          // (Z,U)
        {0.22, 0.03, 0.22, 0.03, 0.03, 0.22, 0.03, 0.22},  // (X,U)
    };
    JointTable j = ipf_fit(cards, cliques, targets);
    const char* names[] = {"X", "Y", "Z", "U"};
    for (int v = 0; v < 4; ++v) j.variables[v].name = names[v];
    return j;
}

std::vector<int> trap_cell_cardinalities() { return {4, 2, 2, 2}; }

Dag trap_cell_sparse_optimum() {
    return Dag::from_arcs(4, {{0, 1}, {0, 3}, {1, 2}, {3, 2}, {1, 3}});
}

Dag trap_cell_dense_optimum() {
    return Dag::from_arcs(4, {{0, 1}, {0, 3}, {1, 2}, {2, 3}, {0, 2}});
}

Dataset trap_dataset(int groups, int rows, std::uint64_t seed) {
    if (groups < 1) throw DomainError("need at least one group");
    if (rows < 0) throw DomainError("row count must be nonnegative");
    const JointTable cell = trap_cell_joint();

    std::vector<double> cumulative(cell.probabilities.size());
    double acc = 0;
    for (std::size_t i = 0; i < cell.probabilities.size(); ++i) {
        acc += cell.probabilities[i];
        cumulative[i] = acc;
    }
    cumulative.back() = 1.0;

    std::vector<Variable> vars;
    vars.reserve(static_cast<std::size_t>(groups) * 4);
    for (int g = 0; g < groups; ++g)
        for (const Variable& v : cell.variables)
            vars.push_back({v.name + std::to_string(g), v.cardinality, {}});

    const int nv = groups * 4;
    Rng rng(seed);
    std::vector<int> values(static_cast<std::size_t>(rows) * nv);
    for (int i = 0; i < rows; ++i) {
        for (int g = 0; g < groups; ++g) {
            const double u = rng.next_double();
            std::size_t rest =
                std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin();
            for (int v = 3; v >= 0; --v) {
                values[static_cast<std::size_t>(i) * nv + g * 4 + v] =
                    static_cast<int>(rest % cell.variables[v].cardinality);
                rest /= cell.variables[v].cardinality;
            }
        }
    }
    return Dataset(std::move(vars), std::move(values));
}

}  // namespace kesbn
