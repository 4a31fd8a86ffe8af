#include "kesbn/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "kesbn/oracle.hpp"

namespace kesbn {

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("cannot write " + path);
}

std::string score_name(ScoreKind kind) {
    return kind.family == ScoreKind::Family::bic ? "bic" : "bdeu";
}

nlohmann::json dataset_block(const Dataset& d, const std::string& path) {
    nlohmann::json vars = nlohmann::json::array();
    for (const Variable& v : d.variables()) vars.push_back(v.name);
    return {{"path", path},
            {"rows", d.row_count()},
            {"digest", dataset_digest(d)},
            {"variables", vars}};
}

nlohmann::json config_block(const SearchConfig& cfg, int n) {
    const int patience =
        cfg.patience ? *cfg.patience
                     : static_cast<int>(std::max<std::int64_t>(1, 2 * ib_size_estimate(n)));
    return {{"k", cfg.k},
            {"k_star_cap", cfg.k_star_cap},
            {"patience", patience},
            {"cars_per_draw", cfg.cars_per_draw},
            {"seed", cfg.seed},
            {"score", score_name(cfg.score)},
            {"ess", cfg.score.ess}};
}

nlohmann::json arcs_json(const Dag& g) {
    nlohmann::json out = nlohmann::json::array();
    for (const Arc a : g.arcs()) out.push_back({a.tail, a.head});
    return out;
}

}  // namespace

void cmd_trapgen(int groups, int rows, std::uint64_t seed, const std::string& out) {
    save_csv(trap_dataset(groups, rows, seed), out);
}

void cmd_sample(const std::string& bn_path, int rows, std::uint64_t seed, const std::string& out) {
    const BayesNet bn = load_bn(bn_path);
    save_csv(forward_sample(bn, rows, seed), out);
}

void cmd_learn(const std::string& data_path, const SearchConfig& cfg, const std::string& out) {
    const Dataset d = load_csv(data_path);
    const RunResult r = run_kes(d, cfg);

    nlohmann::json doc;
    doc["schema_version"] = 1;
    doc["command"] = "learn";
    doc["config"] = config_block(cfg, d.var_count());
    doc["dataset"] = dataset_block(d, data_path);
    doc["result"] = {{"arcs", arcs_json(r.dag)},
                     {"score", r.score},
                     {"fingerprint", to_string(r.fp)},
                     {"iterations", r.iterations},
                     {"draws", r.draws},
                     {"cache_hits", r.cache_hits},
                     {"cache_misses", r.cache_misses}};
    write_file(out, doc.dump(2) + "\n");
}

void cmd_experiment(const std::string& data_path, const std::vector<double>& ks, int runs,
                    const SearchConfig& base, const std::string& out) {
    const Dataset d = load_csv(data_path);
    const ExperimentSummary sum = run_experiment(d, ks, runs, base);

    nlohmann::json doc;
    doc["schema_version"] = 1;
    doc["command"] = "experiment";
    doc["config"] = config_block(base, d.var_count());
    doc["config"]["k_list"] = ks;
    doc["config"]["runs"] = runs;
    doc["dataset"] = dataset_block(d, data_path);
    doc["ges"] = {{"score", sum.ges_score}, {"fingerprint", to_string(sum.ges_fp)}};
    doc["entries"] = nlohmann::json::array();
    for (const KEntry& e : sum.entries) {
        nlohmann::json fps = nlohmann::json::array();
        for (const Fingerprint& fp : e.final_fingerprints) fps.push_back(to_string(fp));
        doc["entries"].push_back({{"k", e.k},
                                  {"k_star", e.k_star},
                                  {"best", e.best},
                                  {"better", e.better},
                                  {"worse", e.worse},
                                  {"equal", e.equal},
                                  {"better_distinct", e.better_distinct},
                                  {"worse_distinct", e.worse_distinct},
                                  {"sorted_scores", e.sorted_scores},
                                  {"fingerprints", fps}});
    }
    write_file(out, doc.dump(2) + "\n");
}

void cmd_oracle(const std::string& mode, const std::string& data_path, ScoreKind kind,
                const std::string& out) {
    nlohmann::json doc;
    doc["schema_version"] = 1;
    doc["command"] = "oracle";
    doc["mode"] = mode;

    if (mode == "inclusion-optimal") {
        const JointTable j = trap_cell_joint();
        const std::vector<Fingerprint> fps = inclusion_optimal_models(j);
        const ModelAtlas atlas(4);
        const std::vector<int> cards = trap_cell_cardinalities();
        doc["joint"] = "builtin trap cell";
        doc["optima"] = nlohmann::json::array();
        for (const Fingerprint& fp : fps) {
            const Dag& rep = atlas.class_of(fp).members.front();
            doc["optima"].push_back(
                {{"fingerprint", to_string(fp)}, {"dimension", dimension(rep, cards)}});
        }
        write_file(out, doc.dump(2) + "\n");
        return;
    }

    const Dataset d = load_csv(data_path);
    if (d.var_count() > 4)
        throw TooLargeError("oracle modes handle at most 4 variables");
    const ModelAtlas atlas(d.var_count());
    doc["node_count"] = d.var_count();
    doc["dataset"] = dataset_block(d, data_path);

    if (mode == "atlas") {
        doc["class_count"] = atlas.classes().size();
        doc["classes"] = nlohmann::json::array();
        for (const ClassInfo& c : atlas.classes()) {
            nlohmann::json ib = nlohmann::json::array();
            for (const Fingerprint& fp : c.ib) ib.push_back(to_string(fp));
            doc["classes"].push_back({{"fingerprint", to_string(c.fp)},
                                      {"members", c.members.size()},
                                      {"representative_arcs", arcs_json(c.members.front())},
                                      {"ib", ib}});
        }
    } else if (mode == "local-optima") {
        const std::vector<LocalOptimum> opts = local_optima(atlas, d, kind);
        const std::vector<int> cards = d.cardinalities();
        doc["score"] = score_name(kind);
        doc["ess"] = kind.ess;
        doc["class_count"] = atlas.classes().size();
        doc["optima"] = nlohmann::json::array();
        for (const LocalOptimum& o : opts) {
            const Dag& rep = atlas.class_of(o.fp).members.front();
            doc["optima"].push_back({{"fingerprint", to_string(o.fp)},
                                     {"score", o.score},
                                     {"strict", o.strict},
                                     {"dimension", dimension(rep, cards)}});
        }
    } else {
        throw DomainError("unknown oracle mode: " + mode);
    }
    write_file(out, doc.dump(2) + "\n");
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"structure learning over Markov equivalence classes by sampled"
                 " inclusion-boundary search"};
    app.require_subcommand(1);

    // trapgen
    auto* trapgen = app.add_subcommand("trapgen", "write a synthetic multi-group benchmark CSV");
    int tg_groups = 10;
    int tg_rows = 20000;
    std::uint64_t tg_seed = 0;
    std::string tg_out;
    trapgen->add_option("--groups", tg_groups, "independent four-variable groups");
    trapgen->add_option("--rows", tg_rows, "sample size");
    trapgen->add_option("--seed", tg_seed, "random seed");
    trapgen->add_option("--out", tg_out, "output CSV path")->required();

    // sample
    auto* sample = app.add_subcommand("sample", "forward-sample a network file to CSV");
    std::string sm_bn;
    int sm_rows = 1000;
    std::uint64_t sm_seed = 0;
    std::string sm_out;
    sample->add_option("--bn", sm_bn, "network JSON path")->required();
    sample->add_option("--rows", sm_rows, "sample size");
    sample->add_option("--seed", sm_seed, "random seed");
    sample->add_option("--out", sm_out, "output CSV path")->required();

    // learn
    auto* learn = app.add_subcommand("learn", "single search run on a CSV dataset");
    std::string ln_data;
    double ln_k = 0.0;
    std::string ln_score = "bic";
    double ln_ess = 1.0;
    std::uint64_t ln_seed = 0;
    int ln_patience = 0;
    std::string ln_out;
    learn->add_option("--data", ln_data, "dataset CSV path")->required();
    learn->add_option("--k", ln_k, "greediness in [0,1]");
    learn->add_option("--score", ln_score, "bic or bdeu")
        ->check(CLI::IsMember({"bic", "bdeu"}));
    learn->add_option("--ess", ln_ess, "equivalent sample size (bdeu)");
    learn->add_option("--seed", ln_seed, "random seed");
    auto* ln_pat_opt = learn->add_option("--patience", ln_patience,
                                         "non-improving iterations before stop");
    learn->add_option("--out", ln_out, "output JSON path")->required();

    // experiment
    auto* experiment = app.add_subcommand("experiment", "many runs per k with a greedy reference");
    std::string ex_data;
    std::vector<double> ex_ks;
    int ex_runs = 100;
    std::string ex_score = "bic";
    double ex_ess = 1.0;
    std::uint64_t ex_seed = 0;
    int ex_patience = 0;
    std::string ex_out;
    experiment->add_option("--data", ex_data, "dataset CSV path")->required();
    experiment->add_option("--k-list", ex_ks, "comma-separated k values")
        ->required()
        ->delimiter(',');
    experiment->add_option("--runs", ex_runs, "independent runs per k");
    experiment->add_option("--score", ex_score, "bic or bdeu")
        ->check(CLI::IsMember({"bic", "bdeu"}));
    experiment->add_option("--ess", ex_ess, "equivalent sample size (bdeu)");
    experiment->add_option("--seed", ex_seed, "base seed");
    auto* ex_pat_opt = experiment->add_option("--patience", ex_patience,
                                              "non-improving iterations before stop");
    experiment->add_option("--out", ex_out, "output JSON path")->required();

    // oracle
    auto* oracle = app.add_subcommand("oracle", "exhaustive ground truth on small domains");
    std::string or_mode;
    std::string or_data;
    std::string or_score = "bic";
    double or_ess = 1.0;
    std::string or_out;
    oracle->add_option("--mode", or_mode, "atlas, local-optima or inclusion-optimal")
        ->required()
        ->check(CLI::IsMember({"atlas", "local-optima", "inclusion-optimal"}));
    oracle->add_option("--data", or_data, "dataset CSV path (atlas and local-optima)");
    oracle->add_option("--score", or_score, "bic or bdeu")
        ->check(CLI::IsMember({"bic", "bdeu"}));
    oracle->add_option("--ess", or_ess, "equivalent sample size (bdeu)");
    oracle->add_option("--out", or_out, "output JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // prints help, returns 0
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    auto usage = [](const std::string& msg) {
        std::cerr << msg << "\n";
        return 2;
    };

    try {
        if (trapgen->parsed()) {
            if (tg_groups < 1) return usage("--groups must be at least 1");
            if (tg_rows < 0) return usage("--rows must be nonnegative");
            cmd_trapgen(tg_groups, tg_rows, tg_seed, tg_out);
        } else if (sample->parsed()) {
            if (sm_rows < 0) return usage("--rows must be nonnegative");
            cmd_sample(sm_bn, sm_rows, sm_seed, sm_out);
        } else if (learn->parsed()) {
            if (ln_k < 0 || ln_k > 1) return usage("--k must lie in [0,1]");
            if (ln_ess <= 0) return usage("--ess must be positive");
            if (ln_pat_opt->count() && ln_patience < 1)
                return usage("--patience must be at least 1");
            SearchConfig cfg;
            cfg.k = ln_k;
            cfg.seed = ln_seed;
            cfg.score = ln_score == "bic" ? ScoreKind::bic() : ScoreKind::bdeu(ln_ess);
            if (ln_pat_opt->count()) cfg.patience = ln_patience;
            cmd_learn(ln_data, cfg, ln_out);
        } else if (experiment->parsed()) {
            for (double k : ex_ks)
                if (k < 0 || k > 1) return usage("--k-list values must lie in [0,1]");
            if (ex_runs < 1) return usage("--runs must be at least 1");
            if (ex_ess <= 0) return usage("--ess must be positive");
            if (ex_pat_opt->count() && ex_patience < 1)
                return usage("--patience must be at least 1");
            SearchConfig cfg;
            cfg.seed = ex_seed;
            cfg.score = ex_score == "bic" ? ScoreKind::bic() : ScoreKind::bdeu(ex_ess);
            if (ex_pat_opt->count()) cfg.patience = ex_patience;
            cmd_experiment(ex_data, ex_ks, ex_runs, cfg, ex_out);
        } else if (oracle->parsed()) {
            if (or_ess <= 0) return usage("--ess must be positive");
            if (or_mode != "inclusion-optimal" && or_data.empty())
                return usage("--data is required for mode " + or_mode);
            const ScoreKind kind =
                or_score == "bic" ? ScoreKind::bic() : ScoreKind::bdeu(or_ess);
            cmd_oracle(or_mode, or_data, kind, or_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace kesbn
