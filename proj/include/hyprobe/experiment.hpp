#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "hyprobe/ablation.hpp"
#include "hyprobe/common.hpp"
#include "hyprobe/dataset.hpp"
#include "hyprobe/embedding.hpp"
#include "hyprobe/probe.hpp"
#include "hyprobe/stats.hpp"

namespace hyprobe {

// Base instance encodings for one (embedding, dataset) pairing, computed
// once and shared across bootstrap runs.
struct EncodedDataset {
    std::vector<std::vector<double>> train, test;
    std::vector<int> train_labels, test_labels;
    std::size_t concat_dim = 0;

    static EncodedDataset build(const EmbeddingMatrix& m, const ProbingDataset& ds) {
        EncodedDataset e;
        e.concat_dim = 2 * m.dim();
        e.train.reserve(ds.train.size());
        for (const auto& inst : ds.train) {
            e.train.push_back(encode_instance(inst, m));
            e.train_labels.push_back(inst.label);
        }
        e.test.reserve(ds.test.size());
        for (const auto& inst : ds.test) {
            e.test.push_back(encode_instance(inst, m));
            e.test_labels.push_back(inst.label);
        }
        if (e.train.empty() || e.test.empty())
            throw DataError("experiment: dataset has an empty split");
        return e;
    }
};

struct BootstrapSpec {
    TransformKind kind = TransformKind::vanilla;
    NoiseRanges ranges;
    ProbeConfig probe_config;
    std::uint64_t base_seed = 1;
    std::size_t n_runs = 50;
    std::size_t n_threads = 1;  // 0 = hardware concurrency
};

namespace detail {

// Noise is drawn fresh per instance per run: the per-instance RNG is derived
// from (run seed, instance index) so parallel and serial execution agree.
inline double single_run(const EncodedDataset& enc, const BootstrapSpec& spec,
                         std::uint64_t run_seed) {
    if (spec.kind == TransformKind::rand_pred) {
        Rng rng(run_seed);
        auto scores = random_predictions(enc.test_labels.size(), rng);
        return auc_roc(scores, enc.test_labels);
    }
    FeatureMatrix X_train, X_test;
    for (std::size_t i = 0; i < enc.train.size(); ++i) {
        Rng rng = derive_rng(run_seed, i);
        X_train.push_row(apply_transform(enc.train[i], spec.kind, spec.ranges, rng));
    }
    for (std::size_t i = 0; i < enc.test.size(); ++i) {
        Rng rng = derive_rng(run_seed, enc.train.size() + i);
        X_test.push_row(apply_transform(enc.test[i], spec.kind, spec.ranges, rng));
    }

    ProbeConfig cfg = spec.probe_config;
    cfg.rng_seed = run_seed;
    MlpProbe probe = train_probe(X_train, enc.train_labels, cfg);
    auto scores = predict_scores(probe, X_test);
    return auc_roc(scores, enc.test_labels);
}

}  // namespace detail

// Runs train+evaluate with seeds base_seed .. base_seed+n_runs-1 and
// aggregates. Run order in the result is by seed regardless of threading.
inline RunStats run_bootstrap(const EncodedDataset& enc, const BootstrapSpec& spec) {
    if (spec.n_runs < 2) throw ConfigError("run_bootstrap: n_runs must be >= 2");
    std::size_t n_threads = spec.n_threads ? spec.n_threads
                                           : std::max(1u, std::thread::hardware_concurrency());
    std::vector<double> aucs(spec.n_runs, 0.0);
    std::vector<std::string> errors(spec.n_runs);

    auto work = [&](std::size_t t) {
        for (std::size_t r = t; r < spec.n_runs; r += n_threads) {
            std::uint64_t seed = spec.base_seed + r;
            try {
                aucs[r] = detail::single_run(enc, spec, seed);
            } catch (const std::exception& e) {
                errors[r] = e.what();
            }
        }
    };
    if (n_threads <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    for (std::size_t r = 0; r < spec.n_runs; ++r)
        if (!errors[r].empty())
            throw DataError("bootstrap run " + std::to_string(r) + " (seed " +
                            std::to_string(spec.base_seed + r) + ") failed: " + errors[r]);
    return make_run_stats(std::string(to_string(spec.kind)), std::move(aucs));
}

struct CellResult {
    TransformKind kind = TransformKind::vanilla;
    RunStats stats;
    std::optional<SignificanceVerdict> verdict;
    bool asterisk = false;  // significantly lower of a 1h/2h deletion pair
};

struct ModelResults {
    std::string model;
    std::vector<CellResult> cells;

    const CellResult* find(TransformKind k) const {
        for (const auto& c : cells)
            if (c.kind == k) return &c;
        return nullptr;
    }
};

struct ExperimentOptions {
    std::vector<TransformKind> transforms;
    std::size_t n_runs = 50;
    double alpha = 0.05;
    std::uint64_t base_seed = 1;
    std::size_t n_threads = 1;
    ProbeConfig probe_config;
    bool keep_going = false;
};

// One full table column: every transform on one embedding, with shading
// verdicts against the random and vanilla references and asterisk marks on
// the lower member of each significantly-different 1h/2h deletion pair.
inline ModelResults run_model_experiment(const std::string& model_name,
                                         const EmbeddingMatrix& embedding,
                                         const ProbingDataset& dataset,
                                         const ExperimentOptions& opt) {
    if (opt.transforms.empty()) throw ConfigError("experiment: empty transform list");
    EncodedDataset enc = EncodedDataset::build(embedding, dataset);
    NoiseRanges ranges = compute_ranges(embedding, dataset);

    ModelResults results;
    results.model = model_name;
    std::vector<std::string> failures;
    for (TransformKind kind : opt.transforms) {
        BootstrapSpec spec;
        spec.kind = kind;
        spec.ranges = ranges;
        spec.probe_config = opt.probe_config;
        spec.base_seed = opt.base_seed;
        spec.n_runs = opt.n_runs;
        spec.n_threads = opt.n_threads;
        try {
            CellResult cell;
            cell.kind = kind;
            cell.stats = run_bootstrap(enc, spec);
            results.cells.push_back(std::move(cell));
        } catch (const std::exception& e) {
            std::string msg = "cell (" + model_name + ", " + to_string(kind) + ") failed: " + e.what();
            if (!opt.keep_going) throw DataError(msg);
            failures.push_back(msg);
        }
    }
    if (!failures.empty() && results.cells.empty())
        throw DataError("all cells failed; first: " + failures.front());

    const CellResult* rand_ref = results.find(TransformKind::rand_pred);
    if (!rand_ref) rand_ref = results.find(TransformKind::rand_vec);
    const CellResult* vanilla_ref = results.find(TransformKind::vanilla);
    if (rand_ref && vanilla_ref) {
        for (auto& cell : results.cells)
            cell.verdict = classify_shading(cell.stats, rand_ref->stats, vanilla_ref->stats,
                                            opt.alpha);
    }

    auto mark_pair = [&](TransformKind a, TransformKind b) {
        auto* ca = const_cast<CellResult*>(results.find(a));
        auto* cb = const_cast<CellResult*>(results.find(b));
        if (!ca || !cb) return;
        auto cmp = welch_compare(ca->stats.per_run_auc, cb->stats.per_run_auc, opt.alpha);
        if (cmp.significant)
            (ca->stats.mean_auc < cb->stats.mean_auc ? ca : cb)->asterisk = true;
    };
    mark_pair(TransformKind::del_ct_1h, TransformKind::del_ct_2h);
    mark_pair(TransformKind::del_ea_1h, TransformKind::del_ea_2h);
    return results;
}

// --- serialization -------------------------------------------------------

inline nlohmann::json to_json(const ModelResults& r) {
    nlohmann::json j;
    j["model"] = r.model;
    j["cells"] = nlohmann::json::array();
    for (const auto& c : r.cells) {
        nlohmann::json cj;
        cj["condition"] = to_string(c.kind);
        cj["mean_auc"] = c.stats.mean_auc;
        cj["ci_halfwidth"] = c.stats.ci_halfwidth;
        cj["n_runs"] = c.stats.n_runs;
        cj["per_run_auc"] = c.stats.per_run_auc;
        cj["asterisk"] = c.asterisk;
        if (c.verdict) {
            cj["shading"] = to_string(c.verdict->grouping);
            cj["p_vs_random"] = c.verdict->p_vs_random;
            cj["p_vs_vanilla"] = c.verdict->p_vs_vanilla;
        }
        j["cells"].push_back(std::move(cj));
    }
    return j;
}

inline ModelResults model_results_from_json(const nlohmann::json& j) {
    ModelResults r;
    r.model = j.at("model").get<std::string>();
    for (const auto& cj : j.at("cells")) {
        CellResult c;
        c.kind = transform_from_string(cj.at("condition").get<std::string>());
        c.stats = make_run_stats(cj.at("condition").get<std::string>(),
                                 cj.at("per_run_auc").get<std::vector<double>>());
        c.asterisk = cj.value("asterisk", false);
        if (cj.contains("shading")) {
            SignificanceVerdict v;
            v.condition = c.stats.condition;
            std::string g = cj.at("shading").get<std::string>();
            v.grouping = g == "same-as-random" ? ShadingGroup::same_as_random
                         : g == "same-as-vanilla" ? ShadingGroup::same_as_vanilla
                                                  : ShadingGroup::distinct;
            v.p_vs_random = cj.value("p_vs_random", 1.0);
            v.p_vs_vanilla = cj.value("p_vs_vanilla", 1.0);
            c.verdict = v;
        }
        r.cells.push_back(std::move(c));
    }
    return r;
}

// Paper-style number rendering: ".9256", "±.0003".
inline std::string format_auc(double v, int digits = 4) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    std::string s(buf);
    if (s.starts_with("0.")) s.erase(0, 1);
    else if (s.starts_with("-0.")) s.erase(1, 1);
    return s;
}

inline std::string render_table(const ModelResults& r) {
    std::ostringstream out;
    out << r.model << "\n";
    out << "  condition    auc      +/-CI    group\n";
    for (const auto& c : r.cells) {
        std::string cond = to_string(c.kind);
        if (c.asterisk) cond += "*";
        char line[160];
        std::snprintf(line, sizeof(line), "  %-11s  %-6s  +/-%-6s  %s\n", cond.c_str(),
                      format_auc(c.stats.mean_auc).c_str(),
                      format_auc(c.stats.ci_halfwidth).c_str(),
                      c.verdict ? to_string(c.verdict->grouping) : "-");
        out << line;
    }
    return out.str();
}

inline std::string render_table_csv(const ModelResults& r) {
    std::ostringstream out;
    out << "model,condition,mean_auc,ci_halfwidth,shading,asterisk\n";
    out.precision(17);
    for (const auto& c : r.cells)
        out << r.model << ',' << to_string(c.kind) << ',' << c.stats.mean_auc << ','
            << c.stats.ci_halfwidth << ','
            << (c.verdict ? to_string(c.verdict->grouping) : "-") << ','
            << (c.asterisk ? 1 : 0) << '\n';
    return out.str();
}

// --- probe checkpoints ---------------------------------------------------
// Layout: shapes, then row-major weights.

inline void save_probe(const MlpProbe& p, const std::filesystem::path& path) {
    nlohmann::json j;
    j["input_dim"] = p.input_dim;
    j["hidden"] = p.hidden;
    j["w1"] = p.w1;
    j["b1"] = p.b1;
    j["w2"] = p.w2;
    j["b2"] = p.b2;
    std::ofstream out(path);
    if (!out) throw IoError("cannot write probe checkpoint: " + path.string());
    out << j.dump();
}

inline MlpProbe load_probe(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open probe checkpoint: " + path.string());
    nlohmann::json j = nlohmann::json::parse(in);
    MlpProbe p;
    p.input_dim = j.at("input_dim").get<std::size_t>();
    p.hidden = j.at("hidden").get<std::size_t>();
    p.w1 = j.at("w1").get<std::vector<double>>();
    p.b1 = j.at("b1").get<std::vector<double>>();
    p.w2 = j.at("w2").get<std::vector<double>>();
    p.b2 = j.at("b2").get<double>();
    if (p.w1.size() != p.hidden * p.input_dim || p.b1.size() != p.hidden ||
        p.w2.size() != p.hidden)
        throw DataError("probe checkpoint shapes disagree with weight payload");
    return p;
}

}  // namespace hyprobe
