// Pipeline driver: taxonomy ingestion, pseudo-corpus walks, embedding
// training, dataset construction, the probing experiment matrix, and norm
// analysis, each writing its artifact plus a provenance manifest.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hyprobe/ablation.hpp"
#include "hyprobe/dataset.hpp"
#include "hyprobe/embedding.hpp"
#include "hyprobe/experiment.hpp"
#include "hyprobe/glove.hpp"
#include "hyprobe/manifest.hpp"
#include "hyprobe/norm_analysis.hpp"
#include "hyprobe/random_walk.hpp"
#include "hyprobe/sgns.hpp"
#include "hyprobe/taxonomy.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hyprobe;

namespace {

// Relative output paths land under $HYPROBE_OUTPUT_ROOT when it is set.
fs::path resolve_out(const fs::path& p) {
    if (p.is_absolute()) return p;
    if (const char* root = std::getenv("HYPROBE_OUTPUT_ROOT")) {
        fs::path r = fs::path(root) / p;
        fs::create_directories(r.parent_path().empty() ? fs::path(root) : r.parent_path());
        return r;
    }
    return p;
}

// Effective value precedence: explicit flag > config file section > preset.
template <class T>
void resolve(const CLI::Option* opt, T& var, const json& cfg, const json& preset,
             const char* key) {
    if (opt && opt->count()) return;
    try {
        if (cfg.contains(key)) {
            var = cfg.at(key).get<T>();
            return;
        }
        if (preset.contains(key)) var = preset.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

json load_config_section(const std::string& path, const std::string& section) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("config file " + path + ": " + e.what());
    }
    return j.value(section, json::object());
}

json preset_section(const std::string& preset, const std::string& section) {
    static const json desk = {
        {"walk", {{"sentences", 100000}}},
        {"train-sgns", {{"dim", 100}}},
        {"train-glove", {{"dim", 100}}},
        {"build-dataset", {{"holdout-frac", 0.1}}},
        {"run", {{"runs", 20}}},
    };
    static const json paper = {
        {"walk", {{"sentences", 2000000}}},
        {"train-sgns", {{"dim", 300}}},
        {"train-glove", {{"dim", 300}}},
        {"build-dataset", {{"holdout-pairs", 25000}}},
        {"run", {{"runs", 50}}},
    };
    if (preset.empty()) return json::object();
    if (preset == "desk-scale") return desk.value(section, json::object());
    if (preset == "paper-scale") return paper.value(section, json::object());
    throw ConfigError("unknown preset: " + preset + " (expected desk-scale or paper-scale)");
}

fs::path require_input(const fs::path& p) {
    if (!fs::exists(p)) throw ConfigError("missing input path: " + p.string());
    return p;
}

TaxonomyGraph load_graph(const std::string& wordnet_dir, const std::string& edge_list,
                         bool include_instance) {
    if (wordnet_dir.empty() == edge_list.empty())
        throw ConfigError("exactly one of --wordnet and --edge-list is required");
    if (!wordnet_dir.empty()) {
        require_input(wordnet_dir);
        WordNetOptions opt;
        opt.include_instance_hypernyms = include_instance;
        return parse_wordnet_database(wordnet_dir, opt);
    }
    return parse_edge_list(require_input(edge_list));
}

std::vector<WordPair> read_pairs_tsv(const fs::path& path) {
    require_input(path);
    std::ifstream in(path);
    if (!in) throw IoError("cannot open pair list: " + path.string());
    std::vector<WordPair> pairs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw DataError(path.string() + ":" + std::to_string(lineno) +
                            ": expected hypernym<TAB>hyponym");
        pairs.push_back({line.substr(0, tab), line.substr(tab + 1)});
    }
    return pairs;
}

void write_pairs_tsv(const std::vector<WordPair>& pairs, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write pair list: " + path.string());
    for (const auto& p : pairs) out << p.hypernym << '\t' << p.hyponym << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

// "name=path" spec for labelled embedding inputs; bare paths use the stem.
std::pair<std::string, fs::path> split_model_spec(const std::string& spec) {
    auto eq = spec.find('=');
    if (eq == std::string::npos) return {fs::path(spec).stem().string(), spec};
    if (eq == 0 || eq + 1 == spec.size())
        throw ConfigError("bad embedding spec (want name=path): " + spec);
    return {spec.substr(0, eq), spec.substr(eq + 1)};
}

std::vector<TransformKind> parse_transforms(const std::vector<std::string>& names) {
    std::vector<TransformKind> out;
    for (const auto& n : names) out.push_back(transform_from_string(n));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"probing-with-noise pipeline for hypernymy embeddings"};
    app.require_subcommand(1);

    std::string config_path, preset;
    app.add_option("--config", config_path, "JSON config file; flags override its values");
    app.add_option("--preset", preset, "parameter preset: desk-scale or paper-scale");

    int exit_code = 0;
    auto guard = [&](auto&& body) {
        return [&, body]() {
            try {
                body();
            } catch (const ConfigError& e) {
                std::cerr << "config error: " << e.what() << "\n";
                exit_code = 2;
            } catch (const DataError& e) {
                std::cerr << "data error: " << e.what() << "\n";
                exit_code = 3;
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                exit_code = 4;
            }
        };
    };

    // --- ingest ----------------------------------------------------------
    auto* ingest = app.add_subcommand("ingest", "extract hypernym-hyponym word pairs");
    struct {
        std::string wordnet, edge_list, out = "pairs.tsv";
        bool include_instance = false;
    } ing;
    auto* ing_wn = ingest->add_option("--wordnet", ing.wordnet, "WordNet database directory");
    auto* ing_el = ingest->add_option("--edge-list", ing.edge_list, "TAB edge-list file");
    auto* ing_out = ingest->add_option("--out", ing.out, "output pair TSV");
    ingest->add_flag("--include-instance-hypernyms", ing.include_instance,
                     "also follow instance hypernym pointers");
    ingest->callback(guard([&] {
        json cfg = load_config_section(config_path, "ingest");
        json pre = preset_section(preset, "ingest");
        resolve(ing_wn, ing.wordnet, cfg, pre, "wordnet");
        resolve(ing_el, ing.edge_list, cfg, pre, "edge-list");
        resolve(ing_out, ing.out, cfg, pre, "out");

        auto graph = load_graph(ing.wordnet, ing.edge_list, ing.include_instance);
        auto pairs = extract_hypernym_pairs(graph);
        if (pairs.empty()) throw DataError("ingest: taxonomy yields no word pairs");
        fs::path out = resolve_out(ing.out);
        write_pairs_tsv(pairs, out);
        fs::path src = ing.wordnet.empty() ? fs::path(ing.edge_list)
                                           : fs::path(ing.wordnet) / "data.noun";
        write_manifest(out, {{"taxonomy", src}},
                       {{"include_instance", ing.include_instance}}, 0);
        std::cout << "synsets=" << graph.synsets.size() << " edges=" << graph.hyper_edges.size()
                  << " pairs=" << pairs.size() << " -> " << out.string() << "\n";
    }));

    // --- walk ------------------------------------------------------------
    auto* walk = app.add_subcommand("walk", "generate a random-walk pseudo-corpus");
    struct {
        std::string wordnet, edge_list, direction = "both", out = "corpus.txt";
        std::size_t sentences = 2'000'000, min_len = 2, max_len = 30;
        double continue_prob = 0.85;
        std::uint64_t seed = 1;
    } wk;
    auto* wk_wn = walk->add_option("--wordnet", wk.wordnet, "WordNet database directory");
    auto* wk_el = walk->add_option("--edge-list", wk.edge_list, "TAB edge-list file");
    auto* wk_n = walk->add_option("--sentences", wk.sentences, "number of sentences");
    auto* wk_dir = walk->add_option("--direction", wk.direction, "up|down|both");
    auto* wk_min = walk->add_option("--min-len", wk.min_len, "minimum sentence length");
    auto* wk_max = walk->add_option("--max-len", wk.max_len, "maximum sentence length");
    auto* wk_p = walk->add_option("--continue-prob", wk.continue_prob, "walk continuation probability");
    auto* wk_seed = walk->add_option("--seed", wk.seed, "RNG seed");
    auto* wk_out = walk->add_option("--out", wk.out, "output corpus file");
    walk->callback(guard([&] {
        json cfg = load_config_section(config_path, "walk");
        json pre = preset_section(preset, "walk");
        resolve(wk_wn, wk.wordnet, cfg, pre, "wordnet");
        resolve(wk_el, wk.edge_list, cfg, pre, "edge-list");
        resolve(wk_n, wk.sentences, cfg, pre, "sentences");
        resolve(wk_dir, wk.direction, cfg, pre, "direction");
        resolve(wk_min, wk.min_len, cfg, pre, "min-len");
        resolve(wk_max, wk.max_len, cfg, pre, "max-len");
        resolve(wk_p, wk.continue_prob, cfg, pre, "continue-prob");
        resolve(wk_seed, wk.seed, cfg, pre, "seed");
        resolve(wk_out, wk.out, cfg, pre, "out");

        auto graph = load_graph(wk.wordnet, wk.edge_list, false);
        WalkConfig wcfg;
        wcfg.num_sentences = wk.sentences;
        wcfg.direction_mode = direction_mode_from_string(wk.direction);
        wcfg.min_sentence_length = wk.min_len;
        wcfg.max_sentence_length = wk.max_len;
        wcfg.continue_probability = wk.continue_prob;
        wcfg.rng_seed = wk.seed;

        fs::path out = resolve_out(wk.out);
        std::ofstream os(out);
        if (!os) throw IoError("cannot write corpus: " + out.string());
        write_corpus(graph, wcfg, os);
        os.close();
        fs::path src = wk.wordnet.empty() ? fs::path(wk.edge_list)
                                          : fs::path(wk.wordnet) / "data.noun";
        write_manifest(out, {{"taxonomy", src}},
                       {{"sentences", wk.sentences},
                        {"direction", wk.direction},
                        {"min_len", wk.min_len},
                        {"max_len", wk.max_len},
                        {"continue_prob", wk.continue_prob}},
                       wk.seed);
        std::cout << "sentences=" << wk.sentences << " -> " << out.string() << "\n";
    }));

    // --- train-sgns ------------------------------------------------------
    auto* tsg = app.add_subcommand("train-sgns", "train skip-gram negative-sampling vectors");
    struct {
        std::string corpus, out = "sgns.txt", format = "word2vec-text";
        std::size_t dim = 300, window = 5, negative = 5, min_count = 5, epochs = 5;
        double lr = 0.025, subsample = 1e-3;
        std::uint64_t seed = 1;
    } sg;
    auto* sg_c = tsg->add_option("--corpus", sg.corpus, "input corpus")->required();
    auto* sg_d = tsg->add_option("--dim", sg.dim, "vector dimensionality");
    auto* sg_w = tsg->add_option("--window", sg.window, "context window");
    auto* sg_neg = tsg->add_option("--negative", sg.negative, "negative samples");
    auto* sg_mc = tsg->add_option("--min-count", sg.min_count, "vocabulary frequency floor");
    auto* sg_e = tsg->add_option("--epochs", sg.epochs, "training epochs");
    auto* sg_lr = tsg->add_option("--lr", sg.lr, "initial learning rate");
    auto* sg_sub = tsg->add_option("--subsample", sg.subsample, "subsampling threshold");
    auto* sg_seed = tsg->add_option("--seed", sg.seed, "RNG seed");
    auto* sg_out = tsg->add_option("--out", sg.out, "output vector file");
    auto* sg_fmt = tsg->add_option("--format", sg.format,
                                   "word2vec-text|word2vec-binary|glove-text");
    tsg->callback(guard([&] {
        json cfg = load_config_section(config_path, "train-sgns");
        json pre = preset_section(preset, "train-sgns");
        resolve(sg_c, sg.corpus, cfg, pre, "corpus");
        resolve(sg_d, sg.dim, cfg, pre, "dim");
        resolve(sg_w, sg.window, cfg, pre, "window");
        resolve(sg_neg, sg.negative, cfg, pre, "negative");
        resolve(sg_mc, sg.min_count, cfg, pre, "min-count");
        resolve(sg_e, sg.epochs, cfg, pre, "epochs");
        resolve(sg_lr, sg.lr, cfg, pre, "lr");
        resolve(sg_sub, sg.subsample, cfg, pre, "subsample");
        resolve(sg_seed, sg.seed, cfg, pre, "seed");
        resolve(sg_out, sg.out, cfg, pre, "out");
        resolve(sg_fmt, sg.format, cfg, pre, "format");

        SgnsConfig scfg;
        scfg.dim = sg.dim;
        scfg.window = sg.window;
        scfg.negative_samples = sg.negative;
        scfg.min_count = sg.min_count;
        scfg.epochs = sg.epochs;
        scfg.initial_learning_rate = sg.lr;
        scfg.subsample_threshold = sg.subsample;
        scfg.rng_seed = sg.seed;

        auto corpus = read_corpus(require_input(sg.corpus));
        auto result = train_sgns_full(corpus, scfg);
        fs::path out = resolve_out(sg.out);
        save_embeddings(result.embeddings, out, vector_format_from_string(sg.format));
        write_manifest(out, {{"corpus", sg.corpus}},
                       {{"dim", sg.dim},
                        {"window", sg.window},
                        {"negative", sg.negative},
                        {"min_count", sg.min_count},
                        {"epochs", sg.epochs},
                        {"lr", sg.lr},
                        {"subsample", sg.subsample}},
                       sg.seed);
        std::cout << "vocab=" << result.embeddings.words().size() << " dim=" << sg.dim
                  << " final_loss=" << result.epoch_losses.back() << " -> " << out.string()
                  << "\n";
    }));

    // --- train-glove -----------------------------------------------------
    auto* tgl = app.add_subcommand("train-glove", "train GloVe vectors");
    struct {
        std::string corpus, out = "glove.txt", format = "glove-text";
        std::size_t dim = 300, window = 10, epochs = 30, min_count = 5;
        double lr = 0.05, x_max = 100.0, alpha = 0.75;
        std::uint64_t seed = 1;
    } gl;
    auto* gl_c = tgl->add_option("--corpus", gl.corpus, "input corpus")->required();
    auto* gl_d = tgl->add_option("--dim", gl.dim, "vector dimensionality");
    auto* gl_w = tgl->add_option("--window", gl.window, "context window");
    auto* gl_e = tgl->add_option("--epochs", gl.epochs, "training epochs");
    auto* gl_mc = tgl->add_option("--min-count", gl.min_count, "vocabulary frequency floor");
    auto* gl_lr = tgl->add_option("--lr", gl.lr, "AdaGrad learning rate");
    auto* gl_xm = tgl->add_option("--x-max", gl.x_max, "weighting cutoff");
    auto* gl_a = tgl->add_option("--alpha", gl.alpha, "weighting exponent");
    auto* gl_seed = tgl->add_option("--seed", gl.seed, "RNG seed");
    auto* gl_out = tgl->add_option("--out", gl.out, "output vector file");
    auto* gl_fmt = tgl->add_option("--format", gl.format,
                                   "word2vec-text|word2vec-binary|glove-text");
    tgl->callback(guard([&] {
        json cfg = load_config_section(config_path, "train-glove");
        json pre = preset_section(preset, "train-glove");
        resolve(gl_c, gl.corpus, cfg, pre, "corpus");
        resolve(gl_d, gl.dim, cfg, pre, "dim");
        resolve(gl_w, gl.window, cfg, pre, "window");
        resolve(gl_e, gl.epochs, cfg, pre, "epochs");
        resolve(gl_mc, gl.min_count, cfg, pre, "min-count");
        resolve(gl_lr, gl.lr, cfg, pre, "lr");
        resolve(gl_xm, gl.x_max, cfg, pre, "x-max");
        resolve(gl_a, gl.alpha, cfg, pre, "alpha");
        resolve(gl_seed, gl.seed, cfg, pre, "seed");
        resolve(gl_out, gl.out, cfg, pre, "out");
        resolve(gl_fmt, gl.format, cfg, pre, "format");

        GloveConfig gcfg;
        gcfg.dim = gl.dim;
        gcfg.window = gl.window;
        gcfg.epochs = gl.epochs;
        gcfg.min_count = gl.min_count;
        gcfg.learning_rate = gl.lr;
        gcfg.x_max = gl.x_max;
        gcfg.weighting_exponent = gl.alpha;
        gcfg.rng_seed = gl.seed;

        auto corpus = read_corpus(require_input(gl.corpus));
        auto result = train_glove_full(corpus, gcfg);
        fs::path out = resolve_out(gl.out);
        save_embeddings(result.embeddings, out, vector_format_from_string(gl.format));
        write_manifest(out, {{"corpus", gl.corpus}},
                       {{"dim", gl.dim},
                        {"window", gl.window},
                        {"epochs", gl.epochs},
                        {"min_count", gl.min_count},
                        {"lr", gl.lr},
                        {"x_max", gl.x_max},
                        {"alpha", gl.alpha}},
                       gl.seed);
        std::cout << "vocab=" << result.embeddings.words().size() << " dim=" << gl.dim
                  << " final_loss=" << result.epoch_losses.back() << " -> " << out.string()
                  << "\n";
    }));

    // --- build-dataset ---------------------------------------------------
    auto* bld = app.add_subcommand("build-dataset", "filter pairs and build train/test splits");
    struct {
        std::string pairs, out_prefix = "dataset", format = "word2vec-text";
        std::vector<std::string> embeddings;
        std::size_t holdout_pairs = 25'000;
        double holdout_frac = -1.0;
        std::uint64_t seed = 1;
    } bd;
    auto* bd_p = bld->add_option("--pairs", bd.pairs, "input pair TSV")->required();
    auto* bd_e = bld->add_option("--embeddings", bd.embeddings,
                                 "embedding files constraining the vocabulary (name=path)");
    auto* bd_h = bld->add_option("--holdout-pairs", bd.holdout_pairs, "test pool size in pairs");
    auto* bd_hf = bld->add_option("--holdout-frac", bd.holdout_frac,
                                  "test pool as a fraction of filtered pairs");
    auto* bd_seed = bld->add_option("--seed", bd.seed, "RNG seed");
    auto* bd_out = bld->add_option("--out-prefix", bd.out_prefix,
                                   "writes <prefix>.train.csv and <prefix>.test.csv");
    auto* bd_fmt = bld->add_option("--format", bd.format, "embedding file format");
    bld->callback(guard([&] {
        json cfg = load_config_section(config_path, "build-dataset");
        json pre = preset_section(preset, "build-dataset");
        resolve(bd_p, bd.pairs, cfg, pre, "pairs");
        resolve(bd_e, bd.embeddings, cfg, pre, "embeddings");
        resolve(bd_h, bd.holdout_pairs, cfg, pre, "holdout-pairs");
        resolve(bd_hf, bd.holdout_frac, cfg, pre, "holdout-frac");
        resolve(bd_seed, bd.seed, cfg, pre, "seed");
        resolve(bd_out, bd.out_prefix, cfg, pre, "out-prefix");
        resolve(bd_fmt, bd.format, cfg, pre, "format");

        auto pairs = read_pairs_tsv(bd.pairs);
        std::vector<EmbeddingMatrix> mats;
        std::vector<const EmbeddingMatrix*> ptrs;
        auto fmt = vector_format_from_string(bd.format);
        for (const auto& spec : bd.embeddings)
            mats.push_back(load_embeddings(require_input(split_model_spec(spec).second), fmt));
        for (const auto& m : mats) ptrs.push_back(&m);
        if (!ptrs.empty()) pairs = filter_pairs(pairs, ptrs);

        SplitConfig scfg;
        scfg.rng_seed = bd.seed;
        scfg.holdout_pairs = bd.holdout_frac >= 0
                                 ? std::size_t(bd.holdout_frac * double(pairs.size()))
                                 : bd.holdout_pairs;
        auto ds = build_dataset(pairs, scfg);

        fs::path train_out = resolve_out(bd.out_prefix + ".train.csv");
        fs::path test_out = resolve_out(bd.out_prefix + ".test.csv");
        write_dataset_csv(ds.train, train_out);
        write_dataset_csv(ds.test, test_out);
        std::map<std::string, fs::path> inputs{{"pairs", bd.pairs}};
        for (const auto& spec : bd.embeddings) {
            auto [name, path] = split_model_spec(spec);
            inputs["embedding:" + name] = path;
        }
        json mcfg{{"holdout_pairs", scfg.holdout_pairs}};
        write_manifest(train_out, inputs, mcfg, bd.seed);
        write_manifest(test_out, inputs, mcfg, bd.seed);
        std::cout << "filtered_pairs=" << pairs.size() << " train=" << ds.train.size()
                  << " test=" << ds.test.size() << " -> " << train_out.string() << ", "
                  << test_out.string() << "\n";
    }));

    // --- run -------------------------------------------------------------
    auto* run = app.add_subcommand("run", "run the bootstrap experiment matrix");
    struct {
        std::string train_csv, test_csv, out_dir = "results", format = "word2vec-text";
        std::vector<std::string> embeddings;
        std::vector<std::string> transforms = {"vanilla",   "abl-n",     "abl-d",
                                               "abl-dn",    "rand-pred", "rand-vec",
                                               "del-ct-1h", "del-ct-2h", "del-ea-1h",
                                               "del-ea-2h"};
        std::size_t runs = 50, threads = 1;
        double alpha = 0.05;
        std::uint64_t seed = 1;
        bool keep_going = false;
    } rn;
    auto* rn_tr = run->add_option("--train", rn.train_csv, "train split CSV")->required();
    auto* rn_te = run->add_option("--test", rn.test_csv, "test split CSV")->required();
    auto* rn_e = run->add_option("--embeddings", rn.embeddings, "embedding files (name=path)")
                     ->required();
    auto* rn_t = run->add_option("--transforms", rn.transforms, "transform conditions");
    auto* rn_r = run->add_option("--runs", rn.runs, "bootstrap runs per cell");
    auto* rn_a = run->add_option("--alpha", rn.alpha, "significance level");
    auto* rn_s = run->add_option("--seed", rn.seed, "base RNG seed");
    auto* rn_th = run->add_option("--threads", rn.threads, "worker threads (0 = all cores)");
    auto* rn_o = run->add_option("--out-dir", rn.out_dir, "results directory");
    auto* rn_fmt = run->add_option("--format", rn.format, "embedding file format");
    run->add_flag("--keep-going", rn.keep_going, "collect cell failures instead of aborting");
    run->callback(guard([&] {
        json cfg = load_config_section(config_path, "run");
        json pre = preset_section(preset, "run");
        resolve(rn_tr, rn.train_csv, cfg, pre, "train");
        resolve(rn_te, rn.test_csv, cfg, pre, "test");
        resolve(rn_e, rn.embeddings, cfg, pre, "embeddings");
        resolve(rn_t, rn.transforms, cfg, pre, "transforms");
        resolve(rn_r, rn.runs, cfg, pre, "runs");
        resolve(rn_a, rn.alpha, cfg, pre, "alpha");
        resolve(rn_s, rn.seed, cfg, pre, "seed");
        resolve(rn_th, rn.threads, cfg, pre, "threads");
        resolve(rn_o, rn.out_dir, cfg, pre, "out-dir");
        resolve(rn_fmt, rn.format, cfg, pre, "format");

        ProbingDataset ds;
        ds.train = read_dataset_csv(require_input(rn.train_csv));
        ds.test = read_dataset_csv(require_input(rn.test_csv));

        ExperimentOptions opt;
        opt.transforms = parse_transforms(rn.transforms);
        opt.n_runs = rn.runs;
        opt.alpha = rn.alpha;
        opt.base_seed = rn.seed;
        opt.n_threads = rn.threads;
        opt.keep_going = rn.keep_going;

        fs::path out_dir = resolve_out(rn.out_dir);
        fs::create_directories(out_dir);
        auto fmt = vector_format_from_string(rn.format);
        for (const auto& spec : rn.embeddings) {
            auto [name, path] = split_model_spec(spec);
            auto embedding = load_embeddings(require_input(path), fmt);
            auto results = run_model_experiment(name, embedding, ds, opt);

            fs::path jpath = out_dir / (name + ".results.json");
            std::ofstream js(jpath);
            if (!js) throw IoError("cannot write results: " + jpath.string());
            js << to_json(results).dump(2) << '\n';
            js.close();
            std::ofstream table(out_dir / (name + ".table.txt"));
            table << render_table(results);
            std::ofstream csv(out_dir / (name + ".table.csv"));
            csv << render_table_csv(results);
            write_manifest(jpath,
                           {{"train", rn.train_csv},
                            {"test", rn.test_csv},
                            {"embedding:" + name, path}},
                           {{"transforms", rn.transforms},
                            {"runs", rn.runs},
                            {"alpha", rn.alpha},
                            {"threads", rn.threads}},
                           rn.seed);
            std::cout << render_table(results);
        }
    }));

    // --- norms -----------------------------------------------------------
    auto* norms = app.add_subcommand("norms", "per-role vector-norm box-plot summaries");
    struct {
        std::string pairs, out_prefix = "norms", format = "word2vec-text";
        std::vector<std::string> embeddings;
        bool unique_words = false;
    } nm;
    auto* nm_p = norms->add_option("--pairs", nm.pairs, "input pair TSV")->required();
    auto* nm_e = norms->add_option("--embeddings", nm.embeddings, "embedding files (name=path)")
                     ->required();
    auto* nm_o = norms->add_option("--out-prefix", nm.out_prefix,
                                   "writes <prefix>.csv and <prefix>.svg");
    auto* nm_fmt = norms->add_option("--format", nm.format, "embedding file format");
    norms->add_flag("--unique-words", nm.unique_words, "count each word once per role");
    norms->callback(guard([&] {
        json cfg = load_config_section(config_path, "norms");
        json pre = preset_section(preset, "norms");
        resolve(nm_p, nm.pairs, cfg, pre, "pairs");
        resolve(nm_e, nm.embeddings, cfg, pre, "embeddings");
        resolve(nm_o, nm.out_prefix, cfg, pre, "out-prefix");
        resolve(nm_fmt, nm.format, cfg, pre, "format");

        auto pairs = read_pairs_tsv(nm.pairs);
        auto fmt = vector_format_from_string(nm.format);
        std::vector<RoleNormSummary> summaries;
        std::map<std::string, fs::path> inputs{{"pairs", nm.pairs}};
        for (const auto& spec : nm.embeddings) {
            auto [name, path] = split_model_spec(spec);
            auto m = load_embeddings(require_input(path), fmt);
            auto covered = filter_pairs(pairs, {&m});
            NormAnalysisOptions nopt;
            nopt.unique_words = nm.unique_words;
            nopt.model_name = name;
            auto [hyper, hypo] = role_norm_summary(m, covered, nopt);
            summaries.push_back(hyper);
            summaries.push_back(hypo);
            inputs["embedding:" + name] = path;
            std::cout << name << ": median hypernym norm=" << hyper.median
                      << " median hyponym norm=" << hypo.median << "\n";
        }
        fs::path csv_out = resolve_out(nm.out_prefix + ".csv");
        fs::path svg_out = resolve_out(nm.out_prefix + ".svg");
        export_boxplot(summaries, csv_out, svg_out);
        write_manifest(csv_out, inputs, {{"unique_words", nm.unique_words}}, 0);
        std::cout << "-> " << csv_out.string() << ", " << svg_out.string() << "\n";
    }));

    // --- report ----------------------------------------------------------
    auto* report = app.add_subcommand("report", "render stored result JSON as tables");
    struct {
        std::vector<std::string> results;
        std::string out;
        bool csv = false;
    } rp;
    report->add_option("--results", rp.results, "result JSON files")->required();
    report->add_option("--out", rp.out, "also write the rendered report to this file");
    report->add_flag("--csv", rp.csv, "emit CSV instead of aligned text");
    report->callback(guard([&] {
        std::string rendered;
        for (const auto& path : rp.results) {
            require_input(path);
            std::ifstream in(path);
            if (!in) throw IoError("cannot open results: " + path);
            json j;
            try {
                j = json::parse(in);
            } catch (const json::exception& e) {
                throw DataError(std::string("results file ") + path + ": " + e.what());
            }
            auto results = model_results_from_json(j);
            rendered += rp.csv ? render_table_csv(results) : render_table(results);
        }
        std::cout << rendered;
        if (!rp.out.empty()) {
            fs::path out = resolve_out(rp.out);
            std::ofstream os(out);
            if (!os) throw IoError("cannot write report: " + out.string());
            os << rendered;
        }
    }));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }
    return exit_code;
}
