#include <catch_amalgamated.hpp>

#include "hyprobe/experiment.hpp"
#include "hyprobe/manifest.hpp"

#include <fstream>

#include "test_util.hpp"

using namespace hyprobe;

namespace {

// Separable fixture: the role signal lives entirely in the first half of each
// word vector (dims 0-1), so del-ea-1h (which keeps the second half) erases it.
struct Fixture {
    EmbeddingMatrix embedding{4};
    ProbingDataset dataset;
};

Fixture make_fixture(std::size_t n_pairs = 30, std::size_t holdout = 6) {
    Fixture f;
    Rng rng(99);
    std::normal_distribution<double> noise(0.0, 0.1);
    std::vector<WordPair> pairs;
    for (std::size_t i = 0; i < n_pairs; ++i) {
        std::string h = "h" + std::to_string(i), w = "w" + std::to_string(i);
        f.embedding.add(h, std::vector<float>{float(1.5 + noise(rng)), float(noise(rng)), 0.0f, 0.0f});
        f.embedding.add(w, std::vector<float>{float(-1.5 + noise(rng)), float(noise(rng)), 0.0f, 0.0f});
        pairs.push_back({h, w});
    }
    f.dataset = build_dataset(pairs, {.holdout_pairs = holdout, .rng_seed = 3});
    return f;
}

ProbeConfig small_probe() {
    ProbeConfig cfg;
    cfg.hidden_units = 8;
    cfg.max_epochs = 80;
    cfg.batch_size = 32;
    return cfg;
}

}  // namespace

TEST_CASE("full experiment: references, shading, deletion asterisks") {
    auto f = make_fixture();
    ExperimentOptions opt;
    opt.transforms = {TransformKind::vanilla,  TransformKind::rand_pred,
                      TransformKind::rand_vec, TransformKind::abl_D_N,
                      TransformKind::del_ea_1h, TransformKind::del_ea_2h};
    opt.n_runs = 4;
    opt.base_seed = 11;
    opt.probe_config = small_probe();

    auto results = run_model_experiment("toy", f.embedding, f.dataset, opt);
    REQUIRE(results.cells.size() == 6);
    CHECK(results.model == "toy");
    for (const auto& c : results.cells) CHECK(c.stats.n_runs == 4);

    const auto* vanilla = results.find(TransformKind::vanilla);
    const auto* rand_pred = results.find(TransformKind::rand_pred);
    const auto* keep_signal = results.find(TransformKind::del_ea_2h);
    const auto* drop_signal = results.find(TransformKind::del_ea_1h);
    REQUIRE(vanilla);
    REQUIRE(rand_pred);
    REQUIRE(keep_signal);
    REQUIRE(drop_signal);

    CHECK(vanilla->stats.mean_auc > 0.9);
    CHECK(rand_pred->stats.mean_auc > 0.2);
    CHECK(rand_pred->stats.mean_auc < 0.8);
    CHECK(keep_signal->stats.mean_auc > 0.9);
    // second halves are all-zero, so this probe can only predict the base rate
    CHECK(drop_signal->stats.mean_auc == Catch::Approx(0.5));

    REQUIRE(vanilla->verdict.has_value());
    CHECK(vanilla->verdict->grouping == ShadingGroup::same_as_vanilla);
    CHECK(rand_pred->verdict->grouping == ShadingGroup::same_as_random);

    CHECK(drop_signal->asterisk);
    CHECK_FALSE(keep_signal->asterisk);
}

TEST_CASE("empty transform list is a config error") {
    auto f = make_fixture(8, 2);
    ExperimentOptions opt;
    opt.n_runs = 2;
    CHECK_THROWS_AS(run_model_experiment("toy", f.embedding, f.dataset, opt), ConfigError);
}

TEST_CASE("a dataset with an empty split cannot be encoded") {
    auto f = make_fixture(8, 0);  // holdout 0: no test pool
    CHECK_THROWS_AS(EncodedDataset::build(f.embedding, f.dataset), DataError);
}

TEST_CASE("run_bootstrap is deterministic and thread-count independent") {
    auto f = make_fixture(12, 3);
    auto enc = EncodedDataset::build(f.embedding, f.dataset);
    BootstrapSpec spec;
    spec.kind = TransformKind::abl_D_N;  // heaviest RNG use
    spec.ranges = compute_ranges(f.embedding, f.dataset);
    spec.probe_config = small_probe();
    spec.base_seed = 7;
    spec.n_runs = 4;

    auto serial = run_bootstrap(enc, spec);
    auto again = run_bootstrap(enc, spec);
    CHECK(serial.per_run_auc == again.per_run_auc);

    spec.n_threads = 2;
    auto threaded = run_bootstrap(enc, spec);
    CHECK(serial.per_run_auc == threaded.per_run_auc);

    spec.n_runs = 1;
    CHECK_THROWS_AS(run_bootstrap(enc, spec), ConfigError);
}

TEST_CASE("results JSON round-trips") {
    auto f = make_fixture(10, 2);
    ExperimentOptions opt;
    opt.transforms = {TransformKind::vanilla, TransformKind::rand_pred};
    opt.n_runs = 3;
    opt.probe_config = small_probe();
    auto results = run_model_experiment("toy", f.embedding, f.dataset, opt);

    auto j = to_json(results);
    auto back = model_results_from_json(j);
    REQUIRE(back.cells.size() == results.cells.size());
    CHECK(back.model == results.model);
    for (std::size_t i = 0; i < back.cells.size(); ++i) {
        CHECK(back.cells[i].kind == results.cells[i].kind);
        CHECK(back.cells[i].stats.per_run_auc == results.cells[i].stats.per_run_auc);
        CHECK(back.cells[i].stats.mean_auc ==
              Catch::Approx(results.cells[i].stats.mean_auc).margin(1e-12));
        CHECK(back.cells[i].asterisk == results.cells[i].asterisk);
        REQUIRE(back.cells[i].verdict.has_value() == results.cells[i].verdict.has_value());
        if (back.cells[i].verdict)
            CHECK(back.cells[i].verdict->grouping == results.cells[i].verdict->grouping);
    }

    auto table = render_table(back);
    CHECK(table.find("vanilla") != std::string::npos);
    auto csv = render_table_csv(back);
    CHECK(csv.find("model,condition,mean_auc") == 0);
}

TEST_CASE("format_auc drops the leading zero") {
    CHECK(format_auc(0.9256) == ".9256");
    CHECK(format_auc(0.5) == ".5000");
    CHECK(format_auc(1.0) == "1.0000");
    CHECK(format_auc(-0.05) == "-.0500");
    CHECK(format_auc(0.00031, 4) == ".0003");
}

TEST_CASE("probe checkpoints round-trip through JSON") {
    FeatureMatrix X;
    Rng rng(3);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<int> y;
    for (int i = 0; i < 20; ++i) {
        std::vector<double> row(4);
        double c = i % 2 ? 1.5 : -1.5;
        for (auto& x : row) x = c + noise(rng);
        X.push_row(row);
        y.push_back(i % 2);
    }
    ProbeConfig cfg = small_probe();
    cfg.max_epochs = 10;
    auto probe = train_probe(X, y, cfg);

    TempDir tmp("ckpt");
    save_probe(probe, tmp.path / "probe.json");
    auto back = load_probe(tmp.path / "probe.json");
    CHECK(back.w1 == probe.w1);
    CHECK(back.b2 == probe.b2);
    CHECK(predict_scores(back, X) == predict_scores(probe, X));

    // corrupt the declared shape
    {
        std::ifstream in(tmp.path / "probe.json");
        nlohmann::json j = nlohmann::json::parse(in);
        j["hidden"] = probe.hidden + 1;
        std::ofstream out(tmp.path / "bad.json");
        out << j.dump();
    }
    CHECK_THROWS_AS(load_probe(tmp.path / "bad.json"), DataError);
}

TEST_CASE("fnv1a matches the published test vector") {
    CHECK(fnv1a("abc") == 0xe71fa2190541574bULL);
}

TEST_CASE("manifests record input hashes, config, and seed") {
    TempDir tmp("manifest");
    tmp.file("input.txt", "abc");
    tmp.file("artifact.bin", "payload");
    write_manifest(tmp.path / "artifact.bin", {{"corpus", tmp.path / "input.txt"}},
                   nlohmann::json{{"dim", 300}}, 42);

    std::ifstream in(tmp.path / "artifact.bin.manifest.json");
    REQUIRE(in.good());
    nlohmann::json j = nlohmann::json::parse(in);
    CHECK(j.at("artifact") == "artifact.bin");
    CHECK(j.at("seed") == 42);
    CHECK(j.at("config").at("dim") == 300);
    CHECK(j.at("inputs").at("corpus").at("fnv1a64") == "e71fa2190541574b");

    CHECK_THROWS_AS(write_manifest(tmp.path / "artifact.bin",
                                   {{"missing", tmp.path / "nope.txt"}}, {}, 1),
                    IoError);
}
