#include <catch_amalgamated.hpp>

#include "hyprobe/probe.hpp"

#include <cmath>

using namespace hyprobe;

namespace {

// Exhaustive pairwise AUC: wins + half-credit ties over all pos/neg pairs.
double auc_brute(const std::vector<double>& scores, const std::vector<int>& labels) {
    double s = 0;
    std::size_t np = 0, nn = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!labels[i]) continue;
        ++np;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j]) continue;
            if (scores[i] > scores[j]) s += 1.0;
            else if (scores[i] == scores[j]) s += 0.5;
        }
    }
    for (int l : labels) nn += std::size_t(l == 0);
    return s / (double(np) * double(nn));
}

FeatureMatrix blobs(std::size_t n_per_class, std::size_t dim, std::vector<int>* labels,
                    std::uint64_t seed) {
    FeatureMatrix X;
    Rng rng(seed);
    std::normal_distribution<double> noise(0.0, 0.5);
    for (std::size_t c = 0; c < 2; ++c) {
        double center = c ? 2.0 : -2.0;
        for (std::size_t i = 0; i < n_per_class; ++i) {
            std::vector<double> row(dim);
            for (auto& x : row) x = center + noise(rng);
            X.push_row(row);
            labels->push_back(int(c));
        }
    }
    return X;
}

}  // namespace

TEST_CASE("auc_roc on a worked example") {
    // positives 0.35 and 0.8 vs negatives 0.1 and 0.4: 3 of 4 pairs ordered
    std::vector<double> s{0.1, 0.4, 0.35, 0.8};
    std::vector<int> y{0, 0, 1, 1};
    CHECK(auc_roc(s, y) == Catch::Approx(0.75));
}

TEST_CASE("auc_roc extremes and ties") {
    CHECK(auc_roc({0.1, 0.9}, {0, 1}) == Catch::Approx(1.0));
    CHECK(auc_roc({0.9, 0.1}, {0, 1}) == Catch::Approx(0.0));
    CHECK(auc_roc({0.5, 0.5}, {0, 1}) == Catch::Approx(0.5));
    CHECK(auc_roc({0.3, 0.3, 0.3, 0.7}, {0, 1, 0, 1}) == Catch::Approx(0.75));
}

TEST_CASE("auc_roc matches the pairwise definition on random tied data") {
    Rng rng(31);
    std::uniform_int_distribution<int> level(0, 4);  // coarse levels force ties
    std::bernoulli_distribution coin(0.4);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> s;
        std::vector<int> y{0, 1};  // both classes guaranteed
        s.push_back(level(rng) / 4.0);
        s.push_back(level(rng) / 4.0);
        for (int i = 0; i < 30; ++i) {
            s.push_back(level(rng) / 4.0);
            y.push_back(coin(rng) ? 1 : 0);
        }
        CHECK(auc_roc(s, y) == Catch::Approx(auc_brute(s, y)).margin(1e-12));
    }
}

TEST_CASE("auc_roc is invariant under monotone score transforms") {
    std::vector<double> s{0.11, 0.52, 0.37, 0.91, 0.52, 0.08};
    std::vector<int> y{0, 1, 0, 1, 1, 0};
    auto t = s;
    for (auto& x : t) x = 3.0 * x + 10.0;
    CHECK(auc_roc(s, y) == Catch::Approx(auc_roc(t, y)).margin(1e-12));
}

TEST_CASE("flipping every label complements the AUC") {
    std::vector<double> s{0.11, 0.52, 0.37, 0.91, 0.52, 0.08};
    std::vector<int> y{0, 1, 0, 1, 1, 0};
    auto flipped = y;
    for (auto& l : flipped) l = 1 - l;
    CHECK(auc_roc(s, y) + auc_roc(s, flipped) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("auc_roc rejects degenerate input") {
    CHECK_THROWS_AS(auc_roc({0.1, 0.2}, {1, 1}), DataError);
    CHECK_THROWS_AS(auc_roc({0.1, 0.2}, {0, 0}), DataError);
    CHECK_THROWS_AS(auc_roc({0.1}, {0, 1}), DataError);
}

TEST_CASE("analytic gradients match central differences") {
    ProbeConfig cfg;
    cfg.hidden_units = 3;
    Rng rng(7);
    MlpProbe p;
    p.init(4, cfg, rng);

    FeatureMatrix X;
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int i = 0; i < 5; ++i) {
        std::vector<double> row(4);
        for (auto& x : row) x = noise(rng);
        X.push_row(row);
    }
    std::vector<int> y{0, 1, 1, 0, 1};
    std::vector<std::size_t> idx{0, 1, 2, 3, 4};
    const double l2 = 0.01;

    MlpProbe::Grads g;
    p.batch_loss_and_grads(X, y, idx, l2, &g);

    auto numeric = [&](double& w) {
        const double h = 1e-6;
        double orig = w;
        w = orig + h;
        double up = p.batch_loss_and_grads(X, y, idx, l2, nullptr);
        w = orig - h;
        double dn = p.batch_loss_and_grads(X, y, idx, l2, nullptr);
        w = orig;
        return (up - dn) / (2 * h);
    };
    auto close = [](double analytic, double num) {
        return std::fabs(analytic - num) <= 1e-5 * std::max(1.0, std::fabs(num));
    };

    for (std::size_t k = 0; k < p.w1.size(); ++k) CHECK(close(g.w1[k], numeric(p.w1[k])));
    for (std::size_t k = 0; k < p.b1.size(); ++k) CHECK(close(g.b1[k], numeric(p.b1[k])));
    for (std::size_t k = 0; k < p.w2.size(); ++k) CHECK(close(g.w2[k], numeric(p.w2[k])));
    CHECK(close(g.b2, numeric(p.b2)));
}

TEST_CASE("training on separable blobs reaches AUC 1") {
    std::vector<int> y;
    auto X = blobs(20, 4, &y, 5);
    ProbeConfig cfg;
    cfg.hidden_units = 16;
    cfg.max_epochs = 100;
    cfg.batch_size = 16;
    cfg.rng_seed = 5;
    auto probe = train_probe(X, y, cfg);
    auto scores = predict_scores(probe, X);
    CHECK(auc_roc(scores, y) > 0.999);
}

TEST_CASE("training reduces the regularized loss below its initial value") {
    std::vector<int> y;
    auto X = blobs(20, 4, &y, 9);
    ProbeConfig cfg;
    cfg.hidden_units = 8;
    cfg.max_epochs = 50;
    cfg.rng_seed = 9;
    auto probe = train_probe(X, y, cfg);

    Rng rng(cfg.rng_seed);
    MlpProbe fresh;
    fresh.init(X.cols, cfg, rng);
    std::vector<std::size_t> all(X.rows);
    std::iota(all.begin(), all.end(), 0);
    double initial = fresh.batch_loss_and_grads(X, y, all, cfg.l2_penalty, nullptr);
    CHECK(probe.final_loss < initial);
    CHECK(probe.epochs_run >= 1);
}

TEST_CASE("early stopping kicks in before max_epochs on easy data") {
    std::vector<int> y;
    auto X = blobs(20, 4, &y, 13);
    ProbeConfig cfg;
    cfg.hidden_units = 8;
    cfg.max_epochs = 1000;
    cfg.rng_seed = 13;
    auto probe = train_probe(X, y, cfg);
    CHECK(probe.epochs_run < cfg.max_epochs);
}

TEST_CASE("training is deterministic given the seed") {
    std::vector<int> y;
    auto X = blobs(10, 3, &y, 21);
    ProbeConfig cfg;
    cfg.hidden_units = 6;
    cfg.max_epochs = 20;
    cfg.rng_seed = 21;
    auto a = train_probe(X, y, cfg);
    auto b = train_probe(X, y, cfg);
    CHECK(a.w1 == b.w1);
    CHECK(a.w2 == b.w2);
    CHECK(a.b1 == b.b1);
    CHECK(a.b2 == b.b2);
}

TEST_CASE("train_probe input validation") {
    FeatureMatrix X;
    X.push_row({1.0, 2.0});
    X.push_row({3.0, 4.0});
    ProbeConfig cfg;
    cfg.max_epochs = 1;

    CHECK_THROWS_AS(train_probe(X, {1, 1}, cfg), DataError);      // single class
    CHECK_THROWS_AS(train_probe(X, {0, 1, 1}, cfg), DataError);   // count mismatch

    FeatureMatrix bad;
    bad.push_row({1.0, std::nan("")});
    bad.push_row({3.0, 4.0});
    CHECK_THROWS_AS(train_probe(bad, {0, 1}, cfg), DataError);

    ProbeConfig zero;
    zero.hidden_units = 0;
    CHECK_THROWS_AS(train_probe(X, {0, 1}, zero), ConfigError);
}

TEST_CASE("predict_scores rejects mismatched feature width") {
    std::vector<int> y;
    auto X = blobs(5, 3, &y, 2);
    ProbeConfig cfg;
    cfg.hidden_units = 4;
    cfg.max_epochs = 2;
    auto probe = train_probe(X, y, cfg);
    FeatureMatrix wide;
    wide.push_row({1.0, 2.0, 3.0, 4.0});
    CHECK_THROWS_AS(predict_scores(probe, wide), DataError);
}
