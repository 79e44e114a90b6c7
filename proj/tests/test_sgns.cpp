#include <catch_amalgamated.hpp>

#include "hyprobe/sgns.hpp"

#include <cmath>

using namespace hyprobe;

namespace {

double cosine(std::span<const float> a, std::span<const float> b) {
    double ab = 0, aa = 0, bb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ab += double(a[i]) * b[i];
        aa += double(a[i]) * a[i];
        bb += double(b[i]) * b[i];
    }
    return ab / std::sqrt(aa * bb);
}

Corpus separation_fixture() {
    // a,b always co-occur; c,d only with each other
    Corpus corpus;
    for (int i = 0; i < 400; ++i) {
        corpus.push_back({"a", "b", "a", "b"});
        corpus.push_back({"c", "d", "c", "d"});
    }
    return corpus;
}

SgnsConfig small_config() {
    SgnsConfig cfg;
    cfg.dim = 16;
    cfg.window = 2;
    cfg.min_count = 1;
    cfg.epochs = 10;
    cfg.subsample_threshold = 0;  // tiny vocab, keep everything
    cfg.rng_seed = 42;
    return cfg;
}

}  // namespace

TEST_CASE("sgns separates co-occurring words") {
    auto m = train_sgns(separation_fixture(), small_config());
    CHECK(cosine(m["a"], m["b"]) > cosine(m["a"], m["c"]));
}

TEST_CASE("sgns rejects an empty corpus") {
    CHECK_THROWS_AS(train_sgns({}, small_config()), DataError);
}

TEST_CASE("words below min_count are absent from the vocabulary") {
    Corpus corpus;
    for (int i = 0; i < 20; ++i) corpus.push_back({"common", "frequent"});
    corpus.push_back({"common", "rare"});
    auto cfg = small_config();
    cfg.min_count = 5;
    auto m = train_sgns(corpus, cfg);
    CHECK(m.contains("common"));
    CHECK_FALSE(m.contains("rare"));
}

TEST_CASE("no word meets min_count is a training error") {
    auto cfg = small_config();
    cfg.min_count = 100;
    CHECK_THROWS_AS(train_sgns({{"a", "b"}}, cfg), DataError);
}

TEST_CASE("negative sampling follows the count^0.75 distribution") {
    std::vector<std::size_t> counts = {1000, 100, 10};
    NegativeSampler sampler(counts, 0.75);
    Rng rng(123);
    std::vector<std::size_t> hits(3, 0);
    const std::size_t n = 200'000;
    for (std::size_t i = 0; i < n; ++i) ++hits[sampler.sample(rng)];

    double z = 0;
    for (auto c : counts) z += std::pow(double(c), 0.75);
    // chi^2 against expected proportions; 2 dof, 13.8 is the 0.999 cutoff
    double chi2 = 0;
    for (std::size_t k = 0; k < 3; ++k) {
        double expect = std::pow(double(counts[k]), 0.75) / z * double(n);
        chi2 += (double(hits[k]) - expect) * (double(hits[k]) - expect) / expect;
    }
    CHECK(chi2 < 13.8);
}

TEST_CASE("sgns loss decreases over epochs on the fixture corpus") {
    auto res = train_sgns_full(separation_fixture(), small_config());
    REQUIRE(res.epoch_losses.size() == 10);
    CHECK(res.epoch_losses.back() < res.epoch_losses.front());
}

TEST_CASE("sgns is deterministic given the seed") {
    auto cfg = small_config();
    auto m1 = train_sgns(separation_fixture(), cfg);
    auto m2 = train_sgns(separation_fixture(), cfg);
    for (const auto& w : m1.words())
        for (std::size_t d = 0; d < m1.dim(); ++d) CHECK(m1[w][d] == m2[w][d]);
}

TEST_CASE("sgns vectors are finite") {
    auto m = train_sgns(separation_fixture(), small_config());
    for (const auto& w : m.words())
        for (float v : m[w]) CHECK(std::isfinite(v));
}

TEST_CASE("sgns config validation") {
    auto cfg = small_config();
    cfg.initial_learning_rate = -1;
    CHECK_THROWS_AS(train_sgns(separation_fixture(), cfg), ConfigError);
}
