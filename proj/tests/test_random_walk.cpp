#include <catch_amalgamated.hpp>

#include "hyprobe/random_walk.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "test_util.hpp"

using namespace hyprobe;

namespace {

TaxonomyGraph chain_graph(std::size_t n) {
    TaxonomyGraph g;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        auto a = g.add_synset({"s" + std::to_string(i), {"w" + std::to_string(i)}});
        auto b = g.add_synset({"s" + std::to_string(i + 1), {"w" + std::to_string(i + 1)}});
        g.add_edge(a, b);
    }
    g.finalize_edges();
    return g;
}

}  // namespace

TEST_CASE("walk produces the requested number of sentences within length bounds") {
    auto g = chain_graph(10);
    WalkConfig cfg;
    cfg.num_sentences = 500;
    cfg.min_sentence_length = 2;
    cfg.max_sentence_length = 8;
    cfg.rng_seed = 7;
    auto corpus = generate_pseudo_corpus(g, cfg);
    REQUIRE(corpus.size() == 500);
    for (const auto& s : corpus) {
        CHECK(s.size() >= 2);
        CHECK(s.size() <= 8);
        for (const auto& tok : s) CHECK(tok.starts_with("w"));
    }
}

TEST_CASE("isolated single-node graph cannot satisfy a 2-token minimum") {
    TaxonomyGraph g;
    g.add_synset({"only", {"only"}});
    WalkConfig cfg;
    cfg.num_sentences = 1;
    cfg.min_sentence_length = 2;
    cfg.retry_budget = 50;
    CHECK_THROWS_AS(generate_pseudo_corpus(g, cfg), DataError);
}

TEST_CASE("identical seeds give byte-identical corpora") {
    auto g = chain_graph(20);
    WalkConfig cfg;
    cfg.num_sentences = 200;
    cfg.rng_seed = 99;
    std::ostringstream a, b;
    write_corpus(g, cfg, a);
    write_corpus(g, cfg, b);
    CHECK(a.str() == b.str());
    CHECK(a.str() != "");
}

TEST_CASE("invalid configs are rejected") {
    auto g = chain_graph(4);
    WalkConfig cfg;
    cfg.min_sentence_length = 10;
    cfg.max_sentence_length = 5;
    CHECK_THROWS_AS(generate_pseudo_corpus(g, cfg), ConfigError);
    cfg = WalkConfig{};
    cfg.continue_probability = 1.5;
    CHECK_THROWS_AS(generate_pseudo_corpus(g, cfg), ConfigError);
    cfg = WalkConfig{};
    cfg.num_sentences = 0;
    CHECK_THROWS_AS(generate_pseudo_corpus(g, cfg), ConfigError);
}

TEST_CASE("directional modes only traverse edges in the allowed direction") {
    // star: root is hypernym of l1..l3
    TaxonomyGraph g;
    auto root = g.add_synset({"root", {"root"}});
    for (int i = 1; i <= 3; ++i) {
        auto leaf = g.add_synset({"l" + std::to_string(i), {"l" + std::to_string(i)}});
        g.add_edge(root, leaf);
    }
    g.finalize_edges();

    WalkConfig cfg;
    cfg.num_sentences = 300;
    cfg.direction_mode = DirectionMode::down_only;
    cfg.rng_seed = 3;
    for (const auto& s : generate_pseudo_corpus(g, cfg)) {
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
            // downward steps go root -> leaf only
            if (s[i] != "root") CHECK(s[i + 1] == s[i]);  // leaves have no out-edges
        }
    }

    cfg.direction_mode = DirectionMode::up_only;
    for (const auto& s : generate_pseudo_corpus(g, cfg)) {
        for (std::size_t i = 0; i + 1 < s.size(); ++i)
            if (s[i] == "root") CHECK(s[i + 1] == "root");
    }
}

TEST_CASE("adjacent tokens in `both` mode correspond to graph edges") {
    TempDir tmp("walk_edges");
    auto g = parse_edge_list(tmp.file("e.tsv", "a\tb\nb\tc\na\td\n"));
    std::set<std::pair<std::string, std::string>> edges;
    for (auto [h, o] : g.hyper_edges) {
        edges.insert({g.synsets[h].lemmas[0], g.synsets[o].lemmas[0]});
        edges.insert({g.synsets[o].lemmas[0], g.synsets[h].lemmas[0]});
    }
    WalkConfig cfg;
    cfg.num_sentences = 400;
    cfg.rng_seed = 11;
    for (const auto& s : generate_pseudo_corpus(g, cfg))
        for (std::size_t i = 0; i + 1 < s.size(); ++i)
            CHECK(edges.count({s[i], s[i + 1]}) == 1);
}

TEST_CASE("token frequency correlates positively with node degree") {
    // 20-node fixture: one hub plus a chain
    TaxonomyGraph g;
    auto hub = g.add_synset({"hub", {"hub"}});
    for (int i = 0; i < 10; ++i) {
        auto leaf = g.add_synset({"leaf" + std::to_string(i), {"leaf" + std::to_string(i)}});
        g.add_edge(hub, leaf);
    }
    std::size_t prev = hub;
    for (int i = 0; i < 9; ++i) {
        auto node = g.add_synset({"chain" + std::to_string(i), {"chain" + std::to_string(i)}});
        g.add_edge(prev, node);
        prev = node;
    }
    g.finalize_edges();

    std::vector<std::size_t> degree(g.synsets.size(), 0);
    for (auto [h, o] : g.hyper_edges) {
        ++degree[h];
        ++degree[o];
    }
    std::map<std::string, std::size_t> freq;
    WalkConfig cfg;
    cfg.num_sentences = 100'000;
    cfg.rng_seed = 5;
    generate_pseudo_corpus(g, cfg, [&](const std::vector<std::string>& s) {
        for (const auto& tok : s) ++freq[tok];
    });

    // Spearman rank correlation between degree and frequency
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < g.synsets.size(); ++i)
        pts.push_back({double(degree[i]), double(freq[g.synsets[i].lemmas[0]])});
    auto rank = [](std::vector<double> v) {
        std::vector<std::size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < idx.size(); ++i) r[idx[i]] = double(i);
        return r;
    };
    std::vector<double> xs, ys;
    for (auto& [x, y] : pts) {
        xs.push_back(x);
        ys.push_back(y);
    }
    auto rx = rank(xs), ry = rank(ys);
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= double(rx.size());
    my /= double(ry.size());
    double num = 0, dx = 0, dy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        num += (rx[i] - mx) * (ry[i] - my);
        dx += (rx[i] - mx) * (rx[i] - mx);
        dy += (ry[i] - my) * (ry[i] - my);
    }
    double spearman = num / std::sqrt(dx * dy);
    CHECK(spearman > 0.0);
}

TEST_CASE("corpus file round-trip preserves sentences") {
    auto g = chain_graph(8);
    WalkConfig cfg;
    cfg.num_sentences = 50;
    cfg.rng_seed = 21;
    auto corpus = generate_pseudo_corpus(g, cfg);
    TempDir tmp("corpus_rt");
    {
        std::ofstream out(tmp.path / "c.txt");
        write_corpus(g, cfg, out);
    }
    CHECK(read_corpus(tmp.path / "c.txt") == corpus);
}
