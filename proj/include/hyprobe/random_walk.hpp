#pragma once

#include <fstream>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "hyprobe/common.hpp"
#include "hyprobe/taxonomy.hpp"

namespace hyprobe {

enum class DirectionMode { up_only, down_only, both };

inline const char* to_string(DirectionMode m) {
    switch (m) {
        case DirectionMode::up_only: return "up";
        case DirectionMode::down_only: return "down";
        default: return "both";
    }
}

inline DirectionMode direction_mode_from_string(const std::string& s) {
    if (s == "up") return DirectionMode::up_only;
    if (s == "down") return DirectionMode::down_only;
    if (s == "both") return DirectionMode::both;
    throw ConfigError("unknown direction mode: " + s);
}

struct WalkConfig {
    std::size_t num_sentences = 2'000'000;
    DirectionMode direction_mode = DirectionMode::both;
    std::size_t min_sentence_length = 2;
    double continue_probability = 0.85;
    std::size_t max_sentence_length = 30;
    std::uint64_t rng_seed = 1;
    std::size_t retry_budget = 1000;  // per sentence

    void validate() const {
        if (num_sentences < 1) throw ConfigError("num_sentences must be >= 1");
        if (min_sentence_length < 1) throw ConfigError("min_sentence_length must be >= 1");
        if (min_sentence_length > max_sentence_length)
            throw ConfigError("min_sentence_length exceeds max_sentence_length");
        if (continue_probability <= 0.0 || continue_probability >= 1.0)
            throw ConfigError("continue_probability must lie in (0,1)");
    }
};

using SentenceSink = std::function<void(const std::vector<std::string>&)>;

// Random walk over the taxonomy: start at a uniform synset, emit one uniform
// lemma per visited node, continue to a uniform neighbor with the configured
// probability. Sentences shorter than the minimum are discarded and redrawn.
inline void generate_pseudo_corpus(const TaxonomyGraph& graph, const WalkConfig& cfg,
                                   const SentenceSink& sink) {
    cfg.validate();
    if (graph.synsets.empty()) throw DataError("cannot walk an empty graph");

    const std::size_t n = graph.synsets.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (auto [h, o] : graph.hyper_edges) {
        switch (cfg.direction_mode) {
            case DirectionMode::down_only: adj[h].push_back(o); break;
            case DirectionMode::up_only: adj[o].push_back(h); break;
            case DirectionMode::both:
                adj[h].push_back(o);
                adj[o].push_back(h);
                break;
        }
    }

    Rng rng(cfg.rng_seed);
    std::uniform_int_distribution<std::size_t> start_dist(0, n - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<std::string> sentence;
    for (std::size_t s = 0; s < cfg.num_sentences; ++s) {
        std::size_t attempts = 0;
        for (;;) {
            if (attempts++ >= cfg.retry_budget)
                throw DataError("walk retry budget exhausted: graph cannot produce a sentence of length " +
                                std::to_string(cfg.min_sentence_length));
            sentence.clear();
            std::size_t node = start_dist(rng);
            while (sentence.size() < cfg.max_sentence_length) {
                const auto& lemmas = graph.synsets[node].lemmas;
                if (lemmas.size() == 1) {
                    sentence.push_back(lemmas[0]);
                } else {
                    std::uniform_int_distribution<std::size_t> pick(0, lemmas.size() - 1);
                    sentence.push_back(lemmas[pick(rng)]);
                }
                if (unit(rng) >= cfg.continue_probability) break;
                const auto& nbrs = adj[node];
                if (nbrs.empty()) break;
                std::uniform_int_distribution<std::size_t> pick(0, nbrs.size() - 1);
                node = nbrs[pick(rng)];
            }
            if (sentence.size() >= cfg.min_sentence_length) break;
        }
        sink(sentence);
    }
}

inline std::vector<std::vector<std::string>> generate_pseudo_corpus(
    const TaxonomyGraph& graph, const WalkConfig& cfg) {
    std::vector<std::vector<std::string>> corpus;
    corpus.reserve(cfg.num_sentences);
    generate_pseudo_corpus(graph, cfg,
                           [&](const std::vector<std::string>& s) { corpus.push_back(s); });
    return corpus;
}

// One sentence per line, single-space separated.
inline void write_corpus(const TaxonomyGraph& graph, const WalkConfig& cfg,
                         std::ostream& out) {
    generate_pseudo_corpus(graph, cfg, [&](const std::vector<std::string>& s) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (i) out << ' ';
            out << s[i];
        }
        out << '\n';
    });
}

inline std::vector<std::vector<std::string>> read_corpus(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open corpus: " + path.string());
    std::vector<std::vector<std::string>> corpus;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> sent;
        std::size_t pos = 0;
        while (pos < line.size()) {
            auto sp = line.find(' ', pos);
            if (sp == std::string::npos) sp = line.size();
            if (sp > pos) sent.emplace_back(line, pos, sp - pos);
            pos = sp + 1;
        }
        if (!sent.empty()) corpus.push_back(std::move(sent));
    }
    return corpus;
}

}  // namespace hyprobe
