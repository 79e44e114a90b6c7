#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "hyprobe/common.hpp"
#include "hyprobe/embedding.hpp"
#include "hyprobe/taxonomy.hpp"

namespace hyprobe {

struct ProbingInstance {
    int label;  // 1 = first word is the hypernym, 0 = the hyponym
    std::string first_word;
    std::string second_word;

    bool operator==(const ProbingInstance&) const = default;
};

struct ProbingDataset {
    std::vector<ProbingInstance> train;
    std::vector<ProbingInstance> test;
};

struct SplitConfig {
    std::size_t holdout_pairs = 25'000;
    std::uint64_t rng_seed = 1;
};

// Keep only pairs covered by every embedding's vocabulary.
inline std::vector<WordPair> filter_pairs(const std::vector<WordPair>& pairs,
                                          const std::vector<const EmbeddingMatrix*>& embeddings) {
    if (embeddings.empty()) throw ConfigError("filter_pairs: need at least one embedding");
    std::vector<WordPair> out;
    for (const auto& p : pairs) {
        bool covered = std::all_of(embeddings.begin(), embeddings.end(), [&](const EmbeddingMatrix* m) {
            return m->contains(p.hypernym) && m->contains(p.hyponym);
        });
        if (covered) out.push_back(p);
    }
    if (out.empty()) throw DataError("filter_pairs: no pair covered by all embedding vocabularies");
    return out;
}

// Pair-level holdout, then mirror duplication within each split: every pair
// becomes (1, hyper, hypo) and (0, hypo, hyper), so labels are exactly
// balanced and no unordered pair straddles the train/test boundary.
inline ProbingDataset build_dataset(const std::vector<WordPair>& pairs, const SplitConfig& cfg) {
    if (pairs.empty()) throw DataError("build_dataset: empty pair list");
    if (cfg.holdout_pairs >= pairs.size())
        throw ConfigError("build_dataset: holdout_pairs must be smaller than the pair count");

    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(cfg.rng_seed);
    std::shuffle(order.begin(), order.end(), rng);

    auto expand = [&](std::size_t begin, std::size_t end) {
        std::vector<ProbingInstance> out;
        out.reserve(2 * (end - begin));
        for (std::size_t k = begin; k < end; ++k) {
            const WordPair& p = pairs[order[k]];
            out.push_back({1, p.hypernym, p.hyponym});
            out.push_back({0, p.hyponym, p.hypernym});
        }
        std::shuffle(out.begin(), out.end(), rng);
        return out;
    };

    ProbingDataset ds;
    ds.test = expand(0, cfg.holdout_pairs);
    ds.train = expand(cfg.holdout_pairs, pairs.size());
    return ds;
}

inline std::vector<double> encode_instance(const ProbingInstance& inst,
                                           const EmbeddingMatrix& m) {
    auto a = m[inst.first_word];   // throws naming the word if absent
    auto b = m[inst.second_word];
    std::vector<double> out;
    out.reserve(a.size() + b.size());
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

inline void write_dataset_csv(const std::vector<ProbingInstance>& instances,
                              const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write dataset: " + path.string());
    out << "label,word1,word2\n";
    for (const auto& i : instances)
        out << i.label << ',' << i.first_word << ',' << i.second_word << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

inline std::vector<ProbingInstance> read_dataset_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset: " + path.string());
    std::vector<ProbingInstance> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1 && line.starts_with("label,")) continue;
        if (line.empty()) continue;
        auto c1 = line.find(',');
        auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
        if (c2 == std::string::npos)
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": expected 3 fields");
        std::string lab = line.substr(0, c1);
        if (lab != "0" && lab != "1")
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": label must be 0 or 1");
        out.push_back({lab == "1" ? 1 : 0, line.substr(c1 + 1, c2 - c1 - 1), line.substr(c2 + 1)});
    }
    return out;
}

// Distinct words over both splits, in first-seen order.
inline std::vector<std::string> dataset_words(const ProbingDataset& ds) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    auto visit = [&](const std::vector<ProbingInstance>& v) {
        for (const auto& i : v) {
            if (seen.insert(i.first_word).second) out.push_back(i.first_word);
            if (seen.insert(i.second_word).second) out.push_back(i.second_word);
        }
    };
    visit(ds.train);
    visit(ds.test);
    return out;
}

}  // namespace hyprobe
