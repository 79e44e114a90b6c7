#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hyprobe/common.hpp"

namespace hyprobe {

struct Synset {
    std::string id;                   // offset + '-' + pos
    std::vector<std::string> lemmas;  // lowercase, underscores kept
};

// Directed hypernym edge: first is the hypernym synset, second the hyponym.
struct TaxonomyGraph {
    std::vector<Synset> synsets;
    std::unordered_map<std::string, std::size_t> index;  // synset id -> position
    std::vector<std::pair<std::size_t, std::size_t>> hyper_edges;

    std::size_t add_synset(Synset s) {
        auto it = index.find(s.id);
        if (it != index.end()) return it->second;
        std::size_t pos = synsets.size();
        index.emplace(s.id, pos);
        synsets.push_back(std::move(s));
        return pos;
    }

    // Deduplicates and rejects self-loops.
    void add_edge(std::size_t hyper, std::size_t hypo) {
        if (hyper == hypo) return;
        hyper_edges.emplace_back(hyper, hypo);
    }

    void finalize_edges() {
        std::sort(hyper_edges.begin(), hyper_edges.end());
        hyper_edges.erase(std::unique(hyper_edges.begin(), hyper_edges.end()),
                          hyper_edges.end());
    }
};

struct WordPair {
    std::string hypernym;
    std::string hyponym;

    bool operator==(const WordPair&) const = default;
    bool operator<(const WordPair& o) const {
        return std::tie(hypernym, hyponym) < std::tie(o.hypernym, o.hyponym);
    }
};

struct WordNetOptions {
    bool include_instance_hypernyms = false;  // `@i` pointers
    std::vector<std::string> pos_files = {"data.noun", "data.verb", "data.adj",
                                          "data.adv"};
};

namespace detail {

inline std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// WordNet lemma: strip the adjective syntax marker "(p)" / "(a)" / "(ip)".
inline std::string clean_lemma(std::string w) {
    auto p = w.find('(');
    if (p != std::string::npos && w.back() == ')') w.erase(p);
    return lower(std::move(w));
}

struct PendingEdge {
    std::string hyper_id;
    std::string hypo_id;
};

// One `data.*` line:
//   offset lex_filenum ss_type w_cnt word lex_id [word lex_id]...
//   p_cnt [ptr_symbol offset pos source/target]... | gloss
inline void parse_data_line(const std::string& line, const std::string& pos_tag,
                            const std::string& file, std::size_t lineno,
                            const WordNetOptions& opt, TaxonomyGraph& graph,
                            std::vector<PendingEdge>& edges) {
    std::istringstream ss(line);
    std::string offset, lex_filenum, ss_type;
    std::string wcnt_hex;
    if (!(ss >> offset >> lex_filenum >> ss_type >> wcnt_hex))
        throw DataError(file + ":" + std::to_string(lineno) + ": truncated synset record");
    std::size_t wcnt = 0;
    try {
        wcnt = std::stoul(wcnt_hex, nullptr, 16);
    } catch (const std::exception&) {
        throw DataError(file + ":" + std::to_string(lineno) + ": bad word count field");
    }
    if (wcnt == 0)
        throw DataError(file + ":" + std::to_string(lineno) + ": empty lemma list");

    Synset syn;
    syn.id = offset + "-" + pos_tag;
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < wcnt; ++i) {
        std::string word, lex_id;
        if (!(ss >> word >> lex_id))
            throw DataError(file + ":" + std::to_string(lineno) + ": word count exceeds words present");
        std::string lemma = clean_lemma(word);
        if (seen.insert(lemma).second) syn.lemmas.push_back(std::move(lemma));
    }

    std::string pcnt_str;
    if (!(ss >> pcnt_str))
        throw DataError(file + ":" + std::to_string(lineno) + ": missing pointer count");
    std::size_t pcnt = 0;
    try {
        pcnt = std::stoul(pcnt_str, nullptr, 10);
    } catch (const std::exception&) {
        throw DataError(file + ":" + std::to_string(lineno) + ": bad pointer count field");
    }
    for (std::size_t i = 0; i < pcnt; ++i) {
        std::string sym, tgt_offset, tgt_pos, srctgt;
        if (!(ss >> sym >> tgt_offset >> tgt_pos >> srctgt) || sym == "|")
            throw DataError(file + ":" + std::to_string(lineno) +
                            ": pointer count disagrees with pointers present");
        bool hyper = (sym == "@") || (opt.include_instance_hypernyms && sym == "@i");
        if (hyper) {
            // `@` points from this synset to its hypernym; normalize to
            // hypernym -> hyponym.
            edges.push_back({tgt_offset + "-" + tgt_pos, syn.id});
        }
    }
    graph.add_synset(std::move(syn));
}

}  // namespace detail

inline TaxonomyGraph parse_wordnet_database(const std::filesystem::path& dir,
                                            const WordNetOptions& opt = {}) {
    TaxonomyGraph graph;
    std::vector<detail::PendingEdge> edges;
    for (const auto& name : opt.pos_files) {
        auto path = dir / name;
        std::ifstream in(path);
        if (!in) throw IoError("cannot open WordNet data file: " + path.string());
        // pos tag from the file suffix: noun->n, verb->v, adj->a, adv->r
        std::string pos = "n";
        if (name.ends_with("verb")) pos = "v";
        else if (name.ends_with("adj")) pos = "a";
        else if (name.ends_with("adv")) pos = "r";
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty() || line.starts_with("  ")) continue;  // license header
            detail::parse_data_line(line, pos, path.string(), lineno, opt, graph, edges);
        }
    }
    for (const auto& e : edges) {
        auto h = graph.index.find(e.hyper_id);
        auto o = graph.index.find(e.hypo_id);
        // Pointers into POS files not ingested are dropped.
        if (h == graph.index.end() || o == graph.index.end()) continue;
        graph.add_edge(h->second, o->second);
    }
    graph.finalize_edges();
    return graph;
}

// TAB-separated `hypernym<TAB>hyponym` fixture format, `#` comments.
inline TaxonomyGraph parse_edge_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open edge list: " + path.string());
    TaxonomyGraph graph;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
            throw DataError(path.string() + ":" + std::to_string(lineno) +
                            ": expected exactly two TAB-separated fields");
        std::string hyper = line.substr(0, tab);
        std::string hypo = line.substr(tab + 1);
        if (hyper.empty() || hypo.empty())
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": empty lemma");
        auto h = graph.add_synset({hyper, {detail::lower(hyper)}});
        auto o = graph.add_synset({hypo, {detail::lower(hypo)}});
        graph.add_edge(h, o);
    }
    graph.finalize_edges();
    return graph;
}

// Lemma-level expansion of the synset edges. Self-pairs are dropped, any
// unordered pair seen in both orientations is dropped entirely, output is
// deduplicated and lexicographically sorted.
inline std::vector<WordPair> extract_hypernym_pairs(const TaxonomyGraph& graph) {
    std::set<WordPair> pairs;
    for (auto [h, o] : graph.hyper_edges) {
        for (const auto& hyper : graph.synsets[h].lemmas) {
            for (const auto& hypo : graph.synsets[o].lemmas) {
                if (hyper == hypo) continue;
                pairs.insert({hyper, hypo});
            }
        }
    }
    std::vector<WordPair> out;
    out.reserve(pairs.size());
    for (const auto& p : pairs) {
        if (pairs.count({p.hyponym, p.hypernym})) continue;  // bidirectional
        out.push_back(p);
    }
    return out;
}

}  // namespace hyprobe
