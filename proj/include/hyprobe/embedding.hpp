#pragma once

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "hyprobe/common.hpp"

namespace hyprobe {

enum class VectorFormat { word2vec_text, word2vec_binary, glove_text };

inline VectorFormat vector_format_from_string(const std::string& s) {
    if (s == "word2vec-text") return VectorFormat::word2vec_text;
    if (s == "word2vec-binary") return VectorFormat::word2vec_binary;
    if (s == "glove-text") return VectorFormat::glove_text;
    throw ConfigError("unknown vector format: " + s);
}

class EmbeddingMatrix {
public:
    EmbeddingMatrix() = default;
    EmbeddingMatrix(std::size_t dim) : dim_(dim) {
        if (dim < 1) throw ConfigError("embedding dimension must be >= 1");
    }

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return words_.size(); }
    bool empty() const { return words_.empty(); }
    const std::vector<std::string>& words() const { return words_; }

    bool contains(const std::string& word) const { return index_.count(word) != 0; }

    // Returns false (and warns once per duplicate) if the word already exists.
    bool add(const std::string& word, std::span<const float> vec) {
        if (vec.size() != dim_) throw DataError("vector length mismatch for word: " + word);
        if (!index_.emplace(word, words_.size()).second) return false;
        words_.push_back(word);
        data_.insert(data_.end(), vec.begin(), vec.end());
        return true;
    }

    std::span<const float> operator[](const std::string& word) const {
        auto it = index_.find(word);
        if (it == index_.end()) throw DataError("word not in vocabulary: " + word);
        return row(it->second);
    }

    std::span<const float> row(std::size_t i) const {
        return {data_.data() + i * dim_, dim_};
    }
    std::span<float> row(std::size_t i) { return {data_.data() + i * dim_, dim_}; }

    double norm(const std::string& word) const {
        double s = 0;
        for (float v : (*this)[word]) s += double(v) * v;
        return std::sqrt(s);
    }

private:
    std::size_t dim_ = 0;
    std::vector<std::string> words_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<float> data_;
};

namespace detail {

inline void parse_text_row(const std::string& line, std::size_t lineno,
                           const std::filesystem::path& path, std::size_t expect_dim,
                           std::string& word, std::vector<float>& vec) {
    std::istringstream ss(line);
    if (!(ss >> word)) throw DataError(path.string() + ":" + std::to_string(lineno) + ": empty row");
    vec.clear();
    std::string tok;
    while (ss >> tok) {
        try {
            std::size_t used = 0;
            vec.push_back(std::stof(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw DataError(path.string() + ":" + std::to_string(lineno) +
                            ": non-numeric field '" + tok + "'");
        }
    }
    if (expect_dim && vec.size() != expect_dim)
        throw DataError(path.string() + ":" + std::to_string(lineno) + ": row has " +
                        std::to_string(vec.size()) + " values, expected " +
                        std::to_string(expect_dim));
}

}  // namespace detail

inline EmbeddingMatrix load_embeddings(const std::filesystem::path& path, VectorFormat fmt) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open embedding file: " + path.string());

    EmbeddingMatrix m;
    std::string word;
    std::vector<float> vec;

    if (fmt == VectorFormat::glove_text) {
        std::string line;
        std::size_t lineno = 0, dim = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            detail::parse_text_row(line, lineno, path, dim, word, vec);
            if (dim == 0) {
                dim = vec.size();
                if (dim == 0) throw DataError(path.string() + ": first row has no values");
                m = EmbeddingMatrix(dim);
            }
            if (!m.add(word, vec))
                std::cerr << "warning: duplicate word '" << word << "' at " << path.string()
                          << ":" << lineno << ", keeping first\n";
        }
        return m;
    }

    std::size_t vocab = 0, dim = 0;
    in >> vocab >> dim;
    if (!in || dim < 1) throw DataError(path.string() + ": bad header");
    m = EmbeddingMatrix(dim);
    vec.resize(dim);

    if (fmt == VectorFormat::word2vec_text) {
        in.ignore();  // end of header line
        std::string line;
        std::size_t lineno = 1;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            detail::parse_text_row(line, lineno, path, dim, word, vec);
            if (!m.add(word, vec))
                std::cerr << "warning: duplicate word '" << word << "' at " << path.string()
                          << ":" << lineno << ", keeping first\n";
        }
    } else {
        in.ignore();  // single whitespace after header
        for (std::size_t r = 0; r < vocab; ++r) {
            word.clear();
            char c;
            while (in.get(c) && c != ' ') {
                if (c != '\n') word += c;
            }
            if (!in || word.empty())
                throw DataError(path.string() + ": truncated entry at row " + std::to_string(r + 1));
            if (!in.read(reinterpret_cast<char*>(vec.data()),
                         std::streamsize(dim * sizeof(float))))
                throw DataError(path.string() + ": truncated vector at row " + std::to_string(r + 1));
            if (!m.add(word, vec))
                std::cerr << "warning: duplicate word '" << word << "', keeping first\n";
        }
    }
    if (m.size() != vocab && fmt == VectorFormat::word2vec_binary)
        throw DataError(path.string() + ": header vocab size disagrees with entries read");
    return m;
}

inline void save_embeddings(const EmbeddingMatrix& m, const std::filesystem::path& path,
                            VectorFormat fmt) {
    if (m.empty()) throw DataError("refusing to save empty embedding matrix");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write embedding file: " + path.string());

    auto check_word = [&](const std::string& w) {
        if (w.find(' ') != std::string::npos || w.find('\n') != std::string::npos)
            throw DataError("word contains whitespace, not representable: '" + w + "'");
    };

    if (fmt == VectorFormat::word2vec_binary) {
        out << m.size() << ' ' << m.dim() << '\n';
        for (std::size_t i = 0; i < m.size(); ++i) {
            check_word(m.words()[i]);
            out << m.words()[i] << ' ';
            auto r = m.row(i);
            out.write(reinterpret_cast<const char*>(r.data()),
                      std::streamsize(r.size() * sizeof(float)));
        }
    } else {
        if (fmt == VectorFormat::word2vec_text) out << m.size() << ' ' << m.dim() << '\n';
        char buf[64];
        for (std::size_t i = 0; i < m.size(); ++i) {
            check_word(m.words()[i]);
            out << m.words()[i];
            for (float v : m.row(i)) {
                std::snprintf(buf, sizeof(buf), " %.8g", double(v));
                out << buf;
            }
            out << '\n';
        }
    }
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace hyprobe
