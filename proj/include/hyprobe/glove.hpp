#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>
#include <vector>

#include "hyprobe/common.hpp"
#include "hyprobe/embedding.hpp"
#include "hyprobe/sgns.hpp"  // Corpus, SgnsVocab

namespace hyprobe {

struct GloveConfig {
    std::size_t dim = 300;
    std::size_t window = 10;
    double learning_rate = 0.05;
    std::size_t epochs = 30;
    double x_max = 100.0;
    double weighting_exponent = 0.75;
    bool symmetric_window = true;
    std::size_t min_count = 5;
    std::uint64_t rng_seed = 1;

    void validate() const {
        if (dim < 1 || window < 1) throw ConfigError("glove: counts must be positive");
        if (epochs < 1) throw ConfigError("glove: epochs must be >= 1");
        if (learning_rate <= 0) throw ConfigError("glove: learning rate must be positive");
    }
};

struct CoocEntry {
    std::uint32_t row, col;
    double value;
};

// Harmonic 1/d distance weighting within the window. With a symmetric
// window each unordered co-occurrence is stored in both (i,j) and (j,i).
class CoocMatrix {
public:
    CoocMatrix(const Corpus& corpus, const GloveConfig& cfg)
        : vocab_(SgnsVocab::build(corpus, cfg.min_count)) {
        std::unordered_map<std::uint64_t, double> acc;
        std::vector<std::uint32_t> ids;
        for (const auto& sent : corpus) {
            ids.clear();
            for (const auto& tok : sent) {
                auto it = vocab_.index.find(tok);
                if (it != vocab_.index.end()) ids.push_back(std::uint32_t(it->second));
            }
            for (std::size_t i = 1; i < ids.size(); ++i) {
                std::size_t lo = i > cfg.window ? i - cfg.window : 0;
                for (std::size_t j = lo; j < i; ++j) {
                    double w = 1.0 / double(i - j);
                    acc[key(ids[j], ids[i])] += w;
                    if (cfg.symmetric_window) acc[key(ids[i], ids[j])] += w;
                }
            }
        }
        entries_.reserve(acc.size());
        for (auto& [k, v] : acc)
            entries_.push_back({std::uint32_t(k >> 32), std::uint32_t(k & 0xffffffffu), v});
        // deterministic base order; training shuffles per epoch
        std::sort(entries_.begin(), entries_.end(), [](const CoocEntry& a, const CoocEntry& b) {
            return std::tie(a.row, a.col) < std::tie(b.row, b.col);
        });
    }

    const SgnsVocab& vocab() const { return vocab_; }
    const std::vector<CoocEntry>& entries() const { return entries_; }

    double at(const std::string& a, const std::string& b) const {
        auto ia = vocab_.index.find(a), ib = vocab_.index.find(b);
        if (ia == vocab_.index.end() || ib == vocab_.index.end()) return 0.0;
        CoocEntry probe{std::uint32_t(ia->second), std::uint32_t(ib->second), 0.0};
        auto it = std::lower_bound(entries_.begin(), entries_.end(), probe,
                                   [](const CoocEntry& x, const CoocEntry& y) {
                                       return std::tie(x.row, x.col) < std::tie(y.row, y.col);
                                   });
        if (it == entries_.end() || it->row != probe.row || it->col != probe.col) return 0.0;
        return it->value;
    }

private:
    static std::uint64_t key(std::uint32_t i, std::uint32_t j) {
        return (std::uint64_t(i) << 32) | j;
    }
    SgnsVocab vocab_;
    std::vector<CoocEntry> entries_;
};

struct GloveTrainResult {
    EmbeddingMatrix embeddings;
    std::vector<double> epoch_losses;  // mean weighted squared error per entry
};

// Weighted least squares on log co-occurrence, AdaGrad updates, final
// vector = main + context.
inline GloveTrainResult train_glove_full(const Corpus& corpus, const GloveConfig& cfg) {
    cfg.validate();
    if (corpus.empty()) throw DataError("glove: empty training corpus");
    CoocMatrix cooc(corpus, cfg);
    const std::size_t V = cooc.vocab().words.size();
    if (V == 0 || cooc.entries().empty()) throw DataError("glove: empty co-occurrence matrix");

    const std::size_t D = cfg.dim;
    Rng rng(cfg.rng_seed);
    std::uniform_real_distribution<float> init(-0.5f / float(D), 0.5f / float(D));
    std::vector<float> W(V * D), Wc(V * D);
    std::vector<float> b(V), bc(V);
    for (auto& x : W) x = init(rng);
    for (auto& x : Wc) x = init(rng);
    for (auto& x : b) x = init(rng);
    for (auto& x : bc) x = init(rng);
    std::vector<float> gW(V * D, 1.0f), gWc(V * D, 1.0f), gb(V, 1.0f), gbc(V, 1.0f);

    std::vector<std::size_t> order(cooc.entries().size());
    std::iota(order.begin(), order.end(), 0);

    std::vector<double> epoch_losses;
    const double lr = cfg.learning_rate;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double loss_sum = 0;
        for (std::size_t idx : order) {
            const CoocEntry& e = cooc.entries()[idx];
            float* wi = &W[std::size_t(e.row) * D];
            float* wj = &Wc[std::size_t(e.col) * D];
            double dot = 0;
            for (std::size_t d = 0; d < D; ++d) dot += double(wi[d]) * wj[d];
            double diff = dot + b[e.row] + bc[e.col] - std::log(e.value);
            double f = e.value < cfg.x_max
                           ? std::pow(e.value / cfg.x_max, cfg.weighting_exponent)
                           : 1.0;
            loss_sum += 0.5 * f * diff * diff;
            double fdiff = f * diff;
            for (std::size_t d = 0; d < D; ++d) {
                double gi = fdiff * wj[d];
                double gj = fdiff * wi[d];
                wi[d] -= float(lr * gi / std::sqrt(double(gW[std::size_t(e.row) * D + d])));
                wj[d] -= float(lr * gj / std::sqrt(double(gWc[std::size_t(e.col) * D + d])));
                gW[std::size_t(e.row) * D + d] += float(gi * gi);
                gWc[std::size_t(e.col) * D + d] += float(gj * gj);
            }
            b[e.row] -= float(lr * fdiff / std::sqrt(double(gb[e.row])));
            bc[e.col] -= float(lr * fdiff / std::sqrt(double(gbc[e.col])));
            gb[e.row] += float(fdiff * fdiff);
            gbc[e.col] += float(fdiff * fdiff);
        }
        epoch_losses.push_back(loss_sum / double(order.size()));
    }

    EmbeddingMatrix m(D);
    std::vector<float> sum(D);
    for (std::size_t i = 0; i < V; ++i) {
        for (std::size_t d = 0; d < D; ++d) {
            sum[d] = W[i * D + d] + Wc[i * D + d];
            if (!std::isfinite(sum[d]))
                throw DataError("glove: non-finite vector component after training");
        }
        m.add(cooc.vocab().words[i], sum);
    }
    return {std::move(m), std::move(epoch_losses)};
}

inline EmbeddingMatrix train_glove(const Corpus& corpus, const GloveConfig& cfg) {
    return train_glove_full(corpus, cfg).embeddings;
}

}  // namespace hyprobe
