#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "hyprobe/common.hpp"
#include "hyprobe/embedding.hpp"

namespace hyprobe {

using Corpus = std::vector<std::vector<std::string>>;

struct SgnsConfig {
    std::size_t dim = 300;
    std::size_t window = 5;
    std::size_t negative_samples = 5;
    std::size_t min_count = 5;
    std::size_t epochs = 5;
    double initial_learning_rate = 0.025;  // linear decay to 1e-4 of initial
    double subsample_threshold = 1e-3;
    double unigram_smoothing_exponent = 0.75;
    std::uint64_t rng_seed = 1;

    void validate() const {
        if (dim < 1 || window < 1 || epochs < 1) throw ConfigError("sgns: counts must be positive");
        if (initial_learning_rate <= 0) throw ConfigError("sgns: learning rate must be positive");
    }
};

// Vocabulary with min_count pruning; words ordered by frequency (ties broken
// lexicographically) so training is deterministic.
struct SgnsVocab {
    std::vector<std::string> words;
    std::vector<std::size_t> counts;
    std::unordered_map<std::string, std::size_t> index;
    std::size_t total_tokens = 0;

    static SgnsVocab build(const Corpus& corpus, std::size_t min_count) {
        std::unordered_map<std::string, std::size_t> freq;
        for (const auto& sent : corpus)
            for (const auto& w : sent) ++freq[w];
        std::vector<std::pair<std::string, std::size_t>> kept;
        for (auto& [w, c] : freq)
            if (c >= min_count) kept.emplace_back(w, c);
        std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
            return a.second != b.second ? a.second > b.second : a.first < b.first;
        });
        SgnsVocab v;
        for (auto& [w, c] : kept) {
            v.index.emplace(w, v.words.size());
            v.words.push_back(w);
            v.counts.push_back(c);
            v.total_tokens += c;
        }
        return v;
    }
};

// Smoothed-unigram sampler (count^alpha), cumulative table + binary search.
class NegativeSampler {
public:
    NegativeSampler(const std::vector<std::size_t>& counts, double alpha) {
        cdf_.reserve(counts.size());
        double acc = 0;
        for (auto c : counts) {
            acc += std::pow(double(c), alpha);
            cdf_.push_back(acc);
        }
    }
    std::size_t sample(Rng& rng) const {
        std::uniform_real_distribution<double> u(0.0, cdf_.back());
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u(rng));
        return std::size_t(it - cdf_.begin());
    }

private:
    std::vector<double> cdf_;
};

struct SgnsTrainResult {
    EmbeddingMatrix embeddings;
    std::vector<double> epoch_losses;  // mean per positive-context update
};

inline SgnsTrainResult train_sgns_full(const Corpus& corpus, const SgnsConfig& cfg) {
    cfg.validate();
    if (corpus.empty()) throw DataError("sgns: empty training corpus");
    SgnsVocab vocab = SgnsVocab::build(corpus, cfg.min_count);
    const std::size_t V = vocab.words.size();
    if (V == 0) throw DataError("sgns: no word meets min_count");

    const std::size_t D = cfg.dim;
    Rng rng(cfg.rng_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<float> W(V * D), C(V * D, 0.0f);
    {
        std::uniform_real_distribution<float> init(-0.5f / float(D), 0.5f / float(D));
        for (auto& w : W) w = init(rng);
    }
    NegativeSampler sampler(vocab.counts, cfg.unigram_smoothing_exponent);

    // word2vec subsampling keep-probability
    std::vector<double> keep(V, 1.0);
    if (cfg.subsample_threshold > 0) {
        for (std::size_t i = 0; i < V; ++i) {
            double f = double(vocab.counts[i]) / double(vocab.total_tokens);
            double p = (std::sqrt(f / cfg.subsample_threshold) + 1.0) *
                       cfg.subsample_threshold / f;
            keep[i] = std::min(1.0, p);
        }
    }

    auto sigmoid = [](double x) {
        if (x > 6.0) return 1.0 - 1e-8;
        if (x < -6.0) return 1e-8;
        return 1.0 / (1.0 + std::exp(-x));
    };

    const double total_work = double(vocab.total_tokens) * double(cfg.epochs);
    double processed = 0;
    std::vector<std::size_t> sent_ids;
    std::vector<float> grad_w(D);
    std::vector<double> epoch_losses;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        double loss_sum = 0;
        std::size_t loss_n = 0;
        for (const auto& sent : corpus) {
            sent_ids.clear();
            for (const auto& tok : sent) {
                auto it = vocab.index.find(tok);
                if (it == vocab.index.end()) continue;
                processed += 1;
                if (keep[it->second] < 1.0 && unit(rng) > keep[it->second]) continue;
                sent_ids.push_back(it->second);
            }
            const double lr = std::max(cfg.initial_learning_rate * (1.0 - processed / total_work),
                                       cfg.initial_learning_rate * 1e-4);
            for (std::size_t pos = 0; pos < sent_ids.size(); ++pos) {
                std::size_t reduced = 1 + std::size_t(rng() % cfg.window);
                std::size_t lo = pos >= reduced ? pos - reduced : 0;
                std::size_t hi = std::min(sent_ids.size(), pos + reduced + 1);
                const std::size_t w = sent_ids[pos];
                float* wv = &W[w * D];
                for (std::size_t p2 = lo; p2 < hi; ++p2) {
                    if (p2 == pos) continue;
                    std::fill(grad_w.begin(), grad_w.end(), 0.0f);
                    double pair_loss = 0;
                    for (std::size_t k = 0; k <= cfg.negative_samples; ++k) {
                        std::size_t target;
                        double label;
                        if (k == 0) {
                            target = sent_ids[p2];
                            label = 1.0;
                        } else {
                            target = sampler.sample(rng);
                            if (target == sent_ids[p2]) continue;
                            label = 0.0;
                        }
                        float* cv = &C[target * D];
                        double dot = 0;
                        for (std::size_t d = 0; d < D; ++d) dot += double(wv[d]) * cv[d];
                        double p = sigmoid(dot);
                        pair_loss += label > 0.5 ? -std::log(p) : -std::log(1.0 - p);
                        float g = float(lr * (label - p));
                        for (std::size_t d = 0; d < D; ++d) {
                            grad_w[d] += g * cv[d];
                            cv[d] += g * wv[d];
                        }
                    }
                    for (std::size_t d = 0; d < D; ++d) wv[d] += grad_w[d];
                    loss_sum += pair_loss;
                    ++loss_n;
                }
            }
        }
        epoch_losses.push_back(loss_n ? loss_sum / double(loss_n) : 0.0);
    }

    EmbeddingMatrix m(D);
    for (std::size_t i = 0; i < V; ++i)
        m.add(vocab.words[i], {&W[i * D], D});
    for (std::size_t i = 0; i < V * D; ++i)
        if (!std::isfinite(W[i])) throw DataError("sgns: non-finite vector component after training");
    return {std::move(m), std::move(epoch_losses)};
}

inline EmbeddingMatrix train_sgns(const Corpus& corpus, const SgnsConfig& cfg) {
    return train_sgns_full(corpus, cfg).embeddings;
}

}  // namespace hyprobe
