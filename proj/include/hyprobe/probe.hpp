#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "hyprobe/common.hpp"

namespace hyprobe {

// Row-major dense matrix of training features.
struct FeatureMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> data;

    FeatureMatrix() = default;
    FeatureMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double* row(std::size_t i) { return data.data() + i * cols; }
    const double* row(std::size_t i) const { return data.data() + i * cols; }

    void push_row(const std::vector<double>& v) {
        if (cols == 0) cols = v.size();
        if (v.size() != cols) throw DataError("feature row width mismatch");
        data.insert(data.end(), v.begin(), v.end());
        ++rows;
    }
};

enum class WeightInit { glorot_uniform, glorot_normal };

struct ProbeConfig {
    std::size_t hidden_units = 100;
    double initial_learning_rate = 0.001;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    std::size_t max_epochs = 200;
    std::size_t batch_size = 200;  // effective batch = min(batch_size, n)
    double l2_penalty = 1e-4;
    double convergence_tolerance = 1e-4;
    std::size_t patience = 10;  // epochs without tol-sized improvement
    WeightInit weight_init = WeightInit::glorot_uniform;
    std::uint64_t rng_seed = 1;

    void validate() const {
        if (hidden_units < 1 || max_epochs < 1 || batch_size < 1)
            throw ConfigError("probe: counts must be positive");
        if (initial_learning_rate <= 0) throw ConfigError("probe: learning rate must be positive");
    }
};

// One hidden ReLU layer, single logistic output.
class MlpProbe {
public:
    std::vector<double> w1;  // hidden x input
    std::vector<double> b1;  // hidden
    std::vector<double> w2;  // hidden
    double b2 = 0;
    std::size_t input_dim = 0, hidden = 0;
    std::size_t epochs_run = 0;
    double final_loss = 0;

    struct Grads {
        std::vector<double> w1, b1, w2;
        double b2 = 0;
    };

    void init(std::size_t in_dim, const ProbeConfig& cfg, Rng& rng) {
        input_dim = in_dim;
        hidden = cfg.hidden_units;
        w1.resize(hidden * input_dim);
        b1.assign(hidden, 0.0);
        w2.resize(hidden);
        b2 = 0.0;
        double bound1 = std::sqrt(6.0 / double(input_dim + hidden));
        double bound2 = std::sqrt(6.0 / double(hidden + 1));
        if (cfg.weight_init == WeightInit::glorot_uniform) {
            std::uniform_real_distribution<double> u1(-bound1, bound1), u2(-bound2, bound2);
            for (auto& w : w1) w = u1(rng);
            for (auto& w : w2) w = u2(rng);
        } else {
            std::normal_distribution<double> n1(0.0, bound1), n2(0.0, bound2);
            for (auto& w : w1) w = n1(rng);
            for (auto& w : w2) w = n2(rng);
        }
    }

    double score(const double* x) const {
        double out = b2;
        for (std::size_t h = 0; h < hidden; ++h) {
            const double* wr = &w1[h * input_dim];
            double a = b1[h];
            for (std::size_t d = 0; d < input_dim; ++d) a += wr[d] * x[d];
            if (a > 0) out += w2[h] * a;
        }
        return 1.0 / (1.0 + std::exp(-out));
    }

    // Mean regularized BCE over the given sample indices, with gradients.
    // The L2 term is 0.5 * l2 * ||W||^2 / n_batch, matching the loss used
    // for the convergence criterion.
    double batch_loss_and_grads(const FeatureMatrix& X, const std::vector<int>& y,
                                const std::vector<std::size_t>& idx, double l2,
                                Grads* grads) const {
        const std::size_t n = idx.size();
        const std::size_t D = input_dim, H = hidden;
        if (grads) {
            grads->w1.assign(H * D, 0.0);
            grads->b1.assign(H, 0.0);
            grads->w2.assign(H, 0.0);
            grads->b2 = 0.0;
        }
        double loss = 0;
        std::vector<double> act(H);
        for (std::size_t i : idx) {
            const double* x = X.row(i);
            double out = b2;
            for (std::size_t h = 0; h < H; ++h) {
                const double* wr = &w1[h * D];
                double a = b1[h];
                for (std::size_t d = 0; d < D; ++d) a += wr[d] * x[d];
                act[h] = a > 0 ? a : 0.0;
                out += w2[h] * act[h];
            }
            double p = 1.0 / (1.0 + std::exp(-out));
            double eps = 1e-12;
            loss += y[i] ? -std::log(std::max(p, eps)) : -std::log(std::max(1.0 - p, eps));
            if (grads) {
                double dout = (p - double(y[i])) / double(n);
                grads->b2 += dout;
                for (std::size_t h = 0; h < H; ++h) {
                    grads->w2[h] += dout * act[h];
                    if (act[h] > 0) {
                        double dh = dout * w2[h];
                        grads->b1[h] += dh;
                        double* gr = &grads->w1[h * D];
                        for (std::size_t d = 0; d < D; ++d) gr[d] += dh * x[d];
                    }
                }
            }
        }
        loss /= double(n);
        double reg = 0;
        for (double w : w1) reg += w * w;
        for (double w : w2) reg += w * w;
        loss += 0.5 * l2 * reg / double(n);
        if (grads) {
            double scale = l2 / double(n);
            for (std::size_t k = 0; k < w1.size(); ++k) grads->w1[k] += scale * w1[k];
            for (std::size_t k = 0; k < w2.size(); ++k) grads->w2[k] += scale * w2[k];
        }
        return loss;
    }
};

inline MlpProbe train_probe(const FeatureMatrix& X, const std::vector<int>& y,
                            const ProbeConfig& cfg) {
    cfg.validate();
    if (X.rows != y.size()) throw DataError("probe: feature/label count mismatch");
    if (X.rows < 2) throw DataError("probe: need at least two samples");
    for (double v : X.data)
        if (!std::isfinite(v)) throw DataError("probe: non-finite feature value");
    bool has0 = false, has1 = false;
    for (int l : y) (l ? has1 : has0) = true;
    if (!has0 || !has1) throw DataError("probe: training labels contain a single class");

    Rng rng(cfg.rng_seed);
    MlpProbe probe;
    probe.init(X.cols, cfg, rng);

    const std::size_t n = X.rows;
    const std::size_t batch = std::min(cfg.batch_size, n);

    // Adam state
    MlpProbe::Grads m, v, g;
    m.w1.assign(probe.w1.size(), 0.0);
    m.b1.assign(probe.b1.size(), 0.0);
    m.w2.assign(probe.w2.size(), 0.0);
    v = m;
    double t = 0;

    auto adam_step = [&](std::vector<double>& w, std::vector<double>& mw,
                         std::vector<double>& vw, const std::vector<double>& gw) {
        double bc1 = 1.0 - std::pow(cfg.adam_beta1, t);
        double bc2 = 1.0 - std::pow(cfg.adam_beta2, t);
        for (std::size_t k = 0; k < w.size(); ++k) {
            mw[k] = cfg.adam_beta1 * mw[k] + (1 - cfg.adam_beta1) * gw[k];
            vw[k] = cfg.adam_beta2 * vw[k] + (1 - cfg.adam_beta2) * gw[k] * gw[k];
            w[k] -= cfg.initial_learning_rate * (mw[k] / bc1) /
                    (std::sqrt(vw[k] / bc2) + cfg.adam_epsilon);
        }
    };

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    double best_loss = std::numeric_limits<double>::infinity();
    std::size_t no_improve = 0;
    double mb2 = 0, vb2 = 0;

    for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < n; start += batch) {
            std::vector<std::size_t> idx(order.begin() + std::ptrdiff_t(start),
                                         order.begin() + std::ptrdiff_t(std::min(start + batch, n)));
            double loss = probe.batch_loss_and_grads(X, y, idx, cfg.l2_penalty, &g);
            epoch_loss += loss * double(idx.size());
            ++batches;
            t += 1;
            adam_step(probe.w1, m.w1, v.w1, g.w1);
            adam_step(probe.b1, m.b1, v.b1, g.b1);
            adam_step(probe.w2, m.w2, v.w2, g.w2);
            {
                double bc1 = 1.0 - std::pow(cfg.adam_beta1, t);
                double bc2 = 1.0 - std::pow(cfg.adam_beta2, t);
                mb2 = cfg.adam_beta1 * mb2 + (1 - cfg.adam_beta1) * g.b2;
                vb2 = cfg.adam_beta2 * vb2 + (1 - cfg.adam_beta2) * g.b2 * g.b2;
                probe.b2 -= cfg.initial_learning_rate * (mb2 / bc1) / (std::sqrt(vb2 / bc2) + cfg.adam_epsilon);
            }
        }
        epoch_loss /= double(n);
        probe.epochs_run = epoch + 1;
        probe.final_loss = epoch_loss;
        if (epoch_loss < best_loss - cfg.convergence_tolerance) {
            best_loss = epoch_loss;
            no_improve = 0;
        } else {
            best_loss = std::min(best_loss, epoch_loss);
            if (++no_improve >= cfg.patience) break;
        }
    }
    return probe;
}

inline std::vector<double> predict_scores(const MlpProbe& probe, const FeatureMatrix& X) {
    if (X.cols != probe.input_dim)
        throw DataError("predict_scores: feature width " + std::to_string(X.cols) +
                        " does not match probe input width " + std::to_string(probe.input_dim));
    std::vector<double> out(X.rows);
    for (std::size_t i = 0; i < X.rows; ++i) out[i] = probe.score(X.row(i));
    return out;
}

// Rank-based AUC-ROC (Mann-Whitney with midranks for ties).
inline double auc_roc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size()) throw DataError("auc_roc: size mismatch");
    std::size_t n = scores.size();
    std::size_t n_pos = 0;
    for (int l : labels) n_pos += std::size_t(l != 0);
    std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw DataError("auc_roc: undefined with a single class present");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    double rank_sum_pos = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        double midrank = 0.5 * double(i + 1 + j);  // ranks are 1-based
        for (std::size_t k = i; k < j; ++k)
            if (labels[order[k]]) rank_sum_pos += midrank;
        i = j;
    }
    return (rank_sum_pos - 0.5 * double(n_pos) * double(n_pos + 1)) /
           (double(n_pos) * double(n_neg));
}

}  // namespace hyprobe
