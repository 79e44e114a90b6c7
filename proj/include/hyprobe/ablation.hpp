#pragma once

#include <cmath>
#include <iostream>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "hyprobe/common.hpp"
#include "hyprobe/dataset.hpp"
#include "hyprobe/embedding.hpp"

namespace hyprobe {

enum class TransformKind {
    vanilla,
    abl_N,
    abl_D,
    abl_D_N,
    rand_vec,
    rand_pred,
    del_ct_1h,
    del_ct_2h,
    del_ea_1h,
    del_ea_2h,
};

inline const char* to_string(TransformKind k) {
    switch (k) {
        case TransformKind::vanilla: return "vanilla";
        case TransformKind::abl_N: return "abl-n";
        case TransformKind::abl_D: return "abl-d";
        case TransformKind::abl_D_N: return "abl-dn";
        case TransformKind::rand_vec: return "rand-vec";
        case TransformKind::rand_pred: return "rand-pred";
        case TransformKind::del_ct_1h: return "del-ct-1h";
        case TransformKind::del_ct_2h: return "del-ct-2h";
        case TransformKind::del_ea_1h: return "del-ea-1h";
        case TransformKind::del_ea_2h: return "del-ea-2h";
    }
    return "?";
}

inline TransformKind transform_from_string(const std::string& s) {
    for (TransformKind k :
         {TransformKind::vanilla, TransformKind::abl_N, TransformKind::abl_D,
          TransformKind::abl_D_N, TransformKind::rand_vec, TransformKind::rand_pred,
          TransformKind::del_ct_1h, TransformKind::del_ct_2h, TransformKind::del_ea_1h,
          TransformKind::del_ea_2h})
        if (s == to_string(k)) return k;
    throw ConfigError("unknown transform kind: " + s);
}

// Output width for an input of concatenated width 2*dim.
inline std::size_t transform_output_dim(TransformKind k, std::size_t concat_dim) {
    switch (k) {
        case TransformKind::del_ct_1h:
        case TransformKind::del_ct_2h:
        case TransformKind::del_ea_1h:
        case TransformKind::del_ea_2h:
            return concat_dim / 2;
        default:
            return concat_dim;
    }
}

struct NoiseRanges {
    double norm_min = 0, norm_max = 0;
    double dim_min = 0, dim_max = 0;
};

// Bounds taken over the word vectors of exactly the words occurring in the
// probing dataset.
inline NoiseRanges compute_ranges(const EmbeddingMatrix& m, const ProbingDataset& ds) {
    auto words = dataset_words(ds);
    if (words.empty()) throw DataError("compute_ranges: empty dataset");
    NoiseRanges r;
    r.dim_min = std::numeric_limits<double>::infinity();
    r.dim_max = -r.dim_min;
    r.norm_min = std::numeric_limits<double>::infinity();
    r.norm_max = -r.norm_min;
    for (const auto& w : words) {
        auto v = m[w];
        double sq = 0;
        for (float x : v) {
            sq += double(x) * x;
            r.dim_min = std::min(r.dim_min, double(x));
            r.dim_max = std::max(r.dim_max, double(x));
        }
        double n = std::sqrt(sq);
        r.norm_min = std::min(r.norm_min, n);
        r.norm_max = std::max(r.norm_max, n);
    }
    return r;
}

// Scale to a norm drawn uniformly from the range; direction is preserved.
// Zero vectors pass through (scaling them to a target norm is undefined).
inline void ablate_norm(std::span<double> v, const NoiseRanges& r, Rng& rng) {
    double sq = 0;
    for (double x : v) sq += x * x;
    double norm = std::sqrt(sq);
    if (norm == 0.0) {
        std::cerr << "warning: ablate_norm on zero vector, passing through\n";
        return;
    }
    std::uniform_real_distribution<double> u(r.norm_min, r.norm_max);
    double scale = u(rng) / norm;
    for (double& x : v) x *= scale;
}

// Redraw every component uniformly from the dim range, then rescale the draw
// back to the input's norm.
inline void ablate_dims(std::span<double> v, const NoiseRanges& r, Rng& rng) {
    double sq = 0;
    for (double x : v) sq += x * x;
    double norm = std::sqrt(sq);
    std::uniform_real_distribution<double> u(r.dim_min, r.dim_max);
    for (;;) {
        double drawn_sq = 0;
        for (double& x : v) {
            x = u(rng);
            drawn_sq += x * x;
        }
        if (drawn_sq > 0) {
            double scale = norm / std::sqrt(drawn_sq);
            for (double& x : v) x *= scale;
            return;
        }
        // all-zero draw: redraw
    }
}

// Ablations act per word vector (each dim-length half of the concatenation);
// deletions are true dimensionality reductions.
inline std::vector<double> apply_transform(std::span<const double> encoded, TransformKind kind,
                                          const NoiseRanges& ranges, Rng& rng) {
    if (encoded.size() % 2 != 0)
        throw DataError("apply_transform: concatenated vector has odd length");
    const std::size_t dim = encoded.size() / 2;
    std::vector<double> out;

    switch (kind) {
        case TransformKind::vanilla:
        case TransformKind::rand_pred:
            return {encoded.begin(), encoded.end()};
        case TransformKind::abl_N:
        case TransformKind::abl_D:
        case TransformKind::abl_D_N:
            out.assign(encoded.begin(), encoded.end());
            for (std::size_t h = 0; h < 2; ++h) {
                std::span<double> half(out.data() + h * dim, dim);
                if (kind != TransformKind::abl_N) ablate_dims(half, ranges, rng);
                if (kind != TransformKind::abl_D) ablate_norm(half, ranges, rng);
            }
            return out;
        case TransformKind::rand_vec: {
            std::uniform_real_distribution<double> u(ranges.dim_min, ranges.dim_max);
            out.resize(encoded.size());
            for (double& x : out) x = u(rng);
            return out;
        }
        case TransformKind::del_ct_1h:
            return {encoded.begin() + std::ptrdiff_t(dim), encoded.end()};
        case TransformKind::del_ct_2h:
            return {encoded.begin(), encoded.begin() + std::ptrdiff_t(dim)};
        case TransformKind::del_ea_1h:
        case TransformKind::del_ea_2h: {
            // keep the 2nd (resp. 1st) half of each word's vector
            const std::size_t half = dim / 2;
            out.reserve(dim);
            if (kind == TransformKind::del_ea_1h) {
                out.insert(out.end(), encoded.begin() + std::ptrdiff_t(half),
                           encoded.begin() + std::ptrdiff_t(dim));
                out.insert(out.end(), encoded.begin() + std::ptrdiff_t(dim + half), encoded.end());
            } else {
                out.insert(out.end(), encoded.begin(), encoded.begin() + std::ptrdiff_t(half));
                out.insert(out.end(), encoded.begin() + std::ptrdiff_t(dim),
                           encoded.begin() + std::ptrdiff_t(dim + half));
            }
            return out;
        }
    }
    throw ConfigError("apply_transform: unhandled transform kind");
}

// Uniform [0,1] scores, independent of any input.
inline std::vector<double> random_predictions(std::size_t test_size, Rng& rng) {
    if (test_size < 1) throw ConfigError("random_predictions: test_size must be >= 1");
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> out(test_size);
    for (auto& x : out) x = u(rng);
    return out;
}

}  // namespace hyprobe
