#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hyprobe/common.hpp"

namespace hyprobe {

namespace detail {

// Regularized incomplete beta via Lentz continued fraction.
inline double betacf(double a, double b, double x) {
    const double eps = 3e-14, fpmin = 1e-300;
    double qab = a + b, qap = a + 1, qam = a - 1;
    double c = 1, d = 1 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

inline double incbeta(double a, double b, double x) {
    if (x <= 0) return 0;
    if (x >= 1) return 1;
    double ln = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                b * std::log(1 - x);
    double front = std::exp(ln);
    if (x < (a + 1) / (a + b + 2)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1 - x) / b;
}

}  // namespace detail

// Student t distribution helpers.
inline double t_cdf(double t, double df) {
    double x = df / (df + t * t);
    double p = 0.5 * detail::incbeta(0.5 * df, 0.5, x);
    return t > 0 ? 1.0 - p : p;
}

inline double t_quantile(double p, double df) {
    if (p <= 0 || p >= 1) throw ConfigError("t_quantile: p must lie in (0,1)");
    double lo = -1e3, hi = 1e3;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (t_cdf(mid, df) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct RunStats {
    std::string condition;
    std::vector<double> per_run_auc;
    double mean_auc = 0;
    double ci_halfwidth = 0;  // 95% t-interval of the mean
    std::size_t n_runs = 0;
};

inline double sample_mean(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / double(v.size());
}

inline double sample_variance(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0;
    double s = 0;
    for (double x : v) s += (x - mean) * (x - mean);
    return s / double(v.size() - 1);
}

inline RunStats make_run_stats(std::string condition, std::vector<double> aucs) {
    if (aucs.size() < 2) throw ConfigError("make_run_stats: need at least 2 runs");
    RunStats rs;
    rs.condition = std::move(condition);
    rs.n_runs = aucs.size();
    rs.mean_auc = sample_mean(aucs);
    double var = sample_variance(aucs, rs.mean_auc);
    if (var > 0) {
        double t = t_quantile(0.975, double(rs.n_runs - 1));
        rs.ci_halfwidth = t * std::sqrt(var / double(rs.n_runs));
    }
    rs.per_run_auc = std::move(aucs);
    return rs;
}

struct CompareResult {
    double p_value = 1.0;
    bool significant = false;
};

// Two-sided Welch's t-test on per-run AUC samples.
inline CompareResult welch_compare(const std::vector<double>& a, const std::vector<double>& b,
                                   double alpha = 0.05) {
    if (a.size() < 2 || b.size() < 2) throw ConfigError("welch_compare: need >= 2 runs per sample");
    double ma = sample_mean(a), mb = sample_mean(b);
    double va = sample_variance(a, ma), vb = sample_variance(b, mb);
    double na = double(a.size()), nb = double(b.size());
    double se2 = va / na + vb / nb;
    if (se2 == 0) {
        // zero variance in both samples: identical means are not significant
        bool diff = ma != mb;
        return {diff ? 0.0 : 1.0, diff};
    }
    double t = (ma - mb) / std::sqrt(se2);
    double df = se2 * se2 /
                ((va / na) * (va / na) / (na - 1) + (vb / nb) * (vb / nb) / (nb - 1));
    double p = 2.0 * (1.0 - t_cdf(std::fabs(t), df));
    return {p, p < alpha};
}

// Mann-Whitney U with normal approximation and tie correction.
inline CompareResult mannwhitney_compare(const std::vector<double>& a,
                                         const std::vector<double>& b, double alpha = 0.05) {
    if (a.size() < 2 || b.size() < 2)
        throw ConfigError("mannwhitney_compare: need >= 2 runs per sample");
    std::vector<std::pair<double, int>> all;
    for (double x : a) all.emplace_back(x, 0);
    for (double x : b) all.emplace_back(x, 1);
    std::sort(all.begin(), all.end());
    double n = double(all.size());
    double rank_sum_a = 0, tie_term = 0;
    std::size_t i = 0;
    while (i < all.size()) {
        std::size_t j = i;
        while (j < all.size() && all[j].first == all[i].first) ++j;
        double midrank = 0.5 * double(i + 1 + j);
        double t = double(j - i);
        if (t > 1) tie_term += t * t * t - t;
        for (std::size_t k = i; k < j; ++k)
            if (all[k].second == 0) rank_sum_a += midrank;
        i = j;
    }
    double na = double(a.size()), nb = double(b.size());
    double u = rank_sum_a - 0.5 * na * (na + 1);
    double mu = 0.5 * na * nb;
    double sigma2 = na * nb / 12.0 * ((n + 1) - tie_term / (n * (n - 1)));
    if (sigma2 <= 0) return {1.0, false};
    double z = (u - mu) / std::sqrt(sigma2);
    double p = std::erfc(std::fabs(z) / std::sqrt(2.0));
    return {p, p < alpha};
}

// One-sample two-sided t-test of the mean against a constant.
inline CompareResult one_sample_compare(const std::vector<double>& a, double mu0,
                                        double alpha = 0.05) {
    if (a.size() < 2) throw ConfigError("one_sample_compare: need >= 2 runs");
    double m = sample_mean(a);
    double var = sample_variance(a, m);
    if (var == 0) {
        bool diff = m != mu0;
        return {diff ? 0.0 : 1.0, diff};
    }
    double t = (m - mu0) / std::sqrt(var / double(a.size()));
    double p = 2.0 * (1.0 - t_cdf(std::fabs(t), double(a.size() - 1)));
    return {p, p < alpha};
}

enum class ShadingGroup { same_as_random, same_as_vanilla, distinct };

inline const char* to_string(ShadingGroup g) {
    switch (g) {
        case ShadingGroup::same_as_random: return "same-as-random";
        case ShadingGroup::same_as_vanilla: return "same-as-vanilla";
        default: return "distinct";
    }
}

struct SignificanceVerdict {
    std::string condition;
    ShadingGroup grouping = ShadingGroup::distinct;
    double p_vs_random = 1.0;
    double p_vs_vanilla = 1.0;
};

inline SignificanceVerdict classify_shading(const RunStats& cond, const RunStats& random_ref,
                                            const RunStats& vanilla_ref, double alpha = 0.05) {
    SignificanceVerdict v;
    v.condition = cond.condition;
    if (&cond == &random_ref || cond.per_run_auc == random_ref.per_run_auc) {
        v.grouping = ShadingGroup::same_as_random;
        return v;
    }
    if (&cond == &vanilla_ref || cond.per_run_auc == vanilla_ref.per_run_auc) {
        v.grouping = ShadingGroup::same_as_vanilla;
        v.p_vs_random = welch_compare(cond.per_run_auc, random_ref.per_run_auc, alpha).p_value;
        return v;
    }
    auto vs_rand = welch_compare(cond.per_run_auc, random_ref.per_run_auc, alpha);
    auto vs_van = welch_compare(cond.per_run_auc, vanilla_ref.per_run_auc, alpha);
    v.p_vs_random = vs_rand.p_value;
    v.p_vs_vanilla = vs_van.p_value;
    if (!vs_rand.significant)
        v.grouping = ShadingGroup::same_as_random;
    else if (!vs_van.significant)
        v.grouping = ShadingGroup::same_as_vanilla;
    else
        v.grouping = ShadingGroup::distinct;
    return v;
}

}  // namespace hyprobe
