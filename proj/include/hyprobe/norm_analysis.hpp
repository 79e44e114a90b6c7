#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "hyprobe/common.hpp"
#include "hyprobe/embedding.hpp"
#include "hyprobe/taxonomy.hpp"

namespace hyprobe {

enum class PairRole { hypernym, hyponym };

inline const char* to_string(PairRole r) {
    return r == PairRole::hypernym ? "hypernym" : "hyponym";
}

struct RoleNormSummary {
    std::string model;
    PairRole role = PairRole::hypernym;
    std::size_t n = 0;
    double median = 0, q1 = 0, q3 = 0;
    double lo_whisker = 0, hi_whisker = 0;
    std::size_t outliers = 0;
};

namespace detail {

// Type-7 (linear interpolation) quantile over sorted data.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
    double h = q * double(sorted.size() - 1);
    std::size_t lo = std::size_t(std::floor(h));
    std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - double(lo)) * (sorted[hi] - sorted[lo]);
}

inline RoleNormSummary summarize(std::vector<double> norms, PairRole role,
                                 const std::string& model) {
    std::sort(norms.begin(), norms.end());
    RoleNormSummary s;
    s.model = model;
    s.role = role;
    s.n = norms.size();
    s.q1 = quantile_sorted(norms, 0.25);
    s.median = quantile_sorted(norms, 0.5);
    s.q3 = quantile_sorted(norms, 0.75);
    double iqr = s.q3 - s.q1;
    double lo_fence = s.q1 - 1.5 * iqr, hi_fence = s.q3 + 1.5 * iqr;
    // whiskers extend to the furthest datum inside the fences
    s.lo_whisker = norms.back();
    s.hi_whisker = norms.front();
    for (double x : norms) {
        if (x >= lo_fence) s.lo_whisker = std::min(s.lo_whisker, x);
        if (x <= hi_fence) s.hi_whisker = std::max(s.hi_whisker, x);
        if (x < lo_fence || x > hi_fence) ++s.outliers;
    }
    return s;
}

}  // namespace detail

struct NormAnalysisOptions {
    // once per pair-role occurrence by default; unique-word mode behind a flag
    bool unique_words = false;
    std::string model_name = "model";
};

inline std::pair<RoleNormSummary, RoleNormSummary> role_norm_summary(
    const EmbeddingMatrix& m, const std::vector<WordPair>& pairs,
    const NormAnalysisOptions& opt = {}) {
    if (pairs.empty()) throw DataError("role_norm_summary: empty pair list");
    std::vector<double> hyper_norms, hypo_norms;
    if (opt.unique_words) {
        std::set<std::string> hyper_seen, hypo_seen;
        for (const auto& p : pairs) {
            if (hyper_seen.insert(p.hypernym).second) hyper_norms.push_back(m.norm(p.hypernym));
            if (hypo_seen.insert(p.hyponym).second) hypo_norms.push_back(m.norm(p.hyponym));
        }
    } else {
        hyper_norms.reserve(pairs.size());
        hypo_norms.reserve(pairs.size());
        for (const auto& p : pairs) {
            hyper_norms.push_back(m.norm(p.hypernym));
            hypo_norms.push_back(m.norm(p.hyponym));
        }
    }
    return {detail::summarize(std::move(hyper_norms), PairRole::hypernym, opt.model_name),
            detail::summarize(std::move(hypo_norms), PairRole::hyponym, opt.model_name)};
}

inline void write_summary_csv(const std::vector<RoleNormSummary>& summaries,
                              const std::filesystem::path& path) {
    if (summaries.empty()) throw DataError("write_summary_csv: no summaries");
    std::ofstream out(path);
    if (!out) throw IoError("cannot write summary CSV: " + path.string());
    out << "model,role,n,median,q1,q3,lo_whisker,hi_whisker,outliers\n";
    out.precision(17);
    for (const auto& s : summaries)
        out << s.model << ',' << to_string(s.role) << ',' << s.n << ',' << s.median << ','
            << s.q1 << ',' << s.q3 << ',' << s.lo_whisker << ',' << s.hi_whisker << ','
            << s.outliers << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

inline std::vector<RoleNormSummary> read_summary_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open summary CSV: " + path.string());
    std::vector<RoleNormSummary> out;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            auto c = line.find(',', pos);
            if (c == std::string::npos) c = line.size();
            f.emplace_back(line, pos, c - pos);
            pos = c + 1;
        }
        if (f.size() != 9) throw DataError(path.string() + ": expected 9 CSV fields");
        RoleNormSummary s;
        s.model = f[0];
        s.role = f[1] == "hypernym" ? PairRole::hypernym : PairRole::hyponym;
        s.n = std::stoul(f[2]);
        s.median = std::stod(f[3]);
        s.q1 = std::stod(f[4]);
        s.q3 = std::stod(f[5]);
        s.lo_whisker = std::stod(f[6]);
        s.hi_whisker = std::stod(f[7]);
        s.outliers = std::stoul(f[8]);
        out.push_back(std::move(s));
    }
    return out;
}

// Static SVG box plot, one box per summary. Presentation only.
inline void write_boxplot_svg(const std::vector<RoleNormSummary>& summaries,
                              const std::filesystem::path& path) {
    if (summaries.empty()) throw DataError("write_boxplot_svg: no summaries");
    double lo = summaries[0].lo_whisker, hi = summaries[0].hi_whisker;
    for (const auto& s : summaries) {
        lo = std::min(lo, s.lo_whisker);
        hi = std::max(hi, s.hi_whisker);
    }
    if (hi <= lo) hi = lo + 1;
    const double w = 120.0, plot_h = 360.0, top = 30.0, bottom = 50.0;
    const double width = w * double(summaries.size()) + 60.0;
    const double height = plot_h + top + bottom;
    auto ycoord = [&](double v) { return top + (hi - v) / (hi - lo) * plot_h; };

    std::ofstream out(path);
    if (!out) throw IoError("cannot write SVG: " + path.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\">\n";
    for (std::size_t i = 0; i < summaries.size(); ++i) {
        const auto& s = summaries[i];
        double cx = 60.0 + w * (double(i) + 0.5);
        double bw = w * 0.5;
        out << "<line x1=\"" << cx << "\" y1=\"" << ycoord(s.lo_whisker) << "\" x2=\"" << cx
            << "\" y2=\"" << ycoord(s.hi_whisker) << "\" stroke=\"black\"/>\n";
        out << "<rect x=\"" << cx - bw / 2 << "\" y=\"" << ycoord(s.q3) << "\" width=\"" << bw
            << "\" height=\"" << ycoord(s.q1) - ycoord(s.q3)
            << "\" fill=\"lightsteelblue\" stroke=\"black\"/>\n";
        out << "<line x1=\"" << cx - bw / 2 << "\" y1=\"" << ycoord(s.median) << "\" x2=\""
            << cx + bw / 2 << "\" y2=\"" << ycoord(s.median)
            << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << cx << "\" y=\"" << height - 20
            << "\" text-anchor=\"middle\" font-size=\"12\">" << s.model << " "
            << to_string(s.role) << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) throw IoError("write failed: " + path.string());
}

inline void export_boxplot(const std::vector<RoleNormSummary>& summaries,
                           const std::filesystem::path& csv_path,
                           const std::filesystem::path& svg_path) {
    write_summary_csv(summaries, csv_path);
    write_boxplot_svg(summaries, svg_path);
}

}  // namespace hyprobe
