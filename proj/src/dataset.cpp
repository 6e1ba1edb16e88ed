#include "pdla/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string_view>

namespace pdla {

namespace {

bool parse_finite_double(std::string_view input, double& out) {
    double parsed = 0.0;
    const char* begin = input.data();
    const char* end = begin + input.size();
    auto [ptr, ec] = std::from_chars(begin, end, parsed, std::chars_format::general);
    if (ec != std::errc{} || ptr != end || !std::isfinite(parsed)) {
        return false;
    }
    out = parsed;
    return true;
}

std::string format_feature(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

ExemplarSet make_exemplar_set(std::vector<Exemplar> rows) {
    if (rows.empty()) {
        throw DatasetError("EmptyDataset: no exemplars");
    }
    ExemplarSet set;
    set.arity = rows.front().features.size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Exemplar& ex = rows[i];
        if (ex.label.empty()) {
            throw DatasetError("empty label at row " + std::to_string(i + 1));
        }
        if (ex.features.empty()) {
            throw DatasetError("empty feature vector at row " + std::to_string(i + 1));
        }
        if (ex.features.size() != set.arity) {
            throw DatasetError("ArityMismatch(row=" + std::to_string(i + 1) + "): expected " +
                               std::to_string(set.arity) + " features, got " +
                               std::to_string(ex.features.size()));
        }
        for (double f : ex.features) {
            if (!std::isfinite(f)) {
                throw DatasetError("non-finite feature at row " + std::to_string(i + 1));
            }
        }
        if (std::find(set.classes.begin(), set.classes.end(), ex.label) == set.classes.end()) {
            set.classes.push_back(ex.label);
        }
    }
    set.exemplars = std::move(rows);
    return set;
}

ExemplarSet load_csv(const std::string& path, bool has_header) {
    std::ifstream in(path);
    if (!in) {
        throw DatasetError("cannot open file: " + path);
    }
    std::vector<Exemplar> rows;
    std::string line;
    std::size_t lineno = 0;
    bool skipped_header = !has_header;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) continue;
        if (!skipped_header) {
            skipped_header = true;
            continue;
        }
        Exemplar ex;
        std::size_t col = 0;
        std::size_t start = 0;
        while (start <= line.size()) {
            std::size_t comma = line.find(',', start);
            std::string_view cell(line.data() + start,
                                  (comma == std::string::npos ? line.size() : comma) - start);
            if (col == 0) {
                ex.label = std::string(cell);
            } else {
                double v = 0.0;
                if (!parse_finite_double(cell, v)) {
                    throw DatasetError("non-numeric feature at row " + std::to_string(lineno) +
                                       ", column " + std::to_string(col + 1));
                }
                ex.features.push_back(v);
            }
            ++col;
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        rows.push_back(std::move(ex));
    }
    if (rows.empty()) {
        throw DatasetError("EmptyDataset: " + path);
    }
    return make_exemplar_set(std::move(rows));
}

void save_csv(const ExemplarSet& set, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw DatasetError("cannot write file: " + path);
    }
    for (const Exemplar& ex : set.exemplars) {
        out << ex.label;
        for (double f : ex.features) {
            out << ',' << format_feature(f);
        }
        out << '\n';
    }
}

ExemplarSet bundled_threat_sample() {
    std::vector<Exemplar> rows = {
        {"Vehicle passing", {2.02, 49.78, 40.75, 2.42, 4.57, 0.27, 0.08, 0.03, 0.06, 20}},
        {"Machine excavation", {0.31, 46.78, 48.39, 1.58, 2.45, 0.35, 0.06, 0.02, 0.03, 34}},
        {"Machine excavation", {0.17, 40.01, 55.23, 1.27, 2.73, 0.52, 0.05, 0.01, 0.01, 36}},
        {"Manual digging", {25.97, 0.81, 9.37, 39.77, 6.61, 6.21, 7.91, 1.85, 1.47, 22}},
    };
    return make_exemplar_set(std::move(rows));
}

ExemplarSet synth_incident_set(std::size_t n, std::size_t arity,
                               std::size_t n_classes, std::uint64_t seed) {
    if (n_classes < 1 || arity < 1 || n < n_classes) {
        throw DatasetError("invalid counts: need n >= n_classes >= 1 and arity >= 1");
    }
    std::mt19937_64 rng(seed);
    auto next_uint = [&rng](std::uint64_t bound) {  // uniform in [0, bound)
        return rng() % bound;
    };

    // Two sparse jitter patterns per class: pattern 0 is flat, pattern 1
    // perturbs a single feature on the 0.01 grid by 0.10..0.30.
    constexpr std::size_t kPatterns = 2;
    std::vector<std::vector<std::vector<double>>> patterns(n_classes);
    for (std::size_t c = 0; c < n_classes; ++c) {
        patterns[c].assign(kPatterns, std::vector<double>(arity, 0.0));
        std::size_t pos = next_uint(arity);
        double magnitude = 0.10 + 0.01 * static_cast<double>(next_uint(21));
        patterns[c][1][pos] = magnitude;
    }

    // Centroids are separated in two designated features; the rest of the
    // row is shared across classes so cross-class confusion stays cheap.
    std::vector<std::vector<double>> centroids(n_classes, std::vector<double>(arity));
    for (std::size_t c = 0; c < n_classes; ++c) {
        for (std::size_t k = 0; k < arity; ++k) {
            centroids[c][k] = 5.0 + 0.25 * static_cast<double>(k);
        }
        centroids[c][0] = 10.0 * static_cast<double>(c + 1);
        if (arity > 1) {
            centroids[c][1] = 50.0 + 5.0 * static_cast<double>(c);
        }
    }

    std::vector<Exemplar> rows;
    rows.reserve(n);
    std::vector<std::size_t> occurrence(n_classes, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t c = i % n_classes;
        // patterns alternate per class occurrence, so every subsampled
        // stream still carries recurring structure
        std::size_t p = occurrence[c]++ % kPatterns;
        Exemplar ex;
        ex.label = "Class " + std::string(1, static_cast<char>('A' + c % 26)) +
                   (c >= 26 ? std::to_string(c / 26) : "");
        ex.features.resize(arity);
        for (std::size_t k = 0; k < arity; ++k) {
            ex.features[k] = centroids[c][k] + patterns[c][p][k];
        }
        rows.push_back(std::move(ex));
    }
    return make_exemplar_set(std::move(rows));
}

}  // namespace pdla
