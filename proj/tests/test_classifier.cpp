#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "pdla/classifier.hpp"
#include "pdla/dataset.hpp"

using namespace pdla;

namespace {

// independent counting oracle for mapca
double naive_mapca(const Matrix& y, const Matrix& yhat, double tol) {
    std::size_t hits = 0, total = 0;
    for (std::size_t r = 0; r < y.size(); ++r) {
        for (std::size_t c = 0; c < y[r].size(); ++c) {
            ++total;
            if (std::abs(y[r][c] - yhat[r][c]) < tol) ++hits;
        }
    }
    return 100.0 * static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace

TEST_CASE("mapca hand cases") {
    CHECK(mapca({{1, 2, 3}}, {{1, 2, 3}}, 0.05).accuracy_percent == 100.0);
    CHECK(mapca({{1, 2, 3, 4}}, {{1.01, 2.2, 3, 4}}, 0.05).accuracy_percent == 75.0);
    // boundary is a miss: the inequality is strict
    CHECK(mapca({{5}}, {{5.05}}, 0.05).accuracy_percent == 0.0);
}

TEST_CASE("mapca error paths") {
    CHECK_THROWS_AS(mapca({{1}}, {{1, 2}}, 0.05), ClassifierError);
    CHECK_THROWS_AS(mapca({{1}}, {{1}}, 0.0), ClassifierError);
    CHECK_THROWS_AS(mapca({}, {}, 0.05), ClassifierError);
    CHECK_THROWS_AS(mapca({{}}, {{}}, 0.05), ClassifierError);
}

TEST_CASE("mapca equals the naive oracle on random triples") {
    std::mt19937_64 rng(123);
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int trial = 0; trial < 1000; ++trial) {
        std::size_t rows = 1 + rng() % 20, cols = 1 + rng() % 20;
        Matrix y(rows, std::vector<double>(cols)), yhat(rows, std::vector<double>(cols));
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) {
                y[r][c] = (unit() - 0.5) * 10.0;
                yhat[r][c] = y[r][c] + (unit() - 0.5) * 0.3;
            }
        }
        double tol = 0.001 + unit() * 0.2;
        CHECK(mapca(y, yhat, tol).accuracy_percent == naive_mapca(y, yhat, tol));
    }
}

TEST_CASE("mapca is monotone in the tolerance and permutation invariant") {
    std::mt19937_64 rng(321);
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    Matrix y(5, std::vector<double>(7)), yhat(5, std::vector<double>(7));
    for (auto& row : y)
        for (double& v : row) v = unit() * 4.0;
    for (std::size_t r = 0; r < 5; ++r)
        for (std::size_t c = 0; c < 7; ++c) yhat[r][c] = y[r][c] + (unit() - 0.5) * 0.2;

    double previous = 0.0;
    for (double tol : {0.01, 0.02, 0.05, 0.1, 0.2, 1.0}) {
        double accuracy = mapca(y, yhat, tol).accuracy_percent;
        CHECK(accuracy >= previous);
        CHECK(accuracy >= 0.0);
        CHECK(accuracy <= 100.0);
        previous = accuracy;
    }

    // reverse both matrices the same way: the count cannot change
    Matrix y_rev = y, yhat_rev = yhat;
    std::reverse(y_rev.begin(), y_rev.end());
    std::reverse(yhat_rev.begin(), yhat_rev.end());
    CHECK(mapca(y, yhat, 0.05).hits == mapca(y_rev, yhat_rev, 0.05).hits);
}

TEST_CASE("assign_label picks the nearest exemplar") {
    ExemplarSet reference = bundled_threat_sample();
    CHECK(assign_label(reference.exemplars[3].features, reference) == "Manual digging");

    // every exemplar maps to its own label
    for (const Exemplar& ex : reference.exemplars) {
        CHECK(assign_label(ex.features, reference) == ex.label);
    }
}

TEST_CASE("assign_label ties go to the earliest exemplar") {
    ExemplarSet reference = make_exemplar_set({
        {"A", {0.0}},
        {"B", {5.0}},
        {"C", {2.0}},
    });
    CHECK(assign_label({1.0}, reference) == "A");  // equidistant to A and C
}

TEST_CASE("assign_label validates input") {
    ExemplarSet reference = bundled_threat_sample();
    CHECK_THROWS_AS(assign_label({1.0, 2.0}, reference), ClassifierError);
}
