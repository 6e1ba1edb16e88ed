#include "pdla/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pdla {

MapcaReport mapca(const Matrix& y, const Matrix& yhat, double tol) {
    if (!(tol > 0.0)) throw ClassifierError("tolerance must be > 0");
    if (y.size() != yhat.size()) throw ClassifierError("row count mismatch");
    if (y.empty()) throw ClassifierError("empty observation matrix");

    MapcaReport report;
    report.tol = tol;
    for (std::size_t r = 0; r < y.size(); ++r) {
        if (y[r].size() != yhat[r].size()) {
            throw ClassifierError("shape mismatch at row " + std::to_string(r + 1));
        }
        for (std::size_t c = 0; c < y[r].size(); ++c) {
            ++report.n_z;
            double diff = std::abs(y[r][c] - yhat[r][c]);
            // errors landing on the tolerance up to representation noise
            // count as the boundary, and the boundary is a miss
            if (std::abs(diff - tol) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                            std::max(1.0, tol)) {
                continue;
            }
            if (diff < tol) ++report.hits;
        }
    }
    if (report.n_z == 0) throw ClassifierError("empty observation matrix");
    report.accuracy_percent =
        100.0 * static_cast<double>(report.hits) / static_cast<double>(report.n_z);
    return report;
}

std::string assign_label(const std::vector<double>& predicted_features,
                         const ExemplarSet& reference) {
    if (reference.empty()) throw ClassifierError("empty reference set");
    if (predicted_features.size() != reference.arity) {
        throw ClassifierError("arity mismatch: predicted " +
                              std::to_string(predicted_features.size()) + ", reference " +
                              std::to_string(reference.arity));
    }
    std::size_t best = 0;
    double best_distance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < reference.size(); ++i) {
        double distance = 0.0;
        for (std::size_t k = 0; k < reference.arity; ++k) {
            distance += std::abs(predicted_features[k] - reference.exemplars[i].features[k]);
        }
        if (distance < best_distance) {
            best_distance = distance;
            best = i;
        }
    }
    return reference.exemplars[best].label;
}

}  // namespace pdla
