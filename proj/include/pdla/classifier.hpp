#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "pdla/dataset.hpp"

namespace pdla {

struct ClassifierError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Real matrix as rows of equal width.
using Matrix = std::vector<std::vector<double>>;

/// Mean absolute percentage classification accuracy: the fraction of
/// elements whose absolute error is strictly below the tolerance, times 100.
struct MapcaReport {
    std::size_t hits = 0;
    std::size_t n_z = 0;  // total element count
    double tol = 0.0;
    double accuracy_percent = 0.0;
};

MapcaReport mapca(const Matrix& y, const Matrix& yhat, double tol);

/// Label of the reference exemplar with minimal L1 distance to the
/// predicted feature row; ties go to the earliest exemplar.
std::string assign_label(const std::vector<double>& predicted_features,
                         const ExemplarSet& reference);

}  // namespace pdla
