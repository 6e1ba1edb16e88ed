#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdla {

struct DatasetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One labeled feature row of a pipeline incident/threat dataset.
struct Exemplar {
    std::string label;
    std::vector<double> features;
};

/// Ordered collection of exemplars sharing one arity. Order is load order;
/// the DLA treats it as a temporal stream.
struct ExemplarSet {
    std::vector<Exemplar> exemplars;
    std::size_t arity = 0;
    std::vector<std::string> classes;  // distinct labels, first-appearance order

    std::size_t size() const { return exemplars.size(); }
    bool empty() const { return exemplars.empty(); }
};

/// Builds an ExemplarSet from rows, inferring arity and the class vocabulary.
/// Throws DatasetError on empty input, empty labels, non-finite features or
/// inconsistent arity.
ExemplarSet make_exemplar_set(std::vector<Exemplar> rows);

/// Loads `label,f1,...,fk` CSV. Labels must not contain commas.
ExemplarSet load_csv(const std::string& path, bool has_header = false);

/// Writes the set back out with 6 significant digits per feature.
void save_csv(const ExemplarSet& set, const std::string& path);

/// The four ten-feature threat rows shipped with the project
/// (vehicle passing, machine excavation x2, manual digging).
ExemplarSet bundled_threat_sample();

/// Deterministic synthetic incident dataset. Classes cycle through the row
/// order; each class has a distinct centroid plus a small per-class library
/// of sparse jitter patterns, so the stream has recallable temporal
/// structure. Pure function of its arguments.
ExemplarSet synth_incident_set(std::size_t n, std::size_t arity,
                               std::size_t n_classes, std::uint64_t seed);

}  // namespace pdla
