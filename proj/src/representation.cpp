#include "pdla/representation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pdla {

namespace {

double scale_factor(int digits) {
    double f = 1.0;
    for (int i = 0; i < digits; ++i) f *= 10.0;
    return f;
}

}  // namespace

IntegerChunk encode(const std::vector<double>& features, const EncoderConfig& cfg) {
    if (cfg.scale_digits < 0 || cfg.scale_digits > 9) {
        throw RepresentationError("scale_digits must be in [0, 9]");
    }
    const double scale = scale_factor(cfg.scale_digits);
    IntegerChunk chunk;
    chunk.units.reserve(features.size());
    for (double f : features) {
        if (!std::isfinite(f)) {
            throw RepresentationError("non-finite feature value");
        }
        double scaled = f * scale;
        if (std::abs(scaled) >= 9.2e18) {
            throw RepresentationError("scaled value overflows 64-bit integer");
        }
        // Snap values a few ulps off a .5 boundary onto it, so decimal
        // inputs like 1.005 round away from zero as intended.
        double half = std::floor(scaled) + 0.5;
        double ulp_window = 64.0 * std::numeric_limits<double>::epsilon() *
                            std::max(1.0, std::abs(scaled));
        if (std::abs(scaled - half) <= ulp_window) {
            scaled = half;
        }
        // llround rounds halfway cases away from zero
        chunk.units.push_back(std::llround(scaled));
    }
    return chunk;
}

std::vector<double> decode(const IntegerChunk& chunk, const EncoderConfig& cfg) {
    const double scale = scale_factor(cfg.scale_digits);
    std::vector<double> values;
    values.reserve(chunk.units.size());
    for (std::int64_t u : chunk.units) {
        values.push_back(static_cast<double>(u) / scale);
    }
    return values;
}

std::vector<IntegerChunk> apply_sks(const std::vector<IntegerChunk>& sequences,
                                    const SksPolicy& policy) {
    if (policy.sks < 1) {
        throw RepresentationError("sks step must be >= 1");
    }
    if (policy.sks == 1) return sequences;
    std::vector<IntegerChunk> kept;
    kept.reserve((sequences.size() + policy.sks - 1) / policy.sks);
    for (std::size_t i = 0; i < sequences.size(); i += static_cast<std::size_t>(policy.sks)) {
        kept.push_back(sequences[i]);
    }
    return kept;
}

}  // namespace pdla
