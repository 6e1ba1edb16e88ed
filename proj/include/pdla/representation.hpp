#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace pdla {

/// A chunk of symbolic integer units; the unit of memory and prediction.
struct IntegerChunk {
    std::vector<std::int64_t> units;

    bool operator==(const IntegerChunk&) const = default;
    std::size_t size() const { return units.size(); }
};

/// Fixed-point scaling: d decimal digits retained (units = value * 10^d).
struct EncoderConfig {
    int scale_digits = 2;
};

/// Skip-sequence policy: keep one chunk of every `sks` in the stream.
struct SksPolicy {
    int sks = 1;
};

struct RepresentationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// unit_i = round_half_away_from_zero(features_i * 10^d).
IntegerChunk encode(const std::vector<double>& features, const EncoderConfig& cfg);

/// value_i = unit_i / 10^d.
std::vector<double> decode(const IntegerChunk& chunk, const EncoderConfig& cfg);

/// Retains chunks at 1-based indices i with (i-1) mod sks == 0, order
/// preserved. sks = 1 is the identity.
std::vector<IntegerChunk> apply_sks(const std::vector<IntegerChunk>& sequences,
                                    const SksPolicy& policy);

}  // namespace pdla
