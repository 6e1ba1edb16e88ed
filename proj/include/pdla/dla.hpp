#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pdla/representation.hpp"

namespace pdla {

struct DlaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DlaConfig {
    int learning_extent = 121;     // integer units compared per chunk
    int time_limit = 10;           // steps per learning episode
    int store_threshold = 120;     // max memorized chunks
    double initial_permanence = 0.0;
    double tolerance = 0.05;       // feature-space units, used by scoring

    void validate() const;
};

struct MemorizedChunk {
    IntegerChunk chunk;
    double permanence = 0.0;
    std::uint64_t birth_step = 0;
};

/// Result of sequential pre-prediction: every stored chunk achieving the
/// minimal mismatch against the input, in store order.
struct MatchResult {
    std::vector<std::size_t> candidate_indices;
    std::int64_t score = 0;
};

struct Prediction {
    std::vector<IntegerChunk> candidates;
    IntegerChunk selected;
    IntegerChunk extrapolated;  // K_p: latest chunk + rounded mean absolute deviation
    std::int64_t mismatch_score = 0;
};

/// Truncated L1 distance over the first l_ext units; missing positions
/// count as zero.
std::int64_t mismatch(const IntegerChunk& a, const IntegerChunk& b, int l_ext);

/// The deviant-learning sequence memory. Single writer; snapshot reads are
/// safe concurrently.
class MemoryStore {
public:
    explicit MemoryStore(DlaConfig cfg);

    /// Appends the chunk with initial permanence; evicts the oldest chunk
    /// first when the store threshold would be exceeded.
    void store_chunk(const IntegerChunk& chunk);

    /// All minimal-mismatch chunks for the input. Throws DlaError("NoMemory")
    /// on an empty store.
    MatchResult pre_predict(const IntegerChunk& input) const;

    /// Selects the candidate with highest permanence (ties: most recent
    /// birth_step), reinforces it by 1, and attaches the extrapolated chunk.
    /// When `cached_extrapolation` is given it is used instead of a fresh
    /// extrapolate() call (episode batching).
    Prediction post_predict(const MatchResult& match,
                            const std::optional<IntegerChunk>& cached_extrapolation = std::nullopt);

    /// Elementwise mean absolute deviation of the latest chunk against the
    /// whole store (the latest-vs-itself term contributes zero).
    std::vector<double> deviant_average() const;

    /// K_p = round(deviant_average) + latest chunk, elementwise.
    IntegerChunk extrapolate() const;

    const std::deque<MemorizedChunk>& chunks() const { return chunks_; }
    const DlaConfig& config() const { return config_; }
    std::uint64_t clock() const { return clock_; }
    bool empty() const { return chunks_.empty(); }

private:
    std::deque<MemorizedChunk> chunks_;
    DlaConfig config_;
    std::uint64_t clock_ = 0;
};

/// Online next-step loop: for each incoming chunk, predict against memory
/// (when nonempty) and then memorize it. The deviant extrapolation is
/// refreshed at each episode boundary (every time_limit steps). Output
/// length is |stream| - 1.
std::vector<Prediction> run_episode(MemoryStore& store,
                                    const std::vector<IntegerChunk>& stream);

}  // namespace pdla
