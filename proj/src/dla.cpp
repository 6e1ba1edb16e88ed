#include "pdla/dla.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pdla {

void DlaConfig::validate() const {
    if (learning_extent < 1) throw DlaError("learning_extent must be >= 1");
    if (time_limit < 1) throw DlaError("time_limit must be >= 1");
    if (store_threshold < 1) throw DlaError("store_threshold must be >= 1");
    if (initial_permanence < 0.0) throw DlaError("initial_permanence must be >= 0");
    if (!(tolerance > 0.0)) throw DlaError("tolerance must be > 0");
}

std::int64_t mismatch(const IntegerChunk& a, const IntegerChunk& b, int l_ext) {
    if (l_ext < 1) throw DlaError("learning extent must be >= 1");
    std::size_t span = std::min<std::size_t>(static_cast<std::size_t>(l_ext),
                                             std::max(a.size(), b.size()));
    std::int64_t total = 0;
    for (std::size_t i = 0; i < span; ++i) {
        std::int64_t ai = i < a.size() ? a.units[i] : 0;
        std::int64_t bi = i < b.size() ? b.units[i] : 0;
        total += std::abs(ai - bi);
    }
    return total;
}

MemoryStore::MemoryStore(DlaConfig cfg) : config_(cfg) {
    config_.validate();
}

void MemoryStore::store_chunk(const IntegerChunk& chunk) {
    if (chunk.units.empty()) throw DlaError("cannot store an empty chunk");
    if (chunks_.size() == static_cast<std::size_t>(config_.store_threshold)) {
        chunks_.pop_front();
    }
    chunks_.push_back({chunk, config_.initial_permanence, clock_});
    ++clock_;
}

MatchResult MemoryStore::pre_predict(const IntegerChunk& input) const {
    if (chunks_.empty()) throw DlaError("NoMemory: store is empty");
    MatchResult result;
    result.score = std::numeric_limits<std::int64_t>::max();
    for (std::size_t i = 0; i < chunks_.size(); ++i) {
        std::int64_t score = mismatch(input, chunks_[i].chunk, config_.learning_extent);
        if (score < result.score) {
            result.score = score;
            result.candidate_indices.clear();
        }
        if (score == result.score) {
            result.candidate_indices.push_back(i);
        }
    }
    return result;
}

Prediction MemoryStore::post_predict(const MatchResult& match,
                                     const std::optional<IntegerChunk>& cached_extrapolation) {
    if (match.candidate_indices.empty()) throw DlaError("post_predict: no candidates");
    std::size_t best = match.candidate_indices.front();
    for (std::size_t idx : match.candidate_indices) {
        if (chunks_[idx].permanence > chunks_[best].permanence ||
            (chunks_[idx].permanence == chunks_[best].permanence &&
             chunks_[idx].birth_step > chunks_[best].birth_step)) {
            best = idx;
        }
    }
    chunks_[best].permanence += 1.0;

    Prediction prediction;
    prediction.candidates.reserve(match.candidate_indices.size());
    for (std::size_t idx : match.candidate_indices) {
        prediction.candidates.push_back(chunks_[idx].chunk);
    }
    prediction.selected = chunks_[best].chunk;
    prediction.extrapolated = cached_extrapolation ? *cached_extrapolation : extrapolate();
    prediction.mismatch_score = match.score;
    return prediction;
}

std::vector<double> MemoryStore::deviant_average() const {
    if (chunks_.empty()) throw DlaError("deviant_average: store is empty");
    const IntegerChunk& latest = chunks_.back().chunk;
    std::size_t width = latest.size();
    for (const MemorizedChunk& mc : chunks_) width = std::max(width, mc.chunk.size());

    std::vector<double> avg(width, 0.0);
    for (const MemorizedChunk& mc : chunks_) {
        for (std::size_t i = 0; i < width; ++i) {
            std::int64_t latest_i = i < latest.size() ? latest.units[i] : 0;
            std::int64_t chunk_i = i < mc.chunk.size() ? mc.chunk.units[i] : 0;
            avg[i] += static_cast<double>(std::abs(latest_i - chunk_i));
        }
    }
    const double n = static_cast<double>(chunks_.size());
    for (double& v : avg) v /= n;
    return avg;
}

IntegerChunk MemoryStore::extrapolate() const {
    std::vector<double> avg = deviant_average();
    const IntegerChunk& latest = chunks_.back().chunk;
    IntegerChunk predicted;
    predicted.units.resize(avg.size());
    for (std::size_t i = 0; i < avg.size(); ++i) {
        std::int64_t latest_i = i < latest.size() ? latest.units[i] : 0;
        predicted.units[i] = std::llround(avg[i]) + latest_i;
    }
    return predicted;
}

std::vector<Prediction> run_episode(MemoryStore& store,
                                    const std::vector<IntegerChunk>& stream) {
    if (stream.empty()) throw DlaError("run_episode: empty stream");
    std::vector<Prediction> predictions;
    predictions.reserve(stream.size() > 0 ? stream.size() - 1 : 0);
    const int episode_len = store.config().time_limit;
    std::optional<IntegerChunk> cached;
    for (std::size_t step = 0; step < stream.size(); ++step) {
        if (step % static_cast<std::size_t>(episode_len) == 0) {
            cached.reset();  // episode boundary: force a fresh extrapolation
        }
        if (!store.empty()) {
            if (!cached) cached = store.extrapolate();
            MatchResult match = store.pre_predict(stream[step]);
            predictions.push_back(store.post_predict(match, cached));
        }
        store.store_chunk(stream[step]);
    }
    return predictions;
}

}  // namespace pdla
