#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pdla/dataset.hpp"
#include "pdla/dla.hpp"
#include "pdla/representation.hpp"

using namespace pdla;

namespace {

DlaConfig small_config(int threshold) {
    DlaConfig cfg;
    cfg.store_threshold = threshold;
    return cfg;
}

std::int64_t brute_force_min_score(const MemoryStore& store, const IntegerChunk& input) {
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (const MemorizedChunk& mc : store.chunks()) {
        best = std::min(best, mismatch(input, mc.chunk, store.config().learning_extent));
    }
    return best;
}

}  // namespace

TEST_CASE("mismatch is truncated L1") {
    CHECK(mismatch({{10, 20}}, {{10, 20}}, 2) == 0);
    CHECK(mismatch({{10, 22}}, {{10, 21}}, 2) == 1);
    CHECK(mismatch({{10, 22}}, {{10, 21}}, 1) == 0);
    // missing positions count as zero
    CHECK(mismatch({{5, 5, 5}}, {{5}}, 10) == 10);
    CHECK_THROWS_AS(mismatch({{1}}, {{1}}, 0), DlaError);
}

TEST_CASE("mismatch is non-decreasing in the learning extent") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        IntegerChunk a, b;
        std::size_t len = 1 + rng() % 12;
        for (std::size_t i = 0; i < len; ++i) {
            a.units.push_back(static_cast<std::int64_t>(rng() % 100) - 50);
            b.units.push_back(static_cast<std::int64_t>(rng() % 100) - 50);
        }
        std::int64_t previous = 0;
        for (int ext = 1; ext <= 16; ++ext) {
            std::int64_t score = mismatch(a, b, ext);
            CHECK(score >= previous);
            previous = score;
        }
    }
}

TEST_CASE("store_chunk evicts FIFO at the threshold") {
    MemoryStore store(small_config(2));
    store.store_chunk({{1}});
    store.store_chunk({{2}});
    store.store_chunk({{3}});
    REQUIRE(store.chunks().size() == 2);
    CHECK(store.chunks()[0].chunk == IntegerChunk{{2}});
    CHECK(store.chunks()[1].chunk == IntegerChunk{{3}});
}

TEST_CASE("new chunks start at the initial permanence") {
    MemoryStore store(small_config(10));
    store.store_chunk({{7}});
    REQUIRE(store.chunks().size() == 1);
    CHECK(store.chunks()[0].permanence == 0.0);
}

TEST_CASE("190 inserts against threshold 120 keep the last 120") {
    MemoryStore store(small_config(120));
    for (std::int64_t i = 1; i <= 190; ++i) store.store_chunk({{i}});
    REQUIRE(store.chunks().size() == 120);
    CHECK(store.chunks().front().chunk == IntegerChunk{{71}});
}

TEST_CASE("pre_predict returns all minimal-mismatch chunks in order") {
    MemoryStore store(small_config(10));
    store.store_chunk({{10, 20}});
    store.store_chunk({{10, 21}});
    store.store_chunk({{50, 60}});

    MatchResult exact = store.pre_predict({{10, 20}});
    CHECK(exact.candidate_indices == std::vector<std::size_t>{0});
    CHECK(exact.score == 0);

    MatchResult near = store.pre_predict({{10, 22}});
    CHECK(near.candidate_indices == std::vector<std::size_t>{1});
    CHECK(near.score == 1);
}

TEST_CASE("pre_predict keeps ties") {
    MemoryStore store(small_config(10));
    store.store_chunk({{5}});
    store.store_chunk({{5}});
    MatchResult match = store.pre_predict({{5}});
    CHECK(match.candidate_indices == std::vector<std::size_t>{0, 1});
    CHECK(match.score == 0);
}

TEST_CASE("pre_predict on empty store throws NoMemory") {
    MemoryStore store(small_config(10));
    CHECK_THROWS_WITH_AS(store.pre_predict({{1}}), doctest::Contains("NoMemory"), DlaError);
}

TEST_CASE("post_predict selects by permanence then recency and reinforces") {
    MemoryStore store(small_config(10));
    store.store_chunk({{1}});
    store.store_chunk({{1}});
    store.store_chunk({{1}});

    // equal permanence: the most recent candidate wins
    MatchResult match = store.pre_predict({{1}});
    Prediction first = store.post_predict(match);
    CHECK(first.selected == IntegerChunk{{1}});
    CHECK(store.chunks()[2].permanence == 1.0);

    // now chunk 2 outranks the rest by permanence
    Prediction second = store.post_predict(store.pre_predict({{1}}));
    CHECK(store.chunks()[2].permanence == 2.0);
    CHECK(second.mismatch_score == 0);
    CHECK(second.candidates.size() == 3);
}

TEST_CASE("deviant average and extrapolation follow the backward additive rule") {
    MemoryStore store(small_config(10));
    store.store_chunk({{2}});
    store.store_chunk({{4}});
    store.store_chunk({{6}});
    CHECK(store.deviant_average() == std::vector<double>{2.0});
    CHECK(store.extrapolate() == IntegerChunk{{8}});
}

TEST_CASE("deviant average degenerate cases") {
    MemoryStore single(small_config(10));
    single.store_chunk({{7}});
    CHECK(single.deviant_average() == std::vector<double>{0.0});
    CHECK(single.extrapolate() == IntegerChunk{{7}});

    MemoryStore identical(small_config(10));
    identical.store_chunk({{1, 1}});
    identical.store_chunk({{1, 1}});
    identical.store_chunk({{1, 1}});
    CHECK(identical.deviant_average() == std::vector<double>{0.0, 0.0});

    MemoryStore zeros(small_config(10));
    zeros.store_chunk({{0}});
    zeros.store_chunk({{0}});
    CHECK(zeros.extrapolate() == IntegerChunk{{0}});
}

TEST_CASE("extrapolate equals the last chunk when history is uniform") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        MemoryStore store(small_config(20));
        IntegerChunk chunk;
        std::size_t len = 1 + rng() % 6;
        for (std::size_t i = 0; i < len; ++i) {
            chunk.units.push_back(static_cast<std::int64_t>(rng() % 1000) - 500);
        }
        std::size_t copies = 1 + rng() % 10;
        for (std::size_t i = 0; i < copies; ++i) store.store_chunk(chunk);
        CHECK(store.extrapolate() == chunk);
        for (double v : store.deviant_average()) CHECK(v >= 0.0);
    }
}

TEST_CASE("run_episode emits one prediction per step after the first") {
    MemoryStore store(small_config(10));
    CHECK_THROWS_AS(run_episode(store, {}), DlaError);

    MemoryStore single(small_config(10));
    CHECK(run_episode(single, {{{1, 2}}}).empty());

    MemoryStore recall(small_config(10));
    std::vector<Prediction> predictions = run_episode(recall, {{{9, 9}}, {{9, 9}}});
    REQUIRE(predictions.size() == 1);
    CHECK(predictions[0].selected == IntegerChunk{{9, 9}});
    CHECK(predictions[0].mismatch_score == 0);
}

TEST_CASE("run_episode on the bundled sample recalls the first row") {
    ExemplarSet data = bundled_threat_sample();
    EncoderConfig encoder{2};
    std::vector<IntegerChunk> stream;
    for (const Exemplar& ex : data.exemplars) stream.push_back(encode(ex.features, encoder));

    MemoryStore store{DlaConfig{}};
    std::vector<Prediction> predictions = run_episode(store, stream);
    REQUIRE(predictions.size() == 3);
    CHECK(predictions[0].selected == stream[0]);
}

TEST_CASE("run_episode is deterministic") {
    ExemplarSet data = synth_incident_set(60, 6, 3, 3);
    EncoderConfig encoder{2};
    std::vector<IntegerChunk> stream;
    for (const Exemplar& ex : data.exemplars) stream.push_back(encode(ex.features, encoder));

    MemoryStore a{DlaConfig{}}, b{DlaConfig{}};
    std::vector<Prediction> pa = run_episode(a, stream);
    std::vector<Prediction> pb = run_episode(b, stream);
    REQUIRE(pa.size() == pb.size());
    for (std::size_t i = 0; i < pa.size(); ++i) {
        CHECK(pa[i].selected == pb[i].selected);
        CHECK(pa[i].extrapolated == pb[i].extrapolated);
        CHECK(pa[i].candidates == pb[i].candidates);
        CHECK(pa[i].mismatch_score == pb[i].mismatch_score);
    }
}

TEST_CASE("replay of memorized chunks recalls with zero mismatch") {
    ExemplarSet data = synth_incident_set(40, 5, 4, 9);
    EncoderConfig encoder{2};
    std::vector<IntegerChunk> stream;
    for (const Exemplar& ex : data.exemplars) stream.push_back(encode(ex.features, encoder));

    MemoryStore store{DlaConfig{}};
    run_episode(store, stream);
    for (const IntegerChunk& chunk : stream) {
        CHECK(store.pre_predict(chunk).score == 0);
    }
}

TEST_CASE("randomized operations keep invariants") {
    std::mt19937_64 rng(99);
    DlaConfig cfg;
    cfg.store_threshold = 1 + static_cast<int>(rng() % 60);
    MemoryStore store(cfg);
    std::vector<double> last_permanence;

    for (int op = 0; op < 5000; ++op) {
        if (store.empty() || rng() % 3 != 0) {
            IntegerChunk chunk;
            std::size_t len = 1 + rng() % 8;
            for (std::size_t i = 0; i < len; ++i) {
                chunk.units.push_back(static_cast<std::int64_t>(rng() % 200) - 100);
            }
            store.store_chunk(chunk);
        } else {
            IntegerChunk query;
            std::size_t len = 1 + rng() % 8;
            for (std::size_t i = 0; i < len; ++i) {
                query.units.push_back(static_cast<std::int64_t>(rng() % 200) - 100);
            }
            MatchResult match = store.pre_predict(query);
            std::int64_t best = brute_force_min_score(store, query);
            CHECK(match.score == best);
            for (std::size_t idx : match.candidate_indices) {
                CHECK(mismatch(query, store.chunks()[idx].chunk, cfg.learning_extent) == best);
            }
            store.post_predict(match);
        }
        CHECK(store.chunks().size() <= static_cast<std::size_t>(cfg.store_threshold));
        // permanence never decreases and birth steps stay ordered
        for (std::size_t i = 0; i + 1 < store.chunks().size(); ++i) {
            CHECK(store.chunks()[i].birth_step < store.chunks()[i + 1].birth_step);
        }
        for (const MemorizedChunk& mc : store.chunks()) CHECK(mc.permanence >= 0.0);
    }
}
