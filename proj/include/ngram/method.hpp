#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "ngram/corpus.hpp"
#include "ngram/engine.hpp"
#include "ngram/stats.hpp"

namespace ngram {

/// σ value meaning "no length bound".
inline constexpr std::size_t unbounded = std::numeric_limits<std::size_t>::max();

struct MethodOptions {
    std::uint64_t tau = 1;
    std::size_t sigma = unbounded;
    std::size_t reducers = 1;
    bool combiner = true;
    bool keep_intermediate = false;
    engine::EngineOptions engine;
};

struct RunResult {
    StatSet stats;
    /// Unigram job that feeds document splitting; identical for every method.
    engine::CounterSet preprocessing;
    /// Method jobs in execution order.
    std::vector<engine::CounterSet> jobs;
    /// Per-iteration reduce output, kept only with keep_intermediate.
    std::vector<std::vector<engine::KeyValue>> intermediate;

    engine::CounterSet totals() const;
};

/// How map values encode occurrences: one doc id per occurrence, or a
/// varint partial count that a combiner can pre-aggregate.
enum class ValueCodec { doc_ids, partial_counts };

inline ValueCodec codec_for(bool combiner) {
    return combiner ? ValueCodec::partial_counts : ValueCodec::doc_ids;
}

std::uint64_t occurrence_count(std::span<const ByteView> values, ValueCodec codec);

/// Value for a single occurrence under `codec`.
Bytes occurrence_value(std::uint64_t doc_id, ValueCodec codec);

/// Emits (key, count) when the group's occurrence count reaches tau.
class CountingReducer : public engine::Reducer {
public:
    CountingReducer(std::uint64_t tau, ValueCodec codec) : m_tau(tau), m_codec(codec) {}
    void reduce(TermView key, std::span<const ByteView> values, engine::Sink& out) override;

private:
    std::uint64_t m_tau;
    ValueCodec m_codec;
    Bytes m_scratch;
};

/// Map-side pre-aggregation of varint partial counts.
class SumCombiner : public engine::Reducer {
public:
    void reduce(TermView key, std::span<const ByteView> values, engine::Sink& out) override;

private:
    Bytes m_scratch;
};

std::size_t hash_partition(TermView key, std::size_t partitions);

struct SplitCorpus {
    Corpus corpus;
    std::vector<bool> frequent;  // indexed by term id
    engine::CounterSet counters;
};

/// Counts unigrams with one engine job and cuts every fragment at terms
/// whose collection frequency is below tau.
SplitCorpus split_for_tau(const Corpus& corpus, std::uint64_t tau, const engine::EngineOptions& options);

void check_method_options(const MethodOptions& options);

}  // namespace ngram
