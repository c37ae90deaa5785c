#include "ngram/method.hpp"

#include "ngram/error.hpp"

namespace ngram {

engine::CounterSet RunResult::totals() const {
    engine::CounterSet total;
    total.job = "total";
    for (const auto& j : jobs) total += j;
    total.iteration = jobs.size();
    return total;
}

std::uint64_t occurrence_count(std::span<const ByteView> values, ValueCodec codec) {
    if (codec == ValueCodec::doc_ids) return values.size();
    std::uint64_t n = 0;
    for (const auto& v : values) n += decode_varint(v);
    return n;
}

Bytes occurrence_value(std::uint64_t doc_id, ValueCodec codec) {
    return encode_varint(codec == ValueCodec::doc_ids ? doc_id : 1);
}

void CountingReducer::reduce(TermView key, std::span<const ByteView> values, engine::Sink& out) {
    std::uint64_t cf = occurrence_count(values, m_codec);
    if (cf < m_tau) return;
    m_scratch.clear();
    put_varint(m_scratch, cf);
    out.emit(key, m_scratch);
}

void SumCombiner::reduce(TermView key, std::span<const ByteView> values, engine::Sink& out) {
    m_scratch.clear();
    put_varint(m_scratch, occurrence_count(values, ValueCodec::partial_counts));
    out.emit(key, m_scratch);
}

std::size_t hash_partition(TermView key, std::size_t partitions) {
    return static_cast<std::size_t>(hash_sequence(key) % partitions);
}

SplitCorpus split_for_tau(const Corpus& corpus, std::uint64_t tau, const engine::EngineOptions& options) {
    auto records = fragment_records(corpus);
    engine::JobSpec<FragmentRecord> spec;
    spec.name = "unigram-split";
    spec.reducers = 1;
    spec.partition = hash_partition;
    spec.compare = lex_compare;
    spec.reducer = [] { return std::make_unique<CountingReducer>(1, ValueCodec::partial_counts); };
    spec.combiner = [] { return std::make_unique<SumCombiner>(); };
    const Bytes one = encode_varint(1);
    spec.map = [&](const FragmentRecord& f, engine::Sink& out) {
        for (std::size_t i = 0; i < f.terms.size(); ++i) out.emit(f.terms.subspan(i, 1), one);
    };
    auto result = engine::run_job(spec, std::span<const FragmentRecord>(records), options);

    SplitCorpus split;
    split.counters = result.counters;
    for (const auto& part : result.partitions) {
        for (const auto& kv : part) {
            TermId t = kv.key.at(0);
            if (t >= split.frequent.size()) split.frequent.resize(t + 1, false);
            split.frequent[t] = decode_varint(kv.value) >= tau;
        }
    }
    split.corpus = split_corpus(corpus, split.frequent);
    return split;
}

void check_method_options(const MethodOptions& options) {
    if (options.tau < 1) throw error("tau must be at least 1");
    if (options.sigma < 1) throw error("sigma must be at least 1");
    if (options.reducers < 1) throw error("at least one reducer is required");
}

}  // namespace ngram
