#include "ngram/suffix.hpp"

namespace ngram {

void suffix_map(const FragmentRecord& fragment, std::size_t sigma, ValueCodec codec, engine::Sink& out) {
    const Bytes value = occurrence_value(fragment.doc_id, codec);
    const std::size_t n = fragment.terms.size();
    for (std::size_t b = 0; b < n; ++b) out.emit(fragment.terms.subspan(b, std::min(sigma, n - b)), value);
}

std::size_t first_term_partition(TermView key, std::size_t partitions) {
    if (key.empty()) throw error("cannot partition an empty key by its first term");
    return static_cast<std::size_t>(mix64(key[0]) % partitions);
}

SuffixReducer::SuffixReducer(std::uint64_t tau, ValueCodec codec, EmissionFilter filter)
    : m_stacks(tau), m_codec(codec), m_filter(std::move(filter)) {}

void SuffixReducer::emit(engine::Sink& out, TermView ngram, std::uint64_t count) {
    if (m_filter && !m_filter(ngram, count)) return;
    m_scratch.clear();
    put_varint(m_scratch, count);
    out.emit(ngram, m_scratch);
}

void SuffixReducer::reduce(TermView key, std::span<const ByteView> values, engine::Sink& out) {
    m_stacks.push(key, occurrence_count(values, m_codec),
                  [&](TermView ngram, const std::uint64_t& count) { emit(out, ngram, count); });
}

void SuffixReducer::cleanup(engine::Sink& out) {
    m_stacks.flush([&](TermView ngram, const std::uint64_t& count) { emit(out, ngram, count); });
}

engine::JobSpec<FragmentRecord> suffix_job(const SuffixOptions& options) {
    engine::JobSpec<FragmentRecord> spec;
    spec.name = "suffix-sigma";
    spec.iteration = 1;
    spec.reducers = options.reducers;
    spec.partition = first_term_partition;
    spec.compare = reverse_lex_compare;
    const ValueCodec codec = codec_for(options.combiner);
    const std::uint64_t tau = options.tau;
    auto filter = options.filter;
    spec.reducer = [tau, codec, filter] {
        return std::make_unique<SuffixReducer>(tau, codec, filter ? filter() : EmissionFilter{});
    };
    if (options.combiner) spec.combiner = [] { return std::make_unique<SumCombiner>(); };
    const std::size_t sigma = options.sigma;
    spec.map = [sigma, codec](const FragmentRecord& f, engine::Sink& out) { suffix_map(f, sigma, codec, out); };
    return spec;
}

RunResult run_suffix_sigma(const Corpus& corpus, const SuffixOptions& options) {
    check_method_options(options);
    SplitCorpus split = split_for_tau(corpus, options.tau, options.engine);
    auto records = fragment_records(split.corpus);
    auto job = engine::run_job(suffix_job(options), std::span<const FragmentRecord>(records), options.engine);

    RunResult result;
    result.preprocessing = split.counters;
    result.jobs.push_back(job.counters);
    auto flat = job.flatten();
    result.stats = stats_from_counts(flat);
    if (options.keep_intermediate) result.intermediate.push_back(std::move(flat));
    return result;
}

}  // namespace ngram
