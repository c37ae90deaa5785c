#include "ngram/naive.hpp"

namespace ngram {

void naive_map(const FragmentRecord& fragment, std::size_t sigma, ValueCodec codec, engine::Sink& out) {
    const Bytes value = occurrence_value(fragment.doc_id, codec);
    const std::size_t n = fragment.terms.size();
    for (std::size_t b = 0; b < n; ++b) {
        std::size_t max_len = std::min(sigma, n - b);
        for (std::size_t len = 1; len <= max_len; ++len) out.emit(fragment.terms.subspan(b, len), value);
    }
}

engine::JobSpec<FragmentRecord> naive_job(const MethodOptions& options) {
    engine::JobSpec<FragmentRecord> spec;
    spec.name = "naive";
    spec.iteration = 1;
    spec.reducers = options.reducers;
    spec.partition = hash_partition;
    spec.compare = lex_compare;
    const ValueCodec codec = codec_for(options.combiner);
    const std::uint64_t tau = options.tau;
    spec.reducer = [tau, codec] { return std::make_unique<CountingReducer>(tau, codec); };
    if (options.combiner) spec.combiner = [] { return std::make_unique<SumCombiner>(); };
    const std::size_t sigma = options.sigma;
    spec.map = [sigma, codec](const FragmentRecord& f, engine::Sink& out) { naive_map(f, sigma, codec, out); };
    return spec;
}

RunResult run_naive(const Corpus& corpus, const MethodOptions& options) {
    check_method_options(options);
    SplitCorpus split = split_for_tau(corpus, options.tau, options.engine);
    auto records = fragment_records(split.corpus);
    auto job = engine::run_job(naive_job(options), std::span<const FragmentRecord>(records), options.engine);

    RunResult result;
    result.preprocessing = split.counters;
    result.jobs.push_back(job.counters);
    auto flat = job.flatten();
    result.stats = stats_from_counts(flat);
    if (options.keep_intermediate) result.intermediate.push_back(std::move(flat));
    return result;
}

}  // namespace ngram
