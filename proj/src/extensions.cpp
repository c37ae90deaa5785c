#include "ngram/extensions.hpp"

#include "ngram/error.hpp"

namespace ngram {

bool PrefixFilter::admit(TermView ngram, std::uint64_t count) {
    if (m_have_last && is_prefix(ngram, m_last)) {
        if (m_mode == FilterMode::maximal) return false;
        if (count == m_last_count) return false;
    }
    m_last.assign(ngram.begin(), ngram.end());
    m_last_count = count;
    m_have_last = true;
    return true;
}

namespace {

class PostFilterReducer : public engine::Reducer {
public:
    explicit PostFilterReducer(FilterMode mode) : m_filter(mode) {}

    void reduce(TermView reversed_gram, std::span<const ByteView> values, engine::Sink& out) override {
        if (values.size() != 1) throw error("duplicate n-gram in post-filter input");
        std::uint64_t count = decode_varint(values[0]);
        if (!m_filter.admit(reversed_gram, count)) return;
        TermSequence original = reversed(reversed_gram);
        out.emit(original, values[0]);
    }

private:
    PrefixFilter m_filter;
};

}  // namespace

PostFilterResult reverse_post_filter(const StatSet& prefix_filtered, FilterMode mode, std::size_t reducers,
                                     const engine::EngineOptions& options) {
    engine::JobSpec<NGramStat> spec;
    spec.name = mode == FilterMode::maximal ? "post-filter-maximal" : "post-filter-closed";
    spec.iteration = 1;
    spec.reducers = reducers;
    spec.partition = first_term_partition;
    spec.compare = reverse_lex_compare;
    spec.reducer = [mode] { return std::make_unique<PostFilterReducer>(mode); };
    spec.map = [](const NGramStat& s, engine::Sink& out) {
        TermSequence rev = reversed(s.ngram);
        out.emit(rev, encode_varint(s.count));
    };
    auto job = engine::run_job(spec, std::span<const NGramStat>(prefix_filtered), options);
    return {stats_from_counts(job.flatten()), job.counters};
}

RunResult run_maximal_closed(const Corpus& corpus, const MethodOptions& options, FilterMode mode) {
    SuffixOptions suffix;
    static_cast<MethodOptions&>(suffix) = options;
    suffix.filter = [mode]() -> EmissionFilter {
        auto filter = std::make_shared<PrefixFilter>(mode);
        return [filter](TermView ngram, std::uint64_t count) { return filter->admit(ngram, count); };
    };
    RunResult first = run_suffix_sigma(corpus, suffix);
    auto second = reverse_post_filter(first.stats, mode, options.reducers, options.engine);

    RunResult result;
    result.preprocessing = first.preprocessing;
    result.jobs = first.jobs;
    result.jobs.push_back(second.counters);
    result.stats = std::move(second.stats);
    if (options.keep_intermediate) {
        result.intermediate = std::move(first.intermediate);
    }
    return result;
}

namespace {

// Map values: varint doc id + varint year without a combiner, an encoded
// partial TimeSeries with one.
TimeSeries series_of(std::span<const ByteView> values, bool partial) {
    TimeSeries s;
    for (const auto& v : values) {
        ByteReader in(v);
        if (partial) {
            s += TimeSeries::decode(in);
        } else {
            in.varint();
            std::uint64_t year = in.varint();
            if (year > UINT32_MAX) throw error("corrupt encoding");
            s.add(static_cast<std::uint32_t>(year), 1);
        }
        if (!in.done()) throw error("corrupt encoding");
    }
    return s;
}

class SeriesCombiner : public engine::Reducer {
public:
    void reduce(TermView key, std::span<const ByteView> values, engine::Sink& out) override {
        m_scratch.clear();
        series_of(values, true).encode(m_scratch);
        out.emit(key, m_scratch);
    }

private:
    Bytes m_scratch;
};

class SeriesReducer : public engine::Reducer {
public:
    SeriesReducer(std::uint64_t tau, bool partial) : m_stacks(tau), m_partial(partial) {}

    void reduce(TermView key, std::span<const ByteView> values, engine::Sink& out) override {
        m_stacks.push(key, series_of(values, m_partial), emitter(out));
    }
    void cleanup(engine::Sink& out) override { m_stacks.flush(emitter(out)); }

private:
    SuffixStacks<TimeSeries>::EmitFn emitter(engine::Sink& out) {
        return [this, &out](TermView ngram, const TimeSeries& series) {
            m_scratch.clear();
            series.encode(m_scratch);
            out.emit(ngram, m_scratch);
        };
    }

    SuffixStacks<TimeSeries> m_stacks;
    bool m_partial;
    Bytes m_scratch;
};

}  // namespace

RunResult run_suffix_sigma_timeseries(const Corpus& corpus, const MethodOptions& options) {
    check_method_options(options);
    for (const auto& doc : corpus)
        if (doc.year == 0) throw error("untimed document");

    SplitCorpus split = split_for_tau(corpus, options.tau, options.engine);
    auto records = fragment_records(split.corpus);

    engine::JobSpec<FragmentRecord> spec;
    spec.name = "suffix-sigma-timeseries";
    spec.iteration = 1;
    spec.reducers = options.reducers;
    spec.partition = first_term_partition;
    spec.compare = reverse_lex_compare;
    const bool partial = options.combiner;
    const std::uint64_t tau = options.tau;
    spec.reducer = [tau, partial] { return std::make_unique<SeriesReducer>(tau, partial); };
    if (partial) spec.combiner = [] { return std::make_unique<SeriesCombiner>(); };
    const std::size_t sigma = options.sigma;
    spec.map = [sigma, partial](const FragmentRecord& f, engine::Sink& out) {
        if (f.year == 0) throw error("untimed document");
        Bytes value;
        if (partial) {
            TimeSeries::single(f.year).encode(value);
        } else {
            put_varint(value, f.doc_id);
            put_varint(value, f.year);
        }
        const std::size_t n = f.terms.size();
        for (std::size_t b = 0; b < n; ++b) out.emit(f.terms.subspan(b, std::min(sigma, n - b)), value);
    };
    auto job = engine::run_job(spec, std::span<const FragmentRecord>(records), options.engine);

    RunResult result;
    result.preprocessing = split.counters;
    result.jobs.push_back(job.counters);
    auto flat = job.flatten();
    for (const auto& kv : flat) {
        ByteReader in(kv.value);
        TimeSeries series = TimeSeries::decode(in);
        result.stats.push_back({kv.key, series.total(), std::move(series)});
    }
    if (options.keep_intermediate) result.intermediate.push_back(std::move(flat));
    return result;
}

}  // namespace ngram
