#include "ngram/apriori.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "ngram/error.hpp"

namespace ngram {

// Apriori-Scan

FrequentSet FrequentSet::from_records(const std::vector<engine::KeyValue>& records, std::size_t cap) {
    if (records.size() > cap)
        throw error("dictionary too large: " + std::to_string(records.size()) + " > " + std::to_string(cap));
    FrequentSet set;
    set.m_set.reserve(records.size());
    for (const auto& kv : records) set.m_set.insert(kv.key);
    return set;
}

bool FrequentSet::contains(TermView s) const {
    thread_local TermSequence probe;
    probe.assign(s.begin(), s.end());
    return m_set.find(probe) != m_set.end();
}

void scan_map(std::size_t k, const FrequentSet& dict, const FragmentRecord& fragment, ValueCodec codec,
              engine::Sink& out) {
    const std::size_t n = fragment.terms.size();
    if (k == 0 || n < k) return;
    const Bytes value = occurrence_value(fragment.doc_id, codec);
    for (std::size_t b = 0; b + k <= n; ++b) {
        if (k == 1 || (dict.contains(fragment.terms.subspan(b, k - 1)) &&
                       dict.contains(fragment.terms.subspan(b + 1, k - 1))))
            out.emit(fragment.terms.subspan(b, k), value);
    }
}

RunResult run_apriori_scan(const Corpus& corpus, const AprioriScanOptions& options) {
    check_method_options(options);
    SplitCorpus split = split_for_tau(corpus, options.tau, options.engine);
    auto records = fragment_records(split.corpus);
    const ValueCodec codec = codec_for(options.combiner);
    const std::uint64_t tau = options.tau;

    auto factory = [&](std::size_t k, const std::vector<engine::JobResult>& done) -> std::optional<engine::ChainStep> {
        auto dict = std::make_shared<FrequentSet>();
        if (k > 1) *dict = FrequentSet::from_records(done.back().flatten(), options.dictionary_cap);
        return [&, k, dict] {
            engine::JobSpec<FragmentRecord> spec;
            spec.name = "apriori-scan";
            spec.iteration = k;
            spec.reducers = options.reducers;
            spec.partition = hash_partition;
            spec.compare = lex_compare;
            spec.reducer = [tau, codec] { return std::make_unique<CountingReducer>(tau, codec); };
            if (options.combiner) spec.combiner = [] { return std::make_unique<SumCombiner>(); };
            spec.map = [k, dict, codec](const FragmentRecord& f, engine::Sink& out) {
                scan_map(k, *dict, f, codec, out);
            };
            return engine::run_job(spec, std::span<const FragmentRecord>(records), options.engine);
        };
    };
    auto stop = [&](std::size_t k, const engine::JobResult& last) { return last.empty() || k >= options.sigma; };
    auto chain = engine::run_chain(factory, stop);

    RunResult result;
    result.preprocessing = split.counters;
    for (auto& it : chain.iterations) {
        result.jobs.push_back(it.counters);
        auto flat = it.flatten();
        auto stats = stats_from_counts(flat);
        result.stats.insert(result.stats.end(), stats.begin(), stats.end());
        if (options.keep_intermediate) result.intermediate.push_back(std::move(flat));
    }
    return result;
}

// Apriori-Index

std::uint64_t collection_frequency(const PostingList& list) {
    std::uint64_t n = 0;
    for (const auto& p : list) n += p.positions.size();
    return n;
}

void encode_posting(Bytes& out, const Posting& p) {
    put_varint(out, p.doc);
    put_varint(out, p.fragment);
    put_varint(out, p.positions.size());
    std::uint32_t prev = 0;
    for (std::uint32_t pos : p.positions) {
        put_varint(out, pos - prev);
        prev = pos;
    }
}

Posting decode_posting(ByteReader& in) {
    Posting p;
    p.doc = in.varint();
    std::uint64_t frag = in.varint();
    std::uint64_t n = in.varint();
    if (frag > UINT32_MAX || n > in.remaining()) throw error("corrupt encoding");
    p.fragment = static_cast<std::uint32_t>(frag);
    p.positions.reserve(n);
    std::uint64_t pos = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        pos += in.varint();
        if (pos > UINT32_MAX) throw error("corrupt encoding");
        p.positions.push_back(static_cast<std::uint32_t>(pos));
    }
    return p;
}

Bytes encode_posting_list(const PostingList& list) {
    Bytes out;
    put_varint(out, list.size());
    for (const auto& p : list) encode_posting(out, p);
    return out;
}

PostingList decode_posting_list(ByteView bytes) {
    ByteReader in(bytes);
    std::uint64_t n = in.varint();
    if (n > in.remaining()) throw error("corrupt encoding");
    PostingList list;
    list.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) list.push_back(decode_posting(in));
    if (!in.done()) throw error("corrupt encoding");
    return list;
}

void index_map(const FragmentRecord& fragment, std::size_t k, engine::Sink& out) {
    const std::size_t n = fragment.terms.size();
    if (k == 0 || n < k) return;
    std::map<TermSequence, std::vector<std::uint32_t>> positions;
    for (std::size_t b = 0; b + k <= n; ++b)
        positions[to_sequence(fragment.terms.subspan(b, k))].push_back(static_cast<std::uint32_t>(b));
    Bytes value;
    for (auto& [gram, pos] : positions) {
        value.clear();
        encode_posting(value, Posting{fragment.doc_id, fragment.fragment, std::move(pos)});
        out.emit(gram, value);
    }
}

std::optional<PostingList> index_reduce(std::vector<Posting> postings, std::uint64_t tau) {
    std::sort(postings.begin(), postings.end(), [](const Posting& a, const Posting& b) {
        return a.doc != b.doc ? a.doc < b.doc : a.fragment < b.fragment;
    });
    for (std::size_t i = 1; i < postings.size(); ++i) {
        if (postings[i].doc == postings[i - 1].doc && postings[i].fragment == postings[i - 1].fragment)
            throw error("non-unique posting");
    }
    if (collection_frequency(postings) < tau) return std::nullopt;
    return postings;
}

Bytes encode_join_value(JoinTag tag, TermView seq, ByteView encoded_postings) {
    Bytes out;
    out.push_back(static_cast<std::uint8_t>(tag));
    append_sequence(out, seq);
    out.insert(out.end(), encoded_postings.begin(), encoded_postings.end());
    return out;
}

JoinValue decode_join_value(ByteView bytes) {
    if (bytes.empty() || bytes[0] > 1) throw error("corrupt encoding");
    ByteReader in(bytes.subspan(1));
    JoinValue v;
    v.tag = static_cast<JoinTag>(bytes[0]);
    v.seq = in.sequence();
    v.postings = decode_posting_list(bytes.subspan(1 + in.position()));
    return v;
}

void join_map(TermView seq, ByteView encoded_postings, engine::Sink& out) {
    if (seq.size() < 2) throw error("join_map needs an n-gram of length >= 2");
    out.emit(seq.first(seq.size() - 1), encode_join_value(JoinTag::r_seq, seq, encoded_postings));
    out.emit(seq.subspan(1), encode_join_value(JoinTag::l_seq, seq, encoded_postings));
}

PostingList join_postings(const PostingList& m, const PostingList& n) {
    PostingList out;
    auto a = m.begin();
    auto b = n.begin();
    auto before = [](const Posting& x, const Posting& y) {
        return x.doc != y.doc ? x.doc < y.doc : x.fragment < y.fragment;
    };
    while (a != m.end() && b != n.end()) {
        if (before(*a, *b)) {
            ++a;
        } else if (before(*b, *a)) {
            ++b;
        } else {
            Posting joined{a->doc, a->fragment, {}};
            auto q = b->positions.begin();
            for (std::uint32_t p : a->positions) {
                while (q != b->positions.end() && *q < p + 1) ++q;
                if (q == b->positions.end()) break;
                if (*q == p + 1) joined.positions.push_back(p);
            }
            if (!joined.positions.empty()) out.push_back(std::move(joined));
            ++a;
            ++b;
        }
    }
    return out;
}

std::vector<JoinedGram> join_reduce(const std::vector<JoinValue>& values, std::uint64_t tau,
                                    std::size_t posting_cap) {
    std::size_t buffered = 0;
    for (const auto& v : values) buffered += v.postings.size();
    if (buffered > posting_cap) throw error("join buffer overflow");
    std::vector<JoinedGram> out;
    for (const auto& m : values) {
        if (m.tag != JoinTag::l_seq) continue;
        for (const auto& n : values) {
            if (n.tag != JoinTag::r_seq) continue;
            PostingList joined = join_postings(m.postings, n.postings);
            if (collection_frequency(joined) < tau) continue;
            TermSequence gram = m.seq;
            gram.push_back(n.seq.back());
            out.push_back({std::move(gram), std::move(joined)});
        }
    }
    return out;
}

namespace {

class IndexReducer : public engine::Reducer {
public:
    explicit IndexReducer(std::uint64_t tau) : m_tau(tau) {}
    void reduce(TermView key, std::span<const ByteView> values, engine::Sink& out) override {
        std::vector<Posting> postings;
        postings.reserve(values.size());
        for (const auto& v : values) {
            ByteReader in(v);
            postings.push_back(decode_posting(in));
            if (!in.done()) throw error("corrupt encoding");
        }
        if (auto list = index_reduce(std::move(postings), m_tau)) out.emit(key, encode_posting_list(*list));
    }

private:
    std::uint64_t m_tau;
};

class JoinReducer : public engine::Reducer {
public:
    JoinReducer(std::uint64_t tau, std::size_t cap) : m_tau(tau), m_cap(cap) {}
    void reduce(TermView, std::span<const ByteView> values, engine::Sink& out) override {
        std::vector<JoinValue> decoded;
        decoded.reserve(values.size());
        std::size_t buffered = 0;
        for (const auto& v : values) {
            decoded.push_back(decode_join_value(v));
            buffered += decoded.back().postings.size();
            if (buffered > m_cap) throw error("join buffer overflow");
        }
        for (auto& j : join_reduce(decoded, m_tau, m_cap)) out.emit(j.ngram, encode_posting_list(j.postings));
    }

private:
    std::uint64_t m_tau;
    std::size_t m_cap;
};

}  // namespace

RunResult run_apriori_index(const Corpus& corpus, const AprioriIndexOptions& options) {
    check_method_options(options);
    const std::size_t K = std::min(options.k, options.sigma);
    if (K < 1) throw error("K must be at least 1");
    if (K < options.sigma && K < 2) throw error("K must be at least 2 when joins are needed (K < sigma)");

    SplitCorpus split = split_for_tau(corpus, options.tau, options.engine);
    auto records = fragment_records(split.corpus);
    const std::uint64_t tau = options.tau;

    auto factory = [&](std::size_t k, const std::vector<engine::JobResult>& done) -> std::optional<engine::ChainStep> {
        if (k <= K) {
            return [&, k] {
                engine::JobSpec<FragmentRecord> spec;
                spec.name = "apriori-index-1";
                spec.iteration = k;
                spec.reducers = options.reducers;
                spec.partition = hash_partition;
                spec.compare = lex_compare;
                spec.reducer = [tau] { return std::make_unique<IndexReducer>(tau); };
                spec.map = [k](const FragmentRecord& f, engine::Sink& out) { index_map(f, k, out); };
                return engine::run_job(spec, std::span<const FragmentRecord>(records), options.engine);
            };
        }
        auto previous = std::make_shared<std::vector<engine::KeyValue>>(done.back().flatten());
        return [&, k, previous] {
            engine::JobSpec<engine::KeyValue> spec;
            spec.name = "apriori-index-2";
            spec.iteration = k;
            spec.reducers = options.reducers;
            spec.partition = hash_partition;
            spec.compare = lex_compare;
            const std::size_t cap = options.join_posting_cap;
            spec.reducer = [tau, cap] { return std::make_unique<JoinReducer>(tau, cap); };
            spec.map = [](const engine::KeyValue& kv, engine::Sink& out) { join_map(kv.key, kv.value, out); };
            return engine::run_job(spec, std::span<const engine::KeyValue>(*previous), options.engine);
        };
    };
    auto stop = [&](std::size_t k, const engine::JobResult& last) { return last.empty() || k >= options.sigma; };
    auto chain = engine::run_chain(factory, stop);

    RunResult result;
    result.preprocessing = split.counters;
    for (auto& it : chain.iterations) {
        result.jobs.push_back(it.counters);
        auto flat = it.flatten();
        for (const auto& kv : flat)
            result.stats.push_back({kv.key, collection_frequency(decode_posting_list(kv.value)), std::nullopt});
        if (options.keep_intermediate) result.intermediate.push_back(std::move(flat));
    }
    return result;
}

}  // namespace ngram
