#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "ngram/error.hpp"
#include "ngram/method.hpp"

namespace ngram {

/// Emits, for every position b, the suffix starting at b truncated to sigma
/// terms.
void suffix_map(const FragmentRecord& fragment, std::size_t sigma, ValueCodec codec, engine::Sink& out);

/// Reverse lexicographic order: at the first differing position the greater
/// term sorts first; a sequence sorts before its own proper prefixes.
/// Negative when r sorts before s.
inline int reverse_lex_compare(TermView r, TermView s) {
    std::size_t n = std::min(r.size(), s.size());
    for (std::size_t b = 0; b < n; ++b) {
        if (r[b] < s[b]) return 1;
        if (r[b] > s[b]) return -1;
    }
    if (r.size() == s.size()) return 0;
    return r.size() > s.size() ? -1 : 1;
}

/// Partition by the first term only. Throws on an empty key.
std::size_t first_term_partition(TermView key, std::size_t partitions);

/// Lazy prefix aggregation over suffixes arriving in reverse lexicographic
/// order. `terms` holds the current suffix; `aggregates[i]` holds the part
/// of the count of <terms[0..i]> not already folded into a deeper level, so
/// the count of <terms[0..i]> is the sum of aggregates[i..].
///
/// Agg is std::uint64_t for counting or TimeSeries for per-year counts.
template <typename Agg>
class SuffixStacks {
public:
    using Level = std::pair<TermId, Agg>;
    using EmitFn = std::function<void(TermView ngram, const Agg& aggregate)>;
    enum class Phase { after_pop, after_push, after_cleanup };
    using Observer = std::function<void(Phase, const std::vector<Level>& levels)>;

    explicit SuffixStacks(std::uint64_t tau) : m_tau(tau) {}

    void set_observer(Observer obs) { m_observer = std::move(obs); }

    /// Adds `occurrences` of suffix `s`; finalizes every level that is not a
    /// prefix of s and passes those reaching tau to `emit`.
    void push(TermView s, const Agg& occurrences, const EmitFn& emit) {
        if (m_have_previous && reverse_lex_compare(m_previous, s) > 0) throw error("unsorted reduce input");
        m_previous.assign(s.begin(), s.end());
        m_have_previous = true;

        std::size_t shared = pop_to_prefix_of(s, emit);
        if (m_observer) m_observer(Phase::after_pop, levels());
        if (s.empty()) return;
        if (m_terms.size() == s.size()) {
            m_aggs.back() += occurrences;
        } else {
            for (std::size_t i = shared; i < s.size(); ++i) {
                m_terms.push_back(s[i]);
                m_aggs.push_back(i + 1 == s.size() ? occurrences : Agg{});
            }
        }
        if (m_observer) m_observer(Phase::after_push, levels());
    }

    /// Finalizes everything left, as if an empty suffix arrived.
    void flush(const EmitFn& emit) {
        pop_to_prefix_of(TermView{}, emit);
        if (m_observer) m_observer(Phase::after_cleanup, levels());
    }

    std::size_t depth() const { return m_terms.size(); }

    std::vector<Level> levels() const {
        std::vector<Level> out;
        out.reserve(m_terms.size());
        for (std::size_t i = 0; i < m_terms.size(); ++i) out.emplace_back(m_terms[i], m_aggs[i]);
        return out;
    }

private:
    std::size_t pop_to_prefix_of(TermView s, const EmitFn& emit) {
        std::size_t shared = lcp(s, m_terms);
        while (shared < m_terms.size()) {
            const Agg& top = m_aggs.back();
            if (total(top) >= m_tau) emit(m_terms, top);
            Agg popped = std::move(m_aggs.back());
            m_aggs.pop_back();
            m_terms.pop_back();
            if (!m_aggs.empty()) m_aggs.back() += popped;
        }
        return shared;
    }

    std::uint64_t m_tau;
    TermSequence m_terms;
    std::vector<Agg> m_aggs;
    TermSequence m_previous;
    bool m_have_previous = false;
    Observer m_observer;
};

/// Optional filter on the emission stream of one reduce partition.
using EmissionFilter = std::function<bool(TermView ngram, std::uint64_t count)>;
using EmissionFilterFactory = std::function<EmissionFilter()>;

/// Engine reducer wrapping SuffixStacks<std::uint64_t>.
class SuffixReducer : public engine::Reducer {
public:
    SuffixReducer(std::uint64_t tau, ValueCodec codec, EmissionFilter filter = {});
    void reduce(TermView key, std::span<const ByteView> values, engine::Sink& out) override;
    void cleanup(engine::Sink& out) override;

private:
    void emit(engine::Sink& out, TermView ngram, std::uint64_t count);

    SuffixStacks<std::uint64_t> m_stacks;
    ValueCodec m_codec;
    EmissionFilter m_filter;
    Bytes m_scratch;
};

struct SuffixOptions : MethodOptions {
    /// Applied to each partition's emission stream (maximal/closed variants).
    EmissionFilterFactory filter;
};

engine::JobSpec<FragmentRecord> suffix_job(const SuffixOptions& options);

RunResult run_suffix_sigma(const Corpus& corpus, const SuffixOptions& options);

}  // namespace ngram
