#pragma once

#include <cstdint>

#include "ngram/suffix.hpp"

namespace ngram {

enum class FilterMode { maximal, closed };

/// Drops an n-gram that is a prefix of the last n-gram let through
/// (maximal), or such a prefix with an equal count (closed). Fed with a
/// stream in reverse lexicographic finalization order it keeps exactly the
/// prefix-maximal / prefix-closed n-grams.
class PrefixFilter {
public:
    explicit PrefixFilter(FilterMode mode) : m_mode(mode) {}

    bool admit(TermView ngram, std::uint64_t count);

private:
    FilterMode m_mode;
    TermSequence m_last;
    std::uint64_t m_last_count = 0;
    bool m_have_last = false;
};

/// Second pass: reverses every n-gram, re-sorts the reversed forms in
/// reverse lexicographic order per first term, and applies the prefix
/// filter again. Input must be prefix-maximal/closed with exact counts.
struct PostFilterResult {
    StatSet stats;
    engine::CounterSet counters;
};

PostFilterResult reverse_post_filter(const StatSet& prefix_filtered, FilterMode mode, std::size_t reducers,
                                     const engine::EngineOptions& options);

/// Suffix-σ with the in-reducer prefix filter followed by the reversal
/// post-filter job. Length-σ n-grams count as maximal candidates even if
/// longer frequent supersequences exist.
RunResult run_maximal_closed(const Corpus& corpus, const MethodOptions& options, FilterMode mode);

/// Suffix-σ aggregating per-year counts. Every document needs a year;
/// throws "untimed document" otherwise.
RunResult run_suffix_sigma_timeseries(const Corpus& corpus, const MethodOptions& options);

}  // namespace ngram
