#pragma once

#include <cstdint>
#include <map>

#include "ngram/corpus.hpp"

namespace ngram::oracle {

// Exhaustive reference computations for small corpora. Nothing here is
// shared with the MapReduce methods: plain nested loops over every
// occurrence and ordered maps.

using CountMap = std::map<TermSequence, std::uint64_t>;
using SeriesMap = std::map<TermSequence, std::map<std::uint32_t, std::uint64_t>>;

inline constexpr std::uint64_t max_occurrences = 1'000'000;
inline constexpr std::size_t no_limit = static_cast<std::size_t>(-1);

/// cf of every n-gram with length <= sigma that occurs at all.
CountMap all_counts(const Corpus& corpus, std::size_t sigma);

/// {(s, cf(s)) : cf(s) >= tau, |s| <= sigma}.
CountMap oracle_cf(const Corpus& corpus, std::uint64_t tau, std::size_t sigma);

/// Cuts fragments at terms with cf < tau (own implementation).
Corpus oracle_split(const Corpus& corpus, std::uint64_t tau);

struct Sets {
    CountMap frequent;       // S_F
    CountMap not_prunable;   // S_NP: every proper sub-n-gram is frequent
    CountMap maximal;
    CountMap closed;
};

/// Frequent, not-prunable, maximal and closed sets over all_counts, all
/// bounded by sigma.
Sets oracle_sets(const Corpus& corpus, std::uint64_t tau, std::size_t sigma);

/// True when `inner` occurs contiguously inside `outer`.
bool is_subsequence(const TermSequence& inner, const TermSequence& outer);

SeriesMap oracle_timeseries(const Corpus& corpus, std::uint64_t tau, std::size_t sigma);

}  // namespace ngram::oracle
