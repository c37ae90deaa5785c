#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace ngram {

using TermId = std::uint32_t;

/// Owning sequence of term ids: documents, fragments, n-grams and suffixes
/// all share this representation.
using TermSequence = std::vector<TermId>;

/// Non-owning view over a term sequence.
using TermView = std::span<const TermId>;

/// Length of the longest common prefix of two sequences.
inline std::size_t lcp(TermView a, TermView b) {
    std::size_t n = std::min(a.size(), b.size());
    std::size_t i = 0;
    while (i < n && a[i] == b[i]) ++i;
    return i;
}

/// True when `prefix` is a prefix of `seq` (not necessarily proper).
inline bool is_prefix(TermView prefix, TermView seq) {
    return prefix.size() <= seq.size() && lcp(prefix, seq) == prefix.size();
}

inline bool equal(TermView a, TermView b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

/// Plain lexicographic three-way comparison by numeric term id.
inline int lex_compare(TermView a, TermView b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    if (a.size() == b.size()) return 0;
    return a.size() < b.size() ? -1 : 1;
}

/// 64-bit finalizer (splitmix64); fixed so partition assignment never
/// depends on the standard library's std::hash.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_sequence(TermView s) {
    std::uint64_t h = 0x84222325cbf29ce4ULL ^ s.size();
    for (TermId t : s) h = mix64(h ^ t);
    return h;
}

struct SequenceHash {
    std::size_t operator()(const TermSequence& s) const {
        return static_cast<std::size_t>(hash_sequence(s));
    }
};

inline TermSequence to_sequence(TermView v) { return TermSequence(v.begin(), v.end()); }

inline TermSequence reversed(TermView v) { return TermSequence(v.rbegin(), v.rend()); }

}  // namespace ngram
