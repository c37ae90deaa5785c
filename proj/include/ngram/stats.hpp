#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "ngram/corpus.hpp"
#include "ngram/engine.hpp"

namespace ngram {

/// Sparse year -> count series; never stores zero counts.
class TimeSeries {
public:
    using Point = std::pair<std::uint32_t, std::uint64_t>;

    TimeSeries() = default;
    static TimeSeries single(std::uint32_t year, std::uint64_t count = 1);

    void add(std::uint32_t year, std::uint64_t count);
    TimeSeries& operator+=(const TimeSeries& other);
    bool operator==(const TimeSeries&) const = default;

    std::uint64_t total() const;
    const std::vector<Point>& points() const { return m_points; }
    bool empty() const { return m_points.empty(); }

    void encode(Bytes& out) const;
    static TimeSeries decode(ByteReader& in);

private:
    std::vector<Point> m_points;  // ascending year
};

inline std::uint64_t total(std::uint64_t count) { return count; }
inline std::uint64_t total(const TimeSeries& s) { return s.total(); }

struct NGramStat {
    TermSequence ngram;
    std::uint64_t count = 0;
    std::optional<TimeSeries> series;
};

using StatSet = std::vector<NGramStat>;

/// n-gram -> count view of a result, for set comparisons.
std::map<TermSequence, std::uint64_t> count_map(const StatSet& stats);

/// Sorts by rendered surface form (byte order), the order used for output files.
void sort_by_surface(StatSet& stats, const Dictionary& dict);

/// One line per n-gram: space-joined surface terms, TAB, count or
/// "year:count" pairs joined by commas.
void write_tsv(std::ostream& out, const StatSet& stats, const Dictionary& dict);

/// Converts reduce output whose values are varint counts.
StatSet stats_from_counts(const std::vector<engine::KeyValue>& records);

}  // namespace ngram
