#include "ngram/stats.hpp"

#include <algorithm>
#include <ostream>

#include "ngram/error.hpp"

namespace ngram {

TimeSeries TimeSeries::single(std::uint32_t year, std::uint64_t count) {
    TimeSeries s;
    s.add(year, count);
    return s;
}

void TimeSeries::add(std::uint32_t year, std::uint64_t count) {
    if (count == 0) return;
    auto it = std::lower_bound(m_points.begin(), m_points.end(), year,
                               [](const Point& p, std::uint32_t y) { return p.first < y; });
    if (it != m_points.end() && it->first == year)
        it->second += count;
    else
        m_points.insert(it, {year, count});
}

TimeSeries& TimeSeries::operator+=(const TimeSeries& other) {
    std::vector<Point> merged;
    merged.reserve(m_points.size() + other.m_points.size());
    auto a = m_points.begin();
    auto b = other.m_points.begin();
    while (a != m_points.end() || b != other.m_points.end()) {
        if (b == other.m_points.end() || (a != m_points.end() && a->first < b->first)) {
            merged.push_back(*a++);
        } else if (a == m_points.end() || b->first < a->first) {
            merged.push_back(*b++);
        } else {
            merged.emplace_back(a->first, a->second + b->second);
            ++a;
            ++b;
        }
    }
    m_points = std::move(merged);
    return *this;
}

std::uint64_t TimeSeries::total() const {
    std::uint64_t n = 0;
    for (const auto& p : m_points) n += p.second;
    return n;
}

void TimeSeries::encode(Bytes& out) const {
    put_varint(out, m_points.size());
    for (const auto& [year, count] : m_points) {
        put_varint(out, year);
        put_varint(out, count);
    }
}

TimeSeries TimeSeries::decode(ByteReader& in) {
    TimeSeries s;
    std::uint64_t n = in.varint();
    if (n > in.remaining()) throw error("corrupt encoding");
    for (std::uint64_t i = 0; i < n; ++i) {
        std::uint64_t year = in.varint();
        std::uint64_t count = in.varint();
        if (year > UINT32_MAX) throw error("corrupt encoding");
        s.add(static_cast<std::uint32_t>(year), count);
    }
    return s;
}

std::map<TermSequence, std::uint64_t> count_map(const StatSet& stats) {
    std::map<TermSequence, std::uint64_t> m;
    for (const auto& s : stats) {
        if (!m.emplace(s.ngram, s.count).second) throw error("duplicate n-gram in result");
    }
    return m;
}

void sort_by_surface(StatSet& stats, const Dictionary& dict) {
    std::vector<std::pair<std::string, NGramStat>> keyed;
    keyed.reserve(stats.size());
    for (auto& s : stats) keyed.emplace_back(dict.render(s.ngram), std::move(s));
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    stats.clear();
    for (auto& [_, s] : keyed) stats.push_back(std::move(s));
}

void write_tsv(std::ostream& out, const StatSet& stats, const Dictionary& dict) {
    for (const auto& s : stats) {
        out << dict.render(s.ngram) << '\t';
        if (s.series) {
            bool first = true;
            for (const auto& [year, count] : s.series->points()) {
                if (!first) out << ',';
                out << year << ':' << count;
                first = false;
            }
        } else {
            out << s.count;
        }
        out << '\n';
    }
}

StatSet stats_from_counts(const std::vector<engine::KeyValue>& records) {
    StatSet out;
    out.reserve(records.size());
    for (const auto& kv : records) out.push_back({kv.key, decode_varint(kv.value), std::nullopt});
    return out;
}

}  // namespace ngram
