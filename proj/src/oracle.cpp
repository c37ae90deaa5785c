#include "ngram/oracle.hpp"

#include <set>

#include "ngram/error.hpp"

namespace ngram::oracle {

namespace {

void guard(const Corpus& corpus) {
    std::uint64_t n = 0;
    for (const auto& d : corpus)
        for (const auto& f : d.fragments) n += f.size();
    if (n > max_occurrences) throw error("corpus too large for the oracle");
}

}  // namespace

CountMap all_counts(const Corpus& corpus, std::size_t sigma) {
    guard(corpus);
    CountMap counts;
    for (const auto& doc : corpus) {
        for (const auto& f : doc.fragments) {
            for (std::size_t b = 0; b < f.size(); ++b) {
                for (std::size_t e = b; e < f.size() && e - b + 1 <= sigma; ++e) {
                    TermSequence gram(f.begin() + b, f.begin() + e + 1);
                    counts[gram] += 1;
                }
            }
        }
    }
    return counts;
}

CountMap oracle_cf(const Corpus& corpus, std::uint64_t tau, std::size_t sigma) {
    CountMap out;
    for (const auto& [gram, cf] : all_counts(corpus, sigma))
        if (cf >= tau) out.emplace(gram, cf);
    return out;
}

Corpus oracle_split(const Corpus& corpus, std::uint64_t tau) {
    guard(corpus);
    std::map<TermId, std::uint64_t> unigram;
    for (const auto& doc : corpus)
        for (const auto& f : doc.fragments)
            for (TermId t : f) unigram[t] += 1;
    Corpus out;
    for (const auto& doc : corpus) {
        Document d{doc.id, doc.year, {}};
        for (const auto& f : doc.fragments) {
            TermSequence run;
            for (TermId t : f) {
                if (unigram[t] >= tau) {
                    run.push_back(t);
                } else {
                    if (!run.empty()) d.fragments.push_back(run);
                    run.clear();
                }
            }
            if (!run.empty()) d.fragments.push_back(run);
        }
        out.push_back(d);
    }
    return out;
}

bool is_subsequence(const TermSequence& inner, const TermSequence& outer) {
    if (inner.size() > outer.size()) return false;
    for (std::size_t b = 0; b + inner.size() <= outer.size(); ++b) {
        bool match = true;
        for (std::size_t i = 0; i < inner.size(); ++i) {
            if (outer[b + i] != inner[i]) {
                match = false;
                break;
            }
        }
        if (match) return true;
    }
    return false;
}

Sets oracle_sets(const Corpus& corpus, std::uint64_t tau, std::size_t sigma) {
    CountMap all = all_counts(corpus, sigma);
    Sets sets;
    for (const auto& [gram, cf] : all)
        if (cf >= tau) sets.frequent.emplace(gram, cf);

    for (const auto& [gram, cf] : all) {
        bool all_frequent = true;
        for (std::size_t len = 1; len < gram.size() && all_frequent; ++len) {
            for (std::size_t b = 0; b + len <= gram.size(); ++b) {
                TermSequence sub(gram.begin() + b, gram.begin() + b + len);
                if (all.at(sub) < tau) {
                    all_frequent = false;
                    break;
                }
            }
        }
        if (all_frequent) sets.not_prunable.emplace(gram, cf);
    }

    // Any frequent proper supersequence of s contains a one-term extension
    // of s whose cf lies between the two, so one-term extensions decide
    // both properties.
    std::set<TermId> vocabulary;
    for (const auto& [gram, cf] : all)
        if (gram.size() == 1) vocabulary.insert(gram[0]);
    for (const auto& [s, cf_s] : sets.frequent) {
        bool maximal = true;
        bool closed = true;
        for (TermId y : vocabulary) {
            TermSequence right = s;
            right.push_back(y);
            TermSequence left{y};
            left.insert(left.end(), s.begin(), s.end());
            for (const auto& t : {left, right}) {
                auto it = sets.frequent.find(t);
                if (it == sets.frequent.end()) continue;
                maximal = false;
                if (it->second == cf_s) closed = false;
            }
        }
        if (maximal) sets.maximal.emplace(s, cf_s);
        if (closed) sets.closed.emplace(s, cf_s);
    }
    return sets;
}

SeriesMap oracle_timeseries(const Corpus& corpus, std::uint64_t tau, std::size_t sigma) {
    CountMap frequent = oracle_cf(corpus, tau, sigma);
    SeriesMap out;
    for (const auto& doc : corpus) {
        for (const auto& f : doc.fragments) {
            for (std::size_t b = 0; b < f.size(); ++b) {
                for (std::size_t e = b; e < f.size() && e - b + 1 <= sigma; ++e) {
                    TermSequence gram(f.begin() + b, f.begin() + e + 1);
                    if (frequent.count(gram)) out[gram][doc.year] += 1;
                }
            }
        }
    }
    return out;
}

}  // namespace ngram::oracle
