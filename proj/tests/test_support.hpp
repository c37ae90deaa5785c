#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ngram/corpus.hpp"
#include "ngram/engine.hpp"
#include "ngram/runner.hpp"

namespace ngram::testing {

/// d1 = <a x b x x>, d2 = <b a x b x>, d3 = <x b a x b> with doc ids 1..3.
/// Ranked ids: x = 0, b = 1, a = 2.
inline std::pair<Dictionary, Corpus> running_example() {
    auto [dict, corpus] = ingest_texts({"a x b x x", "b a x b x", "x b a x b"});
    for (std::size_t i = 0; i < corpus.size(); ++i) corpus[i].id = i + 1;
    return {std::move(dict), std::move(corpus)};
}

inline TermSequence seq(const Dictionary& dict, const std::string& text) {
    TermSequence out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find(' ', pos);
        if (end == std::string::npos) end = text.size();
        if (end > pos) out.push_back(*dict.lookup(text.substr(pos, end - pos)));
        pos = end + 1;
    }
    return out;
}

inline std::map<std::string, std::uint64_t> rendered(const Dictionary& dict,
                                                     const std::map<TermSequence, std::uint64_t>& m) {
    std::map<std::string, std::uint64_t> out;
    for (const auto& [k, v] : m) out[dict.render(k)] = v;
    return out;
}

/// The frequent set of the running example at tau = 3, sigma = 3.
inline std::map<std::string, std::uint64_t> running_example_expected() {
    return {{"a", 3}, {"b", 5}, {"x", 7}, {"a x", 3}, {"x b", 4}, {"a x b", 3}};
}

struct RandomCorpusShape {
    std::size_t max_docs = 30;
    std::size_t max_terms = 40;
    std::size_t max_vocab = 12;
};

/// Small skewed random corpora with 1-3 fragments per document and years in
/// 1987..2007.
inline Corpus random_corpus(std::uint64_t seed, RandomCorpusShape shape = {}) {
    std::mt19937_64 rng(seed);
    auto uniform = [&](std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    };
    std::size_t vocab = uniform(1, shape.max_vocab);
    std::size_t docs = uniform(1, shape.max_docs);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Corpus corpus;
    for (std::size_t d = 0; d < docs; ++d) {
        Document doc;
        doc.id = d * 7 + 3;
        doc.year = static_cast<std::uint32_t>(uniform(1987, 2007));
        std::size_t terms = uniform(0, shape.max_terms);
        std::size_t fragments = uniform(1, 3);
        TermSequence all;
        for (std::size_t i = 0; i < terms; ++i) {
            double x = u(rng);
            all.push_back(static_cast<TermId>(std::min<std::size_t>(vocab - 1, static_cast<std::size_t>(vocab * x * x))));
        }
        std::size_t per = (all.size() + fragments - 1) / std::max<std::size_t>(1, fragments);
        for (std::size_t b = 0; b < all.size(); b += std::max<std::size_t>(1, per))
            doc.fragments.emplace_back(all.begin() + b, all.begin() + std::min(all.size(), b + per));
        corpus.push_back(std::move(doc));
    }
    return corpus;
}

/// Collects map output for direct inspection.
class CollectSink : public engine::Sink {
public:
    void emit(TermView key, ByteView value) override {
        records.push_back({to_sequence(key), Bytes(value.begin(), value.end())});
    }
    std::vector<engine::KeyValue> records;
};

}  // namespace ngram::testing
