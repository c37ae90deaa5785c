#include <doctest.h>

#include "ngram/naive.hpp"
#include "ngram/oracle.hpp"
#include "test_support.hpp"

using namespace ngram;

TEST_CASE("naive map enumerates bounded sub-sequences") {
    auto [dict, corpus] = testing::running_example();
    auto records = fragment_records(corpus);
    testing::CollectSink sink;
    naive_map(records[2], 3, ValueCodec::doc_ids, sink);
    REQUIRE(sink.records.size() == 12);
    std::map<std::size_t, std::size_t> by_length;
    for (const auto& kv : sink.records) {
        by_length[kv.key.size()]++;
        CHECK(decode_varint(kv.value) == 3);
    }
    CHECK(by_length == std::map<std::size_t, std::size_t>{{1, 5}, {2, 4}, {3, 3}});

    testing::CollectSink single;
    TermSequence a{2};
    naive_map(FragmentRecord{9, 0, 0, a}, 5, ValueCodec::doc_ids, single);
    REQUIRE(single.records.size() == 1);
    CHECK(single.records[0].key == a);
    CHECK(decode_varint(single.records[0].value) == 9);

    testing::CollectSink none;
    naive_map(FragmentRecord{1, 0, 0, {}}, 5, ValueCodec::doc_ids, none);
    CHECK(none.records.empty());

    testing::CollectSink counts;
    naive_map(records[0], 2, ValueCodec::partial_counts, counts);
    CHECK(counts.records.size() == 9);
    for (const auto& kv : counts.records) CHECK(decode_varint(kv.value) == 1);
}

TEST_CASE("naive reduce threshold") {
    CHECK(naive_reduce(3, 3) == 3u);
    CHECK_FALSE(naive_reduce(2, 3).has_value());
    for (std::uint64_t n = 1; n < 10; ++n) CHECK(naive_reduce(n, 1) == n);
}

TEST_CASE("naive on the running example") {
    auto [dict, corpus] = testing::running_example();
    for (bool combiner : {true, false}) {
        MethodOptions opts;
        opts.tau = 3;
        opts.sigma = 3;
        opts.combiner = combiner;
        auto result = run_naive(corpus, opts);
        CHECK(testing::rendered(dict, count_map(result.stats)) == testing::running_example_expected());
        REQUIRE(result.jobs.size() == 1);
        // 3 fragments of length 5 at sigma 3: 5 + 4 + 3 per fragment
        CHECK(result.jobs[0].map_output_records_pre_combiner == 36);
    }
    MethodOptions unigrams;
    unigrams.tau = 1;
    unigrams.sigma = 1;
    auto result = run_naive(corpus, unigrams);
    CHECK(testing::rendered(dict, count_map(result.stats)) ==
          std::map<std::string, std::uint64_t>{{"a", 3}, {"b", 5}, {"x", 7}});
}

TEST_CASE("naive matches the oracle on random corpora") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Corpus corpus = testing::random_corpus(seed, {20, 40, 12});
        for (std::uint64_t tau : {1, 2, 4}) {
            for (std::size_t sigma : {std::size_t{1}, std::size_t{3}, unbounded}) {
                MethodOptions opts;
                opts.tau = tau;
                opts.sigma = sigma;
                opts.reducers = 3;
                CHECK(count_map(run_naive(corpus, opts).stats) == oracle::oracle_cf(corpus, tau, sigma));
            }
        }
    }
}

TEST_CASE("invalid options") {
    auto [dict, corpus] = testing::running_example();
    MethodOptions opts;
    opts.tau = 0;
    CHECK_THROWS(run_naive(corpus, opts));
    opts.tau = 1;
    opts.sigma = 0;
    CHECK_THROWS(run_naive(corpus, opts));
}
