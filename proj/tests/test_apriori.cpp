#include <doctest.h>

#include <set>

#include "ngram/apriori.hpp"
#include "ngram/error.hpp"
#include "ngram/naive.hpp"
#include "ngram/oracle.hpp"
#include "test_support.hpp"

using namespace ngram;

namespace {

FrequentSet set_of(std::initializer_list<TermSequence> grams) {
    FrequentSet s;
    for (const auto& g : grams) s.insert(g);
    return s;
}

std::set<std::string> keys_of(const Dictionary& dict, const std::vector<engine::KeyValue>& records) {
    std::set<std::string> out;
    for (const auto& kv : records) out.insert(dict.render(kv.key));
    return out;
}

PostingList list_of(const Dictionary& dict, const RunResult& r, const TermSequence& gram) {
    for (const auto& it : r.intermediate)
        for (const auto& kv : it)
            if (kv.key == gram) return decode_posting_list(kv.value);
    FAIL("missing n-gram " << dict.render(gram));
    return {};
}

}  // namespace

TEST_CASE("scan map keeps candidates with frequent halves") {
    auto [dict, corpus] = testing::running_example();
    FrequentSet bigrams = set_of({testing::seq(dict, "a x"), testing::seq(dict, "x b")});
    auto records = fragment_records(corpus);
    for (const auto& f : records) {
        testing::CollectSink sink;
        scan_map(3, bigrams, f, ValueCodec::doc_ids, sink);
        REQUIRE(sink.records.size() == 1);
        CHECK(dict.render(sink.records[0].key) == "a x b");
        CHECK(decode_varint(sink.records[0].value) == f.doc_id);
    }
    testing::CollectSink unigrams;
    scan_map(1, FrequentSet{}, records[0], ValueCodec::doc_ids, unigrams);
    CHECK(unigrams.records.size() == 5);
    testing::CollectSink nothing;
    scan_map(2, FrequentSet{}, records[0], ValueCodec::doc_ids, nothing);
    CHECK(nothing.records.empty());
}

TEST_CASE("frequent set size guard") {
    std::vector<engine::KeyValue> records{{{1}, {}}, {{2}, {}}, {{3}, {}}};
    CHECK(FrequentSet::from_records(records, 3).size() == 3);
    CHECK_THROWS_WITH_AS(FrequentSet::from_records(records, 2), doctest::Contains("dictionary too large"), error);
    AprioriScanOptions opts;
    opts.tau = 1;
    opts.sigma = 3;
    opts.dictionary_cap = 2;
    auto [dict, corpus] = testing::running_example();
    CHECK_THROWS_WITH_AS(run_apriori_scan(corpus, opts), doctest::Contains("dictionary too large"), error);
}

TEST_CASE("apriori-scan iterations on the running example") {
    auto [dict, corpus] = testing::running_example();
    AprioriScanOptions opts;
    opts.tau = 3;
    opts.sigma = 3;
    opts.keep_intermediate = true;
    auto r = run_apriori_scan(corpus, opts);
    REQUIRE(r.intermediate.size() == 3);
    CHECK(keys_of(dict, r.intermediate[0]) == std::set<std::string>{"a", "b", "x"});
    CHECK(keys_of(dict, r.intermediate[1]) == std::set<std::string>{"a x", "x b"});
    CHECK(keys_of(dict, r.intermediate[2]) == std::set<std::string>{"a x b"});
    CHECK(testing::rendered(dict, count_map(r.stats)) == testing::running_example_expected());

    // Without a length bound the fourth scan finds nothing and the chain stops.
    opts.sigma = unbounded;
    auto open = run_apriori_scan(corpus, opts);
    REQUIRE(open.intermediate.size() == 4);
    CHECK(open.intermediate[3].empty());
    CHECK(count_map(open.stats) == count_map(r.stats));

    opts.tau = 100;
    auto none = run_apriori_scan(corpus, opts);
    CHECK(none.jobs.size() == 1);
    CHECK(none.stats.empty());
}

TEST_CASE("posting codec") {
    Posting p{12, 3, {0, 5, 6, 300}};
    Bytes b;
    encode_posting(b, p);
    ByteReader in(b);
    CHECK(decode_posting(in) == p);
    CHECK(in.done());
    PostingList list{p, {13, 0, {1}}};
    CHECK(decode_posting_list(encode_posting_list(list)) == list);
    CHECK(collection_frequency(list) == 5);
    Bytes bad = encode_posting_list(list);
    bad.pop_back();
    CHECK_THROWS_WITH_AS(decode_posting_list(bad), "corrupt encoding", error);
}

TEST_CASE("index map emits one posting per distinct gram") {
    auto [dict, corpus] = testing::running_example();
    auto records = fragment_records(corpus);
    testing::CollectSink sink;
    index_map(records[2], 2, sink);
    std::map<std::string, Posting> got;
    for (const auto& kv : sink.records) {
        ByteReader in(kv.value);
        got[dict.render(kv.key)] = decode_posting(in);
    }
    CHECK(got.size() == 3);
    CHECK(got["x b"] == Posting{3, 0, {0, 3}});
    CHECK(got["b a"] == Posting{3, 0, {1}});
    CHECK(got["a x"] == Posting{3, 0, {2}});

    testing::CollectSink single;
    TermSequence a{2};
    index_map(FragmentRecord{8, 0, 0, a}, 1, single);
    REQUIRE(single.records.size() == 1);
    ByteReader in(single.records[0].value);
    CHECK(decode_posting(in) == Posting{8, 0, {0}});

    testing::CollectSink shorter;
    index_map(records[0], 6, shorter);
    CHECK(shorter.records.empty());
}

TEST_CASE("index reduce") {
    std::vector<Posting> ax{{3, 0, {2}}, {1, 0, {0}}, {2, 0, {1}}};
    auto list = index_reduce(ax, 3);
    REQUIRE(list.has_value());
    CHECK(*list == PostingList{{1, 0, {0}}, {2, 0, {1}}, {3, 0, {2}}});
    CHECK(collection_frequency(*list) == 3);
    CHECK_FALSE(index_reduce({{1, 0, {0}}, {2, 0, {1}}}, 3).has_value());
    CHECK(index_reduce({{4, 1, {0, 2}}}, 1) == PostingList{{4, 1, {0, 2}}});
    CHECK_THROWS_WITH_AS(index_reduce({{1, 0, {0}}, {1, 0, {3}}}, 1), "non-unique posting", error);
    CHECK(index_reduce({{1, 0, {0}}, {1, 1, {0}}}, 2).has_value());
}

TEST_CASE("join map emits both halves") {
    auto [dict, corpus] = testing::running_example();
    Bytes postings = encode_posting_list({{1, 0, {0}}});
    testing::CollectSink sink;
    join_map(testing::seq(dict, "a x"), postings, sink);
    REQUIRE(sink.records.size() == 2);
    CHECK(dict.render(sink.records[0].key) == "a");
    CHECK(decode_join_value(sink.records[0].value).tag == JoinTag::r_seq);
    CHECK(dict.render(sink.records[1].key) == "x");
    auto l = decode_join_value(sink.records[1].value);
    CHECK(l.tag == JoinTag::l_seq);
    CHECK(dict.render(l.seq) == "a x");
    CHECK(l.postings == PostingList{{1, 0, {0}}});

    testing::CollectSink xb;
    join_map(testing::seq(dict, "x b"), postings, xb);
    CHECK(dict.render(xb.records[0].key) == "x");
    CHECK(decode_join_value(xb.records[0].value).tag == JoinTag::r_seq);
    CHECK(dict.render(xb.records[1].key) == "b");
    CHECK(decode_join_value(xb.records[1].value).tag == JoinTag::l_seq);

    testing::CollectSink bad;
    CHECK_THROWS_AS(join_map(testing::seq(dict, "a"), postings, bad), error);
}

TEST_CASE("posting joins") {
    PostingList ax{{1, 0, {0}}, {2, 0, {1}}, {3, 0, {2}}};
    PostingList xb{{1, 0, {1}}, {2, 0, {2}}, {3, 0, {0, 3}}};
    CHECK(join_postings(ax, xb) == ax);
    CHECK(join_postings({{1, 0, {0}}}, {{2, 0, {1}}}).empty());
    CHECK(join_postings({{1, 0, {0}}}, {{1, 1, {1}}}).empty());
    PostingList xx{{5, 0, {0, 1, 2}}};
    CHECK(join_postings(xx, xx) == PostingList{{5, 0, {0, 1}}});
}

TEST_CASE("join reduce") {
    auto [dict, corpus] = testing::running_example();
    PostingList ax{{1, 0, {0}}, {2, 0, {1}}, {3, 0, {2}}};
    PostingList xb{{1, 0, {1}}, {2, 0, {2}}, {3, 0, {0, 3}}};
    std::vector<JoinValue> key_x{{JoinTag::l_seq, testing::seq(dict, "a x"), ax},
                                 {JoinTag::r_seq, testing::seq(dict, "x b"), xb}};
    auto out = join_reduce(key_x, 3, 1000);
    REQUIRE(out.size() == 1);
    CHECK(dict.render(out[0].ngram) == "a x b");
    CHECK(out[0].postings == ax);
    CHECK(join_reduce({key_x[0]}, 1, 1000).empty());
    CHECK(join_reduce(key_x, 4, 1000).empty());
    CHECK_THROWS_WITH_AS(join_reduce(key_x, 1, 5), "join buffer overflow", error);
}

TEST_CASE("apriori-index on the running example") {
    auto [dict, corpus] = testing::running_example();
    for (std::size_t K : {2, 3}) {
        AprioriIndexOptions opts;
        opts.tau = 3;
        opts.sigma = 3;
        opts.k = K;
        opts.keep_intermediate = true;
        auto r = run_apriori_index(corpus, opts);
        CHECK(testing::rendered(dict, count_map(r.stats)) == testing::running_example_expected());
        CHECK(r.jobs.size() == 3);
        CHECK(r.jobs.back().job == (K == 2 ? "apriori-index-2" : "apriori-index-1"));
        CHECK(list_of(dict, r, testing::seq(dict, "a x")) == PostingList{{1, 0, {0}}, {2, 0, {1}}, {3, 0, {2}}});
        CHECK(list_of(dict, r, testing::seq(dict, "a x b")) == PostingList{{1, 0, {0}}, {2, 0, {1}}, {3, 0, {2}}});
    }
    AprioriIndexOptions bad;
    bad.k = 1;
    bad.sigma = 3;
    CHECK_THROWS_AS(run_apriori_index(corpus, bad), error);
    bad.sigma = 1;
    CHECK_NOTHROW(run_apriori_index(corpus, bad));
}

TEST_CASE("apriori methods match the oracle") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Corpus corpus = testing::random_corpus(seed + 40, {20, 40, 12});
        for (std::uint64_t tau : {1, 2, 3}) {
            for (std::size_t sigma : {std::size_t{1}, std::size_t{2}, std::size_t{4}, unbounded}) {
                auto expected = oracle::oracle_cf(corpus, tau, sigma);
                AprioriScanOptions scan;
                scan.tau = tau;
                scan.sigma = sigma;
                scan.reducers = 2;
                CHECK(count_map(run_apriori_scan(corpus, scan).stats) == expected);
                for (std::size_t K : {2, 3}) {
                    AprioriIndexOptions index;
                    index.tau = tau;
                    index.sigma = sigma;
                    index.k = K;
                    index.reducers = 2;
                    CHECK(count_map(run_apriori_index(corpus, index).stats) == expected);
                }
            }
        }
    }
}

TEST_CASE("apriori-index with K at sigma equals naive") {
    Corpus corpus = testing::random_corpus(77);
    AprioriIndexOptions index;
    index.tau = 2;
    index.sigma = 4;
    index.k = 4;
    MethodOptions naive;
    naive.tau = 2;
    naive.sigma = 4;
    auto r = run_apriori_index(corpus, index);
    for (const auto& j : r.jobs) CHECK(j.job == "apriori-index-1");
    CHECK(count_map(r.stats) == count_map(run_naive(corpus, naive).stats));
}
