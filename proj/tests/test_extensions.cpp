#include <doctest.h>

#include "ngram/error.hpp"
#include "ngram/extensions.hpp"
#include "ngram/oracle.hpp"
#include "test_support.hpp"

using namespace ngram;

namespace {

std::map<TermSequence, std::uint64_t> run_mode(const Corpus& corpus, std::uint64_t tau, std::size_t sigma,
                                               std::size_t R, FilterMode mode) {
    MethodOptions opts;
    opts.tau = tau;
    opts.sigma = sigma;
    opts.reducers = R;
    return count_map(run_maximal_closed(corpus, opts, mode).stats);
}

}  // namespace

TEST_CASE("prefix filter") {
    auto [dict, corpus] = testing::running_example();
    auto g = [&](const char* s) { return testing::seq(dict, s); };
    for (FilterMode mode : {FilterMode::maximal, FilterMode::closed}) {
        // finalization order of partition a
        PrefixFilter f(mode);
        CHECK(f.admit(g("a x b"), 3));
        CHECK_FALSE(f.admit(g("a x"), 3));
        CHECK_FALSE(f.admit(g("a"), 3));
    }
    PrefixFilter closed(FilterMode::closed);
    CHECK(closed.admit(g("b x a"), 3));
    CHECK(closed.admit(g("b x"), 4));
    PrefixFilter maximal(FilterMode::maximal);
    CHECK(maximal.admit(g("b x a"), 3));
    CHECK_FALSE(maximal.admit(g("b x"), 4));
    PrefixFilter first(FilterMode::maximal);
    CHECK(first.admit(g("x"), 1));
    CHECK(first.admit(g("b"), 1));
}

TEST_CASE("post filter on reversed n-grams") {
    auto [dict, corpus] = testing::running_example();
    auto g = [&](const char* s) { return testing::seq(dict, s); };
    StatSet prefix_maximal{{g("a x b"), 3, {}}, {g("x b"), 4, {}}, {g("b"), 5, {}}};
    auto maximal = reverse_post_filter(prefix_maximal, FilterMode::maximal, 2, {});
    CHECK(testing::rendered(dict, count_map(maximal.stats)) == std::map<std::string, std::uint64_t>{{"a x b", 3}});
    CHECK(maximal.counters.map_output_records == 3);
    auto closed = reverse_post_filter(prefix_maximal, FilterMode::closed, 2, {});
    CHECK(testing::rendered(dict, count_map(closed.stats)) ==
          std::map<std::string, std::uint64_t>{{"a x b", 3}, {"x b", 4}, {"b", 5}});
}

TEST_CASE("maximal and closed sets of the running example") {
    auto [dict, corpus] = testing::running_example();
    std::map<std::string, std::uint64_t> maximal{{"a x b", 3}};
    std::map<std::string, std::uint64_t> closed{{"a x b", 3}, {"x b", 4}, {"b", 5}, {"x", 7}};
    auto sets = oracle::oracle_sets(corpus, 3, 3);
    CHECK(testing::rendered(dict, sets.maximal) == maximal);
    CHECK(testing::rendered(dict, sets.closed) == closed);
    for (std::size_t R : {1, 2, 3}) {
        CHECK(testing::rendered(dict, run_mode(corpus, 3, 3, R, FilterMode::maximal)) == maximal);
        CHECK(testing::rendered(dict, run_mode(corpus, 3, 3, R, FilterMode::closed)) == closed);
    }
}

TEST_CASE("maximal and closed match brute force") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        Corpus corpus = testing::random_corpus(seed + 900, {20, 40, 8});
        for (std::uint64_t tau : {1, 2, 3}) {
            for (std::size_t sigma : {std::size_t{2}, std::size_t{4}, unbounded}) {
                auto sets = oracle::oracle_sets(corpus, tau, sigma);
                std::size_t R = 1 + seed % 3;
                CHECK(run_mode(corpus, tau, sigma, R, FilterMode::maximal) == sets.maximal);
                CHECK(run_mode(corpus, tau, sigma, R, FilterMode::closed) == sets.closed);
            }
        }
    }
}

TEST_CASE("time series on the running example") {
    auto [dict, corpus] = testing::running_example();
    corpus[0].year = 1990;
    corpus[1].year = 1990;
    corpus[2].year = 1991;
    for (bool combiner : {true, false}) {
        MethodOptions opts;
        opts.tau = 3;
        opts.sigma = 3;
        opts.combiner = combiner;
        opts.reducers = 2;
        auto r = run_suffix_sigma_timeseries(corpus, opts);
        std::map<std::string, TimeSeries> by_gram;
        for (const auto& s : r.stats) {
            REQUIRE(s.series.has_value());
            CHECK(s.series->total() == s.count);
            by_gram[dict.render(s.ngram)] = *s.series;
        }
        CHECK(by_gram.size() == 6);
        TimeSeries axb;
        axb.add(1990, 2);
        axb.add(1991, 1);
        CHECK(by_gram.at("a x b") == axb);
    }
    corpus[1].year = 0;
    CHECK_THROWS_WITH_AS(run_suffix_sigma_timeseries(corpus, MethodOptions{}), "untimed document", error);
}

TEST_CASE("time series totals equal plain counts") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Corpus corpus = testing::random_corpus(seed + 1300);
        for (std::uint64_t tau : {1, 3}) {
            for (std::size_t sigma : {std::size_t{2}, unbounded}) {
                MethodOptions opts;
                opts.tau = tau;
                opts.sigma = sigma;
                opts.reducers = 3;
                opts.combiner = seed % 2 == 0;
                auto r = run_suffix_sigma_timeseries(corpus, opts);
                auto expected = oracle::oracle_timeseries(corpus, tau, sigma);
                std::map<TermSequence, std::uint64_t> totals;
                oracle::SeriesMap series;
                for (const auto& s : r.stats) {
                    totals[s.ngram] = s.series->total();
                    for (auto [year, count] : s.series->points()) series[s.ngram][year] = count;
                }
                CHECK(totals == oracle::oracle_cf(corpus, tau, sigma));
                CHECK(series == expected);
            }
        }
    }
}

TEST_CASE("single year series") {
    Corpus corpus = testing::random_corpus(4242);
    for (auto& d : corpus) d.year = 2000;
    MethodOptions opts;
    opts.tau = 2;
    auto r = run_suffix_sigma_timeseries(corpus, opts);
    for (const auto& s : r.stats) {
        REQUIRE(s.series->points().size() == 1);
        CHECK(s.series->points()[0] == TimeSeries::Point{2000, s.count});
    }
}

TEST_CASE("time series codec and merge") {
    TimeSeries a = TimeSeries::single(1990, 2);
    a += TimeSeries::single(1988);
    a += TimeSeries::single(1990);
    a.add(2000, 0);
    CHECK(a.points() == std::vector<TimeSeries::Point>{{1988, 1}, {1990, 3}});
    CHECK(a.total() == 4);
    Bytes b;
    a.encode(b);
    ByteReader in(b);
    CHECK(TimeSeries::decode(in) == a);
    CHECK(in.done());
}
