// ngramstat: ingest text corpora and compute n-gram statistics with the
// Naive, Apriori-Scan, Apriori-Index or Suffix-sigma methods.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ngram/runner.hpp"

namespace {

constexpr int exit_usage = 1;
constexpr int exit_runtime = 2;

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::size_t default_workers() {
    if (const char* env = std::getenv("NGRAM_WORKERS")) {
        try {
            std::size_t w = std::stoul(env);
            if (w > 0) return w;
        } catch (const std::exception&) {
        }
        std::cerr << "warning: ignoring invalid NGRAM_WORKERS=" << env << '\n';
    }
    return 1;
}

struct RunFlags {
    std::string corpus;
    std::string output = "-";
    std::string method = "suffix-sigma";
    std::uint64_t tau = 1;
    std::string sigma = "inf";
    std::size_t reducers = 1;
    std::size_t k = 0;
    bool maximal = false;
    bool closed = false;
    bool timeseries = false;
    std::string combiner = "on";
    std::size_t workers = 0;
    std::string metrics_out;
    bool keep_intermediate = false;
};

ngram::RunConfig to_config(const RunFlags& f, bool k_given, bool workers_given) {
    ngram::RunConfig c;
    c.method = ngram::parse_method(f.method);
    c.tau = f.tau;
    c.sigma = ngram::parse_sigma(f.sigma);
    c.reducers = f.reducers;
    if (k_given) c.k = f.k;
    c.maximal = f.maximal;
    c.closed = f.closed;
    c.timeseries = f.timeseries;
    c.combiner = f.combiner == "on";
    c.workers = workers_given ? f.workers : default_workers();
    c.keep_intermediate = f.keep_intermediate;
    ngram::validate(c);
    return c;
}

int cmd_run(const RunFlags& flags, bool k_given, bool workers_given) {
    ngram::RunConfig config = to_config(flags, k_given, workers_given);
    namespace fs = std::filesystem;
    fs::path dir(flags.corpus);
    ngram::Dictionary dict = ngram::read_dictionary_file(dir / ngram::dictionary_file_name);
    ngram::Corpus corpus = ngram::read_corpus_dir(dir);
    ngram::RunResult result = ngram::run_method(corpus, config);

    if (config.keep_intermediate && !result.intermediate.empty()) {
        fs::path base = flags.output == "-" ? fs::path("ngramstat") : fs::path(flags.output);
        fs::path idir = base;
        idir += ".iterations";
        fs::create_directories(idir);
        for (std::size_t i = 0; i < result.intermediate.size(); ++i)
            ngram::write_records(idir / ("iteration-" + std::to_string(i + 1) + ".bin"), result.intermediate[i]);
    }
    if (!flags.metrics_out.empty()) {
        std::ofstream m(flags.metrics_out, std::ios::trunc);
        if (!m) throw ngram::error("cannot write " + flags.metrics_out);
        m << ngram::metrics_json(config, result) << '\n';
    }
    if (flags.output == "-") {
        ngram::write_output(std::cout, std::move(result.stats), dict);
    } else {
        std::ofstream out(flags.output, std::ios::trunc);
        if (!out) throw ngram::error("cannot write " + flags.output);
        ngram::write_output(out, std::move(result.stats), dict);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Corpus n-gram statistics on a local MapReduce engine"};
    app.require_subcommand(1);

    std::string ingest_input, ingest_output, manifest;
    std::size_t shards = 1;
    auto* ingest = app.add_subcommand("ingest", "Tokenize a directory of text files into a corpus");
    ingest->add_option("input", ingest_input, "Directory with one UTF-8 document per file")->required();
    ingest->add_option("output", ingest_output, "Corpus directory to write")->required();
    ingest->add_option("--manifest", manifest, "File with 'file name TAB year' lines");
    ingest->add_option("--shards", shards, "Number of corpus shards")->check(CLI::PositiveNumber);

    RunFlags flags;
    auto* run = app.add_subcommand("run", "Compute n-gram statistics");
    run->add_option("--corpus", flags.corpus, "Ingested corpus directory")->required();
    run->add_option("--output,-o", flags.output, "Output TSV ('-' for stdout)");
    run->add_option("--method", flags.method, "naive | apriori-scan | apriori-index | suffix-sigma | oracle");
    run->add_option("--tau", flags.tau, "Minimum collection frequency")->check(CLI::PositiveNumber);
    run->add_option("--sigma", flags.sigma, "Maximum n-gram length, or 'inf'");
    run->add_option("--reducers", flags.reducers, "Number of reduce partitions")->check(CLI::PositiveNumber);
    auto* k_opt = run->add_option("--k", flags.k, "Apriori-Index phase-1 length bound");
    auto* maximal = run->add_flag("--maximal", flags.maximal, "Only maximal n-grams");
    auto* closed = run->add_flag("--closed", flags.closed, "Only closed n-grams");
    auto* ts = run->add_flag("--timeseries", flags.timeseries, "Per-year counts");
    maximal->excludes(closed);
    ts->excludes(maximal);
    ts->excludes(closed);
    run->add_option("--combiner", flags.combiner, "Map-side pre-aggregation")->check(CLI::IsMember({"on", "off"}));
    auto* workers_opt = run->add_option("--workers", flags.workers, "Worker threads (default: $NGRAM_WORKERS or 1)")
                            ->check(CLI::PositiveNumber);
    run->add_option("--metrics-out", flags.metrics_out, "Write job counters as JSON");
    run->add_flag("--keep-intermediate", flags.keep_intermediate, "Keep per-iteration outputs next to the output");

    std::string cmp_corpus, cmp_taus = "1,2,3", cmp_sigmas = "1,2,3", cmp_out = "-";
    RunFlags cmp_flags;
    auto* compare = app.add_subcommand("compare", "Run all methods over a parameter grid and report counters as CSV");
    compare->add_option("--corpus", cmp_corpus, "Ingested corpus directory")->required();
    compare->add_option("--tau", cmp_taus, "Comma-separated tau values");
    compare->add_option("--sigma", cmp_sigmas, "Comma-separated sigma values");
    compare->add_option("--reducers", cmp_flags.reducers)->check(CLI::PositiveNumber);
    auto* cmp_k = compare->add_option("--k", cmp_flags.k, "Apriori-Index phase-1 length bound");
    compare->add_option("--combiner", cmp_flags.combiner)->check(CLI::IsMember({"on", "off"}));
    auto* cmp_workers = compare->add_option("--workers", cmp_flags.workers)->check(CLI::PositiveNumber);
    compare->add_option("--output,-o", cmp_out, "CSV path ('-' for stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    try {
        if (*ingest) {
            std::optional<std::filesystem::path> mpath;
            if (!manifest.empty()) mpath = manifest;
            auto report = ngram::ingest_directory(ingest_input, ingest_output, mpath, shards, std::cerr);
            ngram::print_ingest_report(std::cout, report);
            return 0;
        }
        if (*run) return cmd_run(flags, k_opt->count() > 0, workers_opt->count() > 0);
        if (*compare) {
            cmp_flags.method = "naive";
            ngram::RunConfig base = to_config(cmp_flags, false, cmp_workers->count() > 0);
            if (cmp_k->count() > 0) base.k = cmp_flags.k;
            std::vector<std::uint64_t> taus;
            for (const auto& t : split_list(cmp_taus)) {
                try {
                    taus.push_back(std::stoull(t));
                } catch (const std::exception&) {
                    throw ngram::usage_error("invalid tau: " + t);
                }
            }
            std::vector<std::size_t> sigmas;
            for (const auto& s : split_list(cmp_sigmas)) sigmas.push_back(ngram::parse_sigma(s));
            if (taus.empty() || sigmas.empty()) throw ngram::usage_error("empty parameter grid");
            ngram::Corpus corpus = ngram::read_corpus_dir(cmp_corpus);
            auto rows = ngram::compare_methods(corpus, taus, sigmas, base);
            if (cmp_out == "-") {
                ngram::write_compare_csv(std::cout, rows);
            } else {
                std::ofstream out(cmp_out, std::ios::trunc);
                if (!out) throw ngram::error("cannot write " + cmp_out);
                ngram::write_compare_csv(out, rows);
            }
            return 0;
        }
    } catch (const ngram::usage_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const ngram::job_error& e) {
        std::cerr << "error in job " << e.job() << " (iteration " << e.iteration() << "): " << e.what() << '\n';
        return exit_runtime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime;
    }
    return 0;
}
