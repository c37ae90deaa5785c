#include "ngram/runner.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <chrono>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "ngram/apriori.hpp"
#include "ngram/extensions.hpp"
#include "ngram/naive.hpp"
#include "ngram/oracle.hpp"
#include "ngram/suffix.hpp"

namespace ngram {

namespace {

constexpr std::pair<Method, std::string_view> method_names[] = {
    {Method::naive, "naive"},
    {Method::apriori_scan, "apriori-scan"},
    {Method::apriori_index, "apriori-index"},
    {Method::suffix_sigma, "suffix-sigma"},
    {Method::oracle, "oracle"},
};

nlohmann::json counters_to_json(const engine::CounterSet& c) {
    return {
        {"job", c.job},
        {"iteration", c.iteration},
        {"map_output_records_pre_combiner", c.map_output_records_pre_combiner},
        {"map_output_records", c.map_output_records},
        {"map_output_bytes_pre_combiner", c.map_output_bytes_pre_combiner},
        {"map_output_bytes", c.map_output_bytes},
        {"reduce_output_records", c.reduce_output_records},
        {"wall_ms", c.wall_ms},
    };
}

StatSet stats_from_oracle(const oracle::CountMap& counts) {
    StatSet out;
    for (const auto& [gram, cf] : counts) out.push_back({gram, cf, std::nullopt});
    return out;
}

RunResult run_oracle(const Corpus& corpus, const RunConfig& config) {
    RunResult result;
    if (config.timeseries) {
        for (const auto& doc : corpus)
            if (doc.year == 0) throw error("untimed document");
        for (const auto& [gram, years] : oracle::oracle_timeseries(corpus, config.tau, config.sigma)) {
            TimeSeries series;
            for (const auto& [year, n] : years) series.add(year, n);
            result.stats.push_back({gram, series.total(), std::move(series)});
        }
    } else if (config.maximal || config.closed) {
        auto sets = oracle::oracle_sets(corpus, config.tau, config.sigma);
        result.stats = stats_from_oracle(config.maximal ? sets.maximal : sets.closed);
    } else {
        result.stats = stats_from_oracle(oracle::oracle_cf(corpus, config.tau, config.sigma));
    }
    return result;
}

}  // namespace

std::string_view method_name(Method m) {
    for (const auto& [method, name] : method_names)
        if (method == m) return name;
    return "unknown";
}

Method parse_method(std::string_view name) {
    for (const auto& [method, n] : method_names)
        if (n == name) return method;
    throw usage_error("unknown method: " + std::string(name));
}

std::size_t parse_sigma(std::string_view text) {
    if (text == "inf" || text == "infinity" || text == "∞") return unbounded;
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || v == 0)
        throw usage_error("sigma must be a positive integer or 'inf': " + std::string(text));
    return v;
}

std::string sigma_label(std::size_t sigma) { return sigma == unbounded ? "inf" : std::to_string(sigma); }

void validate(const RunConfig& c) {
    if (c.tau < 1) throw usage_error("--tau must be at least 1");
    if (c.sigma < 1) throw usage_error("--sigma must be at least 1");
    if (c.reducers < 1) throw usage_error("--reducers must be at least 1");
    if (c.workers < 1) throw usage_error("--workers must be at least 1");
    if (c.k && c.method != Method::apriori_index) throw usage_error("--k applies to apriori-index only");
    if (c.k && *c.k < 2) throw usage_error("--k must be at least 2");
    if (c.maximal && c.closed) throw usage_error("--maximal and --closed are mutually exclusive");
    if (c.timeseries && (c.maximal || c.closed))
        throw usage_error("--timeseries cannot be combined with --maximal or --closed");
    bool suffix_or_oracle = c.method == Method::suffix_sigma || c.method == Method::oracle;
    if (c.timeseries && !suffix_or_oracle) throw usage_error("--timeseries requires --method suffix-sigma");
    if ((c.maximal || c.closed) && !suffix_or_oracle)
        throw usage_error("--maximal/--closed require --method suffix-sigma");
}

RunResult run_method(const Corpus& corpus, const RunConfig& config) {
    validate(config);
    MethodOptions base;
    base.tau = config.tau;
    base.sigma = config.sigma;
    base.reducers = config.reducers;
    base.combiner = config.combiner;
    base.keep_intermediate = config.keep_intermediate;
    base.engine.workers = config.workers;
    base.engine.inputs_per_task = config.inputs_per_task;

    switch (config.method) {
    case Method::naive:
        return run_naive(corpus, base);
    case Method::apriori_scan: {
        AprioriScanOptions o;
        static_cast<MethodOptions&>(o) = base;
        return run_apriori_scan(corpus, o);
    }
    case Method::apriori_index: {
        AprioriIndexOptions o;
        static_cast<MethodOptions&>(o) = base;
        if (config.k) o.k = *config.k;
        return run_apriori_index(corpus, o);
    }
    case Method::suffix_sigma: {
        if (config.timeseries) return run_suffix_sigma_timeseries(corpus, base);
        if (config.maximal) return run_maximal_closed(corpus, base, FilterMode::maximal);
        if (config.closed) return run_maximal_closed(corpus, base, FilterMode::closed);
        SuffixOptions o;
        static_cast<MethodOptions&>(o) = base;
        return run_suffix_sigma(corpus, o);
    }
    case Method::oracle:
        return run_oracle(corpus, config);
    }
    throw error("unhandled method");
}

void write_output(std::ostream& out, StatSet stats, const Dictionary& dict) {
    sort_by_surface(stats, dict);
    write_tsv(out, stats, dict);
}

std::string metrics_json(const RunConfig& config, const RunResult& result) {
    nlohmann::json j;
    j["method"] = method_name(config.method);
    j["tau"] = config.tau;
    j["sigma"] = sigma_label(config.sigma);
    j["reducers"] = config.reducers;
    j["combiner"] = config.combiner;
    j["preprocessing"] = counters_to_json(result.preprocessing);
    j["jobs"] = nlohmann::json::array();
    for (const auto& c : result.jobs) j["jobs"].push_back(counters_to_json(c));
    j["totals"] = counters_to_json(result.totals());
    j["output_records"] = result.stats.size();
    return j.dump(2);
}

void write_records(const std::filesystem::path& path, const std::vector<engine::KeyValue>& records) {
    Bytes data;
    for (const auto& kv : records) {
        append_sequence(data, kv.key);
        put_varint(data, kv.value.size());
        data.insert(data.end(), kv.value.begin(), kv.value.end());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw error("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
}

std::vector<engine::KeyValue> read_records(const std::filesystem::path& path) {
    Bytes data = read_file_bytes(path);
    ByteReader in(data);
    std::vector<engine::KeyValue> out;
    while (!in.done()) {
        engine::KeyValue kv;
        kv.key = in.sequence();
        auto value = in.bytes(in.varint());
        kv.value.assign(value.begin(), value.end());
        out.push_back(std::move(kv));
    }
    return out;
}

std::pair<Dictionary, Corpus> ingest_texts(const std::vector<std::string>& texts,
                                           const std::vector<std::uint32_t>& years) {
    std::vector<TokenizedDocument> tokenized;
    tokenized.reserve(texts.size());
    for (const auto& t : texts) tokenized.push_back(tokenize_and_split(t));
    Dictionary dict = build_dictionary(tokenized);
    Corpus corpus;
    corpus.reserve(texts.size());
    for (std::size_t i = 0; i < tokenized.size(); ++i)
        corpus.push_back(encode_document(tokenized[i], dict, i, i < years.size() ? years[i] : 0));
    return {std::move(dict), std::move(corpus)};
}

IngestReport ingest_directory(const std::filesystem::path& input, const std::filesystem::path& output,
                              const std::optional<std::filesystem::path>& manifest, std::size_t shards,
                              std::ostream& warnings) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(input)) throw error("not a directory: " + input.string());
    std::map<std::string, std::uint32_t> manifest_years;
    if (manifest) {
        std::ifstream in(*manifest);
        if (!in) throw error("cannot open manifest " + manifest->string());
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto tab = line.find('\t');
            if (tab == std::string::npos) throw error("malformed manifest line: " + line);
            try {
                manifest_years[line.substr(0, tab)] = static_cast<std::uint32_t>(std::stoul(line.substr(tab + 1)));
            } catch (const std::logic_error&) {
                throw error("malformed manifest line: " + line);
            }
        }
    }

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(input))
        if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end(),
              [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });
    if (manifest) {
        std::error_code ec;
        files.erase(std::remove_if(files.begin(), files.end(),
                                   [&](const fs::path& p) { return fs::equivalent(p, *manifest, ec); }),
                    files.end());
    }
    if (files.empty()) throw error("no input documents in " + input.string());

    IngestReport report;
    std::vector<TokenizedDocument> tokenized;
    std::vector<std::uint32_t> years;
    for (const auto& path : files) {
        std::ifstream in(path, std::ios::binary);
        std::stringstream buf;
        if (in) buf << in.rdbuf();
        if (!in || in.bad()) {
            warnings << "warning: cannot read " << path.string() << '\n';
            ++report.failed_files;
            continue;
        }
        tokenized.push_back(tokenize_and_split(buf.str()));
        auto it = manifest_years.find(path.filename().string());
        years.push_back(it == manifest_years.end() ? 0 : it->second);
    }
    if (tokenized.empty()) throw error("no readable input documents in " + input.string());

    Dictionary dict = build_dictionary(tokenized);
    Corpus corpus;
    corpus.reserve(tokenized.size());
    for (std::size_t i = 0; i < tokenized.size(); ++i) {
        corpus.push_back(encode_document(tokenized[i], dict, i, years[i]));
        report.sentences += corpus.back().fragments.size();
    }
    report.documents = corpus.size();
    report.occurrences = total_occurrences(corpus);
    report.distinct_terms = dict.size();

    fs::create_directories(output);
    write_dictionary_file(output / dictionary_file_name, dict);
    shards = std::max<std::size_t>(1, std::min(shards, corpus.size()));
    std::size_t per_shard = (corpus.size() + shards - 1) / shards;
    for (std::size_t s = 0; s < shards; ++s) {
        std::size_t begin = s * per_shard;
        std::size_t end = std::min(corpus.size(), begin + per_shard);
        char name[32];
        std::snprintf(name, sizeof name, "part-%05zu", s);
        write_corpus_shard(output / (std::string(name) + std::string(shard_extension)),
                           std::span<const Document>(corpus).subspan(begin, end - begin));
    }
    return report;
}

void print_ingest_report(std::ostream& out, const IngestReport& r) {
    out << "# documents\t" << r.documents << '\n'
        << "# term occurrences\t" << r.occurrences << '\n'
        << "# distinct terms\t" << r.distinct_terms << '\n'
        << "# sentences\t" << r.sentences << '\n';
    if (r.failed_files) out << "# unreadable files\t" << r.failed_files << '\n';
}

std::vector<CompareRow> compare_methods(const Corpus& corpus, const std::vector<std::uint64_t>& taus,
                                        const std::vector<std::size_t>& sigmas, const RunConfig& base) {
    constexpr Method methods[] = {Method::naive, Method::apriori_scan, Method::apriori_index,
                                  Method::suffix_sigma};
    std::vector<CompareRow> rows;
    for (Method m : methods) {
        for (std::uint64_t tau : taus) {
            for (std::size_t sigma : sigmas) {
                RunConfig c = base;
                c.method = m;
                c.tau = tau;
                c.sigma = sigma;
                c.maximal = c.closed = c.timeseries = false;
                if (m != Method::apriori_index) c.k.reset();
                auto start = std::chrono::steady_clock::now();
                RunResult r = run_method(corpus, c);
                double wall = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
                auto totals = r.totals();
                rows.push_back({std::string(method_name(m)), tau, sigma, totals.map_output_records_pre_combiner,
                                totals.map_output_bytes_pre_combiner, wall});
            }
        }
    }
    return rows;
}

void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows) {
    out << "method,tau,sigma,records,bytes,wall_ms\n";
    for (const auto& r : rows) {
        out << r.method << ',' << r.tau << ',' << sigma_label(r.sigma) << ',' << r.records << ',' << r.bytes << ','
            << static_cast<std::uint64_t>(r.wall_ms + 0.5) << '\n';
    }
}

}  // namespace ngram
