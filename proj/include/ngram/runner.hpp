#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ngram/error.hpp"
#include "ngram/method.hpp"

namespace ngram {

/// Invalid flags or flag combinations (CLI exit code 1).
class usage_error : public error {
public:
    using error::error;
};

enum class Method { naive, apriori_scan, apriori_index, suffix_sigma, oracle };

std::string_view method_name(Method m);
Method parse_method(std::string_view name);

/// Parses a σ value: a positive integer or "inf".
std::size_t parse_sigma(std::string_view text);
std::string sigma_label(std::size_t sigma);

struct RunConfig {
    Method method = Method::suffix_sigma;
    std::uint64_t tau = 1;
    std::size_t sigma = unbounded;
    std::size_t reducers = 1;
    std::optional<std::size_t> k;  // apriori-index only
    bool maximal = false;
    bool closed = false;
    bool timeseries = false;
    bool combiner = true;
    std::size_t workers = 1;
    bool keep_intermediate = false;
    std::size_t inputs_per_task = 1024;
};

void validate(const RunConfig& config);

RunResult run_method(const Corpus& corpus, const RunConfig& config);

/// Output as written by `run`: sorted by surface form.
void write_output(std::ostream& out, StatSet stats, const Dictionary& dict);

std::string metrics_json(const RunConfig& config, const RunResult& result);

/// Iteration outputs: per record an encoded key, varint value length and the
/// value bytes.
void write_records(const std::filesystem::path& path, const std::vector<engine::KeyValue>& records);
std::vector<engine::KeyValue> read_records(const std::filesystem::path& path);

struct IngestReport {
    std::size_t documents = 0;
    std::uint64_t occurrences = 0;
    std::size_t distinct_terms = 0;
    std::size_t sentences = 0;
    std::size_t failed_files = 0;
};

/// One document per regular file, in file-name order; ids are 0-based
/// positions in that order. `manifest` lines are "file name TAB year".
IngestReport ingest_directory(const std::filesystem::path& input, const std::filesystem::path& output,
                              const std::optional<std::filesystem::path>& manifest, std::size_t shards,
                              std::ostream& warnings);

void print_ingest_report(std::ostream& out, const IngestReport& report);

/// Tokenizes in-memory documents into a dictionary and corpus.
std::pair<Dictionary, Corpus> ingest_texts(const std::vector<std::string>& texts,
                                           const std::vector<std::uint32_t>& years = {});

struct CompareRow {
    std::string method;
    std::uint64_t tau = 0;
    std::size_t sigma = 0;
    std::uint64_t records = 0;  // pre-combiner map output records, all method jobs
    std::uint64_t bytes = 0;    // pre-combiner map output bytes, all method jobs
    double wall_ms = 0;
};

std::vector<CompareRow> compare_methods(const Corpus& corpus, const std::vector<std::uint64_t>& taus,
                                        const std::vector<std::size_t>& sigmas, const RunConfig& base);

void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows);

}  // namespace ngram
