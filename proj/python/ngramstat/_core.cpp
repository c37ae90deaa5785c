#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "ngram/error.hpp"
#include "ngram/runner.hpp"

namespace py = pybind11;

namespace {

struct Dataset {
    ngram::Dictionary dict;
    ngram::Corpus corpus;
};

struct RunOutput {
    std::vector<std::pair<std::string, std::uint64_t>> counts;
    std::vector<std::pair<std::string, std::vector<std::pair<std::uint32_t, std::uint64_t>>>> series;
    std::string tsv;
    std::string metrics;
};

ngram::RunConfig make_config(const std::string& method, std::uint64_t tau, std::optional<std::size_t> sigma,
                             std::size_t reducers, std::optional<std::size_t> k, bool maximal, bool closed,
                             bool timeseries, bool combiner, std::size_t workers) {
    ngram::RunConfig c;
    c.method = ngram::parse_method(method);
    c.tau = tau;
    c.sigma = sigma.value_or(ngram::unbounded);
    c.reducers = reducers;
    c.k = k;
    c.maximal = maximal;
    c.closed = closed;
    c.timeseries = timeseries;
    c.combiner = combiner;
    c.workers = workers;
    ngram::validate(c);
    return c;
}

RunOutput run(const Dataset& ds, const ngram::RunConfig& config) {
    ngram::RunResult result;
    {
        py::gil_scoped_release release;
        result = ngram::run_method(ds.corpus, config);
    }
    RunOutput out;
    out.metrics = ngram::metrics_json(config, result);
    ngram::sort_by_surface(result.stats, ds.dict);
    std::ostringstream tsv;
    ngram::write_tsv(tsv, result.stats, ds.dict);
    out.tsv = tsv.str();
    for (const auto& s : result.stats) {
        std::string gram = ds.dict.render(s.ngram);
        out.counts.emplace_back(gram, s.count);
        if (s.series) out.series.emplace_back(gram, s.series->points());
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "n-gram statistics on a local MapReduce engine";

    py::register_exception<ngram::error>(m, "NgramError", PyExc_RuntimeError);
    py::register_exception<ngram::usage_error>(m, "UsageError", PyExc_ValueError);

    m.def("tokenize", &ngram::tokenize_and_split, py::arg("text"),
          "Split text into sentences of lowercased tokens.");

    py::class_<ngram::IngestReport>(m, "IngestReport")
        .def_readonly("documents", &ngram::IngestReport::documents)
        .def_readonly("occurrences", &ngram::IngestReport::occurrences)
        .def_readonly("distinct_terms", &ngram::IngestReport::distinct_terms)
        .def_readonly("sentences", &ngram::IngestReport::sentences)
        .def_readonly("failed_files", &ngram::IngestReport::failed_files);

    m.def(
        "ingest_directory",
        [](const std::filesystem::path& input, const std::filesystem::path& output,
           std::optional<std::filesystem::path> manifest, std::size_t shards) {
            std::ostringstream warnings;
            auto report = ngram::ingest_directory(input, output, manifest, shards, warnings);
            if (!warnings.str().empty()) PyErr_WarnEx(PyExc_UserWarning, warnings.str().c_str(), 1);
            return report;
        },
        py::arg("input"), py::arg("output"), py::arg("manifest") = std::nullopt, py::arg("shards") = 1);

    py::class_<RunOutput>(m, "RunOutput")
        .def_readonly("counts", &RunOutput::counts)
        .def_readonly("series", &RunOutput::series)
        .def_readonly("tsv", &RunOutput::tsv)
        .def_readonly("metrics_json", &RunOutput::metrics);

    py::class_<Dataset>(m, "Dataset")
        .def_static(
            "from_texts",
            [](const std::vector<std::string>& texts, const std::vector<std::uint32_t>& years) {
                auto [dict, corpus] = ngram::ingest_texts(texts, years);
                return Dataset{std::move(dict), std::move(corpus)};
            },
            py::arg("texts"), py::arg("years") = std::vector<std::uint32_t>{})
        .def_static(
            "load",
            [](const std::filesystem::path& dir) {
                return Dataset{ngram::read_dictionary_file(dir / ngram::dictionary_file_name),
                               ngram::read_corpus_dir(dir)};
            },
            py::arg("directory"))
        .def_property_readonly("num_documents", [](const Dataset& d) { return d.corpus.size(); })
        .def_property_readonly("num_occurrences", [](const Dataset& d) { return ngram::total_occurrences(d.corpus); })
        .def_property_readonly("vocabulary",
                               [](const Dataset& d) {
                                   std::vector<std::pair<std::string, std::uint64_t>> out;
                                   for (const auto& e : d.dict.entries()) out.emplace_back(e.surface, e.cf);
                                   return out;
                               })
        .def(
            "run",
            [](const Dataset& d, const std::string& method, std::uint64_t tau, std::optional<std::size_t> sigma,
               std::size_t reducers, std::optional<std::size_t> k, bool maximal, bool closed, bool timeseries,
               bool combiner, std::size_t workers) {
                return run(d, make_config(method, tau, sigma, reducers, k, maximal, closed, timeseries, combiner,
                                          workers));
            },
            py::arg("method") = "suffix-sigma", py::arg("tau") = 1, py::arg("sigma") = std::nullopt,
            py::arg("reducers") = 1, py::arg("k") = std::nullopt, py::arg("maximal") = false,
            py::arg("closed") = false, py::arg("timeseries") = false, py::arg("combiner") = true,
            py::arg("workers") = 1)
        .def(
            "compare",
            [](const Dataset& d, const std::vector<std::uint64_t>& taus, const std::vector<std::size_t>& sigmas,
               std::size_t reducers, std::optional<std::size_t> k, bool combiner, std::size_t workers) {
                auto base = make_config("naive", 1, std::nullopt, reducers, std::nullopt, false, false, false,
                                        combiner, workers);
                base.k = k;
                std::vector<ngram::CompareRow> rows;
                {
                    py::gil_scoped_release release;
                    rows = ngram::compare_methods(d.corpus, taus, sigmas, base);
                }
                std::ostringstream csv;
                ngram::write_compare_csv(csv, rows);
                return csv.str();
            },
            py::arg("taus"), py::arg("sigmas"), py::arg("reducers") = 1, py::arg("k") = std::nullopt,
            py::arg("combiner") = true, py::arg("workers") = 1);
}
