"""Frequent n-gram statistics (Naive, Apriori-Scan, Apriori-Index, Suffix-sigma)."""

import csv
import io
import json

from ._core import (
    Dataset as _Dataset,
    IngestReport,
    NgramError,
    UsageError,
    ingest_directory,
    tokenize,
)

__all__ = ["Dataset", "Result", "IngestReport", "NgramError", "UsageError", "ingest_directory", "tokenize"]

METHODS = ("naive", "apriori-scan", "apriori-index", "suffix-sigma", "oracle")


class Result:
    """Output of one run: counts by n-gram, optional per-year series, metrics."""

    def __init__(self, raw):
        self.counts = dict(raw.counts)
        self.series = {gram: dict(points) for gram, points in raw.series}
        self.tsv = raw.tsv
        self.metrics = json.loads(raw.metrics_json)

    def __repr__(self):
        return f"Result({len(self.counts)} n-grams)"


class Dataset:
    """An encoded corpus plus its dictionary."""

    def __init__(self, core):
        self._core = core

    @classmethod
    def from_texts(cls, texts, years=None):
        return cls(_Dataset.from_texts(list(texts), list(years or [])))

    @classmethod
    def load(cls, directory):
        return cls(_Dataset.load(directory))

    @property
    def num_documents(self):
        return self._core.num_documents

    @property
    def num_occurrences(self):
        return self._core.num_occurrences

    @property
    def vocabulary(self):
        return dict(self._core.vocabulary)

    def run(self, method="suffix-sigma", tau=1, sigma=None, *, reducers=1, k=None, maximal=False,
            closed=False, timeseries=False, combiner=True, workers=1):
        """sigma=None means no length bound."""
        raw = self._core.run(method, tau, sigma, reducers, k, maximal, closed, timeseries, combiner, workers)
        return Result(raw)

    def compare(self, taus, sigmas, *, reducers=1, k=None, combiner=True, workers=1):
        """Counters of every method over the grid, one dict per run."""
        text = self._core.compare(list(taus), [s if s is not None else 2**64 - 1 for s in sigmas],
                                  reducers, k, combiner, workers)
        rows = list(csv.DictReader(io.StringIO(text)))
        for row in rows:
            for key in ("tau", "records", "bytes", "wall_ms"):
                row[key] = int(row[key])
            row["sigma"] = None if row["sigma"] == "inf" else int(row["sigma"])
        return rows
