import json

import pytest

import ngramstat

RUNNING_EXAMPLE = ["a x b x x", "b a x b x", "x b a x b"]
EXPECTED = {"a": 3, "b": 5, "x": 7, "a x": 3, "x b": 4, "a x b": 3}


@pytest.fixture
def dataset():
    return ngramstat.Dataset.from_texts(RUNNING_EXAMPLE, years=[1990, 1990, 1991])


def test_tokenize():
    assert ngramstat.tokenize("A x. B!") == [["a", "x"], ["b"]]


def test_dataset_properties(dataset):
    assert dataset.num_documents == 3
    assert dataset.num_occurrences == 15
    assert dataset.vocabulary == {"x": 7, "b": 5, "a": 3}


@pytest.mark.parametrize("method", ["naive", "apriori-scan", "apriori-index", "suffix-sigma", "oracle"])
def test_methods_agree(dataset, method):
    result = dataset.run(method, tau=3, sigma=3)
    assert result.counts == EXPECTED
    assert result.tsv.splitlines()[0] == "a\t3"


def test_extensions(dataset):
    assert dataset.run(tau=3, sigma=3, maximal=True).counts == {"a x b": 3}
    assert dataset.run(tau=3, sigma=3, closed=True, reducers=2).counts == {"a x b": 3, "x b": 4, "b": 5, "x": 7}
    series = dataset.run(tau=3, sigma=3, timeseries=True).series
    assert series["a x b"] == {1990: 2, 1991: 1}


def test_metrics(dataset):
    result = dataset.run("apriori-scan", tau=3, sigma=3)
    assert [job["iteration"] for job in result.metrics["jobs"]] == [1, 2, 3]
    assert result.metrics["preprocessing"]["job"] == "unigram-split"


def test_compare(dataset):
    rows = dataset.compare([1, 3], [2, None])
    assert len(rows) == 16
    suffix = [r for r in rows if r["method"] == "suffix-sigma"]
    assert all(r["records"] == 15 for r in suffix)


def test_errors(dataset):
    with pytest.raises(ngramstat.UsageError):
        dataset.run("naive", maximal=True)
    with pytest.raises(ValueError):
        dataset.run("fast")
    untimed = ngramstat.Dataset.from_texts(["a b"])
    with pytest.raises(ngramstat.NgramError, match="untimed document"):
        untimed.run(timeseries=True)


def test_ingest_roundtrip(tmp_path):
    src = tmp_path / "in"
    src.mkdir()
    for i, text in enumerate(RUNNING_EXAMPLE):
        (src / f"d{i}.txt").write_text(text)
    report = ngramstat.ingest_directory(str(src), str(tmp_path / "corpus"), shards=2)
    assert (report.documents, report.occurrences, report.distinct_terms) == (3, 15, 3)
    loaded = ngramstat.Dataset.load(str(tmp_path / "corpus"))
    assert loaded.run(tau=3, sigma=3).counts == EXPECTED
