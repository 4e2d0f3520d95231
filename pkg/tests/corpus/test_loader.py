"""Tests for CSV loading and writing."""
import logging

import pytest

from src.core.exceptions import (
    CorpusFormatError,
    EmptyCorpusError,
    MissingColumnError,
    MissingFileError,
)
from src.corpus.loader import load_csv, load_unlabeled_csv, read_text, write_csv
from src.corpus.schema import LoadReport


class TestLoadCsv:
    """Test suite for load_csv."""

    def test_loads_rows_in_file_order(self, tmp_path, climate_schema, write_rows):
        """Documents keep file order and decoded labels."""
        path = write_rows(tmp_path / "c.csv", ["sentiment", "message", "tweetid"], [
            ["1", "we must act now", "10"],
            ["-1", "it is a hoax", "11"],
            ["2", "new study published", "12"],
        ])
        dataset = load_csv(path, climate_schema)
        assert [doc.id for doc in dataset.documents] == ["10", "11", "12"]
        assert dataset.labels == ["Pro", "Anti", "News"]

    def test_quoted_fields_keep_commas_and_newlines(self, tmp_path, climate_schema, write_rows):
        """Quoted fields may hold commas and newlines."""
        text = 'he said, "no"\nthen left'
        path = write_rows(tmp_path / "c.csv", ["sentiment", "message", "tweetid"], [["0", text, "1"]])
        dataset = load_csv(path, climate_schema)
        assert dataset.documents[0].text == text

    def test_bad_rows_are_reported_not_fatal(self, tmp_path, climate_schema, write_rows):
        """Bad rows are rejected into the report without failing the load."""
        path = write_rows(tmp_path / "c.csv", ["sentiment", "message", "tweetid"], [
            ["1", "fine row", "1"],
            ["7", "undecodable label", "2"],
            ["1", "   ", "3"],
            ["1"],
            ["0", "duplicate", "1"],
            ["0", "another fine row", "5"],
        ])
        report = LoadReport(path=str(path))
        dataset = load_csv(path, climate_schema, report)
        assert len(dataset) == 2
        assert report.rows_read == 6
        assert report.rows_loaded == 2
        assert len(report.rejected) == 4
        assert report.duplicate_ids == ["1"]
        assert "rows rejected: 4" in report.render()

    def test_missing_file(self, tmp_path, climate_schema):
        """A missing file should raise MissingFileError."""
        with pytest.raises(MissingFileError):
            load_csv(tmp_path / "absent.csv", climate_schema)

    def test_missing_label_column(self, tmp_path, climate_schema, write_rows):
        """The error should name the missing column."""
        path = write_rows(tmp_path / "c.csv", ["message", "tweetid"], [["text", "1"]])
        with pytest.raises(MissingColumnError, match="sentiment"):
            load_csv(path, climate_schema)

    def test_empty_file(self, tmp_path, climate_schema):
        """An empty file should raise EmptyCorpusError."""
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(EmptyCorpusError):
            load_csv(path, climate_schema)

    def test_header_only(self, tmp_path, climate_schema, write_rows):
        """A header with no rows is an empty corpus."""
        path = write_rows(tmp_path / "c.csv", ["sentiment", "message", "tweetid"], [])
        with pytest.raises(EmptyCorpusError):
            load_csv(path, climate_schema)

    def test_unbalanced_quote_at_end(self, tmp_path, climate_schema):
        """An unclosed quote at end of file should raise CorpusFormatError."""
        path = tmp_path / "c.csv"
        path.write_text('sentiment,message,tweetid\n1,"never closed,2\n', encoding="utf-8")
        with pytest.raises(CorpusFormatError):
            load_csv(path, climate_schema)

    def test_latin1_fallback(self, tmp_path, climate_schema):
        """Invalid UTF-8 falls back to Latin-1."""
        path = tmp_path / "c.csv"
        path.write_bytes("sentiment,message,tweetid\n1,caf\xe9 talk,1\n".encode("latin-1"))
        report = LoadReport(path=str(path))
        dataset = load_csv(path, climate_schema, report)
        assert dataset.documents[0].text == "café talk"
        assert report.encoding == "latin-1"

    def test_declared_encoding_is_used_without_fallback(self, tmp_path, climate_schema, caplog):
        """A file in its declared encoding decodes directly, with no fallback warning."""
        path = tmp_path / "c.csv"
        path.write_bytes("sentiment,message,tweetid\n1,na\xefve \xa3 talk,1\n".encode("cp1252"))
        report = LoadReport(path=str(path))
        with caplog.at_level(logging.WARNING, logger="src.corpus.loader"):
            dataset = load_csv(path, climate_schema, report, encoding="cp1252")
        assert dataset.documents[0].text == "na\xefve \xa3 talk"
        assert report.encoding == "cp1252"
        assert "decoding as latin-1" not in caplog.text

    def test_invalid_bytes_for_declared_encoding_fall_back(self, tmp_path):
        """Bytes the declared encoding rejects fall back to Latin-1."""
        path = tmp_path / "c.csv"
        path.write_bytes(b"a,\x81b\n")
        text, encoding = read_text(path, "cp1252")
        assert encoding == "latin-1"
        assert text == "a,\x81b\n"

    def test_utf8_bom_is_stripped(self, tmp_path):
        """A UTF-8 byte order mark is dropped."""
        path = tmp_path / "bom.csv"
        path.write_bytes(b"\xef\xbb\xbfa,b\n")
        text, encoding = read_text(path)
        assert text == "a,b\n"
        assert encoding == "utf-8"

    def test_missing_id_gets_row_number(self, tmp_path, climate_schema, write_rows):
        """Rows without an id get their row number."""
        path = write_rows(tmp_path / "c.csv", ["sentiment", "message", "tweetid"], [
            ["1", "first", ""],
            ["1", "second", ""],
        ])
        assert [doc.id for doc in load_csv(path, climate_schema).documents] == ["1", "2"]


class TestUnlabeledAndWrite:
    """Test suite for unlabeled loading and CSV writing."""

    def test_unlabeled_ignores_label_column(self, tmp_path, binary_schema, write_rows):
        """Unlabeled loads need no label column and set label None."""
        path = write_rows(tmp_path / "test.csv", ["id", "keyword", "location", "text"], [
            ["0", "", "", "just happened a terrible car crash"],
            ["2", "fire", "NYC", "forest fire near la ronge"],
        ])
        documents = load_unlabeled_csv(path, binary_schema)
        assert [doc.id for doc in documents] == ["0", "2"]
        assert documents[1].keyword == "fire"
        assert documents[1].location == "NYC"
        assert all(doc.label is None for doc in documents)

    def test_write_then_load_gives_same_documents(self, tmp_path, toy_dataset):
        """Writing then loading gives the same documents."""
        path = tmp_path / "out.csv"
        write_csv(toy_dataset, path)
        reloaded = load_csv(path, toy_dataset.schema)
        assert reloaded.documents == toy_dataset.documents

    def test_written_labels_use_raw_codes(self, tmp_path, toy_dataset):
        """Labels are written as raw CSV codes."""
        path = tmp_path / "out.csv"
        write_csv(toy_dataset, path)
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "tweetid,message,sentiment"
        assert lines[1].rsplit(",", 1)[1] in {"-1", "0", "1", "2"}
