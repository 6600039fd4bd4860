import glob
import os

import pytest

from expcascade.output import (
    atomic_write_text,
    format_value,
    read_csv,
    render_csv,
    write_csv,
)


class TestFormatValue:
    def test_bool(self):
        assert format_value(True) == "true"
        assert format_value(False) == "false"

    def test_int(self):
        assert format_value(7) == "7"

    def test_float_round_trips(self):
        for v in (0.1, 1e-12, 1.358, 0.4405458573384521):
            assert float(format_value(v)) == v

    def test_string_passthrough(self):
        assert format_value("income") == "income"


class TestCsvRoundTrip:
    def test_config_and_rows(self, tmp_path):
        path = tmp_path / "out.csv"
        config = {"w": 0.5, "seed": 3}
        sweep = {"runs": 2}
        rows = [(1, 0.25, "a"), (2, 0.5, "b")]
        write_csv(path, ("idx", "value", "tag"), rows, config=config, sweep=sweep)
        got_config, got_sweep, columns, got_rows = read_csv(path)
        assert got_config == config
        assert got_sweep == sweep
        assert columns == ["idx", "value", "tag"]
        assert got_rows == [["1", "0.25", "a"], ["2", "0.5", "b"]]

    def test_render_without_meta(self):
        text = render_csv(("a",), [(1,)])
        assert text == "a\n1\n"

    def test_deterministic_meta_ordering(self):
        a = render_csv(("x",), [(1,)], config={"b": 1, "a": 2})
        b = render_csv(("x",), [(1,)], config={"a": 2, "b": 1})
        assert a == b


class TestAtomicWrite:
    def test_creates_parent_dirs(self, tmp_path):
        path = tmp_path / "nested" / "deep" / "file.csv"
        atomic_write_text(path, "hello\n")
        assert path.read_text() == "hello\n"

    def test_no_temp_file_left_behind(self, tmp_path):
        path = tmp_path / "file.csv"
        atomic_write_text(path, "x\n")
        atomic_write_text(path, "y\n")
        assert path.read_text() == "y\n"
        assert glob.glob(str(tmp_path / "*.tmp")) == []

    def test_failed_write_leaves_no_partial_target(self, tmp_path, monkeypatch):
        path = tmp_path / "file.csv"

        def boom(src, dst):
            raise OSError("disk on fire")

        monkeypatch.setattr(os, "replace", boom)
        with pytest.raises(OSError):
            atomic_write_text(path, "data\n")
        assert not path.exists()
        assert glob.glob(str(tmp_path / "*.tmp")) == []
