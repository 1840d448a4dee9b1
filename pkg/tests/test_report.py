"""Tests for summary tables and the method report."""

import math

import numpy as np
import pytest

from feasimap.adapters.tables import read_rows
from feasimap.campaign import build_report, compare, render_report
from feasimap.campaign.models import InformednessRow
from feasimap.campaign.report import (
    SUMMARY_HEADER,
    load_informedness,
    load_summary,
    save_informedness,
    save_summary,
    summarise,
)
from feasimap.errors import InputError

REPS = 21


def _rows(offsets, problem="g8"):
    base = np.linspace(0.0, 0.2, REPS)
    return [
        InformednessRow(problem, method, rep, "completed", float(base[rep] + offset))
        for method, offset in offsets.items()
        for rep in range(REPS)
    ]


def test_summarise_median_and_mad():
    """Test per-(problem, method) median, MAD, run and abort counts."""
    rows = [
        InformednessRow("g8", "pbe", 0, "completed", 0.5),
        InformednessRow("g8", "pbe", 1, "completed", 0.7),
        InformednessRow("g8", "pbe", 2, "completed", 0.9),
        InformednessRow("g8", "pbe", 3, "aborted", math.nan),
    ]
    (row,) = summarise(rows)
    assert (row.n_runs, row.n_aborted) == (4, 1)
    assert row.median_informedness == pytest.approx(0.7)
    assert row.mad == pytest.approx(0.2)
    assert row.equivalent_to_best
    assert row.p_vs_best is None


def test_summarise_flags_best_and_equivalents():
    """Test p_vs_best and equivalent_to_best against the best median of each problem."""
    rows = _rows({"good": 0.1, "same": 0.1, "poor": 0.0})
    rows += _rows({"poor": 0.0, "good": 0.3}, problem="g24")
    by_key = {(r.problem, r.method): r for r in summarise(rows)}

    good = by_key[("g8", "good")]
    assert good.p_vs_best is None
    assert good.equivalent_to_best

    same = by_key[("g8", "same")]
    assert same.p_vs_best == 1.0
    assert same.equivalent_to_best

    poor = by_key[("g8", "poor")]
    assert poor.p_vs_best < 0.025
    assert not poor.equivalent_to_best

    assert by_key[("g24", "good")].equivalent_to_best
    assert not by_key[("g24", "poor")].equivalent_to_best


def test_informedness_and_summary_files(tmp_path):
    """Test that the long-format table and summary reload with NaN kept as empty."""
    rows = [
        InformednessRow("g24", "tmse", 0, "completed", 0.25),
        InformednessRow("g24", "tmse", 1, "aborted", math.nan),
        InformednessRow("g24", "pbe", 0, "completed", 0.5),
        InformednessRow("g24", "pbe", 1, "completed", 0.75),
    ]
    save_informedness(rows, tmp_path / "informedness.csv")
    loaded = load_informedness(tmp_path / "informedness.csv")
    assert loaded[0] == rows[0]
    assert math.isnan(loaded[1].informedness)
    assert read_rows(tmp_path / "informedness.csv")[1]["informedness"] == ""

    path = tmp_path / "summary.csv"
    save_summary(summarise(rows), path)
    assert path.read_text().splitlines()[0] == ",".join(SUMMARY_HEADER)
    tmse, pbe = load_summary(path)
    assert tmse.median_informedness == 0.25
    assert tmse.n_aborted == 1
    assert tmse.p_vs_best == pytest.approx(0.5)
    assert tmse.equivalent_to_best
    assert pbe.p_vs_best is None
    assert read_rows(path)[1]["equivalent_to_best"] == "true"


def test_load_summary_missing_column(tmp_path):
    """Test that a summary written with other columns is rejected."""
    path = tmp_path / "summary.csv"
    path.write_text("problem,method,runs\ng8,pbe,3\n")
    with pytest.raises(InputError, match="median_informedness"):
        load_summary(path)


def test_missing_column_is_input_error(tmp_path):
    """Test that an informedness table without its score column is rejected."""
    path = tmp_path / "informedness.csv"
    path.write_text("problem,method,rep,status\ng8,pbe,0,completed\n")
    with pytest.raises(InputError, match="informedness"):
        load_informedness(path)


def test_report_flags_best_and_equivalents():
    """Test best, equivalent and beaten flags on one problem."""
    rows = _rows({"pbe": 0.6, "ranjan": 0.4, "tmse": 0.1})
    rows += [
        InformednessRow("g8", "echard", rep, "completed", 0.6 + 0.2 * rep / 20 + 1e-4 * (-1) ** rep)
        for rep in range(REPS)
    ]
    report = {r.method: r for r in build_report(rows)}

    assert report["pbe"].flag in {"best", "equivalent"}
    assert report["echard"].flag in {"best", "equivalent"}
    assert {report["pbe"].flag, report["echard"].flag} == {"best", "equivalent"}
    assert report["ranjan"].flag == ""
    assert report["tmse"].flag == ""
    assert report["tmse"].beaten_by == 3
    assert report["ranjan"].beaten_by == 2
    assert report["tmse"].p_value < 0.05 / 3


def test_report_requires_every_method():
    """Test that a problem lacking a requested method is an input error."""
    rows = _rows({"pbe": 0.5, "tmse": 0.1}) + _rows({"pbe": 0.5}, problem="g9")
    with pytest.raises(InputError, match="g9"):
        build_report(rows)
    with pytest.raises(InputError, match="knudde"):
        build_report(_rows({"pbe": 0.5}), methods=["pbe", "knudde"])


def test_render_report_marks_cells():
    """Test the text table: best marked '*', beaten counts in brackets."""
    text = render_report(build_report(_rows({"pbe": 0.6, "tmse": 0.1})))
    header, line = text.splitlines()
    assert header.split() == ["problem", "pbe", "tmse"]
    assert line.startswith("g8")
    assert "0.7000 (5.0e-02)*[0]" in line
    assert "[1]" in line


def test_compare_writes_report(tmp_path):
    """Test that compare reads informedness.csv and writes report.csv next to it."""
    save_informedness(_rows({"pbe": 0.6, "lhs-only": 0.0}), tmp_path / "informedness.csv")
    report = compare(tmp_path)

    assert [r.method for r in report] == ["pbe", "lhs-only"]
    written = read_rows(tmp_path / "report.csv")
    assert written[0]["flag"] == "best"
    assert written[0]["p_value"] == ""
    assert written[1]["beaten_by"] == "1"


def test_compare_without_table(tmp_path):
    """Test that comparing an empty directory is an input error."""
    with pytest.raises(InputError):
        compare(tmp_path)
