"""Tests for trace CSV files and the campaign directory layout."""

import numpy as np
import pytest

from feasimap.adapters.fs_store import CampaignStore, load_yaml, save_yaml
from feasimap.adapters.tables import load_trace_csv, read_rows, save_trace_csv, trace_header
from feasimap.core.model import RunTrace, TraceRow
from feasimap.errors import InputError


def _trace() -> RunTrace:
    trace = RunTrace("g24", "pbe", 3)
    trace.rows.append(TraceRow(0, np.array([0.1, 1 / 3]), np.array([-1.5, 2e-17]), None, "init"))
    trace.rows.append(TraceRow(1, np.array([2.9, 3.0]), np.array([0.25, -7.0]), 0.125, "seq"))
    return trace


def test_trace_header_columns():
    """Test the iter, x_i, g_j, acq_value, phase column order."""
    assert trace_header(2, 3) == ["iter", "x_0", "x_1", "g_0", "g_1", "g_2", "acq_value", "phase"]


def test_trace_csv_keeps_values_exactly(tmp_path):
    """Test that floats survive the CSV exactly and a missing acq value stays empty."""
    path = tmp_path / "trace.csv"
    save_trace_csv(_trace(), path)

    rows = read_rows(path)
    assert rows[0]["acq_value"] == ""
    assert rows[1]["phase"] == "seq"

    loaded = load_trace_csv(path, "g24", "pbe", 3)
    assert len(loaded) == 2
    assert np.array_equal(loaded.inputs, _trace().inputs)
    assert np.array_equal(loaded.outputs, _trace().outputs)
    assert [r.acq_value for r in loaded.rows] == [None, 0.125]


def test_empty_trace_writes_header_only(tmp_path):
    """Test that an aborted run without evaluations still leaves a trace file."""
    path = tmp_path / "trace.csv"
    save_trace_csv(RunTrace("g8", "tmse", 0), path)
    assert path.read_text().strip() == "iter,acq_value,phase"


def test_read_rows_missing_file(tmp_path):
    """Test that a missing table raises InputError."""
    with pytest.raises(InputError):
        read_rows(tmp_path / "nope.csv")


def test_campaign_store_layout(tmp_path):
    """Test the per-run paths under the campaign root."""
    store = CampaignStore(tmp_path)
    assert store.trace_path("g9", "ranjan", 4) == tmp_path / "runs/g9/ranjan/rep-04/trace.csv"
    assert store.model_path("g9", "ranjan", 4).name == "model.json"
    assert store.manifest_path == tmp_path / "manifest.json"
    assert store.list_traces() == []

    save_trace_csv(_trace(), store.trace_path("g24", "pbe", 3))
    assert store.list_traces() == [store.trace_path("g24", "pbe", 3)]


def test_yaml_round_trip_keeps_key_order(tmp_path):
    """Test that YAML records keep insertion order and leave no temp file behind."""
    path = tmp_path / "run.yaml"
    save_yaml({"status": "completed", "informedness": 0.5, "diagnostic": None}, path)
    assert list(load_yaml(path)) == ["status", "informedness", "diagnostic"]
    assert not (tmp_path / "run.yaml.tmp").exists()
