import pytest
from hypothesis import given, settings, strategies as st

from locdec.errors import ConfigurationError
from locdec.graph import LabelledGraph
from locdec.languages import lang_2col
from locdec.runtime import (LocalAlgorithm, check_oblivious, check_oblivious_exhaustive, constant, run,
                            widen)


def path(labels, ids=None, oracle=None):
    return LabelledGraph(tuple(labels), frozenset((i, i + 1) for i in range(len(labels) - 1)), ids, oracle)


TWO_COL = lang_2col().decider("LDO")


def test_two_colouring_accepts_proper_path():
    v = run(TWO_COL, path((0, 1, 0)))
    assert v.accepted and v.no_nodes == []


def test_two_colouring_rejects_monochrome_edge():
    v = run(TWO_COL, path((1, 1)))
    assert not v.accepted and v.no_nodes == [0, 1]


def test_verdict_json():
    assert run(TWO_COL, path((1, 1, 0))).to_json() == {"accepted": False, "no_nodes": [0, 1]}


def test_single_no_rejects():
    alg = LocalAlgorithm("no-at-2", 0, lambda view: view.labels[0] != 2, oblivious=True)
    assert not run(alg, path((0, 0, 0, 2))).accepted


def test_missing_ids_is_configuration_error():
    alg = LocalAlgorithm("ids", 0, lambda view: view.ids[0] > 0)
    with pytest.raises(ConfigurationError):
        run(alg, path((0, 0)))


def test_missing_oracle_is_configuration_error():
    alg = LocalAlgorithm("oracle", 0, lambda view: True, oblivious=True, uses_oracle=True)
    with pytest.raises(ConfigurationError):
        run(alg, path((0, 0)))


def test_debug_mode_evaluates_twice():
    assert run(TWO_COL, path((0, 1)), debug=True).accepted


def test_check_oblivious_detects_id_dependence():
    alg = LocalAlgorithm("small-ids", 0, lambda view: view.ids[0] < 5, oblivious=True)
    assert not check_oblivious(alg, path((0, 0, 0)), trials=2)


def test_check_oblivious_constant():
    assert check_oblivious(constant(True, 1), path((0, 1, 0)))
    assert check_oblivious_exhaustive(constant(False, 1), path((0, 1, 0)))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=5))
def test_two_colouring_oblivious_exhaustive(cols):
    assert check_oblivious_exhaustive(TWO_COL, path(cols))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=8), st.integers(2, 4))
def test_widening_preserves_verdict(cols, r):
    g = path(cols)
    assert run(widen(TWO_COL, r), g) == run(TWO_COL, g)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=8))
def test_run_is_deterministic(cols):
    g = path(cols)
    assert run(TWO_COL, g) == run(TWO_COL, g)


def test_cap_environment_override(monkeypatch):
    from locdec import config
    monkeypatch.setenv("LOCDEC_CAP_ENUM", "17")
    assert config.enum_cap() == 17
    monkeypatch.setenv("LOCDEC_CAP_ENUM", "0")
    with pytest.raises(ValueError):
        config.enum_cap()
    monkeypatch.delenv("LOCDEC_CAP_ENUM")
    assert config.enum_cap() == config.DEFAULT_ENUM_CAP
