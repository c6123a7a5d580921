import pytest

import csmgen


def test_builtins_are_listed():
    names = csmgen.builtin_names()
    assert names[:2] == ["COUNTER", "NEW_COUNTER"]
    assert {"ARBITER", "SWITCH", "X", "IB"} <= set(names)


def test_builtin_sources_check_cleanly():
    for name in csmgen.builtin_names():
        assert csmgen.check_library(csmgen.builtin_source(name)) == []


def test_check_reports_codes():
    bad = "MODULE M(in %x, in %x, out %y)\nAUTOMATON A\n  STATES (S/y)\n  TRANS S --{ x }--> S\nEND\n"
    diags = csmgen.check_library(bad, "m.csml")
    assert any("E_DUP_FORMAL" in d for d in diags)
    assert all(d.startswith("m.csml:") for d in diags)


def test_expand_counter_sizes():
    flat = csmgen.expand("COUNTER", {"N": 3})
    assert flat.count("\n  STATES ") == 5
    assert flat.count("\n  TRANS ") == 11
    dot = csmgen.expand("COUNTER", {"N": 1}, format="dot")
    assert dot.startswith('digraph "COUNTER.AUTOMATON" {')


def test_expand_errors_raise():
    with pytest.raises(csmgen.CsmError, match="E_HEADER_ONLY"):
        csmgen.expand("X")
    with pytest.raises(KeyError):
        csmgen.expand("NOPE", {"N": 1})


def test_simulation_matches_oracle():
    flat = csmgen.expand("COUNTER", {"N": 2})
    trace = [["inc"], [], ["inc", "dec"], ["inc"], ["dec"]]
    states = [step[0][0] for step in csmgen.simulate(flat, trace)]
    assert states == csmgen.counter_oracle(2, trace)


def test_determinism_and_explore():
    report = csmgen.determinism(csmgen.expand("SET_COUNTER", {"N": 2}))
    overlaps = report["SET_COUNTER.AUTOMATON"]
    assert any(set(o["witness"]) == {"inc", "set[1]"} for o in overlaps)
    clean = csmgen.determinism(csmgen.expand("DETERMINISTIC_COUNTER", {"N": 2}))
    assert clean == {"DETERMINISTIC_COUNTER.AUTOMATON": []}

    nodes, edges = csmgen.explore(csmgen.expand("ARBITER", {"N": 2}), 8)
    assert {n[0] for n in nodes} == {"IDLE", "GT[0]", "GT[1]"}
    assert edges


def test_run_cli_in_process():
    code, out, err = csmgen.run(["determinism", "--module", "DETERMINISTIC_COUNTER", "--bind", "N=2"])
    assert (code, out, err) == (0, "DETERMINISTIC_COUNTER.AUTOMATON: deterministic\n", "")
