import pytest

import weilinv


def test_dimensions():
    assert weilinv.dimension("2^+2") == 2
    assert weilinv.dimension("3^-2") == 2
    assert weilinv.dimension("2^+2.3^-2") == 4
    assert weilinv.dimension("2^+2.3^-2", local=False) == 4
    assert weilinv.dimension("") == 1
    assert weilinv.dimension("2_1^+1") == 0
    assert weilinv.dimension("3^-2", prime=13) == 2


def test_module_from_gram():
    a2 = weilinv.module([[2, -1], [-1, 2]])
    assert a2.order == 3
    assert a2.profile()["signature"] == 2
    assert weilinv.dimension(a2) == 0
    assert (-a2).profile()["signature"] == 6
    assert (a2 + -a2).order == 9


def test_bases():
    basis = weilinv.integral_basis("9^+1")
    assert basis == [{(0,): 1, (3,): 1, (6,): 1}]
    m = weilinv.module("2^+2")
    iso = set(map(tuple, m.isotropic()))
    for v in weilinv.integral_basis(m) + weilinv.invariants_mod(m):
        assert set(v) <= iso
    assert weilinv.oracle_dimension(m) == 2


def test_tables_and_cli():
    records = weilinv.tables()
    assert len(records) == 172
    assert ("T3", "3^-2", 2) in records
    checks = weilinv.check_tables(max_order=64)
    assert checks and all(c["match"] for c in checks)
    code, out, _ = weilinv.run_cli(["dim", "3^-6"])
    assert (code, out) == (0, "40\n")


def test_errors():
    with pytest.raises(weilinv.ParseError):
        weilinv.dimension("2^+1")
    with pytest.raises(ValueError):
        weilinv.module("6^+1")
    with pytest.raises(weilinv.ComputationError):
        weilinv.dimension("3^+1", prime=11)
