import json
from fractions import Fraction as F

import pytest

from heunpull.identities import (
    BindingError,
    Plan,
    UnknownIdentity,
    catalog,
    check_poly_case,
    reports_jsonl,
    run_all,
    run_identity,
    summary_csv,
)

MANDATORY = {
    "CYC1", "CYC2", "CYC3", "CYC4", "CYC-LOG", "CYC-TRIV", "CYC-KLEIN", "CYC-PSI",
    "REM-POW1", "REM-POW2", "REM-CONTIG", "P1", "POLY-P15", "POLY-P19", "POLY-P20",
    "DIH-THETA-SMALL", "DIH-CHEB", "DIH-THETA1", "DIH-THETA2", "DIH-N1",
    "DIH-EVAL1", "DIH-EVAL2", "DIH-EVAL3", "DIH-EVAL4", "DIH-EVAL5",
}


def test_catalog_coverage():
    ids = [c.id for c in catalog()]
    assert len(ids) >= 19
    assert len(ids) == len(set(ids))
    assert MANDATORY <= set(ids)
    for c in catalog():
        assert c.mode in {"exact_polynomial", "exact_residual", "numeric"}
        assert c.domains


def test_cyc1_domain_and_singular_binding():
    case = next(c for c in catalog() if c.id == "CYC1")
    assert {"a", "b", "a+b"} <= set(case.domains)
    with pytest.raises(BindingError):
        run_identity("CYC1", {"a": 1, "b": -1})
    with pytest.raises(BindingError):
        run_identity("DIH-EVAL1", {"a": F(1, 2), "b": F(1, 2)})


def test_cyc1_unit_binding():
    r = run_identity("CYC1", {"a": 1, "b": 1}, Plan(points=4))
    assert r.passed and r.samples == 4


def test_spec_exact_examples():
    assert run_identity("DIH-THETA1", {"N": 1, "M": 2}).passed
    assert run_identity("POLY-P15", {"n": 1, "a": F(1, 2)}).passed
    assert check_poly_case("P15", 1, F(1, 2)) is None


def test_qhat_mutation_is_caught():
    r = run_identity("POLY-P19", {"n": 2, "a": F(1, 3), "qhat": (F(9), F(18), F(-5))})
    assert not r.passed
    assert r.witness and "coefficient" in r.witness
    assert r.binding["n"] == 2


def test_unknown_identity():
    with pytest.raises(UnknownIdentity):
        run_identity("NOPE")


def test_quick_profile_passes_and_is_deterministic():
    first = run_all("quick", seed=7)
    assert all(r.passed for r in first), [(r.id, r.witness) for r in first if not r.passed]
    again = run_all("quick", seed=7, ids={"CYC2", "DIH-EVAL3", "P1"})
    picked = [r for r in first if r.id in {"CYC2", "DIH-EVAL3", "P1"}]
    assert reports_jsonl(again) == reports_jsonl(picked)
    for line in reports_jsonl(first).splitlines():
        doc = json.loads(line)
        assert "runtime_ms" not in doc
    assert summary_csv(first).splitlines()[0] == "id,status,worst_error,samples,ms"


def test_printed_dihedral_forms_are_flagged():
    r = run_identity("DIH-EVAL1")
    assert r.passed
    assert any("printed form" in f and "fails" in f for f in r.flags)
