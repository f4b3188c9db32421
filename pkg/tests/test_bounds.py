"""Tests for the inequality catalog: frozen worked-example values, gating,
pair handling, and the equality diagnostics."""

import json
import math

import numpy as np
import pytest

from dwradius.bounds import (
    CATALOG,
    DiagnosticFailedError,
    UnknownBoundError,
    compute_md,
    equality_diagnostics,
    evaluate_all,
    evaluate_bound,
    evaluate_matrix,
    refuted_upper_value,
    report_to_dict,
    reports_to_json_lines,
)
from dwradius.norms import FROBENIUS, NUMERICAL_RADIUS, OPERATOR, TRACE, schatten

NIL = np.array([[0.0, 2.0], [0.0, 0.0]], dtype=complex)
SQ17 = math.sqrt(17.0)

# hand-computed catalog values on [[0,2],[0,0]] under the operator norm:
# w = 1, N(T) = N(|T|) = 2, N(Re) = N(Im) = 1, dw_N = sqrt(17),
# m1,m2,d1,d2 = 17,16,16,15, |T|^2+|T*|^2 = 4I, T^2 = 0
NIL_OP_LHS = {
    "B_LOW": math.sqrt(3.0),            # sqrt(1/4 * 4 + 1/8 * 16)
    "B_THM22": SQ17,                    # sharp here
    "B_COR_EQUAC1": 3.0,                # 1/2 sqrt(4 + 2*16)
    "B_COR_ALG": 2.0 * math.sqrt(2.0),  # 1/2 sqrt(N(2|T|^4)) = 1/2 sqrt(32)
    "B_EQB1": SQ17,                     # sharp here
    "B_EQB2": 4.0,
    "B_COR_WNABS": 3.0,
    "B_COR_WNABS2": 3.0,
    "B_THM28": SQ17,                    # 1/2 sqrt(3 + 32 + 31 + 2)
    "B_EQP1": SQ17,                     # 1/2 sqrt(2 + 1 + 32 + 31 + 2)
    "B_EQP2": 0.5 * math.sqrt(66.0),    # T^2 = 0 drops the leading term
    "B_THM29": 0.5 * math.sqrt(66.5),
}


def test_catalog_shape():
    ids = [b.id for b in CATALOG]
    assert len(ids) == 21
    assert len(set(ids)) == 21
    assert ids[0] == "B_NORM_EQUIV"
    sides = {b.side for b in CATALOG}
    assert "triangle" in sides and "refuted_upper" in sides


def test_nilpotent_frozen_lower_bounds():
    for bound_id, expected in NIL_OP_LHS.items():
        rep = evaluate_bound(bound_id, NIL, OPERATOR)
        assert rep.applicable, bound_id
        assert rep.lhs == pytest.approx(expected, abs=1e-8), bound_id
        assert rep.rhs == pytest.approx(SQ17, abs=1e-8), bound_id
        assert rep.satisfied, bound_id


def test_nilpotent_md_quadruple_exact():
    md = compute_md(NIL, OPERATOR)
    assert (md.m1, md.m2, md.d1, md.d2) == (17.0, 16.0, 16.0, 15.0)


def test_norm_equivalence_and_sandwiches():
    rep = evaluate_bound("B_NORM_EQUIV", NIL, OPERATOR)
    assert rep.satisfied  # 1 <= 1 <= 2 collapses to the tight link
    rep = evaluate_bound("B_SANDWICH_DW", NIL, OPERATOR)
    assert rep.satisfied
    rep = evaluate_bound("B_WN_SANDWICH", NIL, TRACE)
    assert rep.satisfied


def test_refuted_bound_violated_on_identity():
    eye = np.eye(3, dtype=complex)
    rep = evaluate_bound("B_REFUTED_UP", eye, OPERATOR)
    assert rep.applicable and not rep.satisfied
    assert rep.lhs == pytest.approx(math.sqrt(2.0), abs=1e-9)
    assert rep.rhs == pytest.approx(1.0, abs=1e-9)
    assert refuted_upper_value(eye, OPERATOR) == pytest.approx(1.0, abs=1e-9)
    # every other applicable bound passes on the identity
    for rep in evaluate_all(eye, OPERATOR):
        if rep.applicable and rep.bound.id != "B_REFUTED_UP":
            assert rep.satisfied, rep.bound.id


def test_refuted_value_on_hermitian():
    h = np.array([[1.0, 0.5], [0.5, -0.25]], dtype=complex)
    n = float(np.abs(np.linalg.eigvalsh(h)).max())
    # at theta = pi/2 the real part vanishes and the cos^4 term drops out
    assert refuted_upper_value(h, OPERATOR) == pytest.approx(n, abs=1e-9)


def test_zero_matrix_trivially_satisfied():
    z = np.zeros((2, 2), dtype=complex)
    for rep in evaluate_all(z, OPERATOR):
        if rep.applicable:
            assert rep.satisfied
            assert rep.margin >= 0.0
    assert refuted_upper_value(z, OPERATOR) == 0.0


def test_gating_by_norm_flags():
    reports = {r.bound.id: r for r in evaluate_all(NIL, NUMERICAL_RADIUS)}
    for bound_id in ("B_BAK", "B_COR_ALG", "B_EQB1", "B_EQB2", "B_WN_MAX", "B_EQP1", "B_EQP2"):
        assert not reports[bound_id].applicable, bound_id
    for bound_id in ("B_LOW", "B_THM22", "B_COR_EQUAC1", "B_THM28", "B_SANDWICH_DWN"):
        assert reports[bound_id].applicable, bound_id


def test_pair_bounds_require_two_matrices():
    with pytest.raises(ValueError):
        evaluate_bound("B_TRI_DWN", NIL, OPERATOR)
    with pytest.raises(ValueError):
        evaluate_bound("B_LOW", NIL, OPERATOR, s=np.eye(2))
    with pytest.raises(UnknownBoundError):
        evaluate_bound("B_NOPE", NIL, OPERATOR)


def test_pair_bounds_frozen():
    s = np.array([[0.3, -1.0j], [0.25, 0.8]], dtype=complex)
    for bound_id in ("B_TRI_DW", "B_TRI_DWN"):
        rep = evaluate_bound(bound_id, NIL, OPERATOR, s=s)
        assert rep.applicable and rep.satisfied, bound_id
    # identical pair: dw_N(2T) = 2 dw_N(T) makes the chain easy to verify
    rep = evaluate_bound("B_TRI_DWN", NIL, OPERATOR, s=NIL)
    assert rep.satisfied
    assert rep.lhs <= 2.0 * math.sqrt(2.0) * (2.0 * SQ17) + 1e-9


def test_evaluate_matrix_merges_pair_reports():
    per_norm = evaluate_matrix(NIL, [OPERATOR, FROBENIUS], s=np.eye(2, dtype=complex))
    assert set(per_norm) == {"op", "fro"}
    for ev in per_norm.values():
        ids = [r.bound.id for r in ev.reports]
        assert ids == [b.id for b in CATALOG]
        by_id = {r.bound.id: r for r in ev.reports}
        assert by_id["B_TRI_DWN"].applicable


def test_dominance_chain_on_random_norms():
    rng = np.random.default_rng(424242)
    for _ in range(12):
        t = (rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))) / np.sqrt(2)
        for spec in (OPERATOR, FROBENIUS, TRACE, schatten(3.0)):
            by_id = {r.bound.id: r for r in evaluate_all(t, spec)}
            assert by_id["B_THM22"].lhs >= by_id["B_COR_EQUAC1"].lhs
            assert by_id["B_COR_EQUAC1"].lhs >= by_id["B_LOW"].lhs


def test_equality_diagnostics_zero():
    d = equality_diagnostics(np.zeros((2, 2)), OPERATOR)
    assert d.w_equality and d.w_branch == "zero"
    assert d.abs_equality and d.anti_hermitian


def test_equality_diagnostics_anti_hermitian():
    # 2i H with ||H|| = 1: dw_N = N^2(|T|) = 4 exactly while w_N = 2
    h = np.array([[0.6, 0.8], [0.8, -0.6]], dtype=complex)
    t = 2.0j * h
    d = equality_diagnostics(t, OPERATOR)
    assert d.abs_equality and d.anti_hermitian
    assert not d.w_equality
    assert d.dw == pytest.approx(4.0, abs=1e-9)
    assert d.w == pytest.approx(2.0, abs=1e-9)


def test_equality_diagnostics_generic_no_equalities():
    d = equality_diagnostics(NIL, OPERATOR)
    assert not d.w_equality and not d.abs_equality
    assert d.w_branch is None and d.anti_hermitian is None


def test_equality_diagnostics_failure_paths():
    # identity: dw = sqrt(2) ~ w = 1 within a loose tolerance, but the
    # rotated-real-part consequence fails (both rotations vanish)
    with pytest.raises(DiagnosticFailedError):
        equality_diagnostics(np.eye(2, dtype=complex), OPERATOR, tol=0.5)
    # near-anti-Hermitian perturbation: the abs equality survives a loose
    # tolerance but T + T* is visibly nonzero
    h = np.array([[0.6, 0.8], [0.8, -0.6]], dtype=complex)
    t = 2.0j * h + 0.05 * np.diag([1.0, -1.0])
    with pytest.raises(DiagnosticFailedError):
        equality_diagnostics(t, OPERATOR, tol=5e-3)


def test_report_serialization():
    rep = evaluate_bound("B_LOW", NIL, OPERATOR)
    d = report_to_dict(rep)
    assert d["bound"] == {"id": "B_LOW", "side": "lower_on_dwN"}
    assert d["satisfied"] is True
    lines = reports_to_json_lines(evaluate_all(NIL, OPERATOR)).splitlines()
    assert len(lines) == 21
    parsed = [json.loads(line) for line in lines]
    assert parsed[0]["bound"]["id"] == "B_NORM_EQUIV"
