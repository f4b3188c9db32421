import math

import numpy as np
import pytest

from dwradius.norms import (
    FROBENIUS,
    NUMERICAL_RADIUS,
    OPERATOR,
    TRACE,
    AxiomViolation,
    NormSpec,
    check_norm_axioms,
    eval_norm,
    norm_from_eigenvalues,
    parse_norm,
    schatten,
)

DIAG34 = np.diag([3.0, 4.0]).astype(complex)
NIL = np.array([[0.0, 2.0], [0.0, 0.0]], dtype=complex)


def test_parse_norm_grammar():
    assert parse_norm("op") == OPERATOR
    assert parse_norm("fro") == FROBENIUS
    assert parse_norm("tr") == TRACE
    assert parse_norm("w") == NUMERICAL_RADIUS
    assert parse_norm("sp:3") == schatten(3.0)
    assert parse_norm("sp:1.5").p == 1.5
    for bad in ("", "spectral", "sp:", "sp:0.5", "sp:65", "sp:nan", "p2"):
        with pytest.raises(ValueError):
            parse_norm(bad)


def test_labels_round_trip():
    for spec in (OPERATOR, FROBENIUS, TRACE, NUMERICAL_RADIUS, schatten(3.0), schatten(2.5)):
        assert parse_norm(spec.label()) == spec


def test_frozen_values_diag():
    assert eval_norm(OPERATOR, DIAG34) == pytest.approx(4.0, abs=1e-12)
    assert eval_norm(TRACE, DIAG34) == pytest.approx(7.0, abs=1e-12)
    assert eval_norm(FROBENIUS, DIAG34) == pytest.approx(5.0, abs=1e-12)
    assert eval_norm(schatten(3.0), DIAG34) == pytest.approx(91.0 ** (1.0 / 3.0), abs=1e-12)
    # signs do not matter: norms see singular values
    assert eval_norm(TRACE, np.diag([3.0, -4.0])) == pytest.approx(7.0, abs=1e-12)


def test_frozen_values_nilpotent():
    # single singular value 2 makes every Schatten norm agree
    for spec in (OPERATOR, FROBENIUS, TRACE, schatten(3.0), schatten(17.0)):
        assert eval_norm(spec, NIL) == pytest.approx(2.0, abs=1e-12)
    # the numerical radius of [[0,2],[0,0]] is 1
    assert eval_norm(NUMERICAL_RADIUS, NIL) == pytest.approx(1.0, abs=1e-9)


def test_schatten_validation():
    with pytest.raises(ValueError):
        schatten(0.99)
    with pytest.raises(ValueError):
        schatten(64.5)
    assert schatten(1.0).kind == "schatten"


def test_schatten_overflow_safe():
    big = np.diag([1e3, 1e3]).astype(complex)
    v = eval_norm(schatten(64.0), big)
    assert v == pytest.approx(1e3 * 2.0 ** (1.0 / 64.0), rel=1e-12)


def test_norm_from_eigenvalues_matches_eval_norm():
    rng = np.random.default_rng(1234)
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    h = (g + g.conj().T) / 2
    eigs = np.linalg.eigvalsh(h)
    for spec in (OPERATOR, FROBENIUS, TRACE, schatten(3.0)):
        assert float(norm_from_eigenvalues(spec, eigs)) == pytest.approx(
            eval_norm(spec, h), rel=1e-12
        )
    # vectorized over a stack of eigenvalue rows
    rows = np.stack([eigs, 2 * eigs])
    out = norm_from_eigenvalues(TRACE, rows)
    assert out.shape == (2,)
    assert out[1] == pytest.approx(2 * out[0], rel=1e-14)


def test_norm_flags():
    for spec in (OPERATOR, FROBENIUS, TRACE, schatten(3.0)):
        assert spec.self_adjoint and spec.algebra
    assert NUMERICAL_RADIUS.self_adjoint
    assert not NUMERICAL_RADIUS.algebra  # w(TS) <= w(T)w(S) fails in general


def test_check_norm_axioms_clean():
    rng = np.random.default_rng(5)
    sample = [
        rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)) for _ in range(6)
    ]
    sample.append(np.zeros((3, 3), dtype=complex))
    for spec in (OPERATOR, FROBENIUS, TRACE, schatten(2.5), NUMERICAL_RADIUS):
        assert check_norm_axioms(spec, sample) == []


def test_axiom_violation_detectable():
    # claiming the numerical radius is submultiplicative must be caught:
    # w([[0,1],[0,0]] @ [[0,0],[1,0]]) = 1 > 1/2 * 1/2
    lying = NormSpec("numerical_radius", algebra=True)
    a = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    out = check_norm_axioms(lying, [a, a.conj().T])
    assert any(v.axiom == "submultiplicative" for v in out)
    assert all(isinstance(v, AxiomViolation) for v in out)


def test_w_norm_self_adjointness_numeric():
    rng = np.random.default_rng(77)
    for _ in range(5):
        t = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        assert eval_norm(NUMERICAL_RADIUS, t.conj().T) == pytest.approx(
            eval_norm(NUMERICAL_RADIUS, t), abs=1e-8
        )
