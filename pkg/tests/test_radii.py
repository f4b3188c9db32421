import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dwradius.norms import FROBENIUS, OPERATOR, eval_norm
from dwradius.radii import (
    RadiusResult,
    brute_force_dw,
    brute_force_w,
    classical_dw_radius,
    dw_support_value,
    generalized_dw_radius,
    generalized_numerical_radius,
    imag_form_dw_radius,
    numerical_radius,
)
from dwradius.linalg import real_part, rotate

NIL = np.array([[0.0, 2.0], [0.0, 0.0]], dtype=complex)
JORDAN = np.array([[1.0, 1.0], [0.0, 1.0]], dtype=complex)


def _random_complex(rng, n):
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)


def test_numerical_radius_frozen():
    assert numerical_radius(NIL).value == pytest.approx(1.0, abs=1e-9)
    # w of a Jordan block [[a,1],[0,a]] is |a| + 1/2
    assert numerical_radius(JORDAN).value == pytest.approx(1.5, abs=1e-9)
    assert numerical_radius(np.eye(3)).value == pytest.approx(1.0, abs=1e-12)
    # normal matrices: w = spectral radius
    assert numerical_radius(np.diag([1.0j, -0.4])).value == pytest.approx(1.0, abs=1e-9)


def test_generalized_radius_frozen():
    assert generalized_numerical_radius(NIL, FROBENIUS).value == pytest.approx(
        math.sqrt(2.0), abs=1e-9
    )
    assert generalized_dw_radius(NIL, OPERATOR).value == pytest.approx(
        math.sqrt(17.0), abs=1e-9
    )
    assert generalized_dw_radius(NIL, FROBENIUS).value == pytest.approx(
        math.sqrt(18.0), abs=1e-9
    )
    assert generalized_dw_radius(np.eye(2), OPERATOR).value == pytest.approx(
        math.sqrt(2.0), abs=1e-12
    )


def test_witness_theta_reconstructs_value():
    res = generalized_numerical_radius(NIL, FROBENIUS)
    theta = res.witness.theta_star
    recon = eval_norm(FROBENIUS, real_part(rotate(NIL, theta)))
    assert recon == pytest.approx(res.value, abs=1e-9)
    assert res.method == "theta_sup"
    assert res.est_error >= 0.0


def test_zero_matrix_all_zero():
    z = np.zeros((3, 3), dtype=complex)
    for fn in (numerical_radius, classical_dw_radius):
        r = fn(z)
        assert r.value == 0.0 and r.est_error == 0.0
    assert generalized_dw_radius(z, OPERATOR).value == 0.0
    assert imag_form_dw_radius(z, OPERATOR).value == 0.0


def test_classical_dw_frozen():
    # the sup of 4s + 12s^2 over s in [0,1] is 16, attained at s = 1
    assert classical_dw_radius(NIL).value ** 2 == pytest.approx(16.0, abs=1e-6)
    assert classical_dw_radius(np.eye(2)).value == pytest.approx(math.sqrt(2.0), abs=1e-9)


def test_classical_dw_witness_is_feasible():
    res = classical_dw_radius(NIL)
    x = res.witness
    assert np.linalg.norm(x) == pytest.approx(1.0, abs=1e-9)
    quad = abs(np.vdot(x, NIL @ x)) ** 2 + np.linalg.norm(NIL @ x) ** 4
    assert math.sqrt(quad) == pytest.approx(res.value, abs=1e-9)
    assert res.seed is not None


def test_support_value_agrees_with_sphere():
    rng = np.random.default_rng(31415)
    for n in (2, 3, 4):
        t = _random_complex(rng, n)
        a = classical_dw_radius(t).value
        b = dw_support_value(t)
        assert b == pytest.approx(a, abs=1e-6)


def test_brute_force_agree():
    rng = np.random.default_rng(2718)
    for n in (2, 3):
        t = _random_complex(rng, n)
        w_sweep = numerical_radius(t).value
        w_brute = brute_force_w(t, 40_000)
        assert abs(w_sweep - w_brute) <= 5e-3
        dw_brute = brute_force_dw(t, 40_000)
        assert dw_brute <= classical_dw_radius(t).value + 1e-6


def test_imag_form_agreement():
    rng = np.random.default_rng(161803)
    for n in (2, 3, 5):
        t = _random_complex(rng, n)
        for spec in (OPERATOR, FROBENIUS):
            a = generalized_dw_radius(t, spec).value
            b = imag_form_dw_radius(t, spec).value
            assert abs(a - b) <= 1e-8


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2**31 - 1))
def test_norm_equivalence_property(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 5))
    t = _random_complex(rng, n)
    w = numerical_radius(t).value
    opn = eval_norm(OPERATOR, t)
    assert 0.5 * opn <= w + 1e-9
    assert w <= opn + 1e-9


@settings(max_examples=15, deadline=None)
@given(st.integers(min_value=0, max_value=2**31 - 1))
def test_dw_dominates_w_property(seed):
    rng = np.random.default_rng(seed)
    t = _random_complex(rng, 3)
    w = generalized_numerical_radius(t, OPERATOR).value
    dw = generalized_dw_radius(t, OPERATOR).value
    assert dw >= w - 1e-9


def test_result_is_frozen():
    r = numerical_radius(NIL)
    assert isinstance(r, RadiusResult)
    with pytest.raises(AttributeError):
        r.value = 0.0
