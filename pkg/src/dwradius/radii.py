"""Numerical radius and Davis-Wielandt radius computations.

The theta-supremum quantities (w_N and dw_N under any supported norm) run on
a 1024-point grid with golden-section refinement; the classical
Davis-Wielandt radius runs a seeded 64-restart coordinate ascent over the
unit sphere.  Brute-force unit-vector oracles and an exact support-direction
evaluation of the classical radius are provided for cross-checking.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._sweeps import (
    BRACKET_WIDTH,
    GRID_POINTS,
    PencilSweep,
    SweepTask,
    ThetaOptimum,
    batched_herm_eigvals,
    sweep_many,
)
from .linalg import as_operator
from .norms import OPERATOR, NormSpec, norm_from_eigenvalues

__all__ = [
    "ThetaOptimum",
    "RadiusResult",
    "OptimizerStallError",
    "numerical_radius",
    "generalized_numerical_radius",
    "generalized_dw_radius",
    "imag_form_dw_radius",
    "classical_dw_radius",
    "brute_force_w",
    "brute_force_dw",
    "dw_support_value",
]

SPHERE_RESTARTS = 64
SPHERE_STEP0 = 0.1
SPHERE_STEP_FLOOR = 1e-10
DEFAULT_SPHERE_SEED = 7091


class OptimizerStallError(RuntimeError):
    """Sphere optimization produced no usable value."""


@dataclass(frozen=True)
class RadiusResult:
    """A computed radius: which quantity, its value, the witness (a
    ThetaOptimum for theta-sup methods, a unit vector for sphere methods),
    the method used, a conservative error estimate and, for randomized
    methods, the seed."""

    quantity: str
    value: float
    witness: object
    method: str
    est_error: float
    seed: int | None = None


def _zero_result(quantity: str, method: str = "theta_sup") -> RadiusResult:
    return RadiusResult(quantity, 0.0, ThetaOptimum(0.0, 0.0, 0, 0.0), method, 0.0)


def _abs_fourth(spec: NormSpec, t: np.ndarray) -> float:
    """N^4(|T|) from the singular values of T (|T| has spectrum sigma(T))."""
    sig = np.linalg.svd(t, compute_uv=False)
    return float(norm_from_eigenvalues(spec, sig)) ** 4


def _single_sweep(t, spec: NormSpec, kind: str, quantity: str) -> RadiusResult:
    t = as_operator(t)
    if np.abs(t).max() == 0.0:
        return _zero_result(quantity)
    pencil = PencilSweep(t)
    c4 = _abs_fourth(spec, t) if kind in ("dw", "dw_im") else 0.0
    opt, est = sweep_many([SweepTask("x", pencil, spec, kind, c4)])["x"]
    return RadiusResult(quantity, opt.value, opt, "theta_sup", est)


def generalized_numerical_radius(t, spec: NormSpec = OPERATOR) -> RadiusResult:
    """w_N(T) = sup_theta N(Re(e^{i theta} T))."""
    return _single_sweep(t, spec, "norm", "w_N")


def numerical_radius(t) -> RadiusResult:
    """Classical numerical radius w(T) (operator norm w_N)."""
    r = _single_sweep(t, OPERATOR, "norm", "w")
    return r


def generalized_dw_radius(t, spec: NormSpec = OPERATOR) -> RadiusResult:
    """dw_N(T) = sup_theta sqrt(N^2(Re(e^{i theta} T)) + N^4(Re(e^{i theta} |T|))).

    Uses the exact reduction Re(e^{i theta} |T|) = cos(theta) |T|, so the
    second term is cos^4(theta) N^4(|T|).
    """
    return _single_sweep(t, spec, "dw", "dw_N")


def imag_form_dw_radius(t, spec: NormSpec = OPERATOR) -> RadiusResult:
    """dw_N(T) through the imaginary parts:
    sup_theta sqrt(N^2(Im(e^{i theta} T)) + sin^4(theta) N^4(|T|)).

    Agrees with generalized_dw_radius to within the refinement tolerance and
    serves as a cross-check of the real-part reduction.
    """
    return _single_sweep(t, spec, "dw_im", "dw_N")


# ---------------------------------------------------------------------------
# sphere optimization and unit-vector oracles


def _dw_objective(t: np.ndarray, x: np.ndarray) -> np.ndarray:
    """|<Tx,x>|^2 + ||Tx||^4 for unit rows x of shape (R, n)."""
    y = x @ t.T
    ip = np.einsum("ij,ij->i", x.conj(), y)
    nrm2 = np.einsum("ij,ij->i", y.conj(), y).real
    return np.abs(ip) ** 2 + nrm2**2


def _w_objective(t: np.ndarray, x: np.ndarray) -> np.ndarray:
    y = x @ t.T
    return np.abs(np.einsum("ij,ij->i", x.conj(), y))


def _random_unit_rows(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    x = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    return x


def _coordinate_ascent(t: np.ndarray, x0: np.ndarray, objective) -> tuple[np.ndarray, np.ndarray]:
    """Coordinate-wise ascent over the unit sphere, vectorized across rows.

    Perturbs the 2n real coordinates of each row by +-step, renormalizes and
    keeps improvements; a row's step halves after a full pass without
    improvement and the row freezes below SPHERE_STEP_FLOOR.
    """
    x = x0.copy()
    r, n = x.shape
    f = objective(t, x)
    steps = np.full(r, SPHERE_STEP0)
    guard = 0
    while np.any(steps >= SPHERE_STEP_FLOOR):
        guard += 1
        if guard > 5000:
            break
        improved = np.zeros(r, dtype=bool)
        active = steps >= SPHERE_STEP_FLOOR
        for j in range(2 * n):
            for sgn in (1.0, -1.0):
                xt = x.copy()
                bump = sgn * steps * active
                if j < n:
                    xt[:, j] += bump
                else:
                    xt[:, j - n] += 1j * bump
                norms = np.linalg.norm(xt, axis=1)
                xt /= norms[:, None]
                ft = objective(t, xt)
                take = active & (ft > f)
                x[take] = xt[take]
                f[take] = ft[take]
                improved |= take
        steps = np.where(improved, steps, steps / 2.0)
    return x, f


def classical_dw_radius(t, seed: int = DEFAULT_SPHERE_SEED) -> RadiusResult:
    """Classical Davis-Wielandt radius
    dw(T) = sup_{||x||=1} sqrt(|<Tx,x>|^2 + ||Tx||^4)
    by seeded multi-start coordinate ascent on the unit sphere (64 restarts,
    step 0.1 halved on failure down to 1e-10)."""
    t = as_operator(t)
    n = t.shape[0]
    if np.abs(t).max() == 0.0:
        return RadiusResult("dw", 0.0, np.zeros(n, dtype=complex), "sphere_opt", 0.0, seed)
    rng = np.random.Generator(np.random.Philox(seed))
    x0 = _random_unit_rows(rng, SPHERE_RESTARTS, n)
    x, f = _coordinate_ascent(t, x0, _dw_objective)
    finite = np.isfinite(f)
    if not np.any(finite):
        raise OptimizerStallError("sphere ascent produced no finite value")
    f = np.where(finite, f, -np.inf)
    best = int(np.argmax(f))
    witness = x[best]
    value = math.sqrt(float(f[best]))
    return RadiusResult("dw", value, witness, "sphere_opt", SPHERE_STEP_FLOOR, seed)


def brute_force_w(t, samples: int = 100_000, seed: int = 0) -> float:
    """Lower-bound oracle for w(T): best of `samples` random unit vectors,
    then local coordinate-ascent polish.  Monotone in `samples` for a fixed
    seed because the sample stream is a fixed prefix sequence."""
    t = as_operator(t)
    if np.abs(t).max() == 0.0:
        return 0.0
    rng = np.random.Generator(np.random.Philox(seed))
    best_val = 0.0
    best_x = None
    chunk = 16384
    left = int(samples)
    while left > 0:
        take = min(chunk, left)
        x = _random_unit_rows(rng, take, t.shape[0])
        vals = _w_objective(t, x)
        j = int(np.argmax(vals))
        if vals[j] > best_val:
            best_val = float(vals[j])
            best_x = x[j]
        left -= take
    _, f = _coordinate_ascent(t, best_x[None, :], _w_objective)
    return max(best_val, float(f[0]))


def brute_force_dw(t, samples: int = 100_000, seed: int = 0) -> float:
    """Lower-bound oracle for dw(T), same scheme as brute_force_w."""
    t = as_operator(t)
    if np.abs(t).max() == 0.0:
        return 0.0
    rng = np.random.Generator(np.random.Philox(seed))
    best_val = 0.0
    best_x = None
    chunk = 16384
    left = int(samples)
    while left > 0:
        take = min(chunk, left)
        x = _random_unit_rows(rng, take, t.shape[0])
        vals = _dw_objective(t, x)
        j = int(np.argmax(vals))
        if vals[j] > best_val:
            best_val = float(vals[j])
            best_x = x[j]
        left -= take
    _, f = _coordinate_ascent(t, best_x[None, :], _dw_objective)
    return math.sqrt(max(best_val, float(f[0])))


# ---------------------------------------------------------------------------
# exact support-direction evaluation of the classical radius


def _support_starts() -> np.ndarray:
    """Deterministic net of directions on the u3 >= 0 hemisphere."""
    dirs = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1)]
    for psi in (0.35, 0.85, 1.25):
        for k in range(8):
            phi = 2 * math.pi * k / 8
            dirs.append((math.cos(psi) * math.cos(phi), math.cos(psi) * math.sin(phi), math.sin(psi)))
    return np.array(dirs, dtype=np.float64)


def dw_support_value(t) -> float:
    """dw(T) via the farthest point of the Davis-Wielandt shell.

    dw(T) equals the maximum over unit directions u in R^3 of the support
    function of the joint numerical range of (Re T, Im T, T*T); each support
    value is a top eigenvalue, and iterating u -> y(u)/||y(u)|| (the shell
    point supported by u) ascends monotonically to the farthest point.
    Multi-start over a deterministic direction net; exact up to iteration
    tolerance and much faster than the sphere search."""
    t = as_operator(t)
    if np.abs(t).max() == 0.0:
        return 0.0
    a = (t + t.conj().T) / 2.0
    b = (t - t.conj().T) / 2.0j
    c = t.conj().T @ t
    gens = np.stack([a, b, c])
    u = _support_starts()
    vals = np.zeros(len(u))
    best_prev = -1.0
    stall = 0
    for _ in range(200):
        mats = np.einsum("kd,dij->kij", u, gens)
        try:
            eigs, vecs = np.linalg.eigh(mats)
        except np.linalg.LinAlgError:
            break
        x = vecs[..., -1]
        y = np.stack(
            [
                np.einsum("ki,ij,kj->k", x.conj(), g, x).real
                for g in gens
            ],
            axis=1,
        )
        vals = np.linalg.norm(y, axis=1)
        nz = vals > 0.0
        u[nz] = y[nz] / vals[nz, None]
        best = float(vals.max())
        if best - best_prev <= 1e-13 * max(1.0, best):
            stall += 1
            if stall >= 2:
                break
        else:
            stall = 0
        best_prev = best
    return float(vals.max())
