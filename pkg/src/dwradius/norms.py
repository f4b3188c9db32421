"""Pluggable matrix norms.

A NormSpec names one of five norm kinds: operator (largest singular value),
frobenius, trace, schatten-p, or the numerical radius w(T) used *as* a norm.
The first four are unitarily invariant functions of the singular values; the
numerical radius is a self-adjoint norm but not an algebra norm, which is
what the `algebra` capability flag records for bound gating.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .linalg import as_operator

__all__ = [
    "NormSpec",
    "AxiomViolation",
    "OPERATOR",
    "FROBENIUS",
    "TRACE",
    "NUMERICAL_RADIUS",
    "schatten",
    "parse_norm",
    "eval_norm",
    "norm_from_eigenvalues",
    "check_norm_axioms",
]

KINDS = ("operator", "frobenius", "trace", "schatten", "numerical_radius")
SCHATTEN_P_MAX = 64.0


@dataclass(frozen=True)
class NormSpec:
    """A norm selection plus its capability flags.

    Flags are fixed by the kind under `NormSpec.make`; constructing directly
    with different flags is allowed so that `check_norm_axioms` can be pointed
    at a deliberately wrong claim.
    """

    kind: str
    p: float | None = None
    self_adjoint: bool = True
    algebra: bool = True

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown norm kind {self.kind!r}")
        if self.kind == "schatten":
            if self.p is None or not (1.0 <= float(self.p) <= SCHATTEN_P_MAX):
                raise ValueError(f"schatten p must lie in [1, {SCHATTEN_P_MAX:g}], got {self.p!r}")
        elif self.p is not None:
            raise ValueError(f"p is only meaningful for schatten norms, got kind {self.kind!r}")

    @staticmethod
    def make(kind: str, p: float | None = None) -> "NormSpec":
        """Canonical spec for *kind*: every kind is self-adjoint, and all but
        the numerical radius are algebra norms."""
        spec = NormSpec(kind=kind, p=p)
        if kind == "numerical_radius":
            spec = replace(spec, algebra=False)
        return spec

    def label(self) -> str:
        """Short name as used on the command line."""
        if self.kind == "operator":
            return "op"
        if self.kind == "frobenius":
            return "fro"
        if self.kind == "trace":
            return "tr"
        if self.kind == "schatten":
            return f"sp:{self.p:g}"
        return "w"


OPERATOR = NormSpec.make("operator")
FROBENIUS = NormSpec.make("frobenius")
TRACE = NormSpec.make("trace")
NUMERICAL_RADIUS = NormSpec.make("numerical_radius")


def schatten(p: float) -> NormSpec:
    return NormSpec.make("schatten", float(p))


def parse_norm(text: str) -> NormSpec:
    """Parse the CLI grammar: "op" | "fro" | "tr" | "sp:<p>" | "w"."""
    text = text.strip()
    if text == "op":
        return OPERATOR
    if text == "fro":
        return FROBENIUS
    if text == "tr":
        return TRACE
    if text == "w":
        return NUMERICAL_RADIUS
    if text.startswith("sp:"):
        try:
            p = float(text[3:])
        except ValueError:
            raise ValueError(f"bad schatten norm {text!r}") from None
        return schatten(p)
    raise ValueError(f"unknown norm {text!r}")


def _from_singular_values(spec: NormSpec, sigma: np.ndarray) -> float:
    sigma = np.abs(np.asarray(sigma, dtype=np.float64))
    if spec.kind in ("operator", "numerical_radius"):
        return float(sigma.max())
    if spec.kind == "frobenius":
        return float(np.sqrt(np.sum(sigma**2)))
    if spec.kind == "trace":
        return float(np.sum(sigma))
    # schatten: rescale by the largest value so sigma**p cannot overflow
    top = float(sigma.max())
    if top == 0.0:
        return 0.0
    return float(top * np.sum((sigma / top) ** spec.p) ** (1.0 / spec.p))


def norm_from_eigenvalues(spec: NormSpec, eigs: np.ndarray) -> np.ndarray:
    """Evaluate the norm of Hermitian matrices given their eigenvalues.

    For a Hermitian argument every kind reduces to a function of the
    absolute eigenvalues (the numerical radius of a Hermitian matrix is its
    spectral radius).  `eigs` has shape (..., n); one value per leading index
    is returned, which is what the vectorized theta sweeps rely on.
    """
    a = np.abs(np.asarray(eigs, dtype=np.float64))
    if spec.kind in ("operator", "numerical_radius"):
        return a.max(axis=-1)
    if spec.kind == "frobenius":
        return np.sqrt(np.sum(a**2, axis=-1))
    if spec.kind == "trace":
        return np.sum(a, axis=-1)
    top = a.max(axis=-1)
    safe = np.where(top > 0.0, top, 1.0)
    out = safe * np.sum((a / safe[..., None]) ** spec.p, axis=-1) ** (1.0 / spec.p)
    return np.where(top > 0.0, out, 0.0)


def eval_norm(spec: NormSpec, t) -> float:
    """Evaluate N(T)."""
    t = as_operator(t)
    if spec.kind == "numerical_radius":
        from . import radii  # late import: radii consumes NormSpec

        return radii.numerical_radius(t).value
    herm_defect = np.abs(t - t.conj().T).max()
    if herm_defect == 0.0:
        return float(norm_from_eigenvalues(spec, np.linalg.eigvalsh(t)))
    return _from_singular_values(spec, np.linalg.svd(t, compute_uv=False))


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str
    detail: str
    lhs: float
    rhs: float


def check_norm_axioms(spec: NormSpec, sample, tol: float = 1e-9) -> list[AxiomViolation]:
    """Check norm axioms and the capability flags on a sample of matrices.

    Verifies positive definiteness, absolute homogeneity, the triangle
    inequality on all pairs, N(A*) = N(A) when `self_adjoint` is claimed and
    N(AB) <= N(A) N(B) when `algebra` is claimed.  Comparisons use absolute
    plus relative tolerance `tol`.  Returns the (possibly empty) violation
    list rather than raising.
    """
    mats = [as_operator(m) for m in sample]
    out: list[AxiomViolation] = []

    def le(lhs, rhs):
        return lhs <= rhs + tol * (1.0 + abs(rhs))

    vals = [eval_norm(spec, m) for m in mats]
    for i, (m, v) in enumerate(zip(mats, vals)):
        if v < 0.0:
            out.append(AxiomViolation("nonnegative", f"sample {i}", v, 0.0))
        nonzero = np.abs(m).max() > 0.0
        if nonzero and v <= 0.0:
            out.append(AxiomViolation("definite", f"sample {i}", v, 0.0))
        if not nonzero and v != 0.0:
            out.append(AxiomViolation("definite", f"sample {i}: N(0) != 0", v, 0.0))
        for lam in (2.0, -3.5, 0.6 + 0.8j):
            lhs = eval_norm(spec, lam * m)
            rhs = abs(lam) * v
            if abs(lhs - rhs) > tol * (1.0 + abs(rhs)):
                out.append(AxiomViolation("homogeneous", f"sample {i}, lambda={lam}", lhs, rhs))
        if spec.self_adjoint:
            adj = eval_norm(spec, m.conj().T)
            if abs(adj - v) > tol * (1.0 + abs(v)):
                out.append(AxiomViolation("self_adjoint", f"sample {i}", adj, v))
    for i, a in enumerate(mats):
        for j, b in enumerate(mats):
            if a.shape != b.shape:
                continue
            if j > i:
                lhs = eval_norm(spec, a + b)
                rhs = vals[i] + vals[j]
                if not le(lhs, rhs):
                    out.append(AxiomViolation("triangle", f"samples ({i},{j})", lhs, rhs))
            if spec.algebra:
                lhs = eval_norm(spec, a @ b)
                rhs = vals[i] * vals[j]
                if not le(lhs, rhs):
                    out.append(AxiomViolation("submultiplicative", f"samples ({i},{j})", lhs, rhs))
    return out
