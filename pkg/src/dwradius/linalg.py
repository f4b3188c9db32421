"""Core complex-matrix kernels.

Adjoint / Cartesian decomposition / scalar rotation, a cyclic Jacobi
eigensolver for Hermitian matrices, singular values and the operator
absolute value |T| = (T*T)^(1/2), plus the JSON matrix file format
used by the command line tool.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "NotHermitianError",
    "NoConvergenceError",
    "HermEig",
    "as_operator",
    "fro_norm",
    "adjoint",
    "real_part",
    "imag_part",
    "rotate",
    "herm_eig",
    "singular_values",
    "abs_op",
    "matrix_to_json",
    "matrix_from_json",
    "load_matrix",
    "save_matrix",
]

JACOBI_MAX_SWEEPS = 100
JACOBI_OFF_FACTOR = 1e-13
HERMITICITY_TOL = 1e-10


class NotHermitianError(ValueError):
    """Input matrix is not Hermitian within tolerance."""


class NoConvergenceError(RuntimeError):
    """Jacobi sweeps exceeded the sweep limit without reaching the threshold."""


def as_operator(a) -> np.ndarray:
    """Validate *a* as a finite square complex matrix and return it as complex128."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] == 0:
        raise ValueError("expected a nonempty matrix")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix entries must be finite")
    return m


def fro_norm(a) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(np.asarray(a)))


def adjoint(t) -> np.ndarray:
    """Conjugate transpose T*."""
    return as_operator(t).conj().T.copy()


def real_part(t) -> np.ndarray:
    """Hermitian real part Re(T) = (T + T*)/2."""
    t = as_operator(t)
    return (t + t.conj().T) / 2.0


def imag_part(t) -> np.ndarray:
    """Hermitian imaginary part Im(T) = (T - T*)/(2i)."""
    t = as_operator(t)
    return (t - t.conj().T) / 2.0j


def rotate(t, theta: float) -> np.ndarray:
    """Scalar rotation e^(i*theta) * T."""
    return as_operator(t) * complex(math.cos(theta), math.sin(theta))


@dataclass(frozen=True)
class HermEig:
    """Eigendecomposition of a Hermitian matrix.

    eigenvalues are real and ascending; eigenvectors holds the matching
    orthonormal eigenvectors as columns.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def herm_eig(a) -> HermEig:
    """Diagonalize a Hermitian matrix by cyclic Jacobi rotations.

    Sweeps pivot over every off-diagonal entry; each rotation first strips
    the phase of the pivot entry and then applies the classic symmetric
    Schur rotation.  Iteration stops when the off-diagonal Frobenius mass
    drops below 1e-13 * ||A||_F, and raises NoConvergenceError after 100
    sweeps.  Raises NotHermitianError when ||A - A*||_F > 1e-10 * max(1, ||A||_F).
    """
    a = as_operator(a)
    scale = fro_norm(a)
    if fro_norm(a - a.conj().T) > HERMITICITY_TOL * max(1.0, scale):
        raise NotHermitianError("matrix is not Hermitian within 1e-10")
    n = a.shape[0]
    A = (a + a.conj().T) / 2.0
    V = np.eye(n, dtype=np.complex128)
    if n == 1:
        return HermEig(np.array([A[0, 0].real]), V)

    threshold = JACOBI_OFF_FACTOR * scale
    offdiag_mask = ~np.eye(n, dtype=bool)
    for _ in range(JACOBI_MAX_SWEEPS):
        off = math.sqrt(float(np.sum(np.abs(A[offdiag_mask]) ** 2)))
        if off <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                mag = abs(apq)
                if mag <= threshold / (n * n) or mag == 0.0:
                    continue
                phase = apq / mag
                tau = (A[q, q].real - A[p, p].real) / (2.0 * mag)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # unitary pivot G: columns (c, -conj(phase)*s) and (s, conj(phase)*c)
                sp = s * phase
                spc = s * np.conj(phase)
                cp = c * np.conj(phase)
                colp = A[:, p].copy()
                colq = A[:, q].copy()
                A[:, p] = c * colp - spc * colq
                A[:, q] = s * colp + cp * colq
                rowp = A[p, :].copy()
                rowq = A[q, :].copy()
                A[p, :] = c * rowp - sp * rowq
                A[q, :] = s * rowp + (c * phase) * rowq
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - spc * vq
                V[:, q] = s * vp + cp * vq
    else:
        raise NoConvergenceError(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")

    lam = np.real(np.diag(A)).copy()
    order = np.argsort(lam, kind="stable")
    return HermEig(lam[order], V[:, order])


def singular_values(t) -> np.ndarray:
    """Singular values of T, ascending, via the Jacobi eigensolver on T*T."""
    t = as_operator(t)
    gram = t.conj().T @ t
    eig = herm_eig(gram)
    return np.sqrt(np.clip(eig.eigenvalues, 0.0, None))


def abs_op(t) -> np.ndarray:
    """Operator absolute value |T| = (T*T)^(1/2), Hermitian PSD."""
    t = as_operator(t)
    gram = t.conj().T @ t
    eig = herm_eig(gram)
    roots = np.sqrt(np.clip(eig.eigenvalues, 0.0, None))
    m = (eig.eigenvectors * roots) @ eig.eigenvectors.conj().T
    return (m + m.conj().T) / 2.0


def matrix_to_json(t) -> str:
    """Serialize a matrix to the JSON file format {"n", "re", "im"}."""
    t = as_operator(t)
    obj = {"n": int(t.shape[0]), "re": t.real.tolist(), "im": t.imag.tolist()}
    return json.dumps(obj, separators=(",", ":"), sort_keys=True)


def matrix_from_json(obj) -> np.ndarray:
    """Build a matrix from a parsed JSON object; "im" is optional."""
    if not isinstance(obj, dict) or "n" not in obj or "re" not in obj:
        raise ValueError('matrix JSON must contain "n" and "re"')
    n = int(obj["n"])
    re = np.asarray(obj["re"], dtype=np.float64)
    if re.shape != (n, n):
        raise ValueError(f'"re" must be an {n}x{n} array, got shape {re.shape}')
    if "im" in obj and obj["im"] is not None:
        im = np.asarray(obj["im"], dtype=np.float64)
        if im.shape != (n, n):
            raise ValueError(f'"im" must be an {n}x{n} array, got shape {im.shape}')
    else:
        im = np.zeros((n, n))
    return as_operator(re + 1j * im)


def load_matrix(path) -> np.ndarray:
    """Load a matrix from a JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        return matrix_from_json(json.load(fh))


def save_matrix(path, t) -> None:
    """Write a matrix to a JSON file."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(matrix_to_json(t))
        fh.write("\n")
