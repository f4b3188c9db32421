"""Internal vectorized theta-sweep engine.

Every radius of the form sup (or inf) over theta of an objective built from
N(Re(e^{i theta} T)) is evaluated on a fixed 1024-point grid of [0, pi)
followed by golden-section refinement around the best four grid cells down
to a bracket of width 1e-10.  The engine batches the eigenvalue solves of
H(theta) = cos(theta) Re(T) - sin(theta) Im(T) across grid points, brackets,
and unrelated objectives of the same matrix, which is what keeps the fuzz
harness inside its runtime budget on a single core.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import NoConvergenceError, as_operator, imag_part, real_part
from .norms import NormSpec, norm_from_eigenvalues

GRID_POINTS = 1024
REFINE_CELLS = 4
BRACKET_WIDTH = 1e-10
_STEP = math.pi / GRID_POINTS
_GRID_THETAS = np.arange(GRID_POINTS) * _STEP
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
# iterations taking a 2-cell bracket below BRACKET_WIDTH
_GOLDEN_ITERS = math.ceil(math.log((2 * _STEP) / BRACKET_WIDTH) / math.log(1.0 / _INVPHI))


@dataclass(frozen=True)
class ThetaOptimum:
    """Witness of a theta optimization: best value, its angle in [0, pi),
    the grid resolution used and the final refinement bracket width."""

    value: float
    theta_star: float
    grid_points: int
    bracket_width: float


def batched_herm_eigvals(mats: np.ndarray) -> np.ndarray:
    """Eigenvalues of a (..., n, n) stack of Hermitian matrices.

    n = 1 and n = 2 use closed forms; larger sizes go through LAPACK, with
    its (rare) convergence failure mapped onto NoConvergenceError.
    """
    n = mats.shape[-1]
    if n == 1:
        return mats[..., 0, 0].real.reshape(mats.shape[:-2] + (1,))
    if n == 2:
        a = mats[..., 0, 0].real
        d = mats[..., 1, 1].real
        b = np.abs(mats[..., 0, 1])
        mean = 0.5 * (a + d)
        rad = np.hypot(0.5 * (a - d), b)
        return np.stack([mean - rad, mean + rad], axis=-1)
    try:
        return np.linalg.eigvalsh(mats)
    except np.linalg.LinAlgError as exc:
        raise NoConvergenceError(f"eigenvalue solve failed: {exc}") from exc


class PencilSweep:
    """Eigenvalue curves of the pencils attached to one operator T.

    The "re" pencil is H(theta) = cos(theta) Re(T) - sin(theta) Im(T)
    = Re(e^{i theta} T); the "im" pencil is Im(e^{i theta} T)
    = cos(theta) Im(T) + sin(theta) Re(T).  Matrices with a vanishing
    real or imaginary part get analytic curves (cos/sin times the fixed
    spectrum) instead of batched eigenvalue solves.
    """

    def __init__(self, t, grid_override: np.ndarray | None = None):
        self.t = as_operator(t)
        self.n = self.t.shape[0]
        self.re = real_part(self.t)
        self.im = imag_part(self.t)
        self._re_zero = bool(np.abs(self.re).max() == 0.0)
        self._im_zero = bool(np.abs(self.im).max() == 0.0)
        self._fixed_eigs: np.ndarray | None = None
        if self._im_zero:
            self._fixed_eigs = batched_herm_eigvals(self.re[None])[0]
        elif self._re_zero:
            self._fixed_eigs = batched_herm_eigvals(self.im[None])[0]
        self._grids: dict[str, np.ndarray] = {}
        if grid_override is not None:
            self._grids["re"] = grid_override
        self._norm_grids: dict[tuple, np.ndarray] = {}
        self._gen_norms: dict[NormSpec, float] = {}

    def analytic(self) -> bool:
        return self._fixed_eigs is not None

    def _curve_factors(self, thetas: np.ndarray, which: str) -> np.ndarray:
        # scalar factor multiplying the fixed spectrum on the analytic path
        if self._im_zero:
            return np.cos(thetas) if which == "re" else np.sin(thetas)
        return -np.sin(thetas) if which == "re" else np.cos(thetas)

    def matrices_at(self, thetas: np.ndarray, which: str) -> np.ndarray:
        c = np.cos(thetas)[:, None, None]
        s = np.sin(thetas)[:, None, None]
        if which == "re":
            return c * self.re - s * self.im
        return c * self.im + s * self.re

    def eigs_at(self, thetas, which: str = "re") -> np.ndarray:
        thetas = np.atleast_1d(np.asarray(thetas, dtype=np.float64))
        if self._fixed_eigs is not None:
            return self._curve_factors(thetas, which)[:, None] * self._fixed_eigs[None, :]
        return batched_herm_eigvals(self.matrices_at(thetas, which))

    def grid(self, which: str = "re") -> np.ndarray:
        if which not in self._grids:
            self._grids[which] = self.eigs_at(_GRID_THETAS, which)
        return self._grids[which]

    def norm_grid(self, spec: NormSpec, which: str = "re") -> np.ndarray:
        key = (spec, which)
        if key not in self._norm_grids:
            self._norm_grids[key] = norm_from_eigenvalues(spec, self.grid(which))
        return self._norm_grids[key]

    def generator_norm(self, spec: NormSpec) -> float:
        """N(Re T) + N(Im T): a Lipschitz constant for theta -> N(H(theta))."""
        if spec not in self._gen_norms:
            val = float(norm_from_eigenvalues(spec, batched_herm_eigvals(self.re[None]))[0])
            val += float(norm_from_eigenvalues(spec, batched_herm_eigvals(self.im[None]))[0])
            self._gen_norms[spec] = val
        return self._gen_norms[spec]

    def adjoint_pencil(self) -> "PencilSweep":
        """Pencil of T*, sharing this grid via H_{T*}(theta_k) = H_T(-theta_k)."""
        g = self.grid("re")
        flipped = np.roll(g[::-1], 1, axis=0)
        return PencilSweep(self.t.conj().T, grid_override=flipped)


@dataclass
class SweepTask:
    """One theta objective to optimize.

    kind: 'norm'     -> N(H(theta))                                (w_N)
          'dw'       -> sqrt(N^2(H) + c4 cos^4 theta)              (dw_N)
          'dw_im'    -> sqrt(N^2(Im(e^{i th} T)) + c4 sin^4 theta) (imaginary form)
          'refuted'  -> sqrt(N^2(H) + N^2(H(th - pi/2)) + c4 cos^4 theta), minimized
    c4 carries N^4(|T|).
    """

    key: object
    pencil: PencilSweep
    spec: NormSpec
    kind: str = "norm"
    c4: float = 0.0
    minimize: bool = field(default=False)

    def __post_init__(self):
        if self.kind not in ("norm", "dw", "dw_im", "refuted"):
            raise ValueError(f"unknown sweep kind {self.kind!r}")
        if self.kind == "refuted":
            self.minimize = True

    def which(self) -> str:
        return "im" if self.kind == "dw_im" else "re"

    def grid_objective(self) -> np.ndarray:
        ng = self.pencil.norm_grid(self.spec, self.which())
        if self.kind == "norm":
            return ng
        cos4 = np.cos(_GRID_THETAS) ** 4
        if self.kind == "dw":
            return np.sqrt(ng**2 + self.c4 * cos4)
        if self.kind == "dw_im":
            return np.sqrt(ng**2 + self.c4 * np.sin(_GRID_THETAS) ** 4)
        shifted = np.roll(ng, GRID_POINTS // 2)  # theta - pi/2 lands exactly on the grid
        return np.sqrt(ng**2 + shifted**2 + self.c4 * cos4)

    def combine(self, thetas: np.ndarray, nv: np.ndarray, nv_shift: np.ndarray | None) -> np.ndarray:
        if self.kind == "norm":
            return nv
        if self.kind == "dw":
            return np.sqrt(nv**2 + self.c4 * np.cos(thetas) ** 4)
        if self.kind == "dw_im":
            return np.sqrt(nv**2 + self.c4 * np.sin(thetas) ** 4)
        return np.sqrt(nv**2 + nv_shift**2 + self.c4 * np.cos(thetas) ** 4)

    def est_error(self, value: float, ngmax: float) -> float:
        lip = self.pencil.generator_norm(self.spec)
        if self.kind == "norm":
            return max(lip * _STEP / 2.0, BRACKET_WIDTH)
        # Lipschitz constant of the squared objective
        lip_sq = 2.0 * ngmax * lip + 4.0 * self.c4
        if self.kind == "refuted":
            lip_sq += 2.0 * ngmax * lip
        if value <= 0.0:
            return BRACKET_WIDTH
        return max(lip_sq * _STEP / (4.0 * value), BRACKET_WIDTH)


class _BatchEvaluator:
    """Evaluates all brackets' objectives at per-bracket thetas in one pass."""

    def __init__(self, tasks: list[SweepTask], task_of_bracket: np.ndarray):
        self.tasks = tasks
        self.tob = task_of_bracket
        nb = len(task_of_bracket)
        self.refuted = np.array([tasks[t].kind == "refuted" for t in task_of_bracket])
        # rows 0..nb-1 feed every bracket; refuted brackets get a companion
        # row at theta - pi/2 appended after the primary block
        self.companion_of = np.flatnonzero(self.refuted)
        # group row computations by (pencil identity, which)
        self.row_pencil = [tasks[t].pencil for t in task_of_bracket]
        self.row_which = [tasks[t].which() for t in task_of_bracket]
        for b in self.companion_of:
            self.row_pencil.append(tasks[task_of_bracket[b]].pencil)
            self.row_which.append("re")
        self.n = tasks[0].pencil.n
        groups: dict[tuple, list[int]] = {}
        for r, (p, w) in enumerate(zip(self.row_pencil, self.row_which)):
            groups.setdefault((id(p), w), []).append(r)
        self.groups = [
            (self.row_pencil[rows[0]], self.row_which[rows[0]], np.array(rows)) for rows in groups.values()
        ]
        # norm application groups over primary rows, per task spec
        spec_groups: dict[NormSpec, list[int]] = {}
        for b, t in enumerate(task_of_bracket):
            spec_groups.setdefault(tasks[t].spec, []).append(b)
        self.spec_groups = [(s, np.array(bs)) for s, bs in spec_groups.items()]
        shift_groups: dict[NormSpec, list[int]] = {}
        for j, b in enumerate(self.companion_of):
            shift_groups.setdefault(tasks[task_of_bracket[b]].spec, []).append(j)
        self.shift_groups = [(s, np.array(js)) for s, js in shift_groups.items()]
        # evaluation groups per task for the final combine
        combos: dict[int, list[int]] = {}
        for b, t in enumerate(task_of_bracket):
            combos.setdefault(t, []).append(b)
        self.combine_groups = [(tasks[t], np.array(bs)) for t, bs in combos.items()]

    def __call__(self, theta_b: np.ndarray) -> np.ndarray:
        nb = len(self.tob)
        all_thetas = np.concatenate([theta_b, theta_b[self.companion_of] - math.pi / 2.0])
        rows = np.empty((len(all_thetas), self.n))
        numeric_mats = []
        numeric_rows = []
        for pencil, which, ridx in self.groups:
            if pencil.analytic():
                rows[ridx] = pencil.eigs_at(all_thetas[ridx], which)
            else:
                numeric_mats.append(pencil.matrices_at(all_thetas[ridx], which))
                numeric_rows.append(ridx)
        if numeric_mats:
            stacked = np.concatenate(numeric_mats, axis=0)
            eigs = batched_herm_eigvals(stacked)
            pos = 0
            for ridx in numeric_rows:
                rows[ridx] = eigs[pos : pos + len(ridx)]
                pos += len(ridx)
        nv = np.empty(nb)
        for spec, bs in self.spec_groups:
            nv[bs] = norm_from_eigenvalues(spec, rows[bs])
        nv_shift = np.zeros(len(self.companion_of))
        for spec, js in self.shift_groups:
            nv_shift[js] = norm_from_eigenvalues(spec, rows[nb + js])
        shift_full = np.zeros(nb)
        shift_full[self.companion_of] = nv_shift
        out = np.empty(nb)
        for task, bs in self.combine_groups:
            out[bs] = task.combine(theta_b[bs], nv[bs], shift_full[bs] if task.kind == "refuted" else None)
        return out


def sweep_many(tasks: list[SweepTask]) -> dict:
    """Run grid + golden-section refinement for every task; returns
    {task.key: ThetaOptimum}."""
    if not tasks:
        return {}
    n_per = REFINE_CELLS
    brackets_a = []
    brackets_b = []
    task_of_bracket = []
    grid_best_val = []
    grid_best_theta = []
    ngmax = []
    for ti, task in enumerate(tasks):
        obj = task.grid_objective()
        ngmax.append(float(task.pencil.norm_grid(task.spec, task.which()).max()))
        signed = -obj if task.minimize else obj
        order = np.argsort(signed, kind="stable")
        top = order[-n_per:]
        k_best = int(top[-1])
        grid_best_val.append(float(obj[k_best]))
        grid_best_theta.append(float(_GRID_THETAS[k_best]))
        for k in top:
            brackets_a.append(_GRID_THETAS[k] - _STEP)
            brackets_b.append(_GRID_THETAS[k] + _STEP)
            task_of_bracket.append(ti)

    a = np.array(brackets_a)
    b = np.array(brackets_b)
    tob = np.array(task_of_bracket)
    minimize = np.array([tasks[t].minimize for t in tob])
    evaluator = _BatchEvaluator(tasks, tob)

    def signed_eval(th):
        vals = evaluator(th)
        return np.where(minimize, -vals, vals), vals

    x1 = b - _INVPHI * (b - a)
    x2 = a + _INVPHI * (b - a)
    f1, v1 = signed_eval(x1)
    f2, v2 = signed_eval(x2)
    best_val = np.where(minimize, np.minimum(v1, v2), np.maximum(v1, v2))
    best_theta = np.where(np.where(minimize, v1 <= v2, v1 >= v2), x1, x2)

    for _ in range(_GOLDEN_ITERS):
        move_right = f1 < f2
        a = np.where(move_right, x1, a)
        b = np.where(move_right, b, x2)
        x1_new = np.where(move_right, x2, b - _INVPHI * (b - a))
        x2_new = np.where(move_right, a + _INVPHI * (b - a), x1)
        probe = np.where(move_right, x2_new, x1_new)
        fp, vp = signed_eval(probe)
        f1, f2 = np.where(move_right, f2, fp), np.where(move_right, fp, f1)
        x1, x2 = x1_new, x2_new
        better = np.where(minimize, vp < best_val, vp > best_val)
        best_val = np.where(better, vp, best_val)
        best_theta = np.where(better, probe, best_theta)

    width = float(np.max(b - a))
    out = {}
    for ti, task in enumerate(tasks):
        mask = tob == ti
        vals = best_val[mask]
        ths = best_theta[mask]
        if task.minimize:
            j = int(np.argmin(vals))
            v, th = float(vals[j]), float(ths[j])
            if grid_best_val[ti] < v:
                v, th = grid_best_val[ti], grid_best_theta[ti]
        else:
            j = int(np.argmax(vals))
            v, th = float(vals[j]), float(ths[j])
            if grid_best_val[ti] > v:
                v, th = grid_best_val[ti], grid_best_theta[ti]
        out[task.key] = (
            ThetaOptimum(v, th % math.pi, GRID_POINTS, width),
            task.est_error(v, ngmax[ti]),
        )
    return out
