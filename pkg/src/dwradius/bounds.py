"""Inequality catalog for the numerical radius and Davis-Wielandt radius.

Twenty-one bounds relating w(T), w_N(T), dw(T) and dw_N(T), each evaluated
as one or more (lhs <= rhs) links.  Bounds whose hypotheses require an
algebra norm and/or a self-adjoint norm are gated by the NormSpec capability
flags and never evaluated speculatively.  B_REFUTED_UP is a *refuted* upper
bound: its violation on identity-like inputs is the expected outcome.

Evaluation is two-phase so a fuzz run can batch the theta sweeps of many
matrices into single vectorized passes: `MatrixEvaluation.sweep_tasks()`
enumerates deduplicated SweepTasks, and `finish()` turns the sweep results
into BoundReports.  The one-shot helpers (`evaluate_all`, `evaluate_bound`,
`compute_md`, ...) wrap both phases.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._sweeps import PencilSweep, SweepTask, sweep_many
from .linalg import as_operator, fro_norm, imag_part, real_part
from .norms import OPERATOR, NormSpec, norm_from_eigenvalues
from .radii import dw_support_value

__all__ = [
    "TOLERANCE",
    "BoundId",
    "BoundReport",
    "MDQuadruple",
    "EqualityDiagnostics",
    "UnknownBoundError",
    "DiagnosticFailedError",
    "CATALOG",
    "catalog_ids",
    "OperatorContext",
    "MatrixEvaluation",
    "PairEvaluation",
    "NormEvaluation",
    "compute_md",
    "evaluate_bound",
    "evaluate_all",
    "equality_diagnostics",
    "refuted_upper_value",
    "report_to_dict",
    "reports_to_json_lines",
]

TOLERANCE = 1e-8


class UnknownBoundError(ValueError):
    """Requested bound id is not in the catalog."""


class DiagnosticFailedError(RuntimeError):
    """An equality held numerically but its predicted consequence did not."""


@dataclass(frozen=True)
class BoundId:
    id: str
    side: str  # lower_on_dwN | upper_on_dwN | lower_on_wN | sandwich | triangle | refuted_upper


@dataclass(frozen=True)
class BoundReport:
    """Outcome of one bound on one input.

    Chain bounds (sandwich/triangle) check every link; lhs/rhs/margin report
    the minimum-margin link and `satisfied` requires all links to hold.
    """

    bound: BoundId
    lhs: float
    rhs: float
    applicable: bool
    satisfied: bool
    margin: float


@dataclass(frozen=True)
class MDQuadruple:
    m1: float
    m2: float
    d1: float
    d2: float


@dataclass(frozen=True)
class EqualityDiagnostics:
    """Consequence checks for the two radius equalities.

    If dw_N(T) = w_N(T) then T = 0 or w_N(T) = max{N(Re(iT)), N(Re(-iT))};
    if dw_N(T) = N^2(|T|) then T is anti-Hermitian.  `w_branch` records which
    consequence held ("zero" or "rotated_real") when the first equality is
    detected; `anti_hermitian` is set when the second is.
    """

    dw: float
    w: float
    abs_norm_sq: float
    w_equality: bool
    w_branch: str | None
    abs_equality: bool
    anti_hermitian: bool | None


CATALOG: tuple[BoundId, ...] = (
    BoundId("B_NORM_EQUIV", "sandwich"),
    BoundId("B_SANDWICH_DW", "sandwich"),
    BoundId("B_TRI_DW", "triangle"),
    BoundId("B_WN_SANDWICH", "sandwich"),
    BoundId("B_BAK", "lower_on_wN"),
    BoundId("B_SANDWICH_DWN", "sandwich"),
    BoundId("B_LOW", "lower_on_dwN"),
    BoundId("B_REFUTED_UP", "refuted_upper"),
    BoundId("B_THM22", "lower_on_dwN"),
    BoundId("B_COR_EQUAC1", "lower_on_dwN"),
    BoundId("B_COR_ALG", "lower_on_dwN"),
    BoundId("B_EQB1", "lower_on_dwN"),
    BoundId("B_EQB2", "lower_on_dwN"),
    BoundId("B_COR_WNABS", "lower_on_dwN"),
    BoundId("B_COR_WNABS2", "lower_on_dwN"),
    BoundId("B_WN_MAX", "lower_on_wN"),
    BoundId("B_THM28", "lower_on_dwN"),
    BoundId("B_EQP1", "lower_on_dwN"),
    BoundId("B_EQP2", "lower_on_dwN"),
    BoundId("B_THM29", "lower_on_dwN"),
    BoundId("B_TRI_DWN", "triangle"),
)
_BY_ID = {b.id: b for b in CATALOG}

_NEEDS_ALGEBRA = frozenset(
    {
        "B_BAK",
        "B_COR_ALG",
        "B_EQB1",
        "B_EQB2",
        "B_COR_WNABS",
        "B_COR_WNABS2",
        "B_WN_MAX",
        "B_EQP1",
        "B_EQP2",
    }
)
_NEEDS_SELF_ADJOINT = frozenset({"B_BAK", "B_THM29"})
_PAIR_BOUNDS = frozenset({"B_TRI_DW", "B_TRI_DWN"})


def catalog_ids() -> list[str]:
    return [b.id for b in CATALOG]


def _applicable(bound_id: str, spec: NormSpec) -> bool:
    if bound_id in _NEEDS_ALGEBRA and not spec.algebra:
        return False
    if bound_id in _NEEDS_SELF_ADJOINT and not spec.self_adjoint:
        return False
    return True


def _link_ok(lhs: float, rhs: float) -> bool:
    return lhs <= rhs + max(TOLERANCE, TOLERANCE * abs(rhs))


def _report(bid: BoundId, links: list[tuple[float, float]]) -> BoundReport:
    satisfied = all(_link_ok(l, r) for l, r in links)
    margins = [r - l for l, r in links]
    i = int(np.argmin(margins))
    return BoundReport(bid, float(links[i][0]), float(links[i][1]), True, satisfied, float(margins[i]))


def _skipped(bid: BoundId) -> BoundReport:
    return BoundReport(bid, 0.0, 0.0, False, True, 0.0)


class OperatorContext:
    """Lazy per-operator cache: pencils, spectra and classical radii.

    Everything here is norm-independent; the (operator, norm) quantities are
    assembled by MatrixEvaluation on top of these caches.  Derived matrices
    that only matter through their spectrum (|T|, |T|^2+|T*|^2, ...) become
    diagonal pencils so their w_N sweeps use analytic eigencurves.
    """

    def __init__(self, t):
        self.t = as_operator(t)
        self.n = self.t.shape[0]

    @cached_property
    def pencil(self) -> PencilSweep:
        return PencilSweep(self.t)

    @cached_property
    def pencil_adj(self) -> PencilSweep:
        return self.pencil.adjoint_pencil()

    @cached_property
    def sv(self) -> np.ndarray:
        return np.linalg.svd(self.t, compute_uv=False)

    @cached_property
    def opnorm(self) -> float:
        return float(self.sv.max())

    @cached_property
    def eig_re(self) -> np.ndarray:
        return np.linalg.eigvalsh(real_part(self.t))

    @cached_property
    def eig_im(self) -> np.ndarray:
        return np.linalg.eigvalsh(imag_part(self.t))

    @cached_property
    def abs2(self) -> np.ndarray:
        """|T|^2 = T*T."""
        return self.t.conj().T @ self.t

    @cached_property
    def absstar2(self) -> np.ndarray:
        """|T*|^2 = TT*."""
        return self.t @ self.t.conj().T

    @cached_property
    def abs4(self) -> np.ndarray:
        return self.abs2 @ self.abs2

    @cached_property
    def t2(self) -> np.ndarray:
        return self.t @ self.t

    @cached_property
    def eig_s2(self) -> np.ndarray:
        """Spectrum of |T|^2 + |T*|^2."""
        return np.linalg.eigvalsh(self.abs2 + self.absstar2)

    @cached_property
    def eig_s2a(self) -> np.ndarray:
        """Spectrum of |T|^2 + |T*|^2 + 2|T|^4."""
        return np.linalg.eigvalsh(self.abs2 + self.absstar2 + 2.0 * self.abs4)

    @cached_property
    def eig_t2sum(self) -> np.ndarray:
        """Spectrum of T^2 + T*^2 (Hermitian)."""
        return np.linalg.eigvalsh(self.t2 + self.t2.conj().T)

    @cached_property
    def sv_alg(self) -> np.ndarray:
        """Singular values of T^2 + 2|T|^4 (not Hermitian in general)."""
        return np.linalg.svd(self.t2 + 2.0 * self.abs4, compute_uv=False)

    @cached_property
    def pencil_abs(self) -> PencilSweep:
        return PencilSweep(np.diag(self.sv))

    @cached_property
    def pencil_s2(self) -> PencilSweep:
        return PencilSweep(np.diag(self.eig_s2))

    @cached_property
    def pencil_s2a(self) -> PencilSweep:
        return PencilSweep(np.diag(self.eig_s2a))

    @cached_property
    def pencil_t2(self) -> PencilSweep:
        return PencilSweep(self.t2)

    @cached_property
    def dw_classical(self) -> float:
        return dw_support_value(self.t)


def _task_key(pencil: PencilSweep, spec: NormSpec, kind: str):
    return (id(pencil), spec, kind)


def _add_task(tasks: dict, pencil: PencilSweep, spec: NormSpec, kind: str, c4: float = 0.0):
    key = _task_key(pencil, spec, kind)
    if key not in tasks:
        tasks[key] = SweepTask(key, pencil, spec, kind, c4)
    return key


@dataclass
class NormEvaluation:
    """Reports plus the shared quantities they were built from."""

    spec: NormSpec
    reports: list[BoundReport]
    values: dict[str, float]
    md: MDQuadruple


def _md_values(values: dict[str, float]) -> MDQuadruple:
    re_term = values["n_re"] ** 2 + values["n_abs"] ** 4
    w_sq = values["w"] ** 2
    im_sq = values["n_im"] ** 2
    abs4 = values["n_abs"] ** 4
    return MDQuadruple(
        m1=max(re_term, w_sq),
        m2=max(im_sq, abs4),
        d1=abs(re_term - w_sq),
        d2=abs(im_sq - abs4),
    )


class MatrixEvaluation:
    """Single-operator evaluation of the non-pair catalog under many norms."""

    def __init__(self, ctx: OperatorContext, specs: list[NormSpec]):
        self.ctx = ctx
        self.specs = list(specs)

    def sweep_tasks(self) -> dict:
        ctx = self.ctx
        tasks: dict = {}
        _add_task(tasks, ctx.pencil, OPERATOR, "norm")  # classical w
        for spec in self.specs:
            c4 = float(norm_from_eigenvalues(spec, ctx.sv)) ** 4
            _add_task(tasks, ctx.pencil, spec, "norm")
            _add_task(tasks, ctx.pencil, spec, "dw", c4)
            _add_task(tasks, ctx.pencil, spec, "refuted", c4)
            _add_task(tasks, ctx.pencil_abs, spec, "norm")
            if spec.kind == "numerical_radius":
                _add_task(tasks, ctx.pencil_adj, OPERATOR, "norm")
            if spec.algebra:
                _add_task(tasks, ctx.pencil_s2, spec, "norm")
                _add_task(tasks, ctx.pencil_s2a, spec, "norm")
                if spec.self_adjoint:
                    _add_task(tasks, ctx.pencil_t2, spec, "norm")
        return tasks

    def _quantities(self, spec: NormSpec, results: dict) -> dict[str, float]:
        ctx = self.ctx

        def val(pencil, s, kind):
            return float(results[_task_key(pencil, s, kind)][0].value)

        q: dict[str, float] = {
            "w": val(ctx.pencil, spec, "norm"),
            "dw": val(ctx.pencil, spec, "dw"),
            "refuted": val(ctx.pencil, spec, "refuted"),
            "w_abs": val(ctx.pencil_abs, spec, "norm"),
            "n_re": float(norm_from_eigenvalues(spec, ctx.eig_re)),
            "n_im": float(norm_from_eigenvalues(spec, ctx.eig_im)),
            "n_abs": float(norm_from_eigenvalues(spec, ctx.sv)),
            "cl_w": val(ctx.pencil, OPERATOR, "norm"),
            "cl_dw": ctx.dw_classical,
            "opnorm": ctx.opnorm,
        }
        if spec.kind == "numerical_radius":
            # N(.) itself is the classical numerical radius
            q["n_t"] = q["cl_w"]
            q["n_tstar"] = val(ctx.pencil_adj, OPERATOR, "norm")
        else:
            q["n_t"] = float(norm_from_eigenvalues(spec, ctx.sv))
            q["n_tstar"] = q["n_t"]  # T and T* share singular values
        if spec.algebra:
            q["n_s2"] = float(norm_from_eigenvalues(spec, ctx.eig_s2))
            q["n_t2sum"] = float(norm_from_eigenvalues(spec, ctx.eig_t2sum))
            q["n_alg"] = float(norm_from_eigenvalues(spec, ctx.sv_alg))
            q["w_s2"] = val(ctx.pencil_s2, spec, "norm")
            q["w_s2a"] = val(ctx.pencil_s2a, spec, "norm")
            if spec.self_adjoint:
                q["w_t2"] = val(ctx.pencil_t2, spec, "norm")
        return q

    @staticmethod
    def _links(bound_id: str, q: dict[str, float], md: MDQuadruple) -> list[tuple[float, float]]:
        w, dw = q.get("w", 0.0), q.get("dw", 0.0)
        n_abs4 = q["n_abs"] ** 4
        md_tail = (md.d1 + md.d2) + 2.0 * abs(md.m1 - md.m2)
        if bound_id == "B_NORM_EQUIV":
            return [(0.5 * q["opnorm"], q["cl_w"]), (q["cl_w"], q["opnorm"])]
        if bound_id == "B_SANDWICH_DW":
            upper = math.sqrt(q["cl_w"] ** 2 + q["opnorm"] ** 4)
            return [(max(q["cl_w"], q["opnorm"] ** 2), q["cl_dw"]), (q["cl_dw"], upper)]
        if bound_id == "B_WN_SANDWICH":
            return [
                (0.5 * max(q["n_t"], q["n_tstar"]), w),
                (w, 0.5 * (q["n_t"] + q["n_tstar"])),
            ]
        if bound_id == "B_BAK":
            return [(0.5 * math.sqrt(abs(q["n_s2"] - 2.0 * q["w_t2"])), w)]
        if bound_id == "B_SANDWICH_DWN":
            upper = math.sqrt(w**2 + q["w_abs"] ** 4)
            return [(max(w, q["w_abs"] ** 2), dw), (dw, upper)]
        if bound_id == "B_LOW":
            return [(math.sqrt(0.25 * q["n_t"] ** 2 + 0.125 * n_abs4), dw)]
        if bound_id == "B_REFUTED_UP":
            return [(dw, q["refuted"])]
        if bound_id == "B_THM22":
            gap = abs(q["n_re"] ** 2 + n_abs4 - q["n_im"] ** 2)
            return [(0.5 * math.sqrt(q["n_t"] ** 2 + 2.0 * n_abs4 + 2.0 * gap), dw)]
        if bound_id == "B_COR_EQUAC1":
            return [(0.5 * math.sqrt(q["n_t"] ** 2 + 2.0 * n_abs4), dw)]
        if bound_id == "B_COR_ALG":
            return [(0.5 * math.sqrt(q["n_alg"]), dw)]
        if bound_id == "B_EQB1":
            gap = abs(q["n_re"] ** 2 + n_abs4 - q["n_im"] ** 2)
            return [(0.5 * math.sqrt(q["n_s2"] + 2.0 * n_abs4 + 2.0 * gap), dw)]
        if bound_id == "B_EQB2":
            gap = abs(q["n_re"] ** 2 + n_abs4 - q["n_im"] ** 2)
            return [(0.5 * math.sqrt(q["n_t2sum"] + 2.0 * n_abs4 + 2.0 * gap), dw)]
        if bound_id == "B_COR_WNABS":
            return [(0.5 * math.sqrt(q["w_s2"] + 2.0 * q["w_abs"] ** 4), dw)]
        if bound_id == "B_COR_WNABS2":
            return [(0.5 * math.sqrt(q["w_s2a"]), dw)]
        if bound_id == "B_WN_MAX":
            lhs = 0.5 * max(math.sqrt(q["n_s2"]), math.sqrt(q["n_t2sum"]))
            return [(lhs, w)]
        if bound_id == "B_THM28":
            return [(0.5 * math.sqrt(0.75 * q["n_t"] ** 2 + 2.0 * n_abs4 + md_tail), dw)]
        if bound_id == "B_EQP1":
            return [(0.5 * math.sqrt(0.5 * q["n_s2"] + w**2 + 2.0 * n_abs4 + md_tail), dw)]
        if bound_id == "B_EQP2":
            return [(0.5 * math.sqrt(0.5 * q["n_t2sum"] + w**2 + 2.0 * n_abs4 + md_tail), dw)]
        if bound_id == "B_THM29":
            return [(0.5 * math.sqrt(1.5 * w**2 + 2.0 * n_abs4 + md_tail), dw)]
        raise UnknownBoundError(bound_id)

    def finish(self, results: dict) -> dict[str, NormEvaluation]:
        out: dict[str, NormEvaluation] = {}
        for spec in self.specs:
            q = self._quantities(spec, results)
            md = _md_values(q)
            reports = []
            for bid in CATALOG:
                if bid.id in _PAIR_BOUNDS:
                    continue
                if not _applicable(bid.id, spec):
                    reports.append(_skipped(bid))
                    continue
                reports.append(_report(bid, self._links(bid.id, q, md)))
            out[spec.label()] = NormEvaluation(spec, reports, q, md)
        return out


class PairEvaluation:
    """Triangle bounds for a pair (T, S): dw of T, S and T+S per norm."""

    def __init__(self, ctx_t: OperatorContext, ctx_s: OperatorContext, specs: list[NormSpec]):
        self.ctx_t = ctx_t
        self.ctx_s = ctx_s
        self.ctx_sum = OperatorContext(ctx_t.t + ctx_s.t)
        self.specs = list(specs)

    def sweep_tasks(self) -> dict:
        tasks: dict = {}
        for spec in self.specs:
            for ctx in (self.ctx_t, self.ctx_s, self.ctx_sum):
                c4 = float(norm_from_eigenvalues(spec, ctx.sv)) ** 4
                _add_task(tasks, ctx.pencil, spec, "dw", c4)
        return tasks

    @cached_property
    def _lam_abs4(self) -> float:
        """Operator norm of |T|^4 + |S|^4 (largest eigenvalue; the sum is PSD)."""
        return float(np.linalg.eigvalsh(self.ctx_t.abs4 + self.ctx_s.abs4)[-1])

    def finish(self, results: dict) -> dict[str, list[BoundReport]]:
        out: dict[str, list[BoundReport]] = {}
        for spec in self.specs:
            dw_t = float(results[_task_key(self.ctx_t.pencil, spec, "dw")][0].value)
            dw_s = float(results[_task_key(self.ctx_s.pencil, spec, "dw")][0].value)
            dw_sum = float(results[_task_key(self.ctx_sum.pencil, spec, "dw")][0].value)
            abs4_t = float(norm_from_eigenvalues(spec, self.ctx_t.sv)) ** 4
            abs4_s = float(norm_from_eigenvalues(spec, self.ctx_s.sv)) ** 4
            ssq = dw_t**2 + dw_s**2

            mid = math.sqrt(2.0 * ssq + 6.0 * (abs4_t + abs4_s))
            links_n = [
                (dw_sum, mid),
                (mid, 2.0 * math.sqrt(2.0) * math.sqrt(ssq)),
                (2.0 * math.sqrt(2.0) * math.sqrt(ssq), 2.0 * math.sqrt(2.0) * (dw_t + dw_s)),
            ]

            cl_t = self.ctx_t.dw_classical
            cl_s = self.ctx_s.dw_classical
            cl_sum = self.ctx_sum.dw_classical
            cl_mid = math.sqrt(2.0 * (cl_t**2 + cl_s**2) + 6.0 * self._lam_abs4)
            links_cl = [
                (cl_sum, cl_mid),
                (cl_mid, 2.0 * math.sqrt(2.0) * (cl_t + cl_s)),
            ]
            out[spec.label()] = [
                _report(_BY_ID["B_TRI_DW"], links_cl),
                _report(_BY_ID["B_TRI_DWN"], links_n),
            ]
        return out


def _merge_reports(
    per_norm: dict[str, NormEvaluation], pair: dict[str, list[BoundReport]] | None
) -> None:
    """Splice triangle reports into each NormEvaluation, in catalog order."""
    for label, ev in per_norm.items():
        by_id = {r.bound.id: r for r in ev.reports}
        if pair is not None:
            for r in pair[label]:
                by_id[r.bound.id] = r
        else:
            for bid in _PAIR_BOUNDS:
                by_id[bid] = _skipped(_BY_ID[bid])
        ev.reports = [by_id[b.id] for b in CATALOG]


def evaluate_matrix(t, specs: list[NormSpec], s=None) -> dict[str, NormEvaluation]:
    """Evaluate the full catalog for one operator (and optional pair partner)
    under several norms, sharing every theta sweep between them."""
    ctx = OperatorContext(t)
    ev = MatrixEvaluation(ctx, specs)
    tasks = ev.sweep_tasks()
    pair_ev = None
    if s is not None:
        pair_ev = PairEvaluation(ctx, OperatorContext(s), specs)
        tasks.update(pair_ev.sweep_tasks())
    results = sweep_many(list(tasks.values()))
    per_norm = ev.finish(results)
    _merge_reports(per_norm, pair_ev.finish(results) if pair_ev is not None else None)
    return per_norm


def evaluate_all(t, spec: NormSpec = OPERATOR, s=None) -> list[BoundReport]:
    """One BoundReport per catalog entry; triangle bounds need `s`."""
    return evaluate_matrix(t, [spec], s=s)[spec.label()].reports


def evaluate_bound(bound_id, t, spec: NormSpec = OPERATOR, s=None) -> BoundReport:
    """Evaluate a single catalog bound.  `s` is required for (and only for)
    the triangle-family bounds."""
    key = bound_id.id if isinstance(bound_id, BoundId) else str(bound_id)
    if key not in _BY_ID:
        raise UnknownBoundError(key)
    if (key in _PAIR_BOUNDS) != (s is not None):
        need = "requires" if key in _PAIR_BOUNDS else "does not take"
        raise ValueError(f"{key} {need} a second operator")
    reports = evaluate_all(t, spec, s=s)
    return next(r for r in reports if r.bound.id == key)


def compute_md(t, spec: NormSpec = OPERATOR) -> MDQuadruple:
    """The quadruple (m1, m2, d1, d2) built from N(Re T), N(Im T), N(|T|)
    and w_N(T)."""
    ctx = OperatorContext(t)
    tasks: dict = {}
    wkey = _add_task(tasks, ctx.pencil, spec, "norm")
    results = sweep_many(list(tasks.values()))
    values = {
        "w": float(results[wkey][0].value),
        "n_re": float(norm_from_eigenvalues(spec, ctx.eig_re)),
        "n_im": float(norm_from_eigenvalues(spec, ctx.eig_im)),
        "n_abs": float(norm_from_eigenvalues(spec, ctx.sv)),
    }
    return _md_values(values)


def refuted_upper_value(t, spec: NormSpec = OPERATOR) -> float:
    """inf over theta of sqrt(N^2(Re(e^{i th}T)) + N^2(Im(e^{i th}T))
    + cos^4(theta) N^4(|T|)) — the refuted upper bound's right-hand side."""
    ctx = OperatorContext(t)
    if np.abs(ctx.t).max() == 0.0:
        return 0.0
    c4 = float(norm_from_eigenvalues(spec, ctx.sv)) ** 4
    tasks: dict = {}
    key = _add_task(tasks, ctx.pencil, spec, "refuted", c4)
    results = sweep_many(list(tasks.values()))
    return float(results[key][0].value)


def equality_diagnostics(t, spec: NormSpec = OPERATOR, tol: float = 1e-8) -> EqualityDiagnostics:
    """Check the consequences of dw_N(T) = w_N(T) and dw_N(T) = N^2(|T|).

    Raises DiagnosticFailedError when an equality holds within `tol` but the
    predicted consequence fails — that flags either a numerical problem or a
    counterexample worth triage.
    """
    ctx = OperatorContext(t)
    c4 = float(norm_from_eigenvalues(spec, ctx.sv)) ** 4
    tasks: dict = {}
    wkey = _add_task(tasks, ctx.pencil, spec, "norm")
    dwkey = _add_task(tasks, ctx.pencil, spec, "dw", c4)
    results = sweep_many(list(tasks.values()))
    w = float(results[wkey][0].value)
    dw = float(results[dwkey][0].value)
    abs_sq = float(norm_from_eigenvalues(spec, ctx.sv)) ** 2

    scale = max(1.0, dw)
    w_equality = abs(dw - w) <= tol * scale
    abs_equality = abs(dw - abs_sq) <= tol * scale

    w_branch: str | None = None
    if w_equality:
        if fro_norm(ctx.t) <= tol:
            w_branch = "zero"
        else:
            rotated = max(
                float(norm_from_eigenvalues(spec, np.linalg.eigvalsh(real_part(1j * ctx.t)))),
                float(norm_from_eigenvalues(spec, np.linalg.eigvalsh(real_part(-1j * ctx.t)))),
            )
            if abs(w - rotated) <= tol * max(1.0, w):
                w_branch = "rotated_real"
            else:
                raise DiagnosticFailedError(
                    f"dw_N = w_N = {w:.12g} but T != 0 and w_N != max rotated real part {rotated:.12g}"
                )

    anti_hermitian: bool | None = None
    if abs_equality:
        defect = fro_norm(ctx.t + ctx.t.conj().T)
        anti_hermitian = defect <= tol * max(1.0, fro_norm(ctx.t))
        if not anti_hermitian:
            raise DiagnosticFailedError(
                f"dw_N = N^2(|T|) = {abs_sq:.12g} but T + T* has Frobenius norm {defect:.3g}"
            )

    return EqualityDiagnostics(dw, w, abs_sq, w_equality, w_branch, abs_equality, anti_hermitian)


def report_to_dict(report: BoundReport) -> dict:
    return {
        "bound": {"id": report.bound.id, "side": report.bound.side},
        "lhs": report.lhs,
        "rhs": report.rhs,
        "applicable": report.applicable,
        "satisfied": report.satisfied,
        "margin": report.margin,
    }


def reports_to_json_lines(reports) -> str:
    return "\n".join(json.dumps(report_to_dict(r), sort_keys=True) for r in reports)
