"""Deterministic fuzz harness for the bound catalog.

Matrices are generated over nine structural classes from per-(class, dim)
Philox streams, every catalog bound is evaluated under every configured norm
(consecutive samples 2k and 2k+1 form the pairs for the triangle bounds),
and the results aggregate into per-(bound, class, norm) cells with violation
counts, minimum margins and sharpness witnesses.  Identical configs produce
identical reports regardless of chunking or worker count: each work unit
derives its own RNG stream and the merge is associative.
"""
from __future__ import annotations

import hashlib
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bounds import (
    CATALOG,
    MatrixEvaluation,
    OperatorContext,
    PairEvaluation,
)
from .linalg import NoConvergenceError, matrix_to_json
from .norms import FROBENIUS, NUMERICAL_RADIUS, OPERATOR, TRACE, NormSpec, schatten
from ._sweeps import sweep_many

__all__ = [
    "CLASSES",
    "DEFAULT_NORMS",
    "FuzzConfig",
    "CellStats",
    "FuzzReport",
    "FuzzAborted",
    "SharpnessWitness",
    "gen_matrix",
    "run_fuzz",
    "sharpness_scan",
    "matrix_digest",
    "worker_count",
]

CLASSES = (
    "ginibre",
    "hermitian",
    "anti_hermitian",
    "normal",
    "unitary",
    "nilpotent",
    "projection",
    "rank1",
    "diagonal",
)

DEFAULT_NORMS = (OPERATOR, FROBENIUS, TRACE, schatten(3.0), NUMERICAL_RADIUS)

_CHUNK = 8  # even, so triangle pairs (2k, 2k+1) never straddle a chunk


def _complex_gauss(rng: np.random.Generator, *shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def _haar_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    q, r = np.linalg.qr(_complex_gauss(rng, dim, dim))
    d = np.diagonal(r).copy()
    d[d == 0.0] = 1.0
    return q * (d / np.abs(d))


def gen_matrix(matrix_class: str, dim: int, rng: np.random.Generator) -> np.ndarray:
    """Draw one matrix of the given structural class.

    Class predicates (hermitian A=A*, unitary U*U=I, projection P²=P=P*,
    nilpotent strictly upper triangular, ...) hold to 1e-12 or better; the
    draw sequence is fixed per class, so a given generator state always
    yields the same matrix.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if matrix_class == "ginibre":
        return _complex_gauss(rng, dim, dim)
    if matrix_class == "hermitian":
        g = _complex_gauss(rng, dim, dim)
        return (g + g.conj().T) / 2.0
    if matrix_class == "anti_hermitian":
        g = _complex_gauss(rng, dim, dim)
        return (g - g.conj().T) / 2.0
    if matrix_class == "normal":
        u = _haar_unitary(rng, dim)
        lam = _complex_gauss(rng, dim)
        return (u * lam) @ u.conj().T
    if matrix_class == "unitary":
        return _haar_unitary(rng, dim)
    if matrix_class == "nilpotent":
        return np.triu(_complex_gauss(rng, dim, dim), 1)
    if matrix_class == "projection":
        u = _haar_unitary(rng, dim)
        k = int(rng.integers(1, dim + 1))
        p = u[:, :k] @ u[:, :k].conj().T
        return (p + p.conj().T) / 2.0
    if matrix_class == "rank1":
        x = _complex_gauss(rng, dim)
        y = _complex_gauss(rng, dim)
        return np.outer(x, y.conj())
    if matrix_class == "diagonal":
        return np.diag(_complex_gauss(rng, dim))
    raise ValueError(f"unknown matrix class {matrix_class!r}")


def matrix_digest(t: np.ndarray) -> str:
    """sha256 of the canonical JSON form of the matrix."""
    return hashlib.sha256(matrix_to_json(t).encode()).hexdigest()


@dataclass(frozen=True)
class FuzzConfig:
    seed: int = 42
    dims: tuple[int, ...] = (2, 3, 5)
    classes: tuple[str, ...] = CLASSES
    norms: tuple[NormSpec, ...] = DEFAULT_NORMS
    count_per_cell: int = 200
    violation_tolerance: float | None = None
    sharpness_threshold: float = 1e-3

    def __post_init__(self):
        dims = tuple(sorted(set(int(d) for d in self.dims)))
        if not dims or any(d < 1 for d in dims):
            raise ValueError("dims must be a non-empty list of integers >= 1")
        unknown = set(self.classes) - set(CLASSES)
        if unknown:
            raise ValueError(f"unknown classes: {sorted(unknown)}")
        classes = tuple(c for c in CLASSES if c in set(self.classes))
        if not classes:
            raise ValueError("classes must be non-empty")
        norms = tuple(self.norms)
        if not norms:
            raise ValueError("norms must be non-empty")
        if self.count_per_cell < 1:
            raise ValueError("count_per_cell must be >= 1")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "classes", classes)
        object.__setattr__(self, "norms", norms)

    def to_json_obj(self) -> dict:
        return {
            "seed": self.seed,
            "dims": list(self.dims),
            "classes": list(self.classes),
            "norms": [s.label() for s in self.norms],
            "count_per_cell": self.count_per_cell,
            "violation_tolerance": self.violation_tolerance,
            "sharpness_threshold": self.sharpness_threshold,
        }


@dataclass
class CellStats:
    """Aggregate for one (bound, class, norm) cell.  Witnesses are stored as
    (dim, sample index, digest, margin) so merges stay order-independent."""

    checked: int = 0
    violations: int = 0
    min_margin: float = math.inf
    witnesses: list[tuple[int, int, str, float]] = field(default_factory=list)

    def add(self, other: "CellStats") -> None:
        self.checked += other.checked
        self.violations += other.violations
        self.min_margin = min(self.min_margin, other.min_margin)
        self.witnesses.extend(other.witnesses)


@dataclass(frozen=True)
class SharpnessWitness:
    bound: str
    matrix_class: str
    norm: str
    dim: int
    digest: str
    margin: float


class FuzzAborted(RuntimeError):
    """Raised when more than 1% of samples failed to converge; carries the
    partial report."""

    def __init__(self, message: str, report: "FuzzReport"):
        super().__init__(message)
        self.report = report


_SIDE = {b.id: b.side for b in CATALOG}
_CATALOG_POS = {b.id: i for i, b in enumerate(CATALOG)}


@dataclass
class FuzzReport:
    config: FuzzConfig
    cells: dict[tuple[str, str, str], CellStats]
    total_samples: int
    errors: int
    chain_failures: int
    elapsed: float
    sharp_matrices: list[dict]

    def _cell_order(self):
        classes = {c: i for i, c in enumerate(self.config.classes)}
        norms = {s.label(): i for i, s in enumerate(self.config.norms)}
        return sorted(
            self.cells.items(),
            key=lambda kv: (_CATALOG_POS[kv[0][0]], classes[kv[0][1]], norms[kv[0][2]]),
        )

    def violations_by_bound(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for (bound, _, _), st in self.cells.items():
            out[bound] = out.get(bound, 0) + st.violations
        return out

    def unexpected_violations(self) -> int:
        return sum(v for b, v in self.violations_by_bound().items() if b != "B_REFUTED_UP")

    def refuted_violations(self) -> int:
        return self.violations_by_bound().get("B_REFUTED_UP", 0)

    def to_json_obj(self) -> dict:
        cells = []
        for (bound, cls, norm), st in self._cell_order():
            witnesses = [
                [w[2], w[3]] for w in sorted(st.witnesses, key=lambda w: (w[0], w[1]))
            ]
            cells.append(
                {
                    "bound": bound,
                    "side": _SIDE[bound],
                    "class": cls,
                    "norm": norm,
                    "checked": st.checked,
                    "violations": st.violations,
                    "min_margin": None if math.isinf(st.min_margin) else st.min_margin,
                    "witnesses": witnesses,
                }
            )
        return {
            "config": self.config.to_json_obj(),
            "cells": cells,
            "totals": {
                "samples": self.total_samples,
                "checked": sum(st.checked for st in self.cells.values()),
                "violations": sum(st.violations for st in self.cells.values()),
                "unexpected_violations": self.unexpected_violations(),
                "refuted_violations": self.refuted_violations(),
                "errors": self.errors,
                "chain_failures": self.chain_failures,
            },
            "sharp_matrices": self.sharp_matrices,
        }

    def to_json(self) -> str:
        # elapsed is intentionally omitted: identical configs must serialize
        # to identical bytes
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))

    def to_csv(self) -> str:
        lines = ["bound,side,class,norm,checked,violations,min_margin,witnesses"]
        for (bound, cls, norm), st in self._cell_order():
            mm = "" if math.isinf(st.min_margin) else repr(st.min_margin)
            lines.append(
                f"{bound},{_SIDE[bound]},{cls},{norm},{st.checked},{st.violations},{mm},{len(st.witnesses)}"
            )
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        t = self.to_json_obj()["totals"]
        lines = [
            f"fuzz: seed={self.config.seed} dims={list(self.config.dims)} "
            f"classes={len(self.config.classes)} norms={[s.label() for s in self.config.norms]} "
            f"count={self.config.count_per_cell}",
            f"samples={t['samples']} checks={t['checked']} elapsed={self.elapsed:.1f}s",
            f"violations={t['violations']} (unexpected={t['unexpected_violations']}, "
            f"refuted-upper={t['refuted_violations']}) errors={t['errors']} "
            f"chain-failures={t['chain_failures']}",
        ]
        violated = [
            (k, st) for k, st in self._cell_order() if st.violations and k[0] != "B_REFUTED_UP"
        ]
        for (bound, cls, norm), st in violated:
            lines.append(
                f"  VIOLATED {bound} class={cls} norm={norm}: {st.violations}/{st.checked} "
                f"min_margin={st.min_margin:.3e}"
            )
        sharp = sorted(
            ((k, st) for k, st in self._cell_order() if st.witnesses),
            key=lambda kv: min(w[3] for w in kv[1].witnesses),
        )[:8]
        for (bound, cls, norm), st in sharp:
            lines.append(
                f"  sharp {bound} class={cls} norm={norm}: {len(st.witnesses)} witnesses, "
                f"min_margin={st.min_margin:.3e}"
            )
        return "\n".join(lines) + "\n"


def worker_count() -> int:
    """Worker count: DWRADIUS_THREADS overrides (0 = auto)."""
    raw = os.environ.get("DWRADIUS_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = os.cpu_count() or 1
    return n


def _evaluate_chunk(mats, idxs, norms):
    ctxs = {i: OperatorContext(mats[i]) for i in idxs}
    evs = {i: MatrixEvaluation(ctxs[i], list(norms)) for i in idxs}
    tasks: dict = {}
    pairs = []
    for i in idxs:
        tasks.update(evs[i].sweep_tasks())
    for i in idxs:
        if i % 2 == 0 and (i + 1) in ctxs:
            pe = PairEvaluation(ctxs[i], ctxs[i + 1], list(norms))
            pairs.append((i, pe))
            tasks.update(pe.sweep_tasks())
    results = sweep_many(list(tasks.values()))
    sample_out = {i: evs[i].finish(results) for i in idxs}
    pair_out = {i: pe.finish(results) for i, pe in pairs}
    return sample_out, pair_out, 0


def _evaluate_singly(mats, idxs, norms):
    """Per-sample fallback when a batched chunk hits NoConvergence."""
    sample_out: dict = {}
    pair_out: dict = {}
    failed = 0
    for i in idxs:
        try:
            s, _, _ = _evaluate_chunk(mats, [i], norms)
            sample_out.update(s)
        except NoConvergenceError:
            failed += 1
    for i in idxs:
        if i % 2 == 0 and (i + 1) in sample_out and i in sample_out:
            try:
                ctx_t, ctx_s = OperatorContext(mats[i]), OperatorContext(mats[i + 1])
                pe = PairEvaluation(ctx_t, ctx_s, list(norms))
                results = sweep_many(list(pe.sweep_tasks().values()))
                pair_out[i] = pe.finish(results)
            except NoConvergenceError:
                failed += 1
    return sample_out, pair_out, failed


def _run_unit(args):
    (seed, cls, ci, dim, di, count, norms, vtol, sharp_thr) = args
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, ci, di])))
    mats = [gen_matrix(cls, dim, rng) for _ in range(count)]
    cells: dict[tuple[str, str], CellStats] = {}
    errors = 0
    chain_failures = 0
    sharp: list[tuple] = []
    digests: dict[int, str] = {}

    def digest(i: int) -> str:
        if i not in digests:
            digests[i] = matrix_digest(mats[i])
        return digests[i]

    def violated(report) -> bool:
        if vtol is None:
            return not report.satisfied
        return report.margin < -max(vtol, vtol * abs(report.rhs))

    def tally(bound_id, label, report, sample_idx):
        cell = cells.setdefault((bound_id, label), CellStats())
        cell.checked += 1
        cell.min_margin = min(cell.min_margin, report.margin)
        if violated(report):
            cell.violations += 1
        if abs(report.margin) < sharp_thr:
            cell.witnesses.append((di, sample_idx, digest(sample_idx), report.margin))
            sharp.append((abs(report.margin), bound_id, label, sample_idx, report.margin))

    for base in range(0, count, _CHUNK):
        idxs = list(range(base, min(base + _CHUNK, count)))
        try:
            sample_out, pair_out, failed = _evaluate_chunk(mats, idxs, norms)
        except NoConvergenceError:
            sample_out, pair_out, failed = _evaluate_singly(mats, idxs, norms)
        errors += failed
        for i, per_norm in sorted(sample_out.items()):
            for spec in norms:
                ev = per_norm[spec.label()]
                by_id = {}
                for r in ev.reports:
                    if r.applicable:
                        tally(r.bound.id, spec.label(), r, i)
                    by_id[r.bound.id] = r
                if not (
                    by_id["B_THM22"].lhs >= by_id["B_COR_EQUAC1"].lhs >= by_id["B_LOW"].lhs
                ):
                    chain_failures += 1
        for i, per_norm in sorted(pair_out.items()):
            for spec in norms:
                for r in per_norm[spec.label()]:
                    tally(r.bound.id, spec.label(), r, i)

    sharp.sort()
    sharp_top = [
        {
            "bound": b,
            "class": cls,
            "norm": lbl,
            "dim": dim,
            "digest": digest(i),
            "margin": m,
            "matrix": json.loads(matrix_to_json(mats[i])),
        }
        for (_, b, lbl, i, m) in sharp[:10]
    ]
    return (cls, di, cells, errors, chain_failures, count, sharp_top)


def run_fuzz(cfg: FuzzConfig | None = None) -> FuzzReport:
    """Evaluate the catalog on every generated sample and aggregate.

    Work splits into (class, dim) units; the norms share each unit's
    matrices and theta sweeps.  Raises FuzzAborted (with the partial report
    attached) when more than 1% of samples fail to converge.
    """
    cfg = cfg if cfg is not None else FuzzConfig()
    start = time.perf_counter()
    units = [
        (cfg.seed, cls, ci, dim, di, cfg.count_per_cell, cfg.norms,
         cfg.violation_tolerance, cfg.sharpness_threshold)
        for ci, cls in enumerate(cfg.classes)
        for di, dim in enumerate(cfg.dims)
    ]
    workers = min(worker_count(), len(units))
    if workers <= 1:
        raw = [_run_unit(u) for u in units]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            raw = list(pool.map(_run_unit, units))

    cells: dict[tuple[str, str, str], CellStats] = {}
    errors = 0
    chain_failures = 0
    total = 0
    sharp_all: list[tuple] = []
    for cls, di, unit_cells, unit_errors, unit_chain, count, sharp_top in raw:
        total += count
        errors += unit_errors
        chain_failures += unit_chain
        for (bound, label), st in unit_cells.items():
            cells.setdefault((bound, cls, label), CellStats()).add(st)
        for s in sharp_top:
            sharp_all.append(
                (abs(s["margin"]), s["bound"], s["class"], s["norm"], s["dim"], s["digest"], s)
            )
    sharp_all.sort(key=lambda x: x[:6])
    report = FuzzReport(
        config=cfg,
        cells=cells,
        total_samples=total,
        errors=errors,
        chain_failures=chain_failures,
        elapsed=time.perf_counter() - start,
        sharp_matrices=[x[6] for x in sharp_all[:10]],
    )
    if total and errors > 0.01 * total:
        raise FuzzAborted(
            f"{errors} of {total} samples failed to converge (> 1%)", report
        )
    return report


def sharpness_scan(cfg: FuzzConfig | None = None) -> list[SharpnessWitness]:
    """All (bound, matrix) near-equality witnesses, sorted by margin."""
    report = run_fuzz(cfg)
    out = []
    for (bound, cls, norm), st in report.cells.items():
        for di, _, dg, margin in st.witnesses:
            out.append(SharpnessWitness(bound, cls, norm, report.config.dims[di], dg, margin))
    out.sort(key=lambda w: (w.margin, w.bound, w.matrix_class, w.norm, w.dim, w.digest))
    return out
