"""Cordiality of affine Weyl group elements and the families known to be cordial.

``x`` is cordial when ``l(x) - l(eta(x)) = <2rho, nu_x> - def(b_x)``; the left
side never exceeds the right, and any evaluation that finds otherwise raises
:class:`InvariantViolation`.  Two methods are available:

``oracle``
    brute-force ``nu_x`` over the Bruhat lower set, then the defining equality;
``qbg``
    for superregular ``lambda``, compare ``d(w^{-1} v, v)`` in the quantum
    Bruhat graph with ``l(v^{-1} w v)``.

``both`` runs the oracle always and the graph route whenever ``lambda`` is
superregular, and insists that they agree.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .affine import DEFAULT_LENGTH_BOUND, AffineElement, AffineWeylGroup, DominantDecomposition
from .newton import (
    INDETERMINATE,
    NewtonPoint,
    defect,
    generic_newton_bruteforce,
    generic_newton_qbg,
    is_superregular,
    superregularity_threshold,
)
from .qbg import QuantumBruhatGraph, build_qbg
from .rootsys import build_root_system
from .weyl import InvariantViolation, WeylGroup

METHODS = ("oracle", "qbg", "both")
FAMILIES = ("antidominant", "spc-eta", "dominant-sha")
CSV_COLUMNS = (
    "type", "lattice", "v", "w", "lambda", "length_x", "eta", "length_eta", "nu_x",
    "defect", "lhs", "rhs", "cordial", "families", "method", "M", "error",
)

Verdict = Union[bool, str]

# running tally of every lhs <= rhs check made in this process
INEQUALITY_CHECKS: Counter = Counter()


@dataclass(frozen=True)
class CordialityReport:
    element: AffineElement
    decomposition: DominantDecomposition
    is_cordial: Verdict
    method: str
    lhs: int
    rhs: Union[Fraction, str]
    family: tuple[str, ...]
    superregular: bool
    nu_x: NewtonPoint | None = None
    defect: Union[int, str, None] = None
    reason: str = ""


def _check_inequality(W: AffineWeylGroup, x: AffineElement, lhs: int, rhs: Fraction) -> None:
    INEQUALITY_CHECKS["checked"] += 1
    if lhs > rhs:
        INEQUALITY_CHECKS["violations"] += 1
        raise InvariantViolation(
            f"l(x) - l(eta) = {lhs} exceeds <2rho, nu_x> - def = {rhs} for {W.format(x)}"
        )


def classify_family(W: AffineWeylGroup, x: AffineElement) -> tuple[str, ...]:
    """Families among ``antidominant``, ``spc-eta``, ``dominant-sha`` containing ``x``; may overlap."""
    g = W.group
    d = W.decompose(x)
    out = []
    if d.v == g.longest:
        out.append("antidominant")
    if g.is_standard_parabolic_coxeter(W.eta(x)):
        out.append("spc-eta")
    if d.v == 0 and g.is_small_height_avoiding(d.w):
        out.append("dominant-sha")
    return tuple(out)


def _oracle(W, x, lhs, bound):
    nu = generic_newton_bruteforce(W, x, bound)
    dfc = defect(nu, W.kottwitz(x))
    if dfc == INDETERMINATE:
        return INDETERMINATE, nu, dfc, INDETERMINATE
    rhs = nu.two_rho() - dfc
    _check_inequality(W, x, lhs, rhs)
    return lhs == rhs, nu, dfc, rhs


def _graph_route(W, graph, x, lhs, M, force):
    g = W.group
    d = W.decompose(x)
    nu = generic_newton_qbg(W, graph, x, M, force=force)
    dfc = defect(nu, W.kottwitz(x))
    if dfc == INDETERMINATE:
        return INDETERMINATE, nu, dfc, INDETERMINATE
    rhs = nu.two_rho() - dfc
    _check_inequality(W, x, lhs, rhs)
    start = int(g.mult[g.inv[d.w], d.v])
    verdict = graph.distance(start, d.v) == int(g.length[W.eta(x)])
    if verdict != (lhs == rhs):
        raise InvariantViolation(
            f"path criterion and defining equality disagree for {W.format(x)}"
        )
    return verdict, nu, dfc, rhs


def is_cordial(
    W: AffineWeylGroup,
    x: AffineElement,
    method: str = "both",
    *,
    graph: QuantumBruhatGraph | None = None,
    M: int | None = None,
    force: bool = False,
    bound: int | None = DEFAULT_LENGTH_BOUND,
) -> CordialityReport:
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")
    g = W.group
    d = W.decompose(x)
    if M is None:
        M = superregularity_threshold(W.rs)
    sr = is_superregular(d.lam, M)
    lhs = W.length(x) - int(g.length[W.eta(x)])
    family = classify_family(W, x)

    if method == "qbg" or (method == "both" and sr):
        graph = graph or build_qbg(g)
        if method == "qbg" and not sr and not force:
            # raises with the failing simple root
            generic_newton_qbg(W, graph, x, M)
        q = _graph_route(W, graph, x, lhs, M, force or method == "both")
    if method in ("oracle", "both"):
        o = _oracle(W, x, lhs, bound)

    if method == "qbg":
        verdict, nu, dfc, rhs = q
        used = "qbg"
    elif method == "oracle" or not sr:
        verdict, nu, dfc, rhs = o
        used = "oracle"
    else:
        verdict, nu, dfc, rhs = o
        if (q[0], q[1]) != (o[0], o[1]):
            raise InvariantViolation(
                f"oracle and graph route disagree for {W.format(x)}: "
                f"nu {o[1]} vs {q[1]}, cordial {o[0]} vs {q[0]}"
            )
        used = "both"

    reason = "defect undetermined for this Newton point" if verdict == INDETERMINATE else ""
    return CordialityReport(x, d, verdict, used, lhs, rhs, family, sr, nu, dfc, reason)


# -- survey -----------------------------------------------------------------------------


@dataclass
class SurveySpec:
    type: str
    lattice: str = "sc"
    lambdas: Sequence[Sequence[int]] = ()  # Dynkin labels
    v: Sequence[int] | None = None  # None means all of W
    w: Sequence[int] | None = None
    method: str = "both"
    M: int | None = None
    force: bool = False
    bound: int | None = DEFAULT_LENGTH_BOUND
    jobs: int = 1


@dataclass
class SurveyResult:
    rows: list[dict]
    summary: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(self.rows)
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"rows": self.rows, "summary": self.summary}, indent=2)


def _fmt_vec(vec) -> str:
    return ",".join(str(c) for c in vec)


def _row(W: AffineWeylGroup, graph, spec: SurveySpec, v: int, w: int, lam: tuple) -> dict:
    g, rs = W.group, W.rs
    M = spec.M if spec.M is not None else superregularity_threshold(rs)
    row = dict.fromkeys(CSV_COLUMNS, "")
    row.update({
        "type": rs.name, "lattice": rs.lattice, "v": g.name(v), "w": g.name(w),
        "lambda": _fmt_vec(rs.to_coroot_coords(lam)), "method": spec.method, "M": M,
    })
    try:
        x = W.from_decomposition(v, lam, w)
        rep = is_cordial(W, x, spec.method, graph=graph, M=M, force=spec.force, bound=spec.bound)
        eta = W.eta(x)
        row.update({
            "length_x": W.length(x),
            "eta": g.name(eta),
            "length_eta": int(g.length[eta]),
            "nu_x": _fmt_vec(rep.nu_x.coroot_coords),
            "defect": rep.defect,
            "lhs": rep.lhs,
            "rhs": str(rep.rhs),
            "cordial": rep.is_cordial if isinstance(rep.is_cordial, str) else str(rep.is_cordial).lower(),
            "families": ";".join(rep.family) or "none",
            "method": rep.method,
        })
    except InvariantViolation:
        raise
    except (ValueError, ArithmeticError) as exc:
        row["cordial"] = "error"
        row["error"] = str(exc)
    return row


def _survey_chunk(args):
    spec, cells = args
    W = AffineWeylGroup(WeylGroup(build_root_system(spec.type, spec.lattice)))
    graph = build_qbg(W.group) if spec.method != "oracle" else None
    return [_row(W, graph, spec, v, w, lam) for v, w, lam in cells]


def survey(spec: SurveySpec) -> SurveyResult:
    """Evaluate every ``(v, w, lambda)`` of the grid.

    Rows are ordered by ``v``, ``w`` (each by length, then reduced word) and then ``lambda``.
    """
    rs = build_root_system(spec.type, spec.lattice)
    g = WeylGroup(rs)
    vs = sorted(range(g.order) if spec.v is None else set(spec.v))
    ws = sorted(range(g.order) if spec.w is None else set(spec.w))
    lams = sorted(tuple(int(c) for c in lam) for lam in spec.lambdas)
    for lam in lams:
        if len(lam) != rs.rank or min(lam) < 0:
            raise ValueError(f"lambda labels {lam} must be {rs.rank} non-negative integers")
    cells = list(itertools.product(vs, ws, lams))

    if spec.jobs > 1 and len(cells) > 1:
        size = -(-len(cells) // spec.jobs)
        chunks = [(spec, cells[i:i + size]) for i in range(0, len(cells), size)]
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            rows = [r for part in pool.map(_survey_chunk, chunks) for r in part]
    else:
        rows = _survey_chunk((spec, cells))

    verdicts = Counter(r["cordial"] for r in rows)
    fam = Counter(f for r in rows for f in r["families"].split(";") if r["families"])
    summary = {
        "rows": len(rows),
        "cordial": verdicts.get("true", 0),
        "non_cordial": verdicts.get("false", 0),
        "indeterminate": verdicts.get(INDETERMINATE, 0),
        "errors": verdicts.get("error", 0),
        "families": {f: fam.get(f, 0) for f in FAMILIES + ("none",)},
    }
    return SurveyResult(rows, summary)
