"""Self-check suite: runs the structural properties of every module for one type."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .affine import AffineWeylGroup
from .cordial import is_cordial
from .newton import generic_newton_bruteforce, generic_newton_qbg, superregularity_threshold
from .qbg import QuantumBruhatGraph, build_qbg
from .rootsys import build_root_system, validate_cartan
from .weyl import InvariantViolation, WeylGroup

EXHAUSTIVE_ORDER = 12  # W x W sweeps up to this group order, sampling beyond
ORACLE_ORDER = 24  # brute-force Newton points only up to this group order
SAMPLES = 1000

C2_TABLES = {
    "standard parabolic Coxeter": ["e", "s1", "s2", "s12", "s21"],
    "small-height-avoiding": ["e", "s1", "s2", "s12", "s21", "s212"],
}


@dataclass(frozen=True)
class PropertyResult:
    name: str
    status: str  # pass | fail | skipped
    detail: str = ""

    def line(self) -> str:
        return f"{self.status.upper():7s} {self.name}" + (f": {self.detail}" if self.detail else "")


class _Context:
    def __init__(self, type_name: str, lattice: str, seed: int):
        self.rs = build_root_system(type_name, lattice)
        self.group = WeylGroup(self.rs)
        self.W = AffineWeylGroup(self.group)
        self.rng = random.Random(seed)
        self._graph: QuantumBruhatGraph | None = None

    @property
    def graph(self) -> QuantumBruhatGraph:
        if self._graph is None:
            self._graph = build_qbg(self.group)
        return self._graph

    def pairs(self):
        n = self.group.order
        if n <= EXHAUSTIVE_ORDER:
            return list(itertools.product(range(n), repeat=2))
        return [(self.rng.randrange(n), self.rng.randrange(n)) for _ in range(SAMPLES)]

    def dominant_lattice_lambdas(self, low: int, count: int, span: int = 3) -> list[tuple]:
        """The ``count`` lattice points with all labels in ``low .. low+span``, smallest ``<2rho, .>`` first."""
        rs = self.rs
        cands = [lam for lam in itertools.product(range(low, low + span + 1), repeat=rs.rank)
                 if rs.in_lattice(lam)]
        cands.sort(key=lambda lam: (rs.two_rho_pairing(rs.to_coroot_coords(lam)), lam))
        return cands[:count]


def _fail_first(bad, describe) -> tuple[bool, str]:
    bad = list(bad)
    if bad:
        return False, f"{len(bad)} failures, first: {describe(bad[0])}"
    return True, ""


# -- properties ------------------------------------------------------------------------


def p_cartan(ctx):
    validate_cartan(ctx.rs.cartan)
    g = ctx.group
    ok = int(g.length.max()) == ctx.rs.num_positive == len(g.reflections)
    return ok, f"{ctx.rs.num_positive} positive roots, |W| = {g.order}"


def p_reduced_words(ctx):
    g = ctx.group
    bad = [w for w in range(g.order)
           if len(g.words[w]) != g.length[w] or g.length[g.inv[w]] != g.length[w]
           or g.from_word(g.words[w]) != w]
    return _fail_first(bad, g.name)


def p_equal_weights(ctx):
    # the constructor compares the weights of all minimal first steps for every pair
    QuantumBruhatGraph(ctx.group, validate=True)
    return True, f"{ctx.group.order ** 2} ordered pairs"


def p_distance_bound(ctx):
    g, d = ctx.group, ctx.graph.dist
    ell = g.length[g.mult[g.inv[:, None], np.arange(g.order)[None, :]]]
    bad = np.argwhere(d > ell)
    return _fail_first(bad.tolist(), lambda p: f"{g.name(p[0])} -> {g.name(p[1])}")


def p_distance_to_identity(ctx):
    g, G = ctx.group, ctx.graph
    bad = np.flatnonzero(G.dist[:, 0] != G.down_dist)
    return _fail_first(bad.tolist(), g.name)


def p_downward_cover_step(ctx):
    g, G = ctx.group, ctx.graph
    bad = [(e.source, e.target) for e in G.edges
           if e.up and G.down_dist[e.source] > G.down_dist[e.target] + 1]
    return _fail_first(bad, lambda p: f"{g.name(p[0])} < {g.name(p[1])}")


def p_distance_to_longest(ctx):
    g, G = ctx.group, ctx.graph
    w0 = g.longest
    bad = np.flatnonzero(G.dist[:, w0] != g.length[w0] - g.length)
    return _fail_first(bad.tolist(), g.name)


def p_coxeter_classifier(ctx):
    # raises if the distinct-letter test and reflection length disagree
    g = ctx.group
    n = sum(g.is_standard_parabolic_coxeter(w) for w in range(g.order))
    return True, f"{n} standard parabolic Coxeter elements"


def p_c2_tables(ctx):
    g = ctx.group
    if ctx.rs.cartan != build_root_system("C2").cartan:
        return None, "only defined for C2"
    got = {
        "standard parabolic Coxeter": [g.name(w) for w in range(g.order) if g.is_standard_parabolic_coxeter(w)],
        "small-height-avoiding": [g.name(w) for w in range(g.order) if g.is_small_height_avoiding(w)],
    }
    return got == C2_TABLES, "; ".join(f"{k}: {{{', '.join(v)}}}" for k, v in got.items())


def p_translation_length(ctx):
    rs, W = ctx.rs, ctx.W
    bad = []
    for _ in range(200):
        lam = tuple(ctx.rng.randrange(0, 6) for _ in range(rs.rank))
        if not rs.in_lattice(lam):
            continue
        if W.length(W.translation(lam)) != rs.two_rho_pairing(rs.to_coroot_coords(lam)):
            bad.append(lam)
    return _fail_first(bad, str)


def p_length_reformulation(ctx):
    rs, g, W = ctx.rs, ctx.group, ctx.W
    lams = ctx.dominant_lattice_lambdas(1, 2)
    bad = []
    for lam in lams:
        two_rho = rs.two_rho_pairing(rs.to_coroot_coords(lam))
        for v, w in ctx.pairs():
            x = W.from_decomposition(v, lam, w)
            if W.length(x) != two_rho - g.length[g.mult[g.inv[w], v]] + g.length[v]:
                bad.append((v, lam, w))
    return _fail_first(bad, lambda t: f"v={g.name(t[0])} lambda={t[1]} w={g.name(t[2])}")


def p_affine_length_basics(ctx):
    W, g, rng = ctx.W, ctx.group, ctx.rng
    bad = []
    for _ in range(SAMPLES // 5):
        xs = []
        for _ in range(2):
            mu = tuple(rng.randrange(-3, 4) for _ in range(ctx.rs.rank))
            while not ctx.rs.in_lattice(mu):
                mu = tuple(rng.randrange(-3, 4) for _ in range(ctx.rs.rank))
            xs.append(W.element(labels=mu, w=rng.randrange(g.order)))
        x, y = xs
        word, _ = W.reduced_word(x)
        if (W.length(x) != W.length(W.inv(x)) or W.length(W.mul(x, y)) > W.length(x) + W.length(y)
                or len(word) != W.length(x)):
            bad.append(x)
    return _fail_first(bad, W.format)


def _superregular_elements(ctx):
    M = superregularity_threshold(ctx.rs)
    lam = ctx.dominant_lattice_lambdas(M + 1, 1)[0]
    return [(v, lam, w) for v, w in ctx.pairs()], M


def p_oracle_agreement(ctx):
    if ctx.group.order > ORACLE_ORDER:
        return None, f"|W| = {ctx.group.order} is above {ORACLE_ORDER}"
    W = ctx.W
    cells, M = _superregular_elements(ctx)
    bad = []
    for v, lam, w in cells:
        x = W.from_decomposition(v, lam, w)
        if generic_newton_bruteforce(W, x, None) != generic_newton_qbg(W, ctx.graph, x, M):
            bad.append(x)
    return _fail_first(bad, W.format)


def p_cordial_families(ctx):
    if ctx.group.order > ORACLE_ORDER:
        return None, f"|W| = {ctx.group.order} is above {ORACLE_ORDER}"
    W, g = ctx.W, ctx.group
    cells, M = _superregular_elements(ctx)
    bad = []
    for v, lam, w in cells:
        x = W.from_decomposition(v, lam, w)
        rep = is_cordial(W, x, "both", graph=ctx.graph, M=M, bound=None)
        if "spc-eta" in rep.family and rep.is_cordial is not True:
            bad.append((x, "spc-eta but not cordial"))
        if v == 0 and rep.is_cordial != g.is_small_height_avoiding(w):
            bad.append((x, "dominant: cordial differs from small-height-avoiding"))
    return _fail_first(bad, lambda t: f"{W.format(t[0])} ({t[1]})")


def p_antidominant(ctx):
    if ctx.group.order > ORACLE_ORDER:
        return None, f"|W| = {ctx.group.order} is above {ORACLE_ORDER}"
    W, g, rs = ctx.W, ctx.group, ctx.rs
    lams = [lam for lam in itertools.product(range(3), repeat=rs.rank) if rs.in_lattice(lam)]
    bad = []
    for lam in lams:
        for w in range(g.order):
            x = W.from_decomposition(g.longest, lam, w)
            rep = is_cordial(W, x, "oracle", bound=None)
            if tuple(rep.nu_x.labels) != lam or rep.defect != 0:
                bad.append(x)
            # for singular lambda only some t^(w0 lambda) w lie in the antidominant chamber
            elif rep.decomposition.v == g.longest and rep.is_cordial is not True:
                bad.append(x)
    return _fail_first(bad, W.format)


PROPERTIES: list[tuple[str, Callable]] = [
    ("finite-type Cartan matrix", p_cartan),
    ("reduced words", p_reduced_words),
    ("equal weights of minimal paths", p_equal_weights),
    ("graph distance at most l(u^-1 v)", p_distance_bound),
    ("distance to identity is downward distance", p_distance_to_identity),
    ("downward distance grows by at most one along covers", p_downward_cover_step),
    ("distance to w0 is l(w0) - l(u)", p_distance_to_longest),
    ("Coxeter classifier agrees with reflection length", p_coxeter_classifier),
    ("C2 classifier tables", p_c2_tables),
    ("translation length <2rho, lambda>", p_translation_length),
    ("length of t^(v lambda) w for regular lambda", p_length_reformulation),
    ("affine length basics", p_affine_length_basics),
    ("graph formula equals brute-force nu_x", p_oracle_agreement),
    ("cordial families on superregular grid", p_cordial_families),
    ("antidominant elements are cordial", p_antidominant),
]


def verify_suite(type_name: str, lattice: str = "sc", seed: int = 0) -> list[PropertyResult]:
    """Run every property; deterministic for a fixed seed."""
    ctx = _Context(type_name, lattice, seed)
    out = []
    for name, fn in PROPERTIES:
        try:
            ok, detail = fn(ctx)
        except InvariantViolation as exc:
            ok, detail = False, f"invariant violation: {exc}"
        status = "skipped" if ok is None else ("pass" if ok else "fail")
        out.append(PropertyResult(name, status, detail))
    return out
