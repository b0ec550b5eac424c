"""Acceptance criteria, one test each; every test reports a PASS/FAIL line in the terminal summary."""

import itertools
import random
import sys
import time
from collections import defaultdict
from contextlib import contextmanager

import numpy as np
import pytest

from conftest import ACCEPTANCE, affine, graph, group
from iwahori import cordial
from iwahori.cordial import is_cordial
from iwahori.newton import (
    DEFAULT_SUPERREGULARITY,
    defect,
    generic_newton_bruteforce,
    generic_newton_qbg,
)
from iwahori.qbg import QuantumBruhatGraph
from iwahori.rootsys import build_root_system
from iwahori.weyl import WeylGroup

ALL_TYPES = ["A1", "A2", "A3", "B2", "C2", "G2", "B3", "C3", "D4", "F4"]


@contextmanager
def criterion(number, title, budget):
    start = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < budget, f"took {elapsed:.1f}s, budget {budget}s"
    except BaseException as exc:
        elapsed = time.perf_counter() - start
        ACCEPTANCE.append(f"FAIL  criterion {number:2d}  {title}  ({elapsed:.1f}s): {str(exc).splitlines()[0]}")
        raise
    ACCEPTANCE.append(f"PASS  criterion {number:2d}  {title}  ({elapsed:.1f}s)")


def _path_weight(path, rank):
    return tuple(sum(e.weight[i] for e in path) for i in range(rank))


def _weights_of_all_minimal_paths(G, u):
    """For every target, the set of weights over all minimal paths from ``u``; own BFS, no cached tables."""
    n, r = G.group.order, G.group.rs.rank
    out_edges = defaultdict(list)
    for e in G.edges:
        out_edges[e.source].append(e)
    dist = {u: 0}
    layer = [u]
    weights = {u: {(0,) * r}}
    while layer:
        nxt = []
        for a in layer:
            for e in out_edges[a]:
                b = e.target
                if b not in dist:
                    dist[b] = dist[a] + 1
                    nxt.append(b)
                    weights[b] = set()
                if dist[b] == dist[a] + 1:
                    weights[b] |= {tuple(x + y for x, y in zip(wt, e.weight)) for wt in weights[a]}
        layer = nxt
    assert len(dist) == n, "graph is not strongly connected"
    return weights


def _lattice_grid(rs, values):
    return [lam for lam in itertools.product(values, repeat=rs.rank) if rs.in_lattice(lam)]


# -- criterion 1 --------------------------------------------------------------------------


def test_criterion_01_a2_minimal_paths():
    with criterion(1, "A2 quantum Bruhat graph: three minimal paths s12 -> s2", 1):
        g = WeylGroup(build_root_system("A2"))
        G = QuantumBruhatGraph(g)
        assert g.order == 6
        u, v = g.parse("12"), g.parse("2")
        paths = list(G.minimal_paths(u, v))
        for p in paths:
            assert len(p) == 3
            assert _path_weight(p, 2) == (1, 1)
        assert len(paths) == 3, (
            f"expected exactly three minimal paths, found {len(paths)}: "
            + "; ".join(" -> ".join([g.name(p[0].source)] + [g.name(e.target) for e in p]) for p in paths)
        )


# -- criterion 2 --------------------------------------------------------------------------


def _exhaustive_same_weight(name):
    G = graph(name)
    for u in range(G.group.order):
        for v, ws in _weights_of_all_minimal_paths(G, u).items():
            assert len(ws) == 1, f"{name}: minimal paths {u} -> {v} carry weights {sorted(ws)}"


def test_criterion_02_same_weight():
    with criterion(2, "minimal paths carry equal weights", 120):
        for name in ["A1", "A2", "C2", "G2", "A3", "B3", "C3"]:
            _exhaustive_same_weight(name)
        rng = random.Random(2024)
        for name in ["D4", "F4"]:
            G = graph(name)
            n = G.group.order
            # whole rows from random sources: at least 10^4 ordered pairs per type
            sources = rng.sample(range(n), -(-10_000 // n))
            checked = 0
            for u in sources:
                for v, ws in _weights_of_all_minimal_paths(G, u).items():
                    assert len(ws) == 1, f"{name}: minimal paths {u} -> {v} carry weights {sorted(ws)}"
                    checked += 1
            assert checked >= 10_000


# -- criteria 3 and 8 ---------------------------------------------------------------------

_GRID_REPORTS: dict[str, list] = {}


def _superregular_grid(name):
    W = affine(name)
    M = DEFAULT_SUPERREGULARITY[name]
    return _lattice_grid(W.rs, range(M + 1, M + 4))


def _grid_reports(name):
    if name not in _GRID_REPORTS:
        W, G = affine(name), graph(name)
        g = W.group
        reports = []
        for lam in _superregular_grid(name):
            for v, w in itertools.product(range(g.order), repeat=2):
                x = W.from_decomposition(v, lam, w)
                # with method "both" the reported nu_x is the brute-force value
                rep = is_cordial(W, x, "both", graph=G, bound=None)
                assert rep.method == "both"
                q = generic_newton_qbg(W, G, x)
                assert q == rep.nu_x, f"{name} v={g.name(v)} lambda={lam} w={g.name(w)}: graph {q} vs oracle {rep.nu_x}"
                reports.append(rep)
        _GRID_REPORTS[name] = reports
    return _GRID_REPORTS[name]


def test_criterion_03_oracle_equivalence():
    with criterion(3, "graph formula equals brute-force generic Newton point", 600):
        total = 0
        for name in ["A1", "A2", "C2", "G2"]:
            assert _superregular_grid(name)
            total += len(_grid_reports(name))
        assert total > 0


def test_criterion_08_families():
    # the superregular grid is shared with criterion 3 and counted in its budget when already computed
    budget = 300 if len(_GRID_REPORTS) == 4 else 900
    with criterion(8, "families are cordial; dominant cordial iff small-height-avoiding", budget):
        for name in ["A1", "A2", "C2", "G2"]:
            g = affine(name).group
            for rep in _grid_reports(name):
                if "spc-eta" in rep.family:
                    assert rep.is_cordial is True, f"{name}: spc-eta element {rep.element} is not cordial"
                d = rep.decomposition
                if d.v == 0:
                    assert rep.is_cordial == g.is_small_height_avoiding(d.w), f"{name}: {rep.element}"
        W, G = affine("A3"), graph("A3")
        g = W.group
        for lam in _lattice_grid(W.rs, range(2, 5)):
            for w in range(g.order):
                rep = is_cordial(W, W.from_decomposition(0, lam, w), "both", graph=G, bound=None)
                assert rep.is_cordial == g.is_small_height_avoiding(w), f"A3 lambda={lam} w={g.name(w)}"


# -- criterion 4 --------------------------------------------------------------------------


def test_criterion_04_antidominant():
    with criterion(4, "antidominant elements: nu = lambda, def = 0, cordial", 300):
        for name in ["A1", "A2", "C2"]:
            W = affine(name)
            g = W.group
            for lam in _lattice_grid(W.rs, range(5)):
                for w in range(g.order):
                    x = W.from_decomposition(g.longest, lam, w)
                    nu = generic_newton_bruteforce(W, x, None)
                    assert nu.labels == lam, f"{name} lambda={lam} w={g.name(w)}: nu_x = {nu}"
                    assert defect(nu, W.kottwitz(x)) == 0
                    if W.decompose(x).v == g.longest:
                        rep = is_cordial(W, x, "oracle", bound=None)
                        assert rep.is_cordial is True, f"{name} lambda={lam} w={g.name(w)}"
                        assert "antidominant" in rep.family


# -- criterion 5 --------------------------------------------------------------------------


def test_criterion_05_sl3_dominant():
    with criterion(5, "A2 dominant chamber: non-cordial iff w = w0", 120):
        W = affine("A2")
        g = W.group
        for lam in _lattice_grid(W.rs, range(2, 9)):
            for w in range(g.order):
                rep = is_cordial(W, W.from_decomposition(0, lam, w), "oracle", bound=None)
                assert (rep.is_cordial is False) == (w == g.longest), f"lambda={lam} w={g.name(w)}"
        # weaker hypothesis: no simple pairing equal to 1, v read off the decomposition
        for lam in _lattice_grid(W.rs, [0, 2, 3, 4, 5, 6]):
            for w in range(g.order):
                x = W.from_decomposition(0, lam, w)
                d = W.decompose(x)
                if d.v != 0:
                    continue
                rep = is_cordial(W, x, "oracle", bound=None)
                assert (rep.is_cordial is False) == (d.w == g.longest), f"lambda={lam} w={g.name(w)}"


# -- criterion 6 --------------------------------------------------------------------------


def test_criterion_06_c2_tables():
    with criterion(6, "C2 classifier tables", 1):
        g = group("C2")
        spc = {g.name(w) for w in range(g.order) if g.is_standard_parabolic_coxeter(w)}
        sha = {g.name(w) for w in range(g.order) if g.is_small_height_avoiding(w)}
        assert spc == {"e", "s1", "s2", "s12", "s21"}
        assert sha == {"e", "s1", "s2", "s12", "s21", "s212"}


# -- criterion 7 --------------------------------------------------------------------------


def test_criterion_07_path_lemmas():
    with criterion(7, "path lemmas in every type up to F4", 180):
        for name in ALL_TYPES:
            G = graph(name)
            g = G.group
            idx = np.arange(g.order)
            ell = g.length[g.mult[g.inv[:, None], idx[None, :]]]
            assert (G.dist <= ell).all(), name
            assert (G.dist[:, 0] == G.down_dist).all(), name
            for e in G.edges:
                if e.up:
                    assert G.down_dist[e.source] <= G.down_dist[e.target] + 1, name
            assert (G.dist[:, g.longest] == g.length[g.longest] - g.length).all(), name


# -- criterion 9 --------------------------------------------------------------------------


def test_criterion_09_length_identities():
    with criterion(9, "translation length and length reformulation", 60):
        for name in ALL_TYPES:
            W = affine(name)
            rs = W.rs
            lams = []
            for k in itertools.count(2):
                lams = _lattice_grid(rs, range(k))
                if len(lams) >= 200:
                    break
            for lam in sorted(lams, key=lambda lam: (sum(lam), lam))[:200]:
                expected = rs.two_rho_pairing(rs.to_coroot_coords(lam))
                assert W.length(W.translation(lam)) == expected, f"{name} lambda={lam}"
        rng = random.Random(9)
        for name in ALL_TYPES:
            W = affine(name)
            g, rs = W.group, W.rs
            if rs.rank > 3:
                continue
            regular = _lattice_grid(rs, range(1, 4))
            if rs.rank <= 2:
                cells = [(v, lam, w) for lam in regular for v, w in itertools.product(range(g.order), repeat=2)]
            else:
                cells = [(rng.randrange(g.order), rng.choice(regular), rng.randrange(g.order))
                         for _ in range(1000)]
            for v, lam, w in cells:
                x = W.from_decomposition(v, lam, w)
                expected = (rs.two_rho_pairing(rs.to_coroot_coords(lam))
                            - g.length[g.mult[g.inv[w], v]] + g.length[v])
                assert W.length(x) == expected, f"{name} v={g.name(v)} lambda={lam} w={g.name(w)}"


# -- criterion 10 -------------------------------------------------------------------------


def test_criterion_10_inequality_never_violated():
    # runs last in this module, after every cordiality evaluation above
    with criterion(10, "cordiality inequality never violated", 60):
        W = affine("C2")
        g = W.group
        for v, w in itertools.product(range(g.order), repeat=2):
            is_cordial(W, W.from_decomposition(v, (2, 2), w), "oracle", bound=None)
        counts = cordial.INEQUALITY_CHECKS
        assert counts["checked"] > 0
        assert counts["violations"] == 0, f"{counts['violations']} of {counts['checked']} checks violated"


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
