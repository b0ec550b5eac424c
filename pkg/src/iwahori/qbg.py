"""The quantum Bruhat graph of a finite Weyl group.

Vertices are the elements of ``W``.  For every ``w`` and positive root
``alpha`` there is an edge ``w -> w s_alpha`` when

* ``l(w s_alpha) = l(w) + 1`` (an *up* edge, weight 0), or
* ``l(w s_alpha) = l(w) - <2rho, alpha^vee> + 1`` (a *down* edge, weight ``alpha^vee``).

Construction precomputes all-pairs edge distances and the coroot weight of
minimal paths.  The weight table is filled layer by layer in distance and
every minimal first step is compared, so a pair whose minimal paths carry
different weights is detected rather than silently resolved.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from . import __version__
from .weyl import InvariantViolation, WeylGroup

CACHE_ENV = "IWAHORI_CACHE_DIR"


@dataclass(frozen=True)
class QBGEdge:
    source: int
    target: int
    root: int  # index into positive_roots
    up: bool
    weight: tuple[int, ...]  # coroot coordinates

    @property
    def direction(self) -> str:
        return "up" if self.up else "down"


class QuantumBruhatGraph:
    """Edges, distances and minimal-path weights for one Weyl group."""

    def __init__(self, group: WeylGroup, *, validate: bool = True, _tables=None):
        self.group = group
        rs = group.rs
        self.edges: list[QBGEdge] = []
        zero = (0,) * rs.rank
        for w in range(group.order):
            lw = group.length[w]
            out = []
            for k, r in enumerate(group.reflections.tolist()):
                t = int(group.mult[w, r])
                lt = group.length[t]
                if lt == lw + 1:
                    out.append(QBGEdge(w, t, k, True, zero))
                elif lt == lw - group.two_rho_coroot[k] + 1:
                    out.append(QBGEdge(w, t, k, False, rs.positive_coroots[k]))
            out.sort(key=lambda e: (group.canonical[e.target], e.root))
            self.edges.extend(out)
        self.adjacency: list[list[QBGEdge]] = [[] for _ in range(group.order)]
        for e in self.edges:
            self.adjacency[e.source].append(e)

        if _tables is not None:
            self.dist, self.weight = _tables
        else:
            self.dist = self._distances(lambda e: True)
            self.weight = self._weights(validate)
        self.down_dist = self._down_distance_to_identity()

    # -- construction --------------------------------------------------------------

    def _distances(self, keep) -> np.ndarray:
        n = self.group.order
        src = [e.source for e in self.edges if keep(e)]
        dst = [e.target for e in self.edges if keep(e)]
        adj = csr_matrix((np.ones(len(src)), (src, dst)), shape=(n, n))
        d = shortest_path(adj, method="D", unweighted=True, directed=True)
        if np.isinf(d).any():
            raise InvariantViolation("quantum Bruhat graph is not strongly connected")
        return d.astype(np.int64)

    def _weights(self, validate: bool) -> np.ndarray:
        n, r = self.group.order, self.group.rs.rank
        dist = self.dist
        weight = np.zeros((n, n, r), dtype=np.int32)
        filled = dist == 0
        src = np.array([e.source for e in self.edges])
        dst = np.array([e.target for e in self.edges])
        wts = np.array([e.weight for e in self.edges], dtype=np.int32)
        ds, dt = dist[src], dist[dst]
        for d in range(1, int(dist.max()) + 1):
            # every minimal first step (edge e, target v) at distance d
            e_idx, v = np.nonzero((ds == d) & (dt == d - 1))
            s = src[e_idx]
            cand = weight[dst[e_idx], v] + wts[e_idx]
            pair = s * n + v
            order = np.argsort(pair, kind="stable")
            pair, cand, s, v = pair[order], cand[order], s[order], v[order]
            first = np.ones(len(pair), dtype=bool)
            first[1:] = pair[1:] != pair[:-1]
            ref = cand[first][np.cumsum(first) - 1]
            if validate:
                bad = np.flatnonzero(np.any(cand != ref, axis=1))
                if len(bad):
                    k = bad[0]
                    raise InvariantViolation(
                        f"minimal paths {self.group.name(int(s[k]))} -> "
                        f"{self.group.name(int(v[k]))} carry different weights"
                    )
            weight[s[first], v[first]] = cand[first]
            filled[s[first], v[first]] = True
        if not filled.all():
            raise InvariantViolation("weight table incomplete")
        return weight

    def _down_distance_to_identity(self) -> np.ndarray:
        n = self.group.order
        rev: list[list[int]] = [[] for _ in range(n)]
        for e in self.edges:
            if not e.up:
                rev[e.target].append(e.source)
        out = np.full(n, -1, dtype=np.int64)
        out[0] = 0
        frontier = [0]
        while frontier:
            nxt = []
            for v in frontier:
                for u in rev[v]:
                    if out[u] < 0:
                        out[u] = out[v] + 1
                        nxt.append(u)
            frontier = nxt
        if (out < 0).any():
            raise InvariantViolation("some element has no all-downward path to the identity")
        return out

    # -- queries ----------------------------------------------------------------

    def distance(self, u: int, v: int) -> int:
        return int(self.dist[u, v])

    def min_path_weight(self, u: int, v: int) -> tuple[int, ...]:
        """Coroot weight (coroot coordinates) shared by all minimal paths ``u -> v``."""
        return tuple(int(x) for x in self.weight[u, v])

    def downward_distance(self, w: int) -> int:
        return int(self.down_dist[w])

    def minimal_paths(self, u: int, v: int) -> Iterator[list[QBGEdge]]:
        """Enumerate every path ``u -> v`` with ``distance(u, v)`` edges."""
        if u == v:
            yield []
            return
        d = self.dist[u, v]
        for e in self.adjacency[u]:
            if self.dist[e.target, v] == d - 1:
                for rest in self.minimal_paths(e.target, v):
                    yield [e] + rest

    @property
    def num_up(self) -> int:
        return sum(e.up for e in self.edges)

    @property
    def num_down(self) -> int:
        return len(self.edges) - self.num_up

    # -- export -------------------------------------------------------------------

    def to_dict(self) -> dict:
        g = self.group
        roots = g.rs.positive_roots
        return {
            "vertices": [{"word": [i + 1 for i in g.words[w]], "length": int(g.length[w])}
                         for w in range(g.order)],
            "edges": [
                {"src": e.source, "dst": e.target, "root": list(roots[e.root]),
                 "direction": e.direction, "weight": list(e.weight)}
                for e in self.edges
            ],
        }

    def to_dot(self) -> str:
        g = self.group
        roots = g.rs.positive_roots
        lines = [f'digraph "QBG_{g.rs.name}" {{', "  rankdir=BT;", '  node [shape=plaintext];']
        for lw in range(int(g.length.max()) + 1):
            members = " ".join(f"v{w};" for w in range(g.order) if g.length[w] == lw)
            lines.append(f"  {{ rank=same; {members} }}")
        for w in range(g.order):
            lines.append(f'  v{w} [label="{g.name(w)}"];')
        for e in self.edges:
            color = "blue" if e.up else "red"
            label = ",".join(str(c) for c in roots[e.root])
            lines.append(
                f'  v{e.source} -> v{e.target} [color={color}, dir=forward, label="{label}"];'
            )
        lines.append("}")
        return "\n".join(lines) + "\n"

    def export(self, fmt: str) -> str:
        if fmt == "dot":
            return self.to_dot()
        if fmt == "json":
            return json.dumps(self.to_dict())
        raise ValueError(f"unknown graph format {fmt!r}; expected 'dot' or 'json'")


def export_graph(graph: QuantumBruhatGraph, fmt: str) -> str:
    return graph.export(fmt)


# -- optional on-disk cache ------------------------------------------------------------


def _cache_path(group: WeylGroup, cache_dir: Path) -> Path:
    rs = group.rs
    key = f"{rs.name}-{rs.lattice}-v{__version__}"
    return cache_dir / f"qbg-{key}.json"


def _digest(payload: dict) -> str:
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


def build_qbg(group: WeylGroup, *, cache_dir: str | os.PathLike | None = None) -> QuantumBruhatGraph:
    """Build and validate the graph, reusing a checksummed cache file when one is configured."""
    cache_dir = cache_dir or os.environ.get(CACHE_ENV)
    if not cache_dir:
        return QuantumBruhatGraph(group)
    path = _cache_path(group, Path(cache_dir))
    if path.exists():
        try:
            blob = json.loads(path.read_text())
            payload = blob["payload"]
            if blob["sha256"] == _digest(payload) and payload["cartan"] == [list(r) for r in group.rs.cartan]:
                n, r = group.order, group.rs.rank
                dist = np.array(payload["dist"], dtype=np.int64).reshape(n, n)
                weight = np.array(payload["weight"], dtype=np.int32).reshape(n, n, r)
                return QuantumBruhatGraph(group, _tables=(dist, weight))
        except (ValueError, KeyError, TypeError):
            pass  # corrupt cache: rebuild below
    graph = QuantumBruhatGraph(group)
    payload = {
        "cartan": [list(r) for r in group.rs.cartan],
        "dist": graph.dist.ravel().tolist(),
        "weight": graph.weight.ravel().tolist(),
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps({"sha256": _digest(payload), "payload": payload}))
    tmp.replace(path)
    return graph
