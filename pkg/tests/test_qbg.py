import itertools
import json
import random
import re
from pathlib import Path

import numpy as np
import pytest

from conftest import graph, group
from iwahori.qbg import CACHE_ENV, QuantumBruhatGraph, build_qbg, export_graph

DATA = Path(__file__).parent / "data"

EDGE_COUNTS = {"A1": 2, "A2": 15, "C2": 22, "G2": 38, "A3": 104, "B3": 240, "C3": 238}


def _perm_edges(n: int) -> set[tuple[tuple, tuple, bool]]:
    """Quantum Bruhat graph of S_n from permutations: transpositions (i j), <2rho, alpha^vee> = 2(j - i)."""

    def inversions(p):
        return sum(p[a] > p[b] for a, b in itertools.combinations(range(n), 2))

    out = set()
    for p in itertools.permutations(range(n)):
        lp = inversions(p)
        for i, j in itertools.combinations(range(n), 2):
            q = list(p)
            q[i], q[j] = q[j], q[i]
            q = tuple(q)
            lq = inversions(q)
            if lq == lp + 1:
                out.add((p, q, True))
            elif lq == lp - 2 * (j - i) + 1:
                out.add((p, q, False))
    return out


def _as_perm(g, w, n):
    # right action of simple transpositions on one-line notation
    p = list(range(n))
    for i in g.words[w]:
        p[i], p[i + 1] = p[i + 1], p[i]
    return tuple(p)


@pytest.mark.parametrize("name,count", sorted(EDGE_COUNTS.items()))
def test_edge_counts(name, count):
    assert len(graph(name).edges) == count


@pytest.mark.parametrize("name,n", [("A2", 3), ("A3", 4)])
def test_edges_match_permutation_model(name, n):
    g, G = group(name), graph(name)
    ours = {(_as_perm(g, e.source, n), _as_perm(g, e.target, n), e.up) for e in G.edges}
    assert ours == _perm_edges(n)


def test_a2_edges_by_direction():
    G = graph("A2")
    assert (G.num_up, G.num_down) == (8, 7)
    g = G.group
    theta = [e for e in G.edges if not e.up and e.root == 2]
    assert [(g.name(e.source), g.name(e.target), e.weight) for e in theta] == [("s121", "e", (1, 1))]


def test_a2_minimal_paths_s12_to_s2():
    G = graph("A2")
    g = G.group
    u, v = g.parse("12"), g.parse("2")
    paths = list(G.minimal_paths(u, v))
    assert G.distance(u, v) == 3
    assert len(paths) == 4
    for p in paths:
        assert len(p) == 3
        assert tuple(map(sum, zip(*(e.weight for e in p)))) == (1, 1)
    assert G.min_path_weight(u, v) == (1, 1)


@pytest.mark.parametrize("name", ["A1", "A2", "C2", "G2", "A3", "B3", "C3"])
def test_equal_weights_by_path_enumeration(name):
    G = graph(name)
    n = G.group.order
    pairs = itertools.product(range(n), repeat=2) if n <= 12 else (
        (random.Random(n).randrange(n), random.Random(n + k).randrange(n)) for k in range(150)
    )
    for u, v in pairs:
        weights = {tuple(map(sum, zip(*(e.weight for e in p)))) or (0,) * G.group.rs.rank
                   for p in G.minimal_paths(u, v)}
        assert weights == {G.min_path_weight(u, v)}


def test_graph_is_strongly_connected_with_known_diameters():
    assert int(graph("A2").dist.max()) == 3
    assert int(graph("A1").dist.max()) == 1


def test_weight_mismatch_is_detected(monkeypatch):
    G = QuantumBruhatGraph(group("A2"))
    # corrupt one down edge weight and rebuild the table
    k = next(i for i, e in enumerate(G.edges) if not e.up)
    e = G.edges[k]
    G.edges[k] = type(e)(e.source, e.target, e.root, e.up, (5, 5))
    with pytest.raises(AssertionError, match="different weights"):
        G._weights(True)


@pytest.mark.parametrize("name", ["A2", "C2", "G2", "A3", "B3", "C3", "D4"])
def test_path_lemmas(name):
    G = graph(name)
    g = G.group
    idx = np.arange(g.order)
    ell = g.length[g.mult[g.inv[:, None], idx[None, :]]]
    assert (G.dist <= ell).all()
    assert (G.dist[:, 0] == G.down_dist).all()
    assert (G.dist[:, g.longest] == g.length[g.longest] - g.length).all()
    for e in G.edges:
        if e.up:
            assert G.down_dist[e.source] <= G.down_dist[e.target] + 1


def test_golden_dot():
    assert graph("A2").to_dot() == (DATA / "qbg_A2.dot").read_text()


def test_golden_dot_edges_satisfy_definition():
    g = group("A2")
    roots = g.rs.positive_roots
    text = (DATA / "qbg_A2.dot").read_text()
    names = dict(re.findall(r'(v\d+) \[label="(\w+)"\]', text))
    edges = re.findall(r'(v\d+) -> (v\d+) \[color=(\w+), dir=forward, label="([\d,]+)"\]', text)
    assert len(names) == 6 and len(edges) == 15
    for a, b, color, label in edges:
        src, dst = g.parse(names[a]), g.parse(names[b])
        root = tuple(int(c) for c in label.split(","))
        k = roots.index(root)
        assert g.multiply(src, g.reflections[k]) == dst
        drop = g.length[src] - g.length[dst]
        assert (color == "blue") == (drop == -1)
        if color == "red":
            assert drop == g.two_rho_coroot[k] - 1


def test_json_export():
    data = json.loads(export_graph(graph("A2"), "json"))
    assert len(data["vertices"]) == 6 and len(data["edges"]) == 15
    assert data["vertices"][5] == {"word": [1, 2, 1], "length": 3}
    down = [e for e in data["edges"] if e["direction"] == "down" and e["root"] == [1, 1]]
    assert down == [{"src": 5, "dst": 0, "root": [1, 1], "direction": "down", "weight": [1, 1]}]
    with pytest.raises(ValueError):
        export_graph(graph("A2"), "png")


def test_cache_round_trip_and_corruption(tmp_path, monkeypatch):
    g = group("C2")
    first = build_qbg(g, cache_dir=tmp_path)
    files = list(tmp_path.glob("qbg-C2-sc-*.json"))
    assert len(files) == 1
    again = build_qbg(g, cache_dir=tmp_path)
    assert (again.dist == first.dist).all() and (again.weight == first.weight).all()
    blob = json.loads(files[0].read_text())
    blob["payload"]["dist"][1] += 1
    files[0].write_text(json.dumps(blob))
    rebuilt = build_qbg(g, cache_dir=tmp_path)
    assert (rebuilt.dist == first.dist).all()
    monkeypatch.setenv(CACHE_ENV, str(tmp_path / "env"))
    build_qbg(g)
    assert list((tmp_path / "env").glob("*.json"))
