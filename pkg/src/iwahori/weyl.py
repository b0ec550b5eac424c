"""Finite Weyl groups as fully enumerated, indexed tables.

Every element is an integer index into ``WeylGroup.elements``; index 0 is the
identity and indices are sorted by (length, reduced word).  The canonical
form of ``w`` is ``w(rho^vee)`` in Dynkin labels, which is regular and so
determines ``w``.  Products, inverses, lengths and the action on roots are
table lookups after construction.

:class:`WeylElement` is a thin hashable handle used at the public surface.
"""

from __future__ import annotations

from collections import deque
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .rootsys import RootSystem, build_root_system


class WeylGroupError(ValueError):
    pass


class InvariantViolation(AssertionError):
    """An internal consistency check failed; indicates a bug, never bad input."""


class WeylElement:
    """An element of a :class:`WeylGroup`, addressed by index."""

    __slots__ = ("group", "index")

    def __init__(self, group: "WeylGroup", index: int):
        self.group = group
        self.index = int(index)

    def _check(self, other: "WeylElement"):
        if not isinstance(other, WeylElement) or other.group is not self.group:
            raise WeylGroupError("cannot combine elements of different Weyl groups")

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        self._check(other)
        return WeylElement(self.group, self.group.mult[self.index, other.index])

    def inverse(self) -> "WeylElement":
        return WeylElement(self.group, self.group.inv[self.index])

    @property
    def length(self) -> int:
        return int(self.group.length[self.index])

    @property
    def word(self) -> tuple[int, ...]:
        return self.group.words[self.index]

    @property
    def canonical_form(self) -> tuple[int, ...]:
        return self.group.canonical[self.index]

    def __eq__(self, other):
        return isinstance(other, WeylElement) and other.group is self.group and other.index == self.index

    def __lt__(self, other):
        self._check(other)
        return self.index < other.index

    def __hash__(self):
        return hash((id(self.group), self.index))

    def __repr__(self):
        return f"WeylElement({self.group.rs.name}, {format_word(self.word)})"

    def __str__(self):
        return format_word(self.word)


def format_word(word: Sequence[int]) -> str:
    """Render a word in 1-based letters: ``(1, 2, 1) -> "s121"``; the empty word is ``"e"``."""
    if not word:
        return "e"
    sep = "," if any(i >= 9 for i in word) else ""
    return "s" + sep.join(str(i + 1) for i in word)


def parse_word(text: str, rank: int) -> tuple[int, ...]:
    """Parse ``"121"``, ``"s121"``, ``"1,2,1"`` or ``"e"`` into 0-based letters."""
    t = text.strip().lower()
    if t in ("", "e", "1_w", "id"):
        return ()
    if t.startswith("s"):
        t = t[1:]
    parts = t.split(",") if "," in t else list(t)
    try:
        word = tuple(int(p) - 1 for p in parts if p.strip())
    except ValueError:
        raise WeylGroupError(f"malformed word {text!r}") from None
    bad = [i + 1 for i in word if not 0 <= i < rank]
    if bad:
        raise WeylGroupError(f"word {text!r} uses letters {bad} outside 1..{rank}")
    return word


class WeylGroup:
    """The finite Weyl group of a root system, enumerated once and indexed."""

    def __init__(self, rs: RootSystem | str):
        if isinstance(rs, str):
            rs = build_root_system(rs)
        self.rs = rs
        n = rs.rank
        cartan = rs.cartan

        # BFS on w(rho^vee) under left multiplication; depth = length
        start = (1,) * n
        index = {start: 0}
        vecs = [start]
        lengths = [0]
        left = []  # left[w][i] = s_i w
        queue = deque([0])
        while queue:
            w = queue.popleft()
            m = vecs[w]
            row = []
            for i in range(n):
                mi = m[i]
                v = tuple(m[j] - mi * cartan[i][j] for j in range(n))
                k = index.get(v)
                if k is None:
                    k = len(vecs)
                    index[v] = k
                    vecs.append(v)
                    lengths.append(lengths[w] + 1)
                    queue.append(k)
                row.append(k)
            left.append(row)

        # left descents of w are the negative labels of w(rho^vee); greedy smallest one
        order = len(vecs)
        words: list[tuple[int, ...]] = [()] * order
        for w in sorted(range(order), key=lambda k: lengths[k]):
            m = vecs[w]
            for i in range(n):
                if m[i] < 0:
                    words[w] = (i,) + words[left[w][i]]
                    break
        perm = sorted(range(order), key=lambda k: (lengths[k], words[k]))
        rank_of = {old: new for new, old in enumerate(perm)}

        self.order = order
        self.canonical = [vecs[k] for k in perm]
        self.index_of = {v: i for i, v in enumerate(self.canonical)}
        self.length = np.array([lengths[k] for k in perm], dtype=np.int64)
        self.words = [words[k] for k in perm]
        self.left = np.array([[rank_of[left[k][i]] for i in range(n)] for k in perm], dtype=np.int64)

        mult = np.empty((order, order), dtype=np.int64)
        mult[0] = np.arange(order)
        for u in range(1, order):
            i = self.words[u][0]
            rest = self.left[u, i]  # s_i u, shorter; already filled
            mult[u] = self.left[mult[rest], i]
        self.mult = mult
        self.inv = np.argmin(mult, axis=1)
        self.right = mult[:, [self.simple(i) for i in range(n)]]

        self._build_actions()
        self._build_reflections()

    # -- construction helpers ----------------------------------------------

    def simple(self, i: int) -> int:
        return int(self.left[0, i])

    def _build_actions(self):
        rs = self.rs
        n, N = rs.rank, rs.num_positive
        cartan = rs.cartan
        # matrices on Dynkin labels and on root coordinates, by left multiplication
        lab = [None] * self.order
        rt = [None] * self.order
        lab[0] = np.eye(n, dtype=np.int64)
        rt[0] = np.eye(n, dtype=np.int64)
        s_lab, s_rt = [], []
        for i in range(n):
            a = np.eye(n, dtype=np.int64)
            a[:, i] -= np.array(cartan[i])  # m'_j = m_j - m_i a_ij
            s_lab.append(a)
            b = np.eye(n, dtype=np.int64)
            b[i, :] -= np.array(cartan[i])  # c'_i = c_i - sum_j a_ij c_j
            s_rt.append(b)
        for u in range(1, self.order):
            i = self.words[u][0]
            rest = self.left[u, i]
            lab[u] = s_lab[i] @ lab[rest]
            rt[u] = s_rt[i] @ rt[rest]
        self.label_matrix = np.array(lab)
        self.root_matrix = np.array(rt)

        roots = np.array(rs.positive_roots, dtype=np.int64)
        all_roots = np.vstack([roots, -roots])
        lookup = {tuple(r): k for k, r in enumerate(all_roots.tolist())}
        images = np.einsum("wij,kj->wki", self.root_matrix, all_roots)
        self.root_perm = np.array(
            [[lookup[tuple(v)] for v in img.tolist()] for img in images], dtype=np.int64
        )
        # inv_positive[u, k]: whether u^{-1}(alpha_k) > 0
        self.inv_positive = self.root_perm[self.inv][:, :N] < N
        check = (~(self.root_perm[:, :N] < N)).sum(axis=1)
        if not np.array_equal(check, self.length):
            raise InvariantViolation("length disagrees with inversion count")

    def _build_reflections(self):
        rs = self.rs
        n = rs.rank
        refl = []
        for beta, cor in zip(rs.positive_roots, rs.positive_coroots):
            h = sum(beta)  # <beta, rho^vee>
            lab = rs.to_labels(cor)
            v = tuple(1 - h * lab[j] for j in range(n))
            refl.append(self.index_of[v])
        self.reflections = np.array(refl, dtype=np.int64)
        self.reflection_root = {int(r): k for k, r in enumerate(refl)}
        self.two_rho_coroot = np.array([2 * sum(c) for c in rs.positive_coroots], dtype=np.int64)

    # -- element access ------------------------------------------------------

    def __len__(self):
        return self.order

    def __iter__(self):
        return (WeylElement(self, k) for k in range(self.order))

    def element(self, index: int) -> WeylElement:
        return WeylElement(self, index)

    @property
    def identity(self) -> WeylElement:
        return WeylElement(self, 0)

    @cached_property
    def longest(self) -> int:
        return int(np.argmax(self.length))

    @property
    def longest_element(self) -> WeylElement:
        return WeylElement(self, self.longest)

    def from_word(self, word: Iterable[int]) -> int:
        w = 0
        for i in word:
            w = self.right[w, i]
        return int(w)

    def parse(self, text: str) -> int:
        return self.from_word(parse_word(text, self.rs.rank))

    def reflection(self, root: Sequence[int]) -> int:
        return int(self.reflections[self.rs.root_index(root)])

    def name(self, w: int) -> str:
        return format_word(self.words[w])

    # -- basic operations (integer indices) ---------------------------------

    def multiply(self, u: int, w: int) -> int:
        return int(self.mult[u, w])

    def inverse(self, w: int) -> int:
        return int(self.inv[w])

    def length_of(self, w: int) -> int:
        return int(self.length[w])

    def reduced_word(self, w: int) -> tuple[int, ...]:
        """Greedy reduced word: repeatedly strip the smallest left descent."""
        return self.words[w]

    def act_labels(self, w: int, labels: Sequence) -> tuple:
        """Apply ``w`` to a coweight given by Dynkin labels."""
        mat = self.label_matrix[w]
        n = len(labels)
        return tuple(sum(labels[j] * int(mat[i, j]) for j in range(n) if labels[j]) for i in range(n))

    @cached_property
    def element_order(self) -> np.ndarray:
        out = np.ones(self.order, dtype=np.int64)
        for w in range(1, self.order):
            k, p = 1, w
            while p != 0:
                p = self.mult[p, w]
                k += 1
            out[w] = k
        return out

    # -- Bruhat order ----------------------------------------------------------

    def lower_ideal(self, w: int) -> frozenset[int]:
        """All subword products of the reduced word of ``w``."""
        cache = self.__dict__.setdefault("_ideal_cache", {})
        got = cache.get(w)
        if got is None:
            ideal = {0}
            for i in reversed(self.words[w]):
                ideal |= {int(self.left[y, i]) for y in ideal}
            got = cache[w] = frozenset(ideal)
        return got

    def bruhat_leq(self, u: int, w: int) -> bool:
        if self.length[u] > self.length[w]:
            return False
        return u in self.lower_ideal(w)

    def bruhat_covers(self, w: int) -> set[int]:
        """Elements covering ``w``: ``{w s_alpha : l(w s_alpha) = l(w) + 1}``."""
        ts = self.mult[w, self.reflections]
        return {int(t) for t in ts if self.length[t] == self.length[w] + 1}

    # -- reflection length ---------------------------------------------------------

    @cached_property
    def reflection_lengths(self) -> np.ndarray:
        dist = np.full(self.order, -1, dtype=np.int64)
        dist[0] = 0
        frontier = [0]
        d = 0
        while frontier:
            d += 1
            nxt = np.unique(self.mult[np.array(frontier)][:, self.reflections])
            nxt = nxt[dist[nxt] < 0]
            dist[nxt] = d
            frontier = nxt.tolist()
        return dist

    def reflection_length(self, w: int) -> int:
        return int(self.reflection_lengths[w])

    # -- factor containment and the two classifiers -------------------------------------

    def contains_factor(self, w: int, x: int) -> bool:
        """Whether ``w = u x u'`` with lengths adding up, by a scan over ``u'``."""
        lw, lx = self.length[w], self.length[x]
        if lx > lw:
            return False
        ups = np.arange(self.order)
        a = self.mult[w, self.inv]  # w u'^{-1} for every u'
        ok = self.length[a] == lw - self.length[ups]
        b = self.mult[a[ok], self.inv[x]]
        return bool(np.any(self.length[b] == lw - self.length[ups[ok]] - lx))

    @cached_property
    def small_height_reflections(self) -> tuple[int, ...]:
        """Non-simple reflections ``s_beta`` with ``l(s_beta) = <2rho, beta^vee> - 1``."""
        out = []
        for k, r in enumerate(self.reflections.tolist()):
            if self.length[r] > 1 and self.length[r] == self.two_rho_coroot[k] - 1:
                out.append(r)
        return tuple(out)

    def is_standard_parabolic_coxeter(self, w: int) -> bool:
        word = self.words[w]
        by_word = len(set(word)) == len(word)
        by_refl = self.reflection_length(w) == self.length[w]
        if by_word != by_refl:
            raise InvariantViolation(
                f"{self.name(w)}: distinct-letter test ({by_word}) and reflection-length test ({by_refl}) disagree"
            )
        return by_word

    def is_small_height_avoiding(self, w: int) -> bool:
        return not any(self.contains_factor(w, r) for r in self.small_height_reflections)

    def __repr__(self):
        return f"WeylGroup({self.rs.name}, order={self.order})"


def all_reduced_words(group: WeylGroup, w: int) -> list[tuple[int, ...]]:
    """Every reduced word of ``w`` (exponential; for small checks)."""
    memo: dict[int, list[tuple[int, ...]]] = {0: [()]}

    def rec(u):
        got = memo.get(u)
        if got is None:
            got = []
            m = group.canonical[u]
            for i in range(group.rs.rank):
                if m[i] < 0:
                    got.extend((i,) + tail for tail in rec(int(group.left[u, i])))
            memo[u] = got
        return got

    return rec(w)
