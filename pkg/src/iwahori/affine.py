"""The extended affine Weyl group ``X_*(T) x| W``.

An element ``t^mu u`` is stored as an :class:`AffineElement` holding the
Dynkin labels of ``mu`` and the index of ``u`` in the finite group.  It acts
on the coweight space by ``p -> mu + u(p)``.  The base alcove is
``{p : 0 < <alpha, p> < 1 for all alpha > 0}``, which lies in the dominant
chamber; its walls give the affine simple reflections ``s_1, ..., s_r`` and
``s_0 = t^{theta^vee} s_theta``.

Length is the number of affine root hyperplanes ``<alpha, p> = k``
separating the base alcove from its image.  For ``alpha > 0`` the image lies
in the strip ``a < <alpha, p> < a + 1`` with ``a = <alpha, mu>`` if
``u^{-1} alpha > 0`` and ``a = <alpha, mu> - 1`` otherwise, contributing
``|a|`` hyperplanes.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .rootsys import RootSystem
from .weyl import InvariantViolation, WeylGroup

DEFAULT_LENGTH_BOUND = 22


class AffineElement(NamedTuple):
    mu: tuple[int, ...]  # Dynkin labels of the translation part
    u: int  # finite part, index into the Weyl group


class LengthBoundError(ValueError):
    def __init__(self, length: int, bound: int):
        super().__init__(
            f"element has length {length}, above the lower-set bound {bound}; "
            f"rerun with a bound of at least {length}"
        )
        self.length = length
        self.bound = bound


class SingularDecompositionWarning(UserWarning):
    pass


@dataclass(frozen=True)
class DominantDecomposition:
    """``x = t^{v lambda} w`` with ``lambda`` dominant and ``t^lambda v^{-1} w`` sending the base alcove into the dominant chamber."""

    v: int
    lam: tuple[int, ...]  # Dynkin labels
    w: int
    singular: bool


class AffineWeylGroup:
    """Arithmetic, length, decomposition and Bruhat order in the extended affine Weyl group."""

    def __init__(self, group: WeylGroup):
        self.group = group
        self.rs: RootSystem = group.rs
        rs = self.rs
        self.rank = rs.rank
        self._mats = [tuple(tuple(int(x) for x in row) for row in m) for m in group.label_matrix]
        self._roots = rs.positive_roots
        self._inv_pos = group.inv_positive.tolist()
        self._two_rho = rs.two_rho
        theta = rs.highest_root
        self._theta = theta
        self._theta_refl = group.reflection(theta)
        self._theta_vee = rs.to_labels(rs.coroot_of_root(theta))
        self._theta_idx = rs.root_index(theta)
        self.identity = AffineElement((0,) * self.rank, 0)
        # s_0, s_1, ..., s_r
        self.simple_reflections = [AffineElement(self._theta_vee, self._theta_refl)] + [
            AffineElement((0,) * self.rank, group.simple(i)) for i in range(self.rank)
        ]

    # -- construction ---------------------------------------------------------------

    def element(self, mu: Sequence = None, w: int | str = 0, *, labels: Sequence[int] = None) -> AffineElement:
        """Build ``t^mu w`` from ``mu`` in coroot coordinates (or ``labels``) and a finite part."""
        if isinstance(w, str):
            w = self.group.parse(w)
        if labels is None:
            mu = tuple(mu) if mu is not None else (0,) * self.rank
            if len(mu) != self.rank:
                raise ValueError(f"translation needs {self.rank} coordinates, got {len(mu)}")
            labels = self.rs.to_labels(mu)
        labels = tuple(labels)
        if not self.rs.in_lattice(labels):
            raise ValueError(
                f"translation {self.rs.to_coroot_coords(labels)} is not in the "
                f"{'coroot' if self.rs.lattice == 'sc' else 'coweight'} lattice"
            )
        return AffineElement(tuple(int(x) for x in labels), int(w))

    def translation(self, labels: Sequence[int]) -> AffineElement:
        return AffineElement(tuple(labels), 0)

    def from_decomposition(self, v: int, lam: Sequence[int], w: int) -> AffineElement:
        """``t^{v lambda} w`` with ``lambda`` given by Dynkin labels."""
        if not self.rs.in_lattice(lam):
            raise ValueError(f"lambda {self.rs.to_coroot_coords(lam)} is not in the translation lattice")
        return AffineElement(self.act(v, lam), int(w))

    def coroot_coords(self, x: AffineElement) -> tuple[Fraction, ...]:
        return self.rs.to_coroot_coords(x.mu)

    # -- group law ----------------------------------------------------------------------

    def act(self, u: int, labels: Sequence) -> tuple:
        m = self._mats[u]
        return tuple(sum(r[j] * labels[j] for j in range(len(labels)) if labels[j]) for r in m)

    def mul(self, x: AffineElement, y: AffineElement) -> AffineElement:
        uy = self.act(x.u, y.mu)
        return AffineElement(
            tuple(a + b for a, b in zip(x.mu, uy)), int(self.group.mult[x.u, y.u])
        )

    def inv(self, x: AffineElement) -> AffineElement:
        ui = int(self.group.inv[x.u])
        return AffineElement(tuple(-c for c in self.act(ui, x.mu)), ui)

    def power(self, x: AffineElement, n: int) -> AffineElement:
        out = self.identity
        for _ in range(n):
            out = self.mul(out, x)
        return out

    def apply_point(self, x: AffineElement, p: Sequence) -> tuple:
        """Image of a point (Dynkin-label coordinates) under ``x``."""
        up = self.act(x.u, p)
        return tuple(a + b for a, b in zip(x.mu, up))

    # -- length ---------------------------------------------------------------------------

    def _strips(self, x: AffineElement) -> list[int]:
        mu, pos = x.mu, self._inv_pos[x.u]
        out = []
        for k, a in enumerate(self._roots):
            m = 0
            for c, l in zip(a, mu):
                if c and l:
                    m += c * l
            out.append(m if pos[k] else m - 1)
        return out

    def length(self, x: AffineElement) -> int:
        return sum(abs(a) for a in self._strips(x))

    def separating_hyperplanes(self, x: AffineElement) -> list[tuple[int, int]]:
        """``(root index, k)`` for each hyperplane ``<alpha, p> = k`` between the base alcove and ``x`` of it."""
        out = []
        for idx, a in enumerate(self._strips(x)):
            if a >= 1:
                out.extend((idx, k) for k in range(1, a + 1))
            elif a <= -1:
                out.extend((idx, k) for k in range(a + 1, 1))
        return out

    def reflection(self, root_index: int, k: int) -> AffineElement:
        """The affine reflection in ``<alpha, p> = k``, i.e. ``t^{k alpha^vee} s_alpha``."""
        cor = self.rs.to_labels(self.rs.positive_coroots[root_index])
        return AffineElement(tuple(k * c for c in cor), int(self.group.reflections[root_index]))

    def left_descents(self, x: AffineElement) -> list[int]:
        """Affine simple letters ``j`` (0 = affine node) with ``l(s_j x) < l(x)``."""
        mu, pos = x.mu, self._inv_pos[x.u]
        out = []
        th = sum(c * l for c, l in zip(self._theta, mu))
        if (th if pos[self._theta_idx] else th - 1) >= 1:
            out.append(0)
        for i in range(self.rank):
            a = mu[i] if pos[i] else mu[i] - 1
            if a < 0:
                out.append(i + 1)
        return out

    def left_simple(self, j: int, x: AffineElement) -> AffineElement:
        return self.mul(self.simple_reflections[j], x)

    # -- Omega and reduced words ----------------------------------------------------------

    def reduced_word(self, x: AffineElement) -> tuple[tuple[int, ...], AffineElement]:
        """Greedy reduced word: ``x = s_{j1} ... s_{jk} omega`` with ``l(omega) = 0``."""
        word = []
        while True:
            d = self.left_descents(x)
            if not d:
                break
            word.append(d[0])
            x = self.left_simple(d[0], x)
        if self.length(x) != 0:
            raise InvariantViolation("descent stripping ended at a positive-length element")
        return tuple(word), x

    def omega_component(self, x: AffineElement) -> AffineElement:
        return self.reduced_word(x)[1]

    def length_zero_elements(self) -> list[AffineElement]:
        """The stabilizer of the base alcove, one element per class of ``X_*`` modulo coroots."""
        rs = self.rs
        reps = {rs.kottwitz_class((0,) * self.rank): (0,) * self.rank}
        if rs.lattice == "adj":
            frontier = list(reps.values())
            while frontier:
                nxt = []
                for m in frontier:
                    for i in range(self.rank):
                        m2 = tuple(c + (1 if j == i else 0) for j, c in enumerate(m))
                        cls = rs.kottwitz_class(m2)
                        if cls not in reps:
                            reps[cls] = m2
                            nxt.append(m2)
                frontier = nxt
        out = [self.omega_component(self.translation(m)) for m in reps.values()]
        return sorted(out, key=lambda e: (self.group.canonical[e.u], e.mu))

    def kottwitz(self, x: AffineElement) -> tuple[Fraction, ...]:
        return self.rs.kottwitz_class(x.mu)

    # -- dominant decomposition and eta -----------------------------------------------------

    def dominant_rep(self, labels: Sequence) -> tuple[tuple, int]:
        """``(lambda, v0)`` with ``lambda`` dominant and ``v0(lambda) = labels``."""
        g = self.group
        m = tuple(labels)
        v = 0
        while True:
            neg = next((i for i in range(self.rank) if m[i] < 0), None)
            if neg is None:
                return m, v
            m = self.act(g.simple(neg), m)
            v = int(g.right[v, neg])

    def decompose(self, x: AffineElement, *, warn: bool = False) -> DominantDecomposition:
        g = self.group
        lam, v0 = self.dominant_rep(x.mu)
        zeros = [i for i in range(self.rank) if lam[i] == 0]
        if not zeros:
            return DominantDecomposition(v0, lam, x.u, False)
        # v ranges over v0 W_lambda; keep the one with w^{-1} v minimal in its W_lambda coset
        N = self.rs.num_positive
        fixes = np.all(
            np.einsum("wij,j->wi", g.label_matrix, np.array(lam, dtype=np.int64)) == np.array(lam), axis=1
        )
        winv = g.inv[x.u]
        found = []
        for z in np.flatnonzero(fixes).tolist():
            v = int(g.mult[v0, z])
            y = g.mult[winv, v]
            if all(g.root_perm[y, i] < N for i in zeros):
                found.append(v)
        if len(found) != 1:
            raise InvariantViolation(f"expected one admissible v, found {len(found)}")
        if warn:
            warnings.warn(
                "lambda is singular; v is fixed by the base-alcove condition",
                SingularDecompositionWarning,
                stacklevel=2,
            )
        return DominantDecomposition(found[0], lam, x.u, True)

    def eta(self, x: AffineElement) -> int:
        d = self.decompose(x)
        g = self.group
        return int(g.mult[g.mult[g.inv[d.v], d.w], d.v])

    # -- Bruhat order ---------------------------------------------------------------------

    def lower_set(self, x: AffineElement, bound: int = DEFAULT_LENGTH_BOUND) -> set[AffineElement]:
        """``{y : y <= x}`` as subword products of a reduced word, times ``omega``."""
        lx = self.length(x)
        if bound is not None and lx > bound:
            raise LengthBoundError(lx, bound)
        word, omega = self.reduced_word(x)
        lower = {omega}
        for j in reversed(word):
            s = self.simple_reflections[j]
            lower |= {self.mul(s, y) for y in lower}
        return lower

    def lower_set_by_covers(self, x: AffineElement) -> set[AffineElement]:
        """The same set as :meth:`lower_set`, by closing downward under Bruhat covers."""
        seen = {x}
        frontier = [x]
        while frontier:
            nxt = []
            for y in frontier:
                ly = self.length(y)
                for idx, k in self.separating_hyperplanes(y):
                    z = self.mul(self.reflection(idx, k), y)
                    if z not in seen and self.length(z) == ly - 1:
                        seen.add(z)
                        nxt.append(z)
            frontier = nxt
        return seen

    def bruhat_leq(self, y: AffineElement, x: AffineElement, bound: int = DEFAULT_LENGTH_BOUND) -> bool:
        return y in self.lower_set(x, bound)

    # -- formatting ---------------------------------------------------------------------

    def format(self, x: AffineElement) -> str:
        mu = ",".join(str(c) for c in self.coroot_coords(x))
        return f"t^({mu}) {self.group.name(x.u)}"


def affine_length(W: AffineWeylGroup, x: AffineElement) -> int:
    return W.length(x)


def decompose_dominant(W: AffineWeylGroup, x: AffineElement) -> DominantDecomposition:
    return W.decompose(x)


def eta(W: AffineWeylGroup, x: AffineElement) -> int:
    return W.eta(x)


def affine_reduced_word(W: AffineWeylGroup, x: AffineElement):
    return W.reduced_word(x)


def bruhat_lower_set(W: AffineWeylGroup, x: AffineElement, bound: int = DEFAULT_LENGTH_BOUND):
    return W.lower_set(x, bound)
