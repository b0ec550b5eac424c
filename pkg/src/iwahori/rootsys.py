"""Root data for split semisimple groups.

Roots are stored in the simple-root basis, coroots and coweights in the
simple-coroot basis.  The Cartan matrix follows the convention
``cartan[i][j] = <alpha_i^vee, alpha_j>`` with Bourbaki node numbering, so
``alpha_1`` is the short simple root in types C and G.

Internally the affine and Newton modules work with *Dynkin labels*
``m_j = <alpha_j, mu>`` of a coweight ``mu``; these are integers for every
lattice mode and make the Weyl action cheap.  ``to_labels`` and
``to_coroot_coords`` convert between the two.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import sympy

SUPPORTED_TYPES = (
    "A1", "A2", "A3", "A4", "A5", "B2", "B3", "C2", "C3", "D4", "G2", "F4",
)
LATTICE_MODES = ("sc", "adj")


class RootSystemError(ValueError):
    """Raised for invalid Cartan data or incompatible root-system inputs."""


def cartan_matrix(name: str) -> list[list[int]]:
    """Return the Cartan matrix of a named finite type such as ``"C2"``."""
    name = name.strip().upper()
    if len(name) < 2 or not name[1:].isdigit():
        raise RootSystemError(f"unknown type {name!r}")
    letter, n = name[0], int(name[1:])
    if n < 1:
        raise RootSystemError(f"unknown type {name!r}")

    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i, j, aij=-1, aji=-1):
        a[i][j], a[j][i] = aij, aji

    if letter == "A":
        for i in range(n - 1):
            link(i, i + 1)
    elif letter == "B" and n >= 2:
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 2, n - 1, -1, -2)  # alpha_n short
    elif letter == "C" and n >= 2:
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 2, n - 1, -2, -1)  # alpha_n long
    elif letter == "D" and n >= 4:
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 3, n - 1)
    elif letter == "G" and n == 2:
        link(0, 1, -3, -1)  # alpha_1 short
    elif letter == "F" and n == 4:
        link(0, 1)
        link(1, 2, -1, -2)
        link(2, 3)
    else:
        raise RootSystemError(f"unknown type {name!r}")
    return a


def _symmetrizer(cartan: Sequence[Sequence[int]]) -> list[int]:
    """Squared root lengths ``d`` with ``d_i a_ij = d_j a_ji``, scaled to coprime integers."""
    n = len(cartan)
    d: list[Fraction | None] = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if j == i or cartan[i][j] == 0:
                    continue
                dj = d[i] * cartan[i][j] / cartan[j][i]
                if d[j] is None:
                    d[j] = dj
                    stack.append(j)
                elif d[j] != dj:
                    raise RootSystemError("Cartan matrix is not symmetrizable")
    lcm = 1
    for x in d:
        lcm = lcm * x.denominator // _gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in d]
    g = 0
    for x in ints:
        g = _gcd(g, x)
    return [x // g for x in ints]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def validate_cartan(cartan: Sequence[Sequence[int]]) -> list[int]:
    """Check finite type and return the symmetrizer.

    Raises :class:`RootSystemError` naming the first non-positive leading
    principal minor of the symmetrized matrix.
    """
    n = len(cartan)
    if n == 0 or any(len(row) != n for row in cartan):
        raise RootSystemError("Cartan matrix must be square and non-empty")
    if n > 8:
        raise RootSystemError("rank > 8 is not supported")
    for i in range(n):
        if cartan[i][i] != 2:
            raise RootSystemError(f"diagonal entry ({i},{i}) must be 2")
        for j in range(n):
            if i != j:
                if cartan[i][j] > 0:
                    raise RootSystemError(f"off-diagonal entry ({i},{j}) must be <= 0")
                if (cartan[i][j] == 0) != (cartan[j][i] == 0):
                    raise RootSystemError(f"entries ({i},{j}) and ({j},{i}) must vanish together")
    d = _symmetrizer(cartan)
    sym = sympy.Matrix(n, n, lambda i, j: d[i] * cartan[i][j])
    for k in range(1, n + 1):
        minor = sym[:k, :k].det()
        if minor <= 0:
            raise RootSystemError(
                f"not of finite type: leading principal minor of order {k} "
                f"(rows/cols 1..{k}) of the symmetrized Cartan matrix is {minor}"
            )
    return d


@dataclass(frozen=True, eq=False)
class RootSystem:
    """Immutable root datum.

    ``positive_roots`` are ordered by height, then by descending coefficient
    tuple, so the simple roots come first in index order.
    """

    name: str
    cartan: tuple[tuple[int, ...], ...]
    lattice: str = "sc"
    symmetrizer: tuple[int, ...] = field(init=False)
    positive_roots: tuple[tuple[int, ...], ...] = field(init=False)
    positive_coroots: tuple[tuple[int, ...], ...] = field(init=False)
    two_rho: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        if self.lattice not in LATTICE_MODES:
            raise RootSystemError(f"lattice must be one of {LATTICE_MODES}, got {self.lattice!r}")
        d = validate_cartan(self.cartan)
        set_ = object.__setattr__
        set_(self, "symmetrizer", tuple(d))
        roots = _close_roots(self.cartan)
        set_(self, "positive_roots", tuple(roots))
        set_(self, "positive_coroots", tuple(self._coroot(a) for a in roots))
        set_(self, "two_rho", tuple(sum(col) for col in zip(*roots)))
        inv = sympy.Matrix(self.cartan).T.inv()
        set_(self, "_labels_to_coroot", tuple(
            tuple(Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(self.rank))
            for i in range(self.rank)
        ))
        set_(self, "_root_index", {a: k for k, a in enumerate(roots)})

    # -- basic data -----------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.cartan)

    @property
    def num_positive(self) -> int:
        return len(self.positive_roots)

    @property
    def highest_root(self) -> tuple[int, ...]:
        return self.positive_roots[-1]

    def height(self, coeffs: Sequence) -> int:
        return sum(coeffs)

    def root_index(self, root: Sequence[int]) -> int:
        """Index of a positive root in ``positive_roots``."""
        try:
            return self._root_index[tuple(root)]
        except KeyError:
            raise RootSystemError(f"{tuple(root)} is not a positive root of {self.name}") from None

    def is_root(self, coeffs: Sequence[int]) -> bool:
        t = tuple(coeffs)
        return t in self._root_index or tuple(-c for c in t) in self._root_index

    def inner(self, a: Sequence, b: Sequence) -> Fraction:
        """W-invariant form on the root span, with ``(alpha_i, alpha_i) = symmetrizer[i]``."""
        n = self.rank
        total = Fraction(0)
        for i in range(n):
            if a[i]:
                for j in range(n):
                    if b[j] and self.cartan[i][j]:
                        total += Fraction(a[i] * b[j] * self.symmetrizer[i] * self.cartan[i][j], 2)
        return total

    def _coroot(self, root: Sequence[int]) -> tuple[int, ...]:
        norm = self.inner(root, root)
        out = []
        for i, c in enumerate(root):
            v = Fraction(c * self.symmetrizer[i]) / norm
            if v.denominator != 1:
                raise RootSystemError(f"coroot of {tuple(root)} is not integral")
            out.append(int(v))
        return tuple(out)

    def coroot_of_root(self, root: Sequence[int]) -> tuple[int, ...]:
        """Coroot of a root, in simple-coroot coordinates."""
        t = tuple(root)
        if t in self._root_index:
            return self.positive_coroots[self._root_index[t]]
        neg = tuple(-c for c in t)
        if neg in self._root_index:
            return tuple(-c for c in self.positive_coroots[self._root_index[neg]])
        raise RootSystemError(f"{t} is not a root of {self.name}")

    # -- pairings -------------------------------------------------------

    def pairing(self, coweight: Sequence, root: Sequence) -> Fraction | int:
        """``<coweight, root>`` with the coweight in coroot coordinates and the root in root coordinates."""
        if len(coweight) != self.rank or len(root) != self.rank:
            raise RootSystemError(
                f"dimension mismatch: expected rank {self.rank}, got {len(coweight)} and {len(root)}"
            )
        return sum(
            coweight[i] * self.cartan[i][j] * root[j]
            for i in range(self.rank)
            for j in range(self.rank)
            if coweight[i] and root[j]
        )

    def two_rho_pairing(self, coweight: Sequence) -> Fraction | int:
        """``<2 rho, coweight>`` for a coweight in coroot coordinates (equals twice its height)."""
        if len(coweight) != self.rank:
            raise RootSystemError(f"dimension mismatch: expected rank {self.rank}, got {len(coweight)}")
        return 2 * sum(coweight)

    # -- coordinate changes ----------------------------------------------

    def to_labels(self, coroot_coords: Sequence) -> tuple:
        """Dynkin labels ``<alpha_j, mu>`` of a coweight given in coroot coordinates."""
        n = self.rank
        return tuple(
            sum(coroot_coords[i] * self.cartan[i][j] for i in range(n)) for j in range(n)
        )

    def to_coroot_coords(self, labels: Sequence) -> tuple[Fraction, ...]:
        inv = self._labels_to_coroot
        n = self.rank
        return tuple(sum((inv[i][j] * labels[j] for j in range(n)), Fraction(0)) for i in range(n))

    def in_lattice(self, labels: Sequence) -> bool:
        """Whether a coweight (Dynkin labels) lies in the configured cocharacter lattice."""
        if any(Fraction(x).denominator != 1 for x in labels):
            return False
        if self.lattice == "adj":
            return True
        return all(c.denominator == 1 for c in self.to_coroot_coords(labels))

    def kottwitz_class(self, labels: Sequence) -> tuple[Fraction, ...]:
        """Class of a coweight in ``X_* / coroot lattice``: fractional parts of its coroot coordinates."""
        return tuple(c - (c.numerator // c.denominator) for c in self.to_coroot_coords(labels))

    # -- type A tuple notation ------------------------------------------

    @property
    def is_type_a(self) -> bool:
        return self.name.upper().startswith("A") and self.name[1:].isdigit()

    def tuple_to_labels(self, entries: Sequence) -> tuple:
        """Type A only: ``(t_1, ..., t_{n+1})`` to Dynkin labels ``t_i - t_{i+1}``."""
        if not self.is_type_a or len(entries) != self.rank + 1:
            raise RootSystemError(f"tuple notation needs type A and {self.rank + 1} entries")
        if self.lattice == "sc" and sum(entries) != 0:
            raise RootSystemError("tuple entries must sum to 0 for the simply-connected lattice")
        return tuple(entries[i] - entries[i + 1] for i in range(self.rank))

    def labels_to_tuple(self, labels: Sequence) -> tuple[Fraction, ...]:
        """Type A only: the trace-zero tuple with the given Dynkin labels."""
        if not self.is_type_a:
            raise RootSystemError("tuple notation needs type A")
        n = self.rank + 1
        partial = [Fraction(0)]
        for m in labels:
            partial.append(partial[-1] - m)
        shift = -sum(partial) / n
        return tuple(p + shift for p in partial)

    # -- serialization --------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "type": self.name,
            "cartan": [list(r) for r in self.cartan],
            "positive_roots": [list(a) for a in self.positive_roots],
            "symmetrizer": list(self.symmetrizer),
            "lattice": self.lattice,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "RootSystem":
        return cls(data["type"], tuple(tuple(r) for r in data["cartan"]), data.get("lattice", "sc"))

    def __repr__(self):
        return f"RootSystem({self.name!r}, lattice={self.lattice!r})"

    def __eq__(self, other):
        return (
            isinstance(other, RootSystem)
            and self.cartan == other.cartan
            and self.lattice == other.lattice
        )

    def __hash__(self):
        return hash((self.cartan, self.lattice))


def _close_roots(cartan) -> list[tuple[int, ...]]:
    n = len(cartan)
    simple = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for a in frontier:
            for i in range(n):
                # s_i(a) = a - <a, alpha_i^vee> alpha_i
                c = sum(cartan[i][j] * a[j] for j in range(n))
                if c == 0:
                    continue
                b = list(a)
                b[i] -= c
                b = tuple(b)
                if all(x >= 0 for x in b) and any(b) and b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return sorted(seen, key=lambda a: (sum(a), tuple(-x for x in a)))


def build_root_system(spec: str | Sequence[Sequence[int]], lattice: str = "sc") -> RootSystem:
    """Build a :class:`RootSystem` from a type name (``"G2"``) or an explicit Cartan matrix."""
    if isinstance(spec, str):
        name = spec.strip().upper()
        cartan = cartan_matrix(name)
    else:
        cartan = [list(r) for r in spec]
        name = "custom"
    return RootSystem(name, tuple(tuple(int(x) for x in r) for r in cartan), lattice)
