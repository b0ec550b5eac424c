"""Newton points, dominance order and the generic Newton point of ``I x I``.

All arithmetic is exact.  A Newton point is stored by its Dynkin labels
(``Fraction`` entries); dominance is decided in simple-coroot coordinates.

Two independent routes to the generic Newton point ``nu_x`` are provided:

* :func:`generic_newton_bruteforce` takes the dominance-maximum of the Newton
  points of every ``y <= x`` in Bruhat order;
* :func:`generic_newton_qbg` evaluates ``lambda - wt(w^{-1} v => v)`` from the
  quantum Bruhat graph, valid for superregular ``lambda``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .affine import DEFAULT_LENGTH_BOUND, AffineElement, AffineWeylGroup
from .qbg import QuantumBruhatGraph
from .rootsys import RootSystem
from .weyl import InvariantViolation

INDETERMINATE = "indeterminate"
Defect = Union[int, str]

# Smallest M per type such that every lambda with all simple pairings > M gave
# agreement between the graph formula and brute force over all (v, w) in the
# calibration sweep (tests/test_newton.py replays it).  Unswept types fall back
# to a conservative default.
DEFAULT_SUPERREGULARITY = {
    "A1": 0,
    "A2": 1,
    "A3": 1,
    "B2": 1,
    "C2": 1,
    "G2": 1,
}
FALLBACK_SUPERREGULARITY = 2


class NotSuperregularError(ValueError):
    pass


@dataclass(frozen=True)
class NewtonPoint:
    rs: RootSystem
    labels: tuple[Fraction, ...]

    @classmethod
    def from_coroot(cls, rs: RootSystem, coords: Sequence) -> "NewtonPoint":
        return cls(rs, tuple(Fraction(x) for x in rs.to_labels([Fraction(c) for c in coords])))

    @property
    def coroot_coords(self) -> tuple[Fraction, ...]:
        return self.rs.to_coroot_coords(self.labels)

    @property
    def is_dominant(self) -> bool:
        return all(m >= 0 for m in self.labels)

    def two_rho(self) -> Fraction:
        return 2 * sum(self.coroot_coords)

    def is_integral(self) -> bool:
        return self.rs.in_lattice(self.labels)

    def __le__(self, other: "NewtonPoint") -> bool:
        return dominance_leq(self, other)

    def __ge__(self, other: "NewtonPoint") -> bool:
        return dominance_leq(other, self)

    def __lt__(self, other):
        return self != other and dominance_leq(self, other)

    def __gt__(self, other):
        return self != other and dominance_leq(other, self)

    def as_strings(self) -> list[str]:
        return [str(c) for c in self.coroot_coords]

    def __repr__(self):
        return f"NewtonPoint({', '.join(self.as_strings())})"


@dataclass(frozen=True)
class SigmaClassInvariants:
    newton: NewtonPoint
    kottwitz: tuple[Fraction, ...]

    @property
    def defect(self) -> Defect:
        return defect(self.newton, self.kottwitz)


def _dominantize(rs: RootSystem, labels: Sequence) -> tuple:
    n = rs.rank
    m = list(labels)
    while True:
        i = next((k for k in range(n) if m[k] < 0), None)
        if i is None:
            return tuple(m)
        mi = m[i]
        for j in range(n):
            m[j] -= mi * rs.cartan[i][j]


def newton_point(W: AffineWeylGroup, y: AffineElement) -> NewtonPoint:
    """Dominant representative of the average of ``mu`` over the cyclic group generated by ``u``."""
    n = int(W.group.element_order[y.u])
    total = [0] * W.rank
    m = y.mu
    for _ in range(n):
        total = [a + b for a, b in zip(total, m)]
        m = W.act(y.u, m)
    dom = _dominantize(W.rs, total)
    return NewtonPoint(W.rs, tuple(Fraction(c, n) for c in dom))


def dominance_leq(nu: NewtonPoint, nu2: NewtonPoint) -> bool:
    """``nu <= nu2``: the difference is a non-negative combination of simple coroots."""
    if nu.rs.cartan != nu2.rs.cartan:
        raise ValueError("Newton points from different root systems")
    diff = [b - a for a, b in zip(nu.labels, nu2.labels)]
    return all(c >= 0 for c in nu.rs.to_coroot_coords(diff))


def dominance_maxima(points) -> list[NewtonPoint]:
    pts = list(dict.fromkeys(points))
    return [p for p in pts if not any(q != p and dominance_leq(p, q) for q in pts)]


def generic_newton_bruteforce(
    W: AffineWeylGroup, x: AffineElement, bound: int = DEFAULT_LENGTH_BOUND
) -> NewtonPoint:
    """``max { nu(y) : y <= x }`` in dominance order; fails loudly without a unique maximum."""
    points = {newton_point(W, y) for y in W.lower_set(x, bound)}
    top = dominance_maxima(points)
    if len(top) != 1 or not all(dominance_leq(p, top[0]) for p in points):
        raise InvariantViolation(
            f"no unique dominance-maximal Newton point below {W.format(x)}: {top}"
        )
    return top[0]


def superregularity_threshold(rs: RootSystem) -> int:
    return DEFAULT_SUPERREGULARITY.get(rs.name, FALLBACK_SUPERREGULARITY)


def is_superregular(lam: Sequence[int], M: int) -> bool:
    return all(m > M for m in lam)


def generic_newton_qbg(
    W: AffineWeylGroup,
    graph: QuantumBruhatGraph,
    x: AffineElement,
    M: int | None = None,
    *,
    force: bool = False,
) -> NewtonPoint:
    """``lambda`` minus the weight of a minimal path ``w^{-1} v -> v`` in the quantum Bruhat graph."""
    g = W.group
    d = W.decompose(x)
    if M is None:
        M = superregularity_threshold(W.rs)
    if not force:
        for i, m in enumerate(d.lam):
            if m <= M:
                raise NotSuperregularError(
                    f"<alpha_{i + 1}, lambda> = {m} is not > M = {M}; pass force=True to override"
                )
    start = int(g.mult[g.inv[d.w], d.v])
    wt = W.rs.to_labels(graph.min_path_weight(start, d.v))
    return NewtonPoint(W.rs, tuple(Fraction(a - b) for a, b in zip(d.lam, wt)))


# -- defect and dimensions ------------------------------------------------------------------


def _type_a_defect(nu: NewtonPoint, kottwitz: Sequence[Fraction]) -> int:
    rs = nu.rs
    n = rs.rank + 1
    entries = list(rs.labels_to_tuple(nu.labels))
    # lift to GL_n so the slopes sum to kappa
    kappa = _type_a_kappa(rs, kottwitz)
    if kappa:
        entries = [e + Fraction(kappa, n) for e in entries]
    out = 0
    for slope in set(entries):
        mult = entries.count(slope)
        h = slope.denominator
        if mult % h:
            raise ValueError(f"slope {slope} occurs {mult} times, not a multiple of {h}")
        out += (mult // h) * (h - 1)
    return out


def _type_a_kappa(rs: RootSystem, kottwitz: Sequence[Fraction]) -> int:
    """Integer in ``0..n-1`` representing a class of coweights modulo coroots in type ``A_{n-1}``."""
    n = rs.rank + 1
    # the first fundamental coweight generates X_*/Q^vee for PGL_n and has kappa = 1
    omega1 = rs.kottwitz_class((1,) + (0,) * (rs.rank - 1))
    cur = tuple(Fraction(0) for _ in kottwitz)
    for k in range(n):
        if cur == tuple(kottwitz):
            return k
        cur = tuple((a + b) % 1 for a, b in zip(cur, omega1))
    raise ValueError(f"unrecognised Kottwitz class {kottwitz}")


def defect(nu: NewtonPoint, kottwitz: Sequence[Fraction] | None = None) -> Defect:
    """``rk G - rk J_b``: zero for integral ``nu`` in the right class, slope count in type A, else indeterminate."""
    rs = nu.rs
    if kottwitz is None:
        kottwitz = tuple(Fraction(0) for _ in range(rs.rank))
    kottwitz = tuple(kottwitz)
    if nu.is_integral() and rs.kottwitz_class(nu.labels) == kottwitz:
        return 0
    if rs.is_type_a:
        return _type_a_defect(nu, kottwitz)
    return INDETERMINATE


def invariants_of(W: AffineWeylGroup, nu: NewtonPoint, x: AffineElement) -> SigmaClassInvariants:
    return SigmaClassInvariants(nu, W.kottwitz(x))


def virtual_dimension(W: AffineWeylGroup, x: AffineElement, inv: SigmaClassInvariants) -> Fraction:
    """``(l(x) + l(eta(x)) - def(b) - <2rho, nu(b)>) / 2``."""
    d = inv.defect
    if d == INDETERMINATE:
        raise ValueError("virtual dimension needs a determinate defect")
    if inv.kottwitz != W.kottwitz(x):
        raise ValueError("Kottwitz points of x and b differ; the virtual dimension is not defined")
    eta = W.eta(x)
    return Fraction(W.length(x) + int(W.group.length[eta]) - d, 1) / 2 - inv.newton.two_rho() / 2


def generic_adlv_dimension(W: AffineWeylGroup, x: AffineElement, nu_x: NewtonPoint) -> int:
    """``dim X_x(b_x) = l(x) - <2rho, nu_x>``."""
    val = W.length(x) - nu_x.two_rho()
    if val.denominator != 1 or val < 0:
        raise InvariantViolation(f"generic ADLV dimension {val} is not a non-negative integer")
    return int(val)


def chain_length_to_generic(inv_b: SigmaClassInvariants, inv_x: SigmaClassInvariants) -> Fraction:
    """``(def(b') - def(b_x) + <2rho, nu_x - nu(b')>) / 2``, the length of maximal chains ``[b'] -> [b_x]``."""
    if not dominance_leq(inv_b.newton, inv_x.newton):
        raise ValueError("nu(b') is not below nu_x in dominance order")
    d1, d0 = inv_b.defect, inv_x.defect
    if INDETERMINATE in (d1, d0):
        raise ValueError("chain length needs determinate defects")
    return (Fraction(d1 - d0) + inv_x.newton.two_rho() - inv_b.newton.two_rho()) / 2
