"""The augmented phase space: shift points plus isolated satellite orbits.

The space is the disjoint union of the full shift and a countable family of
tagged points. For every level k there are copies of the level-k periodic
orbit, tagged by an index i; a copy sits at distance 1/k from the orbit it
shadows and from every other copy. The homeomorphism acts as the shift on
base points and rotates each satellite orbit.

The metric in full, writing q(i,k,j) for the j-th point of copy i at level
k and p(k,j) for the j-th shift image of the level-k periodic point:

    d(x, y)                 = d0(x, y)                       both base
    d(q(i,k,j), y)          = 1/k + d0(y, p(k,j))            y base
    d(q(i,k,j), q(l,k,j))   = 1/k                            i != l
    d(q(i,k,j), q(l,m,r))   = 1/k + 1/m + d0(p(k,j), p(m,r)) otherwise

which is the tag separation plus the base distance of the projections.
Point operations live at module level and are independent of any system
parameters; :class:`AugSystem` fixes how many copies exist per level and
validates or enumerates points against that choice.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from nexpansive.base import BiSeq, base_dist, periodic_point

VARIANTS = ("standard", "finite_expansive")


@dataclass(frozen=True)
class BasePoint:
    seq: BiSeq


@dataclass(frozen=True)
class ExtraPoint:
    i: int
    k: int
    j: int


AugPoint = BasePoint | ExtraPoint


@dataclass(frozen=True)
class AugSystem:
    """Parameters of the construction.

    ``n`` is the number of orbits allowed to move together; the standard
    variant attaches n - 1 satellite copies to every level, the finite
    expansive variant attaches k - 1 copies to level k. ``k_max`` only
    bounds enumeration, never the semantics of points.
    """

    n: int = 2
    variant: str = "standard"
    k_max: int = 50

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.k_max < 3:
            raise ValueError("k_max must be >= 3")

    def multiplicity(self, k):
        """Number of satellite copies of the level-k orbit."""
        return self.n - 1 if self.variant == "standard" else k - 1

    def validate_point(self, x):
        if isinstance(x, BasePoint):
            return x
        if x.k < 1 or not 0 <= x.j <= x.k:
            raise ValueError(f"{x} has an invalid level or phase")
        if not 1 <= x.i <= self.multiplicity(x.k):
            raise ValueError(f"{x} exceeds multiplicity {self.multiplicity(x.k)}")
        return x

    def extra_points(self, k_hi):
        """Every satellite point of level at most k_hi, each exactly once."""
        if k_hi > self.k_max:
            raise ValueError(f"k_hi={k_hi} exceeds enumeration bound {self.k_max}")
        out = []
        for k in range(1, k_hi + 1):
            for i in range(1, self.multiplicity(k) + 1):
                out.extend(ExtraPoint(i, k, j) for j in range(k + 1))
        return out

    def extra_count(self, k_hi):
        """Closed form for len(extra_points(k_hi))."""
        return sum(self.multiplicity(k) * (k + 1) for k in range(1, k_hi + 1))


_PROJECTIONS = {}


def project(x):
    """Collapse a point to the base: satellites map to the orbit they shadow."""
    if isinstance(x, BasePoint):
        return x.seq
    key = (x.k, x.j)
    if key not in _PROJECTIONS:
        _PROJECTIONS[key] = periodic_point(x.k).shift(x.j)
    return _PROJECTIONS[key]


def tag_gap(x, y):
    """The location-independent part of the metric for a distinct pair."""
    if isinstance(x, ExtraPoint) and isinstance(y, ExtraPoint):
        if (x.k, x.j) == (y.k, y.j):
            return Fraction(1, x.k)
        return Fraction(1, x.k) + Fraction(1, y.k)
    if isinstance(x, ExtraPoint):
        return Fraction(1, x.k)
    if isinstance(y, ExtraPoint):
        return Fraction(1, y.k)
    return Fraction(0)


def aug_dist(x, y):
    if x == y:
        return Fraction(0)
    return tag_gap(x, y) + base_dist(project(x), project(y))


def aug_map(x):
    if isinstance(x, BasePoint):
        return BasePoint(x.seq.shift(1))
    return ExtraPoint(x.i, x.k, (x.j + 1) % (x.k + 1))


def aug_map_inv(x):
    if isinstance(x, BasePoint):
        return BasePoint(x.seq.shift(-1))
    return ExtraPoint(x.i, x.k, (x.j - 1) % (x.k + 1))


def aug_iterate(x, t):
    """The t-th image of x under the map (t may be negative)."""
    if isinstance(x, BasePoint):
        return BasePoint(x.seq.shift(t))
    return ExtraPoint(x.i, x.k, (x.j + t) % (x.k + 1))


def orbit_of(x):
    """The full periodic orbit of a satellite point, phase order."""
    if isinstance(x, BasePoint):
        raise ValueError("orbit_of expects a satellite point")
    return [ExtraPoint(x.i, x.k, j) for j in range(x.k + 1)]


def orbit_label(seq):
    """Recognize seq as p(k, j), returning (k, j), or None.

    The tagged periodic points are exactly the periodic sequences carrying
    a single 1 per least period, so the label is read off the canonical
    period word.
    """
    if not seq.is_periodic:
        return None
    word = seq.left
    if len(word) < 2 or word.count("1") != 1:
        return None
    k = len(word) - 1
    j = (k - word.index("1")) % (k + 1)
    return k, j


def mirror_point(x):
    """Conjugacy between the map and its inverse.

    Reversing every base sequence swaps the shift with its inverse and
    preserves all distances; a satellite point follows the reversal of the
    orbit it shadows. Applying mirror_point, then the map, then
    mirror_point again gives the inverse map.
    """
    if isinstance(x, BasePoint):
        return BasePoint(x.seq.reverse())
    rev = project(x).reverse()
    label = orbit_label(rev)
    assert label is not None and label[0] == x.k
    return ExtraPoint(x.i, x.k, label[1])


def canonical_key(x):
    """Total order on points used for deterministic reports."""
    if isinstance(x, BasePoint):
        s = x.seq
        return f"base:{s.left}|{s.core}|{s.right}@{s.offset:+05d}"
    return f"extra:{x.i:04d},{x.k:04d},{x.j:04d}"
