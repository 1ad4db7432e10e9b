"""Bi-infinite binary sequences with eventually periodic tails.

The ambient system is the full shift on two symbols. Every point handled
here is a bi-infinite word over {0,1} that repeats a fixed block far enough
to the left and far enough to the right, so it has a finite description:

    ... L L L | core | R R R ...

with the core anchored at an integer offset. This class of points is closed
under shifting, splicing and orbit gluing, and every metric quantity on it
reduces to exact integer arithmetic (all distances are dyadic rationals).
No floating point appears anywhere in this package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

HALF = Fraction(1, 2)

_BINARY = frozenset("01")


def dyadic(exp):
    """2**-exp as an exact rational."""
    return HALF ** exp


def _check_word(word, name):
    if not word or set(word) - _BINARY:
        raise ValueError(f"{name} must be a nonempty word over 0/1, got {word!r}")


def _primitive(word):
    """Shortest block whose repetition generates the same periodic pattern."""
    d = (word + word).index(word, 1)
    return word[:d] if len(word) % d == 0 else word


def _rot(word, t):
    """Rotate so that _rot(w, t)[i] == w[(i + t) % len(w)]."""
    t %= len(word)
    return word[t:] + word[:t]


class BiSeq:
    """An eventually periodic bi-infinite binary sequence.

    The symbol at index i is, for i below ``offset``, drawn from the left
    period; for i in [offset, offset + len(core)) it is an explicit core
    symbol; beyond that it cycles through the right period.

    Instances are canonicalized on construction: the periods are reduced to
    their primitive blocks, core symbols that merely continue a tail are
    absorbed into it, and a globally periodic sequence is re-anchored at
    index zero. Two instances describe the same sequence exactly when their
    canonical fields are equal, so ``==`` and ``hash`` are structural.
    Treat instances as immutable.
    """

    __slots__ = ("left", "core", "right", "offset")

    def __init__(self, left, core="", right=None, offset=0):
        if right is None:
            right = left
        _check_word(left, "left period")
        _check_word(right, "right period")
        if set(core) - _BINARY:
            raise ValueError(f"core must be a word over 0/1, got {core!r}")
        left = _primitive(left)
        right = _primitive(right)
        # Absorb core symbols that already continue the adjacent tail.
        while core and core[0] == left[0]:
            core = core[1:]
            left = _rot(left, 1)
            offset += 1
        while core and core[-1] == right[-1]:
            core = core[:-1]
            right = _rot(right, -1)
        if not core:
            if left == right:
                # Globally periodic: pin the representation at index 0.
                left = right = _rot(left, -offset)
                offset = 0
            else:
                # Slide the seam right as far as the two patterns agree.
                guard = len(left) * len(right)
                while left[0] == right[0]:
                    left = _rot(left, 1)
                    right = _rot(right, 1)
                    offset += 1
                    guard -= 1
                    if guard < 0:  # pragma: no cover - primitivity rules this out
                        raise AssertionError("seam slide failed to terminate")
        self.left = left
        self.core = core
        self.right = right
        self.offset = offset

    @property
    def core_start(self):
        return self.offset

    @property
    def core_end(self):
        return self.offset + len(self.core)

    def __eq__(self, other):
        if not isinstance(other, BiSeq):
            return NotImplemented
        return (self.left == other.left and self.core == other.core
                and self.right == other.right and self.offset == other.offset)

    def __hash__(self):
        return hash((self.left, self.core, self.right, self.offset))

    def __repr__(self):
        return f"BiSeq({self.left!r}, {self.core!r}, {self.right!r}, offset={self.offset})"

    def __getitem__(self, i):
        if i < self.offset:
            return self.left[(i - self.offset) % len(self.left)]
        i -= self.offset
        if i < len(self.core):
            return self.core[i]
        return self.right[(i - len(self.core)) % len(self.right)]

    def window(self, lo, hi):
        """The word of symbols at indices lo..hi-1."""
        if hi <= lo:
            return ""
        parts = []
        o, e = self.offset, self.core_end
        if lo < min(hi, o):
            b = min(hi, o)
            p = len(self.left)
            phase = (lo - o) % p
            reps = (b - lo + phase) // p + 1
            parts.append((self.left * reps)[phase:phase + (b - lo)])
        if max(lo, o) < min(hi, e):
            parts.append(self.core[max(lo, o) - o:min(hi, e) - o])
        if max(lo, e) < hi:
            a = max(lo, e)
            q = len(self.right)
            phase = (a - e) % q
            reps = (hi - a + phase) // q + 1
            parts.append((self.right * reps)[phase:phase + (hi - a)])
        return "".join(parts)

    def shift(self, t):
        """The sequence y with y[i] == self[i + t]."""
        return BiSeq(self.left, self.core, self.right, self.offset - t)

    def reverse(self):
        """The sequence y with y[i] == self[-i]."""
        return BiSeq(self.right[::-1], self.core[::-1], self.left[::-1],
                     1 - self.core_end)

    @property
    def is_periodic(self):
        return not self.core and self.left == self.right

    def least_period(self):
        if not self.is_periodic:
            raise ValueError(f"{self!r} is not a periodic sequence")
        return len(self.left)


_PROBE = 16


def first_mismatch_fwd(x, y, start=0):
    """Smallest index >= start where x and y disagree, or None.

    Beyond both cores the sequences are tail-periodic, so scanning one
    common period past that point decides agreement on the whole ray.
    A short probe window is tried first; most lookups disagree early.
    """
    s0 = max(start, x.core_end, y.core_end)
    hi = s0 + math.lcm(len(x.right), len(y.right))
    if hi > start + _PROBE:
        xs = x.window(start, start + _PROBE)
        ys = y.window(start, start + _PROBE)
        if xs != ys:
            for i, (a, b) in enumerate(zip(xs, ys)):
                if a != b:
                    return start + i
        start += _PROBE
    xs = x.window(start, hi)
    ys = y.window(start, hi)
    if xs == ys:
        return None
    for i, (a, b) in enumerate(zip(xs, ys)):
        if a != b:
            return start + i
    return None  # pragma: no cover


def first_mismatch_bwd(x, y, start=-1):
    """Largest index <= start where x and y disagree, or None."""
    s0 = min(start, x.offset - 1, y.offset - 1)
    lo = s0 - math.lcm(len(x.left), len(y.left)) + 1
    if lo < start + 1 - _PROBE:
        xs = x.window(start + 1 - _PROBE, start + 1)
        ys = y.window(start + 1 - _PROBE, start + 1)
        if xs != ys:
            for i in range(_PROBE - 1, -1, -1):
                if xs[i] != ys[i]:
                    return start + 1 - _PROBE + i
        start -= _PROBE
    xs = x.window(lo, start + 1)
    ys = y.window(lo, start + 1)
    if xs == ys:
        return None
    for i in range(len(xs) - 1, -1, -1):
        if xs[i] != ys[i]:
            return lo + i
    return None  # pragma: no cover


_ONE = Fraction(1)


def base_dist(x, y):
    """Shift metric: 2**-m where m is the least |i| with x[i] != y[i]."""
    if x == y:
        return Fraction(0)
    if x[0] != y[0]:
        return _ONE
    candidates = []
    r = first_mismatch_fwd(x, y, 0)
    if r is not None:
        candidates.append(r)
    l = first_mismatch_bwd(x, y, -1)
    if l is not None:
        candidates.append(-l)
    return dyadic(min(candidates))


def right_tails_agree(x, y):
    """True when x[i] == y[i] for all large enough i.

    For tail-periodic sequences this is equivalent to exact agreement from
    the last core boundary on, which one period's worth of symbols decides.
    """
    return first_mismatch_fwd(x, y, max(x.core_end, y.core_end)) is None


def left_tails_agree(x, y):
    """True when x[i] == y[i] for all sufficiently negative i."""
    return first_mismatch_bwd(x, y, min(x.offset, y.offset) - 1) is None


_PERIODIC_CACHE = {}


def periodic_point(k):
    """The tagged periodic point of level k: the k zeroes, one 1 pattern.

    Its least period is k + 1, and distinct levels give distinct orbits
    because each period carries exactly one 1.
    """
    if k < 1:
        raise ValueError("level k must be >= 1")
    if k not in _PERIODIC_CACHE:
        word = "0" * k + "1"
        _PERIODIC_CACHE[k] = BiSeq(word, "", word, 0)
    return _PERIODIC_CACHE[k]


def periodic_orbit(k):
    """All shift images of periodic_point(k), in orbit order."""
    p = periodic_point(k)
    return [p.shift(j) for j in range(k + 1)]


def least_period(x):
    return x.least_period()


def assemble(left_src, lo, word, hi, right_src, right_anchor):
    """Splice three descriptions into one sequence.

    The result equals ``left_src`` below lo, spells ``word`` on [lo, hi),
    and equals ``right_src[i - right_anchor]`` from hi upward.  The caller
    is responsible for making the pieces consistent at the boundaries if
    that matters; no check is done here.
    """
    if len(word) != hi - lo:
        raise ValueError("word length does not match its window")
    start = min(lo, left_src.offset)
    end = max(hi, right_src.core_end + right_anchor)
    syms = []
    for i in range(start, lo):
        syms.append(left_src[i])
    syms.append(word)
    for i in range(hi, end):
        syms.append(right_src[i - right_anchor])
    p = len(left_src.left)
    left = left_src.window(start - p, start)
    q = len(right_src.right)
    right = right_src.window(end - right_anchor, end - right_anchor + q)
    return BiSeq(left, "".join(syms), right, start)


def flip_symbol(x, pos):
    """Copy of x with the symbol at pos inverted."""
    flipped = "1" if x[pos] == "0" else "0"
    return assemble(x, pos, flipped, pos + 1, x, 0)


def base_shadow(po, delta_exp):
    """Trace a finite pseudo-orbit of the shift by a true orbit.

    ``po`` lists points whose one-step jumps are below 2**-delta_exp, i.e.
    base_dist(po[t].shift(1), po[t+1]) < 2**-delta_exp for consecutive
    entries. The traced point reads off each entry's symbol at index 0 and
    extends the ends by the first entry's left tail and the last entry's
    right tail, which keeps it inside this module's point class. Agreement
    between neighbours propagates across the jump windows, so the returned
    point y satisfies base_dist(y.shift(t), po[t]) <= 2**-delta_exp at
    every index. Callers verify that bound rather than trusting it.
    """
    if delta_exp < 1:
        raise ValueError("delta_exp must be >= 1")
    if not po:
        raise ValueError("pseudo-orbit is empty")
    bound = dyadic(delta_exp)
    for t in range(len(po) - 1):
        gap = base_dist(po[t].shift(1), po[t + 1])
        if gap >= bound:
            raise ValueError(
                f"gap {gap} at index {t} is not below 2**-{delta_exp}")
    word = "".join(p[0] for p in po)
    return assemble(po[0], 0, word, len(po), po[-1], len(po) - 1)


def glue_specification(segments, spacing):
    """Glue spaced orbit segments into one point of the shift.

    Each entry of ``segments`` is ((a, b), seq) and prescribes the orbit of
    ``seq`` on the time interval [a, b]: at time t the target is
    seq.shift(t - a). Intervals must be listed in increasing order with
    gaps of at least ``spacing``. The glued point copies each segment's
    coordinates on its interval widened by (spacing - 1) // 2 on both
    sides; everything else is filled with zeroes. At any time t inside an
    interval the glued point then agrees with the prescribed orbit on a
    window of radius (spacing - 1) // 2, which bounds the tracking error
    by 2**-((spacing - 1) // 2).
    """
    if spacing < 1:
        raise ValueError("spacing must be >= 1")
    if not segments:
        raise ValueError("no segments to glue")
    prev_end = None
    for (a, b), _ in segments:
        if a > b:
            raise ValueError(f"interval ({a}, {b}) is empty")
        if prev_end is not None and a < prev_end + spacing:
            raise ValueError(
                f"interval starting at {a} is closer than {spacing} to its predecessor")
        prev_end = b
    h = (spacing - 1) // 2
    lo = segments[0][0][0] - h
    hi = segments[-1][0][1] + h + 1
    buf = ["0"] * (hi - lo)
    for (a, b), seq in segments:
        buf[a - h - lo:b + h + 1 - lo] = seq.window(-h, b - a + h + 1)
    return BiSeq("0", "".join(buf), "0", lo)


@dataclass(frozen=True)
class Cylinder:
    """The set of sequences spelling ``word`` from index ``start`` on."""

    start: int
    word: str

    def __post_init__(self):
        _check_word(self.word, "cylinder word")

    @property
    def end(self):
        return self.start + len(self.word)

    def contains(self, x):
        return x.window(self.start, self.end) == self.word


def mixing_point(u, v, j):
    """A point of u whose j-th shift image lies in v.

    Only meaningful once j separates the two windows; the constructor
    writes both words onto a background of zeroes.
    """
    lo = min(u.start, v.start + j)
    hi = max(u.end, v.end + j)
    buf = ["0"] * (hi - lo)
    buf[u.start - lo:u.end - lo] = u.word
    buf[v.start + j - lo:v.end + j - lo] = v.word
    return BiSeq("0", "".join(buf), "0", lo)


def mixing_witness(u, v, verify_span=16):
    """A time k after which every shift image of u meets v.

    For the full shift the window widths plus the window misalignment give
    such a k: from then on the two constraints live on disjoint index sets
    and a witness point can spell out both. The returned k is verified
    constructively for j in [k, k + verify_span] before being reported.
    """
    k = len(u.word) + len(v.word) + max(0, u.start - v.start)
    for j in range(k, k + verify_span + 1):
        y = mixing_point(u, v, j)
        if not (u.contains(y) and v.contains(y.shift(j))):  # pragma: no cover
            raise AssertionError(f"witness construction failed at j={j}")
    return k
