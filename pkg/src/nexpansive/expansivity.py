"""Dynamic balls, expansivity certificates and stable-set bookkeeping.

All suprema of distance sequences t -> d(f^t x, f^t y) are computed exactly.
The metric splits into a constant tag separation plus the base distance of
the two projections, and the projections are eventually periodic, so the
whole story reduces to locating mismatches between two such sequences:

* over all integer times, two distinct projections become fully separated
  (base distance 1) at any mismatch position;
* over forward times, a mismatch at a nonnegative index again forces full
  separation, otherwise the supremum is attained at time zero and equals
  the depth of the last mismatch in the past;
* along forward limits, the base part dies out exactly when the right
  tails eventually agree, and otherwise keeps returning to 1.

Those three facts drive every membership test in this module and make the
reported sets exact whenever the radius stays below 1/2, the separation
scale of the base shift.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from nexpansive.base import (
    HALF,
    BiSeq,
    first_mismatch_bwd,
    first_mismatch_fwd,
    flip_symbol,
    left_tails_agree,
    right_tails_agree,
)
from nexpansive.space import (
    AugPoint,
    BasePoint,
    ExtraPoint,
    aug_dist,
    aug_iterate,
    canonical_key,
    orbit_label,
    project,
    tag_gap,
)

ONE = Fraction(1)
ZERO = Fraction(0)


def _base_sup_fwd(s, u):
    """sup over t >= 0 of base_dist(s.shift(t), u.shift(t)), exactly."""
    if first_mismatch_fwd(s, u, 0) is not None:
        return ONE
    w = first_mismatch_bwd(s, u, -1)
    return ZERO if w is None else HALF ** (-w)


def _base_sup_bwd(s, u):
    """sup over t <= 0 of base_dist(s.shift(t), u.shift(t)), exactly."""
    if first_mismatch_bwd(s, u, 0) is not None:
        return ONE
    w = first_mismatch_fwd(s, u, 1)
    return ZERO if w is None else HALF ** w


def sup_forward_dist(x, y):
    """sup of d(f^t x, f^t y) over t >= 0."""
    if x == y:
        return ZERO
    return tag_gap(x, y) + _base_sup_fwd(project(x), project(y))


def sup_backward_dist(x, y):
    """sup of d(f^t x, f^t y) over t <= 0."""
    if x == y:
        return ZERO
    return tag_gap(x, y) + _base_sup_bwd(project(x), project(y))


def sup_orbit_dist(x, y):
    """sup of d(f^t x, f^t y) over all integer t."""
    if x == y:
        return ZERO
    px, py = project(x), project(y)
    return tag_gap(x, y) + (ZERO if px == py else ONE)


def limsup_forward_dist(x, y):
    """Largest separation that recurs along forward time.

    If the projections eventually share their right tails the base part
    vanishes in the limit; otherwise mismatches recur forever and the base
    part keeps hitting 1.
    """
    if x == y:
        return ZERO
    px, py = project(x), project(y)
    return tag_gap(x, y) + (ZERO if right_tails_agree(px, py) else ONE)


def limsup_backward_dist(x, y):
    if x == y:
        return ZERO
    px, py = project(x), project(y)
    return tag_gap(x, y) + (ZERO if left_tails_agree(px, py) else ONE)


def in_local_stable(y, x, eps):
    """Membership of y in the local stable set of x at size eps."""
    return sup_forward_dist(y, x) <= eps


def in_local_unstable(y, x, eps):
    return sup_backward_dist(y, x) <= eps


def in_stable_set(y, x):
    """Does d(f^t y, f^t x) tend to zero as t grows?

    A satellite point keeps its tag separation forever, so only pairs of
    base points with eventually equal right tails converge.
    """
    if x == y:
        return True
    if isinstance(x, BasePoint) and isinstance(y, BasePoint):
        return right_tails_agree(x.seq, y.seq)
    return False


def in_unstable_set(y, x):
    if x == y:
        return True
    if isinstance(x, BasePoint) and isinstance(y, BasePoint):
        return left_tails_agree(x.seq, y.seq)
    return False


@dataclass(frozen=True)
class DynamicBallReport:
    center: AugPoint
    radius: Fraction
    members: tuple
    distances: tuple
    mode: str                # "exact" or "horizon"
    horizon: int | None
    k_hi: int
    universe: str

    def __len__(self):
        return len(self.members)


def _exact_ball_members(sys, center, radius):
    """Everything within orbit-sup radius < 1/2 of the center.

    Distinct base points separate to 1, distinct satellite orbits to more
    than 1, so below 1/2 a ball contains at most the center's satellite
    cluster: the copies sharing the center's exact position over the base
    periodic orbit, plus that base point itself, all at distance 1/k.
    """
    members = {center: ZERO}
    if isinstance(center, ExtraPoint):
        if Fraction(1, center.k) <= radius:
            gap = Fraction(1, center.k)
            for i in range(1, sys.multiplicity(center.k) + 1):
                members.setdefault(ExtraPoint(i, center.k, center.j), gap)
            members[BasePoint(project(center))] = gap
    else:
        label = orbit_label(center.seq)
        if label is not None:
            k, j = label
            if Fraction(1, k) <= radius:
                gap = Fraction(1, k)
                for i in range(1, sys.multiplicity(k) + 1):
                    members[ExtraPoint(i, k, j)] = gap
    return members


def window_sup_dist(x, y, horizon):
    """max of d(f^t x, f^t y) over |t| <= horizon; a lower bound for the sup."""
    return max(aug_dist(aug_iterate(x, t), aug_iterate(y, t))
               for t in range(-horizon, horizon + 1))


def dynamic_ball(sys, center, radius, k_hi=None, mode="exact", horizon=32,
                 candidates=()):
    """The set of points tracking the center's orbit within ``radius``.

    Exact mode requires radius < 1/2 and derives the full member set from
    the metric's case structure; no enumeration bound can affect it. The
    horizon mode restricts attention to the enumerated satellites up to
    k_hi together with caller-supplied candidates, and tests each over the
    time window |t| <= horizon, which is the honest thing to report once
    the radius reaches the base separation scale.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    sys.validate_point(center)
    k_hi = sys.k_max if k_hi is None else k_hi
    if mode == "exact":
        if radius >= HALF:
            raise ValueError("exact dynamic balls require radius < 1/2")
        members = _exact_ball_members(sys, center, radius)
        universe = ("closed form over all satellites and base points; "
                    f"satellite levels up to k_hi={k_hi} enumerated for cross-checks")
        hor = None
    elif mode == "horizon":
        pool = {center}
        pool.update(sys.extra_points(k_hi))
        pool.update(candidates)
        members = {}
        for y in sorted(pool, key=canonical_key):
            d = window_sup_dist(center, y, horizon)
            if d <= radius:
                members[y] = d
        universe = (f"satellites up to k_hi={k_hi} plus {len(candidates)} "
                    f"caller candidates, window |t|<={horizon}")
        hor = horizon
    else:
        raise ValueError(f"unknown mode {mode!r}")
    ordered = sorted(members, key=canonical_key)
    return DynamicBallReport(
        center=center, radius=radius,
        members=tuple(ordered),
        distances=tuple(members[y] for y in ordered),
        mode=mode, horizon=hor, k_hi=k_hi, universe=universe)


@dataclass(frozen=True)
class ExpansivityCertificate:
    bound: int
    radius: Fraction
    sample_size: int
    largest_ball: int
    witness: AugPoint


@dataclass(frozen=True)
class ExpansivityFalsifier:
    bound: int
    radius: Fraction
    center: AugPoint
    members: tuple
    distances: tuple


def check_expansivity(sys, radius, sample, k_hi=None, bound=None):
    """Certify that no dynamic ball over the sample exceeds ``bound`` points.

    Returns a certificate, or a falsifier listing a ball with bound + 1
    members and their exact orbit suprema.
    """
    bound = sys.n if bound is None else bound
    largest, witness = 0, None
    seen = 0
    for x in sample:
        ball = dynamic_ball(sys, x, radius, k_hi=k_hi)
        seen += 1
        if len(ball) > largest:
            largest, witness = len(ball), x
        if len(ball) > bound:
            return ExpansivityFalsifier(
                bound=bound, radius=radius, center=x,
                members=ball.members, distances=ball.distances)
    return ExpansivityCertificate(
        bound=bound, radius=radius, sample_size=seen,
        largest_ball=largest, witness=witness)


def lower_expansivity_falsifier(sys, radius):
    """A ball of radius below ``radius`` carrying n points.

    Works at every positive radius: pick a level k with 1/k < radius and
    the cluster around the level-k periodic point fills the ball, so no
    expansivity bound below n can hold.
    """
    if sys.variant != "standard" or sys.n < 2:
        raise ValueError("needs the standard variant with n >= 2")
    if radius <= 0:
        raise ValueError("radius must be positive")
    k = max(3, int(1 / radius) + 1)
    ball = dynamic_ball(sys, BasePoint(project(ExtraPoint(1, k, 0))),
                        Fraction(1, k))
    return ExpansivityFalsifier(
        bound=sys.n - 1, radius=radius, center=ball.center,
        members=ball.members, distances=ball.distances)


def _tail_extension(seq):
    """The periodic sequence that continues seq's right tail over all time."""
    return BiSeq(seq.right, "", seq.right, seq.core_end)


@dataclass(frozen=True)
class StableClassReport:
    center: AugPoint
    epsilon: Fraction
    count: int
    representatives: tuple
    classes: tuple
    members: tuple
    universe: str


def _stable_candidates(sys, center, eps, sample, probe_depth):
    """Candidate pool whose scan provably captures every stable class.

    Below 1/2 a member of the local stable set either shares the center's
    right-tail data (one class, the center's own) or is a satellite whose
    projection agrees with the center from time zero on. The projection is
    then forced: it is the periodic continuation of the center's right
    tail, so the only satellite classes live over that single orbit
    position. The pool lists those forced points, the center's satellite
    cluster when the center is itself a satellite, and probe points around
    the boundary so the scan exercises both outcomes.
    """
    pool = {center}
    s = project(center)
    if isinstance(center, ExtraPoint):
        for i in range(1, sys.multiplicity(center.k) + 1):
            pool.add(ExtraPoint(i, center.k, center.j))
        pool.add(BasePoint(s))
    else:
        ext = _tail_extension(s)
        label = orbit_label(ext)
        if label is not None:
            k, j = label
            for i in range(1, sys.multiplicity(k) + 1):
                pool.add(ExtraPoint(i, k, j))
            pool.add(BasePoint(ext))
    for d in (2, probe_depth):
        pool.add(BasePoint(flip_symbol(s, -(d + 1))))
        pool.add(BasePoint(flip_symbol(s, d + 1)))
    pool.update(sample)
    return sorted(pool, key=canonical_key)


def stable_class_count(sys, center, eps, k_hi=None, sample=(), probe_depth=8):
    """Count the distinct stable sets meeting the local stable set of center.

    Members of the local stable set at size eps are grouped by mutual
    stable-set membership; the report carries one representative per
    class. The center always represents its own class, other classes take
    their least member under the canonical order. Exact for eps < 1/2 by
    the candidate analysis in _stable_candidates.
    """
    if eps < 0:
        raise ValueError("eps must be >= 0")
    if eps >= HALF:
        raise ValueError("exact class counting requires eps < 1/2")
    sys.validate_point(center)
    k_hi = sys.k_max if k_hi is None else k_hi
    pool = _stable_candidates(sys, center, eps, sample, probe_depth)
    members = [y for y in pool if in_local_stable(y, center, eps)]
    own = [y for y in members if in_stable_set(y, center)]
    classes = [own]
    for y in members:
        if in_stable_set(y, center):
            continue
        for cls in classes[1:]:
            if in_stable_set(y, cls[0]):
                cls.append(y)
                break
        else:
            classes.append([y])
    rest = sorted(classes[1:], key=lambda cls: canonical_key(min(cls, key=canonical_key)))
    ordered = [classes[0]] + rest
    reps = [center] + [min(cls, key=canonical_key) for cls in rest]
    return StableClassReport(
        center=center, epsilon=eps, count=len(ordered),
        representatives=tuple(reps),
        classes=tuple(tuple(sorted(cls, key=canonical_key)) for cls in ordered),
        members=tuple(sorted(members, key=canonical_key)),
        universe=f"forced satellite orbit plus probes (depth {probe_depth}) "
                 f"plus {len(sample)} caller points")


def _stable_entry_time(center, eps, multiplicity):
    """First iterate at which the forced satellite cluster joins the
    local stable set, or 0 when it never does.

    For a base center whose right tail continues into a tagged periodic
    orbit, membership of that cluster at iterate m requires every mismatch
    with the periodic continuation to lie in the past and the last one to
    sit deeper than the spare radius. Both conditions move one step per
    iterate, so the entry time is read off the last mismatch position.
    """
    if isinstance(center, ExtraPoint):
        return 0
    s = center.seq
    ext = _tail_extension(s)
    label = orbit_label(ext)
    if label is None:
        return 0
    k, _ = label
    if multiplicity(k) < 1:
        return 0
    if s == ext:
        return 0
    spare = eps - Fraction(1, k)
    if spare <= 0:
        return 0
    last = first_mismatch_bwd(s, ext, max(s.core_end, ext.core_end))
    depth = 0
    while HALF ** depth > spare:
        depth += 1
    return max(0, last + depth)


def local_stable_radius(sys, center, eps, k_hi=None):
    """A radius below which local stable sets collapse into true stable sets
    along the whole orbit of the center.

    The count of stable classes stabilizes along the orbit; at the
    stabilized iterate, each competing class keeps a recurrent separation
    from the center, and a quarter of the smallest such separation is a
    safe radius for every iterate. With no competitor anywhere on the
    orbit the requested eps is already safe.
    """
    if not 0 < eps < HALF:
        raise ValueError("eps must lie in (0, 1/2)")
    entry = _stable_entry_time(center, eps, sys.multiplicity)
    anchor = aug_iterate(center, entry)
    report = stable_class_count(sys, anchor, eps, k_hi=k_hi)
    if report.count == 1:
        return eps
    seps = [limsup_forward_dist(z, anchor)
            for z in report.representatives if z != anchor]
    return min(seps) / 4


class StabilizationNotReached(RuntimeError):
    """The class count was still changing at the end of the scan window."""


def stabilization_index(sys, center, eps, m_hi, k_hi=None):
    """Least iterate from which the stable-class count stays constant.

    Scans n(f^t x, eps) for t in [0, m_hi] and returns (l, value) where the
    count equals ``value`` on [l, m_hi]. Raises StabilizationNotReached when
    the constant stretch is a single point, since then the window shows no
    plateau at all.
    """
    if m_hi < 1:
        raise ValueError("m_hi must be >= 1")
    counts = [stable_class_count(sys, aug_iterate(center, t), eps, k_hi=k_hi).count
              for t in range(m_hi + 1)]
    l = m_hi
    while l > 0 and counts[l - 1] == counts[m_hi]:
        l -= 1
    if l == m_hi:
        raise StabilizationNotReached(
            f"count still changing at iterate {m_hi}: {counts}")
    return l, counts[m_hi]


def orbit_stable_inclusion_failures(sys, center, eps, k_hi=None, window=8):
    """Iterates m in [-window, window] where the local stable set at the
    radius from local_stable_radius escapes the true stable set.

    Returns (radius, failures); an empty failure list verifies the
    uniform inclusion along the orbit window.
    """
    radius = local_stable_radius(sys, center, eps, k_hi=k_hi)
    failures = []
    for m in range(-window, window + 1):
        rep = stable_class_count(sys, aug_iterate(center, m), radius, k_hi=k_hi)
        if rep.count != 1:
            failures.append(m)
    return radius, failures
