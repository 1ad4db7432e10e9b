"""Pseudo-orbit tracing: standard, limit and two-sided limit variants.

Every engine here returns a point whose tracking quality has been verified
index by index in exact arithmetic before it is handed back; the verifier
is part of the postcondition, not an afterthought. Finite prefixes stand in
for infinite data throughout: a limit statement is always checked as a
schedule of thresholds with recorded achievement indices, and schedules are
caller data, never invented here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from nexpansive.base import HALF, base_shadow, dyadic, glue_specification
from nexpansive.space import (
    AugPoint,
    BasePoint,
    ExtraPoint,
    aug_dist,
    aug_iterate,
    aug_map,
    canonical_key,
    mirror_point,
    project,
)
from nexpansive.expansivity import (
    in_local_stable,
    in_stable_set,
    in_unstable_set,
    local_stable_radius,
    stable_class_count,
    StabilizationNotReached,
    stabilization_index,
)


class DichotomyError(ValueError):
    """A tightly isolated satellite point appeared inside a pseudo-orbit
    that does not follow its orbit; the chosen delta was too coarse."""


class ScheduleError(ValueError):
    """The schedule and prefix cannot support the requested procedure."""


class IsolationError(ValueError):
    """Satellite orbits cannot be glued to anything below their isolation
    distance, so the requested specification or gluing does not exist."""


class DecayThresholdError(RuntimeError):
    """No candidate point achieved every requested decay threshold."""


@dataclass(frozen=True)
class ShadowModulus:
    """The arithmetic of the tracing guarantee at quality eps.

    Base pseudo-orbits with dyadic gap bound ``base_eps`` are traced within
    ``base_eps`` <= eps/2; projecting a pseudo-orbit of the augmented
    system costs at most 1/m per comparison and three such costs must stay
    below the base gap bound, whence 1/m < min(eps/2, base_eps/3). The
    final tracking error is then eps/2 + 1/m < eps as an exact inequality.
    """

    eps: Fraction
    base_exp: int
    base_eps: Fraction
    m: int

    @property
    def delta(self):
        return Fraction(1, self.m)


def shadow_modulus(eps):
    if eps <= 0:
        raise ValueError("eps must be positive")
    n = 1
    while dyadic(n) > eps / 2:
        n += 1
    need = min(eps / 2, dyadic(n) / 3)
    m = int(1 / need) + 1
    return ShadowModulus(eps=eps, base_exp=n, base_eps=dyadic(n), m=m)


def _jumps(points):
    return tuple(aug_dist(aug_map(points[t]), points[t + 1])
                 for t in range(len(points) - 1))


def _check_schedule(schedule):
    ks = [k for k, _ in schedule]
    bs = [b for _, b in schedule]
    if ks[0] < 0 or any(a >= b for a, b in zip(ks, ks[1:])):
        raise ValueError("schedule indices must be nonnegative and increasing")
    if any(b <= 0 for b in bs) or any(a <= b for a, b in zip(bs, bs[1:])):
        raise ValueError("schedule bounds must be positive and decreasing")


@dataclass(frozen=True)
class PseudoOrbit:
    """A finite run of points with one-step jumps strictly below delta."""

    points: tuple
    delta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if not self.points:
            raise ValueError("pseudo-orbit must contain at least one point")
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        for t, gap in enumerate(_jumps(self.points)):
            if gap >= self.delta:
                raise ValueError(
                    f"jump {gap} at index {t} is not below delta={self.delta}")

    @classmethod
    def trusted(cls, points, delta):
        """Skip jump validation; for internal use on already-proven data."""
        po = object.__new__(cls)
        object.__setattr__(po, "points", tuple(points))
        object.__setattr__(po, "delta", delta)
        return po

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class LimitPseudoOrbit:
    """A forward pseudo-orbit prefix with a vanishing-jump schedule.

    ``schedule`` lists (index, bound) pairs, indices strictly increasing
    and bounds strictly decreasing, and promises that every jump at or
    after each index stays strictly below the paired bound. The promise is
    checked on construction for the part visible in the prefix.
    """

    points: tuple
    schedule: tuple

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "schedule",
                           tuple((int(k), Fraction(b)) for k, b in self.schedule))
        if len(self.points) < 2:
            raise ValueError("prefix needs at least two points")
        if not self.schedule:
            raise ValueError("schedule must not be empty")
        _check_schedule(self.schedule)
        jumps = _jumps(self.points)
        object.__setattr__(self, "jumps", jumps)
        for k, bound in self.schedule:
            bad = [t for t in range(k, len(jumps)) if jumps[t] >= bound]
            if bad:
                raise ValueError(
                    f"jump at index {bad[0]} violates bound {bound} from index {k}")

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class TwoSidedLimitPseudoOrbit:
    """A pseudo-orbit over a window of times with jumps vanishing both ways.

    Points cover the times start..start+len-1 with start <= 0 <= end. Each
    schedule entry (k, bound) promises jumps below the bound at all times
    t >= k and at all times t <= -k - 1.
    """

    points: tuple
    start: int
    schedule: tuple

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "schedule",
                           tuple((int(k), Fraction(b)) for k, b in self.schedule))
        if not self.start <= 0 <= self.end:
            raise ValueError("window must contain time zero")
        if not self.schedule:
            raise ValueError("schedule must not be empty")
        _check_schedule(self.schedule)
        jumps = _jumps(self.points)
        object.__setattr__(self, "jumps", jumps)
        for k, bound in self.schedule:
            for t, gap in enumerate(jumps):
                time = self.start + t
                if (time >= k or time <= -k - 1) and gap >= bound:
                    raise ValueError(
                        f"jump at time {time} violates bound {bound} beyond |t|>={k}")

    @property
    def end(self):
        return self.start + len(self.points) - 1

    def at(self, time):
        return self.points[time - self.start]


@dataclass(frozen=True)
class Specification:
    """Finitely many orbit segments pinned to disjoint time intervals.

    intervals[i] = (a, b) prescribes the orbit of points[i] on [a, b]; at
    time t in that interval the target is the (t - a)-th image of the
    segment point.
    """

    intervals: tuple
    points: tuple

    def __post_init__(self):
        object.__setattr__(self, "intervals",
                           tuple((int(a), int(b)) for a, b in self.intervals))
        object.__setattr__(self, "points", tuple(self.points))
        if len(self.intervals) != len(self.points) or not self.intervals:
            raise ValueError("need one orbit point per interval")
        prev = None
        for a, b in self.intervals:
            if a > b:
                raise ValueError(f"interval ({a}, {b}) is empty")
            if prev is not None and a <= prev:
                raise ValueError("intervals must be disjoint and increasing")
            prev = b

    def target(self, i, t):
        a, _ = self.intervals[i]
        return aug_iterate(self.points[i], t - a)


@dataclass(frozen=True)
class ShadowCheck:
    ok: bool
    eps: Fraction
    worst_index: int
    worst_dist: Fraction


def verify_shadow(po, y, eps, t0=0):
    """Exact per-index check that y tracks the pseudo-orbit within eps.

    Index t of the pseudo-orbit is compared against the (t0 + t)-th image
    of y; the report carries the worst index and its exact distance. The
    comparison is non-strict so that eps equal to the diameter accepts
    every point.
    """
    points = po.points if isinstance(po, PseudoOrbit) else tuple(po)
    worst_i, worst_d = 0, Fraction(0)
    for t, x in enumerate(points):
        d = aug_dist(aug_iterate(y, t0 + t), x)
        if d > worst_d:
            worst_i, worst_d = t, d
    return ShadowCheck(ok=worst_d <= eps, eps=eps,
                       worst_index=worst_i, worst_dist=worst_d)


def shadow_pseudo_orbit(po, eps):
    """Trace a pseudo-orbit of the augmented system within eps.

    Requires po.delta <= 1/m for the modulus of eps. A satellite of level
    below m is isolated beyond the jump bound, so a pseudo-orbit touching
    one can only be a run of that orbit and is traced by its own starting
    point. Otherwise every satellite in the pseudo-orbit sits at level m
    or deeper; projecting to the base costs at most 1/m per point, the
    projected run is traced by a base point within eps/2, and the combined
    error stays below eps. The result is verified at every index before
    being returned.
    """
    mod = shadow_modulus(eps)
    if po.delta > mod.delta:
        raise ValueError(
            f"pseudo-orbit delta {po.delta} is too coarse; tracing at eps={eps} "
            f"needs delta <= {mod.delta}")
    pts = po.points
    small = next((p for p in pts if isinstance(p, ExtraPoint) and p.k < mod.m),
                 None)
    if small is not None:
        idx = pts.index(small)
        expected = tuple(aug_iterate(small, t - idx) for t in range(len(pts)))
        if pts != expected:
            raise DichotomyError(
                f"satellite {small} of level below {mod.m} appears in a "
                "pseudo-orbit that leaves its orbit")
        result = pts[0]
    else:
        traced = base_shadow([project(p) for p in pts], mod.base_exp)
        result = BasePoint(traced)
    check = verify_shadow(po, result, eps)
    if not check.ok:  # pragma: no cover - the modulus arithmetic forbids this
        raise RuntimeError(f"traced point failed its own verification: {check}")
    return result


def specification_spacing(eps):
    """Interval spacing under which specifications are traced within eps."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    h = 0
    while dyadic(h) > eps:
        h += 1
    return 2 * h + 1


def shadow_specification(spec, eps):
    """A single point tracing every segment of the specification within eps.

    Gluing happens in the base, where distant coordinate windows are
    independent; satellite points are isolated by 1/k and cannot be glued
    below that, so they are rejected. The returned point is verified at
    every in-interval time, strictly within eps.
    """
    for p in spec.points:
        if isinstance(p, ExtraPoint):
            raise IsolationError(
                f"{p} is isolated at distance 1/{p.k}; specifications must "
                "use base points")
    spacing = specification_spacing(eps)
    prev = None
    for a, b in spec.intervals:
        if prev is not None and a < prev + spacing:
            raise ScheduleError(
                f"intervals must be {spacing}-spaced for eps={eps}")
        prev = b
    segments = [((a, b), p.seq) for (a, b), p in zip(spec.intervals, spec.points)]
    glued = BasePoint(glue_specification(segments, spacing))
    for i, (a, b) in enumerate(spec.intervals):
        for t in range(a, b + 1):
            d = aug_dist(aug_iterate(glued, t), spec.target(i, t))
            if d >= eps:  # pragma: no cover - the widened copy forbids this
                raise RuntimeError(f"specification trace failed at time {t}: {d}")
    return glued


@dataclass(frozen=True)
class LimitStage:
    resolution: Fraction
    start_index: int
    gap_bound: Fraction
    consistent: bool


@dataclass(frozen=True)
class LimitShadowReport:
    point: AugPoint
    decay: tuple          # ((threshold, first index), ...)
    stages: tuple
    stabilization: int
    candidates: tuple     # canonical keys of the representatives tried


def _decay_index(dists, threshold, min_run=2):
    """First index from which every listed distance stays strictly below
    threshold, or None.

    The bound must be maintained over at least min_run trailing entries;
    a single matching value at the very end is no evidence of decay (the
    traced point always agrees with the final pseudo-orbit entry by
    construction).
    """
    cut = len(dists)
    for t in range(len(dists) - 1, -1, -1):
        if dists[t] >= threshold:
            break
        cut = t
    return cut if cut <= len(dists) - min_run else None


def limit_shadow(sys, lpo, thresholds=None, ambient=Fraction(1, 4), k_hi=None,
                 stabilization_window=16, max_stages=8):
    """Trace a limit pseudo-orbit by a point with vanishing forward error.

    Works in stages: stage j retraces the tail of the prefix from the
    first schedule index whose bound meets the tracing modulus for
    resolution ambient/(j+1), then pulls the traced point back to time
    zero. Finer resolutions keep producing stages as long as the schedule
    supports them; max_stages caps the effort, three stages are the
    minimum. The stage-1 point's stable classes (taken at the stabilized
    iterate) provide finitely many candidates, and the candidate whose
    forward distance to the prefix passes every requested threshold is
    returned together with the index where each threshold is reached.
    Thresholds default to the schedule bounds visible in the prefix.
    """
    pts = lpo.points
    horizon = len(pts)
    stages = []
    for j in range(1, max_stages + 1):
        res = ambient / (j + 1)
        mod = shadow_modulus(res)
        entry = next(((k, b) for k, b in lpo.schedule if b <= mod.delta), None)
        if entry is None or entry[0] > horizon - 2:
            break
        start = entry[0]
        tail = PseudoOrbit.trusted(pts[start:], mod.delta)
        traced = shadow_pseudo_orbit(tail, res)
        stages.append({"res": res, "start": start, "bound": mod.delta,
                       "pullback": aug_iterate(traced, -start)})
    if len(stages) < 3:
        raise ScheduleError(
            "prefix too short relative to the schedule: "
            f"only {len(stages)} usable stages")
    first = stages[0]["pullback"]
    stage_reports = tuple(
        LimitStage(resolution=st["res"], start_index=st["start"],
                   gap_bound=st["bound"],
                   consistent=in_local_stable(
                       aug_iterate(st["pullback"], st["start"]),
                       aug_iterate(first, st["start"]), ambient))
        for st in stages)
    try:
        stab, _ = stabilization_index(sys, first, ambient, stabilization_window,
                                      k_hi=k_hi)
    except StabilizationNotReached:
        stab = 0
    anchor = aug_iterate(first, stab)
    reps = stable_class_count(sys, anchor, ambient, k_hi=k_hi).representatives
    candidates = [aug_iterate(r, -stab) for r in reps]
    if thresholds is None:
        thresholds = tuple(b for k, b in lpo.schedule if k < horizon)
    chosen = None
    chosen_decay = None
    for cand in candidates:
        dists = [aug_dist(aug_iterate(cand, t), pts[t]) for t in range(horizon)]
        decay = [(th, _decay_index(dists, th)) for th in thresholds]
        if all(idx is not None for _, idx in decay):
            chosen, chosen_decay = cand, decay
            break
    if chosen is None:
        raise DecayThresholdError(
            f"none of {len(candidates)} candidates decays through "
            f"{[str(t) for t in thresholds]}")
    return LimitShadowReport(
        point=chosen, decay=tuple(chosen_decay), stages=stage_reports,
        stabilization=stab,
        candidates=tuple(canonical_key(c) for c in candidates))


@dataclass(frozen=True)
class TwoSidedShadowReport:
    point: AugPoint
    past_point: AugPoint
    future_point: AugPoint
    eps: Fraction | None
    delta: Fraction | None
    glue_eps: Fraction | None
    spacing: int | None
    junction: int | None
    past_decay: tuple
    future_decay: tuple


def _mirror_limit_orbit(tslpo):
    """The past half of a two-sided pseudo-orbit, conjugated to run forward.

    Sequence reversal is an isometric conjugacy between the map and its
    inverse; one application of the inverse map stretches distances by at
    most the factor two of the base shift, so the mirrored half validates
    against the original schedule with doubled bounds.
    """
    pts = [mirror_point(tslpo.at(-t)) for t in range(-tslpo.start + 1)]
    schedule = [(k, 2 * b) for k, b in tslpo.schedule]
    return LimitPseudoOrbit(tuple(pts), tuple(schedule))


def _tail_floor(idx, side, bound):
    if idx is None:
        raise ScheduleError(
            f"{side} tail never comes within the gluing bound {bound}")
    return idx


def two_sided_limit_shadow(sys, tslpo, thresholds=(HALF, HALF ** 2, HALF ** 3,
                                                   HALF ** 4),
                           ambient=Fraction(1, 4), k_hi=None):
    """Trace a two-sided limit pseudo-orbit with both tails vanishing.

    The past half (run backwards through the mirror conjugacy) and the
    future half are limit-traced separately. When both traced points are
    base points they are glued: a two-interval specification pins the
    backward orbit of the past point and the forward orbit of the future
    point at times -N and N, the specification is traced in the base, and
    the resulting three-piece pseudo-orbit is traced at the smaller of the
    two uniform local-stable radii. That radius forces the final point
    into the unstable set of the past point and the stable set of the
    future point, which is verified exactly, as are the requested decay
    thresholds on both tails.

    A pair of tails falling into one and the same satellite orbit is
    traced by that orbit directly; tails in distinct satellite orbits
    cannot be glued below their isolation distance and raise.
    """
    past_report = limit_shadow(sys, _mirror_limit_orbit(tslpo),
                               thresholds=thresholds, ambient=ambient,
                               k_hi=k_hi)
    future_half = LimitPseudoOrbit(
        tuple(tslpo.at(t) for t in range(tslpo.end + 1)), tslpo.schedule)
    future_report = limit_shadow(sys, future_half, thresholds=thresholds,
                                 ambient=ambient, k_hi=k_hi)
    p1 = mirror_point(past_report.point)
    p2 = future_report.point
    eps = delta = glue_eps = None
    spacing = junction = None
    if isinstance(p1, ExtraPoint) or isinstance(p2, ExtraPoint):
        if p1 != p2:
            raise IsolationError(
                f"tails converge to {p1} and {p2}, which cannot be glued "
                "below their isolation distance")
        final = p1
    else:
        eps1 = local_stable_radius(sys, past_report.point, ambient, k_hi=k_hi)
        eps2 = local_stable_radius(sys, p2, ambient, k_hi=k_hi)
        eps = min(eps1, eps2)
        mod = shadow_modulus(eps)
        delta = mod.delta
        glue_eps = delta / 4
        spacing = specification_spacing(glue_eps)
        past_d = [aug_dist(aug_iterate(p1, -t), tslpo.at(-t))
                  for t in range(-tslpo.start + 1)]
        fut_d = [aug_dist(aug_iterate(p2, t), tslpo.at(t))
                 for t in range(tslpo.end + 1)]
        junction = max(_tail_floor(_decay_index(past_d, delta), "past", delta),
                       _tail_floor(_decay_index(fut_d, delta), "future", delta),
                       (spacing + 1) // 2)
        if junction > min(-tslpo.start, tslpo.end) - 1:
            raise ScheduleError(
                f"window too short: gluing needs both tails within "
                f"{delta} by time {junction}")
        spec = Specification(((-junction, -junction), (junction, junction)),
                             (aug_iterate(p1, -junction),
                              aug_iterate(p2, junction)))
        z = shadow_specification(spec, glue_eps)
        glued = []
        for t in range(tslpo.start, tslpo.end + 1):
            if t < -junction:
                glued.append(aug_iterate(p1, t))
            elif t <= junction:
                glued.append(aug_iterate(z, t))
            else:
                glued.append(aug_iterate(p2, t))
        po = PseudoOrbit(tuple(glued), delta)
        traced = shadow_pseudo_orbit(po, eps)
        final = aug_iterate(traced, -tslpo.start)
    if not in_unstable_set(final, p1) or not in_stable_set(final, p2):
        raise RuntimeError(  # pragma: no cover - construction guarantees both
            "glued trace lost a tail equivalence")
    past_final = [aug_dist(aug_iterate(final, -t), tslpo.at(-t))
                  for t in range(-tslpo.start + 1)]
    fut_final = [aug_dist(aug_iterate(final, t), tslpo.at(t))
                 for t in range(tslpo.end + 1)]
    past_decay = [(th, _decay_index(past_final, th)) for th in thresholds]
    future_decay = [(th, _decay_index(fut_final, th)) for th in thresholds]
    for side, decay in (("past", past_decay), ("future", future_decay)):
        missing = [str(th) for th, idx in decay if idx is None]
        if missing:
            raise DecayThresholdError(
                f"{side} tail never reaches thresholds {missing}")
    return TwoSidedShadowReport(
        point=final, past_point=p1, future_point=p2,
        eps=eps, delta=delta, glue_eps=glue_eps, spacing=spacing,
        junction=junction,
        past_decay=tuple(past_decay), future_decay=tuple(future_decay))
