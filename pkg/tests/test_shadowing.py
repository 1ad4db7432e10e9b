import random
from fractions import Fraction

import pytest

from nexpansive.base import BiSeq, dyadic, periodic_point
from nexpansive.space import (
    BasePoint,
    ExtraPoint,
    aug_dist,
    aug_iterate,
    mirror_point,
)
from nexpansive.expansivity import in_stable_set, in_unstable_set
from nexpansive.shadowing import (
    DecayThresholdError,
    DichotomyError,
    IsolationError,
    LimitPseudoOrbit,
    PseudoOrbit,
    ScheduleError,
    Specification,
    TwoSidedLimitPseudoOrbit,
    limit_shadow,
    shadow_modulus,
    shadow_pseudo_orbit,
    shadow_specification,
    specification_spacing,
    two_sided_limit_shadow,
    verify_shadow,
)
from nexpansive.samples import (
    drifting_two_sided_orbit,
    hop_pseudo_orbit,
    switching_limit_orbit,
)

QUARTER = Fraction(1, 4)


class TestModulus:
    def test_quarter(self):
        mod = shadow_modulus(QUARTER)
        assert mod.base_eps == Fraction(1, 8)
        assert mod.m == 25
        assert mod.delta == Fraction(1, 25)

    def test_error_budget_closes(self):
        for eps in (QUARTER, Fraction(1, 8), Fraction(2, 7), Fraction(1, 3)):
            mod = shadow_modulus(eps)
            assert mod.base_eps <= eps / 2
            assert mod.delta < eps / 2
            assert 3 * mod.delta < mod.base_eps
            assert eps / 2 + mod.delta < eps


class TestPseudoOrbitTypes:
    def test_jump_validation(self):
        with pytest.raises(ValueError, match="index 0"):
            PseudoOrbit((BasePoint(BiSeq("0")), BasePoint(BiSeq("1"))),
                        Fraction(1, 4))
        PseudoOrbit((BasePoint(BiSeq("0")), BasePoint(BiSeq("0"))),
                    Fraction(1, 4))

    def test_limit_schedule_validation(self):
        zero = BasePoint(BiSeq("0"))
        pts = tuple(aug_iterate(zero, t) for t in range(8))
        LimitPseudoOrbit(pts, ((0, Fraction(1, 2)), (2, Fraction(1, 4))))
        with pytest.raises(ValueError, match="decreasing"):
            LimitPseudoOrbit(pts, ((0, Fraction(1, 4)), (2, Fraction(1, 2))))
        with pytest.raises(ValueError, match="increasing"):
            LimitPseudoOrbit(pts, ((2, Fraction(1, 2)), (2, Fraction(1, 4))))

    def test_limit_gap_checks(self):
        zero = BasePoint(BiSeq("0"))
        spike = BasePoint(BiSeq("0", "1", "0", 6))
        pts = (zero, spike, aug_iterate(spike, 1), aug_iterate(spike, 2))
        # the jump into the spike point has size 2**-6
        LimitPseudoOrbit(pts, ((0, Fraction(1, 32)),))
        with pytest.raises(ValueError, match="violates"):
            LimitPseudoOrbit(pts, ((0, Fraction(1, 128)),))

    def test_two_sided_window_contains_zero(self):
        zero = BasePoint(BiSeq("0"))
        with pytest.raises(ValueError, match="zero"):
            TwoSidedLimitPseudoOrbit((zero, zero), 3, ((0, Fraction(1, 2)),))

    def test_specification_ordering(self):
        zero = BasePoint(BiSeq("0"))
        with pytest.raises(ValueError):
            Specification(((0, 3), (2, 5)), (zero, zero))


class TestStandardShadowing:
    def test_true_orbit(self, sys3):
        x = BasePoint(BiSeq("01", "100", "0", -1))
        po = PseudoOrbit(tuple(aug_iterate(x, t) for t in range(12)),
                         Fraction(1, 64))
        traced = shadow_pseudo_orbit(po, QUARTER)
        check = verify_shadow(po, traced, QUARTER)
        assert check.ok and check.worst_dist == 0

    def test_satellite_orbit_traces_itself(self, sys3):
        q = ExtraPoint(1, 5, 0)
        po = PseudoOrbit(tuple(aug_iterate(q, t) for t in range(9)),
                         Fraction(1, 64))
        assert shadow_pseudo_orbit(po, QUARTER) == q

    def test_coarse_delta_rejected(self, sys3):
        po = PseudoOrbit((BasePoint(BiSeq("0")),), Fraction(1, 16))
        with pytest.raises(ValueError, match="too coarse"):
            shadow_pseudo_orbit(po, QUARTER)

    def test_dichotomy_guard(self, sys3):
        # a deliberately mislabeled pseudo-orbit: the claimed delta passes
        # the modulus gate, but the points leave a shallow satellite orbit
        pts = (ExtraPoint(1, 3, 0), BasePoint(periodic_point(3).shift(1)))
        bogus = PseudoOrbit.trusted(pts, Fraction(1, 1000))
        with pytest.raises(DichotomyError):
            shadow_pseudo_orbit(bogus, QUARTER)

    def test_wandering_orbits_verified(self, sys3):
        rng = random.Random(131)
        for _ in range(12):
            po = hop_pseudo_orbit(sys3, rng, length=100, delta_exp=6)
            traced = shadow_pseudo_orbit(po, QUARTER)
            check = verify_shadow(po, traced, QUARTER)
            assert check.ok
            # the modulus arithmetic promises strictly better than eps
            assert check.worst_dist < QUARTER

    def test_verify_shadow_flags_perturbation(self, sys3):
        x = BasePoint(periodic_point(6))
        po = PseudoOrbit(tuple(aug_iterate(x, t) for t in range(10)),
                         Fraction(1, 64))
        from nexpansive.base import flip_symbol
        bad = BasePoint(flip_symbol(x.seq, 3))
        check = verify_shadow(po, bad, Fraction(1, 16))
        assert not check.ok
        assert check.worst_dist == 1
        assert check.worst_index == 3

    def test_diameter_accepts_everything(self, sys3):
        po = PseudoOrbit((BasePoint(BiSeq("0")), BasePoint(BiSeq("0"))),
                         Fraction(1, 8))
        assert verify_shadow(po, ExtraPoint(1, 1, 0), Fraction(3)).ok


class TestSpecificationShadowing:
    def test_single_interval(self, sys3):
        x = BasePoint(BiSeq("011", "0", "10", 0))
        spec = Specification(((-2, 4),), (x,))
        traced = shadow_specification(spec, Fraction(1, 8))
        for t in range(-2, 5):
            assert aug_dist(aug_iterate(traced, t),
                            spec.target(0, t)) < Fraction(1, 8)

    def test_two_intervals(self, sys3):
        spec = Specification(((-8, -4), (5, 9)),
                             (BasePoint(periodic_point(2)),
                              BasePoint(periodic_point(1))))
        traced = shadow_specification(spec, Fraction(1, 8))
        assert isinstance(traced, BasePoint)
        for i, (a, b) in enumerate(spec.intervals):
            for t in range(a, b + 1):
                assert aug_dist(aug_iterate(traced, t),
                                spec.target(i, t)) < Fraction(1, 8)

    def test_spacing_formula(self):
        assert specification_spacing(Fraction(1, 8)) == 7
        assert specification_spacing(Fraction(1)) == 1
        assert specification_spacing(Fraction(1, 5)) == 7

    def test_satellite_rejected(self, sys3):
        spec = Specification(((0, 0), (40, 40)),
                             (BasePoint(BiSeq("0")), ExtraPoint(1, 4, 0)))
        with pytest.raises(IsolationError, match="1/4"):
            shadow_specification(spec, Fraction(1, 8))

    def test_crowded_intervals_rejected(self, sys3):
        spec = Specification(((0, 0), (3, 3)),
                             (BasePoint(BiSeq("0")), BasePoint(BiSeq("1"))))
        with pytest.raises(ScheduleError):
            shadow_specification(spec, Fraction(1, 8))


class TestLimitShadowing:
    def test_true_orbit_prefix(self, sys3):
        w = BasePoint(BiSeq("011", "0", "10", 0))
        pts = tuple(aug_iterate(w, t) for t in range(40))
        lpo = LimitPseudoOrbit(pts, ((0, Fraction(1, 64)),
                                     (1, Fraction(1, 256)),
                                     (2, Fraction(1, 1024))))
        report = limit_shadow(sys3, lpo)
        assert in_stable_set(report.point, w)
        assert all(idx == 0 for _, idx in report.decay)

    def test_switching_prefix_decays(self, sys3):
        lpo = switching_limit_orbit(stages=8)
        thresholds = tuple(dyadic(t) for t in range(1, 6))
        report = limit_shadow(sys3, lpo, thresholds=thresholds)
        assert [th for th, _ in report.decay] == list(thresholds)
        assert all(idx is not None for _, idx in report.decay)
        assert all(stage.consistent for stage in report.stages)
        assert len(report.stages) >= 3
        # recompute the decay claim independently
        for th, idx in report.decay:
            for t in range(idx, len(lpo.points)):
                assert aug_dist(aug_iterate(report.point, t),
                                lpo.points[t]) < th

    def test_convergence_into_satellite_orbit(self, sys3):
        q = ExtraPoint(1, 4, 0)
        pts = tuple(aug_iterate(q, t) for t in range(64))
        lpo = LimitPseudoOrbit(pts, ((0, Fraction(1, 64)),
                                     (4, Fraction(1, 256)),
                                     (8, Fraction(1, 1024))))
        report = limit_shadow(sys3, lpo)
        assert isinstance(report.point, ExtraPoint)
        assert report.point.k == 4
        assert aug_dist(report.point, q) == 0

    def test_short_prefix_rejected(self, sys3):
        w = BasePoint(BiSeq("0"))
        pts = tuple(aug_iterate(w, t) for t in range(40))
        lpo = LimitPseudoOrbit(pts, ((0, Fraction(1, 2)),))
        with pytest.raises(ScheduleError, match="stages"):
            limit_shadow(sys3, lpo)

    def test_unreachable_threshold_raises(self, sys3):
        # the drifting orbit keeps a defect at every fourth index, so no
        # single point can track it to absurd precision
        ts = drifting_two_sided_orbit(half=64)
        lpo = LimitPseudoOrbit(tuple(ts.at(t) for t in range(ts.end + 1)),
                               ts.schedule)
        with pytest.raises(DecayThresholdError):
            limit_shadow(sys3, lpo, thresholds=(Fraction(1, 2 ** 4000),))

    def test_mirrored_run_matches_past_half_treatment(self, sys3):
        # running the mirrored half forward and mirroring back is exactly
        # how the two-sided engine produces its past point
        ts = drifting_two_sided_orbit(half=64)
        from nexpansive.shadowing import _mirror_limit_orbit
        mirrored = _mirror_limit_orbit(ts)
        report = limit_shadow(sys3, mirrored,
                              thresholds=(Fraction(1, 2), Fraction(1, 4)))
        full = two_sided_limit_shadow(sys3, ts,
                                      thresholds=(Fraction(1, 2),
                                                  Fraction(1, 4)))
        assert mirror_point(report.point) == full.past_point


class TestTwoSidedShadowing:
    def test_drifting_orbit(self, sys3):
        ts = drifting_two_sided_orbit(half=128)
        report = two_sided_limit_shadow(sys3, ts)
        assert in_unstable_set(report.point, report.past_point)
        assert in_stable_set(report.point, report.future_point)
        assert report.junction is not None
        assert 2 * report.junction >= report.spacing
        for th, idx in report.past_decay + report.future_decay:
            assert idx is not None
        # the past tail really converges to the past pattern's orbit
        assert in_unstable_set(report.past_point,
                               BasePoint(periodic_point(2)))

    def test_degenerate_same_orbit(self, sys3):
        ts = drifting_two_sided_orbit(past_word="001", future_word="001",
                                      half=64, defect_step=8)
        report = two_sided_limit_shadow(sys3, ts)
        assert in_stable_set(report.point, report.future_point)
        assert in_unstable_set(report.point, report.past_point)
        assert in_stable_set(report.past_point, report.future_point)

    def test_same_satellite_orbit_short_circuits(self, sys3):
        q = ExtraPoint(1, 3, 0)
        pts = tuple(aug_iterate(q, t) for t in range(-20, 21))
        ts = TwoSidedLimitPseudoOrbit(pts, -20,
                                      ((0, Fraction(1, 64)),
                                       (4, Fraction(1, 256)),
                                       (8, Fraction(1, 1024))))
        report = two_sided_limit_shadow(sys3, ts)
        assert isinstance(report.point, ExtraPoint)
        assert report.point.k == 3
        assert report.junction is None

    def test_distinct_satellite_orbits_rejected(self, sys3):
        left = [ExtraPoint(1, 3, t % 4) for t in range(-20, 0)]
        right = [ExtraPoint(2, 3, t % 4) for t in range(0, 21)]
        pts = tuple(left + right)
        ts = TwoSidedLimitPseudoOrbit(pts, -20,
                                      ((0, Fraction(1, 2)),
                                       (6, Fraction(1, 128)),
                                       (10, Fraction(1, 1024))))
        with pytest.raises(IsolationError):
            two_sided_limit_shadow(sys3, ts)
