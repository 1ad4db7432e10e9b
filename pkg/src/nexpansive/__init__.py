"""Exact-arithmetic lab for a finitely expansive system over the binary shift.

The package builds a compact augmented phase space (the full shift plus
countably many isolated satellite orbits), and verifies its dynamics with
rational arithmetic only: dynamic-ball cardinality bounds, pseudo-orbit
tracing with explicit moduli, chain-recurrent class counts, stable-set
statistics and the limit variants of tracing.
"""

from nexpansive.base import (
    BiSeq,
    Cylinder,
    base_dist,
    base_shadow,
    dyadic,
    flip_symbol,
    glue_specification,
    least_period,
    left_tails_agree,
    mixing_witness,
    periodic_orbit,
    periodic_point,
    right_tails_agree,
)
from nexpansive.space import (
    AugPoint,
    AugSystem,
    BasePoint,
    ExtraPoint,
    aug_dist,
    aug_iterate,
    aug_map,
    aug_map_inv,
    canonical_key,
    mirror_point,
    orbit_label,
    project,
)
from nexpansive.expansivity import (
    DynamicBallReport,
    ExpansivityCertificate,
    ExpansivityFalsifier,
    StableClassReport,
    check_expansivity,
    dynamic_ball,
    in_local_stable,
    in_local_unstable,
    in_stable_set,
    in_unstable_set,
    local_stable_radius,
    lower_expansivity_falsifier,
    stabilization_index,
    stable_class_count,
    sup_forward_dist,
    sup_orbit_dist,
)
from nexpansive.chains import (
    ChainGraph,
    ClassPartition,
    build_chain_graph,
    chain_classes,
    isolation_certificate,
)
from nexpansive.shadowing import (
    LimitPseudoOrbit,
    PseudoOrbit,
    Specification,
    TwoSidedLimitPseudoOrbit,
    limit_shadow,
    shadow_modulus,
    shadow_pseudo_orbit,
    shadow_specification,
    two_sided_limit_shadow,
    verify_shadow,
)

__version__ = "0.1.0"
