"""Batch experiment runner with machine-readable reports.

Each subcommand builds the system, runs one verification suite and writes
a JSON report embedding the effective configuration. Reports contain only
exact data (rationals as "p/q" strings) and are byte-identical for
identical configuration and seed. Exit status: 0 when every check passed,
1 when a claimed property failed (the report is still written), 2 for
invalid input.
"""

from __future__ import annotations

import json
import random
import sys as _sys
from fractions import Fraction
from pathlib import Path

import click

from nexpansive import __version__
from nexpansive.base import BiSeq, periodic_point
from nexpansive.space import AugSystem, BasePoint, ExtraPoint, aug_dist
from nexpansive.expansivity import (
    ExpansivityCertificate,
    check_expansivity,
    dynamic_ball,
    lower_expansivity_falsifier,
    stable_class_count,
    orbit_stable_inclusion_failures,
)
from nexpansive.chains import build_chain_graph, chain_classes
from nexpansive.chains import edges_csv as chain_edges_csv
from nexpansive.shadowing import (
    shadow_modulus,
    shadow_pseudo_orbit,
    two_sided_limit_shadow,
    limit_shadow,
    verify_shadow,
)
from nexpansive.samples import (
    construction_sample,
    drifting_two_sided_orbit,
    hop_pseudo_orbit,
    random_triple,
    switching_limit_orbit,
)
from nexpansive.codec import encode, parse_fraction


def _parse_point(text):
    """Point syntax: extra:i,k,j | periodic:k[,j] | base:L,CORE,R,OFFSET | zeros."""
    kind, _, rest = text.partition(":")
    try:
        if kind == "zeros":
            return BasePoint(BiSeq("0"))
        if kind == "extra":
            i, k, j = (int(v) for v in rest.split(","))
            return ExtraPoint(i, k, j)
        if kind == "periodic":
            parts = rest.split(",")
            k = int(parts[0])
            j = int(parts[1]) if len(parts) > 1 else 0
            return BasePoint(periodic_point(k).shift(j))
        if kind == "base":
            left, core, right, offset = rest.split(",")
            return BasePoint(BiSeq(left, core, right, int(offset)))
    except (ValueError, IndexError) as exc:
        raise click.UsageError(f"bad point spec {text!r}: {exc}") from None
    raise click.UsageError(f"unknown point kind {kind!r}")


def _fraction_arg(text, name):
    try:
        value = parse_fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise click.UsageError(f"bad rational for {name}: {text!r}") from None
    return value


class _Run:
    """Shared per-command state: system, config echo, output directory."""

    def __init__(self, n, variant, k_max, out, config, **params):
        overrides = {}
        if config is not None:
            try:
                overrides = json.loads(Path(config).read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise click.UsageError(f"cannot read config: {exc}") from None
        system_over = overrides.get("system", {})
        try:
            self.system = AugSystem(
                n=system_over.get("n", n),
                variant=system_over.get("variant", variant),
                k_max=system_over.get("k_max", k_max))
        except ValueError as exc:
            raise click.UsageError(str(exc)) from None
        self.params = dict(params)
        self.params.update(
            {k: v for k, v in overrides.items() if k != "system"})
        self.out = Path(out)

    def param(self, name):
        return self.params[name]

    def fraction(self, name):
        return _fraction_arg(self.params[name], name)

    def emit(self, command, payload, ok):
        report = {
            "command": command,
            "version": __version__,
            "config": {"system": encode(self.system),
                       **{k: (v if isinstance(v, (int, str, bool, type(None)))
                              else encode(v))
                          for k, v in sorted(self.params.items())}},
            "ok": ok,
            "result": encode(payload),
        }
        self.out.mkdir(parents=True, exist_ok=True)
        path = self.out / f"{command}.json"
        path.write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")
        click.echo(f"{command}: {'ok' if ok else 'FAILED'} -> {path}")
        if not ok:
            _sys.exit(1)


def _system_options(fn):
    fn = click.option("--n", default=3, show_default=True,
                      help="expansivity level of the construction")(fn)
    fn = click.option("--variant", default="standard", show_default=True,
                      type=click.Choice(["standard", "finite_expansive"]))(fn)
    fn = click.option("--k-max", default=50, show_default=True,
                      help="enumeration bound for satellite levels")(fn)
    fn = click.option("--out", default="reports", show_default=True,
                      help="directory for report files")(fn)
    fn = click.option("--config", default=None,
                      help="JSON file overriding flags")(fn)
    return fn


@click.group()
@click.version_option(__version__)
def main():
    """Exact verification experiments for the augmented shift construction."""


@main.command()
@_system_options
@click.option("--k-hi", default=12, show_default=True)
def construct(n, variant, k_max, out, config, k_hi):
    """Enumerate the system and report structural counts."""
    run = _Run(n, variant, k_max, out, config, k_hi=k_hi)
    sys = run.system
    k_hi = run.param("k_hi")
    pts = sys.extra_points(k_hi)
    per_level = {k: sum(1 for p in pts if p.k == k) for k in range(1, k_hi + 1)}
    ok = len(pts) == sys.extra_count(k_hi) == len(set(pts))
    payload = {
        "satellites": len(pts),
        "closed_form": sys.extra_count(k_hi),
        "per_level": per_level,
        "periods": {k: periodic_point(k).least_period()
                    for k in range(1, k_hi + 1)},
    }
    run.emit("construct", payload, ok)


@main.command()
@_system_options
@click.option("--center", required=True, help="point spec, e.g. extra:1,5,0")
@click.option("--radius", required=True, help="exact rational p/q")
@click.option("--k-hi", default=None, type=int)
@click.option("--mode", default="exact", type=click.Choice(["exact", "horizon"]),
              show_default=True)
@click.option("--horizon", default=32, show_default=True)
def ball(n, variant, k_max, out, config, center, radius, k_hi, mode, horizon):
    """Compute one dynamic ball."""
    run = _Run(n, variant, k_max, out, config, center=center, radius=radius,
               k_hi=k_hi, mode=mode, horizon=horizon)
    try:
        report = dynamic_ball(run.system, _parse_point(run.param("center")),
                              run.fraction("radius"), k_hi=run.param("k_hi"),
                              mode=run.param("mode"),
                              horizon=run.param("horizon"))
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    run.emit("ball", report, ok=True)


@main.command()
@_system_options
@click.option("--c", default="1/4", show_default=True,
              help="expansivity radius to certify at")
@click.option("--k-hi", default=20, show_default=True)
@click.option("--seed", default=7, show_default=True)
@click.option("--random-count", default=100, show_default=True)
def expansivity(n, variant, k_max, out, config, c, k_hi, seed, random_count):
    """Certify the level bound and falsify the next lower one."""
    run = _Run(n, variant, k_max, out, config, c=c, k_hi=k_hi, seed=seed,
               random_count=random_count)
    sys = run.system
    radius = run.fraction("c")
    k_hi = run.param("k_hi")
    sample = construction_sample(sys, extras_k_hi=k_hi, orbits_k_hi=min(k_hi, 12),
                                 random_count=run.param("random_count"),
                                 seed=run.param("seed"))
    cert = check_expansivity(sys, radius, sample, k_hi=k_hi)
    payload = {"certificate": cert, "sample_size": len(sample)}
    ok = isinstance(cert, ExpansivityCertificate)
    if sys.variant == "standard" and sys.n >= 2:
        falsifiers = [lower_expansivity_falsifier(sys, r)
                      for r in (radius, radius / 2, radius / 4)]
        payload["lower_bound_falsifiers"] = falsifiers
        ok = ok and all(len(f.members) == sys.n for f in falsifiers)
    run.emit("expansivity", payload, ok)


@main.command()
@_system_options
@click.option("--eps", default="1/4", show_default=True)
@click.option("--delta-exp", default=6, show_default=True,
              help="jump bound 2**-delta_exp for generated pseudo-orbits")
@click.option("--orbits", default=20, show_default=True)
@click.option("--length", default=100, show_default=True)
@click.option("--seed", default=7, show_default=True)
def shadow(n, variant, k_max, out, config, eps, delta_exp, orbits, length, seed):
    """Trace seeded wandering pseudo-orbits and verify the error bound."""
    run = _Run(n, variant, k_max, out, config, eps=eps, delta_exp=delta_exp,
               orbits=orbits, length=length, seed=seed)
    sys = run.system
    eps = run.fraction("eps")
    rng = random.Random(run.param("seed"))
    mod = shadow_modulus(eps)
    worst = Fraction(0)
    checks = []
    ok = True
    for index in range(run.param("orbits")):
        po = hop_pseudo_orbit(sys, rng, length=run.param("length"),
                              delta_exp=run.param("delta_exp"))
        traced = shadow_pseudo_orbit(po, eps)
        chk = verify_shadow(po, traced, eps)
        ok = ok and chk.ok
        worst = max(worst, chk.worst_dist)
        checks.append({"orbit": index, "ok": chk.ok,
                       "worst_index": chk.worst_index,
                       "worst_dist": chk.worst_dist})
    payload = {"modulus": mod, "worst_dist": worst, "checks": checks}
    run.emit("shadow", payload, ok)


@main.command()
@_system_options
@click.option("--eps", default=None, help="resolution, default 1/(2*k_hi)")
@click.option("--k-hi", default=12, show_default=True)
@click.option("--edges-csv", default=None, help="also write the edge list here")
@click.option("--expect-min-classes", default=None, type=int)
def classes(n, variant, k_max, out, config, eps, k_hi, edges_csv,
            expect_min_classes):
    """Chain-recurrent classes of the construction sample."""
    run = _Run(n, variant, k_max, out, config, eps=eps, k_hi=k_hi,
               edges_csv=edges_csv, expect_min_classes=expect_min_classes)
    sys = run.system
    k_hi = run.param("k_hi")
    eps = (Fraction(1, 2 * k_hi) if run.param("eps") is None
           else run.fraction("eps"))
    sample = construction_sample(sys, extras_k_hi=k_hi, orbits_k_hi=k_hi,
                                 random_count=0)
    graph = build_chain_graph(sample, eps)
    part = chain_classes(graph)
    satellite_classes = sum(
        1 for cls in part.classes if all(isinstance(p, ExtraPoint) for p in cls))
    payload = {
        "epsilon": eps,
        "nodes": len(graph.nodes),
        "edges": graph.edge_count(),
        "class_count": part.class_count(),
        "satellite_orbit_classes": satellite_classes,
        "class_sizes": [len(cls) for cls in part.classes],
        "transient": len(part.transient),
    }
    csv_path = run.param("edges_csv")
    if csv_path:
        Path(csv_path).write_text(chain_edges_csv(graph))
    expect = run.param("expect_min_classes")
    ok = expect is None or part.class_count() >= expect
    run.emit("classes", payload, ok)


@main.command("stable-count")
@_system_options
@click.option("--center", required=True)
@click.option("--eps", required=True)
@click.option("--k-hi", default=None, type=int)
def stable_count(n, variant, k_max, out, config, center, eps, k_hi):
    """Count stable classes inside one local stable set."""
    run = _Run(n, variant, k_max, out, config, center=center, eps=eps, k_hi=k_hi)
    try:
        report = stable_class_count(run.system, _parse_point(run.param("center")),
                                    run.fraction("eps"), k_hi=run.param("k_hi"))
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    run.emit("stable-count", report, ok=True)


@main.command("stable-radius")
@_system_options
@click.option("--center", required=True)
@click.option("--eps", default="1/4", show_default=True)
@click.option("--window", default=8, show_default=True)
@click.option("--k-hi", default=None, type=int)
def stable_radius(n, variant, k_max, out, config, center, eps, window, k_hi):
    """Uniform local-stable radius along the orbit, verified over a window."""
    run = _Run(n, variant, k_max, out, config, center=center, eps=eps,
               window=window, k_hi=k_hi)
    point = _parse_point(run.param("center"))
    try:
        radius, failures = orbit_stable_inclusion_failures(
            run.system, point, run.fraction("eps"), k_hi=run.param("k_hi"),
            window=run.param("window"))
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    payload = {"radius": radius, "window": run.param("window"),
               "failures": failures}
    run.emit("stable-radius", payload, ok=not failures)


@main.command("limit-shadow")
@_system_options
@click.option("--stages", default=10, show_default=True)
@click.option("--word-a", default="001", show_default=True)
@click.option("--word-b", default="01", show_default=True)
@click.option("--thresholds", default="1/2,1/4,1/8,1/16,1/32", show_default=True)
def limit_shadow_cmd(n, variant, k_max, out, config, stages, word_a, word_b,
                     thresholds):
    """Limit-trace the switching pseudo-orbit and report decay indices."""
    run = _Run(n, variant, k_max, out, config, stages=stages, word_a=word_a,
               word_b=word_b, thresholds=thresholds)
    ths = tuple(_fraction_arg(t, "thresholds")
                for t in run.param("thresholds").split(","))
    try:
        lpo = switching_limit_orbit(run.param("word_a"), run.param("word_b"),
                                    stages=run.param("stages"))
        report = limit_shadow(run.system, lpo, thresholds=ths)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    run.emit("limit-shadow", report, ok=all(i is not None
                                            for _, i in report.decay))


@main.command("two-sided")
@_system_options
@click.option("--half", default=512, show_default=True)
@click.option("--past-word", default="001", show_default=True)
@click.option("--future-word", default="0001", show_default=True)
@click.option("--thresholds", default="1/2,1/4,1/8,1/16", show_default=True)
def two_sided(n, variant, k_max, out, config, half, past_word, future_word,
              thresholds):
    """Two-sided limit trace of a drifting pseudo-orbit."""
    run = _Run(n, variant, k_max, out, config, half=half, past_word=past_word,
               future_word=future_word, thresholds=thresholds)
    ths = tuple(_fraction_arg(t, "thresholds")
                for t in run.param("thresholds").split(","))
    try:
        tslpo = drifting_two_sided_orbit(run.param("past_word"),
                                         run.param("future_word"),
                                         half=run.param("half"))
        report = two_sided_limit_shadow(run.system, tslpo, thresholds=ths)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    run.emit("two-sided", report, ok=True)


@main.command("metric-axioms")
@_system_options
@click.option("--trials", default=100000, show_default=True)
@click.option("--seed", default=7, show_default=True)
@click.option("--k-hi", default=None, type=int)
def metric_axioms(n, variant, k_max, out, config, trials, seed, k_hi):
    """Exact symmetry and triangle inequality over seeded random triples."""
    run = _Run(n, variant, k_max, out, config, trials=trials, seed=seed,
               k_hi=k_hi)
    sys = run.system
    rng = random.Random(run.param("seed"))
    violations = []
    for index in range(run.param("trials")):
        a, b, c = random_triple(sys, rng, run.param("k_hi"))
        ab, bc, ac = aug_dist(a, b), aug_dist(b, c), aug_dist(a, c)
        if ab != aug_dist(b, a) or ac > ab + bc:
            violations.append({"trial": index, "points": [a, b, c]})
            if len(violations) >= 10:
                break
    payload = {"trials": run.param("trials"), "violations": violations}
    run.emit("metric-axioms", payload, ok=not violations)


if __name__ == "__main__":
    main()
