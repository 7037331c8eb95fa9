"""Acceptance suite: one test per criterion, at the stated sizes.

Each test prints a single PASS line when its criterion holds; pytest -v (or
the printed lines with -s) give the per-criterion report.
"""

import itertools
import json
import random

from twistlab.action import default_action
from twistlab.center import (
    decompose_over_center,
    free_basis,
    is_central,
    is_central_structural,
    kernel_lattice,
    recompose,
)
from twistlab.cli import main
from twistlab.growth import gk_estimate, growth_table
from twistlab.pi import standard_polynomial
from twistlab.pi import test_identity as run_identity_trials
from twistlab.quotient import CentralFraction, center_of_quotient_test, invert
from twistlab.ring import RingContext, RingElement
from twistlab.simplicity import random_separable_element, replay_trace, unit_in_ideal


def _report(name, detail):
    print(f"ACCEPTANCE {name}: PASS ({detail})")


def test_criterion_1_center_theorem(tower223, action_n2):
    disagreements = 0
    rng = random.Random(101)
    for k in (1, 2):
        ctx = RingContext(tower223, action_n2, k)
        lat = kernel_lattice(ctx)
        assert lat.index == 2**k
        for i in range(1000):
            if i % 2 == 0:
                r = ctx.random_element(rng)
            else:
                terms = {}
                for _ in range(rng.randint(1, 3)):
                    coords = tuple(rng.randint(-2, 2) for _ in lat.basis)
                    terms[lat.from_lattice_coordinates(coords)] = (
                        ctx.level.from_base(1)
                    )
                r = RingElement(ctx, terms)
                if rng.random() < 0.4:
                    r = r + ctx.random_element(rng, max_terms=1)
            if is_central(r) != is_central_structural(r, lat):
                disagreements += 1
    assert disagreements == 0
    _report(
        "1 center theorem",
        "2000 elements at k=1,2, 0 disagreements, lattice indices 2 and 4",
    )


def test_criterion_2_freeness_rank(tower223, action_n2):
    rng = random.Random(102)
    for k in (1, 2):
        ctx = RingContext(tower223, action_n2, k)
        lat = kernel_lattice(ctx)
        fb = free_basis(ctx, lat)
        assert fb.size() == 2 ** (2 * k)
        for _ in range(1000):
            r = ctx.random_element(rng)
            assert recompose(decompose_over_center(r, fb, lat), fb) == r
    _report(
        "2 freeness rank",
        "ranks 4 and 16; 1000 exact round trips at each of k=1,2",
    )


def test_criterion_3_units_theorem(ctx_n2_k1):
    ctx = ctx_n2_k1
    rng = random.Random(103)
    one = ctx.one()
    for _ in range(10_000):
        r = ctx.random_element(rng, min_terms=2, max_terms=3)
        s = ctx.random_element(rng, min_terms=2, max_terms=3)
        assert r * s != one
    # every homogeneous nonzero element inverts: exhaustive small box plus fuzz
    checked = 0
    for code in range(1, ctx.level.order):
        c = ctx.level.from_code(code)
        for word in itertools.product(range(-2, 3), repeat=2):
            u = ctx.monomial(c, word)
            assert u * u.invert_unit() == one
            checked += 1
    for _ in range(10_000):
        u = ctx.random_element(rng, max_terms=1)
        assert u * u.invert_unit() == one and u.invert_unit() * u == one
    _report(
        "3 units theorem",
        f"10000 inhomogeneous pairs, no product 1; {checked} exhaustive + "
        "10000 random homogeneous inverses exact",
    )


def test_criterion_4_simplicity(tower223, action_n2):
    ctx = RingContext(tower223, action_n2, 1)  # k_max = 3 in the tower
    rng = random.Random(104)
    for _ in range(1000):
        r = random_separable_element(ctx, rng, max_support=5)
        assert len(r.terms) <= 5
        trace = unit_in_ideal(r)
        assert trace.final_unit.is_homogeneous() and not trace.final_unit.is_zero()
        assert replay_trace(trace) == trace.final_unit
    one_step = unit_in_ideal(ctx.one() + ctx.gen(1))
    assert len(one_step.steps) == 1
    _report(
        "4 simplicity",
        "1000 traces audited at (p=2, n=2, k_max=3); 1 + x1 took exactly "
        "1 step",
    )


def test_criterion_5_pi_frontier(ctx_n2_k1, ctx_n2_k2):
    vanish = run_identity_trials(ctx_n2_k1, 4, 1000, seed=105)
    assert vanish.vanish_count == vanish.trials == 1000
    w2 = run_identity_trials(ctx_n2_k1, 2, 1000, seed=106, stop_on_witness=True)
    assert w2.witness is not None
    assert standard_polynomial(w2.witness["elements"]) == w2.witness["value"]
    assert not w2.witness["value"].is_zero()
    w4 = run_identity_trials(ctx_n2_k2, 4, 1000, seed=107, stop_on_witness=True)
    w6 = run_identity_trials(ctx_n2_k2, 6, 1000, seed=108, stop_on_witness=True)
    assert w4.witness is not None and w4.trials <= 1000
    assert w6.witness is not None and w6.trials <= 1000
    frontier = [2, max(4, 6)]  # largest failing degree at k=1, then k=2
    assert frontier == sorted(frontier)
    _report(
        "5 pi frontier",
        "k=1: S4 vanished 1000/1000 and exact S2 witness; k=2: S4 and S6 "
        f"witnesses at trials {w4.trials} and {w6.trials}; frontier 2 -> 6",
    )


def test_criterion_6_gk_dimension(tower223):
    slopes = {}
    for n in (1, 2, 3):
        ctx = RingContext(tower223, default_action(n, 2), 1)
        est = gk_estimate(growth_table(ctx, None, n_max=24))
        assert n - 0.15 <= est.slope <= n + 0.15, f"n={n}: {est.slope}"
        slopes[n] = est.slope
    drifts = []
    for n in (1, 2, 3):
        ctx2 = RingContext(tower223, default_action(n, 2), 2)
        est2 = gk_estimate(growth_table(ctx2, None, n_max=24))
        drifts.append(abs(slopes[n] - est2.slope))
        assert drifts[-1] <= 0.2
    _report(
        "6 gk dimension",
        "slopes " + ", ".join(f"{slopes[n]:.3f}" for n in (1, 2, 3))
        + f"; max level drift {max(drifts):.3f} <= 0.2",
    )


def test_criterion_7_division_ring(ctx_n1_k1):
    ctx = ctx_n1_k1
    lat = kernel_lattice(ctx)
    fb = free_basis(ctx, lat)
    assert fb.size() == 4  # 4x4 regular representation
    one = CentralFraction(ctx, ctx.one(), ctx.one(), lattice=lat)
    rng = random.Random(107)
    count = 0
    while count < 100:
        num = ctx.random_element(rng, max_terms=2)
        den_pick = rng.random()
        if den_pick < 0.5:
            den = ctx.one()
        else:
            den = ctx.monomial(1, lat.basis[0]) + ctx.one()
        f = CentralFraction(ctx, num, den, lattice=lat)
        g = invert(f)
        assert f * g == one and g * f == one
        assert invert(g) == f
        count += 1
    f = CentralFraction(ctx, ctx.one() + ctx.gen(1), ctx.one(), lattice=lat)
    g = invert(f)
    assert f * g == one
    _report(
        "7 division ring",
        "100 random fractions inverted exactly (4x4 solves), double "
        "inversion restored each; (1 + x1)/1 included",
    )


def test_criterion_8_center_collapses(tower223, action_n1):
    ctx = RingContext(tower223, action_n1, 1)
    lat = kernel_lattice(ctx)
    lat2 = kernel_lattice(ctx.lift_level(2))
    rng = random.Random(108)
    tested = 0
    for c in range(1, 2):  # all of GF(2)*
        f = CentralFraction(
            ctx, ctx.scalar(ctx.level.from_base(c)), ctx.one(), lattice=lat
        )
        for probe in (1, 2, 3):
            assert center_of_quotient_test(f, probe)
        tested += 1
    while tested < 110:
        terms = {}
        for _ in range(rng.randint(1, 3)):
            coords = tuple(rng.randint(-3, 3) for _ in lat.basis)
            terms[lat.from_lattice_coordinates(coords)] = ctx.level.from_base(1)
        z = RingElement(ctx, terms)
        if z.is_zero():
            continue
        assert is_central_structural(z, lat)
        if is_central_structural(z.lift_to(ctx.lift_level(2)), lat2):
            continue  # still central one level up; probe 2 cannot expose it
        f = CentralFraction(ctx, z, ctx.one(), lattice=lat)
        assert not center_of_quotient_test(f, 2)
        tested += 1
    _report(
        "8 center collapses to base field",
        f"{tested} fractions probed: base field passed at probes 1..3, "
        "every proper central element failed at probe 2",
    )


def test_criterion_9_verify_all_deterministic(tmp_path):
    outs = []
    for i in (1, 2):
        path = tmp_path / f"verify{i}.json"
        code = main(
            ["verify-all", "--p", "2", "--q", "2", "--n", "2", "--kmax", "2",
             "--seed", "0", "--out", str(path)]
        )
        assert code == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    report = json.loads(outs[0])
    assert report["result"]["all_passed"] is True
    assert all(c["passed"] for c in report["result"]["checks"])
    _report(
        "9 infrastructure",
        f"verify-all ran twice: byte-identical reports "
        f"({len(report['result']['checks'])} checks), exit 0",
    )
