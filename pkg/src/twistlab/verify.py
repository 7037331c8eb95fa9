"""Invariant suites for every module, runnable as one deterministic batch.

Each check returns a named pass/fail record with the counts it actually ran.
The batch is seeded, so two runs with the same configuration and seed produce
identical results (and identical serialized reports).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .action import (
    ActionConfig,
    action_exponent,
    default_action,
    independence_certificate,
    restriction_order,
)
from .center import (
    decompose_over_center,
    free_basis,
    is_central,
    is_central_structural,
    kernel_lattice,
    recompose,
)
from .errors import NotAUnitError, SeparationError
from .growth import gk_estimate, growth_table
from .pi import standard_polynomial, test_identity
from .quotient import (
    CentralFraction,
    center_of_quotient_test,
    central_to_laurent,
    bareiss_determinant,
    invert,
    regular_representation,
)
from .ring import RingContext, parse_element
from .simplicity import (
    random_separable_element,
    replay_trace,
    separating_level,
    unit_in_ideal,
)
from .tower import Tower, build_tower, tower_from_json, tower_to_json, TowerConfig


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def to_json_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def _sample_words(rng, n, bound, count):
    return [
        tuple(rng.randint(-bound, bound) for _ in range(n)) for _ in range(count)
    ]


def check_tower_field_axioms(tower: Tower, rng, trials: int) -> CheckResult:
    bad = 0
    for _ in range(trials):
        lvl = tower.level(rng.randint(0, tower.k_max))
        a, b, c = (lvl.random_element(rng) for _ in range(3))
        if (a + b) * c != a * c + b * c or (a * b) * c != a * (b * c):
            bad += 1
        if not a.is_zero() and (a * a.inverse()) != lvl.one():
            bad += 1
    return CheckResult(
        "tower.field_axioms", bad == 0, f"{trials} random triples, {bad} failures"
    )


def check_tower_embeddings(tower: Tower, rng, trials: int) -> CheckResult:
    bad = 0
    for _ in range(trials):
        m = rng.randint(0, tower.k_max - 1)
        m2 = rng.randint(m, tower.k_max - 1)
        m3 = rng.randint(m2, tower.k_max)
        x = tower.level(m).random_element(rng)
        if tower.embed(tower.embed(x, m2), m3) != tower.embed(x, m3):
            bad += 1
        t = rng.randint(-3, 6)
        if tower.embed(tower.frobenius(x, t), m3) != tower.frobenius(
            tower.embed(x, m3), t
        ):
            bad += 1
        y = tower.level(m).random_element(rng)
        if tower.embed(x * y, m3) != tower.embed(x, m3) * tower.embed(y, m3):
            bad += 1
    return CheckResult(
        "tower.embedding_compatibility", bad == 0,
        f"{trials} random (x, levels) cases, {bad} failures",
    )


def check_tower_fixed_field(tower: Tower) -> CheckResult:
    """Exhaustive: Frobenius fixes exactly the embedded base field."""
    bad = 0
    for m in range(tower.k_max + 1):
        lvl = tower.level(m)
        if lvl.order > (1 << 16):
            continue
        fixed = sum(1 for x in lvl.elements() if lvl.frobenius(x, 1) == x)
        if fixed != tower.q:
            bad += 1
    return CheckResult(
        "tower.frobenius_fixed_field", bad == 0,
        f"levels 0..{tower.k_max} enumerated, {bad} failures",
    )


def check_tower_json(tower: Tower) -> CheckResult:
    ok = tower_from_json(tower_to_json(tower)) == tower
    return CheckResult("tower.json_round_trip", ok, "bit-exact round trip")


def check_action_homomorphism(action: ActionConfig, rng, trials: int,
                              k_max: int) -> CheckResult:
    bad = 0
    for _ in range(trials):
        k = rng.randint(1, k_max)
        mod = action.p**k
        g, h = _sample_words(rng, action.n, 6, 2)
        gh = tuple(a + b for a, b in zip(g, h))
        if action_exponent(action, gh, k) != (
            action_exponent(action, g, k) + action_exponent(action, h, k)
        ) % mod:
            bad += 1
        if action_exponent(action, g, k) != action_exponent(action, g, k + 1) % mod:
            bad += 1
    return CheckResult(
        "action.homomorphism_and_compatibility", bad == 0,
        f"{trials} random pairs, {bad} failures",
    )


def check_action_surjectivity(action: ActionConfig, k_max: int) -> CheckResult:
    e1 = tuple(1 if i == 0 else 0 for i in range(action.n))
    bad = sum(
        1
        for k in range(1, k_max + 1)
        if action_exponent(action, e1, k) % action.p == 0
    )
    return CheckResult(
        "action.first_generator_surjective", bad == 0,
        f"levels 1..{k_max}, {bad} failures",
    )


def check_action_torsion(action: ActionConfig, rng, trials: int) -> CheckResult:
    bad = 0
    for _ in range(trials):
        g = tuple(rng.randint(-4, 4) for _ in range(action.n))
        if not any(g):
            continue
        orders = [restriction_order(action, g, k) for k in range(1, 9)]
        if any(b < a for a, b in zip(orders, orders[1:])):
            bad += 1
        if orders[-1] <= 1 and independence_certificate(action, 8, 8):
            # a certified config cannot keep a small word trivial this long
            bad += 1
    return CheckResult(
        "action.restriction_order_growth", bad == 0,
        f"{trials} random words over k=1..8, {bad} failures",
    )


def check_ring_axioms(ctx: RingContext, rng, trials: int) -> CheckResult:
    bad = 0
    one = ctx.one()
    for _ in range(trials):
        r, s, t = (ctx.random_element(rng) for _ in range(3))
        if (r * s) * t != r * (s * t):
            bad += 1
        if r * (s + t) != r * s + r * t or (s + t) * r != s * r + t * r:
            bad += 1
        if r * one != r or one * r != r:
            bad += 1
    return CheckResult(
        "ring.axioms", bad == 0, f"{trials} random triples, {bad} failures"
    )


def check_ring_domain(ctx: RingContext, rng, trials: int) -> CheckResult:
    bad = 0
    for _ in range(trials):
        r, s = ctx.random_element(rng), ctx.random_element(rng)
        prod = r * s
        if prod.is_zero():
            bad += 1
            continue
        gw, gc = r.leading_term()
        hw, hc = s.leading_term()
        w = tuple(a + b for a, b in zip(gw, hw))
        expect = gc * ctx.frob(hc, ctx.word_exponent(gw))
        lw, lc = prod.leading_term()
        if lw != w or lc != expect:
            bad += 1
    return CheckResult(
        "ring.no_zero_divisors_leading_term", bad == 0,
        f"{trials} random pairs, {bad} failures",
    )


def check_ring_units(ctx: RingContext, rng, trials: int) -> CheckResult:
    bad = 0
    for _ in range(trials):
        hom = ctx.random_element(rng, max_terms=1)
        if hom * hom.invert_unit() != ctx.one():
            bad += 1
        inhom = ctx.random_element(rng, min_terms=2, max_terms=3)
        try:
            inhom.invert_unit()
            bad += 1
        except NotAUnitError:
            pass
        other = ctx.random_element(rng, min_terms=2, max_terms=3)
        if inhom * other == ctx.one():
            bad += 1
    return CheckResult(
        "ring.graded_division_units", bad == 0,
        f"{trials} homogeneous/inhomogeneous samples, {bad} failures",
    )


def check_ring_level_embedding(ctx: RingContext, rng, trials: int) -> CheckResult:
    if ctx.k >= ctx.tower.k_max:
        return CheckResult("ring.level_embedding_hom", True, "no higher level")
    up = ctx.lift_level(ctx.k + 1)
    bad = 0
    for _ in range(trials):
        r, s = ctx.random_element(rng), ctx.random_element(rng)
        if (r * s).lift_to(up) != r.lift_to(up) * s.lift_to(up):
            bad += 1
        if (r + s).lift_to(up) != r.lift_to(up) + s.lift_to(up):
            bad += 1
    return CheckResult(
        "ring.level_embedding_hom", bad == 0,
        f"{trials} random pairs into level {ctx.k + 1}, {bad} failures",
    )


def check_ring_commutation_rule(ctx: RingContext) -> CheckResult:
    from .action import truncate

    bad = 0
    theta = ctx.theta()
    for i in range(1, ctx.n + 1):
        x = ctx.gen(i)
        e = truncate(ctx.action.exponents[i - 1], ctx.tower.p, ctx.k)
        lhs = x * ctx.scalar(theta)
        rhs = ctx.frob(theta, e) * x
        if lhs != rhs:
            bad += 1
    return CheckResult(
        "ring.commutation_rule", bad == 0,
        f"all {ctx.n} generators against the field generator, {bad} failures",
    )


def check_ring_literals(ctx: RingContext, rng, trials: int) -> CheckResult:
    bad = 0
    for _ in range(trials):
        r = ctx.random_element(rng)
        if parse_element(ctx, r.to_literal()) != r:
            bad += 1
    return CheckResult(
        "ring.literal_round_trip", bad == 0, f"{trials} elements, {bad} failures"
    )


def check_center_agreement(ctx: RingContext, rng, trials: int) -> CheckResult:
    lat = kernel_lattice(ctx)
    bad = 0
    for i in range(trials):
        if i % 2 == 0:
            r = ctx.random_element(rng)
        else:
            # structured samples: random center members, sometimes perturbed
            terms = {}
            for _ in range(rng.randint(1, 3)):
                coords = tuple(rng.randint(-2, 2) for _ in lat.basis)
                word = lat.from_lattice_coordinates(coords)
                terms[word] = ctx.level.from_base(
                    rng.randrange(1, ctx.tower.q)
                )
            from .ring import RingElement

            r = RingElement(ctx, terms)
            if rng.random() < 0.3:
                r = r + ctx.random_element(rng, max_terms=1)
        if is_central(r) != is_central_structural(r, lat):
            bad += 1
    index_ok = lat.index == ctx.tower.p**ctx.k
    return CheckResult(
        "center.commutator_vs_structural", bad == 0 and index_ok,
        f"{trials} elements at k={ctx.k}, {bad} disagreements, "
        f"index {lat.index} (expected {ctx.tower.p ** ctx.k})",
    )


def check_center_lattice_cover(ctx: RingContext) -> CheckResult:
    """Every bounded word acting trivially lies in the lattice, and no basis
    row acts nontrivially."""
    lat = kernel_lattice(ctx)
    p, k = ctx.tower.p, ctx.k
    bound = 2 * p**k
    import itertools

    bad = 0
    span = range(-bound, bound + 1)
    for w in itertools.product(span, repeat=ctx.n):
        if action_exponent(ctx.action, w, k) == 0 and not lat.contains(w):
            bad += 1
    return CheckResult(
        "center.lattice_covers_kernel", bad == 0,
        f"all words with coordinates in [-{bound}, {bound}], {bad} misses",
    )


def check_center_freeness(ctx: RingContext, rng, trials: int) -> CheckResult:
    lat = kernel_lattice(ctx)
    fb = free_basis(ctx, lat)
    rank_ok = fb.size() == ctx.tower.p ** (2 * ctx.k)
    bad = 0
    for _ in range(trials):
        r = ctx.random_element(rng)
        zs = decompose_over_center(r, fb, lat)
        if recompose(zs, fb) != r:
            bad += 1
    return CheckResult(
        "center.free_module_round_trip", bad == 0 and rank_ok,
        f"rank {fb.size()}, {trials} round trips, {bad} failures",
    )


def check_center_nesting(ctx: RingContext) -> CheckResult:
    if ctx.k >= ctx.tower.k_max:
        return CheckResult("center.lattice_nesting", True, "no higher level")
    lat = kernel_lattice(ctx)
    lat_up = kernel_lattice(ctx.lift_level(ctx.k + 1))
    bad = sum(0 if lat.contains(row) else 1 for row in lat_up.basis)
    return CheckResult(
        "center.lattice_nesting", bad == 0,
        f"H_(k+1) basis inside H_k, {bad} failures",
    )


def check_simplicity(ctx: RingContext, rng, trials: int) -> CheckResult:
    bad = 0
    for _ in range(trials):
        r = random_separable_element(ctx, rng)
        trace = unit_in_ideal(r)
        if len(trace.steps) > len(r.terms) - 1:
            bad += 1
        if replay_trace(trace) != trace.final_unit:
            bad += 1
    return CheckResult(
        "simplicity.unit_in_ideal_with_audit", bad == 0,
        f"{trials} random elements, {bad} failures",
    )


def check_simplicity_ascent(ctx: RingContext) -> CheckResult:
    """Central-looking elements of one level force an ascent."""
    x1 = ctx.gen(1)
    r = ctx.one() + x1 ** (ctx.tower.p**ctx.k)
    try:
        level = separating_level(ctx, r.support())
    except SeparationError:
        return CheckResult(
            "simplicity.ascends_for_central_elements", False,
            "no materialized level separates 1 + x1^(p^k)",
        )
    trace = unit_in_ideal(r)
    ok = level > ctx.k and all(s.level > ctx.k for s in trace.steps)
    return CheckResult(
        "simplicity.ascends_for_central_elements", ok,
        f"separating level {level} > k={ctx.k}",
    )


def check_pi_multilinear(ctx: RingContext, rng, trials: int) -> CheckResult:
    bad = 0
    q = ctx.tower.q
    for _ in range(trials):
        args = [ctx.random_element(rng, max_terms=2) for _ in range(4)]
        extra = ctx.random_element(rng, max_terms=2)
        a = ctx.level.from_base(rng.randrange(q))
        b = ctx.level.from_base(rng.randrange(q))
        blended = a * args[1] + b * extra
        lhs = standard_polynomial([args[0], blended, args[2], args[3]])
        rhs = a * standard_polynomial(args) + b * standard_polynomial(
            [args[0], extra, args[2], args[3]]
        )
        if lhs != rhs:
            bad += 1
        # alternating: swapping two arguments negates; a repeat kills it
        swapped = standard_polynomial([args[1], args[0], args[2], args[3]])
        if swapped != -standard_polynomial(args):
            bad += 1
        repeated = standard_polynomial([args[0], args[0], args[2], args[3]])
        if not repeated.is_zero():
            bad += 1
    return CheckResult(
        "pi.multilinear_alternating", bad == 0,
        f"{trials} random 4-tuples, {bad} failures",
    )


def check_pi_frontier(ctx1: RingContext, ctx2: RingContext, trials: int,
                      seed: int) -> CheckResult:
    p = ctx1.tower.p
    ident = 2 * p**ctx1.k  # expected identity degree at the lower level
    max_terms = {2: 3, 4: 3, 6: 2, 8: 1}
    caps = {2: trials, 4: trials, 6: min(trials, 60), 8: min(trials, 8)}
    ok = True
    details = []
    w2 = test_identity(ctx1, 2, trials, seed=seed + 1, stop_on_witness=True)
    ok = ok and w2.witness is not None
    details.append(f"k={ctx1.k}: degree 2 witness {w2.witness is not None}")
    if ident <= 8:
        vanish = test_identity(
            ctx1, ident, caps[ident], seed=seed, max_terms=max_terms[ident]
        )
        ok = ok and vanish.vanish_count == vanish.trials
        details.append(
            f"degree {ident} vanished {vanish.vanish_count}/{vanish.trials}"
        )
        # the frontier must rise: the same degree fails one level up
        upper_threshold = 2 * p**ctx2.k
        for m in range(ident, min(8, upper_threshold - 1) + 1, 2):
            w = test_identity(
                ctx2, m, trials, seed=seed + m, stop_on_witness=True,
                max_terms=max_terms[m],
            )
            ok = ok and w.witness is not None
            details.append(f"k={ctx2.k}: degree {m} witness {w.witness is not None}")
    return CheckResult("pi.frontier_rises_with_level", ok, "; ".join(details))


def check_growth(ctx: RingContext, rng) -> CheckResult:
    table = growth_table(ctx, None, n_max=20)
    monotone = all(b >= a for a, b in zip(table.rows, table.rows[1:]))
    est = gk_estimate(table)
    in_range = abs(est.slope - ctx.n) <= 0.2
    # sanity bound: never more than (full coefficient space) x (word count)
    import itertools

    n, deg = ctx.n, ctx.level.degree
    top = table.rows[-1]
    ball = sum(
        1
        for w in itertools.product(range(-table.n_max, table.n_max + 1), repeat=n)
        if sum(abs(a) for a in w) <= table.n_max
    )
    bounded = top <= ball * deg
    return CheckResult(
        "growth.monotone_and_slope", monotone and in_range and bounded,
        f"slope {est.slope:.3f} for rank {ctx.n}, top dim {top} <= {ball * deg}",
    )


def check_quotient_division(ctx: RingContext, rng, trials: int) -> CheckResult:
    lat = kernel_lattice(ctx)
    one = CentralFraction(ctx, ctx.one(), ctx.one(), lattice=lat)
    bad = 0
    for _ in range(trials):
        num = ctx.random_element(rng, max_terms=2)
        if num.is_zero():
            continue
        den_coords = tuple(rng.randint(-1, 1) for _ in lat.basis)
        den = ctx.monomial(1, lat.from_lattice_coordinates(den_coords)) + ctx.one()
        if den.is_zero():
            den = ctx.one()
        f = CentralFraction(ctx, num, den, lattice=lat)
        g = invert(f)
        if f * g != one:
            bad += 1
        if invert(g) != f:
            bad += 1
    return CheckResult(
        "quotient.inverse_and_involution", bad == 0,
        f"{trials} random fractions, {bad} failures",
    )


def check_quotient_regular_rep(ctx: RingContext, rng, trials: int) -> CheckResult:
    lat = kernel_lattice(ctx)
    fb = free_basis(ctx, lat)
    bad = 0
    for _ in range(trials):
        r, s = ctx.random_element(rng, max_terms=2), ctx.random_element(rng, max_terms=2)
        mr = regular_representation(r, fb, lat)
        ms = regular_representation(s, fb, lat)
        mrs = regular_representation(r * s, fb, lat)
        size = fb.size()
        for a in range(size):
            for b in range(size):
                acc = None
                for c in range(size):
                    term = mr[a][c] * ms[c][b]
                    acc = term if acc is None else acc + term
                if acc != mrs[a][b]:
                    bad += 1
        det = bareiss_determinant(
            [[central_to_laurent(e, lat) for e in row] for row in mr]
        )
        if not r.is_zero() and det.is_zero():
            bad += 1
    return CheckResult(
        "quotient.regular_representation_hom", bad == 0,
        f"{trials} random pairs, {bad} failures",
    )


def check_quotient_center(ctx: RingContext, rng, trials: int) -> CheckResult:
    lat = kernel_lattice(ctx)
    probe = min(ctx.k + 1, ctx.tower.k_max)
    lat_up = kernel_lattice(ctx.lift_level(probe))
    bad = 0
    for c in range(1, ctx.tower.q):
        f = CentralFraction(
            ctx, ctx.scalar(ctx.level.from_base(c)), ctx.one(), lattice=lat
        )
        if not center_of_quotient_test(f, probe):
            bad += 1
    tested = 0
    while tested < trials:
        terms = {}
        for _ in range(rng.randint(1, 3)):
            coords = tuple(rng.randint(-2, 2) for _ in lat.basis)
            word = lat.from_lattice_coordinates(coords)
            terms[word] = ctx.level.from_base(rng.randrange(1, ctx.tower.q))
        from .ring import RingElement

        z = RingElement(ctx, terms)
        if z.is_zero() or is_central_structural(z.lift_to(ctx.lift_level(probe)), lat_up):
            continue  # still central above; it cannot fail at this probe
        tested += 1
        f = CentralFraction(ctx, z, ctx.one(), lattice=lat)
        if center_of_quotient_test(f, probe):
            bad += 1
    return CheckResult(
        "quotient.center_collapses_to_base", bad == 0,
        f"{ctx.tower.q - 1} base elements pass, {tested} proper central "
        f"elements fail at probe {probe}, {bad} failures",
    )


def run_all(p: int, q: int, n: int, k_max: int, seed: int,
            trials: int = 300, action: ActionConfig = None) -> list:
    """Run every module's invariant suite at the configured size.

    Raises IndependenceError before running anything when the acting
    exponents fail certification (dependent configurations refuse to run).
    """
    tower = build_tower(TowerConfig(p, q, k_max))
    if action is None:
        action = default_action(n, p)
    ctx1 = RingContext(tower, action, 1)
    ctx2 = RingContext(tower, action, min(2, k_max))
    rng = random.Random(seed)

    def sub_action(rank):
        if rank == action.n:
            return action
        return ActionConfig(rank, p, action.exponents[:rank])
    results = [
        check_tower_field_axioms(tower, rng, trials),
        check_tower_embeddings(tower, rng, trials),
        check_tower_fixed_field(tower),
        check_tower_json(tower),
        check_action_homomorphism(action, rng, trials, k_max),
        check_action_surjectivity(action, k_max),
        check_action_torsion(action, rng, min(trials, 100)),
        check_ring_axioms(ctx1, rng, trials),
        check_ring_domain(ctx1, rng, trials),
        check_ring_units(ctx1, rng, trials),
        check_ring_level_embedding(ctx1, rng, min(trials, 100)),
        check_ring_commutation_rule(ctx1),
        check_ring_literals(ctx1, rng, min(trials, 100)),
        check_center_agreement(ctx1, rng, trials),
        check_center_agreement(ctx2, rng, min(trials, 100)),
        check_center_lattice_cover(ctx1),
        check_center_freeness(ctx1, rng, min(trials, 100)),
        check_center_freeness(ctx2, rng, min(trials, 50)),
        check_center_nesting(ctx1),
        check_simplicity(ctx1, rng, min(trials, 100)),
        check_simplicity_ascent(ctx1),
        check_pi_multilinear(ctx1, rng, min(trials, 20)),
        check_pi_frontier(ctx1, ctx2, min(trials, 100), seed),
        check_growth(RingContext(tower, sub_action(min(n, 2)), 1), rng),
        check_quotient_division(
            RingContext(tower, sub_action(1), 1), rng, min(trials, 20)
        ),
        check_quotient_regular_rep(
            RingContext(tower, sub_action(1), 1), rng, min(trials, 10)
        ),
        check_quotient_center(
            RingContext(tower, sub_action(1), 1), rng, min(trials, 40)
        ),
    ]
    return results
