import random

import pytest

from twistlab.action import (
    ActionConfig,
    PAdicExponent,
    action_exponent,
    default_action,
    independence_certificate,
    least_certified_level,
    restriction_order,
    truncate,
)
from twistlab.errors import IndependenceError


def test_truncate_one():
    a = PAdicExponent.one()
    for k in range(1, 12):
        assert truncate(a, 2, k) == 1
        assert truncate(a, 3, k) == 1


def test_truncate_cuts_high_positions():
    a = PAdicExponent.from_positions([0, 3])
    assert truncate(a, 2, 2) == 1
    assert truncate(a, 2, 4) == 9  # 1 + 2^3


def test_truncate_rejects_negative_level():
    with pytest.raises(ValueError):
        truncate(PAdicExponent.one(), 2, -1)


def test_lazy_rule_extension():
    calls = []

    def rule(bound):
        calls.append(bound)
        return [e for e in (0, 5, 11) if e < bound]

    a = PAdicExponent.from_rule(rule)
    assert a.positions_below(3) == (0,)
    assert a.positions_below(12) == (0, 5, 11)
    assert a.positions_below(6) == (0, 5)  # served from the cache
    assert calls == [3, 12]


def test_default_exponent_positions():
    exps = default_action(2, 2).exponents
    assert exps[0].positions_below(64) == (0,)
    # (2t+2)^2 for t = 0, 1, 2, ...
    assert exps[1].positions_below(64) == (4, 16, 36)


def test_action_exponent_examples(action_n2):
    assert action_exponent(action_n2, (0, 0), 3) == 0
    assert action_exponent(action_n2, (1, 0), 3) == 1
    a2 = PAdicExponent.from_positions([0, 3])
    config = ActionConfig(2, 2, [PAdicExponent.one(), a2])
    # truncations at k=2: (1, 1); the word (1,1) acts by 1+1 = 2 mod 4
    assert action_exponent(config, (1, 1), 2) == 2


def test_action_exponent_is_homomorphism(action_n2):
    rng = random.Random(5)
    for _ in range(500):
        k = rng.randint(1, 8)
        mod = 2**k
        g = tuple(rng.randint(-9, 9) for _ in range(2))
        h = tuple(rng.randint(-9, 9) for _ in range(2))
        gh = tuple(a + b for a, b in zip(g, h))
        assert action_exponent(action_n2, gh, k) == (
            action_exponent(action_n2, g, k) + action_exponent(action_n2, h, k)
        ) % mod
        # inverse-limit compatibility
        assert action_exponent(action_n2, g, k) == (
            action_exponent(action_n2, g, k + 1) % mod
        )


def test_surjectivity_via_first_generator(action_n2):
    for k in range(1, 10):
        assert action_exponent(action_n2, (1, 0), k) % 2 == 1  # a unit mod p


def test_certificate_rank_one():
    config = default_action(1, 2)
    for k in range(1, 6):
        assert independence_certificate(config, 2**k - 1, k)
        assert not independence_certificate(config, 2**k, k)  # m = p^k


def test_certificate_dependent_pair_fails():
    config = ActionConfig(2, 2, [PAdicExponent.one(), PAdicExponent.one()])
    assert not independence_certificate(config, 1, 1)
    with pytest.raises(IndependenceError) as err:
        least_certified_level(config, 1)
    assert err.value.relation is not None


def test_certificate_default_config_at_bound_8():
    config = default_action(2, 2)
    # oracle: exhaustive box enumeration, written out directly
    ts = config.truncations(8)
    mod = 2**8
    hits = [
        (m1, m2)
        for m1 in range(-8, 9)
        for m2 in range(-8, 9)
        if (m1, m2) != (0, 0) and (m1 * ts[0] + m2 * ts[1]) % mod == 0
    ]
    assert hits == []
    assert independence_certificate(config, 8, 8)
    assert least_certified_level(config, 8) == 8


def test_restriction_orders(action_n2):
    k = 3
    assert restriction_order(action_n2, (1, 0), k) == 8
    assert restriction_order(action_n2, (2, 0), k) == 4
    with pytest.raises(ValueError):
        restriction_order(action_n2, (0, 0), k)


def test_restriction_order_grows_without_bound(action_n2):
    # exhaustive over the box |g_i| <= 4: orders never drop with the level
    # and always outgrow their starting value by level 8
    from itertools import product

    for g in product(range(-4, 5), repeat=2):
        if not any(g):
            continue
        orders = [restriction_order(action_n2, g, k) for k in range(1, 9)]
        assert all(b >= a for a, b in zip(orders, orders[1:]))
        assert orders[-1] >= 4
        assert orders[-1] > orders[0]


def test_first_exponent_must_be_one():
    with pytest.raises(ValueError):
        ActionConfig(1, 2, [PAdicExponent.from_positions([1])])


def test_config_json_round_trip(action_n2):
    data = action_n2.to_json_dict()
    rebuilt = ActionConfig.from_json_dict(data)
    for k in range(1, 16):
        assert rebuilt.truncations(k) == action_n2.truncations(k)
