"""The acting group: rank-n free abelian words mapped into tower automorphisms.

Each generator acts as a power of Frobenius whose exponent is a p-adic
integer, stored as a sparse set of digit positions (digits restricted to
{0,1}, so truncation modulo p^k reads off the positions below k and never
carries).  Position sets may be finite or given by a rule and extended
lazily.  Group words are plain integer tuples.

Independence of the chosen exponents is never assumed: a certificate is
searched for exhaustively over a coefficient box at increasing truncation
levels, and experiments that need independence refuse to run without one.
"""

from __future__ import annotations

import itertools
import math
from typing import Callable, Iterable, Optional, Sequence

from .errors import IndependenceError
from .fields import is_prime

# Default ceiling for certification searches; truncation is pure integer
# arithmetic, so this is unrelated to (and far above) materialized levels.
CERTIFICATION_LEVEL_CAP = 64

# Horizon used when validating or serializing lazily extended exponents.
EXPONENT_HORIZON = 64


class PAdicExponent:
    """A p-adic integer sum(p^e for e in E) over a sparse position set E."""

    def __init__(self, positions: Iterable[int] = (), rule: Optional[Callable] = None,
                 description: str = ""):
        self._positions = sorted(set(positions))
        if any(e < 0 for e in self._positions):
            raise ValueError("digit positions must be nonnegative")
        self._rule = rule
        # With no rule the position set is complete; otherwise nothing below
        # the horizon has been materialized yet.
        self._horizon = None if rule is None else 0
        self.description = description

    @classmethod
    def one(cls) -> "PAdicExponent":
        return cls(positions=(0,), description="1")

    @classmethod
    def from_positions(cls, positions, description: str = "") -> "PAdicExponent":
        return cls(positions=positions, description=description)

    @classmethod
    def from_rule(cls, rule: Callable[[int], Iterable[int]],
                  description: str = "") -> "PAdicExponent":
        """rule(bound) must yield every digit position below bound."""
        return cls(rule=rule, description=description)

    def positions_below(self, bound: int) -> tuple:
        if self._rule is not None and self._horizon < bound:
            self._positions = sorted(set(self._rule(bound)))
            if any(e < 0 for e in self._positions):
                raise ValueError("digit positions must be nonnegative")
            self._horizon = bound
        return tuple(e for e in self._positions if e < bound)

    def __repr__(self):
        label = self.description or f"positions {self._positions}"
        return f"PAdicExponent({label})"


def truncate(exponent: PAdicExponent, p: int, k: int) -> int:
    """Residue of the exponent modulo p^k (digits at positions >= k are cut)."""
    if k < 0:
        raise ValueError(f"truncation level must be >= 0, got {k}")
    # digits in {0,1}: the partial sum is already reduced
    return sum(p**e for e in exponent.positions_below(k))


def _square_gap_rule(n: int, i: int) -> Callable[[int], list]:
    def rule(bound: int) -> list:
        out, t = [], 0
        while True:
            pos = (n * t + i) ** 2
            if pos >= bound:
                return out
            out.append(pos)
            t += 1

    return rule


def default_exponents(n: int) -> list:
    """The default Z-independent family: a_1 = 1 and, for i >= 2, digit
    positions (n*t + i)^2 — gaps grow fast enough that no small integer
    relation survives truncation once the level is large enough."""
    exps = [PAdicExponent.one()]
    for i in range(2, n + 1):
        exps.append(
            PAdicExponent.from_rule(
                _square_gap_rule(n, i), description=f"digit positions ({n}t+{i})^2"
            )
        )
    return exps


class ActionConfig:
    """The acting group: rank n, prime p, one p-adic exponent per generator.

    Duplicate or dependent exponents are representable (the certificate
    examples need them); certification is what refuses to run with them,
    since a duplicate pair is a small integer relation at every level.
    """

    def __init__(self, n: int, p: int, exponents: Sequence[PAdicExponent]):
        if n < 1:
            raise ValueError(f"rank must be >= 1, got {n}")
        if not is_prime(p):
            raise ValueError(f"p must be prime, got {p}")
        if len(exponents) != n:
            raise ValueError(f"need {n} exponents, got {len(exponents)}")
        if exponents[0].positions_below(EXPONENT_HORIZON) != (0,):
            raise ValueError("the first exponent must be 1 (positions {0})")
        self.n = n
        self.p = p
        self.exponents = tuple(exponents)
        self._trunc_cache = {}
        self._cert_cache = {}

    def truncations(self, k: int) -> tuple:
        if k not in self._trunc_cache:
            self._trunc_cache[k] = tuple(truncate(a, self.p, k) for a in self.exponents)
        return self._trunc_cache[k]

    def to_json_dict(self, horizon: int = EXPONENT_HORIZON) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "horizon": horizon,
            "exponents": [list(a.positions_below(horizon)) for a in self.exponents],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "ActionConfig":
        exps = [PAdicExponent.from_positions(pos) for pos in data["exponents"]]
        return cls(data["n"], data["p"], exps)

    def __repr__(self):
        return f"ActionConfig(n={self.n}, p={self.p})"


def default_action(n: int, p: int) -> ActionConfig:
    return ActionConfig(n, p, default_exponents(n))


def action_exponent(config: ActionConfig, word: Sequence[int], k: int) -> int:
    """Frobenius power by which the group word acts on level k."""
    if len(word) != config.n:
        raise ValueError(f"word has length {len(word)}, expected {config.n}")
    mod = config.p**k
    ts = config.truncations(k)
    return sum(g * t for g, t in zip(word, ts)) % mod


def find_relation(config: ActionConfig, coeff_bound: int, k: int):
    """Smallest-box search for a nonzero vector m with sum(m_i a_i) = 0 mod p^k.

    Returns the witness vector, or None if the box is relation-free.
    """
    if coeff_bound < 1:
        raise ValueError("coeff_bound must be >= 1")
    mod = config.p**k
    ts = config.truncations(k)
    span = range(-coeff_bound, coeff_bound + 1)
    for m in itertools.product(span, repeat=config.n):
        if any(m) and sum(c * t for c, t in zip(m, ts)) % mod == 0:
            return m
    return None


def independence_certificate(config: ActionConfig, coeff_bound: int, k: int) -> bool:
    """True iff no nonzero vector with entries in [-coeff_bound, coeff_bound]
    kills the truncated exponents modulo p^k."""
    return find_relation(config, coeff_bound, k) is None


def least_certified_level(config: ActionConfig, coeff_bound: int,
                          k_cap: int = CERTIFICATION_LEVEL_CAP) -> int:
    """Smallest truncation level at which the box certificate passes.

    Certification is integer arithmetic only, so the level may exceed any
    materialized tower level.  Caches results per bound.
    """
    cached = config._cert_cache.get(coeff_bound)
    if cached is not None:
        return cached
    witness = None
    for k in range(1, k_cap + 1):
        witness = find_relation(config, coeff_bound, k)
        if witness is None:
            config._cert_cache[coeff_bound] = k
            return k
    raise IndependenceError(
        f"no truncation level <= {k_cap} certifies independence at coefficient"
        f" bound {coeff_bound}; blocking relation {witness}",
        relation=witness,
    )


def restriction_order(config: ActionConfig, word: Sequence[int], k: int) -> int:
    """Order of the word's action on level k (additive order of its exponent)."""
    if not any(word):
        raise ValueError("the zero word acts trivially at every level")
    mod = config.p**k
    e = action_exponent(config, word, k)
    return mod // math.gcd(mod, e)
