"""Polynomial-identity experiments with the standard alternating polynomials.

The standard polynomial of degree m is the signed sum of all m! orderings of
its arguments.  Identity testing samples random tuples from a level ring:
the standard polynomials are multilinear, and the level ring sits inside its
central quotient division ring with central denominators, so a multilinear
identity holds on the ring iff it holds on the quotient.  Vanishing results
are reported as "vanished in N trials", never as proofs; non-identities are
proved by the exhibited witness with its exact nonzero value.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import BudgetError
from .ring import RingContext, RingElement

MAX_DEGREE = 8  # m! products; exactness over speed

# Per-degree ceilings for vanishing confirmation runs: evaluation cost grows
# like m! times the support growth, so high degrees get fewer trials and
# sparser sample elements.  Reports always record what actually ran.
_VANISH_TRIAL_CAP = {2: None, 4: None, 6: 60, 8: 8}
_DEGREE_MAX_TERMS = {2: 3, 4: 3, 6: 2, 8: 1}


def standard_polynomial(elements: Sequence[RingElement]) -> RingElement:
    """Alternating sum over all orderings of the arguments, computed exactly.

    Prefix products are shared along the permutation tree, so the number of
    ring multiplications is sum_j m!/(m-j)! rather than m * m!.
    """
    m = len(elements)
    if m == 0:
        raise ValueError("need at least one argument")
    if m > MAX_DEGREE:
        raise BudgetError(f"degree {m} exceeds the budget {MAX_DEGREE}")
    ctx = elements[0].ctx
    acc: dict = {}
    char = ctx.level.base.char
    minus_one = ctx.level.from_base(char - 1)
    signed = char != 2  # in characteristic 2 the sign is trivial

    def emit(prefix: RingElement, odd: bool):
        for w, c in prefix.terms.items():
            val = minus_one * c if (odd and signed) else c
            prev = acc.get(w)
            acc[w] = val if prev is None else prev + val

    def walk(prefix: Optional[RingElement], used: int, inversions: int):
        if used == (1 << m) - 1:
            emit(prefix, inversions & 1 == 1)
            return
        for i in range(m):
            bit = 1 << i
            if used & bit:
                continue
            # appending i inverts against every already placed larger index
            inv = inversions + bin(used >> (i + 1)).count("1")
            nxt = elements[i] if prefix is None else prefix * elements[i]
            walk(nxt, used | bit, inv)

    walk(None, 0, 0)
    return RingElement(ctx, acc)


@dataclass(frozen=True)
class PIReport:
    """Outcome of sampling one standard polynomial on one level ring."""

    k: int
    degree: int
    trials: int
    vanish_count: int
    witness: Optional[dict]  # {"elements": [...], "value": RingElement}
    seed: int

    def is_identity_evidence(self) -> bool:
        return self.vanish_count == self.trials

    def to_json_dict(self) -> dict:
        out = {
            "k": self.k,
            "degree": self.degree,
            "trials": self.trials,
            "vanish_count": self.vanish_count,
            "seed": self.seed,
            "witness": None,
        }
        if self.witness is not None:
            out["witness"] = {
                "elements": [e.to_literal() for e in self.witness["elements"]],
                "value": self.witness["value"].to_literal(),
            }
        return out


def test_identity(ctx: RingContext, degree: int, trials: int, seed: int,
                  stop_on_witness: bool = False, max_terms: int = 3,
                  coord_bound: int = 2) -> PIReport:
    """Evaluate the standard polynomial on random tuples.

    With stop_on_witness the run ends at the first nonzero value, which is
    the honest mode for non-identity searches; the report's trial count is
    the number actually run.
    """
    if degree % 2 != 0:
        raise ValueError("identity testing uses even degrees")
    if degree > MAX_DEGREE:
        raise BudgetError(f"degree {degree} exceeds the budget {MAX_DEGREE}")
    rng = random.Random(seed)
    vanish = 0
    witness = None
    run = 0
    for _ in range(trials):
        run += 1
        args = [
            ctx.random_element(rng, max_terms=max_terms, coord_bound=coord_bound)
            for _ in range(degree)
        ]
        value = standard_polynomial(args)
        if value.is_zero():
            vanish += 1
        elif witness is None:
            witness = {"elements": args, "value": value}
            if stop_on_witness:
                break
    return PIReport(
        k=ctx.k, degree=degree, trials=run, vanish_count=vanish,
        witness=witness, seed=seed,
    )


@dataclass(frozen=True)
class ScanRow:
    """Identity/non-identity frontier measured at one level."""

    k: int
    largest_failing_degree: Optional[int]
    smallest_vanishing_degree: Optional[int]
    reports: tuple
    untested: tuple

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "largest_failing_degree": self.largest_failing_degree,
            "smallest_vanishing_degree": self.smallest_vanishing_degree,
            "reports": [r.to_json_dict() for r in self.reports],
            "untested": list(self.untested),
        }


def pi_degree_scan(contexts: Sequence[RingContext], trials: int, seed: int,
                   max_degree: int = MAX_DEGREE) -> list:
    """Measure the failing/vanishing frontier for each level.

    Degrees below the expected identity threshold 2*p^k are searched for
    witnesses (early stop); degrees at or above it run capped vanishing
    confirmation.  Degrees beyond the budget are reported untested, never
    extrapolated.
    """
    rows = []
    for ctx in contexts:
        threshold = 2 * ctx.tower.p**ctx.k
        reports = []
        untested = []
        largest_failing = None
        smallest_vanishing = None
        for m in range(2, max_degree + 1, 2):
            if m >= threshold:
                cap = _VANISH_TRIAL_CAP.get(m)
                n_trials = trials if cap is None else min(trials, cap)
            else:
                n_trials = trials
            report = test_identity(
                ctx, m, n_trials, seed=seed + m, stop_on_witness=m < threshold,
                max_terms=_DEGREE_MAX_TERMS.get(m, 1),
            )
            reports.append(report)
            if report.witness is not None:
                largest_failing = m
            elif smallest_vanishing is None:
                smallest_vanishing = m
        for m in range(max_degree + 2, threshold + 1, 2):
            untested.append(m)
        rows.append(
            ScanRow(
                k=ctx.k,
                largest_failing_degree=largest_failing,
                smallest_vanishing_degree=smallest_vanishing,
                reports=tuple(reports),
                untested=tuple(untested),
            )
        )
    return rows
