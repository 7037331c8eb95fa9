"""Twisted group rings at one tower level.

Elements are finitely supported sums of terms c*g where g is an integer
vector (a word in the rank-n free abelian group) and c lives in the level
field.  The product of monomials twists the right coefficient by the
automorphism attached to the left word:

    (c g)(d h) = (c * sigma_g(d)) (g + h)

with sigma_g = Frobenius^(action exponent of g at this level).  Homogeneous
elements (single-term) are exactly the units; the support is pruned of zero
coefficients so structural equality is semantic equality.

A context bundles the tower, the acting group, the level, and the
independence certification performed when the context is created.
"""

from __future__ import annotations

import re

from .action import ActionConfig, action_exponent, least_certified_level
from .errors import ContextMismatchError, NotAUnitError
from .tower import FieldElement, Tower

DEFAULT_CERT_BOUND = 8


class RingContext:
    """One twisted group ring: level-k coefficients, rank-n words."""

    def __init__(self, tower: Tower, action: ActionConfig, k: int,
                 cert_bound: int = DEFAULT_CERT_BOUND, certify: bool = True):
        if action.p != tower.p:
            raise ValueError("tower and action disagree on p")
        if not 0 <= k <= tower.k_max:
            raise ValueError(f"level {k} not materialized (k_max={tower.k_max})")
        self.tower = tower
        self.action = action
        self.k = k
        self.n = action.n
        self.level = tower.level(k)
        self.cert_bound = cert_bound if certify else None
        # Raises IndependenceError when the configured exponents admit a
        # small relation at every truncation level up to the cap.
        self.cert_level = least_certified_level(action, cert_bound) if certify else None
        self._exp_cache = {}
        self._lifted = {}

    def word_exponent(self, word) -> int:
        e = self._exp_cache.get(word)
        if e is None:
            e = action_exponent(self.action, word, self.k)
            self._exp_cache[word] = e
        return e

    def frob(self, c: FieldElement, e: int) -> FieldElement:
        return self.level.frobenius(c, e)

    # -- element factories ---------------------------------------------------

    def zero(self) -> "RingElement":
        return RingElement(self, {})

    def one(self) -> "RingElement":
        return self.monomial(self.level.one(), (0,) * self.n)

    def monomial(self, coeff, word) -> "RingElement":
        if isinstance(coeff, int):
            coeff = self.level.from_base(self.level.base.from_int(coeff))
        word = tuple(word)
        if len(word) != self.n:
            raise ValueError(f"word has length {len(word)}, expected {self.n}")
        if coeff.is_zero():
            return self.zero()
        return RingElement(self, {word: coeff})

    def gen(self, i: int) -> "RingElement":
        """The i-th group generator x_i as a ring element (i is 1-based)."""
        if not 1 <= i <= self.n:
            raise ValueError(f"generator index {i} out of range 1..{self.n}")
        word = tuple(1 if j == i - 1 else 0 for j in range(self.n))
        return self.monomial(self.level.one(), word)

    def gens(self) -> list:
        return [self.gen(i) for i in range(1, self.n + 1)]

    def theta(self) -> FieldElement:
        """The level field generator."""
        return self.level.generator()

    def scalar(self, c: FieldElement) -> "RingElement":
        return self.monomial(c, (0,) * self.n)

    def default_generators(self) -> list:
        """theta and all x_i^(+-1): generates the ring as an algebra over GF(q)."""
        gens = [self.scalar(self.theta())]
        for i in range(1, self.n + 1):
            x = self.gen(i)
            gens.extend([x, x.invert_unit()])
        return gens

    def random_element(self, rng, max_terms: int = 3, coord_bound: int = 2,
                       min_terms: int = 1) -> "RingElement":
        """Sparse random element: 1..max_terms distinct words with coordinates
        in [-coord_bound, coord_bound] and nonzero coefficients."""
        n_terms = rng.randint(min_terms, max_terms)
        terms = {}
        while len(terms) < n_terms:
            word = tuple(
                rng.randint(-coord_bound, coord_bound) for _ in range(self.n)
            )
            terms[word] = self.level.random_element(rng, nonzero=True)
        return RingElement(self, terms)

    def lift_level(self, k: int) -> "RingContext":
        """Context at a higher level over the same tower and action."""
        if k == self.k:
            return self
        ctx = self._lifted.get(k)
        if ctx is None:
            ctx = RingContext(
                self.tower, self.action, k,
                cert_bound=self.cert_bound or DEFAULT_CERT_BOUND,
                certify=self.cert_bound is not None,
            )
            self._lifted[k] = ctx
        return ctx

    def __repr__(self):
        return (
            f"RingContext(p={self.tower.p}, q={self.tower.q}, n={self.n}, k={self.k})"
        )


def same_context(a: RingContext, b: RingContext) -> bool:
    return a is b or (
        a.tower is b.tower and a.action is b.action and a.k == b.k
    )


class RingElement:
    """A finitely supported sum of twisted monomials; immutable."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: RingContext, terms: dict):
        self.ctx = ctx
        self.terms = {w: c for w, c in terms.items() if not c.is_zero()}

    def _check(self, other: "RingElement"):
        if not same_context(self.ctx, other.ctx):
            raise ContextMismatchError(
                f"operands live in different contexts: {self.ctx} vs {other.ctx}"
            )

    def support(self) -> tuple:
        return tuple(sorted(self.terms))

    def coefficient(self, word) -> FieldElement:
        return self.terms.get(tuple(word), self.ctx.level.zero())

    def is_zero(self) -> bool:
        return not self.terms

    def is_homogeneous(self) -> bool:
        return len(self.terms) <= 1

    def grade_component(self, word) -> "RingElement":
        word = tuple(word)
        c = self.terms.get(word)
        return RingElement(self.ctx, {word: c} if c is not None else {})

    def leading_term(self, key=None):
        """Support point maximal in the given total order, with coefficient.

        The default order is lexicographic on word vectors; any key function
        inducing a total group order may be passed instead.
        """
        if not self.terms:
            raise ValueError("the zero element has no leading term")
        w = max(self.terms, key=key) if key is not None else max(self.terms)
        return w, self.terms[w]

    def trailing_term(self, key=None):
        if not self.terms:
            raise ValueError("the zero element has no trailing term")
        w = min(self.terms, key=key) if key is not None else min(self.terms)
        return w, self.terms[w]

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ctx.monomial(other, (0,) * self.ctx.n)
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            prev = out.get(w)
            out[w] = c if prev is None else prev + c
        return RingElement(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.ctx, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ctx.monomial(other, (0,) * self.ctx.n)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            other = self.ctx.monomial(other, (0,) * self.ctx.n)
        elif isinstance(other, FieldElement):
            other = self.ctx.scalar(other)
        self._check(other)
        ctx = self.ctx
        out: dict = {}
        for g, c in self.terms.items():
            e = ctx.word_exponent(g)
            for h, d in other.terms.items():
                w = tuple(a + b for a, b in zip(g, h))
                val = c * ctx.frob(d, e)
                prev = out.get(w)
                out[w] = val if prev is None else prev + val
        return RingElement(ctx, out)

    def __rmul__(self, other):
        # Left multiplication by a plain coefficient never twists.
        if isinstance(other, int):
            other = self.ctx.level.from_base(self.ctx.level.base.from_int(other))
        if isinstance(other, FieldElement):
            return RingElement(
                self.ctx, {w: other * c for w, c in self.terms.items()}
            )
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            return self.invert_unit() ** (-e)
        out = self.ctx.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def invert_unit(self) -> "RingElement":
        """Inverse of a homogeneous element c*g; anything else is not a unit."""
        if len(self.terms) != 1:
            raise NotAUnitError(
                "only nonzero homogeneous elements are units; support size "
                f"{len(self.terms)}"
            )
        (g, c), = self.terms.items()
        neg_g = tuple(-a for a in g)
        e = self.ctx.word_exponent(neg_g)
        return self.ctx.monomial(self.ctx.frob(c.inverse(), e), neg_g)

    def lift_to(self, target: RingContext) -> "RingElement":
        """Image under the coefficient embedding into a higher-level context."""
        if same_context(self.ctx, target):
            return self
        if self.ctx.tower is not target.tower or self.ctx.action is not target.action:
            raise ContextMismatchError("lift requires the same tower and action")
        if target.k < self.ctx.k:
            raise ValueError("cannot lift to a lower level")
        tower = self.ctx.tower
        return RingElement(
            target,
            {w: tower.embed(c, target.k) for w, c in self.terms.items()},
        )

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx.monomial(other, (0,) * self.ctx.n)
        if not isinstance(other, RingElement):
            return NotImplemented
        return same_context(self.ctx, other.ctx) and self.terms == other.terms

    def __repr__(self):
        return f"RingElement({self.to_literal()})"

    # -- literal syntax -------------------------------------------------------

    def to_literal(self) -> str:
        """Canonical literal: terms in lexicographic word order, coefficients
        as polynomials in the level generator t over GF(q)."""
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms):
            parts.append(_term_literal(self.ctx, w, self.terms[w]))
        return " + ".join(parts)


def _coeff_literal(coeff: FieldElement) -> tuple:
    """Literal for a field coefficient; returns (text, needs_parens)."""
    monomials = []
    for i in reversed(range(len(coeff.coords))):
        c = coeff.coords[i]
        if not c:
            continue
        if i == 0:
            monomials.append(str(c))
        else:
            t = "t" if i == 1 else f"t^{i}"
            monomials.append(t if c == 1 else f"{c}*{t}")
    text = " + ".join(monomials)
    return text, len(monomials) > 1


def _term_literal(ctx: RingContext, word, coeff: FieldElement) -> str:
    word_factors = []
    for i, a in enumerate(word, start=1):
        if a == 0:
            continue
        word_factors.append(f"x{i}" if a == 1 else f"x{i}^{a}")
    ctext, parens = _coeff_literal(coeff)
    if not word_factors:
        return f"({ctext})" if parens else ctext
    word_text = "*".join(word_factors)
    if ctext == "1":
        return word_text
    return (f"({ctext})" if parens else ctext) + "*" + word_text


_TOKEN = re.compile(r"\s*(\d+|[t()*+\-^]|x\d+)")


def _tokenize(text: str):
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad element literal near {text[pos:pos+12]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


class _Parser:
    """Recursive-descent parser for the element literal syntax.

    Grammar (informally):
        element := ['-'] term (('+'|'-') term)*
        term    := factor ('*' factor)*
        factor  := '(' element ')' | INT | 't' ['^' INT] | 'x'I ['^' ['-'] INT]

    A term denotes coefficient * group word: coefficient factors multiply in
    the level field, x-factors add exponents per variable.  Integer literals
    are GF(q) encodings (for prime q they read as integers mod q).
    """

    def __init__(self, ctx: RingContext, tokens):
        self.ctx = ctx
        self.toks = tokens
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, tok):
        got = self.take()
        if got != tok:
            raise ValueError(f"expected {tok!r}, got {got!r}")

    def parse(self) -> RingElement:
        out = self.element()
        if self.peek() is not None:
            raise ValueError(f"trailing input at {self.peek()!r}")
        return out

    def element(self) -> RingElement:
        negate = False
        if self.peek() == "-":
            self.take()
            negate = True
        out = self.term()
        if negate:
            out = -out
        while self.peek() in ("+", "-"):
            op = self.take()
            nxt = self.term()
            out = out - nxt if op == "-" else out + nxt
        return out

    def term(self) -> RingElement:
        out = self.factor()
        while self.peek() == "*":
            self.take()
            out = out * self.factor()
        return out

    def factor(self) -> RingElement:
        tok = self.take()
        if tok is None:
            raise ValueError("unexpected end of literal")
        if tok == "(":
            inner = self.element()
            self.expect(")")
            return inner
        if tok == "t":
            exp = 1
            if self.peek() == "^":
                self.take()
                exp = self._int()
            return self.ctx.scalar(self.ctx.theta() ** exp)
        if tok.startswith("x"):
            idx = int(tok[1:])
            exp = 1
            if self.peek() == "^":
                self.take()
                exp = self._signed_int()
            return self.ctx.gen(idx) ** exp
        if tok.isdigit():
            code = int(tok)
            if code >= self.ctx.tower.q:
                raise ValueError(
                    f"coefficient encoding {code} out of range for GF({self.ctx.tower.q})"
                )
            return self.ctx.scalar(self.ctx.level.from_base(code))
        raise ValueError(f"unexpected token {tok!r}")

    def _int(self) -> int:
        tok = self.take()
        if tok is None or not tok.isdigit():
            raise ValueError(f"expected integer, got {tok!r}")
        return int(tok)

    def _signed_int(self) -> int:
        if self.peek() == "-":
            self.take()
            return -self._int()
        return self._int()


def parse_element(ctx: RingContext, text: str) -> RingElement:
    """Parse the element literal syntax; round-trips with to_literal()."""
    return _Parser(ctx, _tokenize(text)).parse()
