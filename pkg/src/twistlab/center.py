"""Center structure of a twisted group ring at one level.

The words acting trivially on the level field form a full-rank integer
sublattice (the kernel lattice); its index is p^k and the ring's center is
spanned over GF(q) by exactly those words.  The whole ring is then a free
module over its center of rank p^(2k), with basis {theta^i * g_j} for the
power basis of the level field and coset representatives g_j of the kernel
lattice taken from the fundamental box of its Hermite normal form.

Hermite normal form convention: rows, upper triangular, positive pivots,
entries above a pivot reduced into the centered range (-d/2, d/2].
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .action import action_exponent
from .errors import IndependenceError, InternalFaultError
from .ring import RingContext, RingElement


def _centered(x: int, d: int) -> int:
    r = x % d
    if 2 * r > d:
        r -= d
    return r


def hnf(rows) -> list:
    """Row-style Hermite normal form of the lattice generated by the rows.

    Returns only the nonzero rows (one per pivot column), upper triangular
    with positive pivots and centered off-diagonal entries.
    """
    mat = [list(r) for r in rows if any(r)]
    if not mat:
        return []
    ncols = len(mat[0])
    done = 0
    for col in range(ncols):
        # gcd-combine every row with a nonzero entry in this column
        while True:
            live = [i for i in range(done, len(mat)) if mat[i][col]]
            if len(live) <= 1:
                break
            live.sort(key=lambda i: abs(mat[i][col]))
            i0 = live[0]
            for i in live[1:]:
                q = mat[i][col] // mat[i0][col]
                mat[i] = [a - q * b for a, b in zip(mat[i], mat[i0])]
        live = [i for i in range(done, len(mat)) if mat[i][col]]
        if not live:
            continue
        i0 = live[0]
        mat[done], mat[i0] = mat[i0], mat[done]
        if mat[done][col] < 0:
            mat[done] = [-a for a in mat[done]]
        done += 1
    mat = [row for row in mat[:done]]
    # centered reduction of entries above each pivot
    pivots = []
    for row in mat:
        pc = next(i for i, v in enumerate(row) if v)
        pivots.append(pc)
    for j in range(1, len(mat)):
        pc, d = pivots[j], mat[j][pivots[j]]
        for i in range(j):
            target = _centered(mat[i][pc], d)
            q = (mat[i][pc] - target) // d
            if q:
                mat[i] = [a - q * b for a, b in zip(mat[i], mat[j])]
    return mat


@dataclass(frozen=True)
class KernelLattice:
    """Integer basis (HNF rows) of the words acting trivially at level k."""

    k: int
    basis: tuple
    index: int

    def contains(self, word) -> bool:
        return not any(self.reduce(word)[0])

    def reduce(self, word):
        """Split word = h + r with h in the lattice and r in the fundamental
        box; returns (r, h)."""
        v = list(word)
        n = len(v)
        for i in range(n):
            d = self.basis[i][i]
            q = v[i] // d
            if q:
                for j in range(i, n):
                    v[j] -= q * self.basis[i][j]
        r = tuple(v)
        h = tuple(a - b for a, b in zip(word, r))
        return r, h

    def coset_representative(self, word) -> tuple:
        return self.reduce(word)[0]

    def lattice_coordinates(self, word) -> tuple:
        """Coordinates of a lattice member in the HNF basis."""
        v = list(word)
        n = len(v)
        coords = []
        for i in range(n):
            d = self.basis[i][i]
            if v[i] % d:
                raise ValueError(f"{word} is not in the kernel lattice")
            q = v[i] // d
            coords.append(q)
            for j in range(i, n):
                v[j] -= q * self.basis[i][j]
        if any(v):
            raise ValueError(f"{word} is not in the kernel lattice")
        return tuple(coords)

    def from_lattice_coordinates(self, coords) -> tuple:
        n = len(self.basis)
        word = [0] * n
        for c, row in zip(coords, self.basis):
            for j in range(n):
                word[j] += c * row[j]
        return tuple(word)

    def box_representatives(self) -> list:
        """All coset representatives, in lexicographic order."""
        ranges = [range(self.basis[i][i]) for i in range(len(self.basis))]
        return [tuple(v) for v in product(*ranges)]

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "basis": [list(r) for r in self.basis],
            "index": self.index,
        }


def kernel_lattice(ctx: RingContext) -> KernelLattice:
    """Kernel of the level-k action as an HNF integer lattice of index p^k.

    Refuses to run when the context skipped independence certification.
    Lattices are cached on the context.
    """
    if ctx.cert_level is None:
        raise IndependenceError(
            "kernel lattice requires an independence-certified context"
        )
    cached = getattr(ctx, "_kernel_lattice", None)
    if cached is not None:
        return cached
    n, p, k = ctx.n, ctx.tower.p, ctx.k
    mod = p**k
    ts = ctx.action.truncations(k)
    # Kernel of Z^(n+1) -> Z, (g, y) |-> sum(g_i t_i) + y*mod, projected to
    # the first n coordinates: column-reduce the map row over an identity.
    row = list(ts) + [mod]
    width = n + 1
    cols = [[row[j]] + [1 if i == j else 0 for i in range(width)] for j in range(width)]
    while True:
        live = [c for c in cols if c[0]]
        if len(live) <= 1:
            break
        live.sort(key=lambda c: abs(c[0]))
        base = live[0]
        for c in live[1:]:
            q = c[0] // base[0]
            for i in range(width + 1):
                c[i] -= q * base[i]
    kernel_rows = [c[1 : n + 1] for c in cols if c[0] == 0]
    basis = hnf(kernel_rows)
    if len(basis) != n:
        raise InternalFaultError("kernel lattice does not have full rank")
    index = 1
    for i in range(n):
        index *= basis[i][i]
    if index != mod:
        raise InternalFaultError(
            f"kernel lattice index {index} != p^k = {mod}"
        )
    for row_ in basis:
        if action_exponent(ctx.action, row_, k) != 0:
            raise InternalFaultError("kernel basis row acts nontrivially")
    lattice = KernelLattice(k=k, basis=tuple(tuple(r) for r in basis), index=index)
    ctx._kernel_lattice = lattice
    return lattice


def is_central(r: RingElement) -> bool:
    """Commutator test against the group generators and the field generator."""
    ctx = r.ctx
    theta = ctx.scalar(ctx.theta())
    if r * theta != theta * r:
        return False
    for x in ctx.gens():
        if r * x != x * r:
            return False
    return True


def is_central_structural(r: RingElement, lattice: KernelLattice) -> bool:
    """Structural test: support inside the kernel lattice, coefficients in GF(q)."""
    for w, c in r.terms.items():
        if not c.in_base_field():
            return False
        if not lattice.contains(w):
            return False
    return True


@dataclass(frozen=True)
class FreeBasis:
    """Module basis {theta^i * g_j} of the ring over its center."""

    field_basis: tuple  # power basis of the level field over GF(q)
    coset_reps: tuple  # fundamental-box representatives, lex order
    elements: tuple  # the products, index j * deg + i

    def size(self) -> int:
        return len(self.elements)

    def index_of(self, i: int, j: int) -> int:
        return j * len(self.field_basis) + i


def free_basis(ctx: RingContext, lattice: KernelLattice = None) -> FreeBasis:
    if lattice is None:
        lattice = kernel_lattice(ctx)
    theta = ctx.theta()
    deg = ctx.level.degree
    field_basis = []
    cur = ctx.level.one()
    for _ in range(deg):
        field_basis.append(cur)
        cur = cur * theta
    reps = lattice.box_representatives()
    elements = tuple(
        ctx.monomial(c, g) for g in reps for c in field_basis
    )
    return FreeBasis(
        field_basis=tuple(field_basis), coset_reps=tuple(reps), elements=elements
    )


def decompose_over_center(r: RingElement, basis: FreeBasis,
                          lattice: KernelLattice) -> list:
    """Write r as sum z_ij * (theta^i g_j) with central coordinates z_ij.

    Returns the flat list of central ring elements in basis order; the
    decomposition is exact and unique.
    """
    ctx = r.ctx
    deg = len(basis.field_basis)
    coords = [dict() for _ in range(basis.size())]
    rep_index = {g: j for j, g in enumerate(basis.coset_reps)}
    for w, c in r.terms.items():
        rep, h = lattice.reduce(w)
        j = rep_index[rep]
        for i, a in enumerate(c.coords):
            if a:
                slot = coords[basis.index_of(i, j)]
                prev = slot.get(h)
                val = ctx.level.from_base(a)
                slot[h] = val if prev is None else prev + val
    return [RingElement(ctx, terms) for terms in coords]


def recompose(zs, basis: FreeBasis) -> RingElement:
    if len(zs) != basis.size():
        raise ValueError(f"expected {basis.size()} coordinates, got {len(zs)}")
    out = None
    for z, b in zip(zs, basis.elements):
        term = z * b
        out = term if out is None else out + term
    return out
