"""Full-rank integer lattices viewed as ideals of (Z^n, +, conv).

Bases are kept in Hermite Normal Form with the convention used throughout
this package: upper triangular, b_ii >= 1, and every off-diagonal entry of
row i reduced into [0, b_ii).  Columns are the basis vectors, so the
Gram-Schmidt family of an HNF basis is exactly its diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import ContextMismatch, DependentSet, SingularBasis, ZeroDivisorGenerator
from .ring import (
    ModulusPolynomial,
    RingElement,
    apply_rotation,
    convolve,
    ideal_matrix,
    ring_determinant,
)


@dataclass(frozen=True)
class IdealLattice:
    """An integer lattice carried with its canonical HNF basis (rows)."""

    context: ModulusPolynomial
    hnf_basis: tuple
    generator: RingElement | None = None

    def __post_init__(self):
        n = self.context.n
        rows = tuple(tuple(int(x) for x in row) for row in self.hnf_basis)
        object.__setattr__(self, "hnf_basis", rows)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError("HNF basis must be n x n")
        for i in range(n):
            if rows[i][i] < 1:
                raise ValueError("diagonal entries must be >= 1")
            for j in range(n):
                if j < i and rows[i][j] != 0:
                    raise ValueError("HNF basis must be upper triangular")
                if j > i and not 0 <= rows[i][j] < rows[i][i]:
                    raise ValueError("off-diagonal entries must be reduced into [0, b_ii)")

    @property
    def gs_diagonal(self) -> tuple:
        return tuple(self.hnf_basis[i][i] for i in range(self.context.n))

    def determinant(self) -> int:
        d = 1
        for b in self.gs_diagonal:
            d *= b
        return d

    def basis_columns(self) -> list:
        n = self.context.n
        return [tuple(self.hnf_basis[i][j] for i in range(n)) for j in range(n)]

    def basis_elements(self) -> list:
        return [RingElement(self.context, col) for col in self.basis_columns()]


def _require_same_context(a, b) -> None:
    if a.context != b.context:
        raise ContextMismatch("operands belong to different contexts")


def _xgcd(a: int, b: int):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def _hnf_pivots(columns, n: int, with_coeffs: bool = False):
    """Column-style HNF of the lattice generated by ``columns``.

    Returns the list of pivot columns (pivot for row i at index i, or None if
    that row is unreachable).  With ``with_coeffs`` each column drags along a
    coefficient vector over the original columns, so callers can express every
    pivot as an integer combination of the input.
    """
    m = len(columns)
    work = []
    for k, col in enumerate(columns):
        vec = list(col)
        if all(x == 0 for x in vec):
            continue
        coeff = None
        if with_coeffs:
            coeff = [0] * m
            coeff[k] = 1
        work.append((vec, coeff))
    pivots = [None] * n
    for i in range(n - 1, -1, -1):
        keep = []
        pivot = None
        for item in work:
            if item[0][i] == 0:
                keep.append(item)
            elif pivot is None:
                pivot = item
            else:
                pivot, dropped = _combine(pivot, item, i, with_coeffs)
                if any(dropped[0]):
                    keep.append(dropped)
        if pivot is not None:
            if pivot[0][i] < 0:
                pivot = ([-x for x in pivot[0]],
                         [-x for x in pivot[1]] if with_coeffs else None)
            pivots[i] = pivot
        work = keep
    # reduce off-diagonal entries into [0, b_ii)
    for j in range(n):
        if pivots[j] is None:
            continue
        vec, coeff = pivots[j]
        for i in range(j - 1, -1, -1):
            if pivots[i] is None:
                continue
            pvec, pcoeff = pivots[i]
            q = vec[i] // pvec[i]
            if q:
                for r in range(i + 1):
                    vec[r] -= q * pvec[r]
                if with_coeffs:
                    for r in range(len(coeff)):
                        coeff[r] -= q * pcoeff[r]
        pivots[j] = (vec, coeff)
    return pivots


def _combine(u, v, i, with_coeffs):
    """Unimodular column op putting gcd at row i of the first column, 0 in the second."""
    a, b = u[0][i], v[0][i]
    g, x, y = _xgcd(a, b)
    p, q = b // g, a // g
    new_u = [x * uu + y * vv for uu, vv in zip(u[0], v[0])]
    new_v = [p * uu - q * vv for uu, vv in zip(u[0], v[0])]
    if with_coeffs:
        cu = [x * uu + y * vv for uu, vv in zip(u[1], v[1])]
        cv = [p * uu - q * vv for uu, vv in zip(u[1], v[1])]
        return (new_u, cu), (new_v, cv)
    return (new_u, None), (new_v, None)


def _hnf_matrix(columns, n: int):
    pivots = _hnf_pivots(columns, n)
    if any(p is None for p in pivots):
        raise SingularBasis("basis does not have full rank")
    return tuple(tuple(pivots[j][0][i] for j in range(n)) for i in range(n))


def hnf(basis, context: ModulusPolynomial) -> IdealLattice:
    """Canonical HNF of the lattice generated by the columns of ``basis``."""
    n = context.n
    rows = [list(r) for r in basis]
    if len(rows) != n or any(len(r) < n for r in rows):
        raise ValueError("basis must have n rows")
    m = len(rows[0])
    columns = [tuple(rows[i][j] for i in range(n)) for j in range(m)]
    return IdealLattice(context, _hnf_matrix(columns, n))


def principal_ideal(alpha: RingElement) -> IdealLattice:
    """The ideal generated by alpha, i.e. the lattice of the ideal matrix."""
    if ring_determinant(alpha) == 0:
        raise ZeroDivisorGenerator("generator has zero ring determinant")
    lat = hnf(ideal_matrix(alpha), alpha.context)
    return IdealLattice(alpha.context, lat.hnf_basis, generator=alpha)


def zn_lattice(context: ModulusPolynomial) -> IdealLattice:
    n = context.n
    eye = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    return IdealLattice(context, eye)


def one_dim_modulus(lattice: IdealLattice) -> int:
    """The top-left HNF entry b_11: the size of the scalar residue line."""
    return lattice.hnf_basis[0][0]


def gram_schmidt(vectors) -> list:
    """Exact rational Gram-Schmidt orthogonalization of independent vectors."""
    basis = []
    for v in vectors:
        coords = v.coords if isinstance(v, RingElement) else tuple(v)
        cur = [Fraction(x) for x in coords]
        for star in basis:
            denom = sum(s * s for s in star)
            num = sum(c * s for c, s in zip(cur, star))
            mu = num / denom
            cur = [c - mu * s for c, s in zip(cur, star)]
        if all(c == 0 for c in cur):
            raise DependentSet("vectors are linearly dependent")
        basis.append(cur)
    return [tuple(star) for star in basis]


def reduce_mod_ideal(c: RingElement, lattice: IdealLattice) -> RingElement:
    """The unique representative of c in the orthogonal parallelepiped of the ideal.

    Back-substitution with floors on the HNF basis; the output w satisfies
    c - w in the lattice and 0 <= w_i < b_ii componentwise.
    """
    _require_same_context(c, lattice)
    b = lattice.hnf_basis
    n = lattice.context.n
    w = list(c.coords)
    for i in range(n - 1, -1, -1):
        q = w[i] // b[i][i]
        if q:
            for r in range(i + 1):
                w[r] -= q * b[r][i]
    return RingElement(c.context, tuple(w))


def contains(lattice: IdealLattice, v: RingElement) -> bool:
    """Membership by back-substitution on the HNF basis."""
    _require_same_context(v, lattice)
    b = lattice.hnf_basis
    n = lattice.context.n
    w = list(v.coords)
    for i in range(n - 1, -1, -1):
        if w[i] % b[i][i]:
            return False
        q = w[i] // b[i][i]
        if q:
            for r in range(i + 1):
                w[r] -= q * b[r][i]
    return True


def is_ideal_lattice(lattice: IdealLattice) -> bool:
    """Closure under the multiplier action: H . beta_j stays in the lattice."""
    ctx = lattice.context
    for col in lattice.basis_columns():
        rotated = RingElement(ctx, apply_rotation(ctx, col))
        if not contains(lattice, rotated):
            return False
    return True


def is_coprime(a: IdealLattice, b: IdealLattice) -> bool:
    """True iff the HNF of the concatenated bases is the identity, i.e. I+J = Z^n."""
    _require_same_context(a, b)
    n = a.context.n
    columns = a.basis_columns() + b.basis_columns()
    mat = _hnf_matrix(columns, n)
    return all(mat[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n))


def solve_in_column_lattice(columns, target, n: int):
    """Integer coefficients expressing ``target`` over ``columns``, or None.

    Works through the HNF-with-transform of the column set, then solves the
    upper-triangular system exactly.
    """
    pivots = _hnf_pivots(columns, n, with_coeffs=True)
    m = len(columns)
    rem = list(target)
    sel = [0] * m
    for i in range(n - 1, -1, -1):
        if pivots[i] is None:
            if rem[i] != 0:
                return None
            continue
        vec, coeff = pivots[i]
        if rem[i] % vec[i]:
            return None
        s = rem[i] // vec[i]
        if s:
            for r in range(i + 1):
                rem[r] -= s * vec[r]
            for r in range(m):
                sel[r] += s * coeff[r]
    if any(rem):
        return None
    return sel


def coprimality_witness(a: IdealLattice, b: IdealLattice):
    """Elements alpha in I and beta in J with alpha + beta = e."""
    from .ring import unit

    _require_same_context(a, b)
    ctx = a.context
    n = ctx.n
    cols_a = a.basis_columns()
    cols_b = b.basis_columns()
    sel = solve_in_column_lattice(cols_a + cols_b, unit(ctx).coords, n)
    if sel is None:
        return None
    alpha = [0] * n
    beta = [0] * n
    for k, col in enumerate(cols_a):
        for r in range(n):
            alpha[r] += sel[k] * col[r]
    for k, col in enumerate(cols_b):
        for r in range(n):
            beta[r] += sel[n + k] * col[r]
    return RingElement(ctx, tuple(alpha)), RingElement(ctx, tuple(beta))


def ideal_product(ideals) -> IdealLattice:
    """Left fold of pairwise products; each step HNF-reduces the n^2 generators."""
    ideals = list(ideals)
    if not ideals:
        raise ValueError("need at least one ideal")
    ctx = ideals[0].context
    acc = ideals[0]
    for other in ideals[1:]:
        _require_same_context(acc, other)
        products = [
            convolve(x, y).coords
            for x in acc.basis_elements()
            for y in other.basis_elements()
        ]
        acc = IdealLattice(ctx, _hnf_matrix(products, ctx.n))
    gen = None
    if all(i.generator is not None for i in ideals):
        gen = ideals[0].generator
        for other in ideals[1:]:
            gen = convolve(gen, other.generator)
    return IdealLattice(ctx, acc.hnf_basis, generator=gen)


def moduli_gcd(a: IdealLattice, b: IdealLattice) -> int:
    return gcd(one_dim_modulus(a), one_dim_modulus(b))
