"""The commutative ring (Z^n, +, conv) defined by a monic modulus polynomial.

A context is fixed by phi(x) = x^n - phi_{n-1} x^{n-1} - ... - phi_1 x - phi_0
with phi_0 != 0.  Vectors of length n are identified with polynomials of
degree < n (constant term first) and multiplied by convolution, i.e. by
polynomial product followed by reduction mod phi(x).

All arithmetic is arbitrary precision; there is deliberately no fixed-width
fast path anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import ContextMismatch


@dataclass(frozen=True)
class ModulusPolynomial:
    """Degree-n monic modulus polynomial, stored by its reduction coefficients.

    ``phi_coeffs[i]`` is the coefficient phi_i in
    x^n = phi_{n-1} x^{n-1} + ... + phi_1 x + phi_0.
    """

    n: int
    phi_coeffs: tuple
    cyclotomic_prime: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "phi_coeffs", tuple(int(c) for c in self.phi_coeffs))
        if self.n < 2:
            raise ValueError("degree must be at least 2")
        if len(self.phi_coeffs) != self.n:
            raise ValueError("need exactly n reduction coefficients")
        if self.phi_coeffs[0] == 0:
            raise ValueError("phi_0 must be nonzero")
        if self.cyclotomic_prime is not None:
            p = self.cyclotomic_prime
            if self.n != p - 1 or any(c != -1 for c in self.phi_coeffs):
                raise ValueError("cyclotomic context requires n = p-1 and all coefficients -1")

    @classmethod
    def cyclotomic(cls, p: int) -> "ModulusPolynomial":
        """The p-th cyclotomic context: phi(x) = x^{p-1} + ... + x + 1."""
        if p < 3 or not is_prime(p):
            raise ValueError("p must be an odd prime")
        return cls(p - 1, (-1,) * (p - 1), p)

    def poly(self) -> list:
        """phi(x) itself as an ascending coefficient list of length n+1."""
        return [-c for c in self.phi_coeffs] + [1]


@dataclass(frozen=True)
class RingElement:
    """An integer vector of length n, bound to one modulus-polynomial context."""

    context: ModulusPolynomial
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))
        if len(self.coords) != self.context.n:
            raise ValueError("coordinate vector length must equal the context degree")

    def __add__(self, other: "RingElement") -> "RingElement":
        _require_same_context(self, other)
        return RingElement(self.context, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "RingElement") -> "RingElement":
        _require_same_context(self, other)
        return RingElement(self.context, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "RingElement":
        return RingElement(self.context, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, RingElement):
            return convolve(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, k: int) -> "RingElement":
        return RingElement(self.context, tuple(k * a for a in self.coords))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    def norm_squared(self) -> int:
        return sum(a * a for a in self.coords)


def _require_same_context(a: RingElement, b: RingElement) -> None:
    if a.context != b.context:
        raise ContextMismatch("ring elements from different contexts never combine")


def zero(ctx: ModulusPolynomial) -> RingElement:
    return RingElement(ctx, (0,) * ctx.n)


def unit(ctx: ModulusPolynomial) -> RingElement:
    return embed_scalar(1, ctx)


def embed_scalar(a: int, ctx: ModulusPolynomial) -> RingElement:
    """The ring embedding of an integer: (a, 0, ..., 0)."""
    return RingElement(ctx, (int(a),) + (0,) * (ctx.n - 1))


def rotation_matrix(ctx: ModulusPolynomial) -> list:
    """The companion-style matrix H whose action realizes multiplication by x."""
    n = ctx.n
    h = [[0] * n for _ in range(n)]
    h[0][n - 1] = ctx.phi_coeffs[0]
    for i in range(1, n):
        h[i][i - 1] = 1
        h[i][n - 1] = ctx.phi_coeffs[i]
    return h


def apply_rotation(ctx: ModulusPolynomial, v) -> tuple:
    """H . v without materializing H."""
    n = ctx.n
    last = v[n - 1]
    out = [ctx.phi_coeffs[0] * last]
    for i in range(1, n):
        out.append(v[i - 1] + ctx.phi_coeffs[i] * last)
    return tuple(out)


def ideal_matrix(alpha: RingElement) -> list:
    """The matrix with columns [alpha, H.alpha, ..., H^{n-1}.alpha] (as rows here)."""
    ctx = alpha.context
    n = ctx.n
    col = alpha.coords
    cols = [col]
    for _ in range(n - 1):
        col = apply_rotation(ctx, col)
        cols.append(col)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def convolve(a: RingElement, b: RingElement) -> RingElement:
    """Polynomial product followed by reduction with x^n = sum phi_i x^i."""
    _require_same_context(a, b)
    ctx = a.context
    n = ctx.n
    prod = [0] * (2 * n - 1)
    for i, ai in enumerate(a.coords):
        if ai == 0:
            continue
        for j, bj in enumerate(b.coords):
            prod[i + j] += ai * bj
    phi = ctx.phi_coeffs
    for d in range(2 * n - 2, n - 1, -1):
        c = prod[d]
        if c == 0:
            continue
        prod[d] = 0
        base = d - n
        for i in range(n):
            prod[base + i] += c * phi[i]
    return RingElement(ctx, tuple(prod[:n]))


def bareiss_determinant(matrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = [list(row) for row in matrix]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def ring_determinant(alpha: RingElement) -> int:
    """det of the ideal matrix of alpha; zero signals a non-invertible element."""
    return bareiss_determinant(ideal_matrix(alpha))


def ring_determinant_resultant(alpha: RingElement) -> int:
    """Independent cross-check: the resultant of (phi, alpha) over Z.

    Equals ring_determinant(alpha) because phi is monic, so the resultant is
    the product of alpha over the complex roots of phi.
    """
    return resultant(alpha.context.poly(), list(alpha.coords))


# --- integer polynomial helpers (ascending coefficient lists) ---


def _trim(f: list) -> list:
    while f and f[-1] == 0:
        f.pop()
    return f


def _content(f: list) -> int:
    g = 0
    for c in f:
        g = gcd(g, c)
    return g if g else 1


def _pseudo_rem(f: list, g: list) -> list:
    """prem(f, g): the remainder of lc(g)^{deg f - deg g + 1} * f divided by g."""
    r = list(f)
    dg = len(g) - 1
    lead = g[-1]
    e = len(r) - 1 - dg + 1
    while r and len(r) - 1 >= dg:
        d = len(r) - 1
        c = r[-1]
        r = [lead * x for x in r]
        for i, gc in enumerate(g):
            r[d - dg + i] -= c * gc
        _trim(r)
        e -= 1
    if e > 0:
        r = [lead ** e * x for x in r]
    return r


def resultant(f, g) -> int:
    """Res(f, g) over Z via the subresultant remainder sequence."""
    a_poly = _trim(list(f))
    b_poly = _trim(list(g))
    if not a_poly or not b_poly:
        return 0
    sign = 1
    if len(a_poly) < len(b_poly):
        if ((len(a_poly) - 1) * (len(b_poly) - 1)) % 2 == 1:
            sign = -sign
        a_poly, b_poly = b_poly, a_poly
    if len(b_poly) == 1:
        return sign * b_poly[0] ** (len(a_poly) - 1)
    ca = _content(a_poly)
    cb = _content(b_poly)
    a_poly = [c // ca for c in a_poly]
    b_poly = [c // cb for c in b_poly]
    scale = ca ** (len(b_poly) - 1) * cb ** (len(a_poly) - 1)
    g_coef = 1
    h_coef = 1
    while True:
        da = len(a_poly) - 1
        db = len(b_poly) - 1
        delta = da - db
        if da % 2 == 1 and db % 2 == 1:
            sign = -sign
        rem = _pseudo_rem(a_poly, b_poly)
        a_poly = b_poly
        if not rem:
            return 0
        denom = g_coef * h_coef ** delta
        b_poly = [c // denom for c in rem]
        g_coef = a_poly[-1]
        if delta > 1:
            h_coef = g_coef ** delta // h_coef ** (delta - 1)
        elif delta == 1:
            h_coef = g_coef
        # delta == 0 leaves h_coef unchanged
        if len(b_poly) == 1:
            da = len(a_poly) - 1
            num = b_poly[0] ** da
            h_final = num // h_coef ** (da - 1) if da >= 1 else 1
            return sign * scale * h_final


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all 64-bit inputs and beyond desk scale."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True
