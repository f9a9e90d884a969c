"""Verifiable security-side quantities: norm-bound constants, sigma, a
covering-radius estimator at tiny dimension, and the compact-knapsack view
of the scheme with a desk-scale brute-force solver.

Every pass/fail comparison here is exact: the irrational constant M enters
only through a certified rational upper bound, compared in squared form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .errors import DimensionTooLarge, SearchSpaceTooLarge
from .keygen import PublicKey
from .lattice import IdealLattice, gram_schmidt
from .ring import ModulusPolynomial, RingElement, convolve

_BRUTE_FORCE_CAP = 10 ** 7


@dataclass(frozen=True)
class NormConstants:
    """Constants bounding coordinate growth under convolution.

    M^2 = 2 + 2 phi_max^2 and W = (M^n - 1)/(M - 1); W_upper is an exact
    rational upper bound on W (tight when M is an integer).
    """

    n: int
    phi_max: int
    M_squared: int
    W_upper: Fraction


def norm_constants(ctx: ModulusPolynomial, precision_digits: int = 30) -> NormConstants:
    phi_max = max(abs(c) for c in ctx.phi_coeffs)
    m_squared = 2 + 2 * phi_max * phi_max
    n = ctx.n
    root = isqrt(m_squared)
    if root * root == m_squared:
        w_upper = Fraction(root ** n - 1, root - 1)
    else:
        # certified interval for M, then upper-round the geometric sum
        scale = 10 ** precision_digits
        s = isqrt(m_squared * scale * scale)
        m_lo = Fraction(s, scale)
        m_hi = Fraction(s + 1, scale)
        w_upper = (m_hi ** n - 1) / (m_lo - 1)
    return NormConstants(n, phi_max, m_squared, w_upper)


def check_norm_bound(alpha: RingElement, beta: RingElement,
                     constants: NormConstants):
    """Compare |a conv b|^2 against W_upper^2 |a|^2 |b|^2, all exact.

    Returns (holds, squared ratio).
    """
    prod = convolve(alpha, beta)
    lhs = prod.norm_squared()
    rhs = constants.W_upper ** 2 * alpha.norm_squared() * beta.norm_squared()
    if rhs == 0:
        ratio = Fraction(0) if lhs == 0 else Fraction(lhs)
        return lhs == 0, ratio
    ratio = Fraction(lhs) / rhs
    return ratio <= 1, ratio


def sigma_squared(vectors) -> Fraction:
    """Sum of squared Gram-Schmidt lengths of an independent family."""
    total = Fraction(0)
    for star in gram_schmidt(vectors):
        total += sum(s * s for s in star)
    return total


# --- exact CVP at tiny dimension ---


def _closest_distance_squared(columns, target) -> Fraction:
    """Exact squared distance from a rational point to the column lattice.

    Depth-first enumeration over Gram-Schmidt levels with exact rational
    pruning, seeded by the Babai rounding solution.
    """
    n = len(columns)
    stars = gram_schmidt(columns)
    norms = [sum(s * s for s in star) for star in stars]
    # mu[j][i]: projection of basis vector j on star i (j > i)
    mu = [[Fraction(0)] * n for _ in range(n)]
    for j in range(n):
        for i in range(j):
            mu[j][i] = (sum(Fraction(columns[j][r]) * stars[i][r] for r in range(n))
                        / norms[i])
    t_coords = [sum(Fraction(target[r]) * stars[i][r] for r in range(n)) / norms[i]
                for i in range(n)]

    def residual(i, ks):
        c = t_coords[i]
        for j in range(i + 1, n):
            c -= ks[j] * mu[j][i]
        return c

    # Babai seed
    ks = [0] * n
    babai = Fraction(0)
    for i in range(n - 1, -1, -1):
        c = residual(i, ks)
        k = _round_nearest(c)
        ks[i] = k
        babai += (c - k) ** 2 * norms[i]
    best = [babai]

    ks = [0] * n

    def search(i, acc):
        if acc >= best[0]:
            return
        if i < 0:
            best[0] = acc
            return
        c = residual(i, ks)
        center = _round_nearest(c)
        offset = 0
        while True:
            done = True
            for k in (center + offset, center - offset) if offset else (center,):
                d = acc + (c - k) ** 2 * norms[i]
                if d < best[0]:
                    done = False
                    ks[i] = k
                    search(i - 1, d)
            if done and offset > 0:
                break
            offset += 1

    search(n - 1, Fraction(0))
    return best[0]


def _round_nearest(x: Fraction) -> int:
    return (2 * x.numerator + x.denominator) // (2 * x.denominator)


def covering_radius_estimate(lattice: IdealLattice, samples: int, rng,
                             grid_denominator: int = 16) -> Fraction:
    """Sampled lower bound on the squared covering radius (estimator only).

    Exact CVP is run per target; targets live on a rational grid inside the
    basis parallelepiped (the box center first, then random grid points), so
    the estimate is monotone in the sample count under a fixed seed.
    """
    n = lattice.context.n
    if n > 4:
        raise DimensionTooLarge("exact CVP enumeration is limited to n <= 4")
    if samples < 1:
        raise ValueError("need at least one sample")
    if grid_denominator % 2:
        raise ValueError("grid denominator must be even")
    columns = lattice.basis_columns()
    best = Fraction(0)
    for k in range(samples):
        if k == 0:
            fracs = [Fraction(1, 2)] * n
        else:
            fracs = [Fraction(rng.randrange(grid_denominator), grid_denominator)
                     for _ in range(n)]
        target = [sum(f * Fraction(col[r]) for f, col in zip(fracs, columns))
                  for r in range(n)]
        dist = _closest_distance_squared(columns, target)
        if dist > best:
            best = dist
    return best


# --- compact knapsack view of the scheme ---


@dataclass(frozen=True)
class KnapsackInstance:
    """sum a_i conv x_i = target with |x_i| <= bound.

    For instances derived from the scheme each x_i is a scalar embedding, so
    ``slot_moduli`` records the per-slot search ranges [0, t_i).
    """

    context: ModulusPolynomial
    coefficients: tuple
    target: RingElement
    bound: int
    slot_moduli: tuple | None = None


def scheme_as_knapsack(pk: PublicKey):
    """Factory turning a target ciphertext into the knapsack instance it poses."""
    bound = max(pk.moduli)

    def make(target: RingElement) -> KnapsackInstance:
        return KnapsackInstance(pk.context, pk.crt_vectors, target, bound,
                                slot_moduli=pk.moduli)

    return make


def brute_force_knapsack(inst: KnapsackInstance) -> list:
    """Enumerate every plaintext tuple mapping to the target; exact, desk scale."""
    if inst.slot_moduli is None:
        raise ValueError("only scheme-derived (scalar-slot) instances are searchable")
    space = 1
    for t in inst.slot_moduli:
        space *= t
    if space > _BRUTE_FORCE_CAP:
        raise SearchSpaceTooLarge(f"search space {space} exceeds {_BRUTE_FORCE_CAP}")
    n = inst.context.n
    target = inst.target.coords
    solutions = []
    m = len(inst.coefficients)
    coeffs = [a.coords for a in inst.coefficients]
    tuple_now = [0] * m

    def rec(i, partial):
        if i == m:
            if tuple(partial) == target:
                solutions.append(tuple(tuple_now))
            return
        a = coeffs[i]
        for u in range(inst.slot_moduli[i]):
            tuple_now[i] = u
            rec(i + 1, tuple(p + u * c for p, c in zip(partial, a)))

    rec(0, (0,) * n)
    return solutions
