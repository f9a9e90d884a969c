"""Secret-key generation (general and cyclotomic) and CRT public keys.

The secret key is m pairwise relatively prime ideal lattices; the public key
is the m CRT vectors A_i with A_i = e mod I_i and A_i = 0 mod I_j for j != i,
canonicalized into the orthogonal parallelepiped of the product lattice.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import (
    IrreducibilityDoubt,
    NotCoprime,
    NotPrincipal,
    ResampleExhausted,
)
from .lattice import (
    IdealLattice,
    contains,
    ideal_product,
    is_coprime,
    one_dim_modulus,
    principal_ideal,
    reduce_mod_ideal,
    solve_in_column_lattice,
)
from .ring import (
    ModulusPolynomial,
    RingElement,
    convolve,
    embed_scalar,
    ideal_matrix,
    is_prime,
    ring_determinant,
    unit,
)

_MAX_RESAMPLES = 100


@dataclass(frozen=True)
class SecretKey:
    context: ModulusPolynomial
    ideals: tuple
    moduli: tuple
    generators: tuple
    product_lattice: IdealLattice
    scheme: str = "general"
    cyclotomic_p: int | None = None
    primes: tuple | None = None

    @property
    def m(self) -> int:
        return len(self.ideals)


@dataclass(frozen=True)
class PublicKey:
    context: ModulusPolynomial
    crt_vectors: tuple
    moduli: tuple
    scheme: str = "general"
    cyclotomic_p: int | None = None
    primes: tuple | None = None

    @property
    def m(self) -> int:
        return len(self.crt_vectors)


def make_secret_key(context, ideals, generators, scheme="general",
                    cyclotomic_p=None, primes=None) -> SecretKey:
    ideals = tuple(ideals)
    if len(ideals) < 2:
        raise ValueError("need at least two ideals")
    moduli = tuple(one_dim_modulus(ideal) for ideal in ideals)
    if any(t < 2 for t in moduli):
        raise ValueError("every one-dimensional modulus must be at least 2")
    for i in range(len(ideals)):
        for j in range(i + 1, len(ideals)):
            if not is_coprime(ideals[i], ideals[j]):
                raise NotCoprime(f"ideals {i} and {j} are not relatively prime")
    product = ideal_product(ideals)
    return SecretKey(context, ideals, moduli, tuple(generators), product,
                     scheme, cyclotomic_p, primes)


# --- probabilistic irreducibility gate ---

_TEST_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113)


def _poly_mod_p(f, p):
    out = [c % p for c in f]
    while out and out[-1] == 0:
        out.pop()
    return out


def _polmul_mod(a, b, f, p):
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    return _polrem(prod, f, p)


def _polrem(a, f, p):
    a = [c % p for c in a]
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(a) - 1 >= df:
        while a and a[-1] % p == 0:
            a.pop()
        if len(a) - 1 < df:
            break
        c = a[-1] * inv_lead % p
        d = len(a) - 1
        for i, fc in enumerate(f):
            a[d - df + i] = (a[d - df + i] - c * fc) % p
        a.pop()
    while a and a[-1] % p == 0:
        a.pop()
    return a


def _polgcd(a, b, p):
    a, b = [c % p for c in a], [c % p for c in b]
    while b and any(b):
        a, b = b, _polrem(a, b, p)
        while b and b[-1] == 0:
            b.pop()
    return a


def _polpow_x(exp, f, p):
    """x^exp mod (f, p) by repeated squaring."""
    result = [1]
    base = _polrem([0, 1], f, p)
    while exp:
        if exp & 1:
            result = _polmul_mod(result, base, f, p)
        base = _polmul_mod(base, base, f, p)
        exp >>= 1
    return result


def _irreducible_mod_p(f, p):
    """Rabin's test: f irreducible over GF(p)."""
    f = _poly_mod_p(f, p)
    n = len(f) - 1
    if n < 1:
        return False
    h = _polpow_x(p ** n, f, p)
    x_poly = _polrem([0, 1], f, p)
    diff = [(a - b) % p for a, b in
            zip(h + [0] * len(x_poly), x_poly + [0] * len(h))]
    while diff and diff[-1] == 0:
        diff.pop()
    if diff:
        return False
    divisors = set()
    m, d = n, 2
    while d * d <= m:
        if m % d == 0:
            divisors.add(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        divisors.add(m)
    for r in divisors:
        h = _polpow_x(p ** (n // r), f, p)
        diff = [(a - b) % p for a, b in
                zip(h + [0] * 2, x_poly + [0] * len(h))]
        while diff and diff[-1] == 0:
            diff.pop()
        g = _polgcd(f, diff, p) if diff else f
        if len(g) - 1 != 0:
            return False
    return True


def check_probably_irreducible(phi: ModulusPolynomial, rng, trials: int = 12) -> None:
    """Pass if phi is irreducible modulo at least one sampled prime.

    Sound (irreducible mod p implies irreducible over Z) but incomplete;
    raises IrreducibilityDoubt when no sampled prime certifies it.
    """
    f = phi.poly()
    primes = list(_TEST_PRIMES)
    rng.shuffle(primes)
    for p in primes[:trials]:
        if f[0] % p == 0:
            continue
        if _irreducible_mod_p(f, p):
            return
    raise IrreducibilityDoubt(
        "no sampled prime certified irreducibility of the modulus polynomial")


# --- secret key generation ---


def _random_element(ctx, rng, bound):
    while True:
        coords = [rng.randrange(-bound, bound + 1) for _ in range(ctx.n)]
        if any(coords):
            return RingElement(ctx, coords)


def _try_principal(alpha):
    if ring_determinant(alpha) == 0:
        return None
    ideal = principal_ideal(alpha)
    if one_dim_modulus(ideal) < 2:
        return None
    return ideal


def gen_secret_general(phi: ModulusPolynomial, m: int, rng,
                       coeff_bound: int = 5) -> SecretKey:
    """Chained construction: I_1 = <a>, I_2 = <e - a>, I_k = <e - a_1 x ... x a_{k-1}>."""
    if m < 2:
        raise ValueError("m must be at least 2")
    if coeff_bound < 1:
        raise ValueError("coeff_bound must be at least 1")
    check_probably_irreducible(phi, rng)
    e = unit(phi)

    ideals = generators = None
    for _ in range(_MAX_RESAMPLES):
        alpha = _random_element(phi, rng, coeff_bound)
        first = _try_principal(alpha)
        second = _try_principal(e - alpha)
        if first is None or second is None:
            continue
        if not is_coprime(first, second):
            continue
        ideals = [first, second]
        generators = [alpha, e - alpha]
        break
    if ideals is None:
        raise ResampleExhausted("could not draw the initial coprime ideal pair")

    while len(ideals) < m:
        for attempt in range(_MAX_RESAMPLES):
            draws = []
            for ideal in ideals:
                combo = None
                while combo is None or combo.is_zero():
                    coeffs = [rng.randrange(-coeff_bound, coeff_bound + 1)
                              for _ in range(phi.n)]
                    combo = RingElement(phi, (0,) * phi.n)
                    for c, col in zip(coeffs, ideal.basis_elements()):
                        combo = combo + col.scale(c)
                draws.append(combo)
            prod = draws[0]
            for d in draws[1:]:
                prod = convolve(prod, d)
            candidate = _try_principal(e - prod)
            if candidate is None:
                continue
            if all(is_coprime(candidate, ideal) for ideal in ideals):
                ideals.append(candidate)
                generators.append(e - prod)
                break
        else:
            raise ResampleExhausted(
                f"no admissible ideal found for slot {len(ideals) + 1}")

    return make_secret_key(phi, ideals, generators, scheme="general")


def cyclotomic_generator(p: int, q: int) -> RingElement:
    """alpha_q = (q, 0, ..., 0, 1), the vector of x^{n-1} + q."""
    ctx = ModulusPolynomial.cyclotomic(p)
    return RingElement(ctx, (q,) + (0,) * (ctx.n - 2) + (1,))


def cyclotomic_modulus(p: int, q: int) -> int:
    """t_q = q^n - q^{n-1} + ... - q + 1 for n = p - 1."""
    n = p - 1
    return sum((-1) ** (n - k) * q ** k for k in range(n + 1))


def _primes_up_to(limit: int):
    return [q for q in range(2, limit + 1) if is_prime(q)]


def _build_cyclotomic(p, qs):
    ideals = []
    generators = []
    moduli = []
    for q in qs:
        alpha = cyclotomic_generator(p, q)
        ideal = principal_ideal(alpha)
        t = one_dim_modulus(ideal)
        expected = cyclotomic_modulus(p, q)
        if t != expected:
            raise AssertionError(
                f"HNF modulus {t} disagrees with the closed form {expected} at q={q}")
        ideals.append(ideal)
        generators.append(alpha)
        moduli.append(t)
    for i in range(len(qs)):
        for j in range(i + 1, len(qs)):
            if gcd(moduli[i], moduli[j]) != 1:
                raise NotCoprime(
                    f"moduli t_{qs[i]}={moduli[i]} and t_{qs[j]}={moduli[j]} share a factor")
            if not is_coprime(ideals[i], ideals[j]):
                raise NotCoprime(
                    f"ideals for q={qs[i]} and q={qs[j]} fail the HNF coprimality check")
    return ideals, generators


def gen_secret_cyclotomic(p: int, m: int, rng, q_max: int = 100,
                          primes=None) -> SecretKey:
    """Cyclotomic instantiation: ideals <alpha_q> for m distinct primes q != p.

    Admissibility is pairwise gcd(t_q, t_q') = 1 plus the HNF coprimality
    check; random draws are rejected until an admissible set is found, while
    an explicit ``primes`` list that fails raises NotCoprime.
    """
    if not is_prime(p) or p == 2:
        raise ValueError("p must be an odd prime")
    if m < 2:
        raise ValueError("m must be at least 2")
    ctx = ModulusPolynomial.cyclotomic(p)

    if primes is not None:
        qs = tuple(int(q) for q in primes)
        if len(qs) != m or len(set(qs)) != m:
            raise ValueError("explicit prime list must contain m distinct entries")
        if any(not is_prime(q) or q == p for q in qs):
            raise ValueError("explicit primes must be primes different from p")
        ideals, generators = _build_cyclotomic(p, qs)
        return make_secret_key(ctx, ideals, generators, scheme="cyclotomic",
                               cyclotomic_p=p, primes=qs)

    pool = [q for q in _primes_up_to(q_max) if q != p]
    if len(pool) < m:
        raise ResampleExhausted(f"fewer than m primes available below {q_max}")
    for _ in range(_MAX_RESAMPLES):
        chosen = []
        remaining = list(pool)
        while remaining and len(chosen) < m:
            chosen.append(remaining.pop(rng.randrange(len(remaining))))
        qs = tuple(sorted(chosen))
        try:
            ideals, generators = _build_cyclotomic(p, qs)
        except NotCoprime:
            continue
        return make_secret_key(ctx, ideals, generators, scheme="cyclotomic",
                               cyclotomic_p=p, primes=qs)
    raise ResampleExhausted(f"no admissible prime set found below {q_max}")


# --- public key construction ---


def partial_products(sk: SecretKey) -> list:
    """d_i = convolution of every generator except the i-th."""
    if any(g is None for g in sk.generators):
        raise NotPrincipal("all ideals must be principal")
    out = []
    for i in range(sk.m):
        d = unit(sk.context)
        for j, g in enumerate(sk.generators):
            if j != i:
                d = convolve(d, g)
        out.append(d)
    return out


def invert_mod_ideal(d: RingElement, lattice: IdealLattice) -> RingElement:
    """D with d (x) D = e mod the ideal, canonicalized into its parallelepiped.

    Solved as the integer linear system H*(d) x + B y = e; infeasibility
    means <d> and the ideal are not relatively prime.
    """
    ctx = d.context
    n = ctx.n
    mat = ideal_matrix(d)
    d_cols = [tuple(mat[i][j] for i in range(n)) for j in range(n)]
    cols = d_cols + lattice.basis_columns()
    sel = solve_in_column_lattice(cols, unit(ctx).coords, n)
    if sel is None:
        raise NotCoprime("<d> and the ideal are not relatively prime")
    inv = RingElement(ctx, tuple(sel[:n]))
    return reduce_mod_ideal(inv, lattice)


def gen_public(sk: SecretKey) -> PublicKey:
    """CRT vectors A_i = d_i (x) D_i, reduced into the product parallelepiped."""
    ds = partial_products(sk)
    vectors = []
    e = unit(sk.context)
    zero_elt = RingElement(sk.context, (0,) * sk.context.n)
    for i, (d, ideal) in enumerate(zip(ds, sk.ideals)):
        inv = invert_mod_ideal(d, ideal)
        a = reduce_mod_ideal(convolve(d, inv), sk.product_lattice)
        if reduce_mod_ideal(a, ideal) != e:
            raise AssertionError(f"A_{i} is not congruent to e modulo its own ideal")
        for j, other in enumerate(sk.ideals):
            if j != i and reduce_mod_ideal(a, other) != zero_elt:
                raise AssertionError(f"A_{i} is not congruent to 0 modulo ideal {j}")
        vectors.append(a)
    return PublicKey(sk.context, tuple(vectors), sk.moduli,
                     sk.scheme, sk.cyclotomic_p, sk.primes)


def crt_vectors_general(ideals) -> list:
    """CRT basis vectors for arbitrary pairwise coprime ideals.

    A_i is taken from the product of the other ideals and made congruent to e
    modulo I_i via an exact integer solve, then reduced into the full product
    parallelepiped.
    """
    ideals = list(ideals)
    ctx = ideals[0].context
    n = ctx.n
    for i in range(len(ideals)):
        for j in range(i + 1, len(ideals)):
            if not is_coprime(ideals[i], ideals[j]):
                raise NotCoprime(f"ideals {i} and {j} are not relatively prime")
    product = ideal_product(ideals)
    e = unit(ctx)
    out = []
    for i, ideal in enumerate(ideals):
        others = [idl for j, idl in enumerate(ideals) if j != i]
        rest = others[0] if len(others) == 1 else ideal_product(others)
        cols = rest.basis_columns() + ideal.basis_columns()
        sel = solve_in_column_lattice(cols, e.coords, n)
        if sel is None:
            raise NotCoprime(f"ideal {i} is not coprime to the product of the others")
        a = [0] * n
        for k, col in enumerate(rest.basis_columns()):
            for r in range(n):
                a[r] += sel[k] * col[r]
        out.append(reduce_mod_ideal(RingElement(ctx, tuple(a)), product))
    return out


def crt_solve(ideals, targets) -> RingElement:
    """The unique x in the product parallelepiped with x = target_i mod I_i."""
    ideals = list(ideals)
    targets = list(targets)
    if len(ideals) != len(targets):
        raise ValueError("ideal and target counts must match")
    ctx = ideals[0].context
    vectors = crt_vectors_general(ideals)
    x = RingElement(ctx, (0,) * ctx.n)
    for t, a in zip(targets, vectors):
        x = x + convolve(t, a)
    product = ideal_product(ideals)
    x = reduce_mod_ideal(x, product)
    for t, ideal in zip(targets, ideals):
        if reduce_mod_ideal(x, ideal) != reduce_mod_ideal(t, ideal):
            raise AssertionError("CRT solution violates a congruence")
    return x
