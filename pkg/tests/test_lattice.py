from fractions import Fraction

import pytest

from crtfhe.errors import DependentSet, SingularBasis, ZeroDivisorGenerator
from crtfhe.lattice import (
    IdealLattice,
    contains,
    coprimality_witness,
    gram_schmidt,
    hnf,
    ideal_product,
    is_coprime,
    is_ideal_lattice,
    one_dim_modulus,
    principal_ideal,
    reduce_mod_ideal,
    zn_lattice,
)
from crtfhe.ring import RingElement, ideal_matrix, ring_determinant, unit

from conftest import random_context, random_element, seeded


def ideal_of(ctx, coords):
    return principal_ideal(RingElement(ctx, coords))


def test_hnf_known_example(omega):
    lat = ideal_of(omega, (2, 1))
    assert lat.hnf_basis == ((3, 2), (0, 1))
    assert one_dim_modulus(lat) == 3
    assert lat.determinant() == 3


def test_hnf_validation(omega):
    with pytest.raises(ValueError):
        IdealLattice(omega, ((3, 3), (0, 1)))  # off-diagonal not reduced
    with pytest.raises(ValueError):
        IdealLattice(omega, ((3, 0), (1, 1)))  # not upper triangular
    with pytest.raises(ValueError):
        IdealLattice(omega, ((0, 0), (0, 1)))  # zero diagonal
    with pytest.raises(SingularBasis):
        hnf([[1, 2], [2, 4]], omega)
    with pytest.raises(ZeroDivisorGenerator):
        ideal_of(omega, (0, 0))


def test_hnf_unimodular_invariance():
    # the canonical basis must not depend on the presentation of the lattice
    rng = seeded(7)
    for _ in range(100):
        ctx = random_context(rng, max_n=5)
        alpha = random_element(ctx, rng, bound=9)
        if ring_determinant(alpha) == 0:
            continue
        lat = principal_ideal(alpha)
        cols = [list(c) for c in lat.basis_columns()]
        n = ctx.n
        for _ in range(2 * n):
            i, j = rng.randrange(n), rng.randrange(n)
            if i == j:
                continue
            k = rng.randrange(-3, 4)
            for r in range(n):
                cols[i][r] += k * cols[j][r]
        shuffled = list(cols)
        rng.shuffle(shuffled)
        basis = [[shuffled[j][i] for j in range(n)] for i in range(n)]
        assert hnf(basis, ctx).hnf_basis == lat.hnf_basis


def test_hnf_preserves_determinant():
    rng = seeded(13)
    for _ in range(200):
        ctx = random_context(rng, max_n=5)
        alpha = random_element(ctx, rng, bound=9)
        d = ring_determinant(alpha)
        if d == 0:
            continue
        assert principal_ideal(alpha).determinant() == abs(d)


def test_principal_ideals_are_ideal_lattices():
    rng = seeded(17)
    for _ in range(100):
        ctx = random_context(rng, max_n=5)
        alpha = random_element(ctx, rng, bound=9)
        if ring_determinant(alpha) == 0:
            continue
        assert is_ideal_lattice(principal_ideal(alpha))
    # a generic full-rank lattice is usually not closed under the multiplier
    from crtfhe.ring import ModulusPolynomial

    bad = IdealLattice(ModulusPolynomial(3, (1, 1, 0)),
                       ((5, 1, 0), (0, 5, 1), (0, 0, 5)))
    assert not is_ideal_lattice(bad)


def test_reduce_mod_ideal_examples(omega):
    lat = ideal_of(omega, (2, 1))
    assert reduce_mod_ideal(RingElement(omega, (7, 1)), lat).coords == (2, 0)
    assert reduce_mod_ideal(RingElement(omega, (5, 1)), lat).coords == (0, 0)


def test_reduce_mod_ideal_properties():
    rng = seeded(29)
    for _ in range(50):
        ctx = random_context(rng, max_n=5)
        alpha = random_element(ctx, rng, bound=9)
        if ring_determinant(alpha) == 0:
            continue
        lat = principal_ideal(alpha)
        diag = lat.gs_diagonal
        for _ in range(20):
            v = random_element(ctx, rng, bound=10 ** 6)
            w = reduce_mod_ideal(v, lat)
            assert all(0 <= w.coords[i] < diag[i] for i in range(ctx.n))
            assert contains(lat, v - w)
            # idempotence and compatibility with lattice shifts
            assert reduce_mod_ideal(w, lat) == w
            shift = lat.basis_elements()[rng.randrange(ctx.n)]
            assert reduce_mod_ideal(v + shift, lat) == w


def test_residue_count_matches_determinant():
    # n = 2: the number of incongruent vectors equals det(I)
    rng = seeded(31)
    checked = 0
    while checked < 8:
        ctx = random_context(rng, max_n=2)
        alpha = random_element(ctx, rng, bound=9)
        d = abs(ring_determinant(alpha))
        if not 1 <= d <= 200:
            continue
        lat = principal_ideal(alpha)
        reps = set()
        for x in range(-15, 16):
            for y in range(-15, 16):
                reps.add(reduce_mod_ideal(RingElement(ctx, (x, y)), lat).coords)
        assert len(reps) == d
        checked += 1


def test_contains_examples(omega):
    lat = ideal_of(omega, (2, 1))
    assert contains(lat, RingElement(omega, (3, 0)))
    assert not contains(lat, RingElement(omega, (1, 0)))
    assert contains(lat, RingElement(omega, (0, 0)))


def test_is_coprime_examples(omega):
    i2 = ideal_of(omega, (2, 1))
    assert is_coprime(i2, ideal_of(omega, (7, 1)))
    assert not is_coprime(i2, ideal_of(omega, (5, 1)))
    assert is_coprime(i2, zn_lattice(omega))


def test_coprimality_witness(omega):
    rng = seeded(43)
    for _ in range(50):
        ctx = random_context(rng, max_n=4)
        a = random_element(ctx, rng, bound=6)
        b = random_element(ctx, rng, bound=6)
        if ring_determinant(a) == 0 or ring_determinant(b) == 0:
            continue
        ia, ib = principal_ideal(a), principal_ideal(b)
        wit = coprimality_witness(ia, ib)
        if is_coprime(ia, ib):
            x, y = wit
            assert contains(ia, x) and contains(ib, y)
            assert x + y == unit(ctx)
        else:
            assert wit is None


def test_ideal_product_example(omega):
    prod = ideal_product([ideal_of(omega, (2, 1)), ideal_of(omega, (7, 1))])
    assert prod.determinant() == 3 * 43
    assert prod.gs_diagonal == (129, 1)


def test_ideal_product_generator_and_membership():
    rng = seeded(47)
    for _ in range(30):
        ctx = random_context(rng, max_n=4)
        a = random_element(ctx, rng, bound=4)
        b = random_element(ctx, rng, bound=4)
        if ring_determinant(a) == 0 or ring_determinant(b) == 0:
            continue
        ia, ib = principal_ideal(a), principal_ideal(b)
        prod = ideal_product([ia, ib])
        assert is_ideal_lattice(prod)
        # product of principal ideals is principal with the convolved generator
        from crtfhe.ring import convolve

        assert prod.hnf_basis == principal_ideal(convolve(a, b)).hnf_basis
        assert contains(ia, prod.basis_elements()[0])
        assert contains(ib, prod.basis_elements()[0])


def test_gram_schmidt_examples():
    stars = gram_schmidt([(1, 1), (0, 2)])
    assert stars[0] == (Fraction(1), Fraction(1))
    assert stars[1] == (Fraction(-1), Fraction(1))
    with pytest.raises(DependentSet):
        gram_schmidt([(1, 2), (2, 4)])


def test_gram_schmidt_orthogonality():
    rng = seeded(53)
    for _ in range(50):
        n = rng.randrange(2, 6)
        vecs = [[rng.randrange(-9, 10) for _ in range(n)] for _ in range(n)]
        try:
            stars = gram_schmidt(vecs)
        except DependentSet:
            continue
        for i in range(n):
            for j in range(i):
                assert sum(a * b for a, b in zip(stars[i], stars[j])) == 0
        # spans agree step by step: v_k - star_k lies in span of earlier stars
        assert stars[0] == tuple(Fraction(x) for x in vecs[0])


def test_hnf_of_ideal_matrix_columns(omega):
    # basis columns of a principal ideal regenerate the same HNF
    lat = ideal_of(omega, (2, 1))
    mat = ideal_matrix(RingElement(omega, (2, 1)))
    assert hnf(mat, omega).hnf_basis == lat.hnf_basis
