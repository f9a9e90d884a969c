import random

import pytest

from crtfhe.ring import ModulusPolynomial, RingElement


@pytest.fixture
def omega():
    """The context of x^2 + x + 1, the smallest cyclotomic ring."""
    return ModulusPolynomial.cyclotomic(3)


def random_context(rng, max_n=8, bound=4):
    n = rng.randrange(2, max_n + 1)
    phi = [rng.randrange(-bound, bound + 1) for _ in range(n)]
    if phi[0] == 0:
        phi[0] = 1
    return ModulusPolynomial(n, phi)


def random_element(ctx, rng, bound=20):
    return RingElement(ctx, [rng.randrange(-bound, bound + 1) for _ in range(ctx.n)])


def seeded(seed):
    return random.Random(seed)
