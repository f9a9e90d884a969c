"""Noise-free CRT-based homomorphic encryption over ideal lattices.

Everything is exact: arbitrary-precision integers for ring and lattice
arithmetic, exact rationals wherever division appears.
"""

from .errors import (
    ContextMismatch,
    CrtFheError,
    DependentSet,
    DimensionTooLarge,
    FormatError,
    IrreducibilityDoubt,
    MalformedCiphertext,
    MalformedCircuit,
    NotCoprime,
    NotPrincipal,
    RangeViolation,
    ResampleExhausted,
    SearchSpaceTooLarge,
    SingularBasis,
    ZeroDivisorGenerator,
)
from .keygen import (
    PublicKey,
    SecretKey,
    crt_solve,
    gen_public,
    gen_secret_cyclotomic,
    gen_secret_general,
    invert_mod_ideal,
    partial_products,
)
from .lattice import (
    IdealLattice,
    contains,
    gram_schmidt,
    hnf,
    ideal_product,
    is_coprime,
    one_dim_modulus,
    principal_ideal,
    reduce_mod_ideal,
)
from .ring import (
    ModulusPolynomial,
    RingElement,
    convolve,
    embed_scalar,
    ideal_matrix,
    ring_determinant,
    rotation_matrix,
    unit,
    zero,
)
from .scheme import (
    Ciphertext,
    Circuit,
    Gate,
    Plaintext,
    decrypt,
    encrypt,
    eval_circuit,
    hom_add,
    hom_mul,
    parse_circuit,
)
from .security import (
    KnapsackInstance,
    NormConstants,
    brute_force_knapsack,
    check_norm_bound,
    covering_radius_estimate,
    norm_constants,
    scheme_as_knapsack,
    sigma_squared,
)

__version__ = "0.1.0"
