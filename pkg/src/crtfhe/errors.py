"""Exception hierarchy shared across the package."""


class CrtFheError(Exception):
    """Base class for all errors raised by this package."""


class ContextMismatch(CrtFheError):
    """Operands belong to different modulus-polynomial contexts."""


class SingularBasis(CrtFheError):
    """A lattice basis with determinant zero was supplied."""


class DependentSet(CrtFheError):
    """Vectors handed to Gram-Schmidt are linearly dependent."""


class ZeroDivisorGenerator(CrtFheError):
    """A principal ideal generator with zero ring determinant."""


class NotPrincipal(CrtFheError):
    """An operation required a principal ideal but no generator is recorded."""


class NotCoprime(CrtFheError):
    """Ideals are not relatively prime, so the requested solve is infeasible."""


class IrreducibilityDoubt(CrtFheError):
    """The probabilistic irreducibility check could not certify the modulus polynomial."""


class ResampleExhausted(CrtFheError):
    """Key generation gave up after too many rejected candidates."""


class RangeViolation(CrtFheError):
    """A plaintext residue lies outside [0, t_i)."""


class MalformedCiphertext(CrtFheError):
    """Strict decryption found a residue with a nonzero tail."""


class MalformedCircuit(CrtFheError):
    """Circuit wiring is cyclic, dangling, or otherwise invalid."""


class DimensionTooLarge(CrtFheError):
    """Exact enumeration requested above the supported dimension."""


class SearchSpaceTooLarge(CrtFheError):
    """Brute-force search space exceeds the desk-scale cap."""


class FormatError(CrtFheError):
    """A file failed to parse or violates its schema."""
