"""Deterministic encrypt/decrypt and unbounded homomorphic evaluation.

Encryption is the exact CRT combination c = sum u_i . A_i; decryption reduces
the ciphertext into the orthogonal parallelepiped of each secret ideal and
reads off the scalar line.  There is no noise, no depth limit, and no
ciphertext size management: coordinates simply grow under multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    ContextMismatch,
    MalformedCiphertext,
    MalformedCircuit,
    RangeViolation,
)
from .keygen import PublicKey, SecretKey
from .lattice import reduce_mod_ideal
from .ring import ModulusPolynomial, RingElement, convolve


@dataclass(frozen=True)
class Plaintext:
    """A tuple of residues, one per CRT slot, canonicalized into [0, t_i)."""

    residues: tuple
    moduli: tuple

    def __post_init__(self):
        moduli = tuple(int(t) for t in self.moduli)
        if len(self.residues) != len(moduli):
            raise ValueError("residue and modulus counts must match")
        if any(t < 2 for t in moduli):
            raise ValueError("every modulus must be at least 2")
        residues = tuple(int(u) % t for u, t in zip(self.residues, moduli))
        object.__setattr__(self, "residues", residues)
        object.__setattr__(self, "moduli", moduli)


@dataclass(frozen=True)
class Ciphertext:
    body: RingElement
    m: int

    @property
    def context(self) -> ModulusPolynomial:
        return self.body.context


@dataclass(frozen=True)
class Gate:
    op: str  # "ADD" | "MUL"
    left: int
    right: int
    out: int


@dataclass(frozen=True)
class Circuit:
    """Straight-line arithmetic circuit; wire k is defined before it is read.

    Wires 0..n_inputs-1 are the inputs; gate g must write wire n_inputs+g and
    read strictly smaller wire indices, which rules out cycles and dangling
    references.  The last wire is the single output.
    """

    n_inputs: int
    gates: tuple

    def __post_init__(self):
        if self.n_inputs < 1:
            raise MalformedCircuit("a circuit needs at least one input wire")
        object.__setattr__(self, "gates", tuple(self.gates))
        next_wire = self.n_inputs
        for gate in self.gates:
            if gate.op not in ("ADD", "MUL"):
                raise MalformedCircuit(f"unknown gate op {gate.op!r}")
            if gate.out != next_wire:
                raise MalformedCircuit(
                    f"gate output wire {gate.out} must be the next fresh wire {next_wire}")
            if not (0 <= gate.left < gate.out and 0 <= gate.right < gate.out):
                raise MalformedCircuit(
                    f"gate inputs {gate.left},{gate.right} must be earlier wires")
            next_wire += 1

    @property
    def output_wire(self) -> int:
        return self.n_inputs + len(self.gates) - 1 if self.gates else self.n_inputs - 1


def encrypt(pk: PublicKey, plaintext) -> Ciphertext:
    """c = sum u_i . A_i (embedded scalars act by scalar multiplication)."""
    if isinstance(plaintext, Plaintext):
        if plaintext.moduli != pk.moduli:
            raise RangeViolation("plaintext moduli do not match the public key")
        residues = plaintext.residues
    else:
        residues = tuple(int(u) for u in plaintext)
        if len(residues) != pk.m:
            raise RangeViolation("plaintext must carry one residue per CRT slot")
        for u, t in zip(residues, pk.moduli):
            if not 0 <= u < t:
                raise RangeViolation(f"residue {u} outside [0, {t})")
    ctx = pk.context
    body = RingElement(ctx, (0,) * ctx.n)
    for u, a in zip(residues, pk.crt_vectors):
        if u:
            body = body + a.scale(u)
    return Ciphertext(body, pk.m)


def decrypt(sk: SecretKey, ct: Ciphertext, strict: bool = True) -> Plaintext:
    """Reduce into each ideal's parallelepiped; strict mode rejects nonzero tails."""
    if ct.context != sk.context:
        raise ContextMismatch("ciphertext context does not match the secret key")
    residues = []
    for i, ideal in enumerate(sk.ideals):
        w = reduce_mod_ideal(ct.body, ideal)
        if strict and any(w.coords[1:]):
            raise MalformedCiphertext(
                f"residue modulo ideal {i} has a nonzero tail: {w.coords}")
        residues.append(w.coords[0] % sk.moduli[i])
    return Plaintext(tuple(residues), sk.moduli)


def hom_add(c1: Ciphertext, c2: Ciphertext) -> Ciphertext:
    _check_pair(c1, c2)
    return Ciphertext(c1.body + c2.body, c1.m)


def hom_mul(c1: Ciphertext, c2: Ciphertext) -> Ciphertext:
    _check_pair(c1, c2)
    return Ciphertext(convolve(c1.body, c2.body), c1.m)


def _check_pair(c1: Ciphertext, c2: Ciphertext) -> None:
    if c1.context != c2.context or c1.m != c2.m:
        raise ContextMismatch("ciphertexts belong to different keys")


def eval_circuit(circuit: Circuit, inputs) -> Ciphertext:
    """Gate-by-gate homomorphic evaluation; returns the output wire's ciphertext."""
    inputs = list(inputs)
    if len(inputs) != circuit.n_inputs:
        raise MalformedCircuit(
            f"circuit expects {circuit.n_inputs} inputs, got {len(inputs)}")
    ctx = inputs[0].context
    if any(c.context != ctx or c.m != inputs[0].m for c in inputs):
        raise ContextMismatch("circuit inputs belong to different keys")
    wires = list(inputs)
    for gate in circuit.gates:
        a, b = wires[gate.left], wires[gate.right]
        wires.append(hom_add(a, b) if gate.op == "ADD" else hom_mul(a, b))
    return wires[circuit.output_wire]


def compress(sk: SecretKey, ct: Ciphertext) -> Ciphertext:
    """Secret-key maintenance: reduce the body into the product parallelepiped.

    Never required for correctness; it only shrinks coordinates.
    """
    if ct.context != sk.context:
        raise ContextMismatch("ciphertext context does not match the secret key")
    return Ciphertext(reduce_mod_ideal(ct.body, sk.product_lattice), ct.m)


def parse_circuit(text: str) -> Circuit:
    """Line format: ``INPUTS k`` then one gate per line, ``ADD i j -> k``."""
    n_inputs = None
    gates = []
    next_wire = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "INPUTS":
            if n_inputs is not None:
                raise MalformedCircuit(f"line {lineno}: duplicate INPUTS declaration")
            if len(parts) != 2 or not parts[1].isdigit():
                raise MalformedCircuit(f"line {lineno}: expected 'INPUTS <count>'")
            n_inputs = int(parts[1])
            next_wire = n_inputs
            continue
        if n_inputs is None:
            raise MalformedCircuit(f"line {lineno}: inputs must be declared first")
        if len(parts) != 5 or parts[3] != "->":
            raise MalformedCircuit(f"line {lineno}: expected '<OP> i j -> k'")
        op = parts[0]
        try:
            left, right, out = int(parts[1]), int(parts[2]), int(parts[4])
        except ValueError:
            raise MalformedCircuit(f"line {lineno}: wire indices must be integers")
        gates.append(Gate(op, left, right, out))
        next_wire += 1
    if n_inputs is None:
        raise MalformedCircuit("missing INPUTS declaration")
    return Circuit(n_inputs, tuple(gates))


def format_circuit(circuit: Circuit) -> str:
    lines = [f"INPUTS {circuit.n_inputs}"]
    for gate in circuit.gates:
        lines.append(f"{gate.op} {gate.left} {gate.right} -> {gate.out}")
    return "\n".join(lines) + "\n"
