"""Versioned, line-structured JSON file formats.

Every integer is serialized as a decimal string, never as a native JSON
number, so no consumer can silently lose precision.  Secret and public files
cross-reference through a fingerprint: the SHA-256 of the canonical public
serialization.
"""

from __future__ import annotations

import hashlib
import json

from .errors import FormatError
from .keygen import PublicKey, SecretKey, make_secret_key
from .lattice import IdealLattice
from .ring import ModulusPolynomial, RingElement
from .scheme import Ciphertext

FORMAT_VERSION = "1"


def canonical_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def fingerprint_of(doc: dict) -> str:
    body = {k: v for k, v in doc.items() if k != "fingerprint"}
    return hashlib.sha256(canonical_json(body).encode("utf-8")).hexdigest()


def _s(x: int) -> str:
    return str(int(x))


def _i(x) -> int:
    if not isinstance(x, str):
        raise FormatError("integers must be serialized as decimal strings")
    try:
        return int(x, 10)
    except ValueError:
        raise FormatError(f"not a decimal integer: {x!r}")


def _vec(coords) -> list:
    return [_s(c) for c in coords]


def _unvec(items) -> tuple:
    return tuple(_i(c) for c in items)


def _context_doc(ctx: ModulusPolynomial) -> dict:
    doc = {"n": _s(ctx.n), "phi": _vec(ctx.phi_coeffs)}
    if ctx.cyclotomic_prime is not None:
        doc["p"] = _s(ctx.cyclotomic_prime)
    return doc


def _context_from(doc: dict) -> ModulusPolynomial:
    n = _i(doc["n"])
    phi = _unvec(doc["phi"])
    p = _i(doc["p"]) if "p" in doc else None
    try:
        return ModulusPolynomial(n, phi, p)
    except ValueError as exc:
        raise FormatError(str(exc))


def public_key_doc(pk: PublicKey) -> dict:
    doc = {
        "version": FORMAT_VERSION,
        "kind": "public-key",
        "scheme": pk.scheme,
        "context": _context_doc(pk.context),
        "m": _s(pk.m),
        "moduli": [_s(t) for t in pk.moduli],
        "crt_vectors": [_vec(a.coords) for a in pk.crt_vectors],
    }
    if pk.primes is not None:
        doc["q"] = [_s(q) for q in pk.primes]
    doc["fingerprint"] = fingerprint_of(doc)
    return doc


def secret_key_doc(sk: SecretKey, pub_fingerprint: str) -> dict:
    ideals = []
    for ideal, gen in zip(sk.ideals, sk.generators):
        entry = {"hnf": [_vec(row) for row in ideal.hnf_basis]}
        if gen is not None:
            entry["generator"] = _vec(gen.coords)
        ideals.append(entry)
    doc = {
        "version": FORMAT_VERSION,
        "kind": "secret-key",
        "scheme": sk.scheme,
        "context": _context_doc(sk.context),
        "m": _s(sk.m),
        "moduli": [_s(t) for t in sk.moduli],
        "ideals": ideals,
        "fingerprint": pub_fingerprint,
    }
    if sk.primes is not None:
        doc["q"] = [_s(q) for q in sk.primes]
    return doc


def ciphertext_doc(ct: Ciphertext, key_fingerprint: str) -> dict:
    return {
        "version": FORMAT_VERSION,
        "kind": "ciphertext",
        "fingerprint": key_fingerprint,
        "n": _s(ct.context.n),
        "coords": _vec(ct.body.coords),
    }


def _check_header(doc: dict, kind: str) -> None:
    if not isinstance(doc, dict):
        raise FormatError("document must be a JSON object")
    if doc.get("version") != FORMAT_VERSION:
        raise FormatError(f"unknown format version {doc.get('version')!r}")
    if doc.get("kind") != kind:
        raise FormatError(f"expected a {kind} document, got {doc.get('kind')!r}")


def load_public_key(doc: dict) -> PublicKey:
    _check_header(doc, "public-key")
    ctx = _context_from(doc["context"])
    m = _i(doc["m"])
    moduli = tuple(_i(t) for t in doc["moduli"])
    vectors = tuple(RingElement(ctx, _unvec(v)) for v in doc["crt_vectors"])
    if len(moduli) != m or len(vectors) != m:
        raise FormatError("moduli/vector counts do not match m")
    if any(t < 2 for t in moduli):
        raise FormatError("every modulus must be at least 2")
    if fingerprint_of(doc) != doc.get("fingerprint"):
        raise FormatError("public key fingerprint does not match its contents")
    primes = tuple(_i(q) for q in doc["q"]) if "q" in doc else None
    p = ctx.cyclotomic_prime
    return PublicKey(ctx, vectors, moduli, doc.get("scheme", "general"), p, primes)


def load_secret_key(doc: dict) -> SecretKey:
    _check_header(doc, "secret-key")
    ctx = _context_from(doc["context"])
    m = _i(doc["m"])
    moduli = tuple(_i(t) for t in doc["moduli"])
    ideals = []
    generators = []
    for entry in doc["ideals"]:
        rows = tuple(_unvec(row) for row in entry["hnf"])
        gen = RingElement(ctx, _unvec(entry["generator"])) if "generator" in entry else None
        try:
            ideals.append(IdealLattice(ctx, rows, generator=gen))
        except ValueError as exc:
            raise FormatError(f"invalid HNF basis: {exc}")
        generators.append(gen)
    if len(ideals) != m or moduli != tuple(i.hnf_basis[0][0] for i in ideals):
        raise FormatError("stored moduli disagree with the HNF bases")
    primes = tuple(_i(q) for q in doc["q"]) if "q" in doc else None
    sk = make_secret_key(ctx, ideals, generators, doc.get("scheme", "general"),
                         ctx.cyclotomic_prime, primes)
    return sk


def load_ciphertext_body(doc: dict, ctx: ModulusPolynomial) -> RingElement:
    """The ciphertext vector; the caller wraps it with the key's slot count."""
    _check_header(doc, "ciphertext")
    if _i(doc["n"]) != ctx.n:
        raise FormatError("ciphertext dimension does not match the key context")
    return RingElement(ctx, _unvec(doc["coords"]))


def read_doc(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}")


def write_doc(path, doc: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(doc))
