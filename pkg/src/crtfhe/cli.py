"""Batch command-line front end.

Exit codes: 0 success, 1 usage error, 2 input validation failure,
3 mathematical failure (failed coprimality, failed verification,
malformed ciphertext in strict mode, ...).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import serialization as ser
from .errors import (
    ContextMismatch,
    CrtFheError,
    FormatError,
    IrreducibilityDoubt,
    MalformedCiphertext,
    MalformedCircuit,
    NotCoprime,
    RangeViolation,
    ResampleExhausted,
)
from .keygen import cyclotomic_modulus, gen_public, gen_secret_cyclotomic, gen_secret_general
from .lattice import one_dim_modulus, reduce_mod_ideal
from .ring import ModulusPolynomial, RingElement, unit
from .scheme import Ciphertext, decrypt, encrypt, eval_circuit, hom_add, hom_mul, parse_circuit
from .security import (
    brute_force_knapsack,
    check_norm_bound,
    covering_radius_estimate,
    norm_constants,
    scheme_as_knapsack,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_MATH = 3

_VALIDATION_ERRORS = (FormatError, RangeViolation, ContextMismatch, MalformedCircuit)
_MATH_ERRORS = (NotCoprime, ResampleExhausted, MalformedCiphertext, IrreducibilityDoubt)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list:
    try:
        return [int(part.strip()) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise FormatError(f"expected a comma-separated integer list, got {text!r}")


def _seed_of(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("CRTFHE_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise FormatError(f"CRTFHE_SEED must be an integer, got {env!r}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="crtfhe", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    kg = sub.add_parser("keygen", help="generate a secret/public key pair")
    kg.add_argument("--scheme", choices=("cyclotomic", "general"), default="cyclotomic")
    kg.add_argument("--p", type=int, help="odd prime for the cyclotomic context")
    kg.add_argument("--m", type=int, default=2, help="number of CRT slots")
    kg.add_argument("--q-max", type=int, default=100, dest="q_max")
    kg.add_argument("--primes", help="explicit comma-separated primes (cyclotomic)")
    kg.add_argument("--phi", help="comma-separated reduction coefficients (general)")
    kg.add_argument("--coeff-bound", type=int, default=5, dest="coeff_bound")
    kg.add_argument("--seed", type=int)
    kg.add_argument("--out", required=True, help="output directory")

    enc = sub.add_parser("encrypt", help="encrypt a comma-separated plaintext")
    enc.add_argument("--key", required=True, help="public key file")
    enc.add_argument("--plaintext", required=True)
    enc.add_argument("--out", required=True)

    dec = sub.add_parser("decrypt", help="decrypt a ciphertext file")
    dec.add_argument("--key", required=True, help="secret key file")
    dec.add_argument("--ct", required=True)
    group = dec.add_mutually_exclusive_group()
    group.add_argument("--lenient", action="store_true")
    group.add_argument("--strict", action="store_true", default=True)

    for name in ("add", "mul"):
        cmd = sub.add_parser(name, help=f"homomorphic {name} of two ciphertexts")
        cmd.add_argument("--key", required=True, help="public key file")
        cmd.add_argument("ct1")
        cmd.add_argument("ct2")
        cmd.add_argument("--out", required=True)

    ev = sub.add_parser("eval", help="evaluate a circuit file on ciphertexts")
    ev.add_argument("--key", required=True, help="public key file")
    ev.add_argument("--circuit", required=True)
    ev.add_argument("--ct", nargs="+", required=True)
    ev.add_argument("--out", required=True)

    ins = sub.add_parser("inspect", help="describe a key or ciphertext file")
    ins.add_argument("file")

    ver = sub.add_parser("verify", help="re-run the key self-checks")
    ver.add_argument("--secret", required=True)
    ver.add_argument("--public", required=True)

    rep = sub.add_parser("report", help="run the randomized property suites")
    rep.add_argument("--seed", type=int)
    rep.add_argument("--trials", type=int, default=2000)
    rep.add_argument("--out", required=True)

    return parser


def _load_public(path):
    return ser.load_public_key(ser.read_doc(path))


def _load_secret(path):
    return ser.load_secret_key(ser.read_doc(path))


def _load_ct(path, pk_doc_fp, ctx, m):
    doc = ser.read_doc(path)
    body = ser.load_ciphertext_body(doc, ctx)
    if doc.get("fingerprint") != pk_doc_fp:
        raise FormatError(f"{path}: ciphertext fingerprint does not match the key")
    return Ciphertext(body, m)


def _self_check(sk, pk) -> list:
    """Key congruences plus, for cyclotomic keys, the closed-form moduli."""
    failures = []
    e = unit(sk.context)
    zero = RingElement(sk.context, (0,) * sk.context.n)
    for i, a in enumerate(pk.crt_vectors):
        for j, ideal in enumerate(sk.ideals):
            want = e if i == j else zero
            if reduce_mod_ideal(a, ideal) != want:
                failures.append(f"A_{i + 1} has the wrong residue modulo ideal {j + 1}")
    for i, ideal in enumerate(sk.ideals):
        if one_dim_modulus(ideal) != sk.moduli[i]:
            failures.append(f"stored modulus t_{i + 1} disagrees with the HNF basis")
    if sk.scheme == "cyclotomic" and sk.primes is not None:
        for i, q in enumerate(sk.primes):
            if sk.moduli[i] != cyclotomic_modulus(sk.cyclotomic_p, q):
                failures.append(f"t for q={q} disagrees with the closed form")
    if pk.moduli != sk.moduli:
        failures.append("public and secret moduli differ")
    return failures


def cmd_keygen(args) -> int:
    rng = random.Random(_seed_of(args))
    if args.scheme == "cyclotomic":
        if args.p is None:
            raise FormatError("--p is required for the cyclotomic scheme")
        primes = _int_list(args.primes) if args.primes else None
        try:
            sk = gen_secret_cyclotomic(args.p, args.m, rng, q_max=args.q_max,
                                       primes=primes)
        except ValueError as exc:
            raise FormatError(str(exc))
    else:
        if not args.phi:
            raise FormatError("--phi is required for the general scheme")
        coeffs = _int_list(args.phi)
        try:
            ctx = ModulusPolynomial(len(coeffs), coeffs)
        except ValueError as exc:
            raise FormatError(str(exc))
        sk = gen_secret_general(ctx, args.m, rng, coeff_bound=args.coeff_bound)
    pk = gen_public(sk)
    failures = _self_check(sk, pk)
    if failures:
        for f in failures:
            print(f"self-check failed: {f}", file=sys.stderr)
        return EXIT_MATH
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    pub_doc = ser.public_key_doc(pk)
    ser.write_doc(out / "public_key.json", pub_doc)
    ser.write_doc(out / "secret_key.json",
                  ser.secret_key_doc(sk, pub_doc["fingerprint"]))
    print(f"wrote {out / 'public_key.json'} and {out / 'secret_key.json'}")
    print("moduli:", ",".join(str(t) for t in sk.moduli))
    return EXIT_OK


def cmd_encrypt(args) -> int:
    pk = _load_public(args.key)
    fp = ser.read_doc(args.key)["fingerprint"]
    residues = _int_list(args.plaintext)
    ct = encrypt(pk, residues)
    ser.write_doc(args.out, ser.ciphertext_doc(ct, fp))
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_decrypt(args) -> int:
    sk = _load_secret(args.key)
    sk_doc = ser.read_doc(args.key)
    doc = ser.read_doc(args.ct)
    body = ser.load_ciphertext_body(doc, sk.context)
    if doc.get("fingerprint") != sk_doc.get("fingerprint"):
        raise FormatError("ciphertext fingerprint does not match the key")
    pt = decrypt(sk, Ciphertext(body, sk.m), strict=not args.lenient)
    print(",".join(str(u) for u in pt.residues))
    return EXIT_OK


def cmd_binop(args, op) -> int:
    pk = _load_public(args.key)
    fp = ser.read_doc(args.key)["fingerprint"]
    c1 = _load_ct(args.ct1, fp, pk.context, pk.m)
    c2 = _load_ct(args.ct2, fp, pk.context, pk.m)
    out = op(c1, c2)
    ser.write_doc(args.out, ser.ciphertext_doc(out, fp))
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_eval(args) -> int:
    pk = _load_public(args.key)
    fp = ser.read_doc(args.key)["fingerprint"]
    try:
        with open(args.circuit, "r", encoding="utf-8") as fh:
            circuit = parse_circuit(fh.read())
    except OSError as exc:
        raise FormatError(f"cannot read {args.circuit}: {exc}")
    cts = [_load_ct(path, fp, pk.context, pk.m) for path in args.ct]
    out = eval_circuit(circuit, cts)
    ser.write_doc(args.out, ser.ciphertext_doc(out, fp))
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_inspect(args) -> int:
    doc = ser.read_doc(args.file)
    kind = doc.get("kind")
    if kind == "secret-key":
        sk = ser.load_secret_key(doc)
        print(f"secret key: scheme={sk.scheme} n={sk.context.n} m={sk.m}")
        if sk.primes:
            print("q:", ",".join(str(q) for q in sk.primes))
        for i, ideal in enumerate(sk.ideals):
            print(f"ideal {i + 1}: t = {one_dim_modulus(ideal)}")
            print(f"  box dims: {'x'.join(str(b) for b in ideal.gs_diagonal)}")
            for row in ideal.hnf_basis:
                print("  [" + " ".join(str(x) for x in row) + "]")
    elif kind == "public-key":
        pk = ser.load_public_key(doc)
        print(f"public key: scheme={pk.scheme} n={pk.context.n} m={pk.m}")
        print("moduli:", ",".join(str(t) for t in pk.moduli))
        for i, a in enumerate(pk.crt_vectors):
            print(f"A_{i + 1}: ({', '.join(str(c) for c in a.coords)})")
        print("fingerprint:", doc.get("fingerprint"))
    elif kind == "ciphertext":
        print(f"ciphertext: n={doc['n']} fingerprint={doc.get('fingerprint')}")
        print("coords:", ",".join(doc["coords"]))
    else:
        raise FormatError(f"unknown document kind {kind!r}")
    return EXIT_OK


def cmd_verify(args) -> int:
    sk = _load_secret(args.secret)
    pk = _load_public(args.public)
    sk_doc = ser.read_doc(args.secret)
    pk_doc = ser.read_doc(args.public)
    failures = []
    if sk_doc.get("fingerprint") != pk_doc.get("fingerprint"):
        failures.append("secret/public fingerprint cross-reference broken")
    if sk.context != pk.context or sk.m != pk.m:
        failures.append("key contexts disagree")
    else:
        failures.extend(_self_check(sk, pk))
    if failures:
        for f in failures:
            print(f"FAIL: {f}")
        return EXIT_MATH
    print("all checks passed")
    return EXIT_OK


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def cmd_report(args) -> int:
    seed = _seed_of(args)
    rng = random.Random(seed)
    report = {"version": ser.FORMAT_VERSION, "kind": "report", "seed": str(seed)}

    norm_rows = []
    for p in (3, 5, 7):
        ctx = ModulusPolynomial.cyclotomic(p)
        constants = norm_constants(ctx)
        worst = Fraction(0)
        violations = 0
        for _ in range(args.trials):
            a = RingElement(ctx, [rng.randrange(-50, 51) for _ in range(ctx.n)])
            b = RingElement(ctx, [rng.randrange(-50, 51) for _ in range(ctx.n)])
            holds, ratio = check_norm_bound(a, b, constants)
            if not holds:
                violations += 1
            if ratio > worst:
                worst = ratio
        norm_rows.append({
            "p": str(p), "trials": str(args.trials),
            "W_upper": _frac(constants.W_upper),
            "violations": str(violations), "max_ratio_sq": _frac(worst),
        })
    report["norm_bound"] = norm_rows

    sk = gen_secret_cyclotomic(3, 2, rng, primes=(2, 7))
    pk = gen_public(sk)
    factory = scheme_as_knapsack(pk)
    u = tuple(rng.randrange(t) for t in pk.moduli)
    solutions = brute_force_knapsack(factory(encrypt(pk, u).body))
    report["knapsack"] = {
        "plaintext": [str(x) for x in u],
        "solutions": [[str(x) for x in s] for s in solutions],
        "unique": str(solutions == [u]).lower(),
    }

    bounds = []
    for label, lattice in (("<(2,1)>", sk.ideals[0]), ("<(7,1)>", sk.ideals[1])):
        est = covering_radius_estimate(lattice, 40, random.Random(seed))
        bounds.append({"lattice": label, "samples": "40",
                       "covering_radius_sq_lower_bound": _frac(est)})
    report["covering_radius"] = bounds

    ok = all(row["violations"] == "0" for row in norm_rows) and \
        report["knapsack"]["unique"] == "true"
    report["all_passed"] = str(ok).lower()
    ser.write_doc(args.out, report)
    print(f"wrote {args.out}")
    return EXIT_OK if ok else EXIT_MATH


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "keygen": cmd_keygen,
        "encrypt": cmd_encrypt,
        "decrypt": cmd_decrypt,
        "add": lambda a: cmd_binop(a, hom_add),
        "mul": lambda a: cmd_binop(a, hom_mul),
        "eval": cmd_eval,
        "inspect": cmd_inspect,
        "verify": cmd_verify,
        "report": cmd_report,
    }
    try:
        return handlers[args.command](args)
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except _MATH_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH
    except CrtFheError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
