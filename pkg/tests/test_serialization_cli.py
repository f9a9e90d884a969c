import json

import pytest

from crtfhe import serialization as ser
from crtfhe.cli import main
from crtfhe.errors import FormatError
from crtfhe.keygen import gen_public, gen_secret_cyclotomic, gen_secret_general
from crtfhe.ring import ModulusPolynomial

from conftest import seeded


@pytest.fixture
def keypair():
    sk = gen_secret_cyclotomic(3, 2, seeded(0), primes=(2, 7))
    return sk, gen_public(sk)


def test_public_key_roundtrip(keypair):
    sk, pk = keypair
    doc = ser.public_key_doc(pk)
    loaded = ser.load_public_key(doc)
    assert loaded == pk
    # bit-exact: serializing the loaded key reproduces the document
    assert ser.canonical_json(ser.public_key_doc(loaded)) == ser.canonical_json(doc)


def test_secret_key_roundtrip(keypair):
    sk, pk = keypair
    fp = ser.public_key_doc(pk)["fingerprint"]
    doc = ser.secret_key_doc(sk, fp)
    loaded = ser.load_secret_key(doc)
    assert loaded.ideals == sk.ideals
    assert loaded.moduli == sk.moduli
    assert loaded.generators == sk.generators
    assert ser.canonical_json(ser.secret_key_doc(loaded, fp)) == ser.canonical_json(doc)


def test_roundtrip_preserves_big_integers():
    # moduli for p=7 at q around 97 exceed 64 bits; nothing may be truncated
    sk = gen_secret_general(ModulusPolynomial(2, (-1, -1)), 2, seeded(2),
                            coeff_bound=10 ** 25)
    pk = gen_public(sk)
    doc = json.loads(ser.canonical_json(ser.public_key_doc(pk)))
    assert ser.load_public_key(doc) == pk
    big = max(max(abs(c) for c in a.coords) for a in pk.crt_vectors)
    assert big > 2 ** 64  # the test only means something at this size


def test_integers_must_be_strings(keypair):
    _, pk = keypair
    doc = ser.public_key_doc(pk)
    doc["m"] = 2  # a native JSON number is a format error
    with pytest.raises(FormatError):
        ser.load_public_key(doc)


def test_version_and_kind_checked(keypair):
    _, pk = keypair
    doc = ser.public_key_doc(pk)
    bad = dict(doc, version="2")
    with pytest.raises(FormatError):
        ser.load_public_key(bad)
    with pytest.raises(FormatError):
        ser.load_public_key(dict(doc, kind="secret-key"))


def test_fingerprint_tamper_detected(keypair):
    _, pk = keypair
    doc = ser.public_key_doc(pk)
    doc["moduli"] = ["3", "41"]
    with pytest.raises(FormatError):
        ser.load_public_key(doc)


def test_ciphertext_doc_roundtrip(keypair):
    from crtfhe.scheme import encrypt

    sk, pk = keypair
    ct = encrypt(pk, (2, 11))
    fp = ser.public_key_doc(pk)["fingerprint"]
    doc = ser.ciphertext_doc(ct, fp)
    body = ser.load_ciphertext_body(doc, pk.context)
    assert body == ct.body
    with pytest.raises(FormatError):
        ser.load_ciphertext_body(doc, ModulusPolynomial.cyclotomic(5))


# --- CLI ---


def run(args, capsys=None):
    code = main(args)
    return code


def test_cli_end_to_end(tmp_path, capsys):
    out = tmp_path / "keys"
    assert run(["keygen", "--p", "3", "--m", "2", "--primes", "2,7",
                "--out", str(out)]) == 0
    assert "moduli: 3,43" in capsys.readouterr().out

    pub = str(out / "public_key.json")
    sec = str(out / "secret_key.json")
    ct1 = str(tmp_path / "c1.json")
    ct2 = str(tmp_path / "c2.json")
    prod = str(tmp_path / "prod.json")

    assert run(["encrypt", "--key", pub, "--plaintext", "2,5", "--out", ct1]) == 0
    assert run(["encrypt", "--key", pub, "--plaintext", "2,10", "--out", ct2]) == 0
    capsys.readouterr()
    assert run(["decrypt", "--key", sec, "--ct", ct1]) == 0
    assert capsys.readouterr().out.strip() == "2,5"

    assert run(["mul", "--key", pub, ct1, ct2, "--out", prod]) == 0
    capsys.readouterr()
    assert run(["decrypt", "--key", sec, "--ct", prod]) == 0
    assert capsys.readouterr().out.strip() == "1,7"

    total = str(tmp_path / "sum.json")
    assert run(["add", "--key", pub, ct1, ct2, "--out", total]) == 0
    capsys.readouterr()
    assert run(["decrypt", "--key", sec, "--ct", total]) == 0
    assert capsys.readouterr().out.strip() == "1,15"

    assert run(["verify", "--secret", sec, "--public", pub]) == 0
    assert run(["inspect", pub]) == 0
    assert run(["inspect", sec]) == 0
    assert run(["inspect", ct1]) == 0


def test_cli_eval(tmp_path, capsys):
    out = tmp_path / "keys"
    run(["keygen", "--p", "3", "--primes", "2,7", "--out", str(out)])
    pub = str(out / "public_key.json")
    sec = str(out / "secret_key.json")
    ct1, ct2 = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    run(["encrypt", "--key", pub, "--plaintext", "2,5", "--out", ct1])
    run(["encrypt", "--key", pub, "--plaintext", "1,7", "--out", ct2])
    circ = tmp_path / "circ.txt"
    circ.write_text("INPUTS 2\nMUL 0 1 -> 2\nADD 2 1 -> 3\n")
    res = str(tmp_path / "res.json")
    assert run(["eval", "--key", pub, "--circuit", str(circ),
                "--ct", ct1, ct2, "--out", res]) == 0
    capsys.readouterr()
    run(["decrypt", "--key", sec, "--ct", res])
    assert capsys.readouterr().out.strip() == "0,42"


def test_cli_keygen_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run(["keygen", "--p", "5", "--m", "3", "--seed", "9", "--out", str(a)])
    run(["keygen", "--p", "5", "--m", "3", "--seed", "9", "--out", str(b)])
    for name in ("public_key.json", "secret_key.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_cli_seed_env_fallback(tmp_path, monkeypatch):
    a, b = tmp_path / "a", tmp_path / "b"
    monkeypatch.setenv("CRTFHE_SEED", "9")
    run(["keygen", "--p", "5", "--m", "3", "--out", str(a)])
    run(["keygen", "--p", "5", "--m", "3", "--seed", "9", "--out", str(b)])
    assert (a / "public_key.json").read_bytes() == (b / "public_key.json").read_bytes()


def test_cli_exit_codes(tmp_path, capsys):
    out = tmp_path / "keys"
    run(["keygen", "--p", "3", "--primes", "2,7", "--out", str(out)])
    pub = str(out / "public_key.json")
    sec = str(out / "secret_key.json")

    # usage errors
    with pytest.raises(SystemExit) as exc:
        main(["keygen"])  # missing --out
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1

    # validation errors
    ct = str(tmp_path / "c.json")
    assert run(["encrypt", "--key", pub, "--plaintext", "9,9", "--out", ct]) == 2
    assert run(["encrypt", "--key", sec, "--plaintext", "0,0", "--out", ct]) == 2
    assert run(["keygen", "--scheme", "cyclotomic", "--out", str(tmp_path / "x")]) == 2

    # math errors
    assert run(["keygen", "--p", "3", "--primes", "2,5",
                "--out", str(tmp_path / "y")]) == 3
    capsys.readouterr()


def test_cli_tampered_key_fails_verify(tmp_path, capsys):
    out = tmp_path / "keys"
    run(["keygen", "--p", "3", "--primes", "2,7", "--out", str(out)])
    pub = out / "public_key.json"
    doc = json.loads(pub.read_text())
    doc["crt_vectors"][0] = ["44", "0"]
    doc["fingerprint"] = ser.fingerprint_of(doc)
    pub.write_text(ser.canonical_json(doc))
    code = run(["verify", "--secret", str(out / "secret_key.json"),
                "--public", str(pub)])
    assert code == 3
    assert "FAIL" in capsys.readouterr().out


def test_cli_strict_vs_lenient_decrypt(tmp_path, capsys):
    # scalar ideals <2> and <3> leave room for nonzero tails; the cyclotomic
    # prime-determinant keys would silently absorb the tampering
    from crtfhe.keygen import make_secret_key
    from crtfhe.lattice import principal_ideal
    from crtfhe.ring import embed_scalar

    ctx = ModulusPolynomial.cyclotomic(3)
    gens = [embed_scalar(2, ctx), embed_scalar(3, ctx)]
    sk = make_secret_key(ctx, [principal_ideal(g) for g in gens], gens)
    pk = gen_public(sk)
    pub_doc = ser.public_key_doc(pk)
    pub, sec = tmp_path / "pub.json", tmp_path / "sec.json"
    ser.write_doc(pub, pub_doc)
    ser.write_doc(sec, ser.secret_key_doc(sk, pub_doc["fingerprint"]))

    ct = tmp_path / "c.json"
    run(["encrypt", "--key", str(pub), "--plaintext", "1,2", "--out", str(ct)])
    doc = json.loads(ct.read_text())
    doc["coords"] = [doc["coords"][0], "1"]  # inject a nonzero tail
    ct.write_text(ser.canonical_json(doc))
    capsys.readouterr()
    assert run(["decrypt", "--key", str(sec), "--ct", str(ct)]) == 3
    assert run(["decrypt", "--key", str(sec), "--ct", str(ct), "--lenient"]) == 0
    capsys.readouterr()


def test_cli_report(tmp_path, capsys):
    out = str(tmp_path / "report.json")
    assert run(["report", "--trials", "200", "--seed", "4", "--out", out]) == 0
    doc = json.loads(open(out).read())
    assert doc["all_passed"] == "true"
    assert all(row["violations"] == "0" for row in doc["norm_bound"])
    capsys.readouterr()


def test_cli_general_scheme(tmp_path, capsys):
    out = tmp_path / "keys"
    assert run(["keygen", "--scheme", "general", "--phi=-1,-1",
                "--m", "2", "--seed", "3", "--out", str(out)]) == 0
    assert run(["verify", "--secret", str(out / "secret_key.json"),
                "--public", str(out / "public_key.json")]) == 0
    capsys.readouterr()
