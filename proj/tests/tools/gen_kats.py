#!/usr/bin/env python3
"""Generates the known-answer files under tests/data/.

Every generator is independent of the C++ implementation under test:
  * SHAKE256 / cSHAKE256 / KMAC256 come from a from-scratch Keccak sponge,
    validated here against hashlib.shake_256 for the plain-SHAKE case.
  * ECDH vectors come from pure-integer curve arithmetic, validated here
    against the `cryptography` package.
  * MCV p-values are exact Fraction sums over the Binomial(256, 1/2) pmf.
  * Chi-square survival values come from scipy.

Run from the repository root:  python3 tests/tools/gen_kats.py
"""

import hashlib
import os
import random
from fractions import Fraction

OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "data")

# ---------------------------------------------------------------- Keccak ---

_RC = [
    0x0000000000000001, 0x0000000000008082, 0x800000000000808A, 0x8000000080008000,
    0x000000000000808B, 0x0000000080000001, 0x8000000080008081, 0x8000000000008009,
    0x000000000000008A, 0x0000000000000088, 0x0000000080008009, 0x000000008000000A,
    0x000000008000808B, 0x800000000000008B, 0x8000000000008089, 0x8000000000008003,
    0x8000000000008002, 0x8000000000000080, 0x000000000000800A, 0x800000008000000A,
    0x8000000080008081, 0x8000000000008080, 0x0000000080000001, 0x8000000080008008,
]
_ROT = [
    [0, 36, 3, 41, 18],
    [1, 44, 10, 45, 2],
    [62, 6, 43, 15, 61],
    [28, 55, 25, 21, 56],
    [27, 20, 39, 8, 14],
]
_MASK = (1 << 64) - 1


def _rol(v, r):
    r %= 64
    return ((v << r) | (v >> (64 - r))) & _MASK


def _keccak_f(lanes):
    for rnd in range(24):
        c = [lanes[x][0] ^ lanes[x][1] ^ lanes[x][2] ^ lanes[x][3] ^ lanes[x][4] for x in range(5)]
        d = [c[(x - 1) % 5] ^ _rol(c[(x + 1) % 5], 1) for x in range(5)]
        lanes = [[lanes[x][y] ^ d[x] for y in range(5)] for x in range(5)]
        b = [[0] * 5 for _ in range(5)]
        for x in range(5):
            for y in range(5):
                b[y][(2 * x + 3 * y) % 5] = _rol(lanes[x][y], _ROT[x][y])
        lanes = [
            [b[x][y] ^ ((~b[(x + 1) % 5][y]) & b[(x + 2) % 5][y]) for y in range(5)]
            for x in range(5)
        ]
        lanes[0][0] ^= _RC[rnd]
    return lanes


def _keccak_sponge(rate_bytes, data, suffix, out_len):
    lanes = [[0] * 5 for _ in range(5)]

    def absorb_block(block):
        for i in range(rate_bytes // 8):
            x, y = i % 5, i // 5
            lanes[x][y] ^= int.from_bytes(block[8 * i:8 * i + 8], "little")

    padded = bytearray(data)
    padded.append(suffix)
    while len(padded) % rate_bytes != 0:
        padded.append(0)
    padded[-1] ^= 0x80
    state = lanes
    for off in range(0, len(padded), rate_bytes):
        absorb_block(padded[off:off + rate_bytes])
        state = _keccak_f(lanes)
        for x in range(5):
            for y in range(5):
                lanes[x][y] = state[x][y]

    out = bytearray()
    while len(out) < out_len:
        for i in range(rate_bytes // 8):
            x, y = i % 5, i // 5
            out += lanes[x][y].to_bytes(8, "little")
            if len(out) >= out_len:
                break
        if len(out) < out_len:
            state = _keccak_f(lanes)
            for x in range(5):
                for y in range(5):
                    lanes[x][y] = state[x][y]
    return bytes(out[:out_len])


def shake256(data, out_len):
    return _keccak_sponge(136, data, 0x1F, out_len)


def _left_encode(x):
    body = x.to_bytes(max(1, (x.bit_length() + 7) // 8), "big")
    return bytes([len(body)]) + body


def _right_encode(x):
    body = x.to_bytes(max(1, (x.bit_length() + 7) // 8), "big")
    return body + bytes([len(body)])


def _encode_string(s):
    return _left_encode(8 * len(s)) + s


def _bytepad(x, w):
    z = bytearray(_left_encode(w) + x)
    while len(z) % w != 0:
        z.append(0)
    return bytes(z)


def cshake256(data, out_len, name, custom):
    if not name and not custom:
        return shake256(data, out_len)
    prefix = _bytepad(_encode_string(name) + _encode_string(custom), 136)
    return _keccak_sponge(136, prefix + data, 0x04, out_len)


def kmac256(key, data, out_len, custom):
    new_x = _bytepad(_encode_string(key), 136) + data + _right_encode(8 * out_len)
    return cshake256(new_x, out_len, b"KMAC", custom)


def self_check_keccak():
    rng = random.Random(20240809)
    for trial in range(12):
        data = bytes(rng.randrange(256) for _ in range(rng.randrange(0, 400)))
        out_len = rng.randrange(1, 200)
        expected = hashlib.shake_256(data).digest(out_len)
        got = shake256(data, out_len)
        assert got == expected, f"keccak self-check failed on trial {trial}"


# -------------------------------------------------------------------- EC ---

P256 = dict(
    name="nist-p256",
    p=0xFFFFFFFF00000001000000000000000000000000FFFFFFFFFFFFFFFFFFFFFFFF,
    a=-3,
    b=0x5AC635D8AA3A93E7B3EBBD55769886BC651D06B0CC53B0F63BCE3C3E27D2604B,
    gx=0x6B17D1F2E12C4247F8BCE6E563A440F277037D812DEB33A0F4A13945D898C296,
    gy=0x4FE342E2FE1A7F9B8EE7EB4A7C0F9E162BCE33576B315ECECBB6406837BF51F5,
    n=0xFFFFFFFF00000000FFFFFFFFFFFFFFFFBCE6FAADA7179E84F3B9CAC2FC632551,
)
BRAINPOOL256 = dict(
    name="brainpool-p256",
    p=0xA9FB57DBA1EEA9BC3E660A909D838D726E3BF623D52620282013481D1F6E5377,
    a=0x7D5A0975FC2C3057EEF67530417AFFE7FB8055C126DC5C6CE94A4B44F330B5D9,
    b=0x26DC5C6CE94A4B44F330B5D9BBD77CBF958416295CF7E1CE6BCCDC18FF8C07B6,
    gx=0x8BD2AEB9CB7E57CB2C4B482FFC81B7AFB9DE27E1E3BD23C23A4453BD9ACE3262,
    gy=0x547EF835C3DAC4FD97F8461A14611DC9C27745132DED8E545C1D54C72F046997,
    n=0xA9FB57DBA1EEA9BC3E660A909D838D718C397AA3B561A6F7901E0E82974856A7,
)


def _ec_add(curve, p1, p2):
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    p = curve["p"]
    x1, y1 = p1
    x2, y2 = p2
    if x1 == x2 and (y1 + y2) % p == 0:
        return None
    if p1 == p2:
        lam = (3 * x1 * x1 + curve["a"]) * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    y3 = (lam * (x1 - x3) - y1) % p
    return (x3, y3)


def ec_mul(curve, k, point=None):
    if point is None:
        point = (curve["gx"], curve["gy"])
    result = None
    addend = point
    while k:
        if k & 1:
            result = _ec_add(curve, result, addend)
        addend = _ec_add(curve, addend, addend)
        k >>= 1
    return result


def ec_uncompressed(point):
    x, y = point
    return b"\x04" + x.to_bytes(32, "big") + y.to_bytes(32, "big")


def self_check_ec():
    from cryptography.hazmat.primitives.asymmetric import ec as lib_ec

    curves = [(P256, lib_ec.SECP256R1()), (BRAINPOOL256, lib_ec.BrainpoolP256R1())]
    rng = random.Random(99)
    for curve, lib_curve in curves:
        for _ in range(4):
            d = rng.randrange(1, curve["n"])
            mine = ec_mul(curve, d)
            theirs = lib_ec.derive_private_key(d, lib_curve).public_key().public_numbers()
            assert mine == (theirs.x, theirs.y), f"EC self-check failed for {curve['name']}"


# ------------------------------------------------------------- emitters ---


def emit_shake_kat():
    rng = random.Random(1)
    lines = []
    cases = [(b"", 32), (b"\x00", 32), (bytes([0x40] * 32), 16), (b"hybrid", 64)]
    for _ in range(8):
        seed = bytes(rng.randrange(256) for _ in range(rng.choice([16, 32, 48])))
        out_len = rng.choice([32, 64, 2420, 49856])
        cases.append((seed, out_len))
    for seed, out_len in cases:
        digest = shake256(seed, out_len)
        lines.append(f"{seed.hex()}:{out_len}:{digest.hex()}")
    return lines


def emit_kmac_kat():
    rng = random.Random(2)
    lines = []
    cases = [
        (bytes([0x40] * 32), bytes([0, 1, 2, 3]), 32, b"HYBRID-KX-KDF"),
        (bytes([0x40] * 32), bytes([0, 1, 2, 3]), 32, b""),
        (bytes(range(32)), b"", 32, b"HYBRID-KX-KDF"),
        (bytes(range(1, 33)), bytes(range(64)), 64, b"HYBRID-KX-KDF"),
    ]
    for _ in range(8):
        key = bytes(rng.randrange(256) for _ in range(32))
        msg = bytes(rng.randrange(256) for _ in range(rng.choice([0, 32, 64, 100])))
        out_len = rng.choice([32, 48, 64])
        cases.append((key, msg, out_len, b"HYBRID-KX-KDF"))
    for key, msg, out_len, custom in cases:
        mac = kmac256(key, msg, out_len, custom)
        lines.append(f"{key.hex()}:{msg.hex()}:{custom.hex()}:{out_len}:{mac.hex()}")
    return lines


def emit_ecdh_kat():
    rng = random.Random(3)
    lines = []
    for curve in (P256, BRAINPOOL256):
        for _ in range(5):
            da = rng.randrange(1, curve["n"])
            db = rng.randrange(1, curve["n"])
            qa = ec_mul(curve, da)
            qb = ec_mul(curve, db)
            shared = ec_mul(curve, da, qb)
            shared_check = ec_mul(curve, db, qa)
            assert shared == shared_check
            lines.append(
                ":".join(
                    [
                        curve["name"],
                        da.to_bytes(32, "big").hex(),
                        ec_uncompressed(qa).hex(),
                        db.to_bytes(32, "big").hex(),
                        ec_uncompressed(qb).hex(),
                        shared[0].to_bytes(32, "big").hex(),
                    ]
                )
            )
    return lines


def emit_mcv_kat():
    n = 256
    binom = [Fraction(0)] * (n + 1)
    c = 1
    for k in range(n + 1):
        binom[k] = Fraction(c, 2**n)
        c = c * (n - k) // (k + 1)
    lines = []
    for mcv in range(128, n + 1):
        if mcv == 128:
            p = Fraction(1)
        else:
            tail = sum(binom[mcv:], Fraction(0))
            p = min(Fraction(1), 2 * tail)
        lines.append(f"{mcv}:{float(p):.17e}")
    return lines


def emit_chi2_kat():
    from scipy.stats import chi2

    lines = []
    for dof in (2, 7):
        for stat in (0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 13.816, 20.0, 24.322, 32.0, 64.0):
            lines.append(f"{dof}:{stat}:{chi2.sf(stat, dof):.17e}")
    return lines


def write(name, lines):
    path = os.path.join(OUT_DIR, name)
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")
    print(f"wrote {path} ({len(lines)} vectors)")


def main():
    os.makedirs(OUT_DIR, exist_ok=True)
    self_check_keccak()
    self_check_ec()
    write("shake256_kat.txt", emit_shake_kat())
    write("kmac256_kat.txt", emit_kmac_kat())
    write("ecdh_kat.txt", emit_ecdh_kat())
    write("mcv_p_kat.txt", emit_mcv_kat())
    write("chi2_sf_kat.txt", emit_chi2_kat())


if __name__ == "__main__":
    main()
