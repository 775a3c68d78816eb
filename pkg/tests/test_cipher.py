import random

import pytest

from aabeta.cipher import (
    Ciphertext,
    EphemeralPair,
    decrypt,
    decrypt_trace,
    encrypt,
    encrypt_trace,
    encrypt_with_ephemerals,
    format_ciphertext,
    parse_ciphertext,
    sample_ephemerals,
)
from aabeta.codec import capacity_bytes, decode, encode
from aabeta.errors import InvalidCiphertext, ParameterViolation
from aabeta.keys import KeyPair, PrivateKey, PublicKey, generate_keypair

import vectors


def test_reference_encryption_intermediates():
    trace = encrypt_trace(vectors.public_key(), vectors.message(), vectors.ephemerals())
    assert trace.u == vectors.U16
    assert trace.v == vectors.V16
    assert trace.v * trace.v == vectors.V16_SQUARED
    assert trace.ciphertext.c == vectors.C16


def test_reference_ciphertext_by_independent_dot_product():
    # recompute the two-term combination directly from the frozen inputs
    u = vectors.M1_16 * 2**16 + vectors.K1_16
    v = vectors.M2_16 * 2**16 + vectors.K2_16
    assert u * vectors.E_A1_16 + v * v * vectors.E_A2_16 == vectors.C16
    ct = encrypt_with_ephemerals(
        vectors.public_key(), vectors.message(), vectors.ephemerals()
    )
    assert ct.c == vectors.C16


def test_reference_decryption_pipeline():
    trace = decrypt_trace(vectors.keypair(), vectors.ciphertext())
    assert trace.w == vectors.W16
    assert trace.roots == vectors.ROOTS16
    assert len(trace.accepted) == 1
    u, v = trace.accepted[0]
    assert v == vectors.ROOTS16[2]  # only the third root divides exactly
    assert u == vectors.U16
    assert trace.message.m1 == vectors.M1_16
    assert trace.message.m2 == vectors.M2_16


def test_reference_root_identities():
    trace = decrypt_trace(vectors.keypair(), vectors.ciphertext())
    for root in trace.roots:
        assert root * root % vectors.PQ16 == trace.w


def test_tampered_ciphertext_rejected():
    with pytest.raises(InvalidCiphertext):
        decrypt(vectors.keypair(), Ciphertext(vectors.C16 + 1))


def test_encrypt_randomizes():
    kp = generate_keypair(16, random.Random(0))
    msg = encode(b"abc", 16)
    rng = random.Random(5)
    a = encrypt(kp.public, msg, rng)
    b = encrypt(kp.public, msg, rng)
    assert a != b
    assert decrypt(kp, a) == decrypt(kp, b) == msg


def test_ephemeral_range_enforced():
    kp = generate_keypair(16, random.Random(1))
    msg = encode(b"abc", 16)
    with pytest.raises(ValueError):
        encrypt_with_ephemerals(kp.public, msg, EphemeralPair(1 << 15, 40000))
    with pytest.raises(ValueError):
        encrypt_with_ephemerals(kp.public, msg, EphemeralPair(40000, 1 << 16))


def test_message_key_size_mismatch():
    kp = generate_keypair(16, random.Random(2))
    with pytest.raises(ValueError):
        encrypt(kp.public, encode(b"a", 32), random.Random(0))


@pytest.mark.parametrize("n", [8, 16, 32, 64])
def test_round_trip_uniqueness_and_consistency(n):
    rng = random.Random(f"rt:{n}")
    cap = capacity_bytes(n)
    for trial in range(25):
        if trial % 5 == 0:
            kp = generate_keypair(n, rng)
            pq = kp.private.pq
        payload = rng.randbytes(rng.randrange(cap + 1))
        msg = encode(payload, n)
        enc = encrypt_trace(kp.public, msg, sample_ephemerals(n, rng))
        dec = decrypt_trace(kp, enc.ciphertext)
        # exactly one candidate passes integrality + window, every time
        assert len(dec.accepted) == 1
        assert dec.message == msg
        assert decode(dec.message) == payload
        # unmasked value equals the encryption-side square
        assert dec.w == enc.v * enc.v % pq
        assert all(r * r % pq == dec.w for r in dec.roots)
        assert (1 << (4 * n)) < enc.u < (1 << (4 * n + 1))
        assert (1 << (2 * n - 2)) < enc.v < (1 << (2 * n - 1))
        # direct big-integer recomputation of the two-term combination
        e1, e2 = kp.public.e_a1, kp.public.e_a2
        assert enc.ciphertext.c == enc.u * e1 + enc.v * enc.v * e2


def test_double_acceptance_raises_parameter_violation():
    # crafted key material outside the honest parameter ranges: with
    # e_a2 = d = 1 the pair is algebraically consistent, and the two
    # window roots 264, 385 of 253 mod 649 differ by a multiple of
    # p^2*q, so both pass the divisibility filter.
    p, q, n = 11, 59, 5
    e_a1 = p * p * q
    v_a, v_b = 264, 385
    assert (v_a * v_a - v_b * v_b) % e_a1 == 0
    lo, hi = 1 << (2 * n - 2), 1 << (2 * n - 1)
    assert lo < v_a < hi and lo < v_b < hi
    kp = KeyPair(PublicKey(n, e_a1, 1), PrivateKey(p, q, 1))
    c = 100 * e_a1 + v_a * v_a
    with pytest.raises(ParameterViolation):
        decrypt(kp, Ciphertext(c))


class OpCountingInt:
    """Integer proxy that tallies arithmetic by kind; comparisons are free."""

    __slots__ = ("value", "counts")

    def __init__(self, value, counts):
        self.value = int(value)
        self.counts = counts

    def _wrap(self, value):
        return OpCountingInt(value, self.counts)

    @staticmethod
    def _val(other):
        return other.value if isinstance(other, OpCountingInt) else other

    def _tally(self, kind):
        self.counts[kind] = self.counts.get(kind, 0) + 1

    def __mul__(self, other):
        self._tally("mul")
        return self._wrap(self.value * self._val(other))

    __rmul__ = __mul__

    def __add__(self, other):
        self._tally("add")
        return self._wrap(self.value + self._val(other))

    __radd__ = __add__

    def __sub__(self, other):
        self._tally("sub")
        return self._wrap(self.value - self._val(other))

    def __rsub__(self, other):
        self._tally("sub")
        return self._wrap(self._val(other) - self.value)

    def __floordiv__(self, other):
        self._tally("div")
        return self._wrap(self.value // self._val(other))

    def __rfloordiv__(self, other):
        self._tally("div")
        return self._wrap(self._val(other) // self.value)

    def __truediv__(self, other):
        self._tally("div")
        return self._wrap(self.value / self._val(other))

    __rtruediv__ = __rfloordiv__

    def __mod__(self, other):
        self._tally("mod")
        return self._wrap(self.value % self._val(other))

    def __rmod__(self, other):
        self._tally("mod")
        return self._wrap(self._val(other) % self.value)

    def __divmod__(self, other):
        self._tally("div")
        return divmod(self.value, self._val(other))

    __rdivmod__ = __divmod__

    def __pow__(self, other, mod=None):
        self._tally("pow")
        return self._wrap(pow(self.value, self._val(other), mod))

    def __lshift__(self, other):
        return self._wrap(self.value << self._val(other))

    def __rshift__(self, other):
        return self._wrap(self.value >> self._val(other))

    def __neg__(self):
        return self._wrap(-self.value)

    def __eq__(self, other):
        return self.value == self._val(other)

    def __lt__(self, other):
        return self.value < self._val(other)

    def __le__(self, other):
        return self.value <= self._val(other)

    def __gt__(self, other):
        return self.value > self._val(other)

    def __ge__(self, other):
        return self.value >= self._val(other)

    def __hash__(self):
        return hash(self.value)

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"OpCountingInt({self.value})"


def test_encryption_uses_no_division_and_no_modular_reduction():
    from aabeta.codec import EncodedMessage

    counts = {}
    msg = EncodedMessage(
        OpCountingInt(vectors.M1_16, counts),
        OpCountingInt(vectors.M2_16, counts),
        16,
    )
    eph = EphemeralPair(
        OpCountingInt(vectors.K1_16, counts), OpCountingInt(vectors.K2_16, counts)
    )
    trace = encrypt_trace(vectors.public_key(), msg, eph)
    assert trace.ciphertext.c.value == vectors.C16
    assert counts.get("div", 0) == 0
    assert counts.get("mod", 0) == 0
    assert counts.get("pow", 0) == 0
    assert counts.get("mul", 0) >= 3
    assert counts.get("add", 0) >= 2


def test_ciphertext_file_format():
    ct = vectors.ciphertext()
    assert parse_ciphertext(format_ciphertext(ct)) == ct
    assert parse_ciphertext(f"{vectors.C16}") == ct
    assert parse_ciphertext(hex(vectors.C16) + "\n") == ct
    with pytest.raises(ValueError):
        parse_ciphertext("12x34\n")
