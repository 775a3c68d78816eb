"""Encryption and decryption.

Encryption blinds the message pair with fresh session values:

    U = m1*2^n + k1    (in (2^(4n), 2^(4n+1)))
    V = m2*2^n + k2    (in (2^(2n-2), 2^(2n-1)))
    C = U*e_a1 + V^2*e_a2

using only multiplication and addition on public values. Decryption
recovers V^2 mod p*q through the private exponent, walks the four CRT
square roots, and accepts the single root that divides the ciphertext
equation exactly while staying inside the V window; the session values
fall away under floor division by 2^n.
"""

from dataclasses import dataclass

from .codec import EncodedMessage
from .errors import InvalidCiphertext, NonResidueError, ParameterViolation
from .numtheory import four_roots, sqrt_mod_p_3mod4

__all__ = [
    "Ciphertext",
    "EphemeralPair",
    "EncryptionTrace",
    "DecryptionTrace",
    "sample_ephemerals",
    "encrypt",
    "encrypt_with_ephemerals",
    "encrypt_trace",
    "decrypt",
    "decrypt_trace",
    "format_ciphertext",
    "parse_ciphertext",
]


@dataclass(frozen=True)
class Ciphertext:
    c: int


@dataclass(frozen=True)
class EphemeralPair:
    k1: int
    k2: int


@dataclass(frozen=True)
class EncryptionTrace:
    u: int
    v: int
    ciphertext: Ciphertext


@dataclass(frozen=True)
class DecryptionTrace:
    w: int
    roots: tuple
    accepted: tuple  # (u, v) pairs passing divisibility + V window
    message: object  # EncodedMessage when exactly one candidate is in range


def sample_ephemerals(n, rng):
    """Fresh session pair, each uniform in (2^(n-1), 2^n)."""
    lo = 1 << (n - 1)
    return EphemeralPair(rng.randrange(lo + 1, 2 * lo), rng.randrange(lo + 1, 2 * lo))


def encrypt(pub, msg, rng):
    return encrypt_with_ephemerals(pub, msg, sample_ephemerals(pub.n, rng))


def encrypt_with_ephemerals(pub, msg, eph):
    """Deterministic encryption with caller-supplied session values."""
    return encrypt_trace(pub, msg, eph).ciphertext


def encrypt_trace(pub, msg, eph):
    """Like encrypt_with_ephemerals but exposing the intermediates."""
    n = pub.n
    if msg.n != n:
        raise ValueError(f"message encoded for n={msg.n}, key has n={n}")
    lo = 1 << (n - 1)
    if not (lo < eph.k1 < 2 * lo and lo < eph.k2 < 2 * lo):
        raise ValueError(f"session values outside (2^{n - 1}, 2^{n})")
    two_n = 1 << n
    u = msg.m1 * two_n + eph.k1
    v = msg.m2 * two_n + eph.k2
    c = u * pub.e_a1 + v * v * pub.e_a2
    return EncryptionTrace(u, v, Ciphertext(c))


def decrypt_trace(kp, ct):
    """Run the full decryption pipeline, returning all intermediates.

    Raises InvalidCiphertext when the unmasked value has no square
    root; candidate filtering outcomes are left in the trace for the
    caller to judge.
    """
    pub, priv = kp.public, kp.private
    n = pub.n
    p, q = priv.p, priv.q
    pq = p * q
    c = ct.c
    w = c * priv.d % pq
    try:
        x_p = sqrt_mod_p_3mod4(w % p, p)
        x_q = sqrt_mod_p_3mod4(w % q, q)
    except NonResidueError as exc:
        raise InvalidCiphertext("unmasked value is not a quadratic residue") from exc
    roots = four_roots(x_p, x_q, p, q)
    v_lo = 1 << (2 * n - 2)
    v_hi = 1 << (2 * n - 1)
    accepted = []
    for v in dict.fromkeys(roots):  # collapse duplicate roots (x_p or x_q zero)
        if not v_lo < v < v_hi:
            continue
        num = c - v * v * pub.e_a2
        if num < 0 or num % pub.e_a1:
            continue
        accepted.append((num // pub.e_a1, v))
    message = None
    if len(accepted) == 1:
        u, v = accepted[0]
        try:
            message = EncodedMessage(u >> n, v >> n, n)
        except ValueError:
            message = None
    return DecryptionTrace(w, roots, tuple(accepted), message)


def decrypt(kp, ct):
    """Recover the message pair from a ciphertext.

    Exactly one of the four candidate roots may pass the integrality
    and window filters; zero candidates means the ciphertext is not a
    valid encryption under this key, two or more means the key itself
    violates the uniqueness window.
    """
    trace = decrypt_trace(kp, ct)
    if len(trace.accepted) > 1:
        raise ParameterViolation(
            f"{len(trace.accepted)} candidates accepted; key breaks uniqueness"
        )
    if not trace.accepted or trace.message is None:
        raise InvalidCiphertext("no candidate root satisfies the ciphertext equation")
    return trace.message


def format_ciphertext(ct):
    return f"{ct.c}\n"


def parse_ciphertext(text):
    """Decimal or 0x-hex ciphertext text; trailing whitespace tolerated."""
    value = text.strip()
    if value.lower().startswith("0x"):
        return Ciphertext(int(value, 16))
    if not value.isdigit():
        raise ValueError(f"malformed ciphertext text: {value[:40]!r}")
    return Ciphertext(int(value))
