"""Baseline Rabin cryptosystem: C = M^2 mod N with N = p*q.

Decryption yields four square roots; two disambiguation schemes are
provided. The redundancy scheme replicates the l least-significant
payload bits and keeps the roots whose tag checks out (ambiguous with
small probability); the extra-bits scheme transmits the parity and the
Jacobi symbol of M, which identify the root uniquely when
gcd(M, N) = 1.
"""

import math
from dataclasses import dataclass

from .errors import InvalidCiphertext, NonResidueError
from .numtheory import four_roots, gen_prime_3mod4, jacobi, sqrt_mod_p_3mod4

__all__ = [
    "RabinKeyPair",
    "AmbiguityReport",
    "RedundancyStats",
    "keygen",
    "encrypt",
    "decrypt_all",
    "encrypt_redundant",
    "decrypt_redundant",
    "encrypt_extrabits",
    "decrypt_extrabits",
    "redundancy_experiment",
]


@dataclass(frozen=True)
class RabinKeyPair:
    N: int
    p: int
    q: int

    def __post_init__(self):
        if self.N != self.p * self.q:
            raise ValueError("N != p*q")
        if self.p == self.q:
            raise ValueError("p == q")
        if self.p % 4 != 3 or self.q % 4 != 3:
            raise ValueError("primes must be 3 (mod 4)")


@dataclass(frozen=True)
class AmbiguityReport:
    """Multiple roots passed the redundancy check."""

    roots: tuple
    payloads: tuple


@dataclass(frozen=True)
class RedundancyStats:
    trials: int
    ambiguous: int

    @property
    def rate(self):
        return self.ambiguous / self.trials


def keygen(n, rng):
    """Two distinct primes = 3 (mod 4) in (2^n, 2^(n+1))."""
    p = gen_prime_3mod4(n, rng)
    q = p
    while q == p:
        q = gen_prime_3mod4(n, rng)
    return RabinKeyPair(p * q, p, q)


def encrypt(n_modulus, m):
    if not 0 <= m < n_modulus:
        raise ValueError("message must lie in [0, N)")
    return m * m % n_modulus


def decrypt_all(kp, c):
    """All four square roots of c modulo N, via CRT."""
    if not 0 <= c < kp.N:
        raise ValueError("ciphertext must lie in [0, N)")
    try:
        x_p = sqrt_mod_p_3mod4(c % kp.p, kp.p)
        x_q = sqrt_mod_p_3mod4(c % kp.q, kp.q)
    except NonResidueError as exc:
        raise InvalidCiphertext("ciphertext is not a quadratic residue") from exc
    return four_roots(x_p, x_q, kp.p, kp.q)


def encrypt_redundant(n_modulus, payload, l):
    """Append a copy of the payload's l low bits, then square mod N."""
    if l < 1:
        raise ValueError("l must be at least 1")
    if payload < 0:
        raise ValueError("payload must be nonnegative")
    m = (payload << l) | (payload & ((1 << l) - 1))
    if m >= n_modulus:
        raise ValueError("tagged message does not fit below N")
    return encrypt(n_modulus, m)


def decrypt_redundant(kp, c, l):
    """Unique payload whose roots carry the replicated tag, else a report.

    Returns the payload integer when exactly one root matches; an
    AmbiguityReport when several do.
    """
    mask = (1 << l) - 1
    matches = [
        r for r in dict.fromkeys(decrypt_all(kp, c)) if (r & mask) == (r >> l) & mask
    ]
    if not matches:
        raise InvalidCiphertext("no root carries the replicated tag")
    if len(matches) == 1:
        return matches[0] >> l
    return AmbiguityReport(tuple(matches), tuple(r >> l for r in matches))


def encrypt_extrabits(n_modulus, m):
    """Square mod N plus the two disambiguation bits (parity, Jacobi)."""
    if not 0 <= m < n_modulus:
        raise ValueError("message must lie in [0, N)")
    if math.gcd(m, n_modulus) != 1:
        raise ValueError("message shares a factor with the modulus")
    jac = 1 if jacobi(m, n_modulus) == 1 else 0
    return m * m % n_modulus, m & 1, jac


def decrypt_extrabits(kp, c, parity_bit, jacobi_bit):
    """The single root matching both transmitted bits."""
    matches = [
        r
        for r in dict.fromkeys(decrypt_all(kp, c))
        if (r & 1) == parity_bit and (1 if jacobi(r, kp.N) == 1 else 0) == jacobi_bit
    ]
    if len(matches) != 1:
        raise InvalidCiphertext(f"{len(matches)} roots match the extra bits")
    return matches[0]


def redundancy_experiment(n, l, trials, rng):
    """Monte Carlo estimate of the redundancy scheme's ambiguity rate.

    Each trial draws a fresh key pair and payload; a trial counts as
    ambiguous when more than one root carries the tag. The correct
    payload is always among the matches, which the trial asserts.
    """
    ambiguous = 0
    for _ in range(trials):
        kp = keygen(n, rng)
        payload = rng.randrange(1, 1 << (2 * n - l))
        c = encrypt_redundant(kp.N, payload, l)
        result = decrypt_redundant(kp, c, l)
        if isinstance(result, AmbiguityReport):
            assert payload in result.payloads
            ambiguous += 1
        else:
            assert result == payload
    return RedundancyStats(trials, ambiguous)
