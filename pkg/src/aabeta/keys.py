"""Key generation and validation.

A key pair at security parameter n consists of the public tuple
(n, e_a1, e_a2) with e_a1 = p^2*q, and the private triple (p, q, d)
where p, q are primes congruent to 3 mod 4 in (2^n, 2^(n+1)) and d is
the decryption exponent with e_a2*d = 1 (mod p*q).
"""

import math
from dataclasses import dataclass, field

from .errors import GenerationFailure
from .numtheory import gen_prime_3mod4, is_probable_prime, mod_inv

__all__ = [
    "PublicKey",
    "PrivateKey",
    "KeyPair",
    "ValidationReport",
    "generate_keypair",
    "derive_public",
    "validate_keypair",
    "format_public_key",
    "parse_public_key",
    "format_private_key",
    "parse_private_key",
]


@dataclass(frozen=True)
class PublicKey:
    n: int
    e_a1: int
    e_a2: int


@dataclass(frozen=True)
class PrivateKey:
    p: int
    q: int
    d: int

    @property
    def pq(self):
        return self.p * self.q


@dataclass(frozen=True)
class KeyPair:
    public: PublicKey
    private: PrivateKey


@dataclass
class ValidationReport:
    strict: bool
    violations: list = field(default_factory=list)

    @property
    def valid(self):
        return not self.violations


_D_RETRIES = 1000


def generate_keypair(n, rng, safe_primes=False):
    """Generate a full key pair at bit size n (n >= 8).

    d is sampled uniformly from (e_a1^(4/9), p*q) coprime to p*q, and
    e_a2 is the inverse of d shifted by the minimal multiple of p*q
    into (2^(3n+4), 2^(3n+6)).
    """
    if n < 8:
        raise ValueError("n must be at least 8")
    p = gen_prime_3mod4(n, rng, safe=safe_primes)
    q = p
    while q == p:
        q = gen_prime_3mod4(n, rng, safe=safe_primes)
    pq = p * q
    e_a1 = p * p * q
    floor_pow = e_a1**4
    for _ in range(_D_RETRIES):
        d = rng.randrange(2, pq)
        if d**9 > floor_pow and math.gcd(d, pq) == 1:
            break
    else:
        raise GenerationFailure("could not sample a decryption exponent")
    e = mod_inv(d, pq)
    lo = 1 << (3 * n + 4)
    if e <= lo:
        e += ((lo - e) // pq + 1) * pq
    assert lo < e < 1 << (3 * n + 6)
    return KeyPair(PublicKey(n, e_a1, e), PrivateKey(p, q, d))


def derive_public(priv, e_a2, n):
    """Public key matching a private key: e_a1 = p^2*q computed exactly."""
    return PublicKey(n, priv.p * priv.p * priv.q, e_a2)


def validate_keypair(kp, strict=True):
    """Check key-pair invariants, returning a report of all violations.

    Relaxed mode (strict=False) checks only algebraic consistency:
    e_a1 = p^2*q, e_a2*d = 1 (mod p*q), coprime public coefficients,
    and p = q = 3 (mod 4). Strict mode adds primality and every range
    bound the generator guarantees.
    """
    pub, priv = kp.public, kp.private
    n, e_a1, e_a2 = pub.n, pub.e_a1, pub.e_a2
    p, q, d = priv.p, priv.q, priv.d
    pq = p * q
    bad = []
    if e_a1 != p * p * q:
        bad.append("e1-consistency: e_a1 != p^2*q")
    if e_a2 * d % pq != 1:
        bad.append("d-inverse: e_a2*d != 1 (mod p*q)")
    if math.gcd(e_a1, e_a2) != 1:
        bad.append("e1-e2-coprime: gcd(e_a1, e_a2) != 1")
    if p % 4 != 3:
        bad.append("p-mod4: p != 3 (mod 4)")
    if q % 4 != 3:
        bad.append("q-mod4: q != 3 (mod 4)")
    if p == q:
        bad.append("p-q-distinct: p == q")
    if strict:
        if not is_probable_prime(p):
            bad.append("p-prime: p is not prime")
        if not is_probable_prime(q):
            bad.append("q-prime: q is not prime")
        if not (1 << n) < p < (1 << (n + 1)):
            bad.append(f"p-range: p not in (2^{n}, 2^{n + 1})")
        if not (1 << n) < q < (1 << (n + 1)):
            bad.append(f"q-range: q not in (2^{n}, 2^{n + 1})")
        if not (1 << (3 * n)) < e_a1 < (1 << (3 * n + 3)):
            bad.append(f"e1-range: e_a1 not in (2^{3 * n}, 2^{3 * n + 3})")
        if not (1 << (3 * n + 4)) < e_a2 < (1 << (3 * n + 6)):
            bad.append(f"e2-range: e_a2 not in (2^{3 * n + 4}, 2^{3 * n + 6})")
        if not (1 << (2 * n)) < pq < (1 << (2 * n + 2)):
            bad.append(f"pq-range: p*q not in (2^{2 * n}, 2^{2 * n + 2})")
        if d**9 <= e_a1**4:
            bad.append("d-floor: d not above e_a1^(4/9)")
        if not 1 < d < pq:
            bad.append("d-range: d not in (1, p*q)")
        if math.gcd(d, pq) != 1:
            bad.append("d-coprime: gcd(d, p*q) != 1")
    return ValidationReport(strict=strict, violations=bad)


_PUBLIC_FIELDS = ("n", "eA1", "eA2")
_PRIVATE_FIELDS = ("n", "p", "q", "d")


def _parse_fields(text, expected):
    values = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        name, sep, value = line.partition("=")
        name = name.strip()
        value = value.strip()
        if not sep or not value.isdigit():
            raise ValueError(f"malformed key line: {raw!r}")
        if name not in expected:
            raise ValueError(f"unknown key field: {name!r}")
        if name in values:
            raise ValueError(f"duplicate key field: {name!r}")
        values[name] = int(value)
    missing = [f for f in expected if f not in values]
    if missing:
        raise ValueError(f"missing key fields: {missing}")
    return values


def format_public_key(pub):
    return f"n = {pub.n}\neA1 = {pub.e_a1}\neA2 = {pub.e_a2}\n"


def parse_public_key(text):
    v = _parse_fields(text, _PUBLIC_FIELDS)
    return PublicKey(v["n"], v["eA1"], v["eA2"])


def format_private_key(priv, n):
    return f"n = {n}\np = {priv.p}\nq = {priv.q}\nd = {priv.d}\n"


def parse_private_key(text):
    """Return (PrivateKey, n) from the key-file text."""
    v = _parse_fields(text, _PRIVATE_FIELDS)
    return PrivateKey(v["p"], v["q"], v["d"]), v["n"]
