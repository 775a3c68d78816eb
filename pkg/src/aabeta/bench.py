"""Timing harness comparing the scheme against textbook RSA and Rabin.

Medians of per-operation wall-clock milliseconds over at least five
repetitions. Encryption at small n is far cheaper than interpreter
call overhead, so the timed unit for each operation is a batch kernel
that inlines the hot arithmetic over pre-generated inputs; batch sizes
are auto-calibrated so one sample is long enough to time reliably.
Inputs are seeded per (scheme, n) row for reproducibility. Benchmarks
are single-threaded by contract: concurrent invocation in one process
is rejected.
"""

import csv
import io
import math
import random
import statistics
import threading
import time
from dataclasses import dataclass

from . import cipher, codec, rabin
from .keys import generate_keypair
from .numtheory import gen_prime_3mod4, mod_inv

__all__ = [
    "BenchRow",
    "RsaKeyPair",
    "SCHEMES",
    "rsa_keygen",
    "rsa_encrypt",
    "rsa_decrypt",
    "run_bench",
    "emit_csv",
]

SCHEMES = ("aabeta", "rabin", "rsa")

_MIN_SAMPLE_SECONDS = 0.005
_MAX_BATCH = 4096


@dataclass(frozen=True)
class BenchRow:
    scheme: str
    n: int
    keygen_ms: float
    encrypt_ms: float
    decrypt_ms: float
    reps: int
    payload_bytes: int


@dataclass(frozen=True)
class RsaKeyPair:
    modulus: int
    e: int
    d: int


def rsa_keygen(n, rng):
    """Textbook RSA with a 2n-bit modulus and public exponent 65537."""
    e = 65537
    while True:
        p = gen_prime_3mod4(n - 1, rng)
        q = gen_prime_3mod4(n - 1, rng)
        if p == q:
            continue
        phi = (p - 1) * (q - 1)
        if math.gcd(e, phi) != 1:
            continue
        return RsaKeyPair(p * q, e, mod_inv(e, phi))


def rsa_encrypt(kp, m):
    if not 0 <= m < kp.modulus:
        raise ValueError("message must lie in [0, N)")
    return pow(m, kp.e, kp.modulus)


def rsa_decrypt(kp, c):
    # plain square-and-multiply, no CRT shortcut
    if not 0 <= c < kp.modulus:
        raise ValueError("ciphertext must lie in [0, N)")
    return pow(c, kp.d, kp.modulus)


_running = threading.Lock()


def run_bench(schemes, n_list, reps=5, seed=0):
    """Benchmark the requested schemes at each n, returning BenchRows."""
    if reps < 5:
        raise ValueError("reps must be at least 5")
    unknown = set(schemes) - set(SCHEMES)
    if unknown:
        raise ValueError(f"unknown schemes: {sorted(unknown)}")
    if not _running.acquire(blocking=False):
        raise RuntimeError("a benchmark is already running in this process")
    try:
        rows = []
        for scheme in sorted(set(schemes)):
            for n in sorted(set(n_list)):
                rows.append(_bench_row(scheme, n, reps, seed))
        return rows
    finally:
        _running.release()


def emit_csv(rows):
    """CSV text, one line per row, ordered by (scheme, n)."""
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow(
        ["scheme", "n", "keygen_ms", "encrypt_ms", "decrypt_ms", "reps", "payload_bytes"]
    )
    for row in sorted(rows, key=lambda r: (r.scheme, r.n)):
        writer.writerow(
            [
                row.scheme,
                row.n,
                f"{row.keygen_ms:.6f}",
                f"{row.encrypt_ms:.6f}",
                f"{row.decrypt_ms:.6f}",
                row.reps,
                row.payload_bytes,
            ]
        )
    return out.getvalue()


def _median_per_op(callable_once, ops, reps):
    samples = []
    for _ in range(reps):
        t0 = time.perf_counter()
        callable_once()
        samples.append((time.perf_counter() - t0) / ops * 1000.0)
    return statistics.median(samples)


def _calibrate(make_items, kernel):
    """Grow the batch until one kernel run is long enough to time."""
    size = 1
    while True:
        items = make_items(size)
        t0 = time.perf_counter()
        kernel(items)
        if time.perf_counter() - t0 >= _MIN_SAMPLE_SECONDS or size >= _MAX_BATCH:
            return items
        size *= 4


def _bench_row(scheme, n, reps, seed):
    rng = random.Random(f"{seed}:{scheme}:{n}")
    if scheme == "aabeta":
        payload_bytes = codec.capacity_bytes(n)
        kp = generate_keypair(n, rng)
        keygen_ms = _median_per_op(lambda: generate_keypair(n, rng), 1, reps)
        e_a1, e_a2 = kp.public.e_a1, kp.public.e_a2

        def make_enc(size):
            items = []
            for _ in range(size):
                msg = codec.encode(rng.randbytes(payload_bytes), n)
                eph = cipher.sample_ephemerals(n, rng)
                items.append((msg.m1, msg.m2, eph.k1, eph.k2))
            return items

        def enc_kernel(items):
            two_n = 1 << n
            sink = 0
            for m1, m2, k1, k2 in items:
                u = m1 * two_n + k1
                v = m2 * two_n + k2
                sink ^= u * e_a1 + v * v * e_a2
            return sink

        enc_items = _calibrate(make_enc, enc_kernel)
        encrypt_ms = _median_per_op(
            lambda: enc_kernel(enc_items), len(enc_items), reps
        )

        def make_dec(size):
            out = []
            for _ in range(size):
                msg = codec.encode(rng.randbytes(payload_bytes), n)
                out.append(cipher.encrypt(kp.public, msg, rng))
            return out

        def dec_kernel(items):
            for ct in items:
                cipher.decrypt(kp, ct)

        dec_items = _calibrate(make_dec, dec_kernel)
        decrypt_ms = _median_per_op(
            lambda: dec_kernel(dec_items), len(dec_items), reps
        )
    elif scheme == "rsa":
        payload_bytes = (2 * n - 2) // 8
        kp = rsa_keygen(n, rng)
        keygen_ms = _median_per_op(lambda: rsa_keygen(n, rng), 1, reps)
        modulus, e, d = kp.modulus, kp.e, kp.d

        def make_enc(size):
            return [int.from_bytes(rng.randbytes(payload_bytes), "big") for _ in range(size)]

        def enc_kernel(items):
            for m in items:
                pow(m, e, modulus)

        enc_items = _calibrate(make_enc, enc_kernel)
        encrypt_ms = _median_per_op(
            lambda: enc_kernel(enc_items), len(enc_items), reps
        )

        def make_dec(size):
            return [rsa_encrypt(kp, m) for m in make_enc(size)]

        def dec_kernel(items):
            for c in items:
                pow(c, d, modulus)

        dec_items = _calibrate(make_dec, dec_kernel)
        decrypt_ms = _median_per_op(
            lambda: dec_kernel(dec_items), len(dec_items), reps
        )
    elif scheme == "rabin":
        payload_bytes = (2 * n) // 8
        kp = rabin.keygen(n, rng)
        keygen_ms = _median_per_op(lambda: rabin.keygen(n, rng), 1, reps)
        modulus = kp.N

        def make_enc(size):
            return [int.from_bytes(rng.randbytes(payload_bytes), "big") for _ in range(size)]

        def enc_kernel(items):
            for m in items:
                m * m % modulus
            return None

        enc_items = _calibrate(make_enc, enc_kernel)
        encrypt_ms = _median_per_op(
            lambda: enc_kernel(enc_items), len(enc_items), reps
        )

        def make_dec(size):
            return [rabin.encrypt(modulus, m) for m in make_enc(size)]

        def dec_kernel(items):
            for c in items:
                rabin.decrypt_all(kp, c)

        dec_items = _calibrate(make_dec, dec_kernel)
        decrypt_ms = _median_per_op(
            lambda: dec_kernel(dec_items), len(dec_items), reps
        )
    else:  # pragma: no cover - guarded in run_bench
        raise ValueError(scheme)
    return BenchRow(scheme, n, keygen_ms, encrypt_ms, decrypt_ms, reps, payload_bytes)
