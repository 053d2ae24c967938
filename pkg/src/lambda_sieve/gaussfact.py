"""Gauss factorials and exceptionality tests.

The Gauss factorial N_n! is the product of the integers up to N that
are coprime to n.  A prime p = 1 (mod m) is called exceptional for m
(at order alpha) when

    (((p**(alpha+1) - 1) / m)_p!)**(p-1)  =  1   (mod p**(alpha+1)),

the alpha = 1 case being the one tied to lambda invariants.  Three
independent evaluation routes are provided: the direct product, a
Fermat-quotient form that costs O(p), and a Gauss-factorial-ratio form
coming from Jacobi sums.  They must always agree; the verify module
checks that they do.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .modmath import (
    PrimeRange,
    Residue,
    harmonic_mod,
    is_probable_prime,
    wilson_quotient,
)
from .quadfields import QuadField, character_table

__all__ = [
    "ExceptionalVerdict",
    "gauss_factorial",
    "exceptional_direct",
    "exceptional_fq",
    "exceptional_ratio",
    "exceptional_general",
    "cut_point_congruence_check",
    "scan_exceptional",
]

_CHUNK = 1 << 20


@dataclass(frozen=True)
class ExceptionalVerdict:
    """Outcome of one exceptionality test.

    xi lives mod p**alpha and is the power in
    product**(p-1) = (1 + p)**xi; the verdict is equivalent to xi = 0.
    """

    p: int
    m: int
    alpha: int
    method: str
    xi: Residue
    verdict: bool

    def __post_init__(self) -> None:
        if self.verdict != (self.xi.value == 0):
            raise ValueError("verdict inconsistent with xi")


def _coprime_product(N: int, p: int, modulus: int) -> int:
    """Product of 1..N skipping multiples of the prime p, mod modulus."""
    acc = 1 % modulus
    for lo in range(1, N + 1, _CHUNK):
        seg = np.arange(lo, min(N, lo + _CHUNK - 1) + 1, dtype=np.int64)
        if p <= N:
            seg = seg[seg % p != 0]
        acc = acc * _kernels.prod_mod(seg % modulus, modulus) % modulus
    return acc


def gauss_factorial(N: int, n: int, modulus: int) -> Residue:
    """N_n! mod modulus: the product of i <= N with gcd(i, n) = 1."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    if N >= 1 << 62:
        raise ValueError("N too large for int64 enumeration")
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    acc = 1 % modulus
    for lo in range(1, N + 1, _CHUNK):
        seg = np.arange(lo, min(N, lo + _CHUNK - 1) + 1, dtype=np.int64)
        if n > 1:
            seg = seg[np.gcd(seg, n) == 1]
        acc = acc * _kernels.prod_mod(seg % modulus, modulus) % modulus
    return Residue(acc, modulus)


def exceptional_direct(p: int, m: int, alpha: int = 1) -> ExceptionalVerdict:
    """Exceptionality by direct Gauss-factorial product, O(p**(alpha+1)).

    Requires p = 1 (mod m) and p**(alpha+1) < 2**61.
    """
    _check_pm(p, m)
    if alpha < 1:
        raise ValueError("alpha must be at least 1")
    modulus = p ** (alpha + 1)
    if modulus >= 1 << 61:
        raise ValueError("p**(alpha+1) out of int64 range")
    N = (modulus - 1) // m
    g = _coprime_product(N, p, modulus)
    power = pow(g, p - 1, modulus)
    xi = Residue((power - 1) // p, p**alpha)
    return ExceptionalVerdict(
        p=p, m=m, alpha=alpha, method="direct", xi=xi, verdict=power == 1
    )


def _check_pm(p: int, m: int) -> None:
    if m < 2:
        raise ValueError("m must be at least 2")
    if p < 3 or (p - 1) % m or not is_probable_prime(p):
        raise ValueError(f"need a prime p = 1 (mod {m}), got {p}")


def _xi_fq(p: int, m: int) -> int:
    """xi for (p, m) from Fermat quotients:

    xi = (H_{(p-1)/m} - w_p)/m + sum_{a <= (p-1)/m} q_p(a)  (mod p),

    where w_p is the Wilson quotient and H is a harmonic number mod p.
    The Gauss-factorial power then equals (1+p)**xi mod p**2; the sign
    convention is normalized so that this matches the direct route's
    exponent exactly, not just in the xi = 0 case.
    """
    n0 = (p - 1) // m
    w = int(wilson_quotient(p))
    h = int(harmonic_mod(n0, p))
    if n0 >= 1:
        table = _kernels.fq_table(p, n0)
        s = int(table[1:].sum() % p)
    else:
        s = 0
    inv_m = pow(m, -1, p)
    return (inv_m * (h - w) + s) % p


def exceptional_fq(p: int, m: int) -> ExceptionalVerdict:
    """Exceptionality via the Fermat-quotient form of xi, O(p) time."""
    _check_pm(p, m)
    xi = _xi_fq(p, m)
    return ExceptionalVerdict(
        p=p,
        m=m,
        alpha=1,
        method="fermat_quotient",
        xi=Residue(xi, p),
        verdict=xi == 0,
    )


def _ratio_factor(p: int, i: int, D: int, r: int, p2: int) -> int:
    """The Jacobi-sum surrogate for index i:

    (i*(p**(2r) - 1)/(D/2))_p! / ((i*(p**(2r) - 1)/D)_p!)**2  mod p**2.
    """
    M = p ** (2 * r)
    half = _coprime_product(i * ((M - 1) // (D // 2)), p, p2)
    full = _coprime_product(i * ((M - 1) // D), p, p2)
    return half * pow(full * full % p2, -1, p2) % p2


def _check_ratio_args(p: int, D: int, r: int) -> None:
    if D < 4 or D % 2:
        raise ValueError("D must be an even integer >= 4")
    if r < 1 or pow(p, r, D) != 1:
        raise ValueError(f"need p**r = 1 (mod {D})")
    if p ** (2 * r) >= 1 << 61:
        raise ValueError("p**(2r) out of int64 range")


def exceptional_ratio(p: int, D: int, r: int = 1) -> bool:
    """Single-factor Gauss-factorial-ratio criterion (maximal fields).

    True iff the i = 1 ratio raised to the (p-1)-st power is 1 mod p**2.
    """
    _check_ratio_args(p, D, r)
    p2 = p * p
    return pow(_ratio_factor(p, 1, D, r, p2), p - 1, p2) == 1


def exceptional_general(p: int, field: QuadField, r: int = 1) -> bool:
    """Full double-product criterion for arbitrary imaginary quadratic fields.

    Multiplies the i-th ratio factor to the power chi(i) over the units
    0 < i < D/2, then raises to the (p-1)-st power; the verdict is
    whether the result is 1 mod p**2.  Preconditions: p**r = 1 (mod D),
    p splits, p does not divide the class number, and p != 3 whenever
    chi(2) = -1 with d != 3 (this keeps the ideal power coprime to p).
    """
    D = field.D
    _check_ratio_args(p, D, r)
    if field.h % p == 0:
        raise ValueError(f"p = {p} divides the class number {field.h}")
    tbl = character_table(field).values
    if p == 3 and tbl[2 % D] == -1 and field.d != 3:
        raise ValueError("p = 3 is excluded when chi(2) = -1")
    p2 = p * p
    acc = 1
    for i in range(1, D // 2):
        c = int(tbl[i])
        if math.gcd(i, D) != 1 or c == 0:
            continue
        f = _ratio_factor(p, i, D, r, p2)
        acc = acc * (f if c == 1 else pow(f, -1, p2)) % p2
    return pow(acc, p - 1, p2) == 1


def cut_point_congruence_check(p: int, n: int) -> bool:
    """Gauss-factorial congruence between the /3 and /6 cut points:

    ((p**n - 1)/3)_p!**24 = ((p**n - 1)/6)_p!**12  (mod p**n),

    for p = 1 (mod 6) and n >= 1.
    """
    if p % 6 != 1:
        raise ValueError("need p = 1 (mod 6)")
    if n < 1:
        raise ValueError("n must be at least 1")
    M = p**n
    if M >= 1 << 61:
        raise ValueError("p**n out of int64 range")
    third = _coprime_product((M - 1) // 3, p, M)
    sixth = _coprime_product((M - 1) // 6, p, M)
    return pow(third, 24, M) == pow(sixth, 12, M)


def _fq_block(args: tuple[int, tuple[int, ...]]) -> list[tuple[int, int]]:
    m, primes = args
    return [(p, _xi_fq(p, m)) for p in primes]


def _write_checkpoint(path: str, payload: dict) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(payload, fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_checkpoint(path: str) -> dict | None:
    if not os.path.exists(path):
        return None
    with open(path) as fh:
        return json.load(fh)


_SCAN_BLOCK = 64
_SCAN_CHECKPOINT_BLOCKS = 100


def scan_exceptional(
    m: int,
    bound: int,
    workers: int = 1,
    start: int = 3,
    checkpoint: str | None = None,
) -> list[ExceptionalVerdict]:
    """Test every prime p = 1 (mod m) in [start, bound] for exceptionality.

    Returns one ExceptionalVerdict per prime, in increasing order; the
    result does not depend on the worker count.  With checkpoint set,
    finished (p, xi) pairs are saved every 100 blocks of 64 primes and a
    rerun with the same m and start resumes after the last saved prime.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    lo = max(start, 3)
    pairs: list[tuple[int, int]] = []
    if checkpoint is not None:
        saved = _read_checkpoint(checkpoint)
        if (
            saved is not None
            and saved.get("kind") == "scan_exceptional"
            and saved.get("m") == m
            and saved.get("start") == lo
        ):
            pairs = [(p, x) for p, x in saved["pairs"] if p <= bound]
            lo = max(lo, saved["next_start"])
    primes = list(PrimeRange(lo, bound, (m, 1 % m)))
    blocks = [
        (m, tuple(primes[i : i + _SCAN_BLOCK]))
        for i in range(0, len(primes), _SCAN_BLOCK)
    ]

    def _flush(block_index: int) -> None:
        if checkpoint is None:
            return
        if (block_index + 1) % _SCAN_CHECKPOINT_BLOCKS and block_index + 1 < len(
            blocks
        ):
            return
        _write_checkpoint(
            checkpoint,
            {
                "kind": "scan_exceptional",
                "m": m,
                "start": max(start, 3),
                "next_start": pairs[-1][0] + 1 if pairs else lo,
                "pairs": [list(t) for t in pairs],
            },
        )

    if workers <= 1:
        for i, block in enumerate(blocks):
            pairs.extend(_fq_block(block))
            _flush(i)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for i, part in enumerate(pool.map(_fq_block, blocks)):
                pairs.extend(part)
                _flush(i)
    return [
        ExceptionalVerdict(
            p=p,
            m=m,
            alpha=1,
            method="fermat_quotient",
            xi=Residue(x, p),
            verdict=x == 0,
        )
        for p, x in pairs
    ]
