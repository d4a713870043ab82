"""Shared numerical substrate.

Prime sieving, prime-reciprocal sums, Riemann zeta to the right of the
1-line, the complex Gamma function, the Dickman function on [0, 2], and
exhaustive smooth-number counts and reciprocal sums.

Everything here is pure and allocation-local; tables are immutable after
construction and safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cache import load_array, store_array
from .errors import AccuracyError, CapacityError, DomainError, PoleError

SIEVE_CAP = 10**9
SMOOTH_CAP = 10**7          # exhaustive smooth-number machinery
ZETA_IM_CAP = 10**4


# ---------------------------------------------------------------------------
# primes

@dataclass(frozen=True)
class PrimeTable:
    """All primes <= limit, ascending."""

    limit: int
    primes: np.ndarray

    def __len__(self) -> int:
        return len(self.primes)

    def up_to(self, x: int | float) -> np.ndarray:
        if x > self.limit:
            raise CapacityError(f"table holds primes <= {self.limit}, asked for {x}")
        return self.primes[: np.searchsorted(self.primes, x, side="right")]


def sieve_primes(limit: int) -> PrimeTable:
    """Eratosthenes over the odd integers; returns the complete ascending list."""
    if limit < 2 or limit > SIEVE_CAP:
        raise CapacityError(f"sieve limit must be in [2, {SIEVE_CAP}], got {limit}")
    cached = load_array(f"primes_{limit}")
    if cached is not None:
        return PrimeTable(limit, cached)
    if limit < 3:
        return PrimeTable(limit, np.array([2], dtype=np.int64))
    # odd-only bitmap: index i represents 2i+1
    n_odd = (limit + 1) // 2
    is_prime = np.ones(n_odd, dtype=bool)
    is_prime[0] = False                      # 1 is not prime
    for i in range(1, (math.isqrt(limit) + 1) // 2 + 1):
        if is_prime[i]:
            p = 2 * i + 1
            start = (p * p) // 2
            is_prime[start::p] = False
    odds = 2 * np.nonzero(is_prime)[0] + 1
    primes = np.concatenate(([2], odds)).astype(np.int64)
    if limit >= 10**6:
        store_array(f"primes_{limit}", primes)
    return PrimeTable(limit, primes)


@lru_cache(maxsize=4)
def shared_primes(limit: int) -> PrimeTable:
    """Memoized sieve for the common case of repeated scans below one cap."""
    return sieve_primes(limit)


def primes_up_to(x: int) -> np.ndarray:
    """Convenience: ascending primes <= x from a memoized table."""
    limit = max(int(x), 2)
    for cap in (10**4, 10**5, 10**6, 10**7):
        if limit <= cap:
            return shared_primes(cap).up_to(limit)
    return sieve_primes(limit).primes


def prime_reciprocal_sum(x: int, weight: dict[int, float] | None = None) -> float:
    """Sum of w(p)/p over primes p <= x, with w identically 1 by default."""
    if x < 2:
        raise DomainError(f"need x >= 2, got {x}")
    p = primes_up_to(x)
    if weight is None:
        return float(np.sum(1.0 / p))
    w = np.ones(len(p))
    index = {int(q): i for i, q in enumerate(p)}
    for q, wq in weight.items():
        if q in index:
            w[index[q]] = wq
    return float(np.sum(w / p))


# ---------------------------------------------------------------------------
# zeta near the 1-line (Euler-Maclaurin)

# B_2, B_4, ..., B_18
_BERNOULLI = (
    1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66,
    -691.0 / 2730, 7.0 / 6, -3617.0 / 510, 43867.0 / 798,
)
_EM_ORDER = 8   # correction terms actually summed; the 9th drives the error estimate


def _zeta_em(s: complex, n_trunc: int) -> tuple[complex, float]:
    """One Euler-Maclaurin evaluation; returns (value, remainder estimate)."""
    n = np.arange(1, n_trunc, dtype=np.float64)
    value = complex(np.sum(n ** (-s)))
    value += n_trunc ** (1 - s) / (s - 1)
    value += 0.5 * n_trunc ** (-s)
    # correction terms B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
    rising = s
    for k in range(1, _EM_ORDER + 1):
        coeff = _BERNOULLI[k - 1] / math.factorial(2 * k)
        value += coeff * rising * n_trunc ** (-s - 2 * k + 1)
        rising *= (s + 2 * k - 1) * (s + 2 * k)
    # magnitude of the first omitted correction term estimates the remainder
    k = _EM_ORDER + 1
    coeff = abs(_BERNOULLI[k - 1]) / math.factorial(2 * k)
    term_mag = coeff * abs(rising) * n_trunc ** (-(s.real) - 2 * k + 1)
    return value, term_mag


def zeta_near_one(s: complex, precision: float = 1e-12) -> complex:
    """Riemann zeta for Re(s) >= 0.5, s != 1, |Im(s)| <= 1e4.

    Euler-Maclaurin with order-8 corrections; the truncation point starts at
    max(50, 10*|Im s|) and doubles until the remainder estimate meets
    `precision` (absolute).
    """
    s = complex(s)
    if s == 1:
        raise PoleError("zeta has a simple pole at s = 1")
    if s.real < 0.5:
        raise DomainError(f"supported only for Re(s) >= 0.5, got {s}")
    if abs(s.imag) > ZETA_IM_CAP:
        raise CapacityError(f"|Im s| capped at {ZETA_IM_CAP}, got {s.imag}")
    n_trunc = max(50, int(10 * abs(s.imag)) + 1)
    for _ in range(8):
        value, rem = _zeta_em(s, n_trunc)
        if rem <= precision:
            return value
        n_trunc *= 2
        if n_trunc > 4 * 10**6:
            break
    raise AccuracyError(
        f"zeta({s}) remainder estimate {rem:.2e} above target {precision:.2e}"
    )


# ---------------------------------------------------------------------------
# Gamma (Lanczos, g = 7, 9 coefficients; reflection for Re z < 1/2)

_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def complex_gamma(z: complex) -> complex:
    """Gamma(z) to >= 10 significant digits away from the poles."""
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == int(z.real):
        raise PoleError(f"Gamma pole at {z}")
    if z.real < 0.5:
        # reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return complex(math.pi / (np.sin(math.pi * z) * complex_gamma(1.0 - z)))
    z -= 1.0
    acc = _LANCZOS_C[0]
    for i in range(1, 9):
        acc += _LANCZOS_C[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return complex(math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * np.exp(-t) * acc)


# ---------------------------------------------------------------------------
# Dickman's function on [0, 2]

def dickman_rho(u: float) -> float:
    """rho(u) = 1 on [0,1] and 1 - log(u) on [1,2]; wider u unsupported."""
    if u < 0.0 or u > 2.0:
        raise DomainError(f"dickman_rho supported only on [0, 2], got {u}")
    if u <= 1.0:
        return 1.0
    return 1.0 - math.log(u)


# ---------------------------------------------------------------------------
# smooth numbers (exhaustive up to SMOOTH_CAP)

@lru_cache(maxsize=2)
def largest_prime_factor_table(limit: int) -> np.ndarray:
    """arr[n] = largest prime factor of n for 2 <= n <= limit; arr[1] = 1."""
    if limit > SMOOTH_CAP:
        raise CapacityError(f"exhaustive smooth machinery capped at {SMOOTH_CAP}")
    arr = np.zeros(limit + 1, dtype=np.int32)
    if limit >= 1:
        arr[1] = 1
    for p in sieve_primes(limit).primes if limit >= 2 else ():
        arr[p::p] = p          # ascending overwrite leaves the largest factor
    return arr


def smooth_count(x: int, y: int) -> int:
    """Exact number of n <= x whose prime factors are all <= y (n = 1 counts)."""
    if not (1 <= y <= x):
        raise DomainError(f"need 1 <= y <= x, got y={y}, x={x}")
    if x > SMOOTH_CAP:
        raise CapacityError(f"exhaustive count capped at {SMOOTH_CAP}")
    lpf = largest_prime_factor_table(int(x))
    return int(np.count_nonzero(lpf[1 : int(x) + 1] <= y))


def smooth_reciprocal_sum(x: int, y: int, coprime_to: int = 1) -> float:
    """Exact sum of 1/n over y-smooth n <= x with gcd(n, coprime_to) = 1."""
    if not (1 <= y <= x):
        raise DomainError(f"need 1 <= y <= x, got y={y}, x={x}")
    if coprime_to < 1:
        raise DomainError(f"coprime_to must be >= 1, got {coprime_to}")
    if x > SMOOTH_CAP:
        raise CapacityError(f"exhaustive sum capped at {SMOOTH_CAP}")
    x = int(x)
    lpf = largest_prime_factor_table(x)
    mask = lpf[: x + 1] <= y
    mask[0] = False
    if coprime_to > 1:
        for p in _distinct_prime_factors(coprime_to):
            mask[p::p] = False
    n = np.nonzero(mask)[0].astype(np.float64)
    return float(np.sum(1.0 / n))


def _distinct_prime_factors(m: int) -> list[int]:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        out.append(m)
    return out


# ---------------------------------------------------------------------------
# factorization helpers shared by the multiplicative-evaluation machinery

@lru_cache(maxsize=2)
def smallest_prime_factor_table(limit: int) -> np.ndarray:
    """arr[n] = smallest prime factor of n for 2 <= n <= limit."""
    if limit > SMOOTH_CAP:
        raise CapacityError(f"spf table capped at {SMOOTH_CAP}")
    arr = np.zeros(limit + 1, dtype=np.int32)
    for p in sieve_primes(limit).primes:
        view = arr[p::p]
        view[view == 0] = p
    return arr


def factorize(n: int, spf: np.ndarray | None = None) -> list[tuple[int, int]]:
    """Prime-power factorization [(p, k), ...] of n >= 1, ascending in p."""
    if n < 1:
        raise DomainError(f"factorize needs n >= 1, got {n}")
    out: list[tuple[int, int]] = []
    if spf is not None and n < len(spf):
        while n > 1:
            p = int(spf[n])
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out.append((p, k))
        return out
    d = 2
    while d * d <= n:
        if n % d == 0:
            k = 0
            while n % d == 0:
                n //= d
                k += 1
            out.append((d, k))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out
