"""Pretentious distance calculus and mean-value bound evaluators.

The distance between unit-disc multiplicative functions f, g at scale x is

    dist(f, g; x)^2 = sum over primes p <= x of (1 - Re f(p) conj(g(p))) / p,

a pseudo-metric satisfying the triangle inequality.  On top of it sit the
minimizing-twist search, the classical mean-value bound shells (pointwise,
real-valued, logarithmically weighted, and the Dirichlet-series
generalization), and the cosine-average constants gamma_k.

Grid scans are deterministic: fixed spacing, block-ordered evaluation,
ties broken toward the smallest |t| and then toward negative t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import factorize, primes_up_to
from .errors import DomainError, PreconditionError, UnitDiscError

UNIT_DISC_TOL = 1e-12


# ---------------------------------------------------------------------------
# multiplicative functions

@dataclass(frozen=True)
class MultiplicativeFunction:
    """A unit-disc-valued multiplicative function given on prime powers.

    `prime_power(p, k)` defines the function; composite values are products
    over prime-power parts.  `prime_vec` is an optional vectorized fast path
    for first powers used by the distance and sieve machinery.
    """

    label: str
    prime_power: Callable[[int, int], complex]
    completely_multiplicative: bool = False
    prime_vec: Callable[[np.ndarray], np.ndarray] | None = None

    def at_primes(self, primes: np.ndarray) -> np.ndarray:
        primes = np.asarray(primes, dtype=np.int64)
        if self.prime_vec is not None:
            vals = np.asarray(self.prime_vec(primes), dtype=np.complex128)
        else:
            vals = np.array(
                [self.prime_power(int(p), 1) for p in primes], dtype=np.complex128
            )
        bad = np.abs(vals) > 1.0 + UNIT_DISC_TOL
        if np.any(bad):
            p = int(primes[np.nonzero(bad)[0][0]])
            raise UnitDiscError(f"{self.label}: |f({p})| > 1")
        return vals

    def value(self, n: int, spf: np.ndarray | None = None) -> complex:
        if n < 1:
            raise DomainError("multiplicative functions are defined on n >= 1")
        out = 1.0 + 0.0j
        for p, k in factorize(n, spf):
            out *= self.prime_power(p, k)
        if abs(out) > 1.0 + 1e-9:
            raise UnitDiscError(f"{self.label}: |f({n})| > 1")
        return out


def constant_one() -> MultiplicativeFunction:
    return MultiplicativeFunction(
        "1", lambda p, k: 1.0 + 0.0j, True, lambda p: np.ones(len(p), complex)
    )


def minus_one_on_primes() -> MultiplicativeFunction:
    """Completely multiplicative with f(p) = -1 (Liouville pattern)."""
    return MultiplicativeFunction(
        "(-1)^Omega",
        lambda p, k: complex((-1.0) ** k),
        True,
        lambda p: -np.ones(len(p), complex),
    )


def moebius_pattern() -> MultiplicativeFunction:
    """f(p) = -1 and f(p^k) = 0 for k >= 2."""
    return MultiplicativeFunction(
        "mu-pattern",
        lambda p, k: -1.0 + 0.0j if k == 1 else 0.0 + 0.0j,
        False,
        lambda p: -np.ones(len(p), complex),
    )


def power_twist(t: float) -> MultiplicativeFunction:
    """n^{it} as a multiplicative function: f(p^k) = p^{ikt}."""
    return MultiplicativeFunction(
        f"n^({t}i)",
        lambda p, k: complex(np.exp(1j * t * k * math.log(p))),
        True,
        lambda p: np.exp(1j * t * np.log(p.astype(np.float64))),
    )


def from_character(chi) -> MultiplicativeFunction:
    from .characters import format_label

    return MultiplicativeFunction(
        f"chi[{format_label(chi)}]",
        lambda p, k: chi(p**k),
        True,
        lambda p: chi.values(p),
    )


def random_unimodular(seed: int) -> MultiplicativeFunction:
    """Deterministic pseudo-random completely multiplicative phases."""

    def phases(p: np.ndarray) -> np.ndarray:
        h = (p.astype(np.uint64) * np.uint64(0x9E3779B97F4A7C15)
             + np.uint64(seed) * np.uint64(0xBF58476D1CE4E5B9))
        h ^= h >> np.uint64(31)
        h *= np.uint64(0x94D049BB133111EB)
        h ^= h >> np.uint64(29)
        frac = h.astype(np.float64) / float(2**64)
        return np.exp(2j * np.pi * frac)

    return MultiplicativeFunction(
        f"random[{seed}]",
        lambda p, k: complex(phases(np.array([p], dtype=np.int64))[0]) ** k,
        True,
        phases,
    )


# ---------------------------------------------------------------------------
# block evaluation of f(n) over a range

def multiplicative_values(
    f: MultiplicativeFunction, lo: int, hi: int
) -> np.ndarray:
    """f(n) for n in [lo, hi), by sieving out small prime powers.

    Small primes (p <= sqrt(hi)) contribute telescoping factor ratios; the
    single leftover large prime per n is evaluated vectorized.
    """
    if lo < 1:
        raise DomainError("range must start at n >= 1")
    n = np.arange(lo, hi, dtype=np.int64)
    vals = np.ones(hi - lo, dtype=np.complex128)
    rem = n.copy()
    pathological: list[int] = []
    for p in primes_up_to(math.isqrt(max(hi - 1, 1))):
        p = int(p)
        if p * p >= hi:
            break
        pk, k, prev = p, 1, 1.0 + 0.0j
        while pk < hi:
            cur = complex(f.prime_power(p, k))
            start = ((lo + pk - 1) // pk) * pk
            if start < hi:
                if prev == 0.0:
                    # deeper power resurrecting a zero needs the slow path
                    if cur != 0.0:
                        pathological.append(p)
                        break
                else:
                    vals[start - lo :: pk] *= cur / prev
                rem[start - lo :: pk] //= p
            prev = cur
            pk *= p
            k += 1
    mask = rem > 1
    if np.any(mask):
        vals[mask] *= f.at_primes(rem[mask])
    for p in pathological:
        start = ((lo + p - 1) // p) * p
        for m in range(start, hi, p):
            vals[m - lo] = f.value(m)
    return vals


# ---------------------------------------------------------------------------
# distance

@dataclass(frozen=True)
class DistanceReport:
    f_label: str
    g_label: str
    x: int
    d2: float
    y: int | None = None          # range start when restricted to (y, x]
    big_t: float | None = None    # twist-search window
    t_star: float | None = None   # minimizing twist
    m_min: float | None = None    # minimized squared distance
    grid_spacing: float | None = None
    refine_width: float | None = None

    @property
    def distance(self) -> float:
        return math.sqrt(max(self.d2, 0.0))


def _prime_weights(
    f: MultiplicativeFunction, g: MultiplicativeFunction, x: int
) -> tuple[np.ndarray, np.ndarray]:
    p = primes_up_to(x)
    return p.astype(np.float64), f.at_primes(p) * np.conj(g.at_primes(p))


def distance(
    f: MultiplicativeFunction, g: MultiplicativeFunction, x: int
) -> DistanceReport:
    """dist(f, g; x)^2 by exact summation over primes up to x."""
    if x < 2:
        raise DomainError("need x >= 2")
    pf, w = _prime_weights(f, g, x)
    d2 = float(np.sum((1.0 - w.real) / pf))
    return DistanceReport(f.label, g.label, x, max(d2, 0.0))


def distance_range(
    f: MultiplicativeFunction, g: MultiplicativeFunction, y: int, x: int
) -> float:
    """Squared distance restricted to primes in (y, x]."""
    if not (2 <= y <= x):
        raise DomainError("need 2 <= y <= x")
    pf, w = _prime_weights(f, g, x)
    keep = pf > y
    return float(np.sum((1.0 - w[keep].real) / pf[keep]))


# ---------------------------------------------------------------------------
# minimizing twist

def _twist_objective(pf, z, log_p, const):
    """Returns d2(t) evaluator: const - Re sum z_p e^{-i t log p}."""

    def d2(t: float) -> float:
        return const - float(np.sum(z * np.exp(-1j * t * log_p)).real)

    return d2


def min_twist(
    f: MultiplicativeFunction,
    x: int,
    big_t: float,
    resolution: float = 1e-2,
) -> DistanceReport:
    """Minimize dist(f, n^{it}; x)^2 over |t| <= T.

    Grid at spacing min(resolution, 1/(4 log x)), then golden-section
    refinement around the best grid point down to width 1e-3 / log x.
    Grid ties break toward the smallest |t|, then toward negative t.
    """
    if big_t <= 0 or resolution <= 0:
        raise DomainError("T and resolution must be positive")
    pf, w = _prime_weights(f, constant_one(), x)
    log_p = np.log(pf)
    z = w / pf
    const = float(np.sum(1.0 / pf))

    spacing = min(resolution, 1.0 / (4.0 * math.log(x)))
    half = int(math.ceil(big_t / spacing))
    ts = np.linspace(-big_t, big_t, 2 * half + 1)
    vals = np.empty(len(ts))
    for lo in range(0, len(ts), 256):
        hi = min(lo + 256, len(ts))
        phases = np.exp(-1j * np.outer(ts[lo:hi], log_p))
        vals[lo:hi] = const - (phases @ z).real
    vmin = float(vals.min())
    tied = np.nonzero(vals <= vmin + 1e-14)[0]
    best = min(tied, key=lambda i: (abs(ts[i]), ts[i]))
    t0 = float(ts[best])

    d2 = _twist_objective(pf, z, log_p, const)
    width_target = 1e-3 / math.log(x)
    lo_t = max(t0 - spacing, -big_t)
    hi_t = min(t0 + spacing, big_t)
    t_ref, v_ref = _golden_min(d2, lo_t, hi_t, width_target)
    if v_ref < vals[best] - 1e-15:
        t_star, m_min = t_ref, v_ref
    else:
        t_star, m_min = t0, float(vals[best])
    return DistanceReport(
        f_label=f.label,
        g_label="n^{it}",
        x=x,
        d2=m_min,
        big_t=big_t,
        t_star=t_star,
        m_min=max(m_min, 0.0),
        grid_spacing=spacing,
        refine_width=width_target,
    )


def _golden_min(fun, lo, hi, width):
    """Golden-section minimization to the target interval width."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fun(c), fun(d)
    while b - a > width:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fun(d)
    t = (a + b) / 2.0
    return t, fun(t)


# ---------------------------------------------------------------------------
# bound evaluators

def halasz_rhs(f: MultiplicativeFunction, x: int, big_t: float) -> float:
    """(1 + M) e^{-M} x + x/T with M the minimized squared twist distance."""
    if not (1.0 <= big_t <= math.log(x)):
        raise PreconditionError("need 1 <= T <= log x")
    m = min_twist(f, x, big_t).m_min
    return (1.0 + m) * math.exp(-m) * x + x / big_t


def ht_rhs(f: MultiplicativeFunction, x: int) -> float:
    """x e^{-tau * dist(f,1;x)^2} for real-valued f."""
    p = primes_up_to(x)
    w = f.at_primes(p)
    if np.max(np.abs(w.imag)) > 1e-9:
        raise PreconditionError("real-valued prime values required")
    from .extremal import solve_tau

    d2 = distance(f, constant_one(), x).d2
    return x * math.exp(-solve_tau() * d2)


@dataclass(frozen=True)
class LogMeanReport:
    f_label: str
    x: int
    m_halasz: float               # min twist distance over |t| <= 1
    t_halasz: float
    t_logsum: float               # minimizer of the shifted-cosine functional
    t_used: float                 # |t| clamped to >= 1/log x in the twist branch
    bound_flat: float             # (1+M) e^{-M} log x + log log x
    bound_twist: float            # (1/|t|)(1+M+log(|t| log x)) e^{-M} + log log x
    bound_sharp: float            # (log x)(1+D2) e^{-lambda D2} + log log x
    d2_to_one: float


def logmean_rhs(f: MultiplicativeFunction, x: int) -> LogMeanReport:
    """All three logarithmic-mean bound shapes, with both twist parameters.

    `t_halasz` minimizes dist(f, n^{it}; x)^2 over [-1, 1]; `t_logsum`
    minimizes the shifted functional sum_p (2 - Re((1+f(p)) p^{-it}))/p over
    the same window.  The twist branch is evaluated at |t_logsum| clamped
    below by 1/log x (its stated regime).
    """
    if x < 3:
        raise DomainError("need x >= 3")
    from .extremal import solve_lambda

    lx = math.log(x)
    llx = math.log(lx)
    tw = min_twist(f, x, 1.0)
    m = tw.m_min

    # minimize sum (2 - Re((1 + f(p)) p^{-it})) / p over [-1, 1]
    pf, w = _prime_weights(f, constant_one(), x)
    log_p = np.log(pf)
    z = (1.0 + w) / pf
    const = float(np.sum(2.0 / pf))
    spacing = 1.0 / (4.0 * lx)
    half = int(math.ceil(1.0 / spacing))
    ts = np.linspace(-1.0, 1.0, 2 * half + 1)
    vals = np.empty(len(ts))
    for lo in range(0, len(ts), 256):
        hi = min(lo + 256, len(ts))
        vals[lo:hi] = const - (np.exp(-1j * np.outer(ts[lo:hi], log_p)) @ z).real
    tied = np.nonzero(vals <= vals.min() + 1e-14)[0]
    best = min(tied, key=lambda i: (abs(ts[i]), ts[i]))
    obj = _twist_objective(pf, z, log_p, const)
    t_log, _ = _golden_min(
        obj, max(ts[best] - spacing, -1.0), min(ts[best] + spacing, 1.0),
        1e-3 / lx,
    )
    if obj(float(ts[best])) <= obj(t_log) + 1e-15:
        t_log = float(ts[best])

    d2 = distance(f, constant_one(), x).d2
    t_used = max(abs(t_log), 1.0 / lx)
    bound_flat = (1.0 + m) * math.exp(-m) * lx + llx
    bound_twist = (1.0 / t_used) * (1.0 + m + math.log(t_used * lx)) * math.exp(-m) + llx
    bound_sharp = lx * (1.0 + d2) * math.exp(-solve_lambda() * d2) + llx
    return LogMeanReport(
        f_label=f.label,
        x=x,
        m_halasz=m,
        t_halasz=tw.t_star,
        t_logsum=t_log,
        t_used=t_used,
        bound_flat=bound_flat,
        bound_twist=bound_twist,
        bound_sharp=bound_sharp,
        d2_to_one=d2,
    )


# ---------------------------------------------------------------------------
# Dirichlet-series maximum (generalized bound input)

@dataclass(frozen=True)
class SeriesMaxReport:
    f_label: str
    x: int
    kappa: int
    m: float
    t_at_max: float
    max_modulus: float            # max |F(s)/s| over the scanned segment
    grid_spacing: float
    truncation: int


def genhalasz_m(
    f: MultiplicativeFunction, x: int, kappa: int
) -> SeriesMaxReport:
    """M with e^{-M} (log x)^kappa = max |F(s)/s| on s = 1 + 1/log x + it.

    F is the Dirichlet series truncated at n <= x of f (kappa = 1) or of the
    divisor-convolution 1*f (kappa = 2); the scan covers |t| <= (log x)^kappa
    at spacing 1/(8 log x) with golden-section sharpening at the peak.
    """
    if kappa not in (1, 2):
        raise PreconditionError("kappa must be 1 or 2")
    lx = math.log(x)
    coeffs = multiplicative_values(f, 1, x + 1)
    if kappa == 2:
        conv = np.zeros(x + 1, dtype=np.complex128)
        for d in range(1, x + 1):
            conv[d::d] += coeffs[d - 1]
        coeffs = conv[1:]
    n = np.arange(1, x + 1, dtype=np.float64)
    s0 = 1.0 + 1.0 / lx
    base = coeffs * n ** (-s0)
    log_n = np.log(n)

    def mod_at(t: float) -> float:
        val = np.sum(base * np.exp(-1j * t * log_n))
        return abs(val) / abs(complex(s0, t))

    spacing = 1.0 / (8.0 * lx)
    t_max = lx**kappa
    half = int(math.ceil(t_max / spacing))
    ts = np.linspace(-t_max, t_max, 2 * half + 1)
    best_v, best_t = -1.0, 0.0
    for lo in range(0, len(ts), 512):
        hi = min(lo + 512, len(ts))
        chunk = np.abs(np.exp(-1j * np.outer(ts[lo:hi], log_n)) @ base)
        chunk /= np.abs(s0 + 1j * ts[lo:hi])
        i = int(np.argmax(chunk))
        if chunk[i] > best_v + 1e-15:
            best_v, best_t = float(chunk[i]), float(ts[lo + i])
    t_ref, neg_ref = _golden_min(
        lambda t: -mod_at(t),
        max(best_t - spacing, -t_max),
        min(best_t + spacing, t_max),
        spacing / 100.0,
    )
    if -neg_ref > best_v:
        best_v, best_t = -neg_ref, t_ref
    m = kappa * math.log(lx) - math.log(best_v)
    return SeriesMaxReport(
        f_label=f.label, x=x, kappa=kappa, m=m, t_at_max=best_t,
        max_modulus=best_v, grid_spacing=spacing, truncation=x,
    )


# ---------------------------------------------------------------------------
# cosine-average constants

def gamma_k(k: int, mode: str = "closed_form", fourier_cutoff: int = 10**6) -> float:
    """The average (1/k) sum_{a<k} |cos(pi a / k)|, three ways.

    closed_form: cosec(pi/2k)/k for odd k, cot(pi/2k)/k for even k.
    fourier_partial: (2/pi)(1 - 2 sum_{r multiple of k, r <= cutoff} (-1)^r/(4r^2-1)).
    direct: the defining average.
    """
    if k < 1:
        raise DomainError("k must be >= 1")
    if mode == "closed_form":
        half = math.pi / (2 * k)
        return 1.0 / (k * math.sin(half)) if k % 2 else 1.0 / (k * math.tan(half))
    if mode == "fourier_partial":
        r = np.arange(k, fourier_cutoff + 1, k, dtype=np.float64)
        signs = np.where((np.arange(k, fourier_cutoff + 1, k) % 2) == 0, 1.0, -1.0)
        return float((2 / math.pi) * (1.0 - 2.0 * np.sum(signs / (4 * r * r - 1))))
    if mode == "direct":
        a = np.arange(k)
        return float(np.abs(np.cos(math.pi * a / k)).sum() / k)
    raise PreconditionError(f"unknown mode {mode!r}")
