"""The extremal multiplicative function and its logarithmic-mean asymptotic.

Centerpiece objects:

  * the constant lambda solving  integral_0^1 |e(u) - lambda| du = 2 - lambda,
    and the companion constant tau = -cos(theta) with sin t - t cos t = pi/2;
  * the unimodular 1-periodic symbol  g(u) = (e(u) - lambda)/|e(u) - lambda|
    with real Fourier coefficients g_n computed two independent ways
    (adaptive quadrature, and a binomial h-series);
  * the multiplicative function with  f(p) = g(t log p / 2pi)  extended to
    prime powers by the averaging recursion, its direct logarithmic sums,
    and the main-term decomposition
        sum over peak indices of  X^{i l t}/(i l' t) * C_l (it log X)^{gamma_l - 1} / Gamma(gamma_l)
    with C_l a truncated product of integer powers.

Branch convention: all complex powers use the principal logarithm, except
that inside C_l the negative integers take argument -pi (not +pi).  The
shifted-zeta product this constant summarizes is a product of values just
below/above the 1-line whose phases accumulate on that branch; with the
principal choice the product identity picks up a spurious factor
exp(2 pi i * sum of tail coefficients) and fails numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .core import complex_gamma, zeta_near_one
from .errors import DomainError, PreconditionError, UnitDiscError
from .pretentious import (
    DistanceReport,
    MultiplicativeFunction,
    constant_one,
    distance,
    multiplicative_values,
)

FOURIER_INDEX_CAP = 64        # public table range
_INTERNAL_TABLE = 200         # series table used for C_l tails
LOG_SUM_CAP = 10**8
_BLOCK = 1 << 19


# ---------------------------------------------------------------------------
# the two solved constants

@lru_cache(maxsize=8)
def _circle_mean_distance(lam: float) -> float:
    """integral_0^1 |e(u) - lam| du by adaptive quadrature."""
    val, _ = quad(
        lambda u: math.sqrt(1.0 - 2.0 * lam * math.cos(2 * math.pi * u) + lam * lam),
        0.0, 1.0, epsabs=1e-13, epsrel=1e-13, limit=200,
    )
    return val


@lru_cache(maxsize=1)
def solve_lambda() -> float:
    """Root in (0, 1) of  integral |e(u) - lam| du - (2 - lam)  by bisection."""
    lo, hi = 0.0, 1.0
    # integral(0) = 1 < 2 and integral(1) = 4/pi > 1: the bracket is monotone
    while hi - lo > 1e-13:
        mid = 0.5 * (lo + hi)
        if _circle_mean_distance(round(mid, 15)) - (2.0 - mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@lru_cache(maxsize=1)
def solve_tau() -> float:
    """tau = -cos(theta) with theta in (0, pi) solving sin t - t cos t = pi/2."""
    lo, hi = 1e-12, math.pi - 1e-12
    while hi - lo > 1e-13:
        mid = 0.5 * (lo + hi)
        if math.sin(mid) - mid * math.cos(mid) - math.pi / 2 < 0.0:
            lo = mid
        else:
            hi = mid
    return -math.cos(0.5 * (lo + hi))


# ---------------------------------------------------------------------------
# the periodic symbol and its Fourier coefficients

@dataclass(frozen=True)
class PeriodicSymbol:
    """A 1-periodic unimodular function with g(0) = 1."""

    label: str
    evaluate: Callable[[np.ndarray], np.ndarray]


@lru_cache(maxsize=1)
def circle_symbol() -> PeriodicSymbol:
    """The specific symbol (e(u) - lambda)/|e(u) - lambda|."""
    lam = solve_lambda()

    def evaluate(u: np.ndarray) -> np.ndarray:
        z = np.exp(2j * np.pi * np.asarray(u, dtype=np.float64))
        return (z - lam) / np.abs(z - lam)

    return PeriodicSymbol(label="circle-shift", evaluate=evaluate)


def fourier_quadrature(n: int, symbol: PeriodicSymbol | None = None) -> complex:
    """g_n = integral_0^1 g(u) e(-nu) du by adaptive quadrature to ~1e-10."""
    if abs(n) > FOURIER_INDEX_CAP:
        raise PreconditionError(f"|n| capped at {FOURIER_INDEX_CAP}")
    sym = symbol or circle_symbol()

    def re(u: float) -> float:
        return float((sym.evaluate(np.array([u]))[0]
                      * np.exp(-2j * np.pi * n * u)).real)

    def im(u: float) -> float:
        return float((sym.evaluate(np.array([u]))[0]
                      * np.exp(-2j * np.pi * n * u)).imag)

    vr, _ = quad(re, 0.0, 1.0, epsabs=1e-12, epsrel=1e-12, limit=800)
    vi, _ = quad(im, 0.0, 1.0, epsabs=1e-12, epsrel=1e-12, limit=800)
    return complex(vr, vi)


def _h_term_ratio(n: int, l: int, q2: float) -> float:
    """Ratio of consecutive h-series terms (l -> l+1) at index n."""
    m = n + 2 * l
    j = n + l
    r1 = (m + 1) * (m + 2) / ((j + 1) * (m + 1 - j))
    r2 = ((2 * m + 1) * (2 * m + 2) * (2 * m + 3) * (2 * m + 4)
          / (((m + 1) ** 2) * ((m + 2) ** 2)))
    return r1 * r2 * q2


@lru_cache(maxsize=1024)
def h_series_value(n: int) -> float:
    """h_n = sum_l binom(n+2l, n+l) binom(2(n+2l), n+2l) (lam/(4(1+lam^2)))^{n+2l}.

    Terms first grow, pass a peak near l ~ n, then decay geometrically with
    limiting ratio (2 lam / (1+lam^2))^2 < 1; truncation waits for the peak
    and stops once a term falls below 1e-16.
    """
    n = abs(n)
    lam = solve_lambda()
    q = lam / (4.0 * (1.0 + lam * lam))
    if n <= 300:
        term = math.comb(2 * n, n) * q**n
    else:
        term = math.exp(
            math.lgamma(2 * n + 1) - 2 * math.lgamma(n + 1) + n * math.log(q)
        )
    total = term
    q2 = q * q
    l = 0
    while True:
        ratio = _h_term_ratio(n, l, q2)
        term *= ratio
        total += term
        l += 1
        if ratio < 1.0 and abs(term) < 1e-16:
            return total
        if l > 10**6:
            raise AssertionError("h-series failed to converge")


def fourier_series(n: int) -> float:
    """g_n for the specific symbol via the parity-split h-decomposition:

        sqrt(1+lam^2) g_n = h_{n-1} - lam h_n   (n >= 1)
                          = h_{|n|+1} - lam h_{|n|}  (n <= 0),

    using h_m = h_{-m}.
    """
    if abs(n) > FOURIER_INDEX_CAP:
        raise PreconditionError(f"|n| capped at {FOURIER_INDEX_CAP}")
    return _series_value_unchecked(n)


def _series_value_unchecked(n: int) -> float:
    lam = solve_lambda()
    root = math.sqrt(1.0 + lam * lam)
    if n >= 1:
        return (h_series_value(n - 1) - lam * h_series_value(n)) / root
    return (h_series_value(abs(n) + 1) - lam * h_series_value(abs(n))) / root


@lru_cache(maxsize=4)
def fourier_table(n_max: int = 40, method: str = "series") -> dict[int, float]:
    """Two-sided table {n: g_n} for the specific symbol, with a method tag."""
    if method == "series":
        if n_max > _INTERNAL_TABLE:
            raise PreconditionError(f"series table capped at {_INTERNAL_TABLE}")
        return {n: _series_value_unchecked(n) for n in range(-n_max, n_max + 1)}
    if method == "quadrature":
        if n_max > FOURIER_INDEX_CAP:
            raise PreconditionError(f"quadrature table capped at {FOURIER_INDEX_CAP}")
        return {n: fourier_quadrature(n).real for n in range(-n_max, n_max + 1)}
    raise PreconditionError(f"unknown method {method!r}")


@dataclass(frozen=True)
class ExtremalConstants:
    lam: float
    tau: float
    c: float                      # 2 lam / (1 + lam^2), the h-series decay base
    h: dict[int, float]
    spectral_gap: float           # max Re gamma - second largest
    lambda_residual: float        # defining-equation residual at the root
    tau_residual: float


@lru_cache(maxsize=1)
def constants() -> ExtremalConstants:
    lam = solve_lambda()
    tau = solve_tau()
    theta = math.acos(-tau)
    table = fourier_table(40, "series")
    gam = {n: (v + 1.0 if n == 0 else v) for n, v in table.items()}
    mu = max(gam.values())
    second = max(v for n, v in gam.items() if abs(v - mu) > 1e-12)
    return ExtremalConstants(
        lam=lam,
        tau=tau,
        c=2 * lam / (1 + lam * lam),
        h={n: h_series_value(n) for n in range(0, 41)},
        spectral_gap=mu - second,
        lambda_residual=_circle_mean_distance(round(lam, 15)) - (2.0 - lam),
        tau_residual=math.sin(theta) - theta * math.cos(theta) - math.pi / 2,
    )


# ---------------------------------------------------------------------------
# the coefficient lemma, clause by clause

@dataclass(frozen=True)
class FourierLemmaReport:
    realness_max_imag: float          # (a)
    decay_ok: bool                    # (b) |g_n| <= 0.99^|n| and the explicit bound
    asymmetry_ok: bool                # (c) g_{-n} < g_n for 1 <= n <= n_max
    gap_ok: bool                      # (d) g_n <= g_1 - 1/20 off n = 0, 1
    top_ok: bool                      # (e) g_0 < g_1 - 1
    identity_residual: float          # lam (g_0 - 1) - (g_1 - 2)
    n_max: int
    failures: tuple[str, ...]

    @property
    def all_ok(self) -> bool:
        return not self.failures


def lemma_fourier_checks(n_max: int = 40) -> FourierLemmaReport:
    """Verify the coefficient properties of the specific symbol.

    (a) realness of every g_n (quadrature route, imaginary part <= 1e-10);
    (b) |g_n| <= 0.99^{|n|}, plus the explicit decay envelope on 2<=|n|<=20;
    (c) g_{-n} < g_n strictly for 1 <= n <= n_max;
    (d) g_n <= g_1 - 1/20 for all n != 0, 1 in range;
    (e) g_0 < g_1 - 1; and the defining identity lam (g_0 - 1) = g_1 - 2.
    """
    lam = solve_lambda()
    quad_table = {
        n: fourier_quadrature(n) for n in range(-n_max, n_max + 1)
    }
    series_table = fourier_table(n_max, "series")
    failures = []

    max_imag = max(abs(v.imag) for v in quad_table.values())
    if max_imag > 1e-10:
        failures.append(f"(a) imaginary part {max_imag:.2e}")

    c = 2 * lam / (1 + lam * lam)
    decay_ok = True
    for n, v in series_table.items():
        if abs(v) > 0.99 ** abs(n) + 1e-12:
            decay_ok = False
            failures.append(f"(b) |g_{n}| exceeds 0.99^|n|")
            break
    if decay_ok:
        amp = math.e ** (1 / 6) * math.sqrt(2.0) / (
            (1 - c * c) * math.pi * math.sqrt(1 + lam * lam)
        )
        for n in range(2, 21):
            envelope = (
                amp
                * (1 - (2 * n - 1) / (2 * n) * lam * lam / (1 + lam * lam))
                * c ** (n - 1) / (n - 1)
            )
            if abs(series_table[n]) > envelope + 1e-12:
                decay_ok = False
                failures.append(f"(b) explicit envelope fails at n={n}")
                break

    asymmetry_ok = all(
        series_table[-n] < series_table[n] for n in range(1, n_max + 1)
    )
    if not asymmetry_ok:
        failures.append("(c) g_{-n} < g_n fails")

    g1 = series_table[1]
    gap_ok = all(
        v <= g1 - 1.0 / 20 + 1e-12
        for n, v in series_table.items()
        if n not in (0, 1)
    )
    if not gap_ok:
        failures.append("(d) g_n <= g_1 - 1/20 fails")

    top_ok = series_table[0] < g1 - 1.0
    if not top_ok:
        failures.append("(e) g_0 < g_1 - 1 fails")

    identity = lam * (series_table[0] - 1.0) - (g1 - 2.0)
    if abs(identity) > 1e-8:
        failures.append(f"identity residual {identity:.2e}")

    return FourierLemmaReport(
        realness_max_imag=max_imag,
        decay_ok=decay_ok,
        asymmetry_ok=asymmetry_ok,
        gap_ok=gap_ok,
        top_ok=top_ok,
        identity_residual=identity,
        n_max=n_max,
        failures=tuple(failures),
    )


# ---------------------------------------------------------------------------
# the extremal multiplicative function

def build_ft(t: float, x_cap: int, symbol: PeriodicSymbol | None = None
             ) -> MultiplicativeFunction:
    """f(p) = g(t log p / 2 pi), extended to prime powers by the averaging
    recursion  f(p^m) = (1/m) sum_{j<=m} f(p^{m-j}) g(t log p^j / 2 pi).

    Values are memoized; every produced value is checked against the unit
    disc (the recursion guarantees |f| <= 1 in exact arithmetic).
    """
    if not (0.0 < abs(t) <= 1.0):
        raise PreconditionError("need 0 < |t| <= 1")
    if x_cap > LOG_SUM_CAP:
        raise PreconditionError(f"cap exceeds {LOG_SUM_CAP}")
    sym = symbol or circle_symbol()
    memo: dict[tuple[int, int], complex] = {}

    def g_at(logarg: float) -> complex:
        return complex(sym.evaluate(np.array([t * logarg / (2 * math.pi)]))[0])

    def prime_power(p: int, k: int) -> complex:
        key = (p, k)
        if key in memo:
            return memo[key]
        logp = math.log(p)
        if k == 1:
            val = g_at(logp)
        else:
            acc = 0.0 + 0.0j
            for j in range(1, k + 1):
                prev = prime_power(p, k - j) if k - j >= 1 else 1.0 + 0.0j
                acc += prev * g_at(j * logp)
            val = acc / k
        if abs(val) > 1.0 + 1e-12:
            raise UnitDiscError(f"f_t({p}^{k}) left the unit disc: {abs(val)}")
        memo[key] = val
        return val

    def prime_vec(p: np.ndarray) -> np.ndarray:
        return sym.evaluate(t * np.log(p.astype(np.float64)) / (2 * math.pi))

    return MultiplicativeFunction(
        label=f"f[t={t:g}]",
        prime_power=prime_power,
        completely_multiplicative=False,
        prime_vec=prime_vec,
    )


def log_sum_direct(
    f: MultiplicativeFunction,
    x: int,
    checkpoints: tuple[int, ...] | None = None,
) -> complex | list[complex]:
    """Exact sum of f(n)/n for n <= x, streamed in fixed-size blocks.

    With `checkpoints` (ascending, last == x) the running value at each
    checkpoint is returned; the reduction is block-ordered either way.
    """
    if x < 1:
        raise DomainError("need x >= 1")
    if x > LOG_SUM_CAP:
        raise PreconditionError(f"direct log sums capped at {LOG_SUM_CAP}")
    marks = list(checkpoints) if checkpoints is not None else [x]
    if marks != sorted(marks) or marks[-1] != x:
        raise PreconditionError("checkpoints must ascend and end at x")
    out: list[complex] = []
    total = 0.0 + 0.0j
    next_mark = 0
    for lo in range(1, x + 1, _BLOCK):
        hi = min(lo + _BLOCK, x + 1)
        vals = multiplicative_values(f, lo, hi)
        n = np.arange(lo, hi, dtype=np.float64)
        while next_mark < len(marks) and marks[next_mark] < hi:
            m = marks[next_mark]
            total_at = total + complex(np.sum(vals[: m - lo + 1] / n[: m - lo + 1]))
            out.append(total_at)
            next_mark += 1
        total += complex(np.sum(vals / n))
    while next_mark < len(marks):
        out.append(total)
        next_mark += 1
    return out if checkpoints is not None else out[-1]


# ---------------------------------------------------------------------------
# the main-term decomposition

@dataclass(frozen=True)
class PeakTerm:
    index: int                    # l in the peak set
    gamma: float                  # the exponent gamma_l
    c_const: complex              # truncated product of integer powers C_l
    value: complex                # X^{ilt}/(il't) C_l (it log X)^{gamma-1}/Gamma(gamma)


@dataclass(frozen=True)
class AsymptoticReport:
    t: float
    x: int
    peak_set: tuple[int, ...]     # indices with maximal Re gamma
    spectral_gap: float
    terms: tuple[PeakTerm, ...]
    main_total: complex
    direct_sum: complex | None
    ratio: complex | None         # direct / main
    truncation_k: int
    tail_bound: float             # certified bound on the dropped C_l exponent tail
    regime_warning: str | None


def _signed_log_table(k_cut: int, table: dict[int, float], ell: int) -> complex:
    """log C_l = -sum_{0<|k|<=K} g_{l-k} Log k, with arg(k) = -pi for k < 0."""
    acc = 0.0 + 0.0j
    for k in range(1, k_cut + 1):
        gp = table.get(ell - k, 0.0)
        gm = table.get(ell + k, 0.0)
        acc -= gp * math.log(k)
        acc -= gm * complex(math.log(k), -math.pi)
    return acc


def _c_tail_bound(k_cut: int, table: dict[int, float], ell: int) -> float:
    """Bound on the dropped exponent tail sum_{|k|>K} |g_{l-k}| log|k|.

    Uses the computed table out to its edge plus a geometric extrapolation
    with the observed terminal decay ratio (< lambda + eps < 1).
    """
    edge = max(abs(n) for n in table)
    total = 0.0
    for k in range(k_cut + 1, edge - abs(ell)):
        total += abs(table.get(ell - k, 0.0)) * math.log(k)
        total += abs(table.get(ell + k, 0.0)) * math.log(k)
    lam = solve_lambda()
    last = max(abs(table.get(-(edge - abs(ell) - 1), 0.0)),
               abs(table.get(edge - abs(ell) - 1, 0.0)))
    total += 2.0 * last * math.log(edge) * lam / (1.0 - lam)
    return total


def peak_indices(table: dict[int, float]) -> tuple[tuple[int, ...], float]:
    """Indices maximizing Re gamma (gamma_0 = g_0 + 1, gamma_n = g_n), and
    the gap down to the next level."""
    gam = {n: (v + 1.0 if n == 0 else v) for n, v in table.items()}
    mu = max(gam.values())
    peaks = tuple(sorted(n for n, v in gam.items() if v >= mu - 1e-9))
    rest = [v for n, v in gam.items() if n not in peaks]
    gap = mu - max(rest) if rest else math.inf
    return peaks, gap


def main_term(
    t: float,
    x: int,
    k_cut: int = 128,
    compute_direct: bool = True,
    symbol: PeriodicSymbol | None = None,
) -> AsymptoticReport:
    """Evaluate the main-term decomposition at (t, X), truncating C_l at K.

    The default K certifies an exponent-tail bound below 1e-8 (the
    coefficients decay like lambda^|n|, so K in the low hundreds suffices;
    K = 40 would leave a ~3e-4 tail).  The direct sum is attached for the
    ratio comparison unless disabled.
    """
    if k_cut < 20:
        raise PreconditionError("need K >= 20")
    if symbol is None:
        table = fourier_table(_INTERNAL_TABLE, "series")
    else:
        table = {
            n: fourier_quadrature(n, symbol).real
            for n in range(-FOURIER_INDEX_CAP, FOURIER_INDEX_CAP + 1)
        }
    peaks, gap = peak_indices(table)
    lx = math.log(x)
    warn = None
    if abs(t) * lx < 10.0:
        warn = f"|t| log X = {abs(t) * lx:.2f} < 10: outside the theorem regime"
    elif not (3.0 / math.log(lx) <= abs(t) <= 0.3):
        warn = (
            f"t = {t:g} outside the operational window "
            f"[{3.0 / math.log(lx):.3f}, 0.3]"
        )

    terms = []
    total = 0.0 + 0.0j
    tail = 0.0
    for ell in peaks:
        gamma_l = table[ell] + (1.0 if ell == 0 else 0.0)
        log_c = _signed_log_table(k_cut, table, ell)
        c_const = complex(np.exp(log_c))
        tail = max(tail, _c_tail_bound(k_cut, table, ell))
        ell_prime = 1 if ell == 0 else ell
        power = np.exp((gamma_l - 1.0) * np.log(1j * t * lx))  # principal branch
        value = (
            np.exp(1j * ell * t * lx) / (1j * ell_prime * t)
            * c_const * power / complex_gamma(gamma_l)
        )
        value = complex(value)
        terms.append(PeakTerm(index=ell, gamma=gamma_l, c_const=c_const, value=value))
        total += value

    direct = None
    ratio = None
    if compute_direct:
        f = build_ft(t, x, symbol)
        direct = log_sum_direct(f, x)
        ratio = direct / total
    return AsymptoticReport(
        t=t,
        x=x,
        peak_set=peaks,
        spectral_gap=gap,
        terms=tuple(terms),
        main_total=total,
        direct_sum=direct,
        ratio=ratio,
        truncation_k=k_cut,
        tail_bound=tail,
        regime_warning=warn,
    )


# ---------------------------------------------------------------------------
# the shifted-zeta product identity

def zeta_shift_product(ell: int, t: float, n_cut: int) -> complex:
    """prod over |k| <= 2 n_cut, k != ell, of zeta(1 - i (k - ell) t)^{g_k}.

    Each factor is exp(g_k Log zeta(...)) with the principal logarithm; the
    k = ell factor (the pole) is excluded by construction.
    """
    if t == 0.0:
        raise DomainError("t must be nonzero")
    table = fourier_table(_INTERNAL_TABLE, "series")
    acc = 0.0 + 0.0j
    for k in range(-2 * n_cut, 2 * n_cut + 1):
        if k == ell:
            continue
        gk = table.get(k, 0.0)
        if abs(gk) < 1e-18:
            continue
        z = zeta_near_one(complex(1.0, -(k - ell) * t), precision=1e-12)
        acc += gk * np.log(z)
    return complex(np.exp(acc))


def c_power_reference(ell: int, t: float, k_cut: int = 128) -> complex:
    """C_l (it)^{g_l - 1}: the small-t limit the shifted product approaches."""
    table = fourier_table(_INTERNAL_TABLE, "series")
    g_l = table[ell]
    c_const = complex(np.exp(_signed_log_table(k_cut, table, ell)))
    return complex(c_const * np.exp((g_l - 1.0) * np.log(1j * t)))


# ---------------------------------------------------------------------------
# sharpness of the logarithmic-mean exponent

@dataclass(frozen=True)
class SharpnessReport:
    t: float
    x: int
    log_sum_abs: float            # |sum f(n)/n| by direct evaluation
    sharp_rhs: float              # (log X) e^{-lambda dist(f,1;X)^2}
    ratio: float                  # log_sum_abs / sharp_rhs
    d2_full: float                # dist(f,1;X)^2
    d2_small: float               # dist(f,1;y_t)^2, y_t = e^{1/t}
    y_t: float
    identity_residual: float      # lam (g_0 - 1) - (g_1 - 2)
    regime_warning: str | None


def sharpness_report(t: float, x: int) -> SharpnessReport:
    """Compare the direct logarithmic sum of f_t against its predicted size."""
    if t <= 0:
        raise PreconditionError("t must be positive")
    lam = solve_lambda()
    f = build_ft(t, x)
    direct = abs(log_sum_direct(f, x))
    d2_full = distance(f, constant_one(), x).d2
    rhs = math.log(x) * math.exp(-lam * d2_full)
    y_t = math.exp(1.0 / t)
    d2_small = distance(f, constant_one(), int(min(y_t, x))).d2
    table = fourier_table(2, "series")
    identity = lam * (table[0] - 1.0) - (table[1] - 2.0)
    lx = math.log(x)
    warn = None
    if not (3.0 / math.log(lx) <= t <= 0.3):
        warn = f"t = {t:g} outside the operational window"
    return SharpnessReport(
        t=t,
        x=x,
        log_sum_abs=direct,
        sharp_rhs=rhs,
        ratio=direct / rhs,
        d2_full=d2_full,
        d2_small=d2_small,
        y_t=y_t,
        identity_residual=identity,
        regime_warning=warn,
    )


# ---------------------------------------------------------------------------
# convolution-inverse bound for prime-power perturbations

@dataclass(frozen=True)
class ConvInverseReport:
    t: float
    p_max: int
    k_max: int
    max_h_at_primes: float        # should vanish: f agrees with f_t at primes
    bound_ok: bool                # |h(p^k)| <= 2^{k-1} everywhere checked
    worst_excess: float           # max over (p,k) of |h(p^k)| - 2^{k-1}
    euler_margin_ok: bool         # |sum_k h(p^k) p^{-k}| >= 1 - 2/(p(p-2)), p >= 3
    h_series_value: complex       # Euler-product partial of H(1 + i ell t)
    ell: int


def conv_inverse_check(
    f: MultiplicativeFunction,
    t: float,
    p_max: int = 50,
    k_max: int = 8,
    ell: int = 1,
) -> ConvInverseReport:
    """Solve f = f_t * h on prime powers and check the growth bounds.

    h(p) must vanish (f agrees with f_t at primes); the triangle recursion
    gives h(p^k) = f(p^k) - sum_{j>=1} f_t(p^j) h(p^{k-j}), which stays
    within |h(p^k)| <= 2^{k-1}.
    """
    ft = build_ft(t, max(p_max**2, 4))
    max_h_prime = 0.0
    worst_excess = -math.inf
    euler_ok = True
    h_prod = 1.0 + 0.0j
    from .core import primes_up_to

    for p in primes_up_to(p_max):
        p = int(p)
        h = [1.0 + 0.0j]
        for k in range(1, k_max + 1):
            acc = f.prime_power(p, k)
            for j in range(1, k + 1):
                acc -= ft.prime_power(p, j) * (h[k - j] if k - j >= 0 else 0.0)
            h.append(complex(acc))
        max_h_prime = max(max_h_prime, abs(h[1]))
        for k in range(2, k_max + 1):
            worst_excess = max(worst_excess, abs(h[k]) - 2.0 ** (k - 1))
        factor = sum(h[k] * p ** (-k * complex(1.0, ell * t)) for k in range(k_max + 1))
        h_prod *= factor
        if p >= 3:
            plain = abs(sum(h[k] * float(p) ** (-k) for k in range(k_max + 1)))
            if plain < 1.0 - 2.0 / (p * (p - 2)) - 1e-9:
                euler_ok = False
    return ConvInverseReport(
        t=t,
        p_max=p_max,
        k_max=k_max,
        max_h_at_primes=max_h_prime,
        bound_ok=worst_excess <= 1e-9,
        worst_excess=worst_excess,
        euler_margin_ok=euler_ok,
        h_series_value=complex(h_prod),
        ell=ell,
    )
