"""Finite character-sum functionals.

Partial sums S(chi, N), their maximum M(chi) over a period, twisted harmonic
partial sums, truncated L-values with a rigorous tail bound, truncated Euler
products, the Fourier expansion of S(chi, alpha q) for primitive characters,
rational-approximation arc classification, and the quadratic-non-residue
lower-bound chain.

Scans are direct and deterministic: prefix sums are evaluated in blocks and
combined left to right, so results do not depend on how work is scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .characters import (
    DirichletCharacter,
    build_group,
    conductor_and_primitive,
    is_primitive,
    quadratic_character,
)
from .core import primes_up_to
from .errors import CapacityError, DomainError, PreconditionError

SCAN_CAP = 10**7
_BLOCK = 1 << 18


# ---------------------------------------------------------------------------
# plain and twisted partial sums

def partial_sum(chi: DirichletCharacter, n_max: int) -> complex:
    """S(chi, N): the direct sum of chi(n) over 1 <= n <= N."""
    if n_max < 0:
        raise DomainError("N must be >= 0")
    total = 0.0 + 0.0j
    for lo in range(1, n_max + 1, _BLOCK):
        hi = min(lo + _BLOCK, n_max + 1)
        total += chi.values(np.arange(lo, hi)).sum()
    return complex(total)


def max_partial(chi: DirichletCharacter) -> tuple[float, int]:
    """M(chi) = max over 1 <= N <= q of |S(chi, N)|, with the least argmax."""
    q = chi.modulus
    if q > SCAN_CAP:
        raise CapacityError(f"direct scan capped at modulus {SCAN_CAP}")
    best = -1.0
    best_n = 1
    running = 0.0 + 0.0j
    for lo in range(1, q + 1, _BLOCK):
        hi = min(lo + _BLOCK, q + 1)
        prefix = running + np.cumsum(chi.values(np.arange(lo, hi)))
        mags = np.abs(prefix)
        i = int(np.argmax(mags))
        # argmax inside the block keeps the first attaining index; across
        # blocks strict inequality keeps the earliest one
        if mags[i] > best + 1e-15:
            best = float(mags[i])
            best_n = lo + i
        running = complex(prefix[-1])
    return best, best_n


def harmonic_partial(
    chi: DirichletCharacter, n_max: int, t: float = 0.0, coprime_to: int = 1
) -> complex:
    """Sum of chi(n) n^{-1-it} over n <= N with gcd(n, coprime_to) = 1."""
    if n_max < 1:
        raise DomainError("N must be >= 1")
    total = 0.0 + 0.0j
    for lo in range(1, n_max + 1, _BLOCK):
        hi = min(lo + _BLOCK, n_max + 1)
        n = np.arange(lo, hi)
        vals = chi.values(n)
        if coprime_to > 1:
            vals = np.where(np.gcd(n, coprime_to) == 1, vals, 0.0)
        nf = n.astype(np.float64)
        weights = 1.0 / nf if t == 0.0 else np.exp(-(1.0 + 1j * t) * np.log(nf))
        total += np.sum(vals * weights)
    return complex(total)


@dataclass(frozen=True)
class SumSeries:
    """A checkpointed partial-sum walk for export and spot verification."""

    label: str
    twist: float
    weight: str                      # "flat" | "harmonic"
    checkpoints: np.ndarray
    values: np.ndarray               # prefix value at each checkpoint
    argmax: int
    max_modulus: float


def sum_series(
    chi: DirichletCharacter,
    n_max: int,
    twist: float = 0.0,
    weight: str = "flat",
    checkpoint_every: int = 1,
) -> SumSeries:
    """Walk the partial sums up to n_max, recording every k-th prefix."""
    from .characters import format_label

    if weight not in ("flat", "harmonic"):
        raise PreconditionError("weight must be 'flat' or 'harmonic'")
    if n_max > SCAN_CAP:
        raise CapacityError(f"series walk capped at {SCAN_CAP}")
    n = np.arange(1, n_max + 1)
    vals = chi.values(n)
    nf = n.astype(np.float64)
    if weight == "harmonic":
        vals = vals * np.exp(-(1.0 + 1j * twist) * np.log(nf))
    elif twist != 0.0:
        vals = vals * np.exp(-1j * twist * np.log(nf))
    prefix = np.cumsum(vals)
    mags = np.abs(prefix)
    arg = int(np.argmax(mags)) + 1
    checkpoints = np.arange(checkpoint_every, n_max + 1, checkpoint_every)
    return SumSeries(
        label=format_label(chi),
        twist=twist,
        weight=weight,
        checkpoints=checkpoints,
        values=prefix[checkpoints - 1],
        argmax=arg,
        max_modulus=float(mags[arg - 1]),
    )


# ---------------------------------------------------------------------------
# product characters across moduli (pointwise values)

def product_values(
    chi: DirichletCharacter, xi: DirichletCharacter, n_max: int
) -> np.ndarray:
    """(chi * conj(xi))(n) for n = 1..n_max, a character mod lcm(q, ell)."""
    n = np.arange(1, n_max + 1)
    return chi.values(n) * np.conj(xi.values(n))


def find_nq(
    chi: DirichletCharacter, xi: DirichletCharacter
) -> tuple[int, float]:
    """Argmax over 1 <= N <= q of |sum_{n<=N} (chi conj(xi))(n)/n|."""
    q = chi.modulus
    if q > SCAN_CAP:
        raise CapacityError(f"direct scan capped at modulus {SCAN_CAP}")
    best, best_n = -1.0, 1
    running = 0.0 + 0.0j
    for lo in range(1, q + 1, _BLOCK):
        hi = min(lo + _BLOCK, q + 1)
        n = np.arange(lo, hi)
        vals = chi.values(n) * np.conj(xi.values(n))
        prefix = running + np.cumsum(vals / n.astype(np.float64))
        mags = np.abs(prefix)
        i = int(np.argmax(mags))
        if mags[i] > best + 1e-15:
            best, best_n = float(mags[i]), lo + i
        running = complex(prefix[-1])
    return best_n, best


# ---------------------------------------------------------------------------
# truncated L-values

def l_truncated(
    chi: DirichletCharacter, t: float, n_trunc: int
) -> tuple[complex, float]:
    """Truncated L(1+it, chi) plus the rigorous partial-summation tail bound
    (2 + |t|) M(chi) / N."""
    if n_trunc < 1:
        raise DomainError("truncation point must be >= 1")
    value = harmonic_partial(chi, n_trunc, t=t)
    m_chi, _ = max_partial(chi)
    bound = (2.0 + abs(t)) * m_chi / n_trunc
    return value, bound


def l_euler_proxy(chi: DirichletCharacter, t: float, cutoff: int) -> complex:
    """Truncated Euler product over p <= cutoff of (1 - chi(p) p^{-1-it})^{-1}."""
    primes = primes_up_to(cutoff)
    vals = chi.values(primes)
    pf = primes.astype(np.float64)
    factors = 1.0 - vals * np.exp(-(1.0 + 1j * t) * np.log(pf))
    if np.any(np.abs(factors) < 1e-12):
        raise DomainError("degenerate Euler factor; |1 - chi(p)/p^{1+it}| ~ 0")
    return complex(np.exp(-np.sum(np.log(factors))))


# ---------------------------------------------------------------------------
# Fourier expansion of S(chi, alpha q)

def polya_rhs(
    chi: DirichletCharacter, alpha: float, cutoff: int | None = None
) -> complex:
    """Main term of the Fourier expansion of the partial sum at alpha q:

        (g(chi) / 2 pi i) * sum_{1 <= |n| <= cutoff} conj(chi)(n)/n (1 - e(-n alpha))

    Requires chi primitive (the identity is stated for primitive characters).
    """
    if not is_primitive(chi):
        raise PreconditionError("expansion requires a primitive character")
    from .characters import gauss_sum

    q = chi.modulus
    cutoff = q if cutoff is None else cutoff
    n = np.arange(1, cutoff + 1)
    cvals = np.conj(chi.values(n))
    phase = np.exp(-2j * np.pi * alpha * n)
    pos = cvals / n * (1.0 - phase)
    parity = chi.parity
    # conj(chi)(-n) = parity * conj(chi)(n); the -n term weight is -1/n
    neg = -parity * cvals / n * (1.0 - np.conj(phase))
    return complex(gauss_sum(chi) / (2j * np.pi) * (np.sum(pos) + np.sum(neg)))


# ---------------------------------------------------------------------------
# arc classification

@dataclass(frozen=True)
class ArcClassification:
    alpha: float
    delta: float
    q: int
    numerator: int            # b
    denominator: int          # m, with gcd(b, m) = 1 and m <= R_q
    arc: str                  # "major" | "minor"
    n_alpha: float            # min(q, 1/|m alpha - b|)
    big_r: float              # R_q
    small_r: float            # r_q


def arc_parameters(q: int, delta: float) -> tuple[float, float]:
    """(R_q, r_q) for the rational-approximation dichotomy."""
    lq = math.log(q)
    llq = math.log(lq)
    big_r = math.exp(lq**delta / llq)
    small_r = lq ** (2 - 2 * delta) * llq**4
    return big_r, small_r


def classify_arc(alpha: float, q: int, delta: float) -> ArcClassification:
    """Continued-fraction realization of the Dirichlet approximation step.

    Picks the first convergent b/m with m <= R_q and |alpha - b/m| < 1/(m R_q)
    (ties therefore break toward the smallest denominator), classifies the arc
    by m <= r_q, and reports N(alpha) = min(q, 1/|m alpha - b|).
    """
    if not (2 / math.pi < delta < 1):
        raise PreconditionError("delta must lie in (2/pi, 1)")
    if q < 16:
        raise PreconditionError("q >= 16 required for sane arc parameters")
    alpha = alpha % 1.0
    big_r, small_r = arc_parameters(q, delta)
    b, m = _first_good_convergent(alpha, big_r)
    err = abs(m * alpha - b)
    n_alpha = float(q) if err == 0.0 else min(float(q), 1.0 / err)
    arc = "major" if m <= small_r else "minor"
    return ArcClassification(
        alpha=alpha, delta=delta, q=q, numerator=b, denominator=m,
        arc=arc, n_alpha=n_alpha, big_r=big_r, small_r=small_r,
    )


def _first_good_convergent(alpha: float, big_r: float) -> tuple[int, int]:
    """First continued-fraction convergent b/m with m <= R and |alpha - b/m| < 1/(mR)."""
    p_prev, p_cur = 1, int(math.floor(alpha))
    q_prev, q_cur = 0, 1
    x = alpha - math.floor(alpha)
    # walk convergents of alpha; the one before the denominator passes R wins
    for _ in range(64):
        if q_cur <= big_r and abs(q_cur * alpha - p_cur) < 1.0 / big_r:
            return p_cur, q_cur
        if x == 0.0:
            break
        x = 1.0 / x
        a = int(math.floor(x))
        x -= a
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        if q_cur > 1e15:
            break
    # Dirichlet's theorem guarantees some convergent qualifies; the last
    # convergent with q <= R satisfies |alpha - p/q| <= 1/(q q') < 1/(q R)
    raise AssertionError("no qualifying convergent found (cannot happen)")


# ---------------------------------------------------------------------------
# ratio report for the maximum partial sum

@dataclass(frozen=True)
class MaxRatioReport:
    chi_label: str
    xi_label: str
    m_chi: float
    argmax: int
    n_q: int
    harmonic_max: float
    rhs_base: float           # sqrt(q ell) / (pi phi(ell)) * harmonic_max
    implied_factor: float     # m_chi / rhs_base
    tau: float | None         # the case formula when xi is non-principal
    tau_interval: tuple[float, float] | None   # containment check when xi = 1
    tau_consistent: bool


def mchi_ratio_report(
    chi: DirichletCharacter, xi: DirichletCharacter
) -> MaxRatioReport:
    """Both sides of the max-partial-sum comparison and their ratio.

    For non-principal xi the comparison factor is max(1, |1 - (chi conj(xi))(2)|);
    for principal xi the factor is only known to lie in [1/2, 3], so the report
    records containment instead of a point value.
    """
    from .characters import format_label

    q = chi.modulus
    ell = xi.modulus
    m_chi, argmax = max_partial(chi)
    n_q, harmonic_max = find_nq(chi, xi)
    phi_ell = build_group(ell).phi
    rhs_base = math.sqrt(q * ell) / (math.pi * phi_ell) * harmonic_max
    implied = m_chi / rhs_base if rhs_base > 0 else float("inf")
    if xi.is_principal:
        tau = None
        interval = (0.5, 3.0)
        consistent = interval[0] <= implied <= interval[1]
    else:
        z = chi(2) * np.conj(xi(2))
        tau = max(1.0, abs(1.0 - z))
        interval = None
        consistent = True
    return MaxRatioReport(
        chi_label=format_label(chi),
        xi_label=format_label(xi),
        m_chi=m_chi,
        argmax=argmax,
        n_q=n_q,
        harmonic_max=harmonic_max,
        rhs_base=rhs_base,
        implied_factor=implied,
        tau=tau,
        tau_interval=interval,
        tau_consistent=consistent,
    )


# ---------------------------------------------------------------------------
# quadratic non-residue chain

QR_BOUND_CONSTANT = 2.0 * (math.sqrt(math.e) - 1.0) / math.pi     # 0.41298...


@dataclass(frozen=True)
class QrBoundReport:
    q: int
    ell: int
    n_q: int                        # least quadratic non-residue mod q
    tau: float
    predicted_lower_bound: float    # c * tau * sqrt(q) * log(n_q), o(1) dropped
    measured_max: float             # M of the real character mod ell*q
    smooth_side: float              # 2 * sum over smooth 1/n - sum over all 1/n
    character_side: float           # sum over n <= x, (n,ell)=1 of (n/q)/n
    decomposition_gap: float        # character_side - smooth_side (>= 0)
    x_cut: int
    holds: bool


def least_nonresidue(q: int) -> int:
    """Smallest n >= 2 with (n/q) = -1, by direct Legendre scan."""
    chi = quadratic_character(q)
    for n in range(2, q):
        v = chi(n)
        if v.real < -0.5:
            return n
    raise AssertionError("a non-residue exists for every odd prime q > 2")


def qr_lower_bound(q: int, ell: int) -> QrBoundReport:
    """Evaluate the non-residue lower-bound chain at (q, ell).

    q must be a prime = 3 (mod 4); ell odd, squarefree and coprime to q.  The
    predicted bound uses tau = 1/2 when ell = 1, else tau = 1 or 2 according
    to q = 7 or 3 (mod 8).  The asymptotic slack is dropped and flagged by the
    caller; the smooth-sum decomposition is recomputed by exact enumeration.
    """
    if q % 4 != 3 or not _is_prime(q):
        raise PreconditionError("q must be a prime congruent to 3 mod 4")
    if ell < 1 or ell % 2 == 0 or not _is_squarefree(ell) or math.gcd(ell, q) != 1:
        raise PreconditionError("ell must be odd, squarefree and coprime to q")
    n_q = least_nonresidue(q)
    tau = 0.5 if ell == 1 else (1.0 if q % 8 == 7 else 2.0)
    predicted = QR_BOUND_CONSTANT * tau * math.sqrt(q) * math.log(n_q)

    chi_big = quadratic_character(ell * q)
    measured, _ = max_partial(chi_big)

    # evaluation point x = y^sqrt(e) with y = n_q - 1 (y = 1 collapses to x = 1)
    y = n_q - 1
    x = max(1, int(round(y ** math.sqrt(math.e))))
    from .core import smooth_reciprocal_sum

    n = np.arange(1, x + 1)
    coprime = np.gcd(n, ell) == 1
    chi_q = quadratic_character(q)
    char_side = float(np.sum(np.where(coprime, chi_q.values(n).real, 0.0) / n))
    all_recip = float(np.sum(np.where(coprime, 1.0, 0.0) / n))
    smooth_recip = smooth_reciprocal_sum(x, max(y, 1), coprime_to=ell)
    smooth_side = 2.0 * smooth_recip - all_recip
    return QrBoundReport(
        q=q,
        ell=ell,
        n_q=n_q,
        tau=tau,
        predicted_lower_bound=predicted,
        measured_max=measured,
        smooth_side=smooth_side,
        character_side=char_side,
        decomposition_gap=char_side - smooth_side,
        x_cut=x,
        holds=predicted <= measured,
    )


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1 if d == 2 else 2
    return True


def _is_squarefree(n: int) -> bool:
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1 if d == 2 else 2
    return True
