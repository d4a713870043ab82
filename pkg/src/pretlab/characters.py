"""Exact Dirichlet character groups.

A character mod q is stored as an exponent vector over the cyclic
decomposition of (Z/qZ)*: one residue per component, with the component at
an odd prime power generated by a fixed primitive root and the component at
2^k (k >= 3) generated by the pair {-1, 5}.  Values are exact roots of
unity tracked as integer indices into the group-exponent cyclotomic order;
conversion to floating complex happens only at the boundary, so long sums
cannot drift and multiplicativity is testable exactly.

Enumeration order is lexicographic in the exponent vector, so labels are
reproducible across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import CapacityError, DomainError, PreconditionError

GROUP_CAP = 10**7


def _factorize(q: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= q:
        if q % d == 0:
            k = 0
            while q % d == 0:
                q //= d
                k += 1
            out.append((d, k))
        d += 1 if d == 2 else 2
    if q > 1:
        out.append((q, 1))
    return out


def _primitive_root(p: int, e: int) -> int:
    """Primitive root mod p^e for odd prime p (smallest root mod p, lifted)."""
    phi_p = p - 1
    # factor p-1
    fac = [f for f, _ in _factorize(phi_p)]
    g = 2
    while True:
        if all(pow(g, phi_p // f, p) != 1 for f in fac):
            break
        g += 1
    if e == 1:
        return g
    # lift: g or g + p generates mod p^2, and then mod all higher powers
    if pow(g, phi_p, p * p) == 1:
        g += p
    return g


@dataclass(frozen=True)
class _Component:
    """One cyclic factor of (Z/qZ)*: its local modulus, generator and order."""

    modulus: int          # the prime power p^e this component lives at
    prime: int
    generator: int        # generator of this cyclic factor (mod modulus)
    order: int
    dlog: np.ndarray      # dlog[r % modulus] = exponent, -1 off units
    # for 2^k (k>=3) the factor <5> needs the sign companion handled jointly


class CharacterGroup:
    """The full character group mod q with exact discrete logs."""

    def __init__(self, q: int):
        if not (1 <= q <= GROUP_CAP):
            raise CapacityError(f"modulus must be in [1, {GROUP_CAP}], got {q}")
        self.modulus = q
        self.factorization = _factorize(q)
        self.components: list[_Component] = []
        for p, e in self.factorization:
            pe = p**e
            if p == 2:
                if e == 1:
                    continue                      # (Z/2)* is trivial
                if e == 2:
                    dlog = -np.ones(4, dtype=np.int64)
                    dlog[1], dlog[3] = 0, 1
                    self.components.append(_Component(4, 2, 3, 2, dlog))
                else:
                    # {-1, 5}: sign component of order 2, then <5> of order 2^(e-2)
                    half = pe >> 2
                    sign = -np.ones(pe, dtype=np.int64)
                    five = -np.ones(pe, dtype=np.int64)
                    t = 1
                    for i in range(half):
                        sign[t], five[t] = 0, i
                        sign[pe - t], five[pe - t] = 1, i
                        t = (t * 5) % pe
                    self.components.append(_Component(pe, 2, pe - 1, 2, sign))
                    self.components.append(_Component(pe, 2, 5, half, five))
            else:
                g = _primitive_root(p, e)
                phi = pe - pe // p
                dlog = -np.ones(pe, dtype=np.int64)
                t = 1
                for i in range(phi):
                    dlog[t] = i
                    t = (t * g) % pe
                self.components.append(_Component(pe, p, g, phi, dlog))
        self.component_orders = tuple(c.order for c in self.components)
        self.phi = 1
        for d in self.component_orders:
            self.phi *= d
        self.exponent = 1
        for d in self.component_orders:
            self.exponent = math.lcm(self.exponent, d)

    def __repr__(self) -> str:
        return f"CharacterGroup(q={self.modulus}, orders={self.component_orders})"

    def dlog_vector(self, n: int) -> tuple[int, ...] | None:
        """Component exponents of n, or None when gcd(n, q) > 1."""
        n %= self.modulus
        if self.modulus == 1:
            return ()
        if math.gcd(n, self.modulus) != 1:
            return None
        out = []
        for c in self.components:
            v = int(c.dlog[n % c.modulus])
            if v < 0:
                return None
            out.append(v)
        return tuple(out)

    def dlog_matrix(self, n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Vectorized dlogs: (matrix[len(components), len(n)], unit mask)."""
        n = np.asarray(n, dtype=np.int64) % max(self.modulus, 1)
        if not self.components:
            return np.zeros((0, len(n)), dtype=np.int64), np.gcd(n, self.modulus) == 1
        rows = [c.dlog[n % c.modulus] for c in self.components]
        mat = np.vstack(rows)
        units = np.all(mat >= 0, axis=0) & (np.gcd(n, self.modulus) == 1)
        return mat, units

    def character(self, exponents: tuple[int, ...]) -> "DirichletCharacter":
        return DirichletCharacter(self, tuple(
            a % d for a, d in zip(exponents, self.component_orders)
        ))

    def principal(self) -> "DirichletCharacter":
        return self.character(tuple(0 for _ in self.components))


@lru_cache(maxsize=64)
def build_group(q: int) -> CharacterGroup:
    """Memoized group constructor; groups are immutable and shareable."""
    return CharacterGroup(q)


class DirichletCharacter:
    """One character, identified by its exponent vector in the group basis."""

    def __init__(self, group: CharacterGroup, exponents: tuple[int, ...]):
        if len(exponents) != len(group.components):
            raise DomainError("exponent vector length must match the group")
        self.group = group
        self.exponents = tuple(
            a % d for a, d in zip(exponents, group.component_orders)
        )
        e = group.exponent
        # weight per component: character value at component generator is
        # zeta_e ** (a_j * e / d_j)
        self._weights = tuple(
            (a * (e // d)) % e
            for a, d in zip(self.exponents, group.component_orders)
        )
        self.order = 1
        for a, d in zip(self.exponents, group.component_orders):
            self.order = math.lcm(self.order, d // math.gcd(d, a) if a else 1)

    # -- exact arithmetic ---------------------------------------------------

    def value_index(self, n: int) -> int | None:
        """k with chi(n) = exp(2 pi i k / e), e the group exponent; None off units."""
        v = self.group.dlog_vector(n)
        if v is None:
            return None
        e = self.group.exponent
        return sum(w * x for w, x in zip(self._weights, v)) % e

    def __call__(self, n: int) -> complex:
        k = self.value_index(n)
        if k is None:
            return 0.0 + 0.0j
        e = self.group.exponent
        return complex(np.exp(2j * np.pi * (k / e)))

    def values(self, n: np.ndarray) -> np.ndarray:
        """Vectorized chi(n) over an integer array."""
        mat, units = self.group.dlog_matrix(np.asarray(n, dtype=np.int64))
        e = self.group.exponent
        if mat.shape[0] == 0:
            k = np.zeros(mat.shape[1], dtype=np.int64)
        else:
            w = np.array(self._weights, dtype=np.int64)
            k = (w @ np.where(mat < 0, 0, mat)) % e
        out = np.exp(2j * np.pi * (k / e))
        out[~units] = 0.0
        return out

    def period_values(self) -> np.ndarray:
        """chi(n) for n = 0 .. q-1 (one full period)."""
        return self.values(np.arange(self.group.modulus))

    # -- structure ----------------------------------------------------------

    @property
    def modulus(self) -> int:
        return self.group.modulus

    @property
    def parity(self) -> int:
        """chi(-1), which is +1 or -1."""
        k = self.value_index(-1)
        e = self.group.exponent
        return 1 if k == 0 else -1 if 2 * k == e else _parity_error(k, e)

    @property
    def is_principal(self) -> bool:
        return all(a == 0 for a in self.exponents)

    @property
    def is_real(self) -> bool:
        return self.order <= 2

    def conjugate(self) -> "DirichletCharacter":
        return DirichletCharacter(
            self.group,
            tuple(
                (-a) % d
                for a, d in zip(self.exponents, self.group.component_orders)
            ),
        )

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        if other.group is not self.group:
            raise DomainError("character product requires a common group")
        return DirichletCharacter(
            self.group,
            tuple(a + b for a, b in zip(self.exponents, other.exponents)),
        )

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, DirichletCharacter)
            and self.modulus == other.modulus
            and self.exponents == other.exponents
        )

    def __hash__(self) -> int:
        return hash((self.modulus, self.exponents))

    def __repr__(self) -> str:
        return f"DirichletCharacter({format_label(self)})"


def _parity_error(k: int, e: int) -> int:
    raise AssertionError(f"chi(-1) index {k} of {e} is not +-1")


# ---------------------------------------------------------------------------
# conductor / primitivity

def conductor_and_primitive(chi: DirichletCharacter) -> tuple[int, DirichletCharacter]:
    """Smallest ell | q with a primitive inducing character psi mod ell.

    psi agrees with chi on every n coprime to q.
    """
    group = chi.group
    cond = 1
    for comp, a in zip(group.components, chi.exponents):
        if a == 0:
            continue
        p, d = comp.prime, comp.order
        local_order = d // math.gcd(d, a)
        if p == 2:
            if comp.order == 2 and comp.modulus == 4:
                local = 4
            elif comp.generator == comp.modulus - 1:
                local = 4                 # the sign character of (Z/2^k)*
            else:
                # <5>-component of order 2^(k-2); a character of order 2^j
                # on it needs modulus 2^(j+2)
                local = 4 * local_order
        else:
            # character of order m on (Z/p^e)* has conductor p^c with c the
            # least exponent where phi(p^c) is divisible by m
            c = 1
            phi_c = p - 1
            while phi_c % local_order != 0:
                c += 1
                phi_c *= p
            local = p**c
        cond = cond * local if math.gcd(cond, local) == 1 else math.lcm(cond, local)
    sub = build_group(cond)
    psi = _restrict(chi, sub)
    return cond, psi


def _crt_pair(r1: int, m1: int, r2: int, m2: int) -> int:
    """x = r1 (mod m1), x = r2 (mod m2) for coprime m1, m2."""
    inv = pow(m1, -1, m2)
    return (r1 + m1 * ((r2 - r1) * inv % m2)) % (m1 * m2)


def _restrict(chi: DirichletCharacter, sub: CharacterGroup) -> DirichletCharacter:
    """Express chi as a character mod a divisor modulus it descends to."""
    q = chi.modulus
    cond = sub.modulus
    exps = []
    for comp in sub.components:
        # the element of (Z/cond)* equal to this component's generator at its
        # own prime power and to 1 at every other prime power of the conductor
        elem, mod = comp.generator % comp.modulus, comp.modulus
        for p, e in sub.factorization:
            pe = p**e
            if pe != comp.modulus:
                elem, mod = _crt_pair(elem, mod, 1, pe), mod * pe
        # lift to an integer coprime to q (stays fixed mod the conductor)
        while math.gcd(elem, q) != 1:
            elem += cond
        k = chi.value_index(elem)
        if k is None:
            raise AssertionError("lift of a unit must be a unit")
        ge = chi.group.exponent
        # chi(elem) = e(k/ge) must be a comp.order-th root of unity
        num = k * comp.order
        if num % ge != 0:
            raise AssertionError(
                f"character does not descend to modulus {sub.modulus}"
            )
        exps.append((num // ge) % comp.order)
    return sub.character(tuple(exps))


def is_primitive(chi: DirichletCharacter) -> bool:
    return conductor_and_primitive(chi)[0] == chi.modulus


# ---------------------------------------------------------------------------
# Gauss sums, enumeration, labels

def gauss_sum(chi: DirichletCharacter) -> complex:
    """g(chi) = sum over a mod q of chi(a) e(a/q), by direct summation."""
    q = chi.modulus
    vals = chi.period_values()
    return complex(np.sum(vals * np.exp(2j * np.pi * np.arange(q) / q)))


def enumerate_characters(
    group: CharacterGroup,
    parity: int | None = None,
    order: int | None = None,
    primitive: bool | None = None,
) -> list[DirichletCharacter]:
    """All characters mod q in lexicographic exponent order, filtered exactly."""
    out = []
    exps = [0] * len(group.components)
    while True:
        chi = group.character(tuple(exps))
        keep = True
        if parity is not None and chi.parity != parity:
            keep = False
        if keep and order is not None and chi.order != order:
            keep = False
        if keep and primitive is not None and is_primitive(chi) != primitive:
            keep = False
        if keep:
            out.append(chi)
        # lexicographic increment
        i = len(exps) - 1
        while i >= 0:
            exps[i] += 1
            if exps[i] < group.component_orders[i]:
                break
            exps[i] = 0
            i -= 1
        if i < 0:
            return out


def format_label(chi: DirichletCharacter) -> str:
    """Serialize as "q:e1,e2,...,ek"; bit-exact round trip with parse_label."""
    exps = ",".join(str(a) for a in chi.exponents)
    return f"{chi.modulus}:{exps}"


def parse_label(label: str) -> DirichletCharacter:
    try:
        mod_part, _, exp_part = label.partition(":")
        q = int(mod_part)
        exps = tuple(int(t) for t in exp_part.split(",") if t != "")
    except ValueError as exc:
        raise PreconditionError(f"bad character label {label!r}") from exc
    group = build_group(q)
    if len(exps) != len(group.components):
        raise PreconditionError(
            f"label {label!r} has {len(exps)} exponents, group needs "
            f"{len(group.components)}"
        )
    return group.character(exps)


def quadratic_character(q: int) -> DirichletCharacter:
    """The real character mod squarefree odd q given by the Jacobi symbol."""
    group = build_group(q)
    exps = []
    for comp in group.components:
        if comp.prime == 2 or comp.order % 2 != 0:
            raise DomainError(f"no quadratic symbol at modulus {q}")
        exps.append(comp.order // 2)
    return group.character(tuple(exps))
