"""Character-group tests, with brute-force oracles for the structural claims."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pretlab.characters import (
    build_group,
    conductor_and_primitive,
    enumerate_characters,
    format_label,
    gauss_sum,
    is_primitive,
    parse_label,
    quadratic_character,
)
from pretlab.errors import CapacityError


def euler_phi(n):
    out = n
    d = 2
    while d * d <= n:
        if n % d == 0:
            out -= out // d
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out -= out // n
    return out


# ---------------------------------------------------------------------------
# group construction

@pytest.mark.parametrize("q", [1, 2, 3, 4, 5, 8, 9, 12, 15, 16, 24, 36, 100, 243, 256])
def test_group_order(q):
    group = build_group(q)
    assert group.phi == euler_phi(q)
    assert len(enumerate_characters(group)) == euler_phi(q)


def test_group_q8():
    assert build_group(8).phi == 4


def test_group_q1_trivial():
    group = build_group(1)
    chars = enumerate_characters(group)
    assert len(chars) == 1
    assert chars[0](5) == 1.0
    assert chars[0].is_principal


def test_group_q15_component_orders():
    group = build_group(15)
    prod = 1
    for d in group.component_orders:
        prod *= d
    assert prod == 8


def test_group_capacity():
    with pytest.raises(CapacityError):
        build_group(10**7 + 1)


@pytest.mark.parametrize("q", [7, 9, 12, 16, 40])
def test_dlog_inverts_exponentiation(q):
    """Every unit's dlog vector reproduces the unit as a generator product."""
    group = build_group(q)
    for n in range(q):
        v = group.dlog_vector(n)
        if math.gcd(n, q) != 1:
            assert v is None
            continue
        prod = 1
        for comp, x in zip(group.components, v):
            prod = (prod * pow(comp.generator, int(x), q)) % q
        # product runs over the local component moduli glued by CRT, so
        # compare at each prime power
        for comp, x in zip(group.components, v):
            pe = comp.modulus
            assert pow(comp.generator, int(x), pe) % pe == _part(n, pe, group, comp)


def _part(n, pe, group, comp):
    # for the 2-adic pair the unit is (-1)^s 5^i; isolate this component
    if comp.prime == 2 and comp.modulus >= 8:
        sign_comp = [c for c in group.components if c.modulus == pe][0]
        s = int(sign_comp.dlog[n % pe])
        i = int([c for c in group.components
                 if c.modulus == pe and c is not sign_comp][0].dlog[n % pe])
        if comp is sign_comp:
            return pow(pe - 1, s, pe)
        return pow(5, i, pe)
    return n % pe


# ---------------------------------------------------------------------------
# evaluation

def test_eval_quadratic_mod3():
    chi = parse_label("3:1")
    assert not chi.is_principal
    assert chi(2) == pytest.approx(-1.0, abs=1e-15)
    assert chi(1) == 1.0
    assert chi(3) == 0.0


def test_eval_identity_everywhere():
    for q in (3, 8, 45):
        for chi in enumerate_characters(build_group(q)):
            assert chi(1) == 1.0
            assert chi(1 + q) == 1.0


def test_eval_order4_mod5():
    group = build_group(5)
    quartics = [c for c in enumerate_characters(group) if c.order == 4]
    assert len(quartics) == 2
    for chi in quartics:
        assert chi(2) in (pytest.approx(1j), pytest.approx(-1j))
        assert chi(2) ** 2 == pytest.approx(chi(4))
        assert chi(4) == pytest.approx(-1.0)


@pytest.mark.parametrize("q", [5, 8, 9, 12, 21])
def test_complete_multiplicativity_exact(q):
    """chi(mn) = chi(m) chi(n) compared on exact root-of-unity indices."""
    group = build_group(q)
    rng = np.random.default_rng(11)
    e = group.exponent
    for chi in enumerate_characters(group):
        for _ in range(200):
            m = int(rng.integers(1, 5 * q))
            n = int(rng.integers(1, 5 * q))
            km, kn, kmn = chi.value_index(m), chi.value_index(n), chi.value_index(m * n)
            if km is None or kn is None:
                assert kmn is None
            else:
                assert kmn == (km + kn) % e


def test_negative_arguments_via_parity():
    for q in (5, 7, 12):
        for chi in enumerate_characters(build_group(q)):
            for n in (1, 2, q - 1, q + 3):
                if math.gcd(n, q) != 1:
                    continue
                assert chi(-n) == pytest.approx(chi.parity * chi(n), abs=1e-14)


def test_periodicity_vectorized():
    chi = parse_label("7:2")
    n = np.arange(1, 50)
    v1 = chi.values(n)
    v2 = chi.values(n + 7)
    assert np.allclose(v1, v2, atol=1e-15)


# ---------------------------------------------------------------------------
# conductor / primitivity, with a divisor-search oracle

def oracle_conductor(chi):
    """Brute force: smallest d | q with chi constant on units within residue
    classes mod d."""
    q = chi.modulus
    for d in sorted(_divisors(q)):
        ok = True
        for a in range(q):
            if math.gcd(a, q) != 1:
                continue
            for b in range(a % d, q, d):
                if math.gcd(b, q) != 1:
                    continue
                if chi.value_index(a) != chi.value_index(b):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return d
    return q


def _divisors(q):
    return [d for d in range(1, q + 1) if q % d == 0]


@pytest.mark.parametrize("q", [3, 4, 5, 6, 8, 9, 12, 16, 18, 24, 36, 45])
def test_conductor_matches_divisor_search(q):
    for chi in enumerate_characters(build_group(q)):
        ell, psi = conductor_and_primitive(chi)
        assert ell == oracle_conductor(chi)
        assert psi.modulus == ell
        assert is_primitive(psi)


def test_conductor_examples():
    # principal mod 6 descends to the trivial character
    group = build_group(6)
    ell, psi = conductor_and_primitive(group.principal())
    assert ell == 1 and psi.modulus == 1

    # an order-6 character mod 9 is already primitive
    sixes = [c for c in enumerate_characters(build_group(9)) if c.order == 6]
    assert sixes
    for chi in sixes:
        assert conductor_and_primitive(chi)[0] == 9

    # the quadratic character mod 12 induced from modulus 3
    quads = [
        c
        for c in enumerate_characters(build_group(12))
        if c.order == 2 and conductor_and_primitive(c)[0] == 3
    ]
    assert len(quads) == 1


@pytest.mark.parametrize("q", [8, 12, 15, 21, 24, 40, 45])
def test_induced_character_agrees_on_units(q):
    for chi in enumerate_characters(build_group(q)):
        ell, psi = conductor_and_primitive(chi)
        for n in range(1, 3 * q):
            if math.gcd(n, q) == 1:
                assert psi(n) == pytest.approx(chi(n), abs=1e-12)


# ---------------------------------------------------------------------------
# Gauss sums

def test_gauss_sum_mod3():
    chi = parse_label("3:1")
    val = gauss_sum(chi)
    # two-term direct evaluation e(1/3) - e(2/3) = i sqrt(3)
    assert val == pytest.approx(1j * math.sqrt(3), abs=1e-14)


def test_gauss_sum_primitive_magnitude():
    for q in range(3, 201):
        group = build_group(q)
        for chi in enumerate_characters(group):
            if is_primitive(chi):
                assert abs(abs(gauss_sum(chi)) - math.sqrt(q)) < 1e-9


def test_gauss_sum_imprimitive_principal_mod4():
    group = build_group(4)
    g = gauss_sum(group.principal())
    assert abs(abs(g) - 2.0) > 0.5


def test_gauss_sum_conjugate_product():
    for q in (5, 7, 9, 11, 16):
        for chi in enumerate_characters(build_group(q)):
            if is_primitive(chi):
                g = gauss_sum(chi)
                assert g * np.conj(g) == pytest.approx(q, abs=1e-9)


# ---------------------------------------------------------------------------
# enumeration and labels

def test_enumerate_mod5_primitive():
    group = build_group(5)
    prim = enumerate_characters(group, primitive=True)
    assert len(prim) == 3


def test_enumerate_mod8_odd():
    group = build_group(8)
    odd = enumerate_characters(group, parity=-1)
    assert len(odd) == 2


def test_enumeration_deterministic():
    a = [format_label(c) for c in enumerate_characters(build_group(45))]
    b = [format_label(c) for c in enumerate_characters(build_group(45))]
    assert a == b
    assert a == sorted(a, key=lambda s: [int(t) for t in s.split(":")[1].split(",")])


@pytest.mark.parametrize("q", [1, 2, 5, 12, 16, 45])
def test_label_round_trip(q):
    for chi in enumerate_characters(build_group(q)):
        again = parse_label(format_label(chi))
        assert again == chi
        assert format_label(again) == format_label(chi)


# ---------------------------------------------------------------------------
# orthogonality (subset here; the full q <= 500 sweep runs in acceptance)

@pytest.mark.parametrize("q", [3, 4, 5, 8, 12, 36, 97])
def test_orthogonality_both_directions(q):
    group = build_group(q)
    chars = enumerate_characters(group)
    n = np.arange(1, q + 1)
    for chi in chars:
        s = chi.values(n).sum()
        if chi.is_principal:
            assert abs(s - euler_phi(q)) < 1e-10
        else:
            assert abs(s) < 1e-10
    for m in range(2, q + 1):
        if math.gcd(m, q) != 1 or m % q == 1:
            continue
        s = sum(c(m) for c in chars)
        assert abs(s) < 1e-10


# ---------------------------------------------------------------------------
# quadratic symbols through the generic machinery

def oracle_legendre(n, p):
    n %= p
    if n == 0:
        return 0
    return 1 if pow(n, (p - 1) // 2, p) == 1 else -1


@pytest.mark.parametrize("q", [3, 7, 11, 15, 33, 35])
def test_quadratic_character_matches_jacobi(q):
    chi = quadratic_character(q)
    assert chi.is_real and not chi.is_principal
    for n in range(1, 3 * q):
        expected = 1
        for p, _ in _factor_sqfree(q):
            expected *= oracle_legendre(n, p)
        assert chi(n) == pytest.approx(expected, abs=1e-14)


def _factor_sqfree(q):
    out = []
    d = 3
    while d * d <= q:
        if q % d == 0:
            out.append((d, 1))
            q //= d
        else:
            d += 2
    if q > 1:
        out.append((q, 1))
    return out


@given(st.integers(min_value=2, max_value=200), st.integers(min_value=1, max_value=400))
@settings(max_examples=120, deadline=None)
def test_value_index_consistency(q, n):
    group = build_group(q)
    for chi in enumerate_characters(group)[:4]:
        k = chi.value_index(n)
        direct = chi(n)
        if k is None:
            assert direct == 0
        else:
            expected = np.exp(2j * np.pi * k / group.exponent)
            assert abs(direct - expected) < 1e-12
