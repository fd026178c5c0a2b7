"""Truncated q-expansions: CM theta series over the exact value ring, the
weight-12 level-1 cusp form, coefficient killing, character twists and Sturm
indices."""

from __future__ import annotations

from dataclasses import dataclass

from .charmod import HeckeChar, evaluate
from .ffield import FiniteField
from .qfield import ideals_coprime, ideals_of_norm
from .arith import factorint
from .serrepred import DirichletChar


@dataclass
class QExpansion:
    """Coefficients c_1..c_prec of a cuspidal q-series (c_0 = 0 throughout);
    ring is "int", a FiniteField, or a ValueRing."""

    ring: object
    coeffs: list  # index n holds c_n; index 0 unused (always zero)
    weight: int
    level: int
    character: object = None

    @property
    def prec(self) -> int:
        return len(self.coeffs) - 1

    def zero_coeff(self):
        if self.ring == "int":
            return 0
        return self.ring.zero()


def theta_series(chi: HeckeChar, prec: int) -> QExpansion:
    """Sum of delta_H(a) q^Norm(a) over integral ideals coprime to the
    conductor, truncated at prec."""
    if prec < 1:
        raise ValueError("precision must be >= 1")
    R = chi.ring
    coeffs = [R.zero() for _ in range(prec + 1)]
    for n in range(1, prec + 1):
        acc = R.zero()
        for a in ideals_of_norm(chi.D, n):
            if ideals_coprime(a, chi.cond):
                acc = acc + evaluate(chi, a)
        coeffs[n] = acc
    if coeffs[1] != R.one():
        raise AssertionError("theta series is not normalized")
    return QExpansion(R, coeffs, chi.k, chi.cond.norm() * abs(chi.D), chi)


def _pentagonal_exponents(prec: int):
    """(exponent, sign) pairs of the sparse product expansion of
    prod (1 - q^n), exponents <= prec."""
    out = [(0, 1)]
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        s = -1 if k % 2 else 1
        if g1 > prec and g2 > prec:
            break
        if g1 <= prec:
            out.append((g1, s))
        if g2 <= prec:
            out.append((g2, s))
        k += 1
    return sorted(out)


def delta_qexp(prec: int) -> QExpansion:
    """tau(1..prec) via the literal truncated product q * prod (1 - q^n)^24."""
    if prec > 10**5:
        raise ValueError("precision cap exceeded")
    if prec < 1:
        raise ValueError("precision must be >= 1")
    m = prec  # need E up to degree prec - 1 after the leading q
    euler = [0] * m
    if m:
        euler[0] = 1
        for n in range(1, m):
            # multiply by (1 - q^n)
            for i in range(m - 1, n - 1, -1):
                euler[i] -= euler[i - n]
    sparse = [(i, c) for i, c in enumerate(euler) if c]
    f = [0] * m
    if m:
        f[0] = 1
        for _ in range(24):
            nf = [0] * m
            for i, c in sparse:
                for j in range(m - i):
                    if f[j]:
                        nf[i + j] += c * f[j]
            f = nf
    coeffs = [0] * (prec + 1)
    for i in range(m):
        coeffs[i + 1] = f[i]
    return QExpansion("int", coeffs, 12, 1)


def delta_qexp_recursion(prec: int) -> QExpansion:
    """Independent route: coefficients of q * prod(1-q^n)^24 from the
    pentagonal-number recursion n*s_n = -sum_k (-1)^k (n - 25 g_k) s_{n-g_k}."""
    if prec < 1:
        raise ValueError("precision must be >= 1")
    m = prec
    pent = [(g, s) for g, s in _pentagonal_exponents(m) if g > 0]
    s = [0] * m
    if m:
        s[0] = 1
        for n in range(1, m):
            acc = 0
            for g, sg in pent:
                if g > n:
                    break
                acc += sg * (n - 25 * g) * s[n - g]
            if acc % n:
                raise AssertionError("recursion produced a non-integer")
            s[n] = -acc // n
    coeffs = [0] * (prec + 1)
    for i in range(m):
        coeffs[i + 1] = s[i]
    return QExpansion("int", coeffs, 12, 1)


def drop_multiples(f: QExpansion, p: int) -> QExpansion:
    """Zero every coefficient c_n with p | n."""
    coeffs = list(f.coeffs)
    z = f.zero_coeff()
    for n in range(p, f.prec + 1, p):
        coeffs[n] = z
    return QExpansion(f.ring, coeffs, f.weight, f.level, f.character)


def _char_value_in_ring(ring, t) -> object:
    """Map a root of unity (TeichRep) into a coefficient ring."""
    if ring == "int":
        if t.m == 1:
            return 1
        if t.m == 2:
            return -1
        raise ValueError("integer coefficients only absorb quadratic twists")
    if isinstance(ring, FiniteField):
        return t.reduce_into(ring)
    return ring.root_of_unity(t)


def twist(f: QExpansion, mu: DirichletChar) -> QExpansion:
    """Coefficientwise product mu(n) * c_n."""
    coeffs = [f.coeffs[0]] + [None] * f.prec
    z = f.zero_coeff()
    cache: dict[int, object] = {}
    for n in range(1, f.prec + 1):
        v = mu.value(n)
        if v is None:
            coeffs[n] = z
            continue
        key = (v.m, v.e)
        if key not in cache:
            cache[key] = _char_value_in_ring(f.ring, v)
        coeffs[n] = cache[key] * f.coeffs[n]
    return QExpansion(f.ring, coeffs, f.weight, f.level, f.character)


def sturm_index(N: int) -> int:
    """Index of the level-N congruence subgroup: N * prod_{p|N} (1 + 1/p)."""
    if N < 1:
        raise ValueError("level must be positive")
    m = N
    for p in factorint(N) if N > 1 else ():
        m = m // p * (p + 1)
    return m


def sturm_bound(k: int, N: int, mode: str = "standard") -> int:
    """Coefficient cutoff: floor(k*m/12) in standard mode, floor(m/6) in
    paper mode, with m the level index."""
    if k < 2:
        raise ValueError("weight must be >= 2")
    m = sturm_index(N)
    if mode == "paper":
        return m // 6
    if mode == "standard":
        return k * m // 12
    raise ValueError(f"unknown mode {mode!r}")


def coeff_strings(f: QExpansion) -> list[str]:
    """Canonical string form of c_1..c_prec: decimal integers, finite-field
    codes, or normal-form polynomial strings."""
    if f.ring == "int":
        return [str(c) for c in f.coeffs[1:]]
    if isinstance(f.ring, FiniteField):
        return [str(c.code()) for c in f.coeffs[1:]]
    return [c.as_string() for c in f.coeffs[1:]]
