"""Hecke characters of infinity type (k-1, 0) on an imaginary quadratic field,
their exact value ring, Teichmuller lifts, and reductions to finite fields.

A character is stored ideal-theoretically: a finite-part character on
(O_K/f)^* satisfying unit consistency, together with one formal root t_j per
cyclic factor of the class group subject to t_j^{h_j} = eps_f(beta_j) *
beta_j^{k-1} where (beta_j) = b_j^{h_j}.  Values live in the presentation ring
Z[w_D, zeta_w, t_1..t_s] with rational normal-form coefficients whose
denominators are supported at the norms of the class-extension ideals; a
reduction map only has to invert those denominators mod ell.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .arith import abelian_structure, divisors, factorint, is_prime, multiplicative_order
from .ffield import FFElem, FiniteField, finite_field
from .qfield import (
    IdealRep,
    QuadInt,
    class_group,
    disc_eps,
    factor_ideal,
    ideal_divide_prime,
    ideal_multiply,
    ideal_pow,
    ideals_coprime,
    ideals_of_norm,
    kronecker,
    omega_norm,
    principal_generator,
    quadint_in_ideal,
    units,
)


# ---------------------------------------------------------------------------
# residue groups (O_K/f)^*


@dataclass(frozen=True)
class ResidueGroup:
    D: int
    modulus: IdealRep
    gens: tuple[QuadInt, ...]
    orders: tuple[int, ...]

    def reduce(self, alpha: QuadInt) -> tuple[int, int]:
        c, n, mp = self.modulus.content, self.modulus.n, self.modulus.mprime()
        y = alpha.b % c
        k = (alpha.b - y) // c
        x = (alpha.a - k * c * mp) % (c * n)
        return (x, y)

    def dlog(self, alpha: QuadInt) -> tuple[int, ...]:
        key = self.reduce(alpha)
        try:
            return self._dlog[key]
        except KeyError:
            raise ValueError("element is not a unit modulo the conductor") from None

    @property
    def order(self) -> int:
        out = 1
        for h in self.orders:
            out *= h
        return out


def _unit_keys(D: int, f: IdealRep) -> list[tuple[int, int]]:
    c, n = f.content, f.n
    primes = [p for p, _ in factor_ideal(f)] if not f.is_unit_ideal() else []
    maps = []
    for p in primes:
        if p.content > 1:
            maps.append(("inert", p.content, 0))
        else:
            s = (disc_eps(D) - p.b) // 2
            maps.append(("res", p.n, s))
    out = []
    for x in range(c * n):
        for y in range(c):
            ok = True
            for kind, q, s in maps:
                if kind == "inert":
                    if x % q == 0 and y % q == 0:
                        ok = False
                        break
                else:
                    if (x + y * s) % q == 0:
                        ok = False
                        break
            if ok:
                out.append((x, y))
    return out


_rg_cache: dict[tuple[int, IdealRep], ResidueGroup] = {}


def residue_group(D: int, f: IdealRep) -> ResidueGroup:
    """Structure of (O_K/f)^* by exhaustive enumeration and discrete logs."""
    key = (D, f)
    if key in _rg_cache:
        return _rg_cache[key]
    if f.norm() > 10**6:
        raise ValueError("conductor norm exceeds the 10^6 enumeration bound")
    keys = sorted(_unit_keys(D, f), key=lambda t: (t[1], t[0]))

    def mul(u, v):
        prod = QuadInt(D, u[0], u[1]) * QuadInt(D, v[0], v[1])
        c, n, mp = f.content, f.n, f.mprime()
        y = prod.b % c
        k = (prod.b - y) // c
        x = (prod.a - k * c * mp) % (c * n)
        return (x, y)

    one = (1 % (f.content * f.n), 0)
    gens, orders, dlog = abelian_structure(keys, mul, one)
    rg = ResidueGroup(D, f, tuple(QuadInt(D, x, y) for x, y in gens), tuple(orders))
    object.__setattr__(rg, "_dlog", dlog)
    _rg_cache[key] = rg
    return rg


# ---------------------------------------------------------------------------
# Teichmuller lifts


@dataclass(frozen=True)
class TeichRep:
    """The root of unity zeta_m^e, stored with m equal to its exact order."""

    m: int
    e: int

    @staticmethod
    def make(m: int, e: int) -> "TeichRep":
        e %= m
        g = gcd(m, e) if e else m
        return TeichRep(m // g, e // g)

    def __mul__(self, other: "TeichRep") -> "TeichRep":
        M = lcm(self.m, other.m)
        return TeichRep.make(M, self.e * (M // self.m) + other.e * (M // other.m))

    def __pow__(self, k: int) -> "TeichRep":
        return TeichRep.make(self.m, self.e * (k % self.m))

    def inverse(self) -> "TeichRep":
        return TeichRep.make(self.m, -self.e)

    def is_one(self) -> bool:
        return self.m == 1

    def reduce_into(self, field: FiniteField) -> FFElem:
        if (field.q - 1) % self.m:
            raise ValueError("field has no root of unity of this order")
        return field.pow(field.generator(), self.e * ((field.q - 1) // self.m))


def teichmuller_lift(x: FFElem) -> TeichRep:
    """The unique prime-to-ell root of unity reducing to x (multiplicative lift)."""
    if x.is_zero():
        raise ValueError("Teichmuller lift of zero")
    field = x.field
    a = field.dlog(x)
    return TeichRep.make(field.q - 1, a)


# ---------------------------------------------------------------------------
# conductor case rules at the place above ell


def predict_conductor_at_v(
    ord_alpha: int, ell: int, k: int, f: int, local_match: bool
) -> int:
    """Exponent at v of the conductor of the weight-k character attached to a
    finite-order character with local exponent ord_alpha.

    local_match says whether the local units act by u -> lift(ubar)^(1-k),
    the unramified cyclotomic-twist shape.
    """
    if ell < 5 or not is_prime(ell):
        raise ValueError("ell must be a prime >= 5")
    if k < 2:
        raise ValueError("weight must be >= 2")
    if f not in (1, 2):
        raise ValueError("residue degree must be 1 or 2")
    if ord_alpha < 0:
        raise ValueError("conductor exponent must be >= 0")
    if ord_alpha >= 2:
        return ord_alpha
    if ord_alpha == 1:
        return 0 if local_match else 1
    return 0 if (k - 1) % (ell**f - 1) == 0 else 1


# ---------------------------------------------------------------------------
# the exact value ring


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients (low degree first) of the n-th cyclotomic polynomial."""
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in divisors(n):
        if d == n:
            continue
        phi_d = cyclotomic_poly(d)
        # exact division poly //= phi_d
        out = [0] * (len(poly) - len(phi_d) + 1)
        rem = list(poly)
        for i in range(len(out) - 1, -1, -1):
            coef = rem[i + len(phi_d) - 1]
            out[i] = coef
            if coef:
                for j, c in enumerate(phi_d):
                    rem[i + j] -= coef * c
        if any(rem):
            raise AssertionError("cyclotomic division not exact")
        poly = out
    return tuple(poly)


class ValueRing:
    """Z[g_K, zeta_w, t_1..t_s] modulo the minimal polynomial of w_D, the w-th
    cyclotomic polynomial and t_j^{h_j} - c_j, with unique normal forms.

    Coefficients are integers on the fast path and Fractions where inverse
    classes force denominators; those denominators are supported at the norms
    of the class-extension ideals, and the reductions require them to be units
    mod ell.
    """

    def __init__(self, D: int, w: int, orders: tuple[int, ...], cs: tuple[dict, ...]):
        self.D = D
        self.eps = disc_eps(D)
        self.q0 = omega_norm(D)
        self.w = w
        self.cyclo = cyclotomic_poly(w)
        self.zdeg = len(self.cyclo) - 1
        self.orders = tuple(orders)
        self.s = len(orders)
        self.cs = tuple(dict(c) for c in cs)
        self.nvars = 2 + self.s
        # normal forms of z^j for 0 <= j < 2w, as {z-exponent: coefficient}
        self._zpow = [{0: 1}]
        for _ in range(max(2 * w, 2 * self.zdeg)):
            prev = self._zpow[-1]
            nxt: dict[int, int] = {}
            for b, c in prev.items():
                if b + 1 < self.zdeg:
                    nxt[b + 1] = nxt.get(b + 1, 0) + c
                else:
                    for i in range(self.zdeg):
                        ci = self.cyclo[i]
                        if ci:
                            nxt[i] = nxt.get(i, 0) - c * ci
            self._zpow.append({b: c for b, c in nxt.items() if c})

    # -- normal forms ------------------------------------------------------
    def _normalize(self, raw: dict) -> dict:
        out: dict[tuple, object] = {}
        stack = [item for item in raw.items() if item[1]]
        while stack:
            exps, coef = stack.pop()
            if not coef:
                continue
            a, b, ts = exps[0], exps[1], exps[2:]
            if a >= 2:
                if self.eps:
                    stack.append(((a - 1, b) + ts, coef * self.eps))
                stack.append(((a - 2, b) + ts, -coef * self.q0))
                continue
            if b >= self.zdeg:
                for b2, c2 in self._zpow[b].items():
                    stack.append(((a, b2) + ts, coef * c2))
                continue
            for j in range(self.s):
                if ts[j] >= self.orders[j]:
                    nts = list(ts)
                    nts[j] -= self.orders[j]
                    for (ca, cb), cc in self.cs[j].items():
                        stack.append(((a + ca, b + cb) + tuple(nts), coef * cc))
                    break
            else:
                prev = out.get(exps)
                if prev is None:
                    out[exps] = coef
                else:
                    out[exps] = prev + coef
                continue
        return {k: v for k, v in out.items() if v}

    def elem(self, raw: dict) -> "VrElem":
        return VrElem(self, self._normalize(raw))

    # -- constructors ------------------------------------------------------
    def zero(self) -> "VrElem":
        return VrElem(self, {})

    def one(self) -> "VrElem":
        return self.from_fraction(1)

    def from_fraction(self, c) -> "VrElem":
        c = Fraction(c)
        if c.denominator == 1:
            c = c.numerator
        key = (0, 0) + (0,) * self.s
        return VrElem(self, {key: c} if c else {})

    def gen_x(self) -> "VrElem":
        return self.elem({(1, 0) + (0,) * self.s: 1})

    def zeta_pow(self, j: int) -> "VrElem":
        zeros = (0,) * self.s
        table = self._zpow[j % self.w if self.w > 1 else 0]
        return VrElem(self, {(0, b) + zeros: c for b, c in table.items()})

    def t_pow(self, j: int, e: int) -> "VrElem":
        exps = [0, 0] + [0] * self.s
        exps[2 + j] = e
        return self.elem({tuple(exps): 1})

    def from_quadint(self, alpha: QuadInt) -> "VrElem":
        if alpha.D != self.D:
            raise ValueError("mismatched discriminants")
        zero = (0,) * self.s
        return self.elem({(0, 0) + zero: alpha.a, (1, 0) + zero: alpha.b})

    def root_of_unity(self, t: TeichRep) -> "VrElem":
        """Represent zeta_m^e in this ring (m must divide w, 2, or 2w)."""
        m, e = t.m, t.e
        if m == 1:
            return self.one()
        if self.w % m == 0:
            return self.zeta_pow(e * (self.w // m))
        if m == 2:
            return self.from_fraction(-1)
        if self.w % 2 == 1 and m % 2 == 0 and self.w % (m // 2) == 0 and m // 2 > 1:
            # zeta_2m' with m' | w odd: split off the sign by CRT on exponents
            E = e * (2 * self.w // m)
            sign = E % 2
            zexp = E * pow(2, -1, self.w) % self.w
            out = self.zeta_pow(zexp)
            return -out if sign else out
        raise ValueError(f"zeta_{m} does not live in this value ring (w={self.w})")


class VrElem:
    __slots__ = ("ring", "d")

    def __init__(self, ring: ValueRing, d: dict):
        self.ring = ring
        self.d = d

    def __eq__(self, other):
        return isinstance(other, VrElem) and self.ring is other.ring and self.d == other.d

    def __hash__(self):
        return hash(tuple(sorted(self.d.items())))

    def is_zero(self) -> bool:
        return not self.d

    def __add__(self, other: "VrElem") -> "VrElem":
        out = dict(self.d)
        for k, v in other.d.items():
            nv = out.get(k, 0) + v
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
        return VrElem(self.ring, out)

    def __neg__(self) -> "VrElem":
        return VrElem(self.ring, {k: -v for k, v in self.d.items()})

    def __sub__(self, other: "VrElem") -> "VrElem":
        return self + (-other)

    def __mul__(self, other: "VrElem") -> "VrElem":
        raw: dict[tuple, object] = {}
        for k1, v1 in self.d.items():
            for k2, v2 in other.d.items():
                key = tuple(x + y for x, y in zip(k1, k2))
                raw[key] = raw.get(key, 0) + v1 * v2
        return self.ring.elem(raw)

    def __pow__(self, e: int) -> "VrElem":
        if e < 0:
            raise ValueError("negative powers are not defined in the value ring")
        acc, base = self.ring.one(), self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def as_string(self) -> str:
        """Canonical normal-form string, terms sorted by exponent tuple."""
        if not self.d:
            return "0"
        names = ["g", "z"] + [f"t{j+1}" for j in range(self.ring.s)]
        terms = []
        for exps in sorted(self.d):
            coef = self.d[exps]
            parts = [str(coef)]
            for name, e in zip(names, exps):
                if e == 1:
                    parts.append(name)
                elif e > 1:
                    parts.append(f"{name}^{e}")
            terms.append("*".join(parts))
        return " + ".join(terms)


# ---------------------------------------------------------------------------
# Hecke characters


@dataclass(frozen=True)
class HeckeChar:
    D: int
    k: int
    cond: IdealRep
    rg: ResidueGroup
    fp: tuple[int, ...]  # exponent on each residue-group generator
    w: int
    zeta_exps: tuple[int, ...]  # value of gen_i as zeta_w^zeta_exps[i]
    class_ideals: tuple[IdealRep, ...]
    class_betas: tuple[QuadInt, ...]
    class_part: object  # "canonical" or tuple of zeta_w exponents
    ring: ValueRing
    inv_cs: tuple = ()  # inverses of the relation constants, one per generator

    def finite_exponent(self, alpha: QuadInt) -> int:
        """zeta_w exponent of eps_f(alpha) for alpha coprime to the conductor."""
        if self.w == 1:
            self.rg.dlog(alpha)  # raises if not a unit
            return 0
        d = self.rg.dlog(alpha)
        return sum(di * ei for di, ei in zip(d, self.zeta_exps)) % self.w

    def finite_value(self, alpha: QuadInt) -> VrElem:
        return self.ring.zeta_pow(self.finite_exponent(alpha))

    def to_json(self) -> dict:
        return {
            "disc": self.D,
            "weight": self.k,
            "conductor": {"n": self.cond.n, "b": self.cond.b},
            "finite_part": list(self.fp),
            "class_part": (
                "canonical" if self.class_part == "canonical" else list(self.class_part)
            ),
        }


def _canonical_class_ideal(D: int, form, avoid: set[int]) -> IdealRep:
    cg = class_group(D)
    target = form.reduced()
    n = 1
    while n <= 4 * abs(D) * max(avoid | {1}) + 1000:
        for a in ideals_of_norm(D, n):
            if any(a.norm() % p == 0 for p in avoid):
                continue
            if a.as_form().reduced() == target:
                return a
        n += 1
    raise AssertionError("no class representative coprime to the conductor found")


def build_hecke_char(
    D: int,
    k: int,
    cond: IdealRep,
    finite_part,
    class_part="canonical",
    avoid_primes=(),
) -> HeckeChar:
    """Assemble a Hecke character of infinity type (k-1, 0) and conductor cond.

    finite_part lists a root-of-unity exponent for each generator of
    (O_K/cond)^*: the value on generator i of order n_i is zeta_{n_i}^e_i.
    Raises if unit consistency fails or the conductor is not exact.
    """
    if k < 2:
        raise ValueError("weight must be >= 2")
    rg = residue_group(D, cond)
    fp = tuple(int(e) % n for e, n in zip(finite_part, rg.orders))
    if len(fp) != len(rg.orders):
        raise ValueError("finite part must assign one exponent per generator")

    # value orders and the root-of-unity order w
    w = 1
    zexp_data = []
    for e, n in zip(fp, rg.orders):
        g = gcd(e, n) if e else n
        m = n // g
        zexp_data.append((m, e // g if e else 0))
        w = lcm(w, m)
    zeta_exps = tuple((e * (w // m)) % w if m > 1 else 0 for m, e in zexp_data)

    # class extension
    cg = class_group(D)
    avoid = set(avoid_primes)
    for p in factorint(cond.norm()) if cond.norm() > 1 else ():
        avoid.add(p)
    class_ideals, class_betas = [], []
    for gform, h in zip(cg.gens, cg.orders):
        b = _canonical_class_ideal(D, gform, avoid)
        beta = principal_generator(ideal_pow(b, h))
        if beta is None:
            raise AssertionError("generator power is not principal")
        class_ideals.append(b)
        class_betas.append(beta)

    # interim ring-free finite part evaluation for the relation constants
    def fin_exp(alpha: QuadInt) -> int:
        if w == 1:
            rg.dlog(alpha)
            return 0
        d = rg.dlog(alpha)
        return sum(di * ei for di, ei in zip(d, zeta_exps)) % w

    if class_part != "canonical":
        class_part = tuple(int(a) % w for a in class_part)
        if len(class_part) != len(cg.orders):
            raise ValueError("class part must list one twist exponent per generator")

    cs = []
    eps, q0 = disc_eps(D), omega_norm(D)
    for j, (beta, h) in enumerate(zip(class_betas, cg.orders)):
        zj = fin_exp(beta)
        if class_part != "canonical":
            zj = (zj + class_part[j]) % w
        # c_j = zeta_w^zj * beta^(k-1) as a polynomial in (x, z)
        poly = {(0, 0): beta.a, (1, 0): beta.b}
        acc = {(0, 0): 1}
        for _ in range(k - 1):
            raw: dict[tuple, int] = {}
            for (a1, b1), v1 in acc.items():
                for (a2, b2), v2 in poly.items():
                    key = (a1 + a2, b1 + b2)
                    raw[key] = raw.get(key, 0) + v1 * v2
            # reduce x-degree with x^2 = eps*x - q0
            acc = {}
            stack = list(raw.items())
            while stack:
                (a, bz), v = stack.pop()
                if not v:
                    continue
                if a >= 2:
                    if eps:
                        stack.append(((a - 1, bz), v * eps))
                    stack.append(((a - 2, bz), -v * q0))
                else:
                    acc[(a, bz)] = acc.get((a, bz), 0) + v
            acc = {kk: vv for kk, vv in acc.items() if vv}
        cdict = {}
        for (a, bz), v in acc.items():
            cdict[(a, (bz + zj) % w if w > 1 else 0)] = v
        cs.append(cdict)

    ring = ValueRing(D, w, cg.orders, tuple(cs))
    inv_cs = []
    for j, beta in enumerate(class_betas):
        zj = fin_exp(beta)
        if class_part != "canonical":
            zj = (zj + class_part[j]) % w
        inv = ring.zeta_pow(-zj % w if w > 1 else 0)
        inv = inv * ring.from_quadint(beta.conj()) ** (k - 1)
        inv = inv * ring.from_fraction(Fraction(1, beta.norm() ** (k - 1)))
        inv_cs.append(inv)
    chi = HeckeChar(
        D, k, cond, rg, fp, w, zeta_exps,
        tuple(class_ideals), tuple(class_betas),
        class_part, ring, tuple(inv_cs),
    )

    # unit consistency: eps_f(u) * u^(k-1) = 1 for every unit
    for u in units(D):
        val = chi.finite_value(u) * ring.from_quadint(u) ** (k - 1)
        if val != ring.one():
            raise ValueError(
                f"unit inconsistency: eps_f(u)*u^(k-1) != 1 at u = {u.a}+{u.b}w"
            )

    # conductor exactness: nontrivial on units congruent to 1 mod cond/P
    if not cond.is_unit_ideal():
        for P, _ in factor_ideal(cond):
            smaller = ideal_divide_prime(cond, P)
            exact = False
            c, n = cond.content, cond.n
            one = QuadInt(D, 1, 0)
            for x in range(c * n):
                for y in range(c):
                    alpha = QuadInt(D, x, y)
                    if not quadint_in_ideal(alpha - one, smaller):
                        continue
                    try:
                        if chi.finite_exponent(alpha) % w != 0:
                            exact = True
                            break
                    except ValueError:
                        continue
                if exact:
                    break
            if not exact:
                raise ValueError(
                    f"conductor not exact: character trivial on 1 + cond/P at P of norm {P.norm()}"
                )
    return chi


# ---------------------------------------------------------------------------
# evaluation


def evaluate(chi: HeckeChar, a: IdealRep) -> VrElem:
    """delta_H(a) for an integral ideal a coprime to the conductor."""
    if a.D != chi.D:
        raise ValueError("mismatched discriminants")
    if not ideals_coprime(a, chi.cond):
        raise ValueError("ideal is not coprime to the conductor")
    cg = class_group(chi.D)
    evec = cg.dlog(a.as_form())
    I = a
    for bj, ej, hj in zip(chi.class_ideals, evec, cg.orders):
        fj = (hj - ej) % hj
        if fj:
            I = ideal_multiply(I, ideal_pow(bj, fj))
    beta = principal_generator(I)
    if beta is None:
        raise AssertionError("class decomposition failed to reach a principal ideal")
    R = chi.ring
    out = chi.finite_value(beta) * R.from_quadint(beta) ** (chi.k - 1)
    for j, (ej, hj) in enumerate(zip(evec, cg.orders)):
        if ej:
            out = out * R.t_pow(j, ej) * chi.inv_cs[j]
    return out


# ---------------------------------------------------------------------------
# reductions to finite fields


@dataclass(frozen=True)
class ReductionMap:
    ring: ValueRing
    field: FiniteField
    x_img: FFElem
    z_img: FFElem
    t_imgs: tuple[FFElem, ...]

    @property
    def ell(self) -> int:
        return self.field.ell

    @property
    def r(self) -> int:
        return self.field.r

    def _power_tables(self):
        tables = getattr(self, "_pows", None)
        if tables is None:
            R, F = self.ring, self.field
            xp = [F.one(), self.x_img]
            zp = [F.one()]
            for _ in range(max(R.zdeg, 1)):
                zp.append(zp[-1] * self.z_img)
            tp = []
            for j, h in enumerate(R.orders):
                col = [F.one()]
                for _ in range(h):
                    col.append(col[-1] * self.t_imgs[j])
                tp.append(col)
            tables = (xp, zp, tp)
            object.__setattr__(self, "_pows", tables)
        return tables

    def reduce(self, elem: VrElem) -> FFElem:
        if elem.ring is not self.ring:
            raise ValueError("element belongs to a different value ring")
        F = self.field
        xp, zp, tp = self._power_tables()
        acc = F.zero()
        for exps, coef in elem.d.items():
            num, den = coef.numerator, coef.denominator
            if den % F.ell == 0:
                raise ValueError("coefficient denominator is divisible by ell")
            c = F.scalar(num % F.ell)
            if den != 1:
                c = c * F.inv(F.scalar(den % F.ell))
            term = c * xp[exps[0]] * zp[exps[1]]
            for j, e in enumerate(exps[2:]):
                term = term * tp[j][e]
            acc = acc + term
        return acc

    def describe(self) -> dict:
        return {
            "ell": self.ell,
            "r": self.r,
            "omega": self.x_img.code(),
            "zeta": self.z_img.code(),
            "t": [t.code() for t in self.t_imgs],
        }


def reduce_value(x: VrElem, m: ReductionMap) -> FFElem:
    return m.reduce(x)


def build_reductions(R: ValueRing, ell: int) -> list[ReductionMap]:
    """All ring homomorphisms into the smallest common F_{ell^r}.

    The field is the splitting field of the relation system, so images of the
    formal roots t_j may land in a proper extension even when one root exists
    lower down; the enumeration is ordered by element codes.
    """
    if not is_prime(ell) or ell < 3:
        raise ValueError("reduction characteristic must be an odd prime")
    if R.w % ell == 0:
        raise ValueError("ell divides the root-of-unity order of the ring")
    k = kronecker(R.D, ell)
    r_x = 1 if k >= 0 else 2
    d_z = multiplicative_order(ell % R.w, R.w) if R.w > 1 else 1
    r1 = lcm(r_x, d_z)

    minpoly = [R.q0, -R.eps, 1]
    hprimes = []
    for h in R.orders:
        hp = h
        while hp % ell == 0:
            hp //= ell
        hprimes.append(hp)

    s = 1
    while True:
        r = r1 * s
        if ell**r > 10**7:
            raise ValueError("no valid assignment within the field-size bound")
        F = finite_field(ell, r)
        x_roots = F.poly_roots(list(minpoly))
        if not x_roots:
            s += 1
            continue
        if R.w > 1:
            g = F.generator()
            z_imgs = sorted(
                (
                    F.pow(g, j * ((F.q - 1) // R.w))
                    for j in range(1, R.w + 1)
                    if gcd(j, R.w) == 1
                ),
                key=FFElem.code,
            )
        else:
            z_imgs = [F.one()]
        maps = []
        complete = True
        for x0 in x_roots:
            for z0 in z_imgs:
                t_choices = []
                for j in range(R.s):
                    cbar = _reduce_xz(R.cs[j], F, x0, z0)
                    if cbar.is_zero():
                        raise ValueError(
                            "no valid assignment: relation constant reduces to zero"
                        )
                    roots = F.nth_roots(cbar, R.orders[j])
                    if len(roots) < hprimes[j]:
                        complete = False
                        break
                    t_choices.append(roots)
                if not complete:
                    break
                combos = [()]
                for roots in t_choices:
                    combos = [c + (t,) for c in combos for t in roots]
                for combo in combos:
                    maps.append(ReductionMap(R, F, x0, z0, combo))
            if not complete:
                break
        if complete:
            if not maps:
                raise ValueError("no valid assignment for the reduction maps")
            maps.sort(
                key=lambda m: (m.x_img.code(), m.z_img.code(), [t.code() for t in m.t_imgs])
            )
            return maps
        s += 1


def _reduce_xz(cdict: dict, F: FiniteField, x0: FFElem, z0: FFElem) -> FFElem:
    acc = F.zero()
    for (a, b), coef in cdict.items():
        num, den = coef.numerator, coef.denominator
        if den % F.ell == 0:
            raise ValueError("coefficient denominator is divisible by ell")
        c = F.scalar(num % F.ell) * F.inv(F.scalar(den % F.ell))
        acc = acc + c * F.pow(x0, a) * F.pow(z0, b)
    return acc
