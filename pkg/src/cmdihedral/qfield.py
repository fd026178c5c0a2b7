"""Exact arithmetic in imaginary quadratic fields.

Integers are written a + b*w where w = (eps + sqrt(D))/2 and eps = D mod 2,
so w has trace eps and norm (eps - D)/4.  Integral ideals are kept in
two-generator Hermite form content * (Z*n + Z*(b + sqrt(D))/2) with
b^2 = D (mod 4n); classes are computed by passing to binary quadratic forms
and reducing.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt

from .arith import (
    abelian_structure,
    extended_gcd,
    factorint,
    is_prime,
    sqrt_mod_prime,
)


def check_fundamental(D: int) -> None:
    """Reject anything but a negative fundamental discriminant."""
    if D >= 0:
        raise ValueError("discriminant must be negative")
    if D % 4 == 1:
        m = D
    elif D % 4 == 0 and (D // 4) % 4 in (2, 3):
        m = D // 4
    else:
        raise ValueError(f"{D} is not a fundamental discriminant")
    m = abs(m)
    for p, e in factorint(m).items():
        if e > 1:
            raise ValueError(f"{D} is not a fundamental discriminant")


def disc_eps(D: int) -> int:
    return D % 2


def omega_norm(D: int) -> int:
    # norm of w = (eps + sqrt(D))/2
    eps = disc_eps(D)
    return (eps - D) // 4


@dataclass(frozen=True)
class QuadInt:
    """a + b*w in the maximal order of Q(sqrt(D))."""

    D: int
    a: int
    b: int

    def __add__(self, other: "QuadInt") -> "QuadInt":
        return QuadInt(self.D, self.a + other.a, self.b + other.b)

    def __sub__(self, other: "QuadInt") -> "QuadInt":
        return QuadInt(self.D, self.a - other.a, self.b - other.b)

    def __neg__(self) -> "QuadInt":
        return QuadInt(self.D, -self.a, -self.b)

    def __mul__(self, other: "QuadInt") -> "QuadInt":
        eps, q0 = disc_eps(self.D), omega_norm(self.D)
        a, b, c, d = self.a, self.b, other.a, other.b
        return QuadInt(self.D, a * c - q0 * b * d, a * d + b * c + eps * b * d)

    def conj(self) -> "QuadInt":
        eps = disc_eps(self.D)
        return QuadInt(self.D, self.a + eps * self.b, -self.b)

    def norm(self) -> int:
        eps, q0 = disc_eps(self.D), omega_norm(self.D)
        return self.a * self.a + eps * self.a * self.b + q0 * self.b * self.b

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0


def units(D: int) -> list[QuadInt]:
    """The unit group of the maximal order (order 2, 4 or 6)."""
    one = QuadInt(D, 1, 0)
    w = QuadInt(D, 0, 1)
    if D == -4:
        us = [one, w]
    elif D == -3:
        us = [one, w, w * w]
    else:
        us = [one]
    return us + [-u for u in us]


@dataclass(frozen=True)
class QuadForm:
    """Positive definite integral binary quadratic form a*x^2 + b*x*y + c*y^2."""

    a: int
    b: int
    c: int

    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def reduced(self) -> "QuadForm":
        a, b, c = self.a, self.b, self.c
        if a <= 0:
            raise ValueError("form is not positive definite")
        while True:
            if not (-a < b <= a):
                r = (a - b) // (2 * a)
                b, c = b + 2 * r * a, a * r * r + b * r + c
            if a > c:
                a, b, c = c, -b, a
                continue
            if a == c and b < 0:
                b = -b
            return QuadForm(a, b, c)


@lru_cache(maxsize=None)
def reduced_forms(D: int) -> tuple[QuadForm, ...]:
    """All reduced forms of discriminant D, one per class, sorted by (a, b, c)."""
    check_fundamental(D)
    out = []
    amax = isqrt(abs(D) // 3)
    for a in range(1, amax + 1):
        for b in range(-a, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            f = QuadForm(a, b, c)
            if f.is_reduced():
                out.append(f)
    return tuple(sorted(out, key=lambda f: (f.a, f.b, f.c)))


def _norm_b(b: int, n: int) -> int:
    # normalize b mod 2n into (-n, n]
    return (b + n - 1) % (2 * n) - n + 1


@dataclass(frozen=True)
class IdealRep:
    """content * (Z*n + Z*(b + sqrt(D))/2), an integral ideal of norm content^2 * n."""

    D: int
    n: int
    b: int
    content: int = 1

    def __post_init__(self):
        if self.n <= 0 or self.content <= 0:
            raise ValueError("ideal parts must be positive")
        if (self.b * self.b - self.D) % (4 * self.n):
            raise ValueError("b^2 != D mod 4n")
        object.__setattr__(self, "b", _norm_b(self.b, self.n))

    def norm(self) -> int:
        return self.content * self.content * self.n

    def mprime(self) -> int:
        # w-coefficient offset: the module is content*(Z*n + Z*(mprime + w))
        return (self.b - disc_eps(self.D)) // 2

    def basis(self) -> tuple[QuadInt, QuadInt]:
        c = self.content
        return QuadInt(self.D, c * self.n, 0), QuadInt(self.D, c * self.mprime(), c)

    def as_form(self) -> QuadForm:
        return QuadForm(self.n, self.b, (self.b * self.b - self.D) // (4 * self.n))

    def conj(self) -> "IdealRep":
        return IdealRep(self.D, self.n, -self.b, self.content)

    def is_unit_ideal(self) -> bool:
        return self.content == 1 and self.n == 1

    def sort_key(self):
        return (self.content, self.n, self.b)


def unit_ideal(D: int) -> IdealRep:
    return IdealRep(D, 1, disc_eps(D))


def principal_ideal(alpha: QuadInt) -> IdealRep:
    if alpha.is_zero():
        raise ValueError("zero generates no ideal")
    D, eps, q0 = alpha.D, disc_eps(alpha.D), omega_norm(alpha.D)
    x, y = alpha.a, alpha.b
    rows = [(x, y), (-q0 * y, x + eps * y)]
    return _ideal_from_rows(D, rows)


def _ideal_from_rows(D: int, rows) -> IdealRep:
    """Hermite form of a rank-2 module given by rows (x, y) = x + y*w."""
    eps = disc_eps(D)
    xs = []
    carrier = None
    for x, y in rows:
        if y == 0:
            if x:
                xs.append(abs(x))
            continue
        if carrier is None:
            carrier = (x, y)
            continue
        cx, cy = carrier
        g, u, v = extended_gcd(cy, y)
        leftover = (cy // g) * x - (y // g) * cx
        if leftover:
            xs.append(abs(leftover))
        carrier = (u * cx + v * x, g)
    if carrier is None or not xs:
        raise ValueError("module does not have full rank")
    cx, cy = carrier
    if cy < 0:
        cx, cy = -cx, -cy
    a = 0
    for x in xs:
        a = gcd(a, x)
    if a % cy or cx % cy:
        raise ValueError("module is not an ideal")
    n = a // cy
    mp = (cx // cy) % n
    return IdealRep(D, n, 2 * mp + eps, cy)


def ideal_multiply(a: IdealRep, b: IdealRep) -> IdealRep:
    """Product ideal via module multiplication and Hermite reduction."""
    if a.D != b.D:
        raise ValueError("mismatched discriminants")
    u1, v1 = a.basis()
    u2, v2 = b.basis()
    rows = []
    for p in (u1 * u2, u1 * v2, v1 * u2, v1 * v2):
        rows.append((p.a, p.b))
    return _ideal_from_rows(a.D, rows)


def ideal_pow(a: IdealRep, e: int) -> IdealRep:
    if e < 0:
        raise ValueError("negative ideal power")
    acc = unit_ideal(a.D)
    base = a
    while e:
        if e & 1:
            acc = ideal_multiply(acc, base)
        base = ideal_multiply(base, base)
        e >>= 1
    return acc


def quadint_in_ideal(alpha: QuadInt, a: IdealRep) -> bool:
    c, n, mp = a.content, a.n, a.mprime()
    if alpha.b % c:
        return False
    bb = alpha.b // c
    return (alpha.a - c * bb * mp) % (c * n) == 0


def in_prime(alpha: QuadInt, p: IdealRep) -> bool:
    """Membership in a prime ideal via its residue map."""
    if p.content > 1:  # inert prime (q)
        q = p.content
        return alpha.a % q == 0 and alpha.b % q == 0
    q = p.n
    s = (disc_eps(p.D) - p.b) // 2  # image of w in O/p
    return (alpha.a + alpha.b * s) % q == 0


def ideal_in_prime(a: IdealRep, p: IdealRep) -> bool:
    u, v = a.basis()
    return in_prime(u, p) and in_prime(v, p)


def ideals_coprime(a: IdealRep, f: IdealRep) -> bool:
    if gcd(a.norm(), f.norm()) == 1:
        return True
    for p, _ in factor_ideal(f):
        if ideal_in_prime(a, p):
            return False
    return True


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D|n), completely multiplicative in n."""
    if n == 0:
        return 1 if D in (1, -1) else 0
    out = 1
    if n < 0:
        n = -n
        if D < 0:
            out = -out
    while n % 2 == 0:
        n //= 2
        if D % 2 == 0:
            return 0
        if D % 8 in (3, 5):
            out = -out
    # now n odd positive; Jacobi via reciprocity on the residue
    a = D % n
    while n > 1:
        if a == 0:
            return 0
        t = 0
        while a % 2 == 0:
            a //= 2
            t ^= 1
        if t and n % 8 in (3, 5):
            out = -out
        if a % 4 == 3 and n % 4 == 3:
            out = -out
        a, n = n % a, a
    return out


@dataclass(frozen=True)
class Splitting:
    kind: str  # "split" | "inert" | "ramified"
    primes: tuple[IdealRep, ...]


@lru_cache(maxsize=None)
def primes_above(D: int, p: int) -> Splitting:
    check_fundamental(D)
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    k = kronecker(D, p)
    if k == -1:
        return Splitting("inert", (IdealRep(D, 1, disc_eps(D), p),))
    if p == 2:
        if k == 1:
            return Splitting("split", (IdealRep(D, 2, -1), IdealRep(D, 2, 1)))
        b = 0 if D % 8 == 0 else 2
        return Splitting("ramified", (IdealRep(D, 2, b),))
    if k == 0:
        b = p if D % 2 else 0
        return Splitting("ramified", (IdealRep(D, p, b),))
    r = sqrt_mod_prime(D % p, p)
    if (r - D) % 2:
        r += p
    pair = sorted([IdealRep(D, p, r), IdealRep(D, p, -r)], key=lambda q: q.b)
    return Splitting("split", tuple(pair))


def splitting_type(D: int, p: int) -> Splitting:
    return primes_above(D, p)


@lru_cache(maxsize=None)
def ideals_of_norm(D: int, n: int) -> tuple[IdealRep, ...]:
    """All integral ideals of norm n, assembled multiplicatively and sorted."""
    check_fundamental(D)
    if n <= 0:
        raise ValueError("norm must be positive")
    if n == 1:
        return (unit_ideal(D),)
    parts: list[list[IdealRep]] = []
    for p, e in sorted(factorint(n).items()):
        sp = primes_above(D, p)
        if sp.kind == "split":
            P, Q = sp.primes
            local = [
                ideal_multiply(ideal_pow(P, i), ideal_pow(Q, e - i))
                for i in range(e + 1)
            ]
        elif sp.kind == "inert":
            if e % 2:
                return ()
            local = [IdealRep(D, 1, disc_eps(D), p ** (e // 2))]
        else:
            local = [ideal_pow(sp.primes[0], e)]
        parts.append(local)
    out = [unit_ideal(D)]
    for local in parts:
        out = [ideal_multiply(a, b) for a in out for b in local]
    return tuple(sorted(out, key=IdealRep.sort_key))


def factor_ideal(a: IdealRep) -> list[tuple[IdealRep, int]]:
    """Prime ideal factorization, primes sorted by (norm, b)."""
    D = a.D
    exps: dict[IdealRep, int] = {}
    for p, v in factorint(a.content).items() if a.content > 1 else ():
        sp = primes_above(D, p)
        if sp.kind == "split":
            P, Q = sp.primes
            exps[P] = exps.get(P, 0) + v
            exps[Q] = exps.get(Q, 0) + v
        elif sp.kind == "inert":
            exps[sp.primes[0]] = exps.get(sp.primes[0], 0) + v
        else:
            exps[sp.primes[0]] = exps.get(sp.primes[0], 0) + 2 * v
    for p, v in factorint(a.n).items() if a.n > 1 else ():
        sp = primes_above(D, p)
        if sp.kind == "split":
            target = _norm_b(a.b, p)
            P = next(q for q in sp.primes if q.b == target)
            exps[P] = exps.get(P, 0) + v
        elif sp.kind == "ramified":
            if v != 1:
                raise AssertionError("primitive part has excess ramified valuation")
            P = sp.primes[0]
            exps[P] = exps.get(P, 0) + 1
        else:
            raise AssertionError("inert prime divides a primitive ideal norm")
    return sorted(exps.items(), key=lambda kv: (kv[0].norm(), kv[0].b))


def ideal_divide_prime(a: IdealRep, p: IdealRep) -> IdealRep:
    """a / p for a prime divisor p of a (rebuilt from the factorization)."""
    fac = factor_ideal(a)
    if p not in dict(fac):
        raise ValueError("prime does not divide the ideal")
    out = unit_ideal(a.D)
    for q, e in fac:
        if q == p:
            e -= 1
        out = ideal_multiply(out, ideal_pow(q, e))
    return out


@dataclass(frozen=True)
class ClassGroup:
    D: int
    reps: tuple[QuadForm, ...]
    gens: tuple[QuadForm, ...]
    orders: tuple[int, ...]
    table: tuple[tuple[int, ...], ...]

    @property
    def h(self) -> int:
        return len(self.reps)

    def dlog(self, f: QuadForm) -> tuple[int, ...]:
        return self._dlog[f.reduced()]

    def index_of(self, f: QuadForm) -> int:
        return self.reps.index(f.reduced())

    def identity(self) -> QuadForm:
        eps = disc_eps(self.D)
        return QuadForm(1, eps, (eps * eps - self.D) // 4).reduced()


def compose(f: QuadForm, g: QuadForm) -> QuadForm:
    """Composition of classes through ideal multiplication."""
    if f.disc() != g.disc():
        raise ValueError("mismatched discriminants")
    D = f.disc()
    prod = ideal_multiply(IdealRep(D, f.a, f.b), IdealRep(D, g.a, g.b))
    return prod.as_form().reduced()


@lru_cache(maxsize=None)
def class_group(D: int) -> ClassGroup:
    reps = reduced_forms(D)
    gens, orders, dlog = abelian_structure(list(reps), compose, reps[0])
    table = tuple(
        tuple(reps.index(compose(f, g)) for g in reps) for f in reps
    )
    cg = ClassGroup(D, reps, tuple(gens), tuple(orders), table)
    object.__setattr__(cg, "_dlog", dlog)
    return cg


def ideal_class(a: IdealRep, cg: ClassGroup | None = None) -> int:
    if cg is None:
        cg = class_group(a.D)
    return cg.index_of(a.as_form())


def principal_generator(a: IdealRep) -> QuadInt | None:
    """A generator when a is principal, else None (bounded norm-form search)."""
    D = a.D
    eps = disc_eps(D)
    N = a.norm()
    y = 0
    while y * y * abs(D) <= 4 * N:
        for yy in ((y,) if y == 0 else (y, -y)):
            s2 = 4 * N - abs(D) * yy * yy
            s = isqrt(s2)
            if s * s != s2:
                continue
            xs = sorted({(s - eps * yy) // 2, (-s - eps * yy) // 2}) if (s - eps * yy) % 2 == 0 else []
            for x in xs:
                cand = QuadInt(D, x, yy)
                if cand.norm() == N and quadint_in_ideal(cand, a):
                    return cand
        y += 1
    return None
