"""Shared integer arithmetic helpers (primality, factoring, square roots,
finite abelian group structure)."""

from __future__ import annotations

from math import gcd, isqrt

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray(b"\x01") * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = b"\x00" * ((n - p * p) // p + 1)
    return [i for i, v in enumerate(sieve) if v]


def factorint(n: int) -> dict[int, int]:
    """Prime factorization by trial division; n is desk scale here."""
    if n < 1:
        raise ValueError("factorint expects a positive integer")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    ds = [1]
    for p, e in factorint(n).items():
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return sorted(ds)


def prime_to_part(n: int, ell: int) -> int:
    """Largest divisor of n coprime to ell."""
    while n % ell == 0:
        n //= ell
    return n


def extended_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b), g >= 0."""
    r0, r1, x0, x1, y0, y1 = a, b, 1, 0, 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if r0 < 0:
        r0, x0, y0 = -r0, -x0, -y0
    return r0, x0, y0


def sqrt_mod_prime(a: int, p: int) -> int | None:
    """A square root of a modulo the prime p, or None. Tonelli-Shanks."""
    a %= p
    if p == 2 or a == 0:
        return a % p
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t * t % p, 1
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def multiplicative_order(a: int, n: int) -> int:
    if n == 1:
        return 1
    if gcd(a, n) != 1:
        raise ValueError("element not invertible")
    phi = 1
    for p, e in factorint(n).items():
        phi *= (p - 1) * p ** (e - 1)
    o = phi
    for p in factorint(phi):
        while o % p == 0 and pow(a, o // p, n) == 1:
            o //= p
    return o


def abelian_structure(elements, mul, identity):
    """Invariant-factor style generating set of a finite abelian group.

    elements is the full group in a fixed (deterministic) order, mul a binary
    operation oracle.  Returns (gens, orders, dlog) where every generator g_j
    has exact group order orders[j], the map (e_1..e_s) -> prod g_j^e_j is a
    bijection onto the group, and dlog sends each element to its exponent
    vector.  Each step picks a maximal-order element of the quotient that
    lifts with the same order, so the generators span an internal direct sum.
    """
    n = len(elements)

    def power(x, k):
        acc = identity
        while k:
            if k & 1:
                acc = mul(acc, x)
            x = mul(x, x)
            k >>= 1
        return acc

    fac = factorint(n) if n > 1 else {}
    orders_of = {}
    for x in elements:
        o = n
        for p in fac:
            while o % p == 0 and power(x, o // p) == identity:
                o //= p
        orders_of[x] = o

    gens, orders = [], []
    span = {identity: ()}
    while len(span) < n:
        qmax, pick = 0, None
        for x in elements:
            if x in span:
                continue
            ox = orders_of[x]
            if ox <= qmax:
                continue
            q = None
            for d in divisors(ox):
                if power(x, d) in span:
                    q = d
                    break
            if q > qmax and q == ox:
                qmax, pick = q, x
        if pick is None:
            raise AssertionError("no pure lift found; group oracle inconsistent")
        gens.append(pick)
        orders.append(qmax)
        new_span = {}
        pw = identity
        for e in range(qmax):
            for y, vec in span.items():
                new_span[mul(y, pw)] = vec + (e,)
            pw = mul(pw, pick)
        span = new_span
    dlog = {x: vec + (0,) * (len(gens) - len(vec)) for x, vec in span.items()}
    return gens, orders, dlog
