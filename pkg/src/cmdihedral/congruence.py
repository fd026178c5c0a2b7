"""Reduction of exact expansions, coefficientwise congruence comparison,
elliptic-curve Frobenius traces by point counting, and the scenario
orchestration for the built-in verification runs."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product

from .arith import is_prime, primes_upto
from .charmod import (
    HeckeChar,
    ReductionMap,
    build_hecke_char,
    build_reductions,
    residue_group,
)
from .ffield import FiniteField, finite_field
from .qfield import (
    IdealRep,
    check_fundamental,
    primes_above,
    unit_ideal,
)
from .qseries import QExpansion, delta_qexp, drop_multiples, sturm_bound, theta_series
from .serrepred import (
    DihedralDatum,
    SerrePrediction,
    delta_conductor_at_ell,
    nebentypus,
    predict_invariants,
    ramification_case,
)

SEARCH_ORDER_CAP = 500
SEARCH_MAP_CAP = 100
SEARCH_CANDIDATE_CAP = 10**4
QUICK_PRUNE_BOUND = 20


# ---------------------------------------------------------------------------
# elliptic curves


@dataclass(frozen=True)
class EllipticCurve:
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b_invariants()
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def __post_init__(self):
        if self.discriminant() == 0:
            raise ValueError("singular Weierstrass equation")


def curve_ap(E: EllipticCurve, p: int) -> int:
    """a_p = p + 1 - #E(F_p) by a quadratic character sum over x."""
    if not is_prime(p) or p > 10**5:
        raise ValueError("p must be a prime <= 10^5")
    if E.discriminant() % p == 0:
        raise ValueError(f"bad reduction at {p}")
    if p == 2:
        return p + 1 - _count_points_naive(E, p)
    half = (p - 1) // 2
    total = 0
    a1, a2, a3, a4, a6 = E.a1, E.a2, E.a3, E.a4, E.a6
    for x in range(p):
        g = (a1 * x + a3) ** 2 + 4 * (x * x * x + a2 * x * x + a4 * x + a6)
        g %= p
        if g == 0:
            continue
        total += 1 if pow(g, half, p) == 1 else -1
    return -total


def curve_ap_naive(E: EllipticCurve, p: int) -> int:
    """Oracle: a_p by brute force over all (x, y)."""
    if E.discriminant() % p == 0:
        raise ValueError(f"bad reduction at {p}")
    return p + 1 - _count_points_naive(E, p)


def _count_points_naive(E: EllipticCurve, p: int) -> int:
    count = 1  # point at infinity
    a1, a2, a3, a4, a6 = E.a1, E.a2, E.a3, E.a4, E.a6
    for x in range(p):
        rhs = (x * x * x + a2 * x * x + a4 * x + a6) % p
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - rhs) % p == 0:
                count += 1
    return count


# ---------------------------------------------------------------------------
# reductions and comparison


def reduce_expansion(f: QExpansion, m: ReductionMap) -> QExpansion:
    coeffs = [m.field.zero()] + [m.reduce(c) for c in f.coeffs[1:]]
    return QExpansion(m.field, coeffs, f.weight, f.level, f.character)


def reduce_int_expansion(f: QExpansion, ell: int, field: FiniteField | None = None) -> QExpansion:
    if f.ring != "int":
        raise ValueError("expected an integer expansion")
    F = field if field is not None else finite_field(ell, 1)
    if F.ell != ell:
        raise ValueError("field characteristic mismatch")
    coeffs = [F.zero()] + [F.scalar(c % ell) for c in f.coeffs[1:]]
    return QExpansion(F, coeffs, f.weight, f.level, f.character)


@dataclass(frozen=True)
class CongruenceReport:
    ell: int
    reduction_map: dict | None
    bound: int
    count: int
    mismatches: tuple
    verdict: bool

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "reduction_map": self.reduction_map,
            "bound": self.bound,
            "count": self.count,
            "mismatches": [list(m) for m in self.mismatches],
            "verdict": self.verdict,
        }


def _common_field(f: QExpansion, g: QExpansion):
    Ff, Fg = f.ring, g.ring
    if not isinstance(Ff, FiniteField) or not isinstance(Fg, FiniteField):
        raise ValueError("compare expects finite-field expansions")
    if Ff is Fg:
        return Ff, f.coeffs, g.coeffs
    if Ff.ell != Fg.ell:
        raise ValueError("expansions live in different characteristics")
    if Ff.r == 1:
        return Fg, [Fg.embed(c) for c in f.coeffs], g.coeffs
    if Fg.r == 1:
        return Ff, f.coeffs, [Ff.embed(c) for c in g.coeffs]
    raise ValueError("no canonical embedding between the two fields")


def compare(f: QExpansion, g: QExpansion, bound: int, indices=None) -> CongruenceReport:
    """Coefficientwise comparison over 1..bound (or the given indices)."""
    if f.prec < bound or g.prec < bound:
        raise ValueError("insufficient precision for the requested bound")
    F, fc, gc = _common_field(f, g)
    idx = range(1, bound + 1) if indices is None else [n for n in indices if n <= bound]
    mism = []
    for n in idx:
        if fc[n] != gc[n]:
            mism.append((n, fc[n].code(), gc[n].code()))
    rm = f.character if isinstance(f.character, dict) else None
    return CongruenceReport(
        F.ell, rm, bound, len(list(idx)), tuple(mism), not mism
    )


# ---------------------------------------------------------------------------
# scenarios


@dataclass(frozen=True)
class Scenario:
    disc: int
    weight: int
    ell: int
    char: object  # "search" or an explicit spec dict
    target: object  # "tau" or EllipticCurve
    bound_mode: str = "standard"
    cond: IdealRep | None = None
    bound: int | None = None
    perturb: int | None = None

    @staticmethod
    def from_json(obj: dict) -> "Scenario":
        try:
            disc = int(obj["disc"])
            weight = int(obj["weight"])
            ell = int(obj["ell"])
            char = obj["char"]
            target_spec = obj["target"]
            bound_mode = obj.get("bound_mode", "standard")
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed scenario: {exc}") from exc
        if bound_mode not in ("paper", "standard"):
            raise ValueError(f"unknown bound mode {bound_mode!r}")
        if target_spec == "tau":
            target = "tau"
        elif isinstance(target_spec, dict) and "curve" in target_spec:
            target = EllipticCurve(*[int(a) for a in target_spec["curve"]])
        else:
            raise ValueError("target must be 'tau' or {'curve': [a1,a2,a3,a4,a6]}")
        cond = None
        cond_spec = None
        if isinstance(char, dict) and "conductor" in char:
            cond_spec = char["conductor"]
        elif "cond" in obj:
            cond_spec = obj["cond"]
        if cond_spec is not None:
            cond = IdealRep(
                disc, int(cond_spec["n"]), int(cond_spec["b"]), int(cond_spec.get("c", 1))
            )
        if char != "search" and not isinstance(char, dict):
            raise ValueError("char must be 'search' or an explicit spec object")
        bound = obj.get("bound")
        perturb = obj.get("perturb")
        return Scenario(
            disc, weight, ell, char, target, bound_mode, cond,
            None if bound is None else int(bound),
            None if perturb is None else int(perturb),
        )

    def to_json(self) -> dict:
        out = {
            "disc": self.disc,
            "weight": self.weight,
            "ell": self.ell,
            "char": self.char,
            "target": (
                "tau"
                if self.target == "tau"
                else {"curve": [self.target.a1, self.target.a2, self.target.a3,
                                self.target.a4, self.target.a6]}
            ),
            "bound_mode": self.bound_mode,
        }
        if self.cond is not None:
            out["cond"] = {"n": self.cond.n, "b": self.cond.b}
        if self.bound is not None:
            out["bound"] = self.bound
        if self.perturb is not None:
            out["perturb"] = self.perturb
        return out


def builtin_scenario(name: str) -> Scenario:
    if name == "delta23":
        return Scenario(
            disc=-23, weight=12, ell=23, char="search", target="tau",
            bound_mode="standard", cond=IdealRep(-23, 23, 23),
        )
    if name == "curve65533":
        return Scenario(
            disc=-71, weight=2, ell=7, char="search",
            target=EllipticCurve(0, -1, 1, -18507, -989382),
            bound_mode="standard", cond=IdealRep(-71, 71, 71), bound=500,
        )
    raise ValueError(f"unknown builtin scenario {name!r}")


# ---------------------------------------------------------------------------
# orchestration


@dataclass(frozen=True)
class RunResult:
    prediction: SerrePrediction
    report: CongruenceReport
    character: HeckeChar | None
    reduction: ReductionMap | None
    diagnostics: tuple = ()


def _scenario_datum(s: Scenario) -> tuple[DihedralDatum, IdealRep]:
    check_fundamental(s.disc)
    sp = primes_above(s.disc, s.ell)
    case = ramification_case(s.ell, sp.kind, s.weight)
    cond = s.cond
    if cond is None:
        if s.target != "tau":
            raise ValueError("curve scenarios must specify the character conductor")
        cond = unit_ideal(s.disc)
        d_ord = delta_conductor_at_ell(case)
        if d_ord:
            P = sp.primes[0]
            cond = P
    # split the conductor into away/at-ell parts and validate
    away_norm = cond.norm()
    at_ell = 0
    while away_norm % s.ell == 0:
        away_norm //= s.ell
        at_ell += 1
    expected = delta_conductor_at_ell(case)
    if at_ell != expected:
        raise ValueError(
            f"conductor exponent at ell is {at_ell}, case table expects {expected}"
        )
    if at_ell == 0:
        away = cond
    else:
        # strip the prime above ell (residue degree 1 in the ramified cases)
        from .qfield import ideal_divide_prime

        away = ideal_divide_prime(cond, sp.primes[0])
    datum = DihedralDatum(s.ell, s.disc, s.weight, away, case)
    return datum, cond


def _target_expansion(s: Scenario, bound: int, prec: int):
    """(expansion over F_ell, comparison indices or None)."""
    F = finite_field(s.ell, 1)
    if s.target == "tau":
        tgt = reduce_int_expansion(
            drop_multiples(delta_qexp(prec), s.ell), s.ell, F
        )
        idx = None
    else:
        E = s.target
        disc_E = E.discriminant()
        coeffs = [F.zero() for _ in range(prec + 1)]
        idx = []
        for p in primes_upto(bound):
            if p == s.ell or disc_E % p == 0:
                continue
            coeffs[p] = F.scalar(curve_ap(E, p) % s.ell)
            idx.append(p)
        tgt = QExpansion(F, coeffs, s.weight, None)
    if s.perturb is not None:
        n = s.perturb
        if not (1 <= n <= prec):
            raise ValueError("perturbation index out of range")
        coeffs = list(tgt.coeffs)
        coeffs[n] = coeffs[n] + F.one()
        tgt = QExpansion(F, coeffs, tgt.weight, tgt.level, tgt.character)
        if idx is not None and n not in idx:
            idx.append(n)
            idx.sort()
    return tgt, idx


def _scenario_bounds(s: Scenario) -> tuple[int, int]:
    """(comparison bound, series precision)."""
    level = s.cond.norm() * abs(s.disc) if s.cond is not None else None
    if s.bound is not None:
        bound = s.bound
    else:
        if level is None:
            raise ValueError("cannot size the comparison bound without a conductor")
        bound = sturm_bound(s.weight, level, s.bound_mode)
    if level is not None:
        prec = max(
            bound,
            sturm_bound(s.weight, level, "paper"),
            sturm_bound(s.weight, level, "standard"),
        ) if s.bound is None else bound
    else:
        prec = bound
    return bound, prec


def _candidate_finite_parts(rg) -> list[tuple[int, ...]]:
    ranges = [range(n) for n in rg.orders]
    total = 1
    for n in rg.orders:
        total *= n
    if total > SEARCH_CANDIDATE_CAP:
        raise ValueError("finite-part candidate space exceeds the search cap")
    return [tuple(t) for t in product(*ranges)]


def search_matching_char(s: Scenario):
    """Enumerate finite parts and reduction maps; return every matching
    (character, reduction map, report) triple plus skip diagnostics."""
    datum, cond = _scenario_datum(s)
    bound, prec = _scenario_bounds(s)
    target, indices = _target_expansion(s, bound, prec)
    rg = residue_group(s.disc, cond)
    matches = []
    diagnostics = []
    quick = min(QUICK_PRUNE_BOUND, bound)
    quick_idx = None if indices is None else [n for n in indices if n <= quick]
    for fp in _candidate_finite_parts(rg):
        label = {"finite_part": list(fp)}
        try:
            chi = build_hecke_char(
                s.disc, s.weight, cond, fp, "canonical", avoid_primes=(s.ell,)
            )
        except ValueError as exc:
            diagnostics.append({**label, "skipped": str(exc)})
            continue
        if chi.w > SEARCH_ORDER_CAP:
            diagnostics.append({**label, "skipped": "finite-part order above cap"})
            continue
        try:
            maps = build_reductions(chi.ring, s.ell)
        except ValueError as exc:
            diagnostics.append({**label, "skipped": str(exc)})
            continue
        if len(maps) > SEARCH_MAP_CAP:
            diagnostics.append({**label, "skipped": "reduction fan-out above cap"})
            continue
        theta_quick = theta_series(chi, quick)
        surviving = []
        for m in maps:
            red = reduce_expansion(theta_quick, m)
            rep = compare(red, target, quick, quick_idx)
            if rep.verdict:
                surviving.append(m)
        if not surviving:
            diagnostics.append({**label, "skipped": "pruned at the quick bound"})
            continue
        theta_full = theta_series(chi, prec)
        for m in surviving:
            red = reduce_expansion(theta_full, m)
            rep = compare(red, target, bound, indices)
            rep = CongruenceReport(
                rep.ell, m.describe(), rep.bound, rep.count, rep.mismatches, rep.verdict
            )
            if rep.verdict:
                matches.append((chi, m, rep))
            else:
                diagnostics.append(
                    {**label, "map": m.describe(), "failed_at": rep.mismatches[0][0]}
                )
    return matches, diagnostics


def run_scenario(s: Scenario) -> RunResult:
    """Serre prediction plus the verification report for the scenario."""
    datum, cond = _scenario_datum(s)
    bound, prec = _scenario_bounds(s)

    if s.char == "search":
        matches, diagnostics = search_matching_char(s)
        if matches:
            chi, rmap, report = matches[0]
        else:
            chi, rmap = None, None
            report = CongruenceReport(s.ell, None, bound, 0, (), False)
        neb = None
        if chi is not None:
            eps, _ = nebentypus(chi)
            neb = eps.descriptor()
        pred = predict_invariants(datum, neb)
        return RunResult(pred, report, chi, rmap, tuple(
            json.dumps(d, sort_keys=True) for d in diagnostics
        ))

    # explicit character
    spec = s.char
    chi = build_hecke_char(
        s.disc,
        s.weight,
        cond,
        spec["finite_part"],
        spec.get("class_part", "canonical"),
        avoid_primes=(s.ell,),
    )
    target, indices = _target_expansion(s, bound, prec)
    maps = build_reductions(chi.ring, s.ell)
    theta = theta_series(chi, prec)
    best = None
    for m in maps:
        red = reduce_expansion(theta, m)
        rep = compare(red, target, bound, indices)
        rep = CongruenceReport(
            rep.ell, m.describe(), rep.bound, rep.count, rep.mismatches, rep.verdict
        )
        if rep.verdict:
            best = (m, rep)
            break
        if best is None:
            best = (m, rep)
    rmap, report = best
    eps, _ = nebentypus(chi)
    pred = predict_invariants(datum, eps.descriptor())
    return RunResult(pred, report, chi, rmap)
