"""
Graded rings R(C, D) = sum_n H^0(C, O([nD])) T^n of an ample Q-divisor D.

The canonical module and its inverse have graded pieces

    [K_R]_n      = H^0(C, O(K_C + [Frc(D) + nD]))
    [K_R^-1]_n   = H^0(C, O(-K_C + [-Frc(D) + nD]))

so every dimension here reduces to an h^0 on the curve.  Over the projective
line the section spaces are built explicitly inside k(x) and multiplied, which
lets ``ng_decide`` compare Tr(K_R) = K_R * K_R^-1 with the maximal ideal
degree by degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .divisors import (
    CurveMismatch,
    IntegralDivisor,
    ProjectiveLine,
    QDivisor,
    Unknown,
    DivisorClass,
    denominator_lcm,
    fraction_str,
    frc,
    is_unknown,
    round_down,
)
from .linalg import Echelon

PARTS = ("R", "K", "Kinv")

GORENSTEIN = "Gorenstein"
NG_NOT_GORENSTEIN = "NearlyGorensteinNotGorenstein"
NOT_NG = "NotNearlyGorenstein"
UNKNOWN = "Unknown"

RATIONAL = "Rational"
ELLIPTIC = "Elliptic"
OTHER = "Other"


@dataclass(frozen=True)
class DemazurePair:
    curve: object
    D: QDivisor

    def __post_init__(self):
        if self.D.curve != self.curve:
            raise CurveMismatch("D is not a divisor on the given curve")
        if self.D.degree <= 0:
            raise ValueError(f"D must have positive degree, got {fraction_str(self.D.degree)}")

    @property
    def genus(self):
        return self.curve.genus

    @property
    def frc(self) -> QDivisor:
        return frc(self.D)

    @property
    def period(self) -> int:
        """lcm of the denominators of D; [(n + period) D] = [nD] + period*D."""
        return denominator_lcm(self.D)


@dataclass
class NGVerdict:
    verdict: str
    evidence: list = field(default_factory=list)

    def __post_init__(self):
        if self.verdict == UNKNOWN and not self.evidence:
            raise ValueError("an Unknown verdict must explain itself")

    def cite(self, rule, **witness):
        self.evidence.append((rule, witness))
        return self

    def to_json(self):
        return {"verdict": self.verdict,
                "evidence": [{"rule": r, "witness": w} for r, w in self.evidence]}


@dataclass
class GradedRingProfile:
    a: object
    b: object
    m: object
    pg: object
    sing_type: object
    gorenstein: object

    def to_json(self):
        out, unknown = {}, {}
        for key, val in [("a", self.a), ("b", self.b), ("m", self.m), ("pg", self.pg),
                         ("type", self.sing_type), ("gorenstein", self.gorenstein)]:
            if is_unknown(val):
                out[key] = None
                unknown[key] = val.reason
            else:
                out[key] = val
        if unknown:
            out["unknown"] = unknown
        return out


def family_pair(r: int, p: int, q: int) -> DemazurePair:
    """(P^1, (r-1)Q - (p/q)(P_1 + ... + P_r)) with Q at infinity."""
    coords = {"Q": None}
    coords.update({f"P{i}": i - 1 for i in range(1, r + 1)})
    C = ProjectiveLine.with_points(coords)
    coeffs = {"Q": r - 1}
    coeffs.update({f"P{i}": Fraction(-p, q) for i in range(1, r + 1)})
    return DemazurePair(C, QDivisor(C, coeffs))


def e8_pair() -> DemazurePair:
    """(P^1, -P0 + P1/2 + P2/3 + P3/5), the ring k[X,Y,Z]/(X^2+Y^3+Z^5)."""
    C = ProjectiveLine.with_points({"P0": None, "P1": 0, "P2": 1, "P3": -1})
    return DemazurePair(C, QDivisor(C, {"P0": -1, "P1": Fraction(1, 2),
                                        "P2": Fraction(1, 3), "P3": Fraction(1, 5)}))


def veronese(pair: DemazurePair, d: int) -> DemazurePair:
    """R^(d) = R(C, dD)."""
    if d < 1:
        raise ValueError("Veronese degree must be positive")
    return DemazurePair(pair.curve, d * pair.D)


# --------------------------------------------------------------------------
# graded dimensions


def piece(pair: DemazurePair, part: str, n: int) -> DivisorClass:
    """The integral class whose sections give the degree-n piece of ``part``."""
    if part == "R":
        return DivisorClass.of(pair.curve, 0, round_down(n * pair.D).coeffs)
    if part == "K":
        return DivisorClass.of(pair.curve, 1, round_down(pair.frc + n * pair.D).coeffs)
    if part == "Kinv":
        return DivisorClass.of(pair.curve, -1, round_down(n * pair.D - pair.frc).coeffs)
    raise ValueError(f"part must be one of {PARTS}")


def graded_dim(pair: DemazurePair, part: str, n: int):
    cls = piece(pair, part, n)
    if cls.degree < 0:
        return 0
    return pair.curve.h0(cls)


def _first_nonzero(pair, part, start):
    """Least n >= start with a nonzero degree-n piece.

    Classes of degree >= g have sections by Riemann-Roch, which bounds the scan.
    """
    g = pair.genus
    gap = None
    n = start
    while True:
        cls = piece(pair, part, n)
        d = cls.degree
        if d >= 0:
            dim = pair.curve.h0(cls)
            if is_unknown(dim) and d >= g:
                dim = 1
            if is_unknown(dim):
                gap = gap or dim
            elif dim > 0:
                if gap is not None:
                    return Unknown(f"{part}_{n} != 0 but a lower degree is undecided: {gap.reason}")
                return n
        n += 1


def _start(pair, sign):
    """Smallest n with deg(sign*(K_C + Frc(D)) + nD) >= 0."""
    base = sign * (2 * pair.genus - 2 + pair.frc.degree)
    return math.ceil(-base / pair.D.degree)


def a_invariant(pair):
    n = _first_nonzero(pair, "K", _start(pair, 1))
    return n if is_unknown(n) else -n


def b_invariant(pair):
    return _first_nonzero(pair, "Kinv", _start(pair, -1))


def m_invariant(pair):
    return _first_nonzero(pair, "R", 1)


def geometric_genus(pair):
    """p_g = sum_{n >= 0} h^1([nD]); terms vanish once deg [nD] >= 2g - 1."""
    g = pair.genus
    total = 0
    s = pair.frc.degree
    n = 0
    while n * pair.D.degree - s < 2 * g - 1 + 1:
        cls = piece(pair, "R", n)
        dual = DivisorClass.of(pair.curve, 1) - cls
        h = 0 if dual.degree < 0 else pair.curve.h0(dual)
        if is_unknown(h):
            return Unknown(f"p_g needs h^1([{n}D]): {h.reason}")
        total += h
        n += 1
    return total


def singularity_type(pair):
    g = pair.genus
    if g == 0:
        if geometric_genus(pair) == 0:
            return RATIONAL
        return ELLIPTIC if tomari_pattern(pair) else OTHER
    if g == 1:
        return ELLIPTIC if piece(pair, "R", 1).degree >= 0 else OTHER
    return OTHER


def tomari_pattern(pair) -> bool:
    """deg[m1 D] = -2 once, deg[iD] = -1 otherwise below m = min{n : deg[nD] >= 0}."""
    twos = 0
    n = 1
    while True:
        d = piece(pair, "R", n).degree
        if d >= 0:
            return twos == 1
        if d == -2:
            twos += 1
        elif d != -1:
            return False
        n += 1


def gorenstein_shift(pair):
    """The only integer a for which K_C + Frc(D) - aD could be principal, else None."""
    ratio = (2 * pair.genus - 2 + pair.frc.degree) / pair.D.degree
    if ratio.denominator != 1:
        return None
    a = int(ratio)
    if not (pair.frc - a * pair.D).is_integral:
        return None
    return a


def gorenstein_test(pair):
    """K_R is free iff K_C + Frc(D) ~ aD for an integer a."""
    a = gorenstein_shift(pair)
    if a is None:
        return False
    rest = pair.frc - a * pair.D
    cls = DivisorClass.of(pair.curve, 1, rest.coeffs)
    return pair.curve.is_principal(cls)


def invariants(pair: DemazurePair) -> GradedRingProfile:
    return GradedRingProfile(
        a=a_invariant(pair),
        b=b_invariant(pair),
        m=m_invariant(pair),
        pg=geometric_genus(pair),
        sing_type=singularity_type(pair),
        gorenstein=gorenstein_test(pair),
    )


@dataclass
class NecessaryCheck:
    status: str  # "pass", "fail" or "unknown"
    reason: str = ""

    @property
    def passed(self):
        return self.status == "pass"


def necessary_ng(pair: DemazurePair, profile: GradedRingProfile | None = None) -> NecessaryCheck:
    """Cheap obstructions to nearly Gorenstein, from a, b, m and dimensions."""
    prof = profile or invariants(pair)
    gor = prof.gorenstein
    if is_unknown(gor):
        return NecessaryCheck("unknown", gor.reason)
    if gor:
        return NecessaryCheck("pass", "Gorenstein")
    for name in ("a", "b", "m"):
        v = getattr(prof, name)
        if is_unknown(v):
            return NecessaryCheck("unknown", f"{name}: {v.reason}")
    a, b, m = prof.a, prof.b, prof.m
    if -a + b != m:
        return NecessaryCheck("fail", f"-a+b = {-a + b} differs from m = {m}")
    ratio = (2 * pair.genus - 2 + pair.frc.degree) / pair.D.degree
    if ratio.denominator == 1 and ratio > 0:
        r1 = graded_dim(pair, "R", 1)
        if is_unknown(r1):
            return NecessaryCheck("unknown", f"dim R_1: {r1.reason}")
        if r1 > 0:
            return NecessaryCheck(
                "fail", f"deg(K_C + Frc(D)) = {ratio} deg(D) with R_1 != 0")
    k = graded_dim(pair, "K", -a)
    if is_unknown(k):
        return NecessaryCheck("unknown", f"dim K_{-a}: {k.reason}")
    if k == 1:
        lb, rm = graded_dim(pair, "Kinv", b), graded_dim(pair, "R", m)
        if is_unknown(lb) or is_unknown(rm):
            return NecessaryCheck("unknown", "dim Kinv_b or dim R_m undecided")
        if lb != rm:
            return NecessaryCheck(
                "fail", f"dim K_{-a} = 1 but dim Kinv_{b} = {lb} != dim R_{m} = {rm}")
    return NecessaryCheck("pass", "")


# --------------------------------------------------------------------------
# explicit section spaces on P^1
#
# A section of O(A) is written N(x) / prod_{finite P} (x - c_P)^{a_P}; the
# sections are exactly the polynomials N with deg N <= deg A.  Multiplying
# into a larger divisor A >= A1 + A2 multiplies numerators by the shift
# prod (x - c_P)^{a_P - a1_P - a2_P}.


def _poly_mul(f, g):
    out = {}
    for i, a in f.items():
        for j, b in g.items():
            out[i + j] = out.get(i + j, 0) + a * b
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def _linear_power(c, e):
    f = {0: Fraction(1)}
    for _ in range(e):
        f = _poly_mul(f, {1: Fraction(1), 0: -c})
    return f


def _shift_poly(curve, exps):
    f = {0: Fraction(1)}
    for lab, e in exps.items():
        c = curve.coord(lab)
        if c is not None and e:
            f = _poly_mul(f, _linear_power(c, e))
    return f


@dataclass
class FunctionSpace:
    """Subspace of H^0(P^1, O(A)) given by numerator polynomials.

    ``basis`` holds sparse polynomials ``{exponent: Fraction}`` relative to the
    denominator prod_{finite P} (x - c_P)^{A_P}; every numerator has degree at
    most ``bound = deg A``.
    """

    divisor: IntegralDivisor
    basis: list
    full: bool = False

    @classmethod
    def whole(cls, divisor):
        d = int(divisor.degree)
        return cls(divisor, [{i: Fraction(1)} for i in range(d + 1)], full=True)

    @property
    def bound(self):
        return int(self.divisor.degree)

    @property
    def dim(self):
        return len(self.basis)

    def evaluate(self, f, x):
        """Value at x of the rational function with numerator f."""
        num = sum(c * Fraction(x) ** k for k, c in f.items())
        den = Fraction(1)
        for lab, a in self.divisor.coeffs.items():
            c = self.divisor.curve.coord(lab)
            if c is not None:
                den *= (Fraction(x) - c) ** int(a)
        return num / den

    def contains(self, other: "FunctionSpace") -> bool:
        if other.divisor != self.divisor:
            other = other.embed(self.divisor)
        ech = Echelon()
        for v in self.basis:
            ech.add(v)
        return all(ech.contains(v) for v in other.basis)

    def embed(self, target: IntegralDivisor) -> "FunctionSpace":
        """The same functions, seen inside H^0(O(target)) for target >= divisor."""
        shift = _shift_exponents(target, self.divisor)
        s = _shift_poly(target.curve, shift)
        return FunctionSpace(target, _reduced([_poly_mul(f, s) for f in self.basis]))


def _shift_exponents(target, *factors):
    exps = target.coeffs
    for F in factors:
        for lab, c in F.coeffs.items():
            exps[lab] = exps.get(lab, 0) - c
    if any(e < 0 for e in exps.values()):
        raise ValueError("product does not land in the target section space")
    return {lab: int(e) for lab, e in exps.items()}


def _reduced(vectors):
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return ech.basis()


def section_divisor(pair: DemazurePair, part: str, n: int) -> IntegralDivisor:
    """The concrete integral divisor [nD], K_C + [Frc + nD] or -K_C + [nD - Frc]."""
    cls = piece(pair, part, n)
    K = pair.curve.canonical_divisor()
    base = IntegralDivisor(pair.curve, dict(cls.points))
    if cls.k:
        base = base + cls.k * K
    return base if isinstance(base, IntegralDivisor) else IntegralDivisor(pair.curve, base.coeffs)


def section_space(pair: DemazurePair, part: str, n: int) -> FunctionSpace:
    if not isinstance(pair.curve, ProjectiveLine):
        raise TypeError("explicit section spaces need a ProjectiveLine model")
    A = section_divisor(pair, part, n)
    if A.degree < 0:
        return FunctionSpace(A, [], full=True)
    return FunctionSpace.whole(A)


def product_span(F1: FunctionSpace, F2: FunctionSpace, target: IntegralDivisor) -> FunctionSpace:
    """Span of all products f*g inside H^0(O(target))."""
    shift = _shift_exponents(target, F1.divisor, F2.divisor)
    s = _shift_poly(target.curve, shift)
    seen, vecs = set(), []
    for f in F1.basis:
        for g in F2.basis:
            h = _poly_mul(_poly_mul(f, g), s)
            key = tuple(sorted(h.items()))
            if key not in seen:
                seen.add(key)
                vecs.append(h)
    return FunctionSpace(target, _reduced(vecs))


class _ProductSum:
    """Sum of products of full section spaces inside one target space.

    A product of full spaces is S * (polynomials of degree <= e) for a shift
    polynomial S; generators contained in another one are dropped before any
    linear algebra is done.
    """

    def __init__(self, target: IntegralDivisor):
        self.target = target
        self.gens = []

    def add(self, A1: IntegralDivisor, A2: IntegralDivisor):
        if A1.degree < 0 or A2.degree < 0:
            return
        shift = _shift_exponents(self.target, A1, A2)
        finite = {lab: e for lab, e in shift.items()
                  if self.target.curve.coord(lab) is not None and e}
        e = int(A1.degree + A2.degree)
        self.gens.append((finite, e, sum(finite.values())))

    def _pruned(self):
        keep = []
        for i, (s, e, ds) in enumerate(self.gens):
            covered = False
            for j, (s2, e2, ds2) in enumerate(self.gens):
                if i == j:
                    continue
                if all(s.get(lab, 0) >= c for lab, c in s2.items()) and ds + e <= ds2 + e2:
                    if (s, e) != (s2, e2) or j < i:
                        covered = True
                        break
            if not covered:
                keep.append((s, e))
        return keep

    def echelon(self, ech=None, stop_at=None):
        ech = ech if ech is not None else Echelon()
        for s, e in self._pruned():
            S = _shift_poly(self.target.curve, s)
            for i in range(e + 1):
                ech.add({k + i: c for k, c in S.items()})
                if stop_at is not None and ech.rank >= stop_at:
                    return ech
        return ech


def decomposable_space(pair, n) -> FunctionSpace:
    """sum_{0<i<n} R_i R_{n-i} inside R_n."""
    target = section_divisor(pair, "R", n)
    ps = _ProductSum(target)
    for i in range(1, n // 2 + 1):
        ps.add(section_divisor(pair, "R", i), section_divisor(pair, "R", n - i))
    return FunctionSpace(target, ps.echelon().basis())


def trace_space(pair, n, profile=None) -> FunctionSpace:
    """Tr(K_R)_n = sum_j [K_R]_j [K_R^-1]_{n-j} inside R_n."""
    prof = profile or invariants(pair)
    target = section_divisor(pair, "R", n)
    ps = _ProductSum(target)
    for j in range(-prof.a, n - prof.b + 1):
        ps.add(section_divisor(pair, "K", j), section_divisor(pair, "Kinv", n - j))
    return FunctionSpace(target, ps.echelon().basis())


def last_vanishing_degree(pair) -> int:
    """Largest n >= 1 with R_n = 0 (0 if there is none)."""
    s = pair.frc.degree
    last = 0
    n = 1
    # deg [nD] >= n deg D - deg Frc(D), so R_n != 0 once that exceeds -1
    while n * pair.D.degree - s <= -1 or n <= 1:
        if piece(pair, "R", n).degree < 0:
            last = n
        n += 1
    return last


def default_cap(pair) -> int:
    return 8 * pair.period + 40


def ng_decide(pair: DemazurePair, cap: int | None = None) -> NGVerdict:
    """Decide nearly Gorenstein for a pair over the projective line.

    By graded Nakayama, m is contained in Tr(K_R) iff every R_n equals
    Tr_n + (m^2)_n.  Degrees with R_n = (m^2)_n need no check.  With
    q = lcm of denominators, q*D is integral and R_q R_{n-q} = R_n whenever
    R_{n-q} != 0 (multiplication of polynomial spaces on P^1 is onto), so no
    minimal generator lives above (last degree with R_n = 0) + q.
    """
    if not isinstance(pair.curve, ProjectiveLine):
        raise TypeError("ng_decide needs a ProjectiveLine model")
    cap = default_cap(pair) if cap is None else cap
    if gorenstein_test(pair):
        return NGVerdict(GORENSTEIN).cite(
            "gorenstein: K_C + Frc(D) ~ aD", a=gorenstein_shift(pair))
    prof = invariants(pair)
    out = NGVerdict(NG_NOT_GORENSTEIN)
    out.cite("invariants", a=prof.a, b=prof.b, m=prof.m)
    nec = necessary_ng(pair, prof)
    out.cite("necessary conditions (-a+b = m, degree obstruction, dimension match)",
             status=nec.status, reason=nec.reason)
    q = pair.period
    bound = last_vanishing_degree(pair) + q
    if bound > cap:
        return NGVerdict(UNKNOWN, out.evidence).cite(
            "generator bound exceeds cap", bound=bound, cap=cap)
    checked = []
    for n in range(1, bound + 1):
        target = section_divisor(pair, "R", n)
        dim = int(target.degree) + 1
        if dim <= 0:
            continue
        dec = _ProductSum(target)
        for i in range(1, n // 2 + 1):
            dec.add(section_divisor(pair, "R", i), section_divisor(pair, "R", n - i))
        ech = dec.echelon(stop_at=dim)
        if ech.rank == dim:
            continue
        dec_rank = ech.rank
        tr = _ProductSum(target)
        for j in range(-prof.a, n - prof.b + 1):
            tr.add(section_divisor(pair, "K", j), section_divisor(pair, "Kinv", n - j))
        tr_alone = tr.echelon(stop_at=dim).rank
        ech = tr.echelon(ech, stop_at=dim)
        checked.append(n)
        if ech.rank < dim:
            return NGVerdict(NOT_NG, out.evidence).cite(
                "R_n not inside Tr_n + (m^2)_n", degree=n, dim_R=dim,
                dim_decomposable=dec_rank, dim_trace=tr_alone,
                dim_sum=ech.rank)
    out.cite("R_n = Tr_n + (m^2)_n in every degree with new generators",
             generator_degrees=checked, bound=bound, period=q)
    return out
