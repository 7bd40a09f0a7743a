"""
Rule engine for cone singularities R(C, D), D integral ample, genus g >= 2.

Inputs are symbolic: a divisor class k*K_C + (points) on a GenericCurve or a
HyperellipticOnePoint, plus declared facts ("flags").  A fact is taken from
the flags when declared, otherwise computed from the curve model where that
is possible, otherwise derived from other facts through equivalences that
hold in the relevant degree.  Each verdict names the single rule that fired
and lists the facts it consumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .demazure import GORENSTEIN, NG_NOT_GORENSTEIN, NOT_NG, UNKNOWN
from .divisors import (
    DivisorClass,
    GenericCurve,
    HyperellipticOnePoint,
    PointId,
    SchemaError,
    Unknown,
    curve_from_json,
    is_unknown,
)

AG = "AlmostGorenstein"
NOT_AG = "NotAlmostGorenstein"


class ConeInputError(ValueError):
    """Flags that are unknown, contradictory or inconsistent with the degree."""


# fact name -> (description, degree of D it presupposes as a function of g or None)
FACTS = {
    "hyperelliptic": ("C is hyperelliptic", None),
    "gorenstein": ("K_C ~ aD for an integer a (R Gorenstein)", None),
    "D~K+P": ("D ~ K_C + P for some point P", lambda g: 2 * g - 1),
    "D~K-P": ("D ~ K_C - P for a hyperelliptic point P", lambda g: 2 * g - 3),
    "D~2K": ("D ~ 2K_C", lambda g: 4 * g - 4),
    "D~2K+P": ("D ~ 2K_C + P for some point P", lambda g: 4 * g - 3),
    "D~3K": ("D ~ 3K_C", lambda g: 6 * g - 6),
    "D~3K-P": ("D ~ 3K_C - P for some point P", lambda g: 6 * g - 7),
    "D~3P": ("D ~ 3P for a hyperelliptic point P", lambda g: 3),
    "D~6P": ("D ~ 6P for a hyperelliptic point P", lambda g: 6),
    "D=K+B,h0(B)=2,bpf": ("D ~ K_C + B with h0(B) = 2 and |B| base-point free", None),
    "h0(3K-D)=0": ("h0(3K_C - D) = 0", None),
    "O(D) generated": ("O_C(D) is generated by global sections", None),
    "R1=K0*L1": ("H0(K_C) * H0(D - K_C) = H0(D)", None),
}

NEEDS_HYPERELLIPTIC = {"D~K-P", "D~3P", "D~6P"}


def _norm(s):
    return s.replace("_C", "").replace("∼", "~").replace(" ", "")


def parse_flag(flag: str):
    """'X' -> ('X', True), 'not X' -> ('X', False)."""
    s = " ".join(str(flag).split())
    value = True
    if s.lower().startswith("not "):
        s, value = s[4:], False
    for name in FACTS:
        if _norm(name) == _norm(s):
            return name, value
    raise ConeInputError(f"unknown flag {flag!r}; known facts: {sorted(FACTS)}")


@dataclass(frozen=True)
class SymbolicConeInput:
    curve: object
    D: DivisorClass
    flags: frozenset = frozenset()

    def __post_init__(self):
        if not isinstance(self.curve, (GenericCurve, HyperellipticOnePoint)):
            raise SchemaError("cone inputs live on a generic or hyperelliptic-point curve")
        if self.D.curve != self.curve:
            raise SchemaError("divisor class is not on the given curve")
        if self.genus < 2:
            raise SchemaError("cone rules need genus >= 2")
        if self.degree <= 0:
            raise SchemaError("D must be ample (positive degree)")

    @classmethod
    def make(cls, curve, k=0, points=None, flags=()):
        return cls(curve, DivisorClass.of(curve, k, points or {}), frozenset(flags))

    @classmethod
    def generic(cls, g, k=0, points=None, flags=(), hyperelliptic=None, attrs=None):
        """Class on a GenericCurve whose points are those named in ``points``."""
        attrs = attrs or {}
        pts = tuple(PointId(lab, frozenset(attrs.get(lab, {"generic"}))) for lab in (points or {}))
        curve = GenericCurve(points=pts, g=g, hyperelliptic=hyperelliptic)
        return cls.make(curve, k, points, flags)

    @property
    def genus(self):
        return self.curve.genus

    @property
    def degree(self):
        return self.D.degree

    @classmethod
    def from_json(cls, obj):
        """``{"genus", "hyperelliptic"?, "class": {"k", "points"}, "flags", "curve"?}``."""
        if not isinstance(obj, dict):
            raise SchemaError("cone input must be a JSON object")
        try:
            g = int(obj["genus"])
            klass = obj.get("class", {})
            k = int(klass.get("k", 0))
            points = {str(lab): int(c) for lab, c in klass.get("points", {}).items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad cone input: {exc}") from None
        flags = obj.get("flags", [])
        if not isinstance(flags, list):
            raise SchemaError("flags must be a list of strings")
        if "curve" in obj:
            curve = curve_from_json(obj["curve"])
            if curve.genus != g:
                raise SchemaError("curve genus differs from the declared genus")
            return cls.make(curve, k, points, flags)
        return cls.generic(g, k, points, flags, hyperelliptic=obj.get("hyperelliptic"))


@dataclass
class RuleVerdict:
    verdict: str
    rule_id: str
    preconditions_used: list = field(default_factory=list)
    missing: str | None = None

    def to_json(self):
        out = {"verdict": self.verdict, "rule": self.rule_id,
               "facts": [{"fact": f, "value": None if is_unknown(v) else v, "source": s}
                         for f, v, s in self.preconditions_used]}
        if self.missing:
            out["missing"] = self.missing
        return out


def _positive(h):
    return h if is_unknown(h) else h > 0


def _not(v):
    return v if is_unknown(v) else not v


class _Context:
    """Resolves facts for one input and records which ones a rule consumed."""

    def __init__(self, inp: SymbolicConeInput):
        self.inp = inp
        self.curve = inp.curve
        self.g = inp.genus
        self.d = inp.degree
        self.used = []
        self._cache = {}
        self._busy = set()
        self.flags = {}
        for raw in inp.flags:
            name, value = parse_flag(raw)
            if self.flags.get(name, value) != value:
                raise ConeInputError(f"flag {name!r} declared both true and false")
            self.flags[name] = value
        self._validate()

    # -- validation ------------------------------------------------------

    def _validate(self):
        g, d = self.g, self.d
        for name, value in self.flags.items():
            need = FACTS[name][1]
            if value and need is not None and need(g) != d:
                raise ConeInputError(
                    f"flag {name!r} needs deg D = {need(g)}, but deg D = {d}")
            if name in NEEDS_HYPERELLIPTIC and value:
                hyp = self._computed("hyperelliptic")
                if hyp is False or self.flags.get("hyperelliptic") is False:
                    raise ConeInputError(f"flag {name!r} needs a hyperelliptic curve")
            if name == "gorenstein" and value and (2 * g - 2) % d:
                raise ConeInputError("flag 'gorenstein' needs deg D to divide 2g - 2")
            if name == "h0(3K-D)=0":
                e = 6 * g - 6 - d
                if value and e >= g:
                    raise ConeInputError(f"h0(3K_C - D) > 0 since deg(3K_C - D) = {e} >= g")
                if not value and e < 0:
                    raise ConeInputError("h0(3K_C - D) = 0 since deg(3K_C - D) < 0")
            if name == "O(D) generated" and not value and d >= 2 * g:
                raise ConeInputError("O_C(D) is generated when deg D >= 2g")
            comp = self._computed(name)
            if not is_unknown(comp) and comp != value:
                raise ConeInputError(
                    f"flag {'' if value else 'not '}{name!r} contradicts the curve model")
        for name, value in self.flags.items():
            der = self._derived(name)
            if der is not None and not is_unknown(der[0]) and der[0] != value:
                raise ConeInputError(
                    f"flag {'' if value else 'not '}{name!r} contradicts {der[1]}")

    # -- fact resolution -------------------------------------------------

    def fact(self, name):
        value, source = self._resolve(name)
        entry = (name, value, source)
        if entry not in self.used:
            self.used.append(entry)
        return value

    def _resolve(self, name):
        if name in self._cache:
            return self._cache[name]
        if name in self.flags:
            out = (self.flags[name], "flag")
        else:
            val = self._computed(name)
            out = (val, "computed")
            if is_unknown(val) and name not in self._busy:
                self._busy.add(name)
                der = self._derived(name)
                self._busy.discard(name)
                if der is not None and not is_unknown(der[0]):
                    out = (der[0], f"derived from {der[1]}")
        if not self._busy:
            self._cache[name] = out
        return out

    def _h0(self, cls):
        return 0 if cls.degree < 0 else self.curve.h0(cls)

    def _principal(self, cls):
        return self.curve.is_principal(cls)

    def _weierstrass(self):
        if isinstance(self.curve, HyperellipticOnePoint):
            return [self.curve.P]
        return self.curve.weierstrass_points()

    def _multiple_of_w(self, n):
        """Whether D ~ nW for some Weierstrass point W."""
        hyp = self._computed("hyperelliptic")
        if hyp is False:
            return False
        if self.d != n:
            return False
        for w in self._weierstrass():
            p = self._principal(self.inp.D - DivisorClass.of(self.curve, 0, {w: n}))
            if p is True:
                return True
        return Unknown(f"cannot tell whether D ~ {n}W for a Weierstrass point W")

    def _computed(self, name):
        C, D, g, d = self.curve, self.inp.D, self.g, self.d
        K = DivisorClass.of(C, 1)
        point_model = isinstance(C, HyperellipticOnePoint)
        if name == "hyperelliptic":
            if point_model:
                return True
            if C.hyperelliptic is None:
                if C.weierstrass_points():
                    return True
                return Unknown("whether C is hyperelliptic")
            return bool(C.hyperelliptic)
        if name == "gorenstein":
            if (2 * g - 2) % d:
                return False
            return self._principal(K - ((2 * g - 2) // d) * D)
        if name in ("D~2K", "D~3K"):
            n = int(name[2])
            return False if d != n * (2 * g - 2) else self._principal(D - n * K)
        if name == "D~K+P":
            return False if d != 2 * g - 1 else _positive(self._h0(D - K))
        if name == "D~2K+P":
            return False if d != 4 * g - 3 else _positive(self._h0(D - 2 * K))
        if name == "D~3K-P":
            return False if d != 6 * g - 7 else _positive(self._h0(3 * K - D))
        if name == "D~K-P":
            return self._multiple_of_w(2 * g - 3)
        if name == "D~3P":
            return self._multiple_of_w(3)
        if name == "D~6P":
            return self._multiple_of_w(6)
        if name == "h0(3K-D)=0":
            h = self._h0(3 * K - D)
            return h if is_unknown(h) else h == 0
        if name == "O(D) generated":
            if d >= 2 * g:
                return True
            if point_model:
                n = C.multiple(D)
                return C.h0(D) > 0 and self._h0(DivisorClass.of(C, 0, {C.P: n - 1})) == C.h0(D) - 1
            return Unknown("whether O_C(D) is generated by global sections")
        if name == "D=K+B,h0(B)=2,bpf":
            B = D - K
            h = self._h0(B)
            if is_unknown(h):
                return Unknown("h0(D - K_C)")
            if h != 2:
                return False
            if point_model:
                m = C.multiple(B)
                return self._h0(DivisorClass.of(C, 0, {C.P: m - 1})) == 1
            return Unknown("whether |D - K_C| is base-point free")
        if name == "R1=K0*L1":
            if point_model:
                return _hyperelliptic_surjective(g, C.multiple(D))
            if d > 6 * g - 6:
                return True
            return Unknown("whether H0(K_C) * H0(D - K_C) = H0(D)")
        raise KeyError(name)

    def _derived(self, name):
        """(value, premise) from an equivalence valid in this degree, or None."""
        g, d = self.g, self.d
        pairs = []
        if g == 2 and d == 3:
            pairs.append(("O(D) generated", "D~K+P", True))
        if g == 2 and d == 5:
            pairs.append(("h0(3K-D)=0", "D~3K-P", True))
        for target, other, negate in pairs:
            if name in (target, other):
                premise = other if name == target else target
                v = self._peek(premise)
                if v is None:
                    return None
                return (_not(v) if negate else v, premise)
        if name == "R1=K0*L1" and g >= 2 and 2 * g - 2 < d:
            v = self._peek("h0(3K-D)=0")
            if v is True:
                return (True, "h0(3K-D)=0")
            v = self._peek("D~2K+P")
            if v is True and g == 3:
                return (False, "D~2K+P")
        return None

    def _peek(self, name):
        if name in self._busy:
            return None
        return self._resolve(name)[0]

    # -- verdict helpers -------------------------------------------------

    def verdict(self, verdict, rule):
        return RuleVerdict(verdict, rule, list(self.used))

    def unknown(self, rule, missing):
        return RuleVerdict(UNKNOWN, rule, list(self.used), missing=missing)

    def iff(self, rule, *conds):
        """NG iff every (fact, wanted) holds; Unknown names the first open fact."""
        open_fact = None
        for name, wanted in conds:
            v = self.fact(name)
            if is_unknown(v):
                open_fact = open_fact or name
            elif v != wanted:
                return self.verdict(NOT_NG, rule)
        if open_fact:
            return self.unknown(rule, open_fact)
        return self.verdict(NG_NOT_GORENSTEIN, rule)


def _hyperelliptic_surjective(g, n):
    """H0((2g-2)P) * H0((n-2g+2)P) = H0(nP) for a Weierstrass point P.

    Computed in k[X,Y,Z]/(Z^2 + f(X^2,Y)) = R(C, P); sections of K_C have
    degree below 2g+1, so no product meets the relation and f plays no role.
    """
    from .hypersurface import _ProductSpan, dim, hyperelliptic

    if n - (2 * g - 2) < 0:
        return False
    ring = hyperelliptic(g)
    span = _ProductSpan(ring, n)
    span.add(2 * g - 2, n - 2 * g + 2)
    return span.rank() == dim(ring, n)


def _genus2(ctx):
    d = ctx.d
    if d <= 2:
        return ctx.verdict(NOT_NG, "genus 2, deg D in {1, 2}: not NG")
    if d == 3:
        return ctx.iff("genus 2, deg D = 3: NG iff D ~ K_C + P", ("D~K+P", True))
    if d == 4:
        return ctx.iff("genus 2, deg D = 4: NG iff D ~ 2K_C", ("D~2K", True))
    if d == 5:
        return ctx.iff("genus 2, deg D = 5: NG iff h0(3K_C - D) = 0", ("h0(3K-D)=0", True))
    if d == 6:
        return ctx.iff("genus 2, deg D = 6: NG iff D not ~ 3K_C", ("D~3K", False))
    return ctx.verdict(NG_NOT_GORENSTEIN, "genus 2, deg D >= 7: NG")


def _genus3(ctx):
    d = ctx.d
    if d <= 2:
        return ctx.verdict(NOT_NG, "genus 3, deg D in {1, 2}: not NG")
    if d == 3:
        return ctx.iff("genus 3, deg D = 3: NG iff C hyperelliptic and D ~ 3P, P hyperelliptic",
                       ("hyperelliptic", True), ("D~3P", True))
    if d == 4:
        return ctx.verdict(NOT_NG, "genus 3, deg D = 4: not NG")
    if d == 5:
        return ctx.iff("genus 3, deg D = 5: NG iff D ~ K_C + P", ("D~K+P", True))
    if d == 6:
        return ctx.iff("genus 3, deg D = 6: NG iff C hyperelliptic and D ~ 6P, P hyperelliptic",
                       ("hyperelliptic", True), ("D~6P", True))
    if d == 7:
        return ctx.iff("genus 3, deg D = 7: NG iff D ~ K_C + B, h0(B) = 2, |B| base-point free",
                       ("D=K+B,h0(B)=2,bpf", True))
    if d == 8:
        return ctx.iff("genus 3, deg D = 8: NG iff D ~ 2K_C and C not hyperelliptic",
                       ("D~2K", True), ("hyperelliptic", False))
    if d <= 11:
        return ctx.iff("genus 3, 9 <= deg D <= 11: NG iff H0(K_C) * H0(D - K_C) = H0(D)",
                       ("R1=K0*L1", True))
    return ctx.verdict(NG_NOT_GORENSTEIN, "genus 3, deg D >= 12: NG")


def _general(ctx):
    g, d = ctx.g, ctx.d
    if d > 6 * g - 6:
        return ctx.verdict(NG_NOT_GORENSTEIN, "deg D > 6g - 6: NG")
    if d == 6 * g - 6:
        return ctx.verdict(NG_NOT_GORENSTEIN, "deg D = 6g - 6 with g >= 3: NG")
    if (2 * g - 2) % d == 0:
        h = ctx.curve.h0(ctx.inp.D)
        if is_unknown(h):
            return ctx.unknown("deg D divides 2g - 2 and h0(D) != 0: Gorenstein or not NG", "h0(D)")
        if h > 0:
            return ctx.verdict(NOT_NG, "deg D divides 2g - 2 and h0(D) != 0: Gorenstein or not NG")
    if d == g - 1:
        return ctx.verdict(NOT_NG, "deg D = g - 1: not NG")
    if d == 2 * g - 3:
        return ctx.iff("deg D = 2g - 3: NG iff C hyperelliptic and D ~ K_C - P, P hyperelliptic",
                       ("hyperelliptic", True), ("D~K-P", True))
    if d == 2 * g - 1:
        return ctx.iff("deg D = 2g - 1: NG iff D ~ K_C + P", ("D~K+P", True))
    if isinstance(ctx.curve, HyperellipticOnePoint):
        if d in (3, 4):
            return ctx.verdict(NG_NOT_GORENSTEIN, "D = dP, P hyperelliptic, d in {3, 4}: NG")
        if d == 6:
            v = NOT_NG if g % 3 == 2 else NG_NOT_GORENSTEIN
            return ctx.verdict(v, "D = 6P, P hyperelliptic: NG iff g is not 2 mod 3")
        if d >= 4 * g - 1:
            return ctx.verdict(NG_NOT_GORENSTEIN, "D = dP, P hyperelliptic, d >= 4g - 1: NG")
    if d > 2 * g - 2 and ctx.fact("h0(3K-D)=0") is True:
        return ctx.verdict(NG_NOT_GORENSTEIN, "deg D > 2g - 2 and h0(3K_C - D) = 0: NG")
    if d >= 2 * g + 1:
        return ctx.iff("deg D >= 2g + 1: NG iff H0(K_C) * H0(D - K_C) = H0(D)",
                       ("R1=K0*L1", True))
    return ctx.unknown(f"no classification rule for genus {g}, degree {d}",
                       f"classification of genus-{g} cones of degree {d}")


def classify_cone(inp: SymbolicConeInput) -> RuleVerdict:
    ctx = _Context(inp)
    g, d = ctx.g, ctx.d
    if (2 * g - 2) % d == 0:
        gor = ctx.fact("gorenstein")
        if gor is True:
            return ctx.verdict(GORENSTEIN, "K_C ~ aD: Gorenstein")
        if is_unknown(gor):
            return ctx.unknown("K_C ~ aD: Gorenstein", "gorenstein")
    if g == 2:
        return _genus2(ctx)
    if g == 3:
        return _genus3(ctx)
    return _general(ctx)


def almost_gorenstein_g2(inp: SymbolicConeInput) -> RuleVerdict:
    if inp.genus != 2:
        raise ValueError("the almost Gorenstein rules cover genus 2 only")
    ctx = _Context(inp)
    d = ctx.d
    if d <= 2:
        return ctx.verdict(AG, "AG genus 2, deg D <= 2: almost Gorenstein")
    if d == 3:
        rule = "AG genus 2, deg D = 3: AG iff O_C(D) is not generated"
        v = ctx.fact("O(D) generated")
        if is_unknown(v):
            return ctx.unknown(rule, "O(D) generated")
        return ctx.verdict(NOT_AG if v else AG, rule)
    rule = "AG genus 2, deg D >= 4: AG iff D ~ 2K_C"
    v = ctx.fact("D~2K")
    if is_unknown(v):
        return ctx.unknown(rule, "D~2K")
    return ctx.verdict(AG if v else NOT_AG, rule)


BOTH_CASES = {
    "both-a": "deg D = 3 and D ~ K_C + P",
    "both-b": "D ~ 2K_C",
}
NEITHER_CASES = {
    "neither-a": "deg D = 3 and O_C(D) generated",
    "neither-b": "deg D = 5 and D ~ 3K_C - P",
    "neither-c": "deg D = 6 and D ~ 3K_C",
}


@dataclass
class ComparisonReport:
    ng: RuleVerdict
    ag: RuleVerdict
    category: str
    listed_case: str | None

    @property
    def in_list(self):
        return self.listed_case is not None

    def to_json(self):
        return {"ng": self.ng.to_json(), "ag": self.ag.to_json(),
                "category": self.category, "listed_case": self.listed_case,
                "listed_description": {**BOTH_CASES, **NEITHER_CASES}.get(self.listed_case)}


def _listed_case(ctx):
    d = ctx.d
    if d == 3:
        if ctx.fact("D~K+P") is True:
            return "both-a"
        if ctx.fact("O(D) generated") is True:
            return "neither-a"
    if ctx.fact("D~2K") is True:
        return "both-b"
    if d == 5 and ctx.fact("D~3K-P") is True:
        return "neither-b"
    if d == 6 and ctx.fact("D~3K") is True:
        return "neither-c"
    return None


def compare_ng_ag_g2(inp: SymbolicConeInput) -> ComparisonReport:
    """Joint NG / AG verdict for genus 2, with the matching listed case if any."""
    ng = classify_cone(inp)
    ag = almost_gorenstein_g2(inp)
    if UNKNOWN in (ng.verdict, ag.verdict):
        category = UNKNOWN
    elif ng.verdict == GORENSTEIN:
        category = GORENSTEIN
    else:
        is_ng = ng.verdict == NG_NOT_GORENSTEIN
        is_ag = ag.verdict == AG
        category = {(True, True): "NG and AG, not Gorenstein",
                    (False, False): "neither NG nor AG",
                    (True, False): "NG, not AG",
                    (False, True): "AG, not NG"}[(is_ng, is_ag)]
    listed = None if category in (UNKNOWN, GORENSTEIN) else _listed_case(_Context(inp))
    return ComparisonReport(ng, ag, category, listed)
