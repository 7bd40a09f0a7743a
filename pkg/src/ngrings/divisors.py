"""
Q-divisors on curve models and dimension counts of their section spaces.

Four curve backends are provided:

- ``ProjectiveLine``: explicit points with rational coordinates (or infinity);
  everything is computable.
- ``EllipticCurve``: declared points and group relations relative to a marked
  origin; degree-zero classes are decided in the free abelian group on the
  declared points modulo the relations.
- ``HyperellipticOnePoint``: a hyperelliptic curve of genus g with a single
  Weierstrass point P, so every class is a multiple of P.
- ``GenericCurve``: genus and symbolic points only; dimension counts that
  cannot be decided from degree arithmetic come back as ``Unknown``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .linalg import in_integer_span


class SchemaError(ValueError):
    """Input data does not match the documented JSON schema."""


class CurveMismatch(ValueError):
    """A divisor or class was used with a curve it does not live on."""


@dataclass(frozen=True)
class Unknown:
    """An honestly undecided value, with the reason it could not be decided."""

    reason: str

    def __post_init__(self):
        if not self.reason:
            raise ValueError("Unknown needs a non-empty reason")

    def __bool__(self):
        raise TypeError(f"truth value of Unknown is undefined ({self.reason})")


def is_unknown(x) -> bool:
    return isinstance(x, Unknown)


GENERIC = "generic"
WEIERSTRASS = "hyperelliptic-weierstrass"
BPF_WITNESS = "basepoint-free-witness"
ORIGIN = "origin"
KNOWN_ATTRS = {GENERIC, WEIERSTRASS, BPF_WITNESS, ORIGIN}


@dataclass(frozen=True)
class PointId:
    label: str
    attrs: frozenset = frozenset()


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"not a rational number: {x!r}") from exc
    if isinstance(x, bool) or not isinstance(x, int):
        raise SchemaError(f"not a rational number: {x!r}")
    return Fraction(x)


def fraction_str(x: Fraction) -> str:
    """Bit-exact "a/b" rendering (plain "a" for integers)."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# --------------------------------------------------------------------------
# curve models


@dataclass(frozen=True)
class CurveModel:
    points: tuple = ()

    genus = 0
    model = "abstract"

    def __post_init__(self):
        labels = [p.label for p in self.points]
        if len(set(labels)) != len(labels):
            raise SchemaError(f"duplicate point labels in {labels}")

    @property
    def labels(self):
        return tuple(p.label for p in self.points)

    def point(self, label) -> PointId:
        for p in self.points:
            if p.label == label:
                return p
        raise CurveMismatch(f"point {label!r} is not on this curve")

    def canonical_divisor(self):
        """A concrete integral canonical divisor, or None if only symbolic."""
        return None

    def h0(self, cls: "DivisorClass"):
        raise NotImplementedError

    def is_principal(self, cls: "DivisorClass"):
        raise NotImplementedError


@dataclass(frozen=True)
class ProjectiveLine(CurveModel):
    """P^1 with points at rational coordinates; ``None`` marks infinity."""

    coords: tuple = ()

    genus = 0
    model = "P1"

    def __post_init__(self):
        super().__post_init__()
        cs = [c for _, c in self.coords]
        if len(set(cs)) != len(cs):
            raise SchemaError("points on P^1 must have pairwise distinct coordinates")
        if None not in cs:
            raise SchemaError("P^1 model needs a point at infinity")
        if [lab for lab, _ in self.coords] != list(self.labels):
            raise SchemaError("coordinates must be listed for every point, in order")

    @classmethod
    def with_points(cls, coords: Mapping[str, object], attrs=None) -> "ProjectiveLine":
        """Build from ``{label: coordinate}``; ``None`` is the point at infinity.

        A point labelled ``inf`` at infinity is added if none is given.
        """
        attrs = attrs or {}
        items = [(lab, None if c is None else Fraction(c)) for lab, c in coords.items()]
        if all(c is not None for _, c in items):
            items.append(("inf", None))
        pts = tuple(PointId(lab, frozenset(attrs.get(lab, ()))) for lab, _ in items)
        return cls(points=pts, coords=tuple(items))

    @property
    def infinity(self) -> str:
        return next(lab for lab, c in self.coords if c is None)

    def coord(self, label):
        for lab, c in self.coords:
            if lab == label:
                return c
        raise CurveMismatch(f"point {label!r} is not on this curve")

    def canonical_divisor(self):
        return QDivisor(self, {self.infinity: -2})

    def h0(self, cls):
        return max(cls.degree + 1, 0)

    def is_principal(self, cls):
        return cls.degree == 0


@dataclass(frozen=True)
class EllipticCurve(CurveModel):
    """Genus one curve; ``relations`` are tuples of (label, int) pairs, each
    declaring that sum c_i (P_i - O) vanishes in the group law."""

    origin: str = "O"
    relations: tuple = ()

    genus = 1
    model = "elliptic"

    def __post_init__(self):
        super().__post_init__()
        if self.origin not in self.labels:
            raise SchemaError(f"origin {self.origin!r} is not a declared point")
        for rel in self.relations:
            for lab, _ in rel:
                self.point(lab)

    def canonical_divisor(self):
        return QDivisor(self, {})

    def h0(self, cls):
        d = cls.degree
        if d >= 1:
            return d
        if d < 0:
            return 0
        return 1 if self.is_principal(cls) else 0

    def is_principal(self, cls):
        if cls.degree != 0:
            return False
        others = [lab for lab in self.labels if lab != self.origin]
        pts = dict(cls.points)
        vec = [pts.get(lab, 0) for lab in others]
        gens = []
        for rel in self.relations:
            r = dict(rel)
            gens.append([r.get(lab, 0) for lab in others])
        return in_integer_span(vec, gens)


@dataclass(frozen=True)
class HyperellipticOnePoint(CurveModel):
    """Hyperelliptic curve of genus g seen through one Weierstrass point P,
    where K_C = (2g-2)P and h^0(nP) follows the gap sequence 1, 3, ..., 2g-1."""

    g: int = 2

    model = "hyperelliptic-point"

    def __post_init__(self):
        super().__post_init__()
        if self.g < 2:
            raise SchemaError("hyperelliptic-point model needs genus >= 2")
        if len(self.points) != 1:
            raise SchemaError("hyperelliptic-point model has exactly one point")

    @classmethod
    def of_genus(cls, g: int, label: str = "P") -> "HyperellipticOnePoint":
        return cls(points=(PointId(label, frozenset({WEIERSTRASS})),), g=g)

    @property
    def genus(self):
        return self.g

    @property
    def P(self) -> str:
        return self.points[0].label

    def multiple(self, cls) -> int:
        """The n with cls ~ nP."""
        return cls.k * (2 * self.g - 2) + dict(cls.points).get(self.P, 0)

    def canonical_divisor(self):
        return QDivisor(self, {self.P: 2 * self.g - 2})

    def h0(self, cls):
        n = self.multiple(cls)
        if n < 0:
            return 0
        if n <= 2 * self.g - 1:
            return 1 + n // 2
        return n - self.g + 1

    def is_principal(self, cls):
        return self.multiple(cls) == 0


@dataclass(frozen=True)
class GenericCurve(CurveModel):
    """A curve known only by its genus, a hyperelliptic flag and symbolic points."""

    g: int = 2
    hyperelliptic: object = None

    model = "generic"

    def __post_init__(self):
        super().__post_init__()
        if self.g < 0:
            raise SchemaError("genus must be non-negative")
        if self.hyperelliptic is False and self.weierstrass_points():
            raise SchemaError("Weierstrass points declared on a non-hyperelliptic curve")

    @property
    def genus(self):
        return self.g

    def weierstrass_points(self):
        return [p.label for p in self.points if WEIERSTRASS in p.attrs]

    def _reduce(self, cls):
        """Rewrite a class using the relations forced by a hyperelliptic
        structure: K ~ (2g-2)W and 2W ~ 2W' for Weierstrass points W, W'.
        Returns (k, point-part) with k = 0 whenever a rewrite was possible."""
        ws = self.weierstrass_points()
        k, pts = cls.k, dict(cls.points)
        if not ws or self.g < 2:
            return k, pts
        w0 = ws[0]
        pts[w0] = pts.get(w0, 0) + k * (2 * self.g - 2)
        k = 0
        for w in ws[1:]:
            c = pts.get(w, 0)
            shift = c - (c % 2)
            if shift:
                pts[w] -= shift
                pts[w0] = pts.get(w0, 0) + shift
        return k, {lab: c for lab, c in pts.items() if c}

    def is_principal(self, cls):
        if cls.degree != 0:
            return False
        k, pts = self._reduce(cls)
        if k == 0 and not pts:
            return True
        if self.g == 0:
            return True
        if k == 0 and sorted(pts.values()) == [-1, 1]:
            # P ~ Q forces P = Q on a curve of positive genus
            return False
        if k == 0 and all(GENERIC in self.point(lab).attrs for lab in pts):
            return False
        return Unknown(f"cannot decide whether {cls} is principal on a generic genus-{self.g} curve")

    def h0(self, cls, _dual=True):
        g = self.g
        d = cls.degree
        if d < 0:
            return 0
        if d == 0:
            p = self.is_principal(cls)
            return p if is_unknown(p) else int(p)
        if d >= 2 * g - 1:
            return d - g + 1
        if d == 2 * g - 2:
            p = self.is_principal(cls - self.K())
            return p if is_unknown(p) else (g if p else g - 1)
        k, pts = self._reduce(cls)
        ws = self.weierstrass_points()
        if k == 0 and ws and set(pts) == {ws[0]}:
            n = pts[ws[0]]
            return 1 + n // 2
        if (k == 0 and d <= g - 1 and all(c > 0 for c in pts.values())
                and all(GENERIC in self.point(lab).attrs for lab in pts)):
            return 1
        if _dual:
            other = self.h0(self.K() - cls, _dual=False)
            if not is_unknown(other):
                return d + 1 - g + other
        return Unknown(f"h^0 of {cls} (degree {d}) is not determined by the generic genus-{g} model")

    def K(self):
        return DivisorClass.of(self, k=1)


# --------------------------------------------------------------------------
# divisors and classes


def _clean(coeffs):
    return tuple(sorted((lab, c) for lab, c in coeffs.items() if c != 0))


class QDivisor:
    """Finite formal sum of points with rational coefficients.

    Arithmetic results whose coefficients are all integers come back as
    ``IntegralDivisor``.
    """

    __slots__ = ("curve", "_coeffs")

    def __init__(self, curve, coeffs=None):
        coeffs = coeffs or {}
        if not isinstance(coeffs, Mapping):
            coeffs = dict(coeffs)
        conv = {}
        for lab, c in coeffs.items():
            curve.point(lab)
            conv[lab] = _as_fraction(c)
        object.__setattr__(self, "curve", curve)
        object.__setattr__(self, "_coeffs", _clean(conv))

    def __setattr__(self, name, value):
        raise AttributeError("divisors are immutable")

    def __eq__(self, other):
        if not isinstance(other, QDivisor):
            return NotImplemented
        return self.curve == other.curve and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self.curve, self._coeffs))

    def __repr__(self):
        return f"{type(self).__name__}({self})"

    @property
    def coeffs(self) -> dict:
        return dict(self._coeffs)

    def __getitem__(self, label) -> Fraction:
        return self.coeffs.get(label, Fraction(0))

    @property
    def degree(self) -> Fraction:
        return sum((c for _, c in self._coeffs), Fraction(0))

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for _, c in self._coeffs)

    def __add__(self, other):
        if other.curve != self.curve:
            raise CurveMismatch("divisors live on different curves")
        out = self.coeffs
        for lab, c in other._coeffs:
            out[lab] = out.get(lab, 0) + c
        return _make(self.curve, out)

    def __neg__(self):
        return _make(self.curve, {lab: -c for lab, c in self._coeffs})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, n):
        n = Fraction(n)
        return _make(self.curve, {lab: n * c for lab, c in self._coeffs})

    __rmul__ = __mul__

    def as_class(self) -> "DivisorClass":
        if not self.is_integral:
            raise ValueError(f"{self} is not integral")
        return DivisorClass.of(self.curve, 0, {lab: int(c) for lab, c in self._coeffs})

    def __str__(self):
        if not self._coeffs:
            return "0"
        return " + ".join(f"({fraction_str(c)}){lab}" for lab, c in self._coeffs)

    def to_json(self):
        return [{"point": lab, "coeff": fraction_str(c)} for lab, c in self._coeffs]


class IntegralDivisor(QDivisor):
    """A Q-divisor whose coefficients are all integers."""

    __slots__ = ()

    def __init__(self, curve, coeffs=None):
        super().__init__(curve, coeffs)
        if not self.is_integral:
            raise ValueError("IntegralDivisor needs integer coefficients")


def _make(curve, coeffs):
    if all(Fraction(c).denominator == 1 for c in coeffs.values()):
        return IntegralDivisor(curve, coeffs)
    return QDivisor(curve, coeffs)


@dataclass(frozen=True)
class DivisorClass:
    """Linear equivalence class written as k*K_C + (integral point part)."""

    curve: CurveModel
    k: int = 0
    points: tuple = ()

    @classmethod
    def of(cls, curve, k=0, points=None) -> "DivisorClass":
        points = dict(points or {})
        for lab in points:
            curve.point(lab)
        return cls(curve, int(k), _clean({lab: int(c) for lab, c in points.items()}))

    @property
    def degree(self) -> int:
        return self.k * (2 * self.curve.genus - 2) + sum(c for _, c in self.points)

    def _check(self, other):
        if other.curve != self.curve:
            raise CurveMismatch("classes live on different curves")

    def __add__(self, other):
        self._check(other)
        pts = dict(self.points)
        for lab, c in other.points:
            pts[lab] = pts.get(lab, 0) + c
        return DivisorClass.of(self.curve, self.k + other.k, pts)

    def __neg__(self):
        return DivisorClass.of(self.curve, -self.k, {lab: -c for lab, c in self.points})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, n: int):
        return DivisorClass.of(self.curve, n * self.k, {lab: n * c for lab, c in self.points})

    __rmul__ = __mul__

    def __str__(self):
        parts = []
        if self.k:
            parts.append(f"{self.k}K")
        parts += [f"{c}{lab}" for lab, c in self.points]
        return " + ".join(parts) if parts else "0"


# --------------------------------------------------------------------------
# operations


def round_down(D: QDivisor) -> IntegralDivisor:
    """The largest integral divisor below D (coefficientwise floor)."""
    return IntegralDivisor(D.curve, {lab: math.floor(c) for lab, c in D.coeffs.items()})


def frc(D: QDivisor) -> QDivisor:
    """Sum of (q-1)/q P over points where D has a coefficient of denominator q > 1."""
    return QDivisor(D.curve, {lab: Fraction(c.denominator - 1, c.denominator)
                              for lab, c in D.coeffs.items() if c.denominator > 1})


def normalize(D: QDivisor):
    """Write D = B - sum (p_i/q_i) P_i with B integral and 0 < p_i < q_i.

    Returns ``(B, arms)`` with arms a list of ``(label, p, q)``.
    """
    B = IntegralDivisor(D.curve, {lab: math.ceil(c) for lab, c in D.coeffs.items()})
    arms = []
    for lab, c in sorted(D.coeffs.items()):
        if c.denominator > 1:
            t = math.ceil(c) - c
            arms.append((lab, t.numerator, t.denominator))
    return B, arms


def _class_on(curve, E) -> DivisorClass:
    if isinstance(E, QDivisor):
        E = E.as_class()
    if E.curve != curve:
        raise CurveMismatch("class is not on the given curve")
    return E


def h0(curve: CurveModel, E):
    """dim H^0(C, O(E)) as an int, or Unknown."""
    return curve.h0(_class_on(curve, E))


def canonical_class(curve) -> DivisorClass:
    return DivisorClass.of(curve, k=1)


def h1(curve: CurveModel, E):
    """dim H^1(C, O(E)) = h^0(K_C - E)."""
    E = _class_on(curve, E)
    return curve.h0(canonical_class(curve) - E)


def class_is_principal(curve: CurveModel, E):
    return curve.is_principal(_class_on(curve, E))


def divisor_class(D: QDivisor, k: int = 0) -> DivisorClass:
    """Class of k*K_C + D for an integral divisor D."""
    c = D.as_class()
    return DivisorClass.of(D.curve, k, dict(c.points))


def denominator_lcm(D: QDivisor) -> int:
    out = 1
    for c in D.coeffs.values():
        out = math.lcm(out, c.denominator)
    return out


# --------------------------------------------------------------------------
# JSON


def _parse_points(raw):
    if not isinstance(raw, list):
        raise SchemaError("curve.points must be a list")
    out = []
    for p in raw:
        if not isinstance(p, dict) or "label" not in p:
            raise SchemaError(f"bad point entry {p!r}")
        attrs = p.get("attrs", [])
        bad = set(attrs) - KNOWN_ATTRS
        if bad:
            raise SchemaError(f"unknown point attributes {sorted(bad)}")
        out.append((str(p["label"]), p.get("coord"), frozenset(attrs)))
    return out


def _parse_coord(c):
    if c is None:
        raise SchemaError("P^1 points need a coordinate")
    if isinstance(c, str) and c.strip().lower() in ("inf", "infinity", "∞"):
        return None
    return _as_fraction(c)


def curve_from_json(obj) -> CurveModel:
    if not isinstance(obj, dict) or "model" not in obj:
        raise SchemaError("curve must be an object with a 'model' field")
    model = obj["model"]
    pts = _parse_points(obj.get("points", []))
    genus = obj.get("genus")
    if model == "P1":
        if genus not in (None, 0):
            raise SchemaError("P1 has genus 0")
        coords = {lab: _parse_coord(c) for lab, c, _ in pts}
        return ProjectiveLine.with_points(coords, {lab: a for lab, _, a in pts})
    if model == "elliptic":
        if genus not in (None, 1):
            raise SchemaError("elliptic curve has genus 1")
        origin = obj.get("origin")
        if origin is None:
            tagged = [lab for lab, _, a in pts if ORIGIN in a]
            origin = tagged[0] if tagged else "O"
        labels = [lab for lab, _, _ in pts]
        points = [PointId(lab, a) for lab, _, a in pts]
        if origin not in labels:
            points.append(PointId(origin, frozenset({ORIGIN})))
        rels = tuple(tuple(sorted((str(k), int(v)) for k, v in r.items()))
                     for r in obj.get("relations", []))
        return EllipticCurve(points=tuple(points), origin=origin, relations=rels)
    if model == "hyperelliptic-point":
        if not isinstance(genus, int):
            raise SchemaError("hyperelliptic-point model needs an integer genus")
        if len(pts) > 1:
            raise SchemaError("hyperelliptic-point model has exactly one point")
        label = pts[0][0] if pts else "P"
        return HyperellipticOnePoint.of_genus(genus, label)
    if model == "generic":
        if not isinstance(genus, int):
            raise SchemaError("generic model needs an integer genus")
        hyp = obj.get("hyperelliptic")
        return GenericCurve(points=tuple(PointId(lab, a) for lab, _, a in pts),
                            g=genus, hyperelliptic=hyp)
    raise SchemaError(f"unknown curve model {model!r}")


def curve_to_json(curve: CurveModel) -> dict:
    out = {"model": curve.model, "genus": curve.genus}
    pts = []
    for p in curve.points:
        entry = {"label": p.label, "attrs": sorted(p.attrs)}
        if isinstance(curve, ProjectiveLine):
            c = curve.coord(p.label)
            entry["coord"] = "inf" if c is None else fraction_str(c)
        pts.append(entry)
    out["points"] = pts
    if isinstance(curve, EllipticCurve):
        out["origin"] = curve.origin
        out["relations"] = [dict(r) for r in curve.relations]
    if isinstance(curve, GenericCurve) and curve.hyperelliptic is not None:
        out["hyperelliptic"] = curve.hyperelliptic
    return out


def divisor_from_json(obj):
    """Parse ``{"curve": ..., "divisor": [...]}`` into (curve, QDivisor)."""
    if not isinstance(obj, dict) or "curve" not in obj or "divisor" not in obj:
        raise SchemaError("expected an object with 'curve' and 'divisor'")
    curve = curve_from_json(obj["curve"])
    entries = obj["divisor"]
    if not isinstance(entries, list):
        raise SchemaError("divisor must be a list of {point, coeff} entries")
    if not entries:
        raise SchemaError("divisor is empty")
    coeffs = {}
    for e in entries:
        if not isinstance(e, dict) or "point" not in e or "coeff" not in e:
            raise SchemaError(f"bad divisor entry {e!r}")
        lab = str(e["point"])
        if lab not in curve.labels:
            raise SchemaError(f"divisor mentions undeclared point {lab!r}")
        coeffs[lab] = coeffs.get(lab, 0) + _as_fraction(e["coeff"])
    return curve, QDivisor(curve, coeffs)


def divisor_to_json(D: QDivisor) -> dict:
    return {"curve": curve_to_json(D.curve), "divisor": D.to_json()}
