"""Reproducible tables: each function returns (columns, rows, summary)."""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from . import cone_rules as cr
from .demazure import (
    NG_NOT_GORENSTEIN,
    NOT_NG,
    e8_pair,
    family_pair,
    invariants,
    ng_decide,
    veronese,
)
from .divisors import fraction_str, normalize
from .hypersurface import e8, hyperelliptic, veronese_ng
from .resolution import blow_down, mowy_ng, star_graph

NG_VERDICTS = ("Gorenstein", NG_NOT_GORENSTEIN)

FAMILY_R = (3, 4, 5)
FAMILY_PQ = (Fraction(1, 3), Fraction(1, 2), Fraction(4, 7), Fraction(5, 8),
             Fraction(2, 3), Fraction(3, 4))


def _ng_set(rows, key="d", verdict="verdict"):
    return sorted(r[key] for r in rows if r[verdict] in NG_VERDICTS)


def e8_list(cap=None):
    """Veronese subrings of k[X,Y,Z]/(X^2+Y^3+Z^5) for d coprime to 30."""
    pair, ring = e8_pair(), e8()
    rows = []
    for d in range(1, 31):
        if gcd(d, 30) != 1:
            continue
        graph = blow_down(star_graph(normalize(veronese(pair, d).D)))
        by_graph = mowy_ng(graph)
        rows.append({
            "d": d,
            "verdict": "Gorenstein" if d == 1 else (NG_NOT_GORENSTEIN if by_graph else NOT_NG),
            "graph": "NG" if by_graph else "not NG",
            "demazure": ng_decide(veronese(pair, d), cap).verdict,
            "hypersurface": veronese_ng(ring, d, cap).verdict,
        })
    cols = ["d", "verdict", "graph", "demazure", "hypersurface"]
    return cols, rows, {"NG set": _ng_set(rows)}


def hyperelliptic_table(g, cap=None):
    """R^(d) for R = k[X,Y,Z]/(Z^2 + X^(4g+2) - Y^(2g+1)), 1 <= d <= 4g+4."""
    ring = hyperelliptic(g)
    rows = []
    for d in range(1, 4 * g + 5):
        v = veronese_ng(ring, d, cap)
        wit = next((w for r, w in v.evidence if r.startswith("R_nd not inside")), None)
        rows.append({"d": d, "verdict": v.verdict,
                     "witness": "" if wit is None else f"{wit['witness']} (degree {wit['degree']})"})
    ng = [r["d"] for r in rows if r["verdict"] == NG_NOT_GORENSTEIN]
    gor = [r["d"] for r in rows if r["verdict"] == "Gorenstein"]
    return ["d", "verdict", "witness"], rows, {
        "relation": ring.describe(), "Gorenstein": gor, "NG not Gorenstein": ng}


def family_table(cap=None):
    """(P^1, (r-1)Q - (p/q)(P_1 + ... + P_r)) over the example grid."""
    rows = []
    for r in FAMILY_R:
        for pq in FAMILY_PQ:
            row = {"r": r, "p/q": fraction_str(pq)}
            if (r - 1) - r * pq <= 0:
                row.update({"type": "not ample", "a": "", "b": "", "m": "", "pg": "",
                            "gorenstein": "", "ng": ""})
                rows.append(row)
                continue
            pair = family_pair(r, pq.numerator, pq.denominator)
            prof = invariants(pair)
            row.update({"type": prof.sing_type, "a": prof.a, "b": prof.b, "m": prof.m,
                        "pg": prof.pg, "gorenstein": prof.gorenstein,
                        "ng": ng_decide(pair, cap).verdict})
            rows.append(row)
    cols = ["r", "p/q", "type", "a", "b", "m", "pg", "gorenstein", "ng"]
    return cols, rows, {}


def genus2_fixtures():
    """Representative genus-2 classes, one or two per case of the classification."""
    G = cr.SymbolicConeInput.generic
    return [
        ("deg 1", G(2, 0, {"P": 1}, ["not gorenstein"])),
        ("deg 2, D ~ K", G(2, 1, {})),
        ("deg 2, D not ~ K", G(2, 0, {"P": 1, "Q": 1}, ["not gorenstein"])),
        ("deg 3, D ~ K + P", G(2, 1, {"P": 1})),
        ("deg 3, O(D) generated", G(2, 0, {"P": 1, "Q": 1, "S": 1}, ["not D~K+P"])),
        ("deg 4, D ~ 2K", G(2, 2, {})),
        ("deg 4, D not ~ 2K", G(2, 0, {"P": 2, "Q": 2}, ["not D~2K"])),
        ("deg 5, D ~ 3K - P", G(2, 3, {"P": -1})),
        ("deg 5, h0(3K - D) = 0", G(2, 0, {"P": 5}, ["h0(3K-D)=0"])),
        ("deg 6, D ~ 3K", G(2, 3, {})),
        ("deg 6, D not ~ 3K", G(2, 0, {"P": 6}, ["not D~3K"])),
        ("deg 7", G(2, 0, {"P": 7})),
        ("deg 9", G(2, 4, {"P": 1})),
    ]


def genus2_classification():
    rows = []
    for label, inp in genus2_fixtures():
        rep = cr.compare_ng_ag_g2(inp)
        rows.append({"case": label, "NG": rep.ng.verdict, "AG": rep.ag.verdict,
                     "joint": rep.category, "listed": rep.listed_case or ""})
    return ["case", "NG", "AG", "joint", "listed"], rows, {}


TABLES = {
    "e8-list": e8_list,
    "hyperelliptic-g2": lambda cap=None: hyperelliptic_table(2, cap),
    "hyperelliptic-g3": lambda cap=None: hyperelliptic_table(3, cap),
    "hyperelliptic-g4": lambda cap=None: hyperelliptic_table(4, cap),
    "hyperelliptic-g5": lambda cap=None: hyperelliptic_table(5, cap),
    "family-r-p-q": family_table,
    "genus2-classification": lambda cap=None: genus2_classification(),
}
