"""Veronese subrings of R(C, P) for a hyperelliptic curve and a Weierstrass
point P, and the symbolic rule engine for cones over curves of genus 2 and 3.

R(C, P) = k[X,Y,Z]/(Z^2 + f(X^2, Y)) with weights (1, 2, 2g+1).  The
Veronese R^(d) is the cone over C embedded by dP.  For each genus the script
lists the d that give a nearly Gorenstein ring and the monomial that
witnesses the failure otherwise, then runs the rule engine on a few classes
given only symbolically.

    python demos/hyperelliptic_and_cones.py
"""

from ngrings.cone_rules import SymbolicConeInput, classify_cone, compare_ng_ag_g2
from ngrings.divisors import is_unknown
from ngrings.tables import hyperelliptic_table


def main():
    for g in (2, 3, 4, 5):
        cols, rows, summary = hyperelliptic_table(g)
        print(f"genus {g}: {summary['relation']}")
        print("  Gorenstein:", summary["Gorenstein"])
        print("  nearly Gorenstein, not Gorenstein:", summary["NG not Gorenstein"])
        misses = [f"d={r['d']}: {r['witness']}" for r in rows if r["witness"]]
        print("  witnesses:", "; ".join(misses))

    print()
    G = SymbolicConeInput.generic
    for label, inp in [
        ("g=2, D = K + P", G(2, 1, {"P": 1})),
        ("g=2, deg 5 with h0(3K - D) = 0", G(2, 0, {"P": 5}, ["h0(3K-D)=0"])),
        ("g=3, D = 2K + P", G(3, 2, {"P": 1})),
        ("g=3, deg 9, nothing declared", G(3, 0, {"P": 9})),
    ]:
        v = classify_cone(inp)
        print(f"{label}: {v.verdict}\n  rule: {v.rule_id}")
        for fact, value, source in v.preconditions_used:
            shown = "unknown" if is_unknown(value) else value
            print(f"  uses {fact} = {shown} ({source})")
        if v.missing:
            print(f"  missing: {v.missing}")

    rep = compare_ng_ag_g2(G(2, 3))
    print(f"\ng=2, D = 3K: {rep.category} (listed case {rep.listed_case})")


if __name__ == "__main__":
    main()
