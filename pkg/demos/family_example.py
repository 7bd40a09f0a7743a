"""A family of cone-like singularities over P^1.

D = (r-1)Q - (p/q)(P_1 + ... + P_r).  As p/q grows the singularity passes
from rational to elliptic to worse, and the nearly Gorenstein property
comes and goes.  The script prints the invariants for a grid of (r, p/q),
then looks closely at p/q = 10/17, where every cheap test passes but the
trace ideal still misses R_5.

    python demos/family_example.py
"""

from ngrings.demazure import family_pair, graded_dim, invariants, necessary_ng, ng_decide
from ngrings.tables import family_table


def main():
    cols, rows, _ = family_table()
    print("  ".join(f"{c:>10}" for c in cols))
    for row in rows:
        print("  ".join(f"{str(row[c]):>10}" for c in cols))

    print("\np/q = 10/17")
    for r in (3, 4):
        pair = family_pair(r, 10, 17)
        prof = invariants(pair)
        print(f"r = {r}: a = {prof.a}, b = {prof.b}, m = {prof.m}, "
              f"necessary test: {necessary_ng(pair).status}")
        print("  dim [K^-1]_n for n = 0..7:", [graded_dim(pair, "Kinv", n) for n in range(8)])
        v = ng_decide(pair)
        print("  verdict:", v.verdict)
        for rule, wit in v.evidence:
            print(f"    {rule}: {wit}")


if __name__ == "__main__":
    main()
