"""Which Veronese subrings of the E8 singularity are nearly Gorenstein?

k[X,Y,Z]/(X^2 + Y^3 + Z^5) is the section ring of
D = -P0 + P1/2 + P2/3 + P3/5 on P^1.  The d-th Veronese subring is the
section ring of dD, so each d gives a new star-shaped resolution graph.  We
decide the question three ways and print them side by side: from the
minimal resolution graph, from the trace ideal computed on P^1, and by
multiplying monomials in the hypersurface ring itself.

    python demos/e8_veronese.py
"""

from math import gcd

from ngrings.demazure import e8_pair, invariants, ng_decide, veronese
from ngrings.divisors import normalize
from ngrings.hypersurface import e8, veronese_ng
from ngrings.resolution import blow_down, fundamental_cycle, mowy_ng, star_graph


def main():
    pair, ring = e8_pair(), e8()
    print(f"{'d':>3} {'a':>3} {'b':>3} {'m':>3}  {'graph':7} {'trace ideal':31} hypersurface")
    for d in range(1, 31):
        if gcd(d, 30) != 1:
            continue
        vpair = veronese(pair, d)
        prof = invariants(vpair)
        graph = blow_down(star_graph(normalize(vpair.D)))
        by_graph = "NG" if mowy_ng(graph) else "not NG"
        print(f"{d:>3} {prof.a:>3} {prof.b:>3} {prof.m:>3}  {by_graph:7} "
              f"{ng_decide(vpair).verdict:31} {veronese_ng(ring, d).verdict}")

    # the graph test in detail for d = 7
    graph = blow_down(star_graph(normalize(veronese(pair, 7).D)))
    Z = fundamental_cycle(graph)
    print("\nd = 7: minimal graph", [w for _, w, _ in graph.vertices])
    print("fundamental cycle", Z.as_dict())


if __name__ == "__main__":
    main()
