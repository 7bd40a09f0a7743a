"""Shared strategies and the a, b, m relation checks applied to every pair
the suite touches."""

from fractions import Fraction
from math import ceil

from hypothesis import strategies as st

from ngrings.demazure import (
    NG_NOT_GORENSTEIN,
    DemazurePair,
    gorenstein_test,
    invariants,
    product_span,
    section_divisor,
    section_space,
)
from ngrings.divisors import ProjectiveLine, QDivisor, is_unknown


@st.composite
def p1_pairs(draw, max_den=7):
    """Random ample pairs on P^1 with 2 to 5 points."""
    r = draw(st.integers(2, 5))
    coords = draw(st.lists(st.integers(-4, 4), min_size=r - 1, max_size=r - 1, unique=True))
    C = ProjectiveLine.with_points({f"P{i}": c for i, c in enumerate(coords)})
    fracs = st.fractions(min_value=-2, max_value=2, max_denominator=max_den)
    coeffs = {lab: draw(fracs) for lab in C.labels}
    D = QDivisor(C, coeffs)
    if D.degree < Fraction(1, 3):
        coeffs[C.infinity] += ceil(Fraction(1, 3) - D.degree)
        D = QDivisor(C, coeffs)
    return DemazurePair(C, D)


def check_abm(pair, verdict=None):
    """-a + b >= 0; -a + b >= m when K_R is not free; and when the ring is
    nearly Gorenstein but not Gorenstein, -a + b = m and K_{-a} * Kinv_b
    fills R_m.  Returns the profile for further use."""
    prof = invariants(pair)
    if any(is_unknown(v) for v in (prof.a, prof.b, prof.m, prof.gorenstein)):
        return prof
    assert -prof.a + prof.b >= 0
    if not gorenstein_test(pair):
        assert -prof.a + prof.b >= prof.m
    if verdict == NG_NOT_GORENSTEIN:
        assert -prof.a + prof.b == prof.m
        target = section_divisor(pair, "R", prof.m)
        prod = product_span(section_space(pair, "K", -prof.a),
                            section_space(pair, "Kinv", prof.b), target)
        assert prod.dim == int(target.degree) + 1
    return prof
