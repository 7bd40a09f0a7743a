import pytest

from cone_fixtures import COMPARISON, G2_RULES, G3_RULES, GENUS2, GENUS3, GOR_RULE, G, H
from ngrings.cone_rules import (
    AG,
    NOT_AG,
    ConeInputError,
    SymbolicConeInput,
    almost_gorenstein_g2,
    classify_cone,
    compare_ng_ag_g2,
    parse_flag,
)
from ngrings.demazure import GORENSTEIN, NG_NOT_GORENSTEIN, NOT_NG, UNKNOWN
from ngrings.divisors import SchemaError
from ngrings.hypersurface import hyperelliptic, veronese_ng


@pytest.mark.parametrize("label,inp,verdict,rule", GENUS2, ids=[f[0] for f in GENUS2])
def test_genus2_fixture(label, inp, verdict, rule):
    v = classify_cone(inp)
    assert (v.verdict, v.rule_id) == (verdict, rule)
    if verdict == UNKNOWN:
        assert v.missing


@pytest.mark.parametrize("label,inp,verdict,rule", GENUS3, ids=[f[0] for f in GENUS3])
def test_genus3_fixture(label, inp, verdict, rule):
    v = classify_cone(inp)
    assert (v.verdict, v.rule_id) == (verdict, rule)
    if verdict == UNKNOWN:
        assert v.missing


def test_fixtures_reach_every_branch():
    assert len(GENUS2) >= 15 and len(GENUS3) >= 15
    assert {r for *_, r in GENUS2} == set(G2_RULES.values()) | {GOR_RULE}
    assert {r for *_, r in GENUS3} == set(G3_RULES.values()) | {GOR_RULE}
    for fixtures in (GENUS2, GENUS3):
        assert {v for _, _, v, _ in fixtures} == {GORENSTEIN, NG_NOT_GORENSTEIN, NOT_NG, UNKNOWN}


def test_two_k_plus_p_names_its_premise():
    v = classify_cone(G(3, 2, {"P": 1}))
    assert v.verdict == NOT_NG
    assert v.preconditions_used == [("R1=K0*L1", False, "derived from D~2K+P")]


def test_verdict_json_lists_facts():
    out = classify_cone(G(2, 0, {"P": 5}, ["h0(3K-D)=0"])).to_json()
    assert out["facts"] == [{"fact": "h0(3K-D)=0", "value": True, "source": "flag"}]
    out = classify_cone(G(3, 0, {"P": 9})).to_json()
    assert out["verdict"] == UNKNOWN and out["missing"] == "R1=K0*L1"


def test_general_genus_rules():
    assert classify_cone(G(4, 0, {"P": 19})).rule_id == "deg D > 6g - 6: NG"
    assert classify_cone(G(4, 3)).rule_id == "deg D = 6g - 6 with g >= 3: NG"
    assert classify_cone(G(4, 0, {"P": 3})).verdict == UNKNOWN  # Gorenstein is open
    assert classify_cone(G(4, 0, {"P": 3}, ["not gorenstein"])).verdict == NOT_NG
    # g - 1 divides 2g - 2, so an effective class of degree g - 1 stops one rule earlier
    v = classify_cone(G(5, 0, {"P": 4}, ["not gorenstein"]))
    assert v.verdict == NOT_NG and v.rule_id.startswith("deg D divides 2g - 2")
    v = classify_cone(H(4, 5))
    assert v.verdict == NG_NOT_GORENSTEIN and "2g - 3" in v.rule_id
    assert classify_cone(G(4, 1, {"P": 1})).verdict == NG_NOT_GORENSTEIN  # K + P
    assert classify_cone(G(4, 0, {"P": 2}, ["not gorenstein"])).verdict == NOT_NG
    assert classify_cone(G(4, 0, {"P": 6}, ["not gorenstein"])).missing == "h0(D)"
    assert classify_cone(G(5, 0, {"P": 7})).verdict == UNKNOWN


def test_almost_gorenstein_examples():
    assert almost_gorenstein_g2(G(2, 0, {"P": 2})).verdict == AG
    assert almost_gorenstein_g2(G(2, 0, {"P": 5}, ["not D~2K"])).verdict == NOT_AG
    assert almost_gorenstein_g2(G(2, 0, {"P": 5})).verdict == NOT_AG  # degree rules out 2K
    assert almost_gorenstein_g2(G(2, 2)).verdict == AG
    v = almost_gorenstein_g2(G(2, 0, {"P": 1, "Q": 1, "S": 1}))
    assert v.verdict == UNKNOWN and v.missing == "O(D) generated"
    with pytest.raises(ValueError):
        almost_gorenstein_g2(G(3, 1))


@pytest.mark.parametrize("label,inp,ng,ag,case", COMPARISON, ids=[c[0] for c in COMPARISON])
def test_comparison(label, inp, ng, ag, case):
    rep = compare_ng_ag_g2(inp)
    assert (rep.ng.verdict, rep.ag.verdict, rep.listed_case) == (ng, ag, case)
    # the report is the conjunction of the two engines
    assert rep.ng == classify_cone(inp) and rep.ag == almost_gorenstein_g2(inp)
    if case and case.startswith("both"):
        assert rep.category == "NG and AG, not Gorenstein"
    if case and case.startswith("neither"):
        assert rep.category == "neither NG nor AG"


def test_comparison_unknown_and_gorenstein():
    assert compare_ng_ag_g2(G(2, 0, {"P": 5})).category == UNKNOWN
    rep = compare_ng_ag_g2(G(2, 1))
    assert rep.category == GORENSTEIN and rep.listed_case is None


def test_flag_parsing():
    assert parse_flag("not D ∼ 3K_C") == ("D~3K", False)
    assert parse_flag("h0(3K - D) = 0") == ("h0(3K-D)=0", True)
    with pytest.raises(ConeInputError):
        parse_flag("O(B) very ample")


@pytest.mark.parametrize("args,kw", [
    ((2, 0, {"P": 4}, ["D~K+P"]), {}),  # wrong degree for the fact
    ((2, 0, {"P": 3}, ["D~K+P", "not D~K+P"]), {}),
    ((3, 0, {"P": 3}, ["D~3P"]), {"hyperelliptic": False}),
    ((2, 0, {"P": 3}, ["gorenstein"]), {}),
    ((3, 0, {"P": 5}, ["h0(3K-D)=0"]), {}),  # deg(3K - D) = 7 >= g
    ((2, 0, {"P": 7}, ["not h0(3K-D)=0"]), {}),
    ((2, 0, {"P": 4}, ["not O(D) generated"]), {}),
    ((2, 1, {"P": 1}, ["not D~K+P"]), {}),  # contradicts the model
    ((2, 0, {"P": 3}, ["O(D) generated", "D~K+P"]), {}),  # contradicts the equivalence
])
def test_inconsistent_flags(args, kw):
    with pytest.raises(ConeInputError):
        classify_cone(G(*args, **kw))


def test_input_validation():
    with pytest.raises(SchemaError):
        G(1, 0, {"P": 3})
    with pytest.raises(SchemaError):
        G(2, 0, {"P": -1})
    with pytest.raises(SchemaError):
        SymbolicConeInput.from_json({"genus": 2, "flags": "D~2K"})
    inp = SymbolicConeInput.from_json({"genus": 3, "class": {"k": 2, "points": {"P": 1}}})
    assert inp == G(3, 2, {"P": 1})
    with pytest.raises(SchemaError):
        SymbolicConeInput.from_json({"genus": 3, "curve": {"model": "hyperelliptic-point",
                                                           "genus": 2, "points": [{"label": "P"}]}})


@pytest.mark.parametrize("g", [2, 3])
def test_high_degree_never_not_ng(g):
    for d in range(6 * g - 5, 6 * g + 8):
        for inp in (G(g, 0, {"P": d}), G(g, 1, {"P": d - 2 * g + 2}), H(g, d)):
            assert classify_cone(inp).verdict == NG_NOT_GORENSTEIN


@pytest.mark.parametrize("g", [2, 3])
def test_point_model_agrees_with_veronese(g):
    ring = hyperelliptic(g)
    for d in range(1, 13):
        assert classify_cone(H(g, d)).verdict == veronese_ng(ring, d).verdict, d
