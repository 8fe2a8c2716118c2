"""Decision ladder, certificates, hint path, and covering invariants."""

from __future__ import annotations

import json
from itertools import combinations

import pytest

from ecov.covering import (
    INFINITY,
    Certificate,
    decide,
    decide_with_hints,
    epsilon,
    equal_covering_exhaustive,
    equal_partition_exists,
    load_hints,
    qualifying_divisors,
    rho,
    sigma,
    verify_certificate,
)
from ecov.errors import (
    HintFileError,
    InconclusiveHints,
    RulesInconclusive,
    SearchBudgetExceeded,
    SpecError,
)
from ecov.groups import build_group, exponent, semidirect_product
from ecov.lattice import get_lattice

HINTS_DIR = "src/ecov/data/hints"

# ---------------------------------------------------------------------------
# Divisors and certificate plumbing


def test_qualifying_divisors():
    assert qualifying_divisors(12, 6) == [6]
    assert qualifying_divisors(24, 12) == [12]
    assert qualifying_divisors(8, 2) == [2, 4]
    assert qualifying_divisors(6, 6) == []
    assert qualifying_divisors(1, 1) == []


def test_certificate_json_roundtrip():
    cert = Certificate("EqualCovering", ((0, 1), (0, 2)))
    doc = cert.to_json("D4")
    assert doc == {"mode": "EqualCovering", "group": "D4", "members": [[0, 1], [0, 2]]}
    assert Certificate.from_json(doc) == cert

    strict = Certificate("StrictSPartition", ((0, 1), (0, 2)), s_members=(0,))
    again = Certificate.from_json(strict.to_json("X"))
    assert again.s_members == (0,)

    with pytest.raises(SpecError):
        Certificate("NoSuchMode", ((0,),))
    with pytest.raises(SpecError):
        Certificate.from_json({"mode": "EqualCovering"})


# ---------------------------------------------------------------------------
# Certificate verification, mode by mode


def members_of_order(G, d):
    return tuple(s.members for s in get_lattice(G).subgroups if s.order == d)


def test_verify_equal_covering_d12(grp):
    G = grp("D12")
    cert = Certificate("EqualCovering", members_of_order(G, 6))
    assert verify_certificate(G, cert).ok


def test_verify_rejects_non_subgroups_and_improper_members(grp):
    G = grp("D12")
    bad = Certificate("Covering", ((0, 1), (0, 6)))
    report = verify_certificate(G, bad)
    assert report.code == "NotASubgroup" and report.detail == (0,)

    full = Certificate("Covering", (tuple(range(12)),))
    assert verify_certificate(G, full).code == "NotProper"

    out_of_range = Certificate("Covering", ((0, 99),))
    assert verify_certificate(G, out_of_range).code == "NotASubgroup"

    empty = Certificate("Covering", ())
    assert verify_certificate(G, empty).code == "UnionIncomplete"


def test_verify_reports_first_uncovered_element(grp):
    G = grp("D12")
    mems = members_of_order(G, 6)
    report = verify_certificate(G, Certificate("EqualCovering", mems[:2]))
    assert report.code == "UnionIncomplete"
    missing = report.detail[0]
    assert all(missing not in m for m in mems[:2])


def test_verify_rejects_unequal_orders(grp):
    G = grp("D12")
    cert = Certificate("EqualCovering", members_of_order(G, 6) + ((0, 6),))
    report = verify_certificate(G, cert)
    assert report.code == "UnequalOrders" and report.detail == (0, 3)


def test_verify_partition_modes(grp):
    G = grp("E(2,2)")
    blocks = members_of_order(G, 2)
    assert verify_certificate(G, Certificate("Partition", blocks)).ok
    assert verify_certificate(G, Certificate("EqualPartition", blocks)).ok

    D12 = grp("D12")
    overlapping = Certificate("Partition", members_of_order(D12, 6))
    report = verify_certificate(D12, overlapping)
    assert report.code == "BadPairwiseIntersection"
    i, j = report.detail
    shared = set(overlapping.members[i]) & set(overlapping.members[j])
    assert shared != {0}


def test_verify_strict_s_partition_d8(grp):
    G = grp("D8")
    quads = members_of_order(G, 4)
    assert len(quads) == 3
    center = (0, 2)
    good = Certificate("StrictSPartition", quads, s_members=center)
    assert verify_certificate(G, good).ok

    wrong_s = Certificate("StrictSPartition", quads, s_members=(0,))
    assert verify_certificate(G, wrong_s).code == "BadPairwiseIntersection"

    not_sub = Certificate("StrictSPartition", quads, s_members=(0, 1))
    assert verify_certificate(G, not_sub).code == "NotASubgroup"


def test_verify_semi_partition(grp):
    G = grp("D12")
    # C6 and one order-6 dihedral share the rotation squares; every third
    # member meets that overlap trivially, so the family is a semi-partition
    # without being a partition.
    members = (
        (0, 1, 2, 3, 4, 5),
        (0, 2, 4, 6, 8, 10),
        (0, 7),
        (0, 9),
        (0, 11),
    )
    semi = Certificate("SemiPartition", members)
    assert verify_certificate(G, semi).ok
    assert verify_certificate(G, Certificate("Partition", members)).code == (
        "BadPairwiseIntersection"
    )

    triple_bad = Certificate("SemiPartition", members_of_order(G, 6))
    report = verify_certificate(G, triple_bad)
    assert report.code == "BadTripleIntersection" and report.detail == (0, 1, 2)


# ---------------------------------------------------------------------------
# The decision ladder, method by method


@pytest.mark.parametrize(
    "spec,method",
    [
        ("C7", "RuleT1_Cyclic"),
        ("C12", "RuleT1_Cyclic"),
        ("C2xC3", "RuleT1_Cyclic"),
        ("Dic1", "RuleT1_Cyclic"),
        ("S3", "RuleT20_SquareFree"),
        ("D6", "RuleT20_SquareFree"),
        ("D10", "RuleT20_SquareFree"),
        ("D14", "RuleT20_SquareFree"),
        ("D22", "RuleT20_SquareFree"),
        ("D18", "RuleC1_Exponent"),
        ("D50", "RuleC1_Exponent"),
        ("W", "RuleC1_Exponent"),
        ("Dic3", "RuleC1_Exponent"),
        ("Dic5", "RuleC1_Exponent"),
        ("Dic7", "RuleC1_Exponent"),
    ],
)
def test_no_decisions_by_rule(grp, spec, method):
    d = decide(grp(spec))
    assert d.status == "No"
    assert d.method == method
    assert d.certificate is None
    assert d.citation


@pytest.mark.parametrize(
    "spec,method,order",
    [
        ("D4", "RuleT16_Dihedral", 2),
        ("D8", "RuleT16_Dihedral", 4),
        ("D12", "RuleT16_Dihedral", 6),
        ("D16", "RuleT16_Dihedral", 8),
        ("D100", "RuleT16_Dihedral", 50),
        ("Q8", "RuleT17_PGroup", 4),
        ("Dic4", "RuleT17_PGroup", 8),
        ("E(2,2)", "RuleT17_PGroup", 2),
        ("E(3,2)", "RuleT17_PGroup", 3),
        ("E(2,5)", "RuleT17_PGroup", 16),
        ("C2xC4", "RuleT17_PGroup", 4),
        ("C5xC5", "RuleT17_PGroup", 5),
        ("C6xC2", "RuleT19_Nilpotent", 6),
        ("C6xC10", "RuleT19_Nilpotent", 30),
        ("D12xC3", "RuleT18_DirectFactor", 18),
        ("C2xD10", "RuleT21_Quotient", 10),
        ("S3xC2", "RuleT21_Quotient", 6),
    ],
)
def test_yes_decisions_by_rule(grp, spec, method, order):
    G = grp(spec)
    d = decide(G)
    assert d.status == "Yes"
    assert d.method == method
    cert = d.certificate
    assert cert is not None and cert.mode == "EqualCovering"
    assert cert.common_order() == order
    assert verify_certificate(G, cert).ok


def test_semidirect_rule_fires_for_built_semidirect(grp):
    # C3 : (C2 x C2), with the first factor acting by inversion; the
    # complement has an equal covering, which lifts through the projection.
    C3, V = grp("C3"), grp("E(2,2)")
    inv = (0, 2, 1)
    ident = (0, 1, 2)
    action = [ident, inv, ident, inv]
    G = semidirect_product(C3, V, action)
    assert G.order == 12
    d = decide(G)
    assert d.status == "Yes"
    assert d.method == "RuleC3_Semidirect"
    assert d.certificate.common_order() == 6
    assert verify_certificate(G, d.certificate).ok


@pytest.mark.parametrize(
    "spec",
    ["A5", "PSL(2,4)", "PSL(2,5)", "PSL(2,7)", "PSL(2,11)", "PSL(2,13)"],
)
def test_simple_half_exponent_rule(grp, spec):
    G = grp(spec)
    assert exponent(G) * 2 == G.order
    d = decide(G)
    assert d.status == "No"
    assert d.method == "RuleP2_SimpleHalfExp"


@pytest.mark.parametrize("spec", ["S4", "A4"])
def test_exhaustive_no_decisions(grp, spec):
    d = decide(grp(spec))
    assert d.status == "No"
    assert d.method == "Exhaustive"


def test_exhaustive_no_confirmed_by_independent_union_scan(grp):
    # Re-derive the negative answers without the engine: for each proper
    # divisor d that the exponent divides, the union of all order-d
    # subgroups must miss some element.
    for spec in ("S4", "A4"):
        G = grp(spec)
        L = get_lattice(G)
        n, e = G.order, exponent(G)
        for d in qualifying_divisors(n, e):
            covered = set()
            for s in L.subgroups:
                if s.order == d:
                    covered.update(s.members)
            assert covered != set(range(n)), f"{spec} has an equal covering at {d}"


def test_exhaustive_mode_on_yes_group(grp):
    G = grp("D12")
    d = decide(G, "exhaustive")
    assert d.status == "Yes" and d.method == "Exhaustive"
    assert d.certificate.common_order() == 6
    assert verify_certificate(G, d.certificate).ok
    # the cyclic fast path is bypassed: exhaustive on a cyclic group still
    # answers through the union test
    assert decide(grp("C12"), "exhaustive").method == "Exhaustive"


def test_c2xd10_regression_yes_both_ways(grp):
    # Adversarial case: both direct factors lack equal coverings, yet the
    # product has one (three order-10 subgroups).
    G = grp("C2xD10")
    auto = decide(G)
    assert auto.status == "Yes" and auto.method == "RuleT21_Quotient"
    ex = decide(G, "exhaustive")
    assert ex.status == "Yes"
    assert ex.certificate.common_order() == 10
    assert len(ex.certificate.members) == 3
    assert verify_certificate(G, ex.certificate).ok


def test_rules_mode_raises_when_inconclusive(grp):
    with pytest.raises(RulesInconclusive):
        decide(grp("A4"), "rules")
    d = decide(grp("D12"), "rules")
    assert d.status == "Yes" and d.method == "RuleT16_Dihedral"


def test_decide_validates_mode(grp):
    with pytest.raises(SpecError):
        decide(grp("C2"), "bogus")


def test_decision_reports_coverability(grp):
    assert not decide(grp("C12")).has_covering_at_all
    assert decide(grp("S3")).has_covering_at_all
    assert decide(grp("D12")).has_covering_at_all


# ---------------------------------------------------------------------------
# Hint path


def test_hint_files_decide_no(grp):
    for name in ("m11", "m12"):
        doc = load_hints(f"{HINTS_DIR}/{name}.json")
        d = decide_with_hints(
            doc["name"],
            doc["order"],
            doc["exponent"],
            doc["maximal_orders"],
            doc.get("exponent_multiple_union_covers"),
        )
        assert d.status == "No" and d.method == "HintC1"
        assert d.certificate is None


def test_hint_path_is_inconclusive_without_union_fact():
    with pytest.raises(InconclusiveHints):
        decide_with_hints("X", 24, 6, [12, 8])
    with pytest.raises(InconclusiveHints):
        decide_with_hints("X", 24, 6, [12, 8], exponent_multiple_union_covers=True)


def test_hint_path_rejects_inconsistent_data():
    with pytest.raises(HintFileError):
        decide_with_hints("X", 24, 5, [12])
    with pytest.raises(HintFileError):
        decide_with_hints("X", 24, 6, [])


@pytest.mark.parametrize(
    "doc",
    [
        {"order": 10, "exponent": 10, "maximal_orders": [5]},  # missing name
        {"name": "X", "order": 10, "exponent": 3, "maximal_orders": [5]},
        {"name": "X", "order": 10, "exponent": 5, "maximal_orders": [10]},
        {"name": "X", "order": 10, "exponent": 5, "maximal_orders": [3]},
        {"name": "X", "order": 10, "exponent": 5, "maximal_orders": []},
        {"name": "X", "order": 10, "exponent": 5, "maximal_orders": [5], "simple": "yes"},
        {
            "name": "X",
            "order": 10,
            "exponent": 5,
            "maximal_orders": [5],
            "exponent_multiple_union_covers": 0,
        },
        [1, 2, 3],
    ],
)
def test_load_hints_validation(tmp_path, doc):
    path = tmp_path / "h.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    with pytest.raises(HintFileError):
        load_hints(str(path))


def test_load_hints_io_errors(tmp_path):
    with pytest.raises(HintFileError):
        load_hints(str(tmp_path / "missing.json"))
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(HintFileError):
        load_hints(str(path))


# ---------------------------------------------------------------------------
# Sigma


def brute_sigma(G, L):
    """Smallest covering by proper subgroups, by direct subset search."""
    proper = [s for s in L.subgroups if s.order < G.order]
    everything = set(range(G.order))
    for size in range(1, len(proper) + 1):
        for chosen in combinations(proper, size):
            covered = set()
            for s in chosen:
                covered.update(s.members)
            if covered == everything:
                return size
    return INFINITY


@pytest.mark.parametrize(
    "spec,value",
    [
        ("E(2,2)", 3),
        ("S3", 4),
        ("E(3,2)", 4),
        ("A4", 5),
        ("D10", 6),
        ("E(5,2)", 6),
        ("W", 6),
    ],
)
def test_sigma_primitive_values(grp, spec, value):
    G = grp(spec)
    result = sigma(G)
    assert result.value == value
    assert len(result.witness.members) == value
    assert result.witness.mode == "Covering"
    assert verify_certificate(G, result.witness).ok


@pytest.mark.parametrize("spec", ["E(2,2)", "S3", "E(3,2)", "D10"])
def test_sigma_matches_brute_force(grp, spec):
    G = grp(spec)
    assert sigma(G).value == brute_sigma(G, get_lattice(G))


def test_sigma_of_cyclic_is_infinite(grp):
    result = sigma(grp("C12"))
    assert result.value == INFINITY
    assert result.witness is None


def test_sigma_a5(grp):
    assert sigma(grp("A5")).value == 10


def test_sigma_bounds_log(grp):
    result = sigma(grp("D10"))
    values = [v for v, _ in result.bounds_log]
    assert values[0] == 3
    assert values[1] == 3  # least prime divisor 2, so the prime bound is p+1
    assert values[-1] == 6
    assert all(isinstance(reason, str) and reason for _, reason in result.bounds_log)


# ---------------------------------------------------------------------------
# Epsilon


@pytest.mark.parametrize(
    "spec,value",
    [("E(2,2)", 3), ("D12", 3), ("Q8", 3), ("C2xC4", 3), ("E(2,3)", 3)],
)
def test_epsilon_values(grp, spec, value):
    G = grp(spec)
    got, witness = epsilon(G)
    assert got == value
    assert witness.mode == "EqualCovering"
    assert witness.common_order() is not None
    assert verify_certificate(G, witness).ok
    assert got >= sigma(G).value


@pytest.mark.parametrize("spec", ["C12", "S3", "S4", "D10"])
def test_epsilon_infinite_when_no_equal_covering(grp, spec):
    got, witness = epsilon(grp(spec))
    assert got == INFINITY and witness is None


def test_epsilon_matches_decide(grp):
    for spec in ("D12", "Q8", "S4", "W", "C2xD10"):
        G = grp(spec)
        got, _ = epsilon(G)
        assert (got != INFINITY) == (decide(G).status == "Yes")


# ---------------------------------------------------------------------------
# Rho and equal partitions


@pytest.mark.parametrize(
    "spec,value",
    [
        ("E(2,2)", 3),
        ("E(2,3)", 5),
        ("E(3,2)", 4),
        ("D10", 6),
        ("D12", 7),
        ("S3", 4),
        ("A4", 5),
    ],
)
def test_rho_values(grp, spec, value):
    G = grp(spec)
    got, witness = rho(G)
    assert got == value
    assert witness.mode == "Partition"
    assert verify_certificate(G, witness).ok


def test_rho_infinite_for_q8_and_cyclic(grp):
    assert rho(grp("Q8"))[0] == INFINITY
    assert rho(grp("C6"))[0] == INFINITY


def test_rho_size_guard():
    G = build_group("D202")
    with pytest.raises(SearchBudgetExceeded):
        rho(G)
    with pytest.raises(SearchBudgetExceeded):
        equal_partition_exists(G)


@pytest.mark.parametrize(
    "spec,expect",
    [
        ("E(2,2)", True),
        ("E(2,3)", True),
        ("E(3,2)", True),
        ("E(5,2)", True),
        ("E(2,6)", True),
        ("Q8", False),
        ("D12", False),
        ("S3", False),
        ("C2xC4", False),
        ("C6", False),
        ("A4", False),
    ],
)
def test_equal_partition_exists(grp, spec, expect):
    G = grp(spec)
    got, cert = equal_partition_exists(G)
    assert got is expect
    if expect:
        assert cert.mode == "EqualPartition"
        assert verify_certificate(G, cert).ok
    else:
        assert cert is None


def test_equal_partition_certificate_for_klein(grp):
    G = grp("E(2,2)")
    _, cert = equal_partition_exists(G)
    assert len(cert.members) == 3
    assert cert.common_order() == 2


def test_rho_agrees_with_equal_partition_on_elementary_abelian(grp):
    # 1 + p^ceil(k/2) for E(p,k)
    assert rho(grp("E(2,2)"))[0] == 1 + 2
    assert rho(grp("E(2,3)"))[0] == 1 + 4
    assert rho(grp("E(3,2)"))[0] == 1 + 3
    assert rho(grp("E(5,2)"))[0] == 1 + 5


def test_exhaustive_decide_matches_module_level_helper(grp):
    G = grp("Q8")
    a = equal_covering_exhaustive(G)
    b = decide(G, "exhaustive")
    assert (a.status, a.method) == (b.status, b.method) == ("Yes", "Exhaustive")
