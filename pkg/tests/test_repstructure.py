from collections import Counter

import pytest

from dahapoly.errors import ParameterError, PoleError, PreconditionError
from dahapoly.koornwinder import compute_E
from dahapoly.modified import ModPoly, build_basis_element
from dahapoly.params import gen_full, spec_from_string
from dahapoly.polyrep import XLaurent
from dahapoly.repstructure import (
    CHAINS, ChainLink, WheelSpec, admissible_basis, arrow_class, certify, classify_steps,
    connectivity_milestones, enumerate_wheels, fiber_injectivity, grid_basis, grid_boundary,
    grid_closure, grid_membership, grid_zeta_certificates, in_grid_set, level1_product,
    level1_weight, partitions_upto, quotient_path, quotient_report, singleton_fibers,
    subrep_inclusion, tq_closure_check, verify_arrow_chain, verify_two_way, wheel_check,
    wheel_check_direct, wheel_zeta,
)
from dahapoly.weights import Weight, box, dominance_geq

ADMISSIBLE = [(-2, 0), (-1, -2), (-1, 2), (0, -2), (0, 2), (1, 0), (2, -1), (2, 0), (2, 1)]


@pytest.fixture(scope="module")
def wheel():
    return WheelSpec.from_spec(spec_from_string("tq:k=1,r=2,branch=0", 2))


# -- wheels ----------------------------------------------------------------------


def test_wheel_enumeration(wheel):
    wheels = enumerate_wheels(2, wheel.cycle, wheel.qpower)
    assert len(wheels) == 4
    assert all(idx[0] == 1 and sum(p) == 1 for idx, _, p in wheels)


def test_wheel_spec_needs_long_cycles():
    with pytest.raises(ParameterError):
        WheelSpec.from_spec(spec_from_string("tq:k=0,r=2,branch=0", 2))


def test_admissible_basis(wheel):
    assert [tuple(x) for x in admissible_basis(2, 2, wheel.cycle, wheel.qpower)] == ADMISSIBLE


@pytest.mark.parametrize("lam", ADMISSIBLE[:5])
def test_admissible_polynomials_satisfy_both_wheel_tests(wheel, lam):
    f = build_basis_element(lam, wheel.spec).expand()
    assert wheel_check(f, wheel)
    assert wheel_check_direct(f, wheel)
    assert wheel_zeta(lam, wheel) == 1


@pytest.mark.parametrize("lam", [lam for lam in box(2, 1) if tuple(lam) not in ADMISSIBLE])
def test_other_polynomials_fail_both_wheel_tests(wheel, lam):
    f = build_basis_element(lam, wheel.spec).expand()
    assert not wheel_check(f, wheel)
    assert not wheel_check_direct(f, wheel)


def test_constant_fails_and_poles_are_rejected(wheel):
    one = XLaurent.one(2)
    assert not wheel_check(one, wheel)
    assert not wheel_check_direct(one, wheel)
    q, t = gen_full("q").scalar(), gen_full("t").scalar()
    with pytest.raises(PoleError) as info:
        wheel_check(one.scale(1 / (q * t ** 2 - 1)), wheel)
    assert info.value.order == -1


def test_wheel_ideal_closed_under_operators(wheel):
    f = build_basis_element((1, 0), wheel.spec).expand()
    assert tq_closure_check(f, wheel) == {0: True, 1: True, 2: True}


def test_level_one_product(wheel):
    assert level1_weight(1, 2) == (1, 0)
    f = level1_product(2, 1, 2)
    diff = f - compute_E((1, 0)).body
    assert diff.zeta(wheel.spec) >= 1
    assert wheel_check(f, wheel) and wheel_check_direct(f, wheel)
    with pytest.raises(ParameterError):
        level1_product(3, 2, 2)


# -- grids -----------------------------------------------------------------------

AB = "ab:i=1,r=2,sign=+"
AC = "ac:i=1,r=2,sign=+"


def test_grid_labels():
    # the sign is read at the entry holding the largest absolute value
    assert in_grid_set("ab", 1, 2, (0, 1))
    assert not in_grid_set("ab", 1, 2, (0, -1))
    assert in_grid_set("ac", 1, 2, (0, -1))
    assert in_grid_set("ac", 1, 2, (0, 1), rule="threshold")
    assert not in_grid_set("ab", 1, 2, (0, 0))
    with pytest.raises(ParameterError):
        in_grid_set("aa", 1, 2, (0, 0))


def test_ab_grid_certificates():
    s = spec_from_string(AB, 2)
    assert len(grid_basis(s, 2)) == 21
    assert all(z == (1 if inside else 0) for _, inside, z in grid_zeta_certificates(s, 2))
    assert grid_closure(s, 2) == []
    assert [(tuple(lam), zc, zi) for lam, zc, zi in grid_boundary(s, 2)] == [((-1, 1), 1, 1), ((0, 1), 1, 1)]
    assert singleton_fibers(s, 2) == []


@pytest.mark.parametrize("text", [AC, "ad:i=1,r=2,sign=+"])
def test_ac_ad_grid_needs_whole_boundary(text):
    s = spec_from_string(text, 2)
    bad = [lam for lam, inside, z in grid_zeta_certificates(s, 2) if z != (1 if inside else 0)]
    assert len(bad) == 5
    assert len(grid_closure(s, 2)) == 5
    assert all(z == (1 if inside else 0) for _, inside, z in grid_zeta_certificates(s, 2, "threshold"))
    assert grid_closure(s, 2, "threshold") == []
    # phi_n does not kill the boundary polynomials here
    assert [(zc, zi) for _, zc, zi in grid_boundary(s, 2)] == [(0, 0), (0, 0)]
    assert singleton_fibers(s, 2) == []


def test_grid_membership():
    s = spec_from_string(AB, 2)
    inside = build_basis_element((2, 0), s).expand()
    outside = build_basis_element((0, 0), s).expand()
    assert grid_membership(inside, s)
    assert not grid_membership(outside, s)
    with pytest.raises(PreconditionError):
        grid_membership(inside, spec_from_string("ab:i=1,r=2,sign=-", 2))


# -- q a root of unity -----------------------------------------------------------------

Q4 = "tq:k=-1,r=4,branch=0"


@pytest.fixture(scope="module")
def q_report():
    return quotient_report((-3, 0, -9, 13), spec_from_string(Q4, 4))


def test_q_report_data(q_report):
    assert q_report["indices"] == [4, 3, 1, 2]
    assert q_report["quot"] == [3, 2, 0, 0]
    assert q_report["std"] == [9, 6, 0, 0]
    assert q_report["fiber"] == [-3, 0, -3, 4]
    assert q_report["milestones"] == [[-3, 0, -9, 13], [8, 2, 0, 13], [12, 8, 2, 0], [9, 6, 0, 0]]
    assert all(leg["two_way"] for leg in q_report["legs"])


def test_q_report_steps(q_report):
    rows = {row["i"]: row for row in q_report["steps"]}
    assert [rows[i]["class"] for i in range(5)] == ["<->"] * 5
    # s1 swaps two entries of mixed sign; the quotient does not move
    assert rows[1]["target"] == [0, -3, -9, 13]
    assert rows[1]["quot"] == [3, 2, 0, 0]
    assert all(row["consistent"] for row in rows.values())


def test_connectivity_milestones_and_paths():
    stones = connectivity_milestones((-3, 0, -9, 13), 4)
    assert stones[-1] == (9, 6, 0, 0)
    s = spec_from_string(Q4, 4)
    word = quotient_path(stones[0], stones[1], 4)
    assert word == [0, 2, 1, 0]
    assert verify_two_way(stones[0], word, s)
    assert quotient_path((0, 0, 0, 0), (3, 0, 0, 0), 4) is None


@pytest.mark.parametrize("branch", [0, 1])
def test_arrow_classes_match_quotient_changes(branch):
    s = spec_from_string(f"tq:k=-1,r=3,branch={branch}", 2)
    counts = Counter()
    for lam in box(2, 4):
        for row in classify_steps(lam, s):
            counts[row["class"]] += 1
            assert row["consistent"], (lam, row)
    assert counts == {"<->": 201, "fixed": 18, "->": 12, "<-": 12}
    assert fiber_injectivity(s, 2, 4) == []


def test_arrow_class_examples():
    s = spec_from_string("tq:k=-1,r=3,branch=0", 2)
    kinds = {arrow_class(i, lam, s)[0] for lam in box(2, 2) for i in range(3)}
    assert kinds <= {"<->", "->", "<-", "fixed"}


def test_q_precondition():
    with pytest.raises(PreconditionError):
        quotient_report((0, 0), spec_from_string("tq:k=0,r=2,branch=0", 2))


def test_subrepresentation_order_is_dominance():
    parts = partitions_upto(2, 4)
    assert len(parts) == 9
    for mu in parts:
        for nu in parts:
            assert subrep_inclusion(mu, nu, parts) == dominance_geq(mu, nu)


# -- chains ------------------------------------------------------------------------------


def test_tq_chain_certificate():
    cert = certify("tq-irr", n=2, r=2)
    assert cert.ok
    nodes = [(step["i"], step["node"]["lambda"], step["node"]["mt"]) for step in cert.steps[1:]]
    assert nodes == [(1, [1, 1], []), (2, [1, -1], []), (1, [-1, 1], []), (0, [0, 1], []),
                     (1, [1, 0], [["-1", [0, 1]]]), (2, [0, -1], []), (1, [-1, 0], []), (0, [0, 0], [])]
    assert all(step["multiplier_zeta"] == 0 for step in cert.steps[1:])


def test_aa_chain_certificate():
    cert = certify("aa-irr", n=2, r=2)
    assert cert.ok
    rules = [step["rule"] for step in cert.steps[1:]]
    assert rules == ["1to1", "good", "ii", "i", "i", "i", "iii", "good"]
    assert cert.steps[-1]["node"]["lambda"] == [0, 0]


def test_broken_chain_names_the_link():
    s = spec_from_string("tq:k=0,r=2,branch=0", 2)
    start = ((2, 0), ())
    links = [ChainLink("->", ((2, 2), ()))]
    cert = verify_arrow_chain("broken", s, start, links, max_depth=2)
    assert not cert.ok and cert.failure.startswith("link 0")
    assert cert.to_json()["ok"] is False


def test_chain_catalog():
    assert sorted(CHAINS) == ["aa-irr", "tq-irr"]
    with pytest.raises(ParameterError):
        certify("nope")
    assert ModPoly.plain(Weight((0, 0)), spec_from_string("tq:k=0,r=2,branch=0", 2)).zeta() == 0
