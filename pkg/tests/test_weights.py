import itertools

import pytest
from hypothesis import given, strategies as st

from dahapoly.errors import PreconditionError
from dahapoly.params import DERIVED, gen_full
from dahapoly.weights import (
    SignedPerm, Weight, admissible, all_signed_perms, box, dominance_geq, dot_action, dot_distance,
    fiber_map, lambda_zero, lambda_zero_brute, neighborhood_pairs, neighborhoods_nonneg, pairing,
    preceq, precedes, quotient_data, quotient_r, reduced_word_to, shortest_w_brute, word_path,
    y_eigenvalue,
)

weights2 = st.lists(st.integers(-4, 4), min_size=2, max_size=2).map(Weight)
weights3 = st.lists(st.integers(-3, 3), min_size=3, max_size=3).map(Weight)


def test_signed_perm_group_laws():
    perms = list(all_signed_perms(3))
    assert len(perms) == 48
    e = SignedPerm.identity(3)
    for w in perms[:12]:
        assert w.compose(w.inverse()) == e
        assert w.inverse().length() == w.length()
    # the longest element negates everything and has length n^2
    assert max(w.length() for w in perms) == 9
    assert SignedPerm.generator(3, 3).apply((1, 2, 3)) == (1, 2, -3)


@pytest.mark.parametrize("lam", list(box(2, 2)) + list(box(3, 1)))
def test_shortest_element_matches_brute_force(lam):
    w = lam.w_plus
    assert w.apply(lam.plus) == tuple(lam)
    assert w.length() == shortest_w_brute(lam).length()


@pytest.mark.parametrize("lam", list(box(3, 2)))
def test_sign_clearing_matches_brute_force(lam):
    assert lambda_zero(lam) == lambda_zero_brute(lam)


def test_rho_of_zero_and_examples():
    assert Weight((0, 0, 0)).rho == (2, 1, 0)
    assert Weight((0, 1, 0, 1)).rho == (1, 3, 0, 2)
    assert Weight((-3, 0, -9, 13)).rho == (-1, 0, -2, 3)


@given(weights3)
def test_dot_action_is_an_involution(lam):
    for i in range(lam.n + 1):
        assert dot_action(i, dot_action(i, lam)) == lam


@given(weights2)
def test_pairing_sign_flips(lam):
    for i in range(lam.n + 1):
        mu = dot_action(i, lam)
        if mu != lam:
            shift = 2 if i == 0 else 0  # the dot action moves lambda_1 to -1 - lambda_1
            assert pairing(mu, i) == shift - pairing(lam, i)


@pytest.mark.parametrize("lam", list(box(2, 3)) + list(box(3, 1)))
def test_word_is_reduced_and_climbs(lam):
    word = reduced_word_to(lam)
    assert len(word) == dot_distance(lam)
    path = word_path(lam)
    assert path[-1] == lam
    for j, (a, b) in enumerate(zip(path, path[1:])):
        assert b == dot_action(word[j], a)
        assert pairing(b, word[j]) > 0
        assert precedes(a, b)


def test_word_is_deterministic():
    assert reduced_word_to((1, 0)) == reduced_word_to(Weight((1, 0)))
    assert reduced_word_to((0, 0)) == []


def test_order_is_a_partial_order():
    ws = box(2, 1)
    for a, b in itertools.product(ws, ws):
        if a != b:
            assert not (preceq(a, b) and preceq(b, a))
    for a, b, c in itertools.product(ws, ws, ws):
        if preceq(a, b) and preceq(b, c):
            assert preceq(a, c)


def test_eigenvalue_of_zero():
    ys = y_eigenvalue((0, 0, 0))
    t = gen_full("t")
    assert ys == (t ** 2 * DERIVED["a_star"], t * DERIVED["a_star"], DERIVED["a_star"])
    assert y_eigenvalue((0, 0), dual=True)[1] == DERIVED["a"]


def test_dot_action_rejects_bad_index():
    with pytest.raises(PreconditionError):
        dot_action(3, (0, 0))


# -- neighborhoods ------------------------------------------------------------------

ADMISSIBLE_2_1_BOX2 = [(-2, 0), (-1, -2), (-1, 2), (0, -2), (0, 2), (1, 0), (2, -1), (2, 0), (2, 1)]


def test_admissible_weights_rank_two():
    got = [tuple(lam) for lam in box(2, 2) if admissible(lam, 2, 1)]
    assert got == ADMISSIBLE_2_1_BOX2


@given(weights3, st.integers(2, 3), st.integers(1, 2))
def test_neighborhoods_read_from_nonnegative_representative(lam, a, b):
    assert (len(neighborhood_pairs(lam, a, b)) == 0) == (neighborhoods_nonneg(lam, a, b) == 0)


def test_neighborhood_preconditions():
    with pytest.raises(PreconditionError):
        neighborhood_pairs((0, 0), 3, 1)


# -- quotients ------------------------------------------------------------------------


def test_quotient_worked_example():
    data = quotient_data((-3, 0, -9, 13), 4)
    assert data.indices == (4, 3, 1, 2)
    assert data.gaps == (1, 2, 0, 0)
    assert data.quot == (3, 2, 0, 0)
    assert data.std == (9, 6, 0, 0)
    assert fiber_map((-3, 0, -9, 13), 4) == (-3, 0, -3, 4)
    quot, std = quotient_r((-3, 0, -9, 13), 4)
    assert quot == (3, 2, 0, 0) and std == Weight((9, 6, 0, 0))


@given(weights3, st.integers(2, 4))
def test_quotient_is_a_partition_and_fiber_has_zero_quotient(lam, r):
    data = quotient_data(lam, r)
    assert all(x >= y >= 0 for x, y in zip(data.quot, data.quot[1:] + (0,)))
    assert quotient_data(fiber_map(lam, r), r).quot == (0,) * lam.n


@given(weights2)
def test_standard_weight_is_fixed(lam):
    std = Weight(quotient_data(lam, 3).std)
    assert std.is_dominant()
    assert quotient_data(std, 3).std == tuple(std)


def test_dominance():
    assert dominance_geq((2, 0), (1, 1))
    assert not dominance_geq((1, 1), (2, 0))
    assert dominance_geq((3, 0), (1, 1))
