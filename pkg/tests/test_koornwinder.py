import random
from concurrent.futures import ThreadPoolExecutor

import pytest

from dahapoly import koornwinder
from dahapoly.errors import InvariantError, PreconditionError
from dahapoly.koornwinder import (
    apply_phi, assert_koornwinder, c_coeff, chi0_direct, chi0_recurrence, chi0_star,
    chi0_star_closed, clear_memo, compute_E, compute_E_along, duality_check, duality_sides,
    phi_squared,
)
from dahapoly.params import gen_full
from dahapoly.polyrep import XLaurent
from dahapoly.weights import Weight, box, dot_action, dot_distance, pairing, precedes


def climbing_words(lam):
    """Every word from zero to ``lam`` whose steps each move strictly up (oracle for word independence)."""
    lam = Weight(lam)
    target = dot_distance(lam)
    out = []

    def rec(cur, word):
        if len(word) == target:
            if cur == lam:
                out.append(list(word))
            return
        for i in range(cur.n + 1):
            nxt = dot_action(i, cur)
            if precedes(cur, nxt) and pairing(nxt, i) > 0:
                rec(nxt, word + [i])

    rec(Weight((0,) * lam.n), [])
    return out


def test_small_examples():
    assert compute_E((0, 0)).body == XLaurent.one(2)
    e = compute_E((1, 0)).body
    q, t = gen_full("q").scalar(), gen_full("t").scalar()
    assert e.coefficient((1, 0)) == 1
    # coefficient of x2 in E_(1,0): q (t - 1) / (q t - 1)
    assert e.coefficient((0, 1)) == q * (t - 1) / (q * t - 1)
    assert set(e.support()) == {(1, 0), (0, 1), (0, 0), (0, -1), (-1, 0)}


@pytest.mark.parametrize("lam", [(1, 0), (0, 1), (-1, 0), (1, 1), (0, -1), (-1, 1), (2, 0)])
def test_every_climbing_word_gives_the_same_polynomial(lam):
    words = climbing_words(lam)
    assert words
    reference = compute_E(lam).body
    for word in words:
        assert compute_E_along(word, 2).body == reference


@pytest.mark.parametrize("lam", list(box(2, 1)) + [(2, -1), (0, 0, 1), (1, -1, 0)])
def test_monic_triangular_eigenvector(lam):
    p = compute_E(lam)
    assert p.is_monic() and p.is_triangular() and p.is_eigenvector()
    assert_koornwinder(p)


def test_assert_koornwinder_rejects_broken_polynomials():
    p = compute_E((1, 0))
    broken = koornwinder.KoornwinderPoly(p.lam, p.body + XLaurent.gen(2, 1, -1))
    with pytest.raises(InvariantError):
        assert_koornwinder(broken)


@pytest.mark.parametrize("lam", list(box(2, 1)))
def test_intertwiners_map_between_polynomials(lam):
    body = compute_E(lam).body
    for i in range(3):
        mu = dot_action(i, lam)
        if mu == lam:
            continue
        assert apply_phi(i, body, lam) == compute_E(mu).body.scale(c_coeff(i, lam))


@pytest.mark.parametrize("lam", list(box(2, 2)) + list(box(3, 1)))
def test_coefficient_products_give_phi_squared(lam):
    for i in range(len(lam) + 1):
        mu = dot_action(i, lam)
        if mu == lam:
            continue
        assert c_coeff(i, lam) * c_coeff(i, mu) == phi_squared(i, lam)


def test_fixed_weights_have_zero_coefficient():
    assert c_coeff(1, (1, 1)) == 0
    assert c_coeff(2, (1, 0)) == 0


def test_dual_polynomial_is_parameter_dual():
    for lam in [(1, 0), (-1, 1)]:
        assert compute_E(lam, dual=True).body == compute_E(lam).body.dual()


@pytest.mark.parametrize("lam", [(0, 0), (1, 0), (2, 0), (1, 1), (2, 1), (1, 0, 0), (1, 1, 0)])
def test_evaluation_routes_agree(lam):
    closed = chi0_star_closed(lam)
    assert closed == chi0_recurrence(lam)
    assert closed == chi0_direct(lam)
    assert closed == chi0_star(lam)


@pytest.mark.parametrize("lam", [(-1, 0), (0, -1), (1, -1), (-2, 1)])
def test_walk_from_dominant_matches_direct(lam):
    assert chi0_star(lam) == chi0_direct(lam) == chi0_recurrence(lam)


def test_closed_form_needs_dominant():
    with pytest.raises(PreconditionError):
        chi0_star_closed((0, 1))


def test_duality_on_random_pairs():
    rng = random.Random(0)
    ws = box(2, 1)
    for _ in range(6):
        lam, mu = rng.choice(ws), rng.choice(ws)
        assert duality_check(lam, mu)
    left, right = duality_sides((1, 0), (0, 1))
    assert left == right and not left.is_zero()


def test_memo_capacity_and_threads():
    clear_memo()
    koornwinder.set_memo_capacity(3)
    try:
        serial = [compute_E(lam).body for lam in box(2, 1)]
        assert len(koornwinder._MEMO) <= 3
        clear_memo()
        with ThreadPoolExecutor(4) as ex:
            threaded = list(ex.map(lambda lam: compute_E(lam).body, box(2, 1)))
        assert threaded == serial
    finally:
        koornwinder.set_memo_capacity(4096)
        clear_memo()


def test_compute_along_rejects_downward_steps():
    with pytest.raises(PreconditionError):
        compute_E_along([1], 2)
