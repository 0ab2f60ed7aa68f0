"""Non-symmetric Koornwinder polynomials built with intertwiners, and their evaluations."""

from __future__ import annotations

import os
import threading
from collections import OrderedDict
from dataclasses import dataclass

from .errors import InvariantError, PreconditionError
from .params import DERIVED, Monomial, ParamScalar, gen_full, gen_half
from .polyrep import XLaurent, chi_eval, noumi_T, x_op, y_op
from .weights import (
    Weight, as_weight, dot_action, pairing, precedes, reduced_word_to, y_eigenvalue,
)

MEMO_ENV = "DAHAPOLY_MEMO_CAPACITY"


def _s(m):
    return m.scalar() if isinstance(m, Monomial) else ParamScalar.coerce(m)


def _half_diff(name):
    """``p^(1/2) - p^(-1/2)`` for a parameter name."""
    h = gen_half(name)
    return _s(h) - _s(h.inverse())


# ---------------------------------------------------------------------------
# Y-scalars
# ---------------------------------------------------------------------------


def _ys(lam):
    return y_eigenvalue(lam)


def D_at(i, direction, lam):
    """``D_i(Y^(+-alpha_i^vee))`` evaluated at ``y(lam)``."""
    lam = as_weight(lam)
    n, y, d = lam.n, _ys(lam), direction
    if i == 0:
        return _s(gen_full("q") ** d * y[0] ** (2 * d)) - 1
    if i == n:
        return _s(y[n - 1] ** (-2 * d)) - 1
    if 1 <= i < n:
        return _s(y[i] ** d * y[i - 1] ** (-d)) - 1
    raise PreconditionError(f"index {i} outside 0..{n}")


def N_at(i, direction, lam):
    """``N_i(Y^(+-alpha_i^vee))`` evaluated at ``y(lam)``."""
    lam = as_weight(lam)
    n, y, d = lam.n, _ys(lam), direction
    if i == 0:
        qh = gen_half("q")
        base = _s(qh ** d * y[0] ** d)
        return (_s(gen_half("un")) * (base - _s(qh * DERIVED["c_prime"]))
                * (base - _s(qh * DERIVED["d_prime"])))
    if i == n:
        base = _s(y[n - 1] ** (-d))
        return (_s(gen_half("tn")) * (base - _s(DERIVED["a_prime"]))
                * (base - _s(DERIVED["b_prime"])))
    if 1 <= i < n:
        return _s(gen_half("t")) * (_s(y[i] ** d * y[i - 1] ** (-d)) - _s(gen_full("t").inverse()))
    raise PreconditionError(f"index {i} outside 0..{n}")


def phi_squared(i, lam):
    return (N_at(i, 1, lam) * N_at(i, -1, lam)) / (D_at(i, 1, lam) * D_at(i, -1, lam))


def phi_scalar(i, lam):
    """The rational-in-``Y`` summand of the intertwiner ``phi_i`` evaluated at ``lam``."""
    lam = as_weight(lam)
    n, y = lam.n, _ys(lam)
    if i == 0:
        top = _half_diff("un") + _half_diff("u0") * _s(gen_half("q") * y[0])
    elif i == n:
        top = _half_diff("tn") + _half_diff("t0") * _s(y[n - 1].inverse())
    else:
        top = _half_diff("t")
    return top / D_at(i, 1, lam)


def _lead_half(i, n):
    return gen_half("t0" if i == 0 else "tn" if i == n else "t")


def c_coeff(i, lam):
    """Coefficient ``c`` with ``phi_i E_lam = c E_(s_i . lam)``."""
    lam = as_weight(lam)
    n = lam.n
    if not 0 <= i <= n:
        raise PreconditionError(f"index {i} outside 0..{n}")
    if i == 0:
        astar, t = DERIVED["a_star"], gen_half("t")
        rho1 = lam.rho[0]
        if lam[0] >= 0:
            return _s(gen_half("t0") * t ** (-2 * rho1) * astar.inverse())
        # exponent of t is -rho_1 so that c_(0,lam) c_(0,s_0 lam) = phi_0^2 at lam
        return _s(gen_half("t0").inverse() * t ** (-2 * rho1) * astar) * phi_squared(0, lam)
    p = pairing(lam, i)
    half = _lead_half(i, n)
    if p < 0:
        return _s(half)
    if p == 0:
        return ParamScalar(0)
    return _s(half.inverse()) * phi_squared(i, lam)


def apply_phi(i, f, lam):
    """Apply ``phi_i`` to an eigenvector ``f`` with eigenvalue ``y(lam)``."""
    lam = as_weight(lam)
    if i == 0:
        # U_n f = y_1^(-1) x_1^(-1) T_0 f on an eigenvector
        moved = x_op(1, -1, noumi_T(0, 1, f)).scale(_ys(lam)[0].inverse())
    else:
        moved = noumi_T(i, 1, f)
    return moved + f.scale(phi_scalar(i, lam))


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class KoornwinderPoly:
    lam: Weight
    body: XLaurent
    dual: bool = False

    def eigenvalues(self):
        ys = y_eigenvalue(self.lam)
        return [m.dual() for m in ys] if self.dual else list(ys)

    def is_monic(self):
        return self.body.coefficient(tuple(self.lam)) == 1

    def is_triangular(self):
        return all(tuple(mu) == tuple(self.lam) or precedes(mu, self.lam) for mu in self.body.support())

    def is_eigenvector(self):
        body = self.body.dual() if self.dual else self.body
        ys = y_eigenvalue(self.lam)
        return all(y_op(i + 1, body) == body.scale(ys[i]) for i in range(self.lam.n))


class _LRU:
    """Thread-safe least-recently-used cache."""

    def __init__(self, capacity):
        self.capacity = capacity
        self._data = OrderedDict()
        self._lock = threading.Lock()

    def get(self, key):
        with self._lock:
            if key in self._data:
                self._data.move_to_end(key)
                return self._data[key]
        return None

    def put(self, key, value):
        with self._lock:
            self._data[key] = value
            self._data.move_to_end(key)
            while len(self._data) > self.capacity:
                self._data.popitem(last=False)

    def clear(self):
        with self._lock:
            self._data.clear()

    def __len__(self):
        return len(self._data)


_MEMO = _LRU(int(os.environ.get(MEMO_ENV, "4096")))


def set_memo_capacity(capacity):
    _MEMO.capacity = capacity


def clear_memo():
    _MEMO.clear()


def _first_descent(lam):
    word = reduced_word_to(lam)
    return word[-1]


def _E_body(lam):
    if not any(lam):
        return XLaurent.one(lam.n)
    key = tuple(lam)
    hit = _MEMO.get(key)
    if hit is not None:
        return hit
    j = _first_descent(lam)
    prev = dot_action(j, lam)
    body = apply_phi(j, _E_body(prev), prev) / c_coeff(j, prev)
    _MEMO.put(key, body)
    return body


def compute_E(lam, dual=False):
    """The polynomial ``E_lam`` (or ``E*_lam`` with dual parameters)."""
    lam = as_weight(lam)
    body = _E_body(lam)
    return KoornwinderPoly(lam, body.dual() if dual else body, dual)


def compute_E_along(word, n):
    """Build ``E`` by applying intertwiners along ``word`` (first letter acts first) from zero.

    Every step must move up; the memo is bypassed.
    """
    lam = Weight((0,) * n)
    body = XLaurent.one(n)
    for j in word:
        c = c_coeff(j, lam)
        if c.is_zero() or pairing(dot_action(j, lam), j) <= 0:
            raise PreconditionError(f"step s_{j} from {list(lam)} does not move up")
        body = apply_phi(j, body, lam) / c
        lam = dot_action(j, lam)
    return KoornwinderPoly(lam, body)


# ---------------------------------------------------------------------------
# Evaluations at the trivial weight
# ---------------------------------------------------------------------------


def _recurrence_factor(i, lam):
    """Ratio ``chi0*(E_(s_i lam)) / chi0*(E_lam)`` for a step with ``<lam, alpha_i> < 0``."""
    lam = as_weight(lam)
    n = lam.n
    ratio = N_at(i, 1, lam) / D_at(i, 1, lam)
    if i == 0:
        return _s(gen_half("t0").inverse() * gen_half("t") ** (2 * lam.rho[0]) * DERIVED["a_star"]) * ratio
    return _s(_lead_half(i, n).inverse()) * ratio


def chi0_recurrence(lam):
    """``chi0*(E_lam)`` by walking the recurrence up from the zero weight."""
    lam = as_weight(lam)
    cur = Weight((0,) * lam.n)
    value = ParamScalar(1)
    for j in reduced_word_to(lam):
        value = value * _recurrence_factor(j, cur)
        cur = dot_action(j, cur)
    return value


def _poch(x, base, m):
    out = ParamScalar(1)
    for ell in range(m):
        out = out * (1 - _s(x * base ** ell))
    return out


def chi0_star_closed(lam):
    """Closed product for ``chi0*(E_lam)`` at a dominant weight."""
    lam = as_weight(lam)
    if not lam.is_dominant():
        raise PreconditionError(f"{list(lam)} is not dominant")
    n = lam.n
    t, q = gen_full("t"), gen_full("q")
    a, astar, bstar = DERIVED["a"], DERIVED["a_star"], DERIVED["b_star"]
    cstar, dstar = DERIVED["c_star"], DERIVED["d_star"]
    value = ParamScalar(1)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            m = lam[i - 1] - lam[j - 1]
            value = value * _s(t ** (-m)) * _poch(t ** (j - i + 1) * q, q, m) / _poch(t ** (j - i) * q, q, m)
            m = lam[i - 1] + lam[j - 1]
            value = value * _s(t ** (-m)) * (_poch(t ** (2 * n - i - j + 1) * astar ** 2 * q, q, m)
                                            / _poch(t ** (2 * n - i - j) * astar ** 2 * q, q, m))
    for i in range(1, n + 1):
        m = lam[i - 1]
        ti = t ** (n - i)
        top = ParamScalar(1)
        for x in (ti * astar ** 2 * q, ti * astar * bstar * q, ti * astar * cstar, ti * astar * dstar):
            top = top * _poch(x, q, m)
        bottom = (_poch(q ** 2 * t ** (2 * (n - i)) * astar ** 2, q ** 2, m)
                  * _poch(q * t ** (2 * (n - i)) * astar ** 2, q ** 2, m))
        value = value * _s(a ** (-m) * t ** ((n - i) * m)) * top / bottom
    return value


def chi0_star(lam):
    """``chi0*(E_lam)`` from the dominant closed form, walked down to ``lam``."""
    lam = as_weight(lam)
    path = []
    cur = lam
    while not cur.is_dominant():
        for i in range(1, cur.n + 1):
            if pairing(cur, i) < 0:
                path.append((i, cur))
                cur = dot_action(i, cur)
                break
    value = chi0_star_closed(cur)
    for i, mu in reversed(path):
        value = value / _recurrence_factor(i, mu)
    return value


def chi0_direct(lam):
    """``chi0*(E_lam)`` by evaluating the computed polynomial."""
    lam = as_weight(lam)
    return chi_eval(Weight((0,) * lam.n), compute_E(lam).body, dual=True)


def duality_sides(lam, mu):
    lam, mu = as_weight(lam), as_weight(mu)
    zero = Weight((0,) * lam.n)
    e_lam = compute_E(lam).body
    e_mu_star = compute_E(mu, dual=True).body
    left = chi_eval(mu, e_lam, dual=True) * chi_eval(zero, e_mu_star)
    right = chi_eval(lam, e_mu_star) * chi_eval(zero, e_lam, dual=True)
    return left, right


def duality_check(lam, mu):
    left, right = duality_sides(lam, mu)
    return left == right


def assert_koornwinder(p):
    """Raise ``InvariantError`` unless ``p`` is monic, triangular and an eigenvector."""
    if not p.is_monic():
        raise InvariantError(f"E_{list(p.lam)} is not monic")
    if not p.is_triangular():
        raise InvariantError(f"E_{list(p.lam)} is not triangular")
    if not p.is_eigenvector():
        raise InvariantError(f"E_{list(p.lam)} is not an eigenvector")


__all__ = [
    "D_at", "N_at", "phi_squared", "phi_scalar", "c_coeff", "apply_phi", "KoornwinderPoly",
    "compute_E", "compute_E_along", "chi0_recurrence", "chi0_star_closed", "chi0_star",
    "chi0_direct", "duality_check", "duality_sides", "assert_koornwinder", "set_memo_capacity",
    "clear_memo",
]
