"""Modified polynomials at a specialization: modification data, its recurrence, and arrows."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .errors import InvariantError, PreconditionError
from .koornwinder import D_at, N_at, c_coeff, chi0_recurrence, compute_E
from .params import (
    DERIVED, Monomial, ParamScalar, gen_full, gen_half, monomials_equal_at, specialize,
    zeta_scalar,
)
from .polyrep import XLaurent, y_op
from .weights import Weight, as_weight, dot_action, precedes, reduced_word_to, y_eigenvalue

# ---------------------------------------------------------------------------
# Binomial factorizations of the D and N scalars
# ---------------------------------------------------------------------------


def d_binomial(i, lam):
    """Signed monomial ``w`` with ``D_i(Y^(alpha_i^vee))|_lam = w - 1``."""
    lam = as_weight(lam)
    n, y = lam.n, y_eigenvalue(lam)
    if i == 0:
        return gen_full("q") * y[0] ** 2
    if i == n:
        return y[n - 1] ** -2
    return y[i] / y[i - 1]


def n_binomials(i, lam):
    """``(prefactor, [w_1, ...])`` with ``N_i(Y^(alpha_i^vee))|_lam = prefactor * prod (w_k - 1)``."""
    lam = as_weight(lam)
    n, y = lam.n, y_eigenvalue(lam)
    if i == 0:
        pre = gen_half("un") * gen_full("q") * DERIVED["c_prime"] * DERIVED["d_prime"]
        return pre, [DERIVED["c_star"] * y[0], DERIVED["d_star"] * y[0]]
    if i == n:
        pre = gen_half("tn") * DERIVED["a_prime"] * DERIVED["b_prime"]
        inv = y[n - 1].inverse()
        return pre, [DERIVED["a_star"] * inv, DERIVED["b_star"] * inv]
    return gen_half("t").inverse(), [gen_full("t") * y[i] / y[i - 1]]


def _one():
    return Monomial(1, (0,) * 6)


def _vanishes(w, s):
    return monomials_equal_at(w, _one(), s)


def _lattice_coordinate(w, s):
    k = s.lattice_multiple(w.exp)
    if k is None:
        raise InvariantError(f"vanishing binomial {w} is not on the specialization lattice")
    return k


def _binomial_ratio(top, bottom, s):
    """Value at ``s = 0`` of ``prod (top_k - 1) / prod (bottom_k - 1)`` from exponents alone."""
    ratio = Fraction(1)
    for wt, wb in zip(top, bottom):
        vt, vb = _vanishes(wt, s), _vanishes(wb, s)
        if vt != vb:
            raise InvariantError("binomial factors disagree on vanishing at s = 0")
        if vt:
            ratio *= Fraction(_lattice_coordinate(wt, s), _lattice_coordinate(wb, s))
        elif not monomials_equal_at(wt, wb, s):
            raise InvariantError("non-vanishing binomial factors differ at s = 0")
    return ratio


def _direct_ratio(num, den, s):
    value = specialize(num / den, s).as_rational()
    if value is None:
        raise InvariantError("ratio does not specialize to a rational number")
    return value


def same_eigenvalue(lam, mu, s):
    """``y(lam)|_{s=0} == y(mu)|_{s=0}``, decided on exponent vectors."""
    return all(monomials_equal_at(a, b, s) for a, b in zip(y_eigenvalue(lam), y_eigenvalue(mu)))


def _ratio_pre(i, lam, mu, s):
    lam, mu = as_weight(lam), as_weight(mu)
    if dot_action(i, lam) == lam or dot_action(i, mu) == mu:
        raise PreconditionError("ratio needs weights moved by s_i")
    if not same_eigenvalue(lam, mu, s):
        raise PreconditionError("weights have different specialized eigenvalues")
    return lam, mu


def n_ratio(i, mu, lam, s):
    """``N_i|_mu / N_i|_lam`` at ``s = 0``, computed two ways that must agree."""
    lam, mu = _ratio_pre(i, lam, mu, s)
    direct = _direct_ratio(N_at(i, 1, mu), N_at(i, 1, lam), s)
    shortcut = _binomial_ratio(n_binomials(i, mu)[1], n_binomials(i, lam)[1], s)
    if direct != shortcut:
        raise InvariantError(f"n-ratio routes disagree: {direct} vs {shortcut}")
    return direct


def d_ratio(i, lam, mu, s):
    """``D_i|_lam / D_i|_mu`` at ``s = 0``, computed two ways that must agree."""
    lam, mu = _ratio_pre(i, lam, mu, s)
    direct = _direct_ratio(D_at(i, 1, lam), D_at(i, 1, mu), s)
    shortcut = _binomial_ratio([d_binomial(i, lam)], [d_binomial(i, mu)], s)
    if direct != shortcut:
        raise InvariantError(f"d-ratio routes disagree: {direct} vs {shortcut}")
    return direct


def d_vanishes(i, lam, s):
    return _vanishes(d_binomial(i, lam), s)


# ---------------------------------------------------------------------------
# Modified polynomials
# ---------------------------------------------------------------------------


def _merge(pairs, lead):
    acc = {}
    for m, mu in pairs:
        key = tuple(mu)
        acc[key] = acc.get(key, Fraction(0)) + Fraction(m)
    out = []
    for key in sorted(acc):
        if acc[key] == 0:
            continue
        if key == tuple(lead):
            raise InvariantError(f"modification data contains the leading weight {list(lead)}")
        out.append((acc[key], Weight(key)))
    return tuple(out)


@dataclass(frozen=True, eq=False)
class ModPoly:
    """Leading weight, rational modification data, and the specialization it refers to."""

    lam: Weight
    mt: tuple
    spec: object
    word: tuple = field(default=(), compare=False)

    @classmethod
    def make(cls, lam, pairs, spec, word=()):
        lam = as_weight(lam)
        return cls(lam, _merge(pairs, lam), spec, tuple(word))

    @classmethod
    def plain(cls, lam, spec):
        return cls.make(lam, (), spec)

    def weights(self):
        return [mu for _, mu in self.mt]

    def coefficient(self, mu):
        for m, nu in self.mt:
            if tuple(nu) == tuple(mu):
                return m
        return Fraction(0)

    def check_fiber(self):
        return all(same_eigenvalue(self.lam, mu, self.spec) for mu in self.weights())

    def is_triangular(self):
        return all(precedes(mu, self.lam) for mu in self.weights())

    def expansion_terms(self):
        """Pairs ``(scalar, weight)`` with the full coefficient of each ``E_mu``."""
        lead = chi0_recurrence(self.lam)
        terms = [(ParamScalar(1), self.lam)]
        for m, mu in self.mt:
            terms.append((ParamScalar(m) * lead / chi0_recurrence(mu), mu))
        return terms

    def expand(self):
        body = XLaurent.zero(self.lam.n)
        for coeff, mu in self.expansion_terms():
            body = body + compute_E(mu).body.scale(coeff)
        return body

    def zeta(self):
        return self.expand().zeta(self.spec)

    def is_specializable(self):
        return self.zeta() >= 0

    def specialize(self):
        return self.expand().specialize(self.spec)

    def mt_json(self):
        return [[str(m), list(mu)] for m, mu in self.mt]

    def to_json(self):
        return {"lambda": list(self.lam), "mt": self.mt_json(), "word": list(self.word)}

    def __repr__(self):
        return f"ModPoly({list(self.lam)}, mt={self.mt_json()})"


@dataclass(frozen=True, eq=False)
class StepResult:
    poly: ModPoly
    multiplier: ParamScalar
    case: str


def mod_step(i, p, nu=None):
    """Act with the modified intertwiner ``phi_i`` on ``p``; returns the new data and multiplier."""
    lam, s = p.lam, p.spec
    moved = dot_action(i, lam)
    word = p.word + (i,)
    s_i = [mu for mu in p.weights() if dot_action(i, mu) != mu]
    if moved != lam:
        if moved in p.weights():
            raise PreconditionError(f"s_{i} sends the leading weight onto a modification weight")
        c = c_coeff(i, lam)
        if not d_vanishes(i, lam, s):
            pairs = [(n_ratio(i, mu, lam, s) * p.coefficient(mu), dot_action(i, mu)) for mu in s_i]
            return StepResult(ModPoly.make(moved, pairs, s, word), c, "i")
        pairs = [(-1, lam)]
        for mu in s_i:
            d = d_ratio(i, lam, mu, s) * p.coefficient(mu)
            pairs += [(d, dot_action(i, mu)), (-d, mu)]
        return StepResult(ModPoly.make(moved, pairs, s, word), c, "ii")
    # the leading weight is fixed by s_i: act through a moved modification weight
    if not s_i:
        raise PreconditionError("case iii needs a modification weight moved by s_i")
    if nu is None:
        nu = s_i[0]
    nu = as_weight(nu)
    if nu not in s_i:
        raise PreconditionError(f"case iii: {list(nu)} is not a moved modification weight")
    if d_vanishes(i, lam, s):
        raise InvariantError("case iii: D_i vanishes at a fixed leading weight")
    m_nu = p.coefficient(nu)
    pairs = [(n_ratio(i, mu, nu, s) * p.coefficient(mu) / m_nu, dot_action(i, mu))
             for mu in s_i if mu != nu]
    c = c_coeff(i, nu) * ParamScalar(m_nu) * chi0_recurrence(lam) / chi0_recurrence(nu)
    return StepResult(ModPoly.make(dot_action(i, nu), pairs, s, word), c, "iii")


def build_along(word, n, spec, start=None):
    """Iterate ``mod_step`` along ``word`` (first letter first) from ``start`` (default ``E_0``).

    ``start`` may be a modified polynomial or a weight, read as its plain polynomial.
    """
    if start is None:
        start = Weight((0,) * n)
    p = start if isinstance(start, ModPoly) else ModPoly.plain(start, spec)
    steps = []
    for j in word:
        step = mod_step(j, p)
        steps.append(step)
        p = step.poly
    return p, steps


def build_basis_element(lam, spec):
    """``E-bar_lam`` along the deterministic word; multipliers are monic monomials."""
    lam = as_weight(lam)
    p, steps = build_along(reduced_word_to(lam), lam.n, spec)
    for step in steps:
        if not step.multiplier.is_monomial():
            raise InvariantError(f"step multiplier {step.multiplier} is not a monomial")
    return p


def check_generalized_eigen(p, power=None):
    """True when ``(Y_i - y(lam)_i)^N`` kills the specialized expansion for every ``i``."""
    power = power if power is not None else 1 + len(p.mt)
    body = p.expand()
    if body.zeta(p.spec) < 0:
        raise PreconditionError("expansion is not specializable")
    ys = y_eigenvalue(p.lam)
    for i in range(1, p.lam.n + 1):
        g = body
        for _ in range(power):
            g = y_op(i, g) - g.scale(ys[i - 1])
            if g.is_zero():
                break
        if not g.is_zero() and g.zeta(p.spec) < 1:
            return False
    return True


def eigen_residual_zeta(p, i, power):
    """Order of vanishing of ``(Y_i - y_i)^power`` applied to the expansion, using eigen-data only."""
    ys = y_eigenvalue(p.lam)
    body = XLaurent.zero(p.lam.n)
    for coeff, mu in p.expansion_terms():
        diff = (y_eigenvalue(mu)[i - 1].scalar() - ys[i - 1].scalar()) ** power
        body = body + compute_E(mu).body.scale(coeff * diff)
    return None if body.is_zero() else body.zeta(p.spec)


# ---------------------------------------------------------------------------
# Arrows
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ArrowResult:
    source: ModPoly
    index: int
    target: ModPoly | None
    multiplier: ParamScalar | None
    multiplier_zeta: int | None
    rule: str
    reason: str = ""

    @property
    def exists(self):
        return self.target is not None

    def to_json(self):
        out = {"source": self.source.to_json(), "i": self.index, "rule": self.rule,
               "arrow": self.exists}
        if self.exists:
            out["target"] = self.target.to_json()
            out["multiplier_zeta"] = self.multiplier_zeta
        else:
            out["reason"] = self.reason
        return out


def fiber(lam, spec, bound):
    """Weights in ``[-bound, bound]^n`` whose specialized eigenvalue equals that of ``lam``."""
    lam = as_weight(lam)
    return [Weight(mu) for mu in product(range(-bound, bound + 1), repeat=lam.n)
            if same_eigenvalue(lam, mu, spec)]


def _is_unit(c, s):
    return not c.is_zero() and zeta_scalar(c, s) == 0


def arrow(i, source, bound=None):
    """Decide whether the modified intertwiner ``phi_i`` carries ``source`` to a unit multiple of
    another modified polynomial at ``s = 0``."""
    s = source.spec
    step = mod_step(i, source)
    c = step.multiplier
    if c.is_zero():
        return ArrowResult(source, i, None, c, None, step.case, "multiplier is zero")
    zc = zeta_scalar(c, s)
    if zc == 0:
        if step.poly.zeta() < 0:
            raise InvariantError("recurrence produced a non-specializable polynomial")
        rule = "good" if step.case == "i" and not step.poly.mt and not source.mt else step.case
        return ArrowResult(source, i, step.poly, c, 0, rule)
    if zc < 0:
        raise InvariantError("multiplier has a pole at s = 0")
    result = step.poly.expand().scale(c)
    if result.is_zero() or result.zeta(s) >= 1:
        return ArrowResult(source, i, None, c, zc, step.case, "image vanishes at s = 0")
    # the image survives only through a pole of the target: move the leading term into the fiber
    target = step.poly
    if bound is None:
        bound = max((abs(x) for x in target.lam), default=0) + target.lam.n
    lead = chi0_recurrence(target.lam)
    for mu in fiber(target.lam, s, bound):
        if mu == target.lam or mu in target.weights():
            continue
        scale = c * lead / chi0_recurrence(mu)
        if not _is_unit(scale, s):
            continue
        rest = ModPoly.make(target.lam, list(target.mt) + [(-1, mu)], s)
        if rest.zeta() < 0:
            continue
        new = ModPoly.plain(mu, s)
        if new.zeta() < 0:
            continue
        return ArrowResult(source, i, new, scale, 0, "1to1")
    return ArrowResult(source, i, None, c, zc, step.case, "no unit multiple found in the fiber")


def verify_arrow(i, source, target):
    """Check ``(phi_i E-bar_source)|_{s=0} = c E-bar_target|_{s=0}`` with ``zeta(c) = 0``.

    Returns ``c`` on success and None otherwise; the check is on expanded polynomials.
    """
    s = source.spec
    step = mod_step(i, source)
    image = step.poly.expand().scale(step.multiplier)
    goal = target.expand()
    c = image.coefficient(tuple(target.lam))
    if not _is_unit(c, s):
        return None
    diff = image - goal.scale(c)
    if diff.is_zero() or diff.zeta(s) >= 1:
        return c
    return None
