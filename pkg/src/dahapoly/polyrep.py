"""Laurent polynomials in ``x_1..x_n`` over the parameter field and the Noumi operators on them."""

from __future__ import annotations

import math
import random
from collections import defaultdict
from dataclasses import dataclass

from .errors import InvariantError, PreconditionError
from .params import (
    DERIVED, MAX_RANK, NPARAM, NVARS, ONE, X_OFFSET, ZERO, ZERO_SHIFT,
    Laurent, Monomial, ParamScalar, format_laurent, gen_half, pad, specialize_fraction,
    swap_dual, zeta,
)
from .weights import as_weight, y_eigenvalue


def _x_exp(n, x):
    e = [0] * NVARS
    e[X_OFFSET:X_OFFSET + n] = x
    return tuple(e)


def _mono(sign, exp):
    return Laurent.monomial(exp, sign)


class XLaurent:
    """Laurent polynomial in ``x_1..x_n`` with parameter-field coefficients.

    Stored as one integer Laurent polynomial in all variables divided by a
    common denominator that involves the parameters only.
    """

    __slots__ = ("n", "num", "den")

    def __init__(self, n, num, den=ONE, *, reduced=False):
        if not 1 <= n <= MAX_RANK:
            raise PreconditionError(f"rank {n} outside 1..{MAX_RANK}")
        self.n = n
        if reduced or num.is_zero():
            self.num, self.den = (num, den) if not num.is_zero() else (ZERO, ONE)
            return
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        p, d = num.poly, den.poly
        if not d.is_constant():
            g = p.gcd(d)
            if not g.is_one():
                p, d = p / g, d / g
        else:
            g = math.gcd(int(p.content()), int(d.leading_coefficient()))
            if g != 1:
                p, d = p / g, d / g
        if d.leading_coefficient() < 0:
            p, d = -p, -d
        shift = tuple(a - b for a, b in zip(num.shift, den.shift))
        self.num = Laurent.make(p, shift)
        self.den = Laurent(d, ZERO_SHIFT)

    # -- construction -------------------------------------------------------

    @classmethod
    def zero(cls, n):
        return cls(n, ZERO)

    @classmethod
    def one(cls, n):
        return cls(n, ONE)

    @classmethod
    def monomial(cls, n, x, coeff=1):
        """``coeff * x^x`` for an exponent vector ``x`` of length ``n``."""
        if len(x) != n:
            raise PreconditionError("exponent length differs from rank")
        base = cls(n, Laurent.monomial(_x_exp(n, x)))
        return base.scale(coeff)

    @classmethod
    def from_terms(cls, n, terms):
        """Build from ``{x-exponent: coefficient}`` where coefficients are scalars."""
        out = cls.zero(n)
        for x, c in terms.items():
            out = out + cls.monomial(n, tuple(x), c)
        return out

    @classmethod
    def gen(cls, n, i, power=1):
        x = [0] * n
        x[i - 1] = power
        return cls.monomial(n, tuple(x))

    # -- structure -----------------------------------------------------------

    def is_zero(self):
        return self.num.is_zero()

    def coefficients(self):
        """Map from x-exponent tuples to coefficients in the parameter field."""
        groups = defaultdict(dict)
        lo, hi = X_OFFSET, X_OFFSET + self.n
        for e, c in self.num.terms():
            groups[e[lo:hi]][e[:lo] + (0,) * (NVARS - lo)] = c
        return {x: ParamScalar(Laurent.from_terms(t), self.den) for x, t in groups.items()}

    def support(self):
        lo, hi = X_OFFSET, X_OFFSET + self.n
        return {e[lo:hi] for e, _ in self.num.terms()}

    def coefficient(self, x):
        return self.coefficients().get(tuple(x), ParamScalar(0))

    def degree_span(self):
        """Largest ``max - min`` exponent over the variables."""
        sup = self.support()
        if not sup:
            return 0
        return max(max(col) - min(col) for col in zip(*sup))

    # -- arithmetic ----------------------------------------------------------

    def _lift(self, other):
        if isinstance(other, XLaurent):
            if other.n != self.n:
                raise PreconditionError("rank mismatch")
            return other
        return XLaurent.one(self.n).scale(other)

    def __add__(self, other):
        other = self._lift(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.den == other.den:
            return XLaurent(self.n, self.num + other.num, self.den)
        return XLaurent(self.n, self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return XLaurent(self.n, -self.num, self.den, reduced=True)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, XLaurent):
            if other.n != self.n:
                raise PreconditionError("rank mismatch")
            return XLaurent(self.n, self.num * other.num, self.den * other.den)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c):
        """Multiply by a parameter scalar, monomial, or rational."""
        if isinstance(c, Monomial):
            return XLaurent(self.n, self.num.shifted(pad(c.exp)) * c.sign, self.den, reduced=True)
        if isinstance(c, int):
            return XLaurent(self.n, self.num * c, self.den) if c else XLaurent.zero(self.n)
        c = ParamScalar.coerce(c)
        if c.is_zero():
            return XLaurent.zero(self.n)
        return XLaurent(self.n, self.num * c.num, self.den * c.den)

    def __truediv__(self, c):
        return self.scale(ParamScalar.coerce(c).inverse())

    def shifted(self, x):
        """Multiply by ``x^x``."""
        return XLaurent(self.n, self.num.shifted(_x_exp(self.n, x)), self.den, reduced=True)

    def __eq__(self, other):
        if not isinstance(other, XLaurent):
            try:
                other = self._lift(other)
            except TypeError:
                return NotImplemented
        if self.n != other.n:
            return False
        if self.den == other.den:
            return self.num == other.num
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def dual(self):
        """Replace every parameter by its dual."""
        return XLaurent(self.n, swap_dual(self.num), swap_dual(self.den))

    def _map(self, fn):
        return XLaurent(self.n, self.num.map_exponents(fn), self.den, reduced=True)

    # -- specialization ------------------------------------------------------

    def zeta(self, s):
        """Smallest order of vanishing among the coefficients."""
        return zeta(self.num, s) - zeta(self.den, s)

    def specialize(self, s):
        return specialize_fraction(self.num, self.den, s)

    # -- output --------------------------------------------------------------

    def sorted_terms(self):
        """Terms ordered by graded reverse lexicographic order on exponents, ties by vector."""
        def key(item):
            x = item[0]
            return (sum(x), tuple(-a for a in reversed(x)), x)
        return sorted(self.coefficients().items(), key=key, reverse=True)

    def pretty(self):
        if self.is_zero():
            return "0"
        parts = []
        for x, c in self.sorted_terms():
            mono = "*".join(f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}" for i, e in enumerate(x) if e)
            coeff = _format_scalar(c)
            if not mono:
                parts.append(coeff)
            elif coeff == "1":
                parts.append(mono)
            else:
                parts.append(f"({coeff})*{mono}")
        return " + ".join(parts)

    def to_json(self):
        return [[list(x), c.to_json()] for x, c in self.sorted_terms()]

    def __repr__(self):
        return f"XLaurent(n={self.n}, {self.pretty()})"


def _format_scalar(c):
    num = format_laurent(c.num)
    if c.den.is_constant() and int(c.den.poly.leading_coefficient()) == 1:
        return num
    return f"({num})/({format_laurent(c.den)})"


# ---------------------------------------------------------------------------
# Affine Weyl group action
# ---------------------------------------------------------------------------


def _xi(i):
    return X_OFFSET + i - 1


def weyl_act(i, f):
    """Apply ``s_i`` with ``s_0 x_1 = q x_1^(-1)`` and ``s_n x_n = x_n^(-1)``."""
    n = f.n
    if i == 0:
        k = _xi(1)

        def fn(e):
            e2 = list(e)
            e2[0] += 2 * e[k]
            e2[k] = -e[k]
            return tuple(e2), 1
        return f._map(fn)
    if i == n:
        k = _xi(n)

        def fn(e):
            e2 = list(e)
            e2[k] = -e[k]
            return tuple(e2), 1
        return f._map(fn)
    if 1 <= i < n:
        perm = list(range(NVARS))
        perm[_xi(i)], perm[_xi(i + 1)] = _xi(i + 1), _xi(i)
        return XLaurent(n, f.num.permuted(perm), f.den, reduced=True)
    raise PreconditionError(f"no generator s_{i} in rank {n}")


def _x_laurent(terms):
    return Laurent.from_terms({pad(e): c for e, c in terms.items()})


def _var(i, power=1):
    e = [0] * NVARS
    e[_xi(i)] = power
    return tuple(e)


def _param_times_var(mono, i, power):
    e = list(pad(mono.exp))
    e[_xi(i)] += power
    return tuple(e)


class _Kernel:
    """Numerator and denominator binomials of the difference part of a Noumi operator."""

    def __init__(self, n, i):
        if i == 0:
            c, d = DERIVED["c"], DERIVED["d"]
            # (x_1 - c)(x_1 - d) / (x_1^2 - q)
            self.mult = _x_laurent({_var(1, 2): 1}) - _x_laurent({_var(1, 1): 1}) * (
                _mono(c.sign, pad(c.exp)) + _mono(d.sign, pad(d.exp))) + _mono(
                (c * d).sign, pad((c * d).exp))
            self.div = _x_laurent({_var(1, 2): 1, pad((2,)): -1})
            self.coeff = gen_half("t0")
        elif i == n:
            a, b = DERIVED["a"], DERIVED["b"]
            ab = a * b
            self.mult = (ONE - _x_laurent({_param_times_var(a, n, 1): a.sign, _param_times_var(b, n, 1): b.sign})
                         + _x_laurent({_param_times_var(ab, n, 2): ab.sign}))
            self.div = _x_laurent({ZERO_SHIFT: 1, _var(n, 2): -1})
            self.coeff = gen_half("tn")
        else:
            t = Monomial(1, (0, 2, 0, 0, 0, 0))
            self.mult = _x_laurent({_var(i + 1): 1, _param_times_var(t, i, 1): -1})
            self.div = _x_laurent({_var(i + 1): 1, _var(i): -1})
            self.coeff = gen_half("t")


_KERNELS = {}


def _kernel(n, i):
    key = (n, i)
    if key not in _KERNELS:
        _KERNELS[key] = _Kernel(n, i)
    return _KERNELS[key]


def noumi_T(i, sign, f):
    """Apply ``T_i`` (``sign = 1``) or its inverse (``sign = -1``)."""
    n = f.n
    if not 0 <= i <= n:
        raise PreconditionError(f"no operator T_{i} in rank {n}")
    if sign not in (1, -1):
        raise PreconditionError("sign must be +1 or -1")
    if f.is_zero():
        return f
    ker = _kernel(n, i)
    diff = weyl_act(i, f).num - f.num
    if diff.is_zero():
        body = ZERO
    else:
        try:
            body = diff.exact_div(ker.div) * ker.mult
        except InvariantError as exc:
            raise InvariantError(f"inexact division in T_{i}") from exc
    half = ker.coeff
    # sign * half-power constant plus the half-power inverse times the difference term
    lead = f.num.shifted(pad(half.exp if sign == 1 else half.inverse().exp))
    body = body.shifted(pad(half.inverse().exp))
    return XLaurent(n, lead + body, f.den, reduced=True)


def x_op(i, sign, f):
    """Multiplication by ``x_i^sign``."""
    x = [0] * f.n
    x[i - 1] = sign
    return f.shifted(tuple(x))


def y_word(i, n, sign=1):
    """Operator word for ``Y_i^sign`` as ``(generator, sign)`` pairs in application order."""
    if not 1 <= i <= n:
        raise PreconditionError(f"no operator Y_{i} in rank {n}")
    word = [(j, -1) for j in range(i - 1, 0, -1)]
    word += [(j, 1) for j in range(0, n + 1)]
    word += [(j, 1) for j in range(n - 1, i - 1, -1)]
    if sign == 1:
        return word
    return [(j, -s) for j, s in reversed(word)]


def y_op(i, f, sign=1):
    """Apply ``Y_i`` (or its inverse)."""
    for j, s in y_word(i, f.n, sign):
        f = noumi_T(j, s, f)
    return f


def u_n_op(f, sign=1):
    """Apply ``U_n = X_1^(-1) T_0 Y_1^(-1)`` or its inverse ``Y_1 T_0^(-1) X_1``."""
    if sign == 1:
        return x_op(1, -1, noumi_T(0, 1, y_op(1, f, -1)))
    return y_op(1, noumi_T(0, -1, x_op(1, 1, f)))


# ---------------------------------------------------------------------------
# Operator words
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OperatorTag:
    """One generator of an operator word: ``kind`` is T, X, Y, U or s."""

    kind: str
    index: int = 0
    sign: int = 1

    def apply(self, f):
        if self.kind == "T":
            return noumi_T(self.index, self.sign, f)
        if self.kind == "X":
            return x_op(self.index, self.sign, f)
        if self.kind == "Y":
            return y_op(self.index, f, self.sign)
        if self.kind == "U":
            return u_n_op(f, self.sign)
        if self.kind == "s":
            return weyl_act(self.index, f)
        raise PreconditionError(f"unknown operator kind {self.kind!r}")

    def inverse(self):
        if self.kind == "s":
            return self
        return OperatorTag(self.kind, self.index, -self.sign)

    def __str__(self):
        if self.kind == "U":
            return "U" if self.sign == 1 else "U^-1"
        base = f"{self.kind}{self.index}"
        return base if self.sign == 1 or self.kind == "s" else base + "^-1"

    @classmethod
    def parse(cls, text):
        text = text.strip()
        sign = 1
        if text.endswith("^-1"):
            text, sign = text[:-3], -1
        kind, idx = text[0], text[1:]
        return cls(kind, int(idx) if idx else 0, sign)


class OperatorWord(tuple):
    """Product of generators written left to right; the rightmost acts first."""

    @classmethod
    def parse(cls, text):
        return cls(OperatorTag.parse(tok) for tok in text.split())

    def apply(self, f):
        for tag in reversed(self):
            f = tag.apply(f)
        return f

    def __mul__(self, other):
        return OperatorWord(tuple(self) + tuple(other))

    def inverse(self):
        return OperatorWord(tag.inverse() for tag in reversed(self))

    def __str__(self):
        return " ".join(str(t) for t in self) or "1"


# ---------------------------------------------------------------------------
# Evaluation maps
# ---------------------------------------------------------------------------


def chi_eval(lam, f, dual=False):
    """Substitute ``x_i -> y(lam)_i^(-1)`` (``y*`` when ``dual``) and return the scalar."""
    lam = as_weight(lam)
    if lam.n != f.n:
        raise PreconditionError("rank mismatch")
    ys = y_eigenvalue(lam, dual=dual)
    return substitute(f, [y.inverse() for y in ys])


def substitute(f, monomials):
    """Substitute signed parameter monomials for ``x_1..x_n``."""
    n = f.n
    exps = [pad(m.exp) for m in monomials]
    signs = [m.sign for m in monomials]

    def fn(e):
        out = list(e[:X_OFFSET]) + [0] * (NVARS - X_OFFSET)
        sgn = 1
        for j in range(n):
            k = e[X_OFFSET + j]
            if k:
                for idx in range(NPARAM):
                    out[idx] += k * exps[j][idx]
                if signs[j] < 0 and k % 2:
                    sgn = -sgn
        return tuple(out), sgn
    return ParamScalar(f.num.map_exponents(fn), f.den)


# ---------------------------------------------------------------------------
# Random test inputs
# ---------------------------------------------------------------------------


def random_xlaurent(n, rng=None, terms=3, degree=2, param_degree=1):
    """Random Laurent polynomial with small integer coefficients and monomial parameter factors."""
    rng = rng or random.Random(0)
    acc = {}
    for _ in range(terms):
        x = tuple(rng.randint(-degree, degree) for _ in range(n))
        p = tuple(rng.randint(-param_degree, param_degree) for _ in range(NPARAM))
        c = rng.choice([-2, -1, 1, 2, 3])
        e = list(pad(p))
        e[X_OFFSET:X_OFFSET + n] = x
        acc[tuple(e)] = acc.get(tuple(e), 0) + c
    return XLaurent(n, Laurent.from_terms(acc))



# ---------------------------------------------------------------------------
# Defining relations of the operator realization
# ---------------------------------------------------------------------------


def _apply_word(word, f):
    """Apply ``T`` letters ``(i, sign)`` right to left, so ``word[0]`` acts last."""
    for i, s in reversed(word):
        f = noumi_T(i, s, f)
    return f


def _braid(i, j, length, f):
    left = [(i, 1) if k % 2 == 0 else (j, 1) for k in range(length)]
    right = [(j, 1) if k % 2 == 0 else (i, 1) for k in range(length)]
    return _apply_word(left, f) == _apply_word(right, f)


def _hecke_constant(n, i):
    if i == 0:
        return gen_half("t0")
    if i == n:
        return gen_half("tn")
    return gen_half("t")


def hecke_relation_checks(f, with_y=True):
    """Check every defining relation of the operator realization on ``f``.

    Returns an ordered mapping ``name -> bool``. The families are the
    quadratic relations, inverses, braid and commutation relations among the
    ``T_i``, the relations tying ``T_i`` to multiplication operators, and
    (optionally) pairwise commutativity of the ``Y_i``.
    """
    n = f.n
    out = {}
    for i in range(n + 1):
        h = _hecke_constant(n, i)
        g = noumi_T(i, 1, f)
        # (T - h)(T + h^-1) = 0
        out[f"quadratic T{i}"] = noumi_T(i, 1, g) + g.scale(h.inverse()) - g.scale(h) - f == 0
        out[f"inverse T{i}"] = noumi_T(i, 1, noumi_T(i, -1, f)) == f
    out["braid T0 T1"] = _braid(0, 1, 4, f)
    out[f"braid T{n - 1} T{n}"] = _braid(n - 1, n, 4, f)
    for i in range(1, n - 1):
        out[f"braid T{i} T{i + 1}"] = _braid(i, i + 1, 3, f)
    for i in range(n + 1):
        for j in range(i + 2, n + 1):
            out[f"commute T{i} T{j}"] = _braid(i, j, 2, f)
    for i in range(1, n):
        out[f"T{i} X{i} T{i} = X{i + 1}"] = (
            noumi_T(i, 1, x_op(i, 1, noumi_T(i, 1, f))) == x_op(i + 1, 1, f))
        for j in range(1, n + 1):
            if j not in (i, i + 1):
                out[f"commute T{i} X{j}"] = (
                    noumi_T(i, 1, x_op(j, 1, f)) == x_op(j, 1, noumi_T(i, 1, f)))
    un, u0, qh = gen_half("un"), gen_half("u0"), gen_half("q")
    # X_n^-1 T_n^-1 - T_n X_n = (u_n^1/2 - u_n^-1/2)
    lhs = x_op(n, -1, noumi_T(n, -1, f))
    rhs = noumi_T(n, 1, x_op(n, 1, f)) + f.scale(un) - f.scale(un.inverse())
    out[f"T{n} X{n}"] = lhs == rhs
    # q^-1/2 T_0^-1 X_1 - q^1/2 X_1^-1 T_0 = (u_0^1/2 - u_0^-1/2)
    lhs = noumi_T(0, -1, x_op(1, 1, f)).scale(qh.inverse())
    rhs = x_op(1, -1, noumi_T(0, 1, f)).scale(qh) + f.scale(u0) - f.scale(u0.inverse())
    out["T0 X1"] = lhs == rhs
    for j in range(2, n + 1):
        out[f"commute T0 X{j}"] = noumi_T(0, 1, x_op(j, 1, f)) == x_op(j, 1, noumi_T(0, 1, f))
    for j in range(1, n):
        out[f"commute T{n} X{j}"] = noumi_T(n, 1, x_op(j, 1, f)) == x_op(j, 1, noumi_T(n, 1, f))
    if with_y:
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                out[f"commute Y{i} Y{j}"] = y_op(i, y_op(j, f)) == y_op(j, y_op(i, f))
    return out
