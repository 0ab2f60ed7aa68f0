"""Parameter ring, its fraction field, and specialization at a root-of-unity binomial.

The six half-power generators are ordered ``q^(1/2), t^(1/2), t_n^(1/2),
t_0^(1/2), u_n^(1/2), u_0^(1/2)``; exponent vectors of parameter monomials
use that order.  Every polynomial in the package lives in one flint
context whose variables are the six generators, the variables ``x_1..x_R``
(``R = MAX_RANK``) and an auxiliary symbol ``w`` standing for a primitive
root of unity after specialization.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

import flint
from flint.utils.flint_exceptions import DomainError

from .errors import InvariantError, ParameterError, PoleError, UndefinedOrderError

PARAM_NAMES = ("q", "t", "tn", "t0", "un", "u0")
NPARAM = len(PARAM_NAMES)
MAX_RANK = 6
X_OFFSET = NPARAM
W_INDEX = NPARAM + MAX_RANK
NVARS = W_INDEX + 1

_VAR_NAMES = (
    tuple(f"{p}_h" for p in PARAM_NAMES)
    + tuple(f"x{i + 1}" for i in range(MAX_RANK))
    + ("w",)
)
CTX = flint.fmpz_mpoly_ctx.get(_VAR_NAMES, "degrevlex")
ZERO_SHIFT = (0,) * NVARS
_ONE_POLY = CTX.from_dict({ZERO_SHIFT: 1})


def pad(exp):
    """Extend a short exponent vector with zeros to the full variable count."""
    exp = tuple(exp)
    if len(exp) == NVARS:
        return exp
    return exp + (0,) * (NVARS - len(exp))


def _mono_poly(exp):
    return CTX.from_dict({exp: 1})


# ---------------------------------------------------------------------------
# Laurent polynomials over the integers
# ---------------------------------------------------------------------------


class Laurent:
    """Integer Laurent polynomial ``x^shift * poly`` with ``poly`` free of monomial content."""

    __slots__ = ("poly", "shift")

    def __init__(self, poly, shift=ZERO_SHIFT):
        self.poly = poly
        self.shift = shift

    @classmethod
    def make(cls, poly, shift=ZERO_SHIFT):
        if poly.is_zero():
            return cls(poly, ZERO_SHIFT)
        if poly.is_constant():
            return cls(poly, shift)
        content = poly.term_content().monoms()[0]
        if any(content):
            poly = poly / _mono_poly(content)
            shift = tuple(s + c for s, c in zip(shift, content))
        return cls(poly, shift)

    @classmethod
    def from_terms(cls, terms):
        terms = {pad(e): c for e, c in terms.items() if c}
        if not terms:
            return ZERO
        low = tuple(min(col) for col in zip(*terms))
        poly = CTX.from_dict({tuple(a - b for a, b in zip(e, low)): c for e, c in terms.items()})
        return cls.make(poly, low)

    @classmethod
    def monomial(cls, exp, coeff=1):
        if not coeff:
            return ZERO
        return cls(CTX.from_dict({ZERO_SHIFT: coeff}), pad(exp))

    @classmethod
    def constant(cls, c):
        return cls(CTX.from_dict({ZERO_SHIFT: c}) if c else CTX.from_dict({}), ZERO_SHIFT)

    def is_zero(self):
        return self.poly.is_zero()

    def is_constant(self):
        return self.poly.is_constant() and not any(self.shift)

    def nterms(self):
        return len(self.poly)

    def terms(self):
        """Yield ``(exponent, integer coefficient)`` pairs with full-length exponents."""
        sh = self.shift
        if any(sh):
            for e, c in self.poly.to_dict().items():
                yield tuple(a + b for a, b in zip(e, sh)), int(c)
        else:
            for e, c in self.poly.to_dict().items():
                yield e, int(c)

    def to_dict(self):
        return dict(self.terms())

    def _aligned(self, other):
        low = tuple(min(a, b) for a, b in zip(self.shift, other.shift))
        p1, p2 = self.poly, other.poly
        d1 = tuple(a - b for a, b in zip(self.shift, low))
        d2 = tuple(a - b for a, b in zip(other.shift, low))
        if any(d1):
            p1 = p1 * _mono_poly(d1)
        if any(d2):
            p2 = p2 * _mono_poly(d2)
        return p1, p2, low

    def __add__(self, other):
        if isinstance(other, int):
            other = Laurent.constant(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.shift == other.shift:
            return Laurent.make(self.poly + other.poly, self.shift)
        p1, p2, low = self._aligned(other)
        return Laurent.make(p1 + p2, low)

    __radd__ = __add__

    def __neg__(self):
        return Laurent(-self.poly, self.shift)

    def __sub__(self, other):
        if isinstance(other, int):
            other = Laurent.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return ZERO
            return Laurent(self.poly * other, self.shift)
        if self.is_zero() or other.is_zero():
            return ZERO
        shift = tuple(a + b for a, b in zip(self.shift, other.shift))
        return Laurent(self.poly * other.poly, shift)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power of a Laurent polynomial")
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shifted(self, exp):
        """Multiply by the monomial ``x^exp``."""
        if self.is_zero():
            return self
        return Laurent(self.poly, tuple(a + b for a, b in zip(self.shift, pad(exp))))

    def exact_div(self, other):
        """Exact quotient; raises ``InvariantError`` when the division leaves a remainder."""
        try:
            quo = self.poly / other.poly
        except DomainError as exc:
            raise InvariantError("inexact division of Laurent polynomials") from exc
        shift = tuple(a - b for a, b in zip(self.shift, other.shift))
        return Laurent.make(quo, shift)

    def divides(self, other):
        """True when ``self`` divides ``other`` in the Laurent ring."""
        try:
            other.poly / self.poly
        except DomainError:
            return False
        return True

    def permuted(self, perm):
        """Rename variables: variable ``i`` becomes variable ``perm[i]``."""
        gens = CTX.gens()
        subs = [gens[perm[i]] for i in range(NVARS)]
        shift = [0] * NVARS
        for i in range(NVARS):
            shift[perm[i]] = self.shift[i]
        return Laurent(self.poly.compose(*subs), tuple(shift))

    def map_exponents(self, fn):
        """Apply an affine exponent map term by term; ``fn`` returns ``(exponent, sign)``."""
        acc = defaultdict(int)
        for e, c in self.terms():
            e2, sgn = fn(e)
            acc[e2] += sgn * c
        return Laurent.from_terms(acc)

    def leading_sign(self):
        return 1 if self.poly.leading_coefficient() > 0 else -1

    def __eq__(self, other):
        if isinstance(other, int):
            other = Laurent.constant(other)
        if not isinstance(other, Laurent):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        return self.shift == other.shift and self.poly == other.poly

    __hash__ = None

    def __repr__(self):
        return f"Laurent({self.to_dict()!r})"


ZERO = Laurent(CTX.from_dict({}), ZERO_SHIFT)
ONE = Laurent(_ONE_POLY, ZERO_SHIFT)


# ---------------------------------------------------------------------------
# Cyclotomic numbers
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def cyclotomic_poly(order):
    return flint.fmpq_poly(flint.fmpz_poly.cyclotomic(order).coeffs())


def euler_phi(order):
    return cyclotomic_poly(order).degree()


class CycNumber:
    """Element of the cyclotomic field Q(zeta_N), stored reduced modulo Phi_N."""

    __slots__ = ("rep", "N")

    def __init__(self, rep, N=1):
        if not isinstance(rep, flint.fmpq_poly):
            rep = flint.fmpq_poly([flint.fmpq(Fraction(c).numerator, Fraction(c).denominator) for c in rep])
        self.rep = rep % cyclotomic_poly(N)
        self.N = N

    @classmethod
    def rational(cls, value):
        value = Fraction(value)
        return cls(flint.fmpq_poly([flint.fmpq(value.numerator, value.denominator)]), 1)

    @classmethod
    def root(cls, power, order):
        """The root of unity ``exp(2 pi i power / order)``."""
        coeffs = [0] * (power % order) + [1]
        return cls(flint.fmpq_poly(coeffs), order)

    def lift(self, M):
        if M == self.N:
            return self
        if M % self.N:
            raise ValueError(f"cannot lift Q(zeta_{self.N}) into Q(zeta_{M})")
        step = M // self.N
        coeffs = self.rep.coeffs()
        spread = [flint.fmpq(0)] * (step * (len(coeffs) - 1) + 1) if coeffs else []
        for k, c in enumerate(coeffs):
            spread[k * step] = c
        return CycNumber(flint.fmpq_poly(spread), M)

    def _common(self, other):
        if not isinstance(other, CycNumber):
            other = CycNumber.rational(other)
        M = math.lcm(self.N, other.N)
        return self.lift(M), other.lift(M), M

    def __add__(self, other):
        a, b, M = self._common(other)
        return CycNumber(a.rep + b.rep, M)

    __radd__ = __add__

    def __sub__(self, other):
        a, b, M = self._common(other)
        return CycNumber(a.rep - b.rep, M)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return CycNumber(-self.rep, self.N)

    def __mul__(self, other):
        a, b, M = self._common(other)
        return CycNumber(a.rep * b.rep, M)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        g, s, _ = self.rep.xgcd(cyclotomic_poly(self.N))
        return CycNumber(s / g, self.N)

    def __truediv__(self, other):
        if not isinstance(other, CycNumber):
            other = CycNumber.rational(other)
        return self * other.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = CycNumber.rational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_zero(self):
        return self.rep.is_zero()

    def is_rational(self):
        return self.rep.degree() <= 0

    def to_fraction(self):
        if not self.is_rational():
            raise ValueError("not a rational number")
        c = self.rep.coeffs()
        if not c:
            return Fraction(0)
        return Fraction(int(c[0].p), int(c[0].q))

    def coefficients(self):
        """Rational coordinates on the power basis, padded to the field degree."""
        c = [Fraction(int(x.p), int(x.q)) for x in self.rep.coeffs()]
        return c + [Fraction(0)] * (euler_phi(self.N) - len(c))

    def to_complex(self):
        return sum(complex(float(c)) * complex(math.cos(2 * math.pi * k / self.N), math.sin(2 * math.pi * k / self.N))
                   for k, c in enumerate(self.coefficients()))

    def to_json(self):
        return {"coeffs": [str(c) for c in self.coefficients()], "N": self.N}

    def __eq__(self, other):
        if not isinstance(other, (CycNumber, int, Fraction)):
            return NotImplemented
        a, b, _ = self._common(other)
        return a.rep == b.rep

    __hash__ = None

    def __repr__(self):
        if self.is_rational():
            return str(self.to_fraction())
        return f"CycNumber({[str(c) for c in self.coefficients()]}, N={self.N})"


# ---------------------------------------------------------------------------
# Signed parameter monomials and the fraction field
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Monomial:
    """Signed parameter monomial ``sign * x^exp`` in the half-power generators."""

    sign: int
    exp: tuple

    def __mul__(self, other):
        return Monomial(self.sign * other.sign, tuple(a + b for a, b in zip(self.exp, other.exp)))

    def __truediv__(self, other):
        return self * other.inverse()

    def inverse(self):
        return Monomial(self.sign, tuple(-a for a in self.exp))

    def __pow__(self, k):
        return Monomial(self.sign ** abs(k), tuple(k * a for a in self.exp))

    def dual(self):
        e = list(self.exp)
        e[3], e[4] = e[4], e[3]
        return Monomial(self.sign, tuple(e))

    def scalar(self):
        return ParamScalar(Laurent.monomial(self.exp, self.sign))

    def is_monic(self):
        return self.sign == 1


def half_powers(q=0, t=0, tn=0, t0=0, un=0, u0=0, sign=1):
    """Monomial with the given exponents of the half-power generators."""
    return Monomial(sign, (q, t, tn, t0, un, u0))


MONO_ONE = half_powers()
_GEN_INDEX = {name: i for i, name in enumerate(PARAM_NAMES)}

# Derived parameter monomials.
DERIVED = {
    "a": half_powers(tn=1, un=1),
    "b": half_powers(tn=1, un=-1, sign=-1),
    "c": half_powers(q=1, t0=1, u0=1),
    "d": half_powers(q=1, t0=1, u0=-1, sign=-1),
    "a_prime": half_powers(tn=-1, t0=-1),
    "b_prime": half_powers(tn=-1, t0=1, sign=-1),
    "c_prime": half_powers(q=-1, un=-1, u0=-1),
    "d_prime": half_powers(q=-1, un=-1, u0=1, sign=-1),
    "a_star": half_powers(tn=1, t0=1),
    "b_star": half_powers(tn=1, t0=-1, sign=-1),
    "c_star": half_powers(q=1, un=1, u0=1),
    "d_star": half_powers(q=1, un=1, u0=-1, sign=-1),
}


def gen_half(name):
    """The half-power generator ``name^(1/2)`` as a monomial."""
    e = [0] * NPARAM
    e[_GEN_INDEX[name]] = 1
    return Monomial(1, tuple(e))


def gen_full(name):
    """The full parameter ``name`` (square of its half-power generator)."""
    return gen_half(name) ** 2


class ParamScalar:
    """Element of the parameter fraction field, kept as a reduced fraction of Laurent polynomials.

    The denominator is a polynomial with positive leading coefficient and no
    monomial factor, so equal elements have identical representations.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, reduced=False):
        if isinstance(num, (int, Fraction)):
            num = Fraction(num)
            num, den0 = Laurent.constant(num.numerator), Laurent.constant(num.denominator)
            den = den0 if den is None else den0 * den
        elif isinstance(num, Monomial):
            num = Laurent.monomial(num.exp, num.sign)
        if den is None:
            den = ONE
        if reduced:
            self.num, self.den = num, den
            return
        if den.is_zero():
            raise ZeroDivisionError("zero denominator in parameter field")
        if num.is_zero():
            self.num, self.den = ZERO, ONE
            return
        p, d = num.poly, den.poly
        if not d.is_constant() or not p.is_constant():
            g = p.gcd(d)
            if not g.is_one():
                p, d = p / g, d / g
        else:
            g = math.gcd(int(p.leading_coefficient()), int(d.leading_coefficient()))
            if g != 1:
                p, d = p / g, d / g
        if d.leading_coefficient() < 0:
            p, d = -p, -d
        shift = tuple(a - b for a, b in zip(num.shift, den.shift))
        self.num = Laurent.make(p, shift)
        self.den = Laurent(d, ZERO_SHIFT)

    @classmethod
    def coerce(cls, x):
        if isinstance(x, ParamScalar):
            return x
        return cls(x)

    def is_zero(self):
        return self.num.is_zero()

    def __add__(self, other):
        other = ParamScalar.coerce(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.den == other.den:
            return ParamScalar(self.num + other.num, self.den)
        return ParamScalar(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return ParamScalar(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        return self + (-ParamScalar.coerce(other))

    def __rsub__(self, other):
        return ParamScalar.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, Monomial):
            return ParamScalar(self.num.shifted(other.exp) * other.sign, self.den, reduced=True)
        other = ParamScalar.coerce(other)
        return ParamScalar(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in parameter field")
        return ParamScalar(self.den, self.num)

    def __truediv__(self, other):
        return self * ParamScalar.coerce(other).inverse()

    def __rtruediv__(self, other):
        return ParamScalar.coerce(other) * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = ParamScalar(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def dual(self):
        """Apply the parameter swap ``t_0^(1/2) <-> u_n^(1/2)``."""
        return ParamScalar(swap_dual(self.num), swap_dual(self.den))

    def is_monomial(self):
        """True for a signed Laurent monomial (a unit of the parameter ring)."""
        return self.num.nterms() == 1 and self.den.is_constant() and abs(int(self.num.poly.leading_coefficient())) == 1

    def as_monomial(self):
        if not self.is_monomial():
            raise ValueError("not a Laurent monomial")
        (e, c), = self.num.terms()
        return Monomial(c // int(self.den.poly.leading_coefficient()), e[:NPARAM])

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Monomial)):
            other = ParamScalar(other)
        if not isinstance(other, ParamScalar):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    __hash__ = None

    def to_json(self):
        def side(p):
            return [[list(e[:NPARAM]), CycNumber.rational(c).to_json()] for e, c in sorted(p.terms())]
        return {"num": side(self.num), "den": side(self.den)}

    def __repr__(self):
        return f"ParamScalar({format_laurent(self.num)} / {format_laurent(self.den)})"


def swap_dual(p):
    perm = list(range(NVARS))
    perm[3], perm[4] = 4, 3
    return p.permuted(perm)


def param(name):
    """Named parameter (a generator, its square, or a derived parameter) as a scalar."""
    if name in DERIVED:
        return DERIVED[name].scalar()
    if name.endswith("_half"):
        return gen_half(name[:-5]).scalar()
    return gen_full(name).scalar()


def _half_power(name, k):
    # exponent k counts half powers of the named parameter
    if k == 2:
        return name
    if k % 2 == 0:
        return f"{name}^{k // 2}"
    return f"{name}^({k}/2)"


def format_laurent(p, var_names=None):
    if p.is_zero():
        return "0"
    names = var_names or (tuple(f"x{i + 1}" for i in range(MAX_RANK)) + ("w",))
    skip = 0 if var_names else len(PARAM_NAMES)

    def factor(i, k):
        if i < skip:
            return _half_power(PARAM_NAMES[i], k)
        return names[i - skip] if k == 1 else f"{names[i - skip]}^{k}"

    parts = []
    for e, c in sorted(p.terms(), reverse=True):
        factors = [factor(i, k) for i, k in enumerate(e) if k]
        body = "*".join(factors)
        if not body:
            parts.append(str(c))
        elif c == 1:
            parts.append(body)
        elif c == -1:
            parts.append("-" + body)
        else:
            parts.append(f"{c}*{body}")
    return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# Specialization binomials
# ---------------------------------------------------------------------------

FAMILY_KINDS = ("tq", "aa", "ab", "ac", "ad")


@dataclass(frozen=True)
class Family:
    """Catalog family tag; ``k`` and ``r`` follow the exponents ``t^(k+1) q^(r-1)``."""

    kind: str
    r: int
    k: int | None = None
    i: int | None = None
    sign: int = 1
    n: int | None = None

    def validate(self):
        if self.kind not in FAMILY_KINDS:
            raise ParameterError(f"unknown family {self.kind!r}")
        if self.r - 1 < 1:
            raise ParameterError("r - 1 must be at least 1")
        if self.kind in ("tq", "aa"):
            if self.k is None or self.k + 1 < 0:
                raise ParameterError("k + 1 must be nonnegative")
            if self.n is not None:
                bound = self.n if self.kind == "tq" else 2 * self.n - 2
                if self.k + 1 > bound:
                    raise ParameterError(f"k + 1 = {self.k + 1} exceeds {bound}")
        else:
            if self.n is None or self.i is None:
                raise ParameterError(f"family {self.kind} needs n and i")
            if not 1 <= self.i <= self.n:
                raise ParameterError("i must satisfy 1 <= i <= n")
            if self.sign not in (1, -1):
                raise ParameterError("sign must be +1 or -1")

    def target(self):
        """Return ``(monomial, targets)``: the family vanishes where ``monomial = target``.

        Targets are angles in [0, 1) of roots of unity as Fractions.
        """
        self.validate()
        t, q = gen_full("t"), gen_full("q")
        if self.kind == "tq":
            m = math.gcd(self.k + 1, self.r - 1)
            mono = half_powers(q=2 * (self.r - 1) // m, t=2 * (self.k + 1) // m)
            angles = [Fraction(j, m) for j in range(m) if math.gcd(j, m) == 1]
            return mono, angles
        if self.kind == "aa":
            mono = t ** (self.k + 1) * q ** (self.r - 1) * DERIVED["a_star"] ** 2
        elif self.kind == "ab":
            n_i = self.n - self.i
            mono = t ** n_i * q ** (self.r - 1) * DERIVED["a_star"] * DERIVED["b_star"] ** self.sign
        else:
            n_i = self.n - self.i
            theta = 1 if self.sign == 1 else 0
            other = DERIVED["c_star" if self.kind == "ac" else "d_star"]
            mono = t ** n_i * q ** (self.r - 1 - theta) * DERIVED["a_star"] * other ** self.sign
        angle = Fraction(0) if mono.sign == 1 else Fraction(1, 2)
        return Monomial(1, mono.exp), [angle]

    def polynomial(self):
        """The family's Laurent polynomial over the rationals (the product over its roots)."""
        mono, angles = self.target()
        z = Laurent.monomial(mono.exp)
        if self.kind == "tq":
            m = math.gcd(self.k + 1, self.r - 1)
            return _cyclotomic_in(z, m)
        return z - 1 if angles[0] == 0 else z + 1

    def label(self):
        if self.kind in ("tq", "aa"):
            return f"{self.kind}:k={self.k},r={self.r}"
        return f"{self.kind}:i={self.i},r={self.r},sign={'+' if self.sign == 1 else '-'}"


def _cyclotomic_in(z, order):
    result = ZERO
    for k, c in enumerate(flint.fmpz_poly.cyclotomic(order).coeffs()):
        if c:
            result = result + (z ** k) * int(c)
    return result


def bezout_vector(v):
    """Integer vector ``f`` with ``f . v = gcd(v)``."""
    g, coeffs = 0, [0] * len(v)
    for idx, a in enumerate(v):
        if a == 0:
            continue
        if g == 0:
            g, coeffs = abs(a), [0] * len(v)
            coeffs[idx] = 1 if a > 0 else -1
            continue
        # extended gcd of g and a
        old_r, r = g, a
        old_s, s = 1, 0
        old_t, tt = 0, 1
        while r:
            quo = old_r // r
            old_r, r = r, old_r - quo * r
            old_s, s = s, old_s - quo * s
            old_t, tt = tt, old_t - quo * tt
        if old_r < 0:
            old_r, old_s, old_t = -old_r, -old_s, -old_t
        coeffs = [old_s * x for x in coeffs]
        coeffs[idx] += old_t
        g = old_r
    return g, tuple(coeffs)


@dataclass(frozen=True)
class SpecPoly:
    """Irreducible factor ``x^v - omega`` with ``omega = exp(2 pi i power / order)``."""

    v: tuple
    order: int
    power: int
    family: Family | None = None
    branch: int = 0
    bezout: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if not self.bezout:
            g, f = bezout_vector(self.v)
            if g != 1:
                raise ParameterError(f"exponent vector {self.v} is not primitive")
            object.__setattr__(self, "bezout", f)

    @property
    def omega(self):
        return CycNumber.root(self.power, self.order)

    @property
    def angle(self):
        return Fraction(self.power, self.order)

    @cached_property
    def minimal(self):
        """``Phi_order(x^v)``: the rational irreducible polynomial this factor divides."""
        return _cyclotomic_in(Laurent.monomial(self.v), self.order)

    @cached_property
    def w_modulus(self):
        """``Phi_order(w)`` as a polynomial in the auxiliary variable."""
        e = [0] * NVARS
        terms = {}
        for k, c in enumerate(flint.fmpz_poly.cyclotomic(self.order).coeffs()):
            if c:
                e[W_INDEX] = k
                terms[tuple(e)] = int(c)
        return CTX.from_dict(terms)

    def f(self, exp):
        return sum(a * b for a, b in zip(self.bezout, exp))

    def lattice_multiple(self, exp):
        """Return ``m`` with ``exp = m * v`` on the parameter coordinates, or None."""
        exp = tuple(exp[:NPARAM])
        m = self.f(exp)
        if tuple(m * a for a in self.v) == exp:
            return m
        return None

    def to_json(self):
        fam = self.family
        out = {"v": list(self.v), "omega_index": self.branch, "omega": self.omega.to_json()}
        if fam is not None:
            out.update({"family": fam.kind, "k": fam.k, "r": fam.r, "i": fam.i, "sign": fam.sign})
        return out

    def __repr__(self):
        fam = self.family.label() if self.family else "custom"
        return f"SpecPoly({fam}, v={self.v}, omega=e^(2pi i {self.power}/{self.order}))"


def spec_factors(family):
    """All complex-irreducible factors of the family polynomial, sorted by the argument of omega."""
    mono, angles = family.target()
    u = mono.exp
    g = math.gcd(*u)
    if g == 0:
        raise ParameterError("family polynomial is constant")
    v = tuple(a // g for a in u)
    roots = sorted({(theta + k) / g for theta in angles for k in range(g)})
    return [SpecPoly(v, ang.denominator, ang.numerator, family, idx) for idx, ang in enumerate(roots)]


def spec_from_string(text, n=None):
    """Parse ``kind:key=value,...`` with an optional ``branch`` key."""
    kind, _, rest = text.partition(":")
    kv = {}
    for item in filter(None, rest.split(",")):
        key, _, val = item.partition("=")
        kv[key.strip()] = val.strip()
    branch = int(kv.pop("branch", 0))
    sign = kv.pop("sign", "+")
    sign = -1 if sign in ("-", "-1") else 1
    try:
        fam = Family(kind=kind.strip(), r=int(kv.pop("r")),
                     k=int(kv["k"]) if "k" in kv else None,
                     i=int(kv["i"]) if "i" in kv else None,
                     sign=sign, n=int(kv.get("n", n)) if kv.get("n", n) is not None else None)
    except KeyError as exc:
        raise ParameterError(f"missing family parameter {exc}") from None
    factors = spec_factors(fam)
    if not 0 <= branch < len(factors):
        raise ParameterError(f"branch {branch} out of range 0..{len(factors) - 1}")
    return factors[branch]


# ---------------------------------------------------------------------------
# Orders of vanishing
# ---------------------------------------------------------------------------


def _as_laurent(a):
    if isinstance(a, Laurent):
        return a
    if isinstance(a, Monomial):
        return Laurent.monomial(a.exp, a.sign)
    if isinstance(a, int):
        return Laurent.constant(a)
    raise TypeError(f"expected a Laurent polynomial, got {type(a).__name__}")


def zeta(a, s):
    """Order of vanishing of ``a`` along ``s``, by coset decomposition over ``Z v``."""
    a = _as_laurent(a)
    if a.is_zero():
        raise UndefinedOrderError("order of vanishing of zero")
    v = pad(s.v)
    cosets = defaultdict(dict)
    for e, c in a.terms():
        k = s.f(e[:NPARAM])
        key = tuple(x - k * y for x, y in zip(e, v))
        cosets[key][k] = c
    phi = flint.fmpz_poly.cyclotomic(s.order)
    best = None
    for coeffs in cosets.values():
        low = min(coeffs)
        dense = [0] * (max(coeffs) - low + 1)
        for k, c in coeffs.items():
            dense[k - low] = c
        g = flint.fmpz_poly(dense)
        m = 0
        while True:
            quo, rem = divmod(g, phi)
            if not rem.is_zero():
                break
            g, m = quo, m + 1
        best = m if best is None else min(best, m)
        if best == 0:
            break
    return best


def zeta_by_division(a, s):
    """Independent route: count exact divisions by ``Phi_order(x^v)``."""
    a = _as_laurent(a)
    if a.is_zero():
        raise UndefinedOrderError("order of vanishing of zero")
    p, m = a.poly, 0
    divisor = s.minimal.poly
    while True:
        try:
            p = p / divisor
        except DomainError:
            return m
        m += 1


def zeta_scalar(c, s):
    if isinstance(c, SpecValue):
        raise TypeError("specialized values have no order of vanishing")
    c = ParamScalar.coerce(c)
    if c.is_zero():
        raise UndefinedOrderError("order of vanishing of zero")
    return zeta(c.num, s) - zeta(c.den, s)


# ---------------------------------------------------------------------------
# Specialized values
# ---------------------------------------------------------------------------


class SpecValue:
    """Image of a fraction in the specialized field.

    Numerator and denominator are Laurent polynomials in which the auxiliary
    variable ``w`` stands for ``exp(2 pi i / order)``; they are kept reduced
    modulo ``Phi_order(w)``.  Every parameter monomial ``x^u`` satisfies
    ``f(u) = 0`` for the Bezout functional of the specialization.
    """

    __slots__ = ("num", "den", "spec")

    def __init__(self, num, den, spec):
        self.spec = spec
        self.num = _reduce_w(num, spec)
        self.den = _reduce_w(den, spec)
        if self.den.is_zero():
            raise ZeroDivisionError("zero denominator after specialization")

    def _check(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return SpecValue(Laurent.constant(other.numerator), Laurent.constant(other.denominator), self.spec)
        if other.spec.v != self.spec.v or other.spec.angle != self.spec.angle:
            raise ValueError("specialized values from different specializations")
        return other

    def __add__(self, other):
        other = self._check(other)
        return SpecValue(self.num * other.den + other.num * self.den, self.den * other.den, self.spec)

    __radd__ = __add__

    def __neg__(self):
        return SpecValue(-self.num, self.den, self.spec)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __mul__(self, other):
        other = self._check(other)
        return SpecValue(self.num * other.num, self.den * other.den, self.spec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by a value vanishing at the specialization")
        return SpecValue(self.num * other.den, self.den * other.num, self.spec)

    def is_zero(self):
        return self.num.is_zero()

    def __eq__(self, other):
        if not isinstance(other, (SpecValue, int, Fraction)):
            return NotImplemented
        other = self._check(other)
        return _reduce_w(self.num * other.den - other.num * self.den, self.spec).is_zero()

    __hash__ = None

    def coefficient_map(self, which="num"):
        """Group a side by its non-``w`` exponent; values are cyclotomic numbers."""
        p = self.num if which == "num" else self.den
        out = defaultdict(lambda: CycNumber.rational(0))
        order = self.spec.order
        for e, c in p.terms():
            key = e[:W_INDEX]
            out[key] = out[key] + CycNumber.root(e[W_INDEX], order) * c
        return {k: val for k, val in out.items() if not val.is_zero()}

    def as_constant(self):
        """The value as a cyclotomic number when it is constant, else None."""
        if self.is_zero():
            return CycNumber.rational(0)
        nmap, dmap = self.coefficient_map("num"), self.coefficient_map("den")
        key, dval = next(iter(dmap.items()))
        if key not in nmap:
            return None
        kappa = nmap[key] / dval
        if set(nmap) != set(dmap):
            return None
        for k, val in dmap.items():
            if nmap[k] != kappa * val:
                return None
        return kappa

    def as_rational(self):
        c = self.as_constant()
        if c is None or not c.is_rational():
            return None
        return c.to_fraction()

    def to_json(self):
        def side(which):
            return [[list(k[:NPARAM]) + list(k[NPARAM:W_INDEX]), v.to_json()]
                    for k, v in sorted(self.coefficient_map(which).items())]
        return {"num": side("num"), "den": side("den"), "spec": self.spec.to_json()}

    def __repr__(self):
        return f"SpecValue({format_laurent(self.num)} / {format_laurent(self.den)})"


def _reduce_w(p, s):
    if p.is_zero():
        return p
    poly, shift = p.poly, p.shift
    if shift[W_INDEX]:
        e = [0] * NVARS
        e[W_INDEX] = shift[W_INDEX]
        poly = poly * _mono_poly(tuple(e))
        shift = shift[:W_INDEX] + (0,)
    if poly.degrees()[W_INDEX] >= euler_phi(s.order):
        _, poly = divmod(poly, s.w_modulus)
    return Laurent.make(poly, shift)


def _evaluate(p, s):
    """Send ``x^u`` to ``omega^f(u) x^(u - f(u) v)`` term by term."""
    v = pad(s.v)
    order, power = s.order, s.power
    acc = defaultdict(int)
    for e, c in p.terms():
        k = s.f(e[:NPARAM])
        if k:
            e2 = list(a - k * b for a, b in zip(e, v))
        else:
            e2 = list(e)
        e2[W_INDEX] = (e2[W_INDEX] + power * k) % order
        acc[tuple(e2)] += c
    return Laurent.from_terms(acc)


def specialize_fraction(num, den, s):
    """Specialize ``num / den``; ``den`` may be any nonzero Laurent polynomial."""
    if num.is_zero():
        return SpecValue(ZERO, ONE, s)
    m = zeta(den, s)
    if m:
        divisor = s.minimal.poly
        dp, np_ = den.poly, num.poly
        for _ in range(m):
            dp = dp / divisor
        for done in range(m):
            try:
                np_ = np_ / divisor
            except DomainError:
                raise PoleError(done - m) from None
        num, den = Laurent(np_, num.shift), Laurent(dp, den.shift)
    return SpecValue(_evaluate(num, s), _evaluate(den, s), s)


def specialize(c, s):
    """Image of ``c`` in the specialized field; raises ``PoleError`` when ``zeta(c) < 0``."""
    if isinstance(c, SpecValue):
        return SpecValue(_evaluate(c.num, s), _evaluate(c.den, s), s)
    if isinstance(c, Laurent):
        return specialize_fraction(c, ONE, s)
    c = ParamScalar.coerce(c)
    return specialize_fraction(c.num, c.den, s)


def equal_at(a, b, s):
    """Decide ``a|_{s=0} == b|_{s=0}`` for specializable scalars."""
    diff = ParamScalar.coerce(a) - ParamScalar.coerce(b)
    return diff.is_zero() or zeta_scalar(diff, s) >= 1


def monomials_equal_at(m1, m2, s):
    """Decide equality of two signed monomials at ``s = 0`` from exponents alone."""
    ratio = m1 / m2
    k = s.lattice_multiple(ratio.exp)
    if k is None:
        return False
    # ratio = sign * z^k and z = omega at s = 0
    angle = (Fraction(k * s.power, s.order) + (Fraction(1, 2) if ratio.sign < 0 else 0)) % 1
    return angle == 0
