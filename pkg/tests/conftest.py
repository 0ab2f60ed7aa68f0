import cmath
import random

import pytest

from dahapoly.params import NPARAM, W_INDEX, Laurent, ParamScalar, SpecValue


def point_on(spec, rng):
    """Random generator values on the zero set of ``spec`` and the primitive root used by specialized values."""
    v = spec.v
    free = [j for j, a in enumerate(v) if abs(a) == 1]
    if not free:
        raise ValueError("no unit coordinate to solve for")
    j = free[0]
    vals = [cmath.exp(complex(rng.uniform(-0.3, 0.3), rng.uniform(-3, 3))) for _ in range(NPARAM)]
    vals[j] = 1
    rest = 1
    for k, a in enumerate(v):
        rest *= vals[k] ** a
    omega = cmath.exp(2j * cmath.pi * spec.power / spec.order)
    vals[j] = (omega / rest) ** v[j]
    # specialized values are written in the primitive root exp(2 pi i / order)
    return vals, cmath.exp(2j * cmath.pi / spec.order)


def eval_laurent(p, vals, w=None):
    total = 0
    for e, c in p.terms():
        term = int(c)
        for k in range(NPARAM):
            if e[k]:
                term *= vals[k] ** int(e[k])
        if e[W_INDEX]:
            term *= w ** int(e[W_INDEX])
        total += term
    return total


def eval_value(x, vals, w=None):
    if isinstance(x, Laurent):
        return eval_laurent(x, vals, w)
    if isinstance(x, (ParamScalar, SpecValue)):
        return eval_laurent(x.num, vals, w) / eval_laurent(x.den, vals, w)
    raise TypeError(type(x))


def close(a, b, tol=1e-8):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


@pytest.fixture
def rng():
    return random.Random(12345)


ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
