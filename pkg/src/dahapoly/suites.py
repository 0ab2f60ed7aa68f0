"""Acceptance criteria as runnable checks shared by the CLI and the test suite.

Each ``criterion_N(level, seed, pool)`` returns a :class:`CriterionResult`.
``level="full"`` runs the full sample sizes; ``level="quick"`` trims random sample
counts and the rank-three sweeps so a run finishes in well under a minute.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .errors import PoleError
from .koornwinder import (
    chi0_direct, chi0_recurrence, chi0_star_closed, compute_E, duality_check,
)
from .modified import build_along, build_basis_element, check_generalized_eigen
from .params import (
    ONE, Laurent, Monomial, ParamScalar, pad, spec_from_string, specialize, zeta,
    zeta_by_division,
)
from .polyrep import hecke_relation_checks, random_xlaurent
from .repstructure import (
    WheelSpec, admissible_basis, certify, classify_steps, grid_basis, grid_boundary,
    grid_membership, grid_zeta_certificates, level1_product, level1_weight, partitions_upto,
    quotient_report, tq_closure_check, wheel_check, wheel_zeta,
)
from .weights import box

LEVELS = ("quick", "full")


@dataclass
class CriterionResult:
    number: int
    title: str
    ok: bool
    failures: list = field(default_factory=list)
    checked: int = 0
    seconds: float = 0.0

    def line(self):
        status = "PASS" if self.ok else "FAIL"
        extra = f"; first failure: {self.failures[0]}" if self.failures else ""
        return f"criterion {self.number:2d} {status}  {self.title} ({self.checked} checks{extra})"

    def to_json(self):
        return {"criterion": self.number, "title": self.title, "ok": self.ok,
                "checked": self.checked, "failures": [str(f) for f in self.failures]}


class _Tally:
    def __init__(self):
        self.failures = []
        self.checked = 0

    def check(self, ok, label):
        self.checked += 1
        if not ok:
            self.failures.append(label)


def _serial_map(fn, items):
    return [fn(x) for x in items]


def _result(number, title, tally, start):
    return CriterionResult(number, title, not tally.failures, tally.failures, tally.checked,
                           time.perf_counter() - start)


# ---------------------------------------------------------------------------


def criterion_1(level="full", seed=0, pool=_serial_map):
    start = time.perf_counter()
    tally = _Tally()
    count = 20 if level == "full" else 5
    ranks = (2, 3) if level == "full" else (2,)
    for n in ranks:
        rng = random.Random(seed * 1000 + n)
        polys = [random_xlaurent(n, rng) for _ in range(count)]
        for k, checks in enumerate(pool(hecke_relation_checks, polys)):
            for name, ok in checks.items():
                tally.check(ok, f"n={n} sample {k}: {name}")
    return _result(1, "operator relations on random Laurent polynomials", tally, start)


def _eigen_row(lam):
    p = compute_E(lam)
    return lam, p.is_monic(), p.is_triangular(), p.is_eigenvector()


def criterion_2(level="full", seed=0, pool=_serial_map):
    start = time.perf_counter()
    tally = _Tally()
    weights = list(box(2, 2))
    if level == "full":
        weights += list(box(3, 1))
    for lam, monic, tri, eig in pool(_eigen_row, weights):
        tally.check(monic, f"{list(lam)} not monic")
        tally.check(tri, f"{list(lam)} not triangular")
        tally.check(eig, f"{list(lam)} not an eigenvector")
    return _result(2, "E is monic, triangular and a joint eigenvector", tally, start)


def _evaluation_row(args):
    lam, direct = args
    closed = chi0_star_closed(lam)
    walk = chi0_recurrence(lam)
    return lam, closed == walk, (closed == chi0_direct(lam)) if direct else None


def criterion_3(level="full", seed=0, pool=_serial_map):
    start = time.perf_counter()
    tally = _Tally()
    jobs = []
    for n in ((2, 3) if level == "full" else (2,)):
        for lam in partitions_upto(n, 4):
            # direct evaluation of E is cheap enough up to size 4 at rank two and size 2 at rank three
            jobs.append((lam, sum(lam) <= (4 if n == 2 else 2)))
    for lam, agree, direct in pool(_evaluation_row, jobs):
        tally.check(agree, f"{list(lam)}: closed product differs from recurrence")
        if direct is not None:
            tally.check(direct, f"{list(lam)}: closed product differs from evaluating E")
    return _result(3, "evaluation formula at the trivial weight", tally, start)


def criterion_4(level="full", seed=0, pool=_serial_map):
    start = time.perf_counter()
    tally = _Tally()
    rng = random.Random(seed)
    weights = list(box(2, 2))
    count = 50 if level == "full" else 10
    pairs = [(rng.choice(weights), rng.choice(weights)) for _ in range(count)]
    for (lam, mu), ok in zip(pairs, pool(lambda pr: duality_check(*pr), pairs)):
        tally.check(ok, f"duality fails at {list(lam)}, {list(mu)}")
    return _result(4, "duality of evaluations", tally, start)


# ---------------------------------------------------------------------------

REPRESENTATIVE_SPECS = (
    "tq:k=1,r=2,branch=0",
    "aa:k=0,r=2,branch=0",
    "ab:i=1,r=2,sign=+",
    "ac:i=1,r=2,sign=+",
    "ad:i=1,r=2,sign=+",
)

SPECIALIZATION_SPECS = REPRESENTATIVE_SPECS + (
    "tq:k=0,r=2,branch=0",
    "tq:k=1,r=3,branch=0",
    "tq:k=-1,r=4,branch=1",
    "aa:k=-1,r=3,branch=1",
    "ab:i=2,r=2,sign=-",
    "ac:i=1,r=3,sign=-",
    "ad:i=2,r=2,sign=+",
)


def random_param_laurent(rng, terms=3, degree=2):
    acc = {}
    for _ in range(terms):
        e = pad(tuple(rng.randint(-degree, degree) for _ in range(6)))
        acc[e] = acc.get(e, 0) + rng.choice([-3, -2, -1, 1, 2, 3])
    p = Laurent.from_terms(acc)
    return p if not p.is_zero() else ONE


def _with_factor(rng, s):
    """A random polynomial times a random power of the minimal polynomial of ``s``."""
    p = random_param_laurent(rng)
    for _ in range(rng.randint(0, 2)):
        p = p * s.minimal
    return p


def _specialization_properties(s, rng, samples, tally):
    label = repr(s)
    for k in range(samples):
        a, b = _with_factor(rng, s), _with_factor(rng, s)
        za, zb = zeta(a, s), zeta(b, s)
        tally.check(za == zeta_by_division(a, s), f"{label} sample {k}: zeta routes disagree")
        tally.check(zeta(a * b, s) == za + zb, f"{label} sample {k}: zeta not additive")
        sa, sb = specialize(a, s), specialize(b, s)
        tally.check(specialize(a * b, s) == sa * sb, f"{label} sample {k}: product not preserved")
        if not (a + b).is_zero():
            tally.check(specialize(a + b, s) == sa + sb, f"{label} sample {k}: sum not preserved")
        tally.check(sa.is_zero() == (za >= 1), f"{label} sample {k}: zero test disagrees with zeta")
        if zb == 0:
            frac = ParamScalar(a, b)
            tally.check(specialize(frac, s) == sa / sb, f"{label} sample {k}: quotient not preserved")
        else:
            try:
                specialize(ParamScalar(a, b * s.minimal ** (za + 1)), s)
                tally.check(False, f"{label} sample {k}: pole not detected")
            except PoleError:
                tally.check(True, "")


def _reduce_property(s, rng, samples, tally):
    """Monomials specializing to one are exactly the powers ``z^(l m)`` with ``l`` the order of omega."""
    one = specialize(ParamScalar(1), s)
    ell = s.order
    for k in range(samples):
        if k % 2:
            m = rng.randint(-2, 2)
            shift = [rng.choice((0, 0, 1)) * rng.randint(-1, 1) for _ in range(6)]
            exp = tuple(ell * m * v + d for v, d in zip(s.v, shift))
        else:
            exp = tuple(rng.randint(-3, 3) for _ in range(6))
        mono = Monomial(1, exp)
        is_one = specialize(mono.scalar(), s) == one
        mult = s.lattice_multiple(pad(exp))
        tally.check(is_one == (mult is not None and mult % ell == 0),
                    f"{s!r}: monomial {exp} violates the power criterion")


def criterion_5(level="full", seed=0, pool=_serial_map):
    start = time.perf_counter()
    tally = _Tally()
    rng = random.Random(seed)
    samples = 12 if level == "full" else 4
    for text in SPECIALIZATION_SPECS:
        s = spec_from_string(text, 2)
        _specialization_properties(s, rng, samples, tally)
        _reduce_property(s, rng, 4 * samples, tally)
    return _result(5, "orders of vanishing and specialization", tally, start)


# ---------------------------------------------------------------------------

REPLAY_SPEC = "tq:k=1,r=2,branch=0"
REPLAY_START = (0, 1, 0, 1)
REPLAY_WORD = (3, 1, 2)
REPLAY_EXPECTED = (
    ((0, 1, 1, 0), ((-1, (0, 1, 0, 1)),)),
    ((1, 0, 1, 0), ((1, (0, 1, 0, 1)), (-1, (0, 1, 1, 0)), (-1, (1, 0, 0, 1)))),
    ((1, 1, 0, 0), ((-1, (0, 0, 1, 1)),)),
)


def _mt_key(p):
    return tuple(p.lam), tuple(sorted((m, tuple(mu)) for m, mu in p.mt))


def criterion_6(level="full", seed=0, pool=_serial_map):
    start = time.perf_counter()
    tally = _Tally()
    s = spec_from_string(REPLAY_SPEC, 4)
    polys = []
    for length, (lam, mt) in enumerate(REPLAY_EXPECTED, start=1):
        p, _ = build_along(REPLAY_WORD[:length], 4, s, start=REPLAY_START)
        polys.append(p)
        want = (lam, tuple(sorted((m, mu) for m, mu in mt)))
        tally.check(_mt_key(p) == want, f"step {length}: got {p!r}")
        tally.check(p.is_specializable(), f"step {length}: not specializable")
    for p, ok in zip(polys, pool(check_generalized_eigen, polys)):
        tally.check(ok, f"{list(p.lam)}: not a generalized eigenvector")
    return _result(6, "rank-four modified polynomial replay", tally, start)


def _basis_row(args):
    text, lam = args
    s = spec_from_string(text, 2)
    p = build_basis_element(lam, s)
    body = p.expand()
    return (text, lam, p.is_specializable(), body.coefficient(tuple(lam)) == 1, p.is_triangular())


def criterion_7(level="full", seed=0, pool=_serial_map):
    start = time.perf_counter()
    tally = _Tally()
    jobs = [(text, lam) for text in REPRESENTATIVE_SPECS for lam in box(2, 2)]
    leads = {}
    for text, lam, spec_ok, monic, tri in pool(_basis_row, jobs):
        tag = f"{text} {list(lam)}"
        tally.check(spec_ok, f"{tag}: pole at s = 0")
        tally.check(monic, f"{tag}: not monic")
        tally.check(tri, f"{tag}: not triangular")
        leads.setdefault(text, []).append(tuple(lam))
    for text, lams in leads.items():
        tally.check(len(set(lams)) == len(lams), f"{text}: repeated leading weights")
    return _result(7, "basis of modified polynomials", tally, start)


# ---------------------------------------------------------------------------

WHEEL_SPEC = "tq:k=1,r=2,branch=0"
WHEEL_BOX = 2


def _wheel_row(args):
    lam, w = args
    f = build_basis_element(lam, w.spec).expand()
    closure = tq_closure_check(f, w)
    return lam, wheel_check(f, w), wheel_zeta(lam, w), closure


def criterion_8(level="full", seed=0, pool=_serial_map):
    start = time.perf_counter()
    tally = _Tally()
    s = spec_from_string(WHEEL_SPEC, 2)
    w = WheelSpec.from_spec(s)
    lams = admissible_basis(2, WHEEL_BOX, w.cycle, w.qpower)
    tally.check(bool(lams), "no admissible weights in the window")
    expected_zeta = 2 // w.cycle
    for lam, ok, z, closure in pool(_wheel_row, [(lam, w) for lam in lams]):
        tally.check(ok, f"{list(lam)} fails the wheel condition")
        tally.check(z == expected_zeta, f"{list(lam)}: zeta of the evaluation is {z}")
        for i, good in closure.items():
            tally.check(good, f"{list(lam)}: T{i} leaves the wheel ideal")
    lead = level1_weight(1, 2)
    diff = level1_product(2, 1, 2) - compute_E(lead).body
    tally.check(diff.is_zero() or diff.zeta(s) >= 1, "level-one product differs from E at s = 0")
    return _result(8, "wheel ideal at rank two", tally, start)


GRID_SPECS = ("ab:i=1,r=2,sign=+", "ac:i=1,r=2,sign=+", "ad:i=1,r=2,sign=+")
GRID_BOX = 2


def _grid_family(text, tally):
    s = spec_from_string(text, 2)
    for lam in grid_basis(s, GRID_BOX):
        f = build_basis_element(lam, s).expand()
        tally.check(grid_membership(f, s), f"{text} {list(lam)}: no vanishing on the complement")
    for lam, zc, image in grid_boundary(s, GRID_BOX):
        tally.check(image is None or image >= 1, f"{text} {list(lam)}: boundary image survives")
    for lam, inside, z in grid_zeta_certificates(s, GRID_BOX):
        want = 1 if inside else 0
        tally.check(z == want, f"{text} {list(lam)}: zeta {z}, expected {want}")


def criterion_9(level="full", seed=0, pool=_serial_map):
    start = time.perf_counter()
    tally = _Tally()
    for text in GRID_SPECS:
        _grid_family(text, tally)
    return _result(9, "grid subrepresentations (ab, ac, ad)", tally, start)


# ---------------------------------------------------------------------------

Q_SPEC = "tq:k=-1,r=4,branch=0"
Q_LAMBDA = (-3, 0, -9, 13)
Q_TABLE = {0: ("<->", None, None), 1: ("->", (0, -3, -9, 13), (4, 3, 1, 0)),
           2: ("<->", None, None), 3: ("<->", None, None), 4: ("<->", None, None)}
Q_QUOT = (3, 2, 0, 0)
Q_STD = (9, 6, 0, 0)
Q_MILESTONES = ((-3, 0, -9, 13), (8, 2, 0, 13), (12, 8, 2, 0), (9, 6, 0, 0))
Q_FIBER = (-3, 0, -3, 4)
Q_SWEEP = (("tq:k=-1,r=3,branch=0", 2), ("tq:k=-1,r=3,branch=1", 2))
Q_SWEEP_BOX = 4


def criterion_10(level="full", seed=0, pool=_serial_map):
    start = time.perf_counter()
    tally = _Tally()
    s = spec_from_string(Q_SPEC, 4)
    rep = quotient_report(Q_LAMBDA, s)
    for row in rep["steps"]:
        kind, target, quot = Q_TABLE[row["i"]]
        tally.check(row["class"] == kind, f"s{row['i']}: class {row['class']}, expected {kind}")
        if target is not None:
            tally.check(tuple(row["target"]) == target, f"s{row['i']}: target {row['target']}")
            tally.check(tuple(row["quot"]) == quot, f"s{row['i']}: quotient {row['quot']}, expected {list(quot)}")
    tally.check(tuple(rep["quot"]) == Q_QUOT, f"quotient {rep['quot']}")
    tally.check(tuple(rep["std"]) == Q_STD, f"standard weight {rep['std']}")
    tally.check(tuple(map(tuple, rep["milestones"])) == Q_MILESTONES, f"milestones {rep['milestones']}")
    for leg in rep["legs"]:
        tally.check(leg["two_way"], f"leg {leg['from']} -> {leg['to']} is not two-way")
    tally.check(tuple(rep["fiber"]) == Q_FIBER, f"fiber map {rep['fiber']}")
    for text, n in Q_SWEEP:
        sw = spec_from_string(text, n)
        for lam, rows in zip(box(n, Q_SWEEP_BOX), pool(lambda lam: classify_steps(lam, sw), box(n, Q_SWEEP_BOX))):
            for row in rows:
                tally.check(row["consistent"], f"{text} {list(lam)} s{row['i']}: class disagrees with quotient")
    return _result(10, "q at a root of unity", tally, start)


def criterion_11(level="full", seed=0, pool=_serial_map):
    start = time.perf_counter()
    tally = _Tally()
    for chain in ("tq-irr", "aa-irr"):
        cert = certify(chain, n=2, r=2)
        tally.check(cert.ok, f"{chain}: {cert.failure}")
        for step in cert.steps[1:]:
            tally.check(step["multiplier_zeta"] == 0, f"{chain}: step s{step['i']} multiplier vanishes")
    return _result(11, "arrow-chain certificates", tally, start)


CRITERIA = {k: globals()[f"criterion_{k}"] for k in range(1, 12)}


def run_criteria(numbers=None, level="full", seed=0, pool=_serial_map):
    numbers = sorted(CRITERIA) if numbers is None else numbers
    return [CRITERIA[k](level, seed, pool) for k in numbers]
