"""Structure of the polynomial representation at special parameters.

Wheel conditions and the admissible basis, the factorized level-one example,
grid subrepresentations for the ab/ac/ad families, the lattice of subrepresentations
when q is a root of unity, and replayable arrow-chain certificates.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from itertools import permutations, product

from .errors import ParameterError, PoleError, PreconditionError
from .koornwinder import apply_phi, c_coeff, chi0_recurrence, compute_E
from .modified import ModPoly, arrow, same_eigenvalue
from .params import (
    NVARS, X_OFFSET, gen_full, half_powers, pad, spec_from_string, zeta_scalar,
)
from .polyrep import XLaurent, chi_eval, noumi_T
from .weights import (
    Weight, admissible, as_weight, box, dominance_geq, dot_action, fiber_map, neighborhoods,
    neighborhoods_nonneg, quotient_data,
)

# ---------------------------------------------------------------------------
# Wheel conditions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WheelSpec:
    """Wheels of length ``k+1`` with total q-power ``r-1``; ``m`` disjoint wheels at once."""

    cycle: int
    qpower: int
    spec: object
    m: int = 1

    @classmethod
    def from_spec(cls, spec, m=1):
        fam = spec.family
        if fam is None or fam.kind != "tq" or fam.k + 1 < 2:
            raise ParameterError("wheels need a tq family with k + 1 >= 2")
        return cls(fam.k + 1, fam.r - 1, spec, m)


def sharp(lam, w):
    return neighborhoods(lam, w.cycle, w.qpower)


def _specialized_zero(value, s):
    return value.is_zero() or zeta_scalar(value, s) >= 1


def wheel_window(f, w):
    return f.degree_span() + w.qpower * w.cycle


def wheel_check(f, w, bound=None):
    """Grid form: ``chi*_mu(f)`` vanishes at ``s = 0`` whenever ``mu`` has exactly ``m`` neighborhoods."""
    s = w.spec
    if f.n < w.cycle * w.m:
        raise PreconditionError("not enough variables for the requested wheels")
    if not f.is_zero() and f.zeta(s) < 0:
        raise PoleError(f.zeta(s))
    if f.is_zero():
        return True
    bound = wheel_window(f, w) if bound is None else bound
    for mu in box(f.n, bound):
        if sharp(mu, w) == w.m and not _specialized_zero(chi_eval(mu, f, dual=True), s):
            return False
    return True


def _arrow_allowed(p, s_from, s_to, i_from, i_to):
    if p > 0:
        return True
    if (s_from, s_to) == (1, 1):
        return i_from < i_to
    if (s_from, s_to) == (-1, -1):
        return i_from > i_to
    return (s_from, s_to) == (1, -1)


def enumerate_wheels(n, cycle, qpower):
    """All single wheels as ``(indices, signs, powers)``; ``powers[m]`` labels the edge ``m -> m+1``."""
    out = []
    for idx in permutations(range(1, n + 1), cycle):
        if idx[0] != min(idx):
            continue  # rotations describe the same cycle
        for signs in product((1, -1), repeat=cycle):
            for powers in product(range(qpower + 1), repeat=cycle):
                if sum(powers) != qpower:
                    continue
                if all(_arrow_allowed(powers[m], signs[m], signs[(m + 1) % cycle],
                                      idx[m], idx[(m + 1) % cycle]) for m in range(cycle)):
                    out.append((idx, signs, powers))
    return out


def _wheel_substitution(f, wheel):
    """Put ``z_(i_1) = x_(i_1)`` and propagate ``z_(i_(m+1))^s = z_(i_m)^s t q^p`` along the wheel."""
    idx, signs, powers = wheel
    n = f.n
    images = {j: (pad(()), {j: 1}) for j in range(1, n + 1)}  # param exponent, x exponents
    head = idx[0]
    images[head] = (pad(()), {head: 1})
    acc_t, acc_q = 0, 0
    for m in range(1, len(idx)):
        acc_t += 1
        acc_q += powers[m - 1]
        sgn = signs[0] * signs[m]  # z_(i_m) = (x_head^(s_1) t^m q^P)^(s_m)
        par = half_powers(t=2 * acc_t * signs[m], q=2 * acc_q * signs[m]).exp
        images[idx[m]] = (pad(par), {head: sgn})

    def fn(e):
        out = [0] * NVARS
        for k in range(X_OFFSET):
            out[k] = e[k]
        for j in range(1, n + 1):
            k = e[X_OFFSET + j - 1]
            if not k:
                continue
            par, xs = images[j]
            for a in range(X_OFFSET):
                out[a] += k * par[a]
            for jj, c in xs.items():
                out[X_OFFSET + jj - 1] += k * c
        return tuple(out), 1

    return XLaurent(n, f.num.map_exponents(fn), f.den)


def wheel_check_direct(f, w):
    """Substitute every single wheel into ``f`` and test vanishing at ``s = 0``."""
    if w.m != 1:
        raise PreconditionError("direct substitution is implemented for one wheel")
    s = w.spec
    for wheel in enumerate_wheels(f.n, w.cycle, w.qpower):
        g = _wheel_substitution(f, wheel)
        if not g.is_zero() and g.zeta(s) < 1:
            return False
    return True


def admissible_basis(n, bound, cycle, qpower):
    """Admissible weights in the box, cross-checked against the nonnegative-representative count."""
    if not n >= cycle >= 2:
        raise PreconditionError("need n >= k + 1 >= 2")
    out = []
    for lam in box(n, bound):
        direct = admissible(lam, cycle, qpower)
        if direct != (neighborhoods_nonneg(lam, cycle, qpower) == 0):
            raise AssertionError(f"neighborhood counts disagree at {list(lam)}")
        if direct:
            out.append(lam)
    return out


def wheel_zeta(lam, w):
    """``zeta(chi0*(E_lam))`` at the wheel's specialization."""
    return zeta_scalar(chi0_recurrence(lam), w.spec)


def level1_product(n, k, m):
    """The factorized polynomial of leading weight ``(m-1, ..., 1, 0)`` repeated ``k`` times."""
    if k < 1 or m < 1 or n != k * m:
        raise ParameterError(f"need n = k m with k, m >= 1 (got n={n}, k={k}, m={m})")
    f = XLaurent.one(n)
    tinv = gen_full("t").inverse()
    for ell in range(1, k + 1):
        tq = gen_full("t") ** ell * gen_full("q")
        for i in range(m * (ell - 1) + 1, m * ell + 1):
            for j in range(i + 1, m * ell + 1):
                xi = [0] * n
                xj = [0] * n
                xi[i - 1] = 1
                xj[j - 1] = 1
                lin = XLaurent.monomial(n, xi) - XLaurent.monomial(n, xj, tinv)
                both = [0] * n
                both[i - 1] = both[j - 1] = -1
                quad = XLaurent.one(n) - XLaurent.monomial(n, both, tq)
                f = f * lin * quad
    return f


def level1_weight(k, m):
    return Weight(tuple(range(m - 1, -1, -1)) * k)


def tq_closure_check(f, w, indices=None):
    """Whether every Noumi ``T_i`` keeps ``f`` inside the wheel ideal."""
    indices = range(f.n + 1) if indices is None else indices
    return {i: wheel_check(noumi_T(i, 1, f), w) for i in indices}


# ---------------------------------------------------------------------------
# ab / ac / ad grid subrepresentations
# ---------------------------------------------------------------------------

GRID_CASES = ("ab", "ac", "ad")


def _grid_index_sign(lam, i):
    """Sign of the entry holding the ``i``-th largest absolute value."""
    pos = lam.rank_order[i - 1]
    return lam.sigma[pos]


def in_grid_set(case, i, r, lam, rule="sign"):
    """Membership in the labeling set of the irreducible subrepresentation.

    ``rule="sign"`` splits the boundary ``lam+_i = r-1`` by sign (plus for ab, minus for ac/ad);
    ``rule="threshold"`` keeps the whole boundary, which is what the evaluation formula supports
    for ac/ad.
    """
    if case not in GRID_CASES:
        raise ParameterError(f"unknown grid case {case!r}")
    if rule not in ("sign", "threshold"):
        raise ParameterError(f"unknown rule {rule!r}")
    lam = as_weight(lam)
    big = lam.plus[i - 1]
    if big != r - 1:
        return big > r - 1
    if rule == "threshold":
        return True
    wanted = 1 if case == "ab" else -1
    return _grid_index_sign(lam, i) == wanted


def _grid_pre(spec):
    fam = spec.family
    if fam is None or fam.kind not in GRID_CASES:
        raise PreconditionError("specialization is not from the ab, ac or ad families")
    return fam


def grid_basis(spec, bound, rule="sign"):
    fam = spec.family
    return [lam for lam in box(fam.n, bound) if in_grid_set(fam.kind, fam.i, fam.r, lam, rule)]


def grid_membership(f, spec, bound=None, rule="sign"):
    """Vanishing of ``chi*_mu(f)`` at every window weight outside the labeling set."""
    fam = _grid_pre(spec)
    if fam.sign != 1:
        raise PreconditionError("the vanishing characterization is available for the plus branch only")
    if not f.is_zero() and f.zeta(spec) < 0:
        raise PoleError(f.zeta(spec))
    bound = f.degree_span() + fam.r if bound is None else bound
    for mu in box(f.n, bound):
        if in_grid_set(fam.kind, fam.i, fam.r, mu, rule):
            continue
        if not _specialized_zero(chi_eval(mu, f, dual=True), spec):
            return False
    return True


def chi0_dual(mu):
    """``chi0(E*_mu)`` as the parameter dual of ``chi0*(E_mu)``."""
    return chi0_recurrence(mu).dual()


def grid_zeta_certificates(spec, bound, rule="sign"):
    """Rows ``(weight, inside, zeta)``; expected zeta is 1 inside the set and 0 outside."""
    fam = spec.family
    rows = []
    for lam in box(fam.n, bound):
        inside = in_grid_set(fam.kind, fam.i, fam.r, lam, rule)
        value = chi0_recurrence(lam) if inside else chi0_dual(lam)
        rows.append((lam, inside, zeta_scalar(value, spec)))
    return rows


def grid_boundary(spec, bound):
    """Weights where ``phi_n`` leaves the set, each with ``zeta(c_n)`` and the image's order."""
    fam = spec.family
    n = fam.n
    out = []
    for lam in box(n, bound):
        if lam[n - 1] == fam.r - 1 and lam.rho[n - 1] == n - fam.i:
            c = c_coeff(n, lam)
            image = apply_phi(n, compute_E(lam).body, lam)
            out.append((lam, zeta_scalar(c, spec), image.zeta(spec) if not image.is_zero() else None))
    return out


def grid_closure(spec, bound, rule="sign"):
    """Steps ``phi_j`` leaving the set whose multiplier survives at ``s = 0`` (empty when closed)."""
    fam = spec.family
    bad = []
    for lam in box(fam.n, bound):
        if not in_grid_set(fam.kind, fam.i, fam.r, lam, rule):
            continue
        for j in range(fam.n + 1):
            mu = dot_action(j, lam)
            if mu == lam or in_grid_set(fam.kind, fam.i, fam.r, mu, rule):
                continue
            c = c_coeff(j, lam)
            if not c.is_zero() and zeta_scalar(c, spec) < 1:
                bad.append((lam, j))
    return bad


def singleton_fibers(spec, bound):
    """Window weights whose specialized eigenvalue is shared with another window weight."""
    n = spec.family.n if spec.family and spec.family.n else None
    if n is None:
        raise PreconditionError("specialization carries no rank")
    weights = box(n, bound)
    clashes = []
    for a in range(len(weights)):
        for b in range(a + 1, len(weights)):
            if same_eigenvalue(weights[a], weights[b], spec):
                clashes.append((weights[a], weights[b]))
    return clashes


# ---------------------------------------------------------------------------
# q a root of unity
# ---------------------------------------------------------------------------


def _q_pre(spec):
    fam = spec.family
    if fam is None or fam.kind != "tq" or fam.k + 1 != 0:
        raise PreconditionError("the quotient lattice needs the tq family with k + 1 = 0")
    mult = spec.lattice_multiple(gen_full("q").exp)
    if mult is None or spec.order // math.gcd(spec.order, spec.power * mult) != fam.r - 1:
        raise PreconditionError("q must specialize to a primitive (r-1)-th root of unity")
    return fam


def _fundamental(j, n):
    return tuple(1 if m < j else 0 for m in range(n))


def _quot_change(before, after):
    diff = tuple(a - b for a, b in zip(after, before))
    n = len(diff)
    if not any(diff):
        return 0, 0
    for j in range(1, n + 1):
        if diff == _fundamental(j, n):
            return 1, j
        if diff == tuple(-x for x in _fundamental(j, n)):
            return -1, j
    return None, None


def arrow_class(i, lam, spec):
    """``"->"``, ``"<-"``, ``"<->"`` or ``"fixed"`` from the vanishing of the two multipliers."""
    lam = as_weight(lam)
    mu = dot_action(i, lam)
    if mu == lam:
        return "fixed", None, None
    up = zeta_scalar(c_coeff(i, mu), spec)      # phi_i E_mu = c E_lam
    down = zeta_scalar(c_coeff(i, lam), spec)   # phi_i E_lam = c E_mu
    if up > 0 and down > 0:
        return "both-vanish", up, down
    if up > 0:
        return "->", up, down
    if down > 0:
        return "<-", up, down
    return "<->", up, down


def classify_steps(lam, spec):
    """Per-index arrow class, quotient change, and whether the two agree."""
    fam = _q_pre(spec)
    lam = as_weight(lam)
    quot = quotient_data(lam, fam.r).quot
    rows = []
    for i in range(lam.n + 1):
        kind, up, down = arrow_class(i, lam, spec)
        mu = dot_action(i, lam)
        mq = quotient_data(mu, fam.r).quot
        sign, j = _quot_change(quot, mq)
        expected = {"fixed": 0, "<->": 0, "->": 1, "<-": -1}.get(kind)
        ok = kind == "fixed" or (sign is not None and sign == expected)
        rows.append({"i": i, "target": list(mu), "class": kind, "quot": list(mq),
                     "change": None if sign is None else [sign, j], "consistent": ok})
    return rows


def _step1(lam):
    neg = [x for x in lam if x < 0]
    pos = [x for x in lam if x >= 0]
    return Weight(tuple(-x - 1 for x in reversed(neg)) + tuple(pos))


def _step2_once(lam):
    idx = [p + 1 for p in lam.rank_order]
    n = lam.n
    ell = n
    while ell >= 1 and idx[ell - 1] == ell:
        ell -= 1
    if ell == 0:
        return lam
    i_ell = idx[ell - 1]
    moved = [lam[j - 1] - 1 for j in range(i_ell + 1, ell + 1)]
    head = [lam[j - 1] for j in range(1, i_ell + 1)]
    tail = [lam[idx[m] - 1] for m in range(ell, n)]
    return Weight(tuple(moved + head + tail))


def _step3(lam, std):
    out = list(lam)
    for ell in range(len(out), 0, -1):
        while out[ell - 1] > std[ell - 1]:
            for j in range(ell):
                out[j] -= 1
    return Weight(tuple(out))


def connectivity_milestones(lam, r):
    """Milestones of the reduction to the standard dominant weight (sign clearing, sorting, shrinking)."""
    lam = as_weight(lam)
    std = quotient_data(lam, r).std
    out = [lam]
    cur = _step1(lam) if any(x < 0 for x in lam) else lam
    if cur != out[-1]:
        out.append(cur)
    guard = 0
    while not cur.is_dominant():
        cur = _step2_once(cur)
        guard += 1
        if guard > 4 * lam.n * (max(abs(x) for x in lam) + 2):
            raise AssertionError("sorting step does not terminate")
    if cur != out[-1]:
        out.append(cur)
    cur = _step3(cur, std)
    if cur != out[-1]:
        out.append(cur)
    return out


def quotient_path(src, dst, r, limit=200000):
    """Shortest path of simple reflections from ``src`` to ``dst`` through weights of equal quotient."""
    src, dst = as_weight(src), as_weight(dst)
    quot = quotient_data(src, r).quot
    if quotient_data(dst, r).quot != quot:
        return None
    prev = {src: None}
    queue = deque([src])
    while queue:
        cur = queue.popleft()
        if cur == dst:
            word = []
            while prev[cur] is not None:
                cur, i = prev[cur]
                word.append(i)
            return word[::-1]
        for i in range(cur.n + 1):
            nxt = dot_action(i, cur)
            if nxt in prev or quotient_data(nxt, r).quot != quot:
                continue
            prev[nxt] = (cur, i)
            queue.append(nxt)
            if len(prev) > limit:
                return None
    return None


def verify_two_way(lam, word, spec):
    """Each reflection in ``word`` must have both multipliers nonvanishing at ``s = 0``."""
    cur = as_weight(lam)
    for i in word:
        kind, _, _ = arrow_class(i, cur, spec)
        if kind != "<->":
            return False
        cur = dot_action(i, cur)
    return True


def quotient_report(lam, spec, with_path=True):
    fam = _q_pre(spec)
    lam = as_weight(lam)
    data = quotient_data(lam, fam.r)
    out = {"lambda": list(lam), "indices": list(data.indices), "gaps": list(data.gaps),
           "quot": list(data.quot), "std": list(data.std),
           "fiber": list(fiber_map(lam, fam.r)), "steps": classify_steps(lam, spec)}
    if with_path:
        stones = connectivity_milestones(lam, fam.r)
        legs = []
        for a, b in zip(stones, stones[1:]):
            word = quotient_path(a, b, fam.r)
            legs.append({"from": list(a), "to": list(b), "word": word,
                         "two_way": word is not None and verify_two_way(a, word, spec)})
        out["milestones"] = [list(x) for x in stones]
        out["legs"] = legs
    return out


def quotient_lattice(spec, n, bound, with_path=False):
    """Report for every weight of the window."""
    return [quotient_report(lam, spec, with_path) for lam in box(n, bound)]


def partitions_upto(n, total):
    """Partitions with at most ``n`` parts and size at most ``total``."""
    out = []

    def rec(prefix, remaining, cap):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for x in range(min(cap, remaining), -1, -1):
            rec(prefix + [x], remaining - x, x)

    rec([], total, total)
    return out


def subrep_inclusion(mu, nu, universe):
    """``V_{>=mu}`` inside ``V_{>=nu}`` decided on labels: every label above ``mu`` is above ``nu``."""
    return all(dominance_geq(lam, nu) for lam in universe if dominance_geq(lam, mu))


def fiber_injectivity(spec, n, bound):
    """Pairs of distinct window weights with equal quotient and equal specialized eigenvalue."""
    fam = _q_pre(spec)
    groups = {}
    for lam in box(n, bound):
        groups.setdefault(quotient_data(lam, fam.r).quot, []).append(lam)
    clashes = []
    for members in groups.values():
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                if same_eigenvalue(members[a], members[b], spec):
                    clashes.append((members[a], members[b]))
    return clashes


# ---------------------------------------------------------------------------
# Arrow-chain certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChainLink:
    kind: str                 # "->" or "<->"
    target: tuple             # (lambda, ((m, mu), ...))
    index: int | None = None  # a suggested single step


@dataclass
class Certificate:
    name: str
    spec: object
    steps: list
    ok: bool
    failure: str = ""

    def to_json(self):
        return {"chain": self.name, "spec": self.spec.to_json(), "ok": self.ok,
                "failure": self.failure, "steps": self.steps}


def _state_key(p):
    return (tuple(p.lam), tuple((str(m), tuple(mu)) for m, mu in p.mt))


def _as_modpoly(node, spec):
    lam, pairs = node
    return ModPoly.make(lam, pairs, spec)


def _arrows_from(p, indices):
    for i in indices:
        try:
            res = arrow(i, p)
        except PreconditionError:
            continue
        if res.exists:
            yield i, res


def _search(src, dst, two_way, max_depth, index=None):
    """Breadth-first search over arrows; returns a list of arrow results or None."""
    n = src.lam.n
    goal = _state_key(dst)
    indices = [index] if index is not None else list(range(n + 1))
    prev = {_state_key(src): None}
    frontier = [src]
    for _ in range(max_depth):
        nxt = []
        for p in frontier:
            for i, res in _arrows_from(p, indices if p is src else range(n + 1)):
                key = _state_key(res.target)
                if key in prev:
                    continue
                if two_way and not _reverses(res):
                    continue
                prev[key] = (p, res)
                if key == goal:
                    path = []
                    while prev[key] is not None:
                        parent, r = prev[key]
                        path.append(r)
                        key = _state_key(parent)
                    return path[::-1]
                nxt.append(res.target)
        frontier = nxt
        indices = list(range(n + 1))
    return None


def _reverses(res):
    try:
        back = arrow(res.index, res.target)
    except PreconditionError:
        return False
    return back.exists and _state_key(back.target) == _state_key(res.source)


def verify_arrow_chain(name, spec, start, links, max_depth=6):
    """Replay a chain node by node; every arrow is an actual intertwiner step with a unit multiplier."""
    cur = _as_modpoly(start, spec)
    steps = [{"node": cur.to_json()}]
    if cur.zeta() < 0:
        return Certificate(name, spec, steps, False, "start is not specializable")
    for n_link, link in enumerate(links):
        dst = _as_modpoly(link.target, spec)
        path = _search(cur, dst, link.kind == "<->", max_depth, link.index)
        if path is None:
            return Certificate(name, spec, steps, False,
                               f"link {n_link}: no {link.kind} path to {dst!r}")
        for res in path:
            steps.append({"i": res.index, "rule": res.rule,
                          "multiplier": res.multiplier.to_json(),
                          "multiplier_zeta": res.multiplier_zeta,
                          "node": res.target.to_json(), "link": link.kind})
        cur = dst
    return Certificate(name, spec, steps, True)


def _node(lam, *pairs):
    return (tuple(lam), tuple(pairs))


def tq_chain(n=2, r=2):
    """The reduction to the zero weight for ``t q^(r-1) = 1`` at rank two."""
    if n != 2:
        raise PreconditionError("the tq chain is tabulated at rank two")
    g = r - 1
    start = _node((2 * g, 0))
    links = [
        ChainLink("->", _node((g, g))),
        ChainLink("->", _node((g, 0), (-1, (0, g)))),
        ChainLink("->", _node((0, -g)), index=n),
        ChainLink("<->", _node((0, 0))),
    ]
    return start, links


def aa_chain(n=2, r=2):
    """The reduction to the zero weight for ``q^(r-1) a*^2 = 1`` at rank two (``k + 1 = 0``)."""
    if n != 2:
        raise PreconditionError("the aa chain is tabulated at rank two")
    g = r - 1
    start = _node((g, g))
    links = [
        ChainLink("->", _node((g, 0)), index=n),
        ChainLink("->", _node((g, -g), (-1, (g, 0)))),
        ChainLink("<->", _node((-g, -g), (-1, (0, -g)))),
        ChainLink("->", _node((-g, 0)), index=n - 1),
        ChainLink("<->", _node((0, 0))),
    ]
    return start, links


def specific_element_chain(spec, r, large):
    """Two-way connection between a large weight and the specific element at rank two."""
    g = r - 1
    return _node(tuple(large)), [ChainLink("<->", _node((2 * g, 0)))]


CHAINS = {"tq-irr": ("tq:k=0,r={r},branch=0", tq_chain),
          "aa-irr": ("aa:k=-1,r={r},branch=0", aa_chain)}


def certify(chain, n=2, r=2, max_depth=6):
    if chain not in CHAINS:
        raise ParameterError(f"unknown chain {chain!r}; choose from {sorted(CHAINS)}")
    text, builder = CHAINS[chain]
    spec = spec_from_string(text.format(r=r), n)
    start, links = builder(n, r)
    return verify_arrow_chain(chain, spec, start, links, max_depth)


__all__ = [
    "WheelSpec", "wheel_check", "wheel_check_direct", "enumerate_wheels", "admissible_basis",
    "wheel_zeta", "level1_product", "level1_weight", "tq_closure_check", "in_grid_set",
    "grid_basis", "grid_membership", "grid_zeta_certificates", "grid_boundary", "grid_closure",
    "singleton_fibers", "chi0_dual", "arrow_class", "classify_steps", "connectivity_milestones",
    "quotient_path", "verify_two_way", "quotient_report", "quotient_lattice", "partitions_upto",
    "subrep_inclusion", "fiber_injectivity", "ChainLink", "Certificate", "verify_arrow_chain",
    "tq_chain", "aa_chain", "specific_element_chain", "certify", "sharp",
]
