"""Combinatorics of weights in Z^n under the affine Weyl group of type C_n."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import permutations, product

from .errors import PreconditionError
from .params import DERIVED, half_powers


def _sgn(x):
    return -1 if x < 0 else 1


class SignedPerm(tuple):
    """Signed permutation stored as the images ``w(1), ..., w(n)`` in ``{+-1, ..., +-n}``.

    ``w`` sends the basis vector ``e_i`` to ``sgn(w(i)) e_|w(i)|``.
    """

    @classmethod
    def identity(cls, n):
        return cls(range(1, n + 1))

    @classmethod
    def generator(cls, i, n):
        """Finite simple reflection: swap for ``1 <= i < n``, negate the last coordinate for ``i = n``."""
        images = list(range(1, n + 1))
        if i == n:
            images[n - 1] = -n
        elif 1 <= i < n:
            images[i - 1], images[i] = i + 1, i
        else:
            raise PreconditionError(f"no finite generator s_{i}")
        return cls(images)

    @property
    def n(self):
        return len(self)

    def image(self, i):
        """Image of a signed index."""
        return self[i - 1] if i > 0 else -self[-i - 1]

    def apply(self, vec):
        out = [0] * len(vec)
        for i, v in enumerate(vec):
            w = self[i]
            out[abs(w) - 1] = _sgn(w) * v
        return tuple(out)

    def compose(self, other):
        """``self * other`` acting as ``self(other(.))``."""
        return SignedPerm(self.image(other[i]) for i in range(self.n))

    def inverse(self):
        out = [0] * self.n
        for i, w in enumerate(self):
            out[abs(w) - 1] = _sgn(w) * (i + 1)
        return SignedPerm(out)

    def length(self):
        """Number of positive roots sent to negative roots."""
        n = self.n

        def negative(vec):
            for c in vec:
                if c:
                    return c < 0
            return False

        count = 0
        for i in range(n):
            for j in range(i, n):
                signs = (1,) if i == j else (-1, 1)
                for s in signs:
                    root = [0] * n
                    root[i] += 1
                    root[j] += s
                    if negative(self.apply(root)):
                        count += 1
        return count


def all_signed_perms(n):
    for perm in permutations(range(1, n + 1)):
        for signs in product((1, -1), repeat=n):
            yield SignedPerm(s * p for s, p in zip(signs, perm))


class Weight(tuple):
    """An element of Z^n together with its derived data."""

    def __new__(cls, entries):
        return super().__new__(cls, (int(x) for x in entries))

    @property
    def n(self):
        return len(self)

    @cached_property
    def rank_order(self):
        """Positions (0-based) listed from the largest ``|rho|`` to the smallest.

        Larger absolute values come first.  Among equal absolute values,
        nonnegative entries come first from left to right, then negative
        entries from right to left; this realizes the shortest ``w``.
        """
        return tuple(sorted(range(self.n), key=lambda p: (-abs(self[p]), 0 if self[p] >= 0 else 1,
                                                          p if self[p] >= 0 else -p)))

    @cached_property
    def plus(self):
        return Weight(sorted((abs(x) for x in self), reverse=True))

    @cached_property
    def w_plus(self):
        """The shortest finite Weyl group element with ``w(plus) = self``."""
        images = [0] * self.n
        for m, p in enumerate(self.rank_order):
            images[m] = _sgn(self[p]) * (p + 1)
        return SignedPerm(images)

    @cached_property
    def sigma(self):
        return tuple(_sgn(x) for x in self)

    @cached_property
    def rho(self):
        out = [0] * self.n
        for m, p in enumerate(self.rank_order):
            out[p] = _sgn(self[p]) * (self.n - 1 - m)
        return tuple(out)

    def is_dominant(self):
        return tuple(self) == tuple(self.plus)

    def __repr__(self):
        return f"Weight({list(self)})"


def as_weight(lam):
    return lam if isinstance(lam, Weight) else Weight(lam)


def rho_vector(n):
    return tuple(range(n - 1, -1, -1))


def shortest_w_brute(lam):
    """Brute-force shortest ``w`` with ``w(lam^+) = lam`` (oracle for small n)."""
    lam = as_weight(lam)
    best = None
    for w in all_signed_perms(lam.n):
        if w.apply(lam.plus) == tuple(lam):
            if best is None or w.length() < best.length():
                best = w
    return best


def dot_action(i, lam):
    lam = as_weight(lam)
    n = lam.n
    if not 0 <= i <= n:
        raise PreconditionError(f"index {i} outside 0..{n}")
    v = list(lam)
    if i == 0:
        v[0] = -1 - v[0]
    elif i == n:
        v[n - 1] = -v[n - 1]
    else:
        v[i - 1], v[i] = v[i], v[i - 1]
    return Weight(v)


def pairing(lam, i):
    """``<lam, alpha_i>`` with ``alpha_0 = delta - 2 e_1`` and ``alpha_n = 2 e_n``."""
    n = len(lam)
    if i == 0:
        return -2 * lam[0]
    if i == n:
        return 2 * lam[n - 1]
    return lam[i - 1] - lam[i]


def y_eigenvalue(lam, dual=False):
    """The monomials ``q^lam_i t^rho_i a*^sigma_i`` (``a`` in place of ``a*`` when dual)."""
    lam = as_weight(lam)
    base = DERIVED["a"] if dual else DERIVED["a_star"]
    out = []
    for x, r, s in zip(lam, lam.rho, lam.sigma):
        out.append(half_powers(q=2 * x, t=2 * r) * (base if s > 0 else base.inverse()))
    return tuple(out)


def coroot_cone(diff):
    """True when ``diff`` is a nonnegative combination of ``e_i - e_(i+1)`` and ``e_n``."""
    total = 0
    for x in diff:
        total += x
        if total < 0:
            return False
    return True


def preceq(lam, mu):
    """True iff ``mu`` precedes or equals ``lam`` in the order used for triangularity."""
    lam, mu = as_weight(lam), as_weight(mu)
    if tuple(lam) == tuple(mu):
        return True
    if lam.plus != mu.plus:
        return coroot_cone([a - b for a, b in zip(lam.plus, mu.plus)])
    return coroot_cone([a - b for a, b in zip(lam, mu)])


def precedes(mu, lam):
    """Strict version: ``mu`` strictly below ``lam``."""
    return tuple(mu) != tuple(lam) and preceq(lam, mu)


def reduced_word_to(lam):
    """Deterministic word ``j_1, ..., j_l`` with ``lam = s_(j_l) ... s_(j_1) . 0``.

    Each intermediate ``lam^(m)`` satisfies ``<lam^(m), alpha_(j_m)> > 0``.
    """
    lam = as_weight(lam)
    word = []
    cur = lam
    while any(cur):
        for i in range(cur.n + 1):
            if pairing(cur, i) > 0:
                nxt = dot_action(i, cur)
                if precedes(nxt, cur):
                    break
        else:  # pragma: no cover - excluded by the pairing argument
            raise PreconditionError(f"no descent from {cur}")
        word.append(i)
        cur = nxt
    word.reverse()
    return word


def word_path(lam):
    """Weights ``0 = lam^(0), lam^(1), ..., lam^(l) = lam`` along the deterministic word."""
    lam = as_weight(lam)
    path = [Weight((0,) * lam.n)]
    for j in reduced_word_to(lam):
        path.append(dot_action(j, path[-1]))
    return path


def dot_distance(lam, limit=64):
    """Breadth-first distance from zero under the dot action (oracle)."""
    lam = as_weight(lam)
    start = Weight((0,) * lam.n)
    seen = {start: 0}
    queue = deque([start])
    bound = max((abs(x) for x in lam), default=0) + 1
    while queue:
        cur = queue.popleft()
        if cur == lam:
            return seen[cur]
        if seen[cur] >= limit:
            continue
        for i in range(lam.n + 1):
            nxt = dot_action(i, cur)
            if nxt not in seen and max(abs(x) for x in nxt) <= bound:
                seen[nxt] = seen[cur] + 1
                queue.append(nxt)
    return None


# ---------------------------------------------------------------------------
# Neighborhoods and admissibility
# ---------------------------------------------------------------------------


def _is_neighborhood(lam, i, j, a, b):
    rho, sig = lam.rho, lam.sigma
    if abs(rho[i]) - abs(rho[j]) != a - 1:
        return False
    gap = abs(lam[i]) - abs(lam[j])
    if gap > b:
        return False
    if gap == b:
        pair = (sig[i], sig[j])
        return (pair == (1, 1) and i > j) or (pair == (-1, -1) and i < j) or pair == (-1, 1)
    return True


def neighborhood_pairs(lam, a, b):
    lam = as_weight(lam)
    if not (lam.n >= a >= 2 and b >= 1):
        raise PreconditionError("need n >= a >= 2 and b >= 1")
    return [(i + 1, j + 1) for i in range(lam.n) for j in range(lam.n)
            if i != j and _is_neighborhood(lam, i, j, a, b)]


def neighborhoods(lam, a, b):
    """Number of ``(a, b)``-neighborhoods of ``lam``."""
    return len(neighborhood_pairs(lam, a, b))


def admissible(lam, a, b):
    return neighborhoods(lam, a, b) == 0


def lambda_zero(lam):
    """Image of ``lam`` in ``Z_{>=0}^n`` under the shortest sign-clearing element.

    Nonnegative entries keep their order; negated negative entries follow in
    reverse order of position.
    """
    lam = as_weight(lam)
    nonneg = [x for x in lam if x >= 0]
    neg = [-x for x in reversed(lam) if x < 0]
    return Weight(nonneg + neg)


def lambda_zero_brute(lam):
    lam = as_weight(lam)
    best = None
    for w in all_signed_perms(lam.n):
        img = w.apply(lam)
        if all(x >= 0 for x in img):
            if best is None or w.length() < best[0]:
                best = (w.length(), img)
    return Weight(best[1])


def neighborhoods_nonneg(lam, a, b):
    """Neighborhood count read off the nonnegative representative (all signs positive)."""
    return neighborhoods(lambda_zero(lam), a, b)


# ---------------------------------------------------------------------------
# (r-1)-quotients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuotientData:
    indices: tuple   # i_1, ..., i_n (1-based positions in rank order)
    gaps: tuple      # p_1, ..., p_n
    quot: tuple      # the partition
    std: tuple       # (r-1) * quot


def _beta(si, sj, i, j):
    if (si, sj) == (1, 1):
        return 1 if i > j else 0
    if (si, sj) == (-1, -1):
        return 1 if i < j else 0
    if (si, sj) == (-1, 1):
        return 1
    return 0


def quotient_data(lam, r):
    lam = as_weight(lam)
    if r - 1 < 1:
        raise PreconditionError("r - 1 must be at least 1")
    n = lam.n
    idx = [p + 1 for p in lam.rank_order] + [n + 1]
    vals = list(lam) + [0]
    sig = list(lam.sigma) + [1]
    gaps = []
    for m in range(n):
        i, j = idx[m], idx[m + 1]
        beta = _beta(sig[i - 1], sig[j - 1], i, j)
        gaps.append((abs(vals[i - 1]) - abs(vals[j - 1]) - beta) // (r - 1))
    quot = tuple(sum(gaps[m:]) for m in range(n))
    return QuotientData(tuple(idx[:n]), tuple(gaps), quot, tuple((r - 1) * x for x in quot))


def quotient_r(lam, r):
    """The ``(r-1)``-quotient partition and the standard dominant weight ``(r-1) * quot``."""
    data = quotient_data(lam, r)
    return data.quot, Weight(data.std)


def fiber_map(lam, r):
    """Representative with zero quotient and the same specialized eigenvalue."""
    lam = as_weight(lam)
    data = quotient_data(lam, r)
    out = list(lam)
    for m, i in enumerate(data.indices):
        out[i - 1] = lam[i - 1] - _sgn(lam[i - 1]) * (r - 1) * sum(data.gaps[m:])
    return Weight(out)


def box(n, bound):
    """All weights with entries in ``[-bound, bound]``."""
    return [Weight(v) for v in product(range(-bound, bound + 1), repeat=n)]


def dominance_geq(mu, nu):
    """Dominance order on partitions of possibly different size (coroot cone test)."""
    return coroot_cone([a - b for a, b in zip(mu, nu)])
