"""Cone characteristic functions on parabolic families and their
alternating sums.

``tau`` and ``tau_hat`` are the indicator functions of the acute and obtuse
cones attached to a nested pair of standard parabolics: strict positivity
against the relative simple roots, respectively the relative fundamental
weights.  ``langlands_inversion_check`` evaluates the alternating sum over
intermediate parabolics that should telescope to a Kronecker delta, and
``gamma`` is the compactly-supported alternating-sum function whose support
``gamma_support_box`` brackets by exact grid scanning.

Everything is exact: inputs are rational vectors, indicators compare exact
rationals to zero, and grid scans run on scaled integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import ConsistencyError, WallError
from .linalg import dot, lcm_den, matvec, scaled_int_vec
from .parabolic import projector_to_aP, relative_weight
from .rootdata import RootDatum


def _norm_subset(datum: RootDatum, subset) -> tuple[int, ...]:
    out = tuple(sorted(set(subset)))
    for i in out:
        if not 0 <= i < datum.rank_ss:
            raise ValueError(f"simple-root index {i} out of range")
    return out


@dataclass(frozen=True)
class SupportBox:
    """Axis bounds, in root coordinates, bracketing the support of gamma.

    ``entries`` holds one ``(j, covector, lo, hi)`` per simple index outside
    the parabolic: the covector is ``alpha_j o proj`` and the support lies
    where every pairing falls inside ``[lo, hi]``.  ``trivial`` marks the
    full-group case (gamma is constant 1, so there is no box) and ``empty``
    the identically-zero case.
    """

    subset: tuple[int, ...]
    entries: tuple
    trivial: bool = False
    empty: bool = False

    def contains(self, h) -> bool:
        if self.trivial:
            return True
        if self.empty:
            return False
        return all(lo <= dot(cov, h) <= hi for _, cov, lo, hi in self.entries)


class TruncationContext:
    """Cached relative root/weight tables for one root datum."""

    def __init__(self, datum: RootDatum):
        self.datum = datum
        self.full = tuple(range(datum.rank_ss))
        self._proj = {}
        self._proj_cov = {}
        self._rel_weight = {}

    # -- cached geometry ---------------------------------------------------

    def projector(self, subset):
        subset = _norm_subset(self.datum, subset)
        if subset not in self._proj:
            self._proj[subset] = projector_to_aP(self.datum, subset)
        return self._proj[subset]

    def proj_covector(self, subset, j):
        """alpha_j composed with the projection onto a_P, as a covector."""
        subset = _norm_subset(self.datum, subset)
        key = (subset, j)
        if key not in self._proj_cov:
            proj = self.projector(subset)
            cov = tuple(sum(self.datum.simple_roots[j][r] * proj[r][c]
                            for r in range(self.datum.dim))
                        for c in range(self.datum.dim))
            self._proj_cov[key] = cov
        return self._proj_cov[key]

    def delta(self, p_subset, q_subset):
        """(j, alpha_j o proj_P) for j in Q - P, ascending."""
        p, q = _norm_subset(self.datum, p_subset), _norm_subset(self.datum, q_subset)
        if not set(p) <= set(q):
            raise ValueError(f"parabolic {p} is not contained in {q}")
        return tuple((j, self.proj_covector(p, j)) for j in q if j not in p)

    def rel_weight(self, q_subset, j):
        """Fundamental weight of j relative to the sub-system on Q."""
        q_subset = _norm_subset(self.datum, q_subset)
        key = (q_subset, j)
        if key not in self._rel_weight:
            self._rel_weight[key] = relative_weight(self.datum, q_subset, j)
        return self._rel_weight[key]

    def hat_delta(self, p_subset, q_subset):
        """(j, Q-relative fundamental weight of j) for j in Q - P, ascending."""
        p, q = _norm_subset(self.datum, p_subset), _norm_subset(self.datum, q_subset)
        if not set(p) <= set(q):
            raise ValueError(f"parabolic {p} is not contained in {q}")
        return tuple((j, self.rel_weight(q, j)) for j in q if j not in p)

    # -- cone indicators ----------------------------------------------------

    def tau(self, p_subset, q_subset, h) -> bool:
        """Acute-cone indicator: all relative simple roots strictly positive
        on h.  Exact; points on walls simply fail the strict inequality."""
        return all(dot(cov, h) > 0 for _, cov in self.delta(p_subset, q_subset))

    def tau_hat(self, p_subset, q_subset, h) -> bool:
        """Obtuse-cone indicator: all relative fundamental weights strictly
        positive on h.

        >>> from trunca.rootdata import build_root_datum
        >>> ctx = TruncationContext(build_root_datum("A2"))
        >>> h = tuple(a - b for a, b in zip(ctx.datum.simple_coroots[0],
        ...                                 ctx.datum.simple_coroots[1]))
        >>> ctx.tau_hat((), (0, 1), h)
        False
        """
        return all(dot(cov, h) > 0
                   for _, cov in self.hat_delta(p_subset, q_subset))

    # -- alternating sums ----------------------------------------------------

    def langlands_inversion_check(self, p_subset, q_subset, h) -> bool:
        """Does the alternating tau / tau-hat sum over intermediate
        parabolics equal the Kronecker delta of P and Q at h?

        Raises :class:`WallError` when h lies on a wall of any functional in
        the relevant family (the answer would be convention-dependent there).
        """
        p = _norm_subset(self.datum, p_subset)
        q = _norm_subset(self.datum, q_subset)
        if not set(p) <= set(q):
            raise ValueError(f"parabolic {p} is not contained in {q}")
        between = [j for j in q if j not in p]
        for j in between:
            if dot(self.proj_covector(p, j), h) == 0:
                raise WallError(f"h lies on the wall of relative root {j}")
            if dot(self.rel_weight(q, j), h) == 0:
                raise WallError(f"h lies on the wall of relative weight {j}")
        total = 0
        for size in range(len(between) + 1):
            for extra in combinations(between, size):
                r = tuple(sorted(p + extra))
                term = (self.tau(p, r, h) and self.tau_hat(r, q, h))
                total += (-1) ** size * term
        return total == (1 if p == q else 0)

    def gamma(self, p_subset, h, x) -> int:
        """The alternating-sum function of the pair (h, x) at the parabolic.

        h is first projected onto a_P; x is taken as given.  Defined for
        every rational input (walls contribute through the strict
        inequalities; no errors).

        >>> from trunca.rootdata import build_root_datum
        >>> ctx = TruncationContext(build_root_datum("A1"))
        >>> [ctx.gamma((), (Fraction(t, 2),), (2,)) for t in range(-1, 6)]
        [0, 0, 1, 1, 1, 1, 0]
        """
        p = _norm_subset(self.datum, p_subset)
        h_p = matvec(self.projector(p), h)
        h_minus_x = tuple(a - b for a, b in zip(h_p, x, strict=True))
        n = self.datum.rank_ss
        rest = [j for j in range(n) if j not in p]
        total = 0
        for size in range(len(rest) + 1):
            for extra in combinations(rest, size):
                q = tuple(sorted(p + extra))
                sign = (-1) ** (n - len(q))
                if self.tau(p, q, h_p) and self.tau_hat(q, self.full, h_minus_x):
                    total += sign
        return total

    # -- support bracketing ---------------------------------------------------

    def gamma_support_box(self, p_subset, x, max_radius: int = 4096) -> SupportBox:
        """Bracket the support of ``gamma(P, ., x)`` by exact grid scanning.

        The support lives in the root coordinates t_j = <alpha_j o proj, h>;
        the scan walks outward on a denominator-refined half-offset grid
        until shells come back empty twice, then certifies by re-scanning
        out to twice the found radius.  Bounds carry a one-step margin.
        """
        p = _norm_subset(self.datum, p_subset)
        n = self.datum.rank_ss
        rest = [j for j in range(n) if j not in p]
        m = len(rest)
        if m == 0:
            return SupportBox(p, (), trivial=True)

        proj = self.projector(p)
        axes = [matvec(proj, self.datum.fundamental_coweights[j]) for j in rest]
        # weight pairings and offsets in t-coordinates
        w_rows = [[dot(self.datum.fundamental_weights[j], a) for a in axes]
                  for j in rest]
        consts = [dot(self.datum.fundamental_weights[j], x) for j in rest]
        den = 2 * lcm_den([v for row in w_rows for v in row] + consts + [1])
        scale = lcm_den([v for row in w_rows for v in row] + [1])
        w_int = [scaled_int_vec(row, scale) for row in w_rows]
        c_int = list(scaled_int_vec(consts, scale * den))

        subsets = []
        for size in range(m + 1):
            for extra in combinations(range(m), size):
                q_positions = set(extra)
                sign = (-1) ** (m - size)
                subsets.append((q_positions, sign))

        def gamma_at(nums):
            # nums are the t-coordinates times den (odd integers off walls)
            total = 0
            for q_positions, sign in subsets:
                ok = True
                for pos in q_positions:
                    if nums[pos] <= 0:
                        ok = False
                        break
                if not ok:
                    continue
                for pos in range(m):
                    if pos in q_positions:
                        continue
                    acc = 0
                    row = w_int[pos]
                    for k in range(m):
                        acc += row[k] * nums[k]
                    if acc <= c_int[pos]:
                        ok = False
                        break
                if ok:
                    total += sign
            return total

        def shell_points(level):
            # sup-norm shell: odd numerators 2k+1 with max |2k+1| = 2*level-1
            for point in _shell_iter(m, level - 1):
                yield tuple(2 * k + 1 for k in point)

        lo = [None] * m
        hi = [None] * m
        found_any = False

        def absorb(nums):
            nonlocal found_any
            found_any = True
            for pos in range(m):
                t = Fraction(nums[pos], den)
                if lo[pos] is None or t < lo[pos]:
                    lo[pos] = t
                if hi[pos] is None or t > hi[pos]:
                    hi[pos] = t

        r0 = 1
        for c in consts:
            r0 = max(r0, 1 + int(abs(c)))
        r0 = min(r0 * den, max_radius)

        level = 0
        empty_streak = 0
        last_hit = 0
        while True:
            level += 1
            if level > max_radius:
                raise ConsistencyError("support scan exceeded the radius cap")
            hit = False
            for nums in shell_points(level):
                if gamma_at(nums) != 0:
                    absorb(nums)
                    hit = True
            if hit:
                last_hit = level
                empty_streak = 0
            else:
                empty_streak += 1
            if level >= r0 and empty_streak >= 2:
                # certification: scan out to twice the last hit (or a fixed
                # floor when nothing was found)
                target = max(2 * last_hit, level + 2)
                certified = True
                for lvl in range(level + 1, target + 1):
                    for nums in shell_points(lvl):
                        if gamma_at(nums) != 0:
                            absorb(nums)
                            last_hit = lvl
                            certified = False
                if certified:
                    break
                level = target
                empty_streak = 0

        if not found_any:
            return SupportBox(p, (), empty=True)
        step = Fraction(1, den)
        entries = tuple(
            (j, self.proj_covector(p, j), lo[pos] - step, hi[pos] + step)
            for pos, j in enumerate(rest))
        return SupportBox(p, entries)


def _shell_iter(m, lim):
    """Integer points k in [-lim-1, lim]^m whose offsets 2k+1 have sup-norm
    exactly 2*lim+1 (the outermost half-offset shell)."""
    seen = set()
    for axis in range(m):
        for side in (lim, -lim - 1):
            for rest in _box_iter(m - 1, lim):
                point = rest[:axis] + (side,) + rest[axis:]
                if point not in seen:
                    seen.add(point)
                    yield point


def _box_iter(m, lim):
    if m == 0:
        yield ()
        return
    for k in range(-lim - 1, lim + 1):
        for rest in _box_iter(m - 1, lim):
            yield (k,) + rest
