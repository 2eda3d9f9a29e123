"""Standard and semi-standard parabolic combinatorics.

A standard parabolic subgroup is identified with the subset ``I`` of
simple-root indices it contains; the Borel is ``()`` and the full group is
``(0, ..., n-1)``.  A semi-standard parabolic is a pair ``(I, w)`` with ``w``
the minimal-length representative of a right coset of the standard Weyl
subgroup ``W_I``: it is the standard one conjugated by ``w``.

The ambient space splits as ``a_B = a_B^P + a_P`` where ``a_B^P`` is spanned
by the simple coroots in ``I`` and ``a_P`` is the common kernel of those
simple roots; :func:`project_aP` computes the two components.  The relative
root/weight families :func:`delta_PQ` and :func:`hat_delta_PQ` are returned
as covectors on all of ``a_B`` so callers can pair them against anything
without tracking which subspace they came from.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .linalg import (
    identity_matrix,
    in_integer_span,
    lcm_den,
    mat_inverse,
    matmul,
    scaled_int_vec,
    solve,
    vecmat,
    vsub,
)
from .rootdata import RootDatum, WeylElement


def enumerate_standard(datum: RootDatum):
    """All standard parabolic subsets, ordered by size then lexicographically.

    >>> from trunca.rootdata import build_root_datum
    >>> enumerate_standard(build_root_datum("A2"))
    ((), (0,), (1,), (0, 1))
    """
    idx = range(datum.rank_ss)
    out = []
    for size in range(datum.rank_ss + 1):
        out.extend(combinations(idx, size))
    return tuple(out)


@dataclass(frozen=True)
class SemiStandardParabolic:
    """A semi-standard parabolic: subset of simple roots plus a coset rep.

    ``rep`` is the minimal-length representative of its coset in ``W_I \\ W``;
    the standard parabolic of the same subset has ``rep`` = identity.
    """

    subset: tuple[int, ...]
    rep: WeylElement

    def is_standard(self) -> bool:
        return self.rep.length == 0

    def __repr__(self):
        word = "".join(str(i + 1) for i in self.rep.word) or "e"
        return f"SemiStandardParabolic(subset={self.subset}, rep={word})"


def enumerate_semistandard(datum: RootDatum):
    """All semi-standard parabolics: subsets paired with minimal coset reps.

    >>> from trunca.rootdata import build_root_datum
    >>> len(enumerate_semistandard(build_root_datum("A1")))
    3
    >>> len(enumerate_semistandard(build_root_datum("A2")))
    13
    """
    weyl = datum.weyl
    out = []
    for subset in enumerate_standard(datum):
        for w in weyl.coset_min_reps(subset):
            out.append(SemiStandardParabolic(subset, w))
    return tuple(out)


def semistandard_contains(datum: RootDatum, outer: SemiStandardParabolic,
                          inner: SemiStandardParabolic) -> bool:
    """Does the semi-standard parabolic ``outer`` contain ``inner``?

    Containment of the conjugated parabolics amounts to: the inner subset
    is contained in the outer one, and the two representatives define the
    same coset of the outer Weyl subgroup.
    """
    if not set(inner.subset) <= set(outer.subset):
        return False
    return datum.weyl.min_rep(inner.rep, outer.subset) == outer.rep


def projector_to_aP(datum: RootDatum, subset):
    """Matrix of the projection of ``a_B`` onto ``a_P``, killing the span of
    the simple coroots indexed by ``subset``."""
    subset = sorted(subset)
    if not subset:
        return identity_matrix(datum.dim)
    a_sub = tuple(tuple(Fraction(datum.cartan[i][j]) for j in subset)
                  for i in subset)
    a_inv = mat_inverse(a_sub)
    # proj = Id - C . A_I^{-1} . R  with R the rows <alpha_i, .> and C the
    # columns alpha_i^vee, i in subset.
    rows_r = tuple(datum.simple_roots[i] for i in subset)
    cols_c = tuple(datum.simple_coroots[i] for i in subset)
    correction = matmul(tuple(zip(*cols_c, strict=True)), matmul(a_inv, rows_r))
    ident = identity_matrix(datum.dim)
    return tuple(tuple(ident[i][j] - correction[i][j] for j in range(datum.dim))
                 for i in range(datum.dim))


def project_aP(datum: RootDatum, v, subset):
    """Split ``v`` as (component in ``a_B^P``, component in ``a_P``).

    The first component lies in the span of the simple coroots of ``subset``
    and the second is killed by the corresponding simple roots.

    >>> from trunca.rootdata import build_root_datum
    >>> d = build_root_datum("A2")
    >>> project_aP(d, d.simple_coroots[0], (0,))
    ((Fraction(2, 1), Fraction(-1, 1)), (Fraction(0, 1), Fraction(0, 1)))
    """
    subset = sorted(subset)
    if not subset:
        return tuple(Fraction(0) for _ in v), tuple(Fraction(x) for x in v)
    a_sub = tuple(tuple(Fraction(datum.cartan[i][j]) for j in subset)
                  for i in subset)
    rhs = tuple(Fraction(v[i]) for i in subset)  # <alpha_i, v> = v_i
    x = solve(a_sub, rhs)
    v_bp = tuple(Fraction(0) for _ in v)
    for coeff, i in zip(x, subset, strict=True):
        v_bp = tuple(a + coeff * b
                     for a, b in zip(v_bp, datum.simple_coroots[i]))
    v_p = vsub(tuple(Fraction(c) for c in v), v_bp)
    return v_bp, v_p


def delta_PQ(datum: RootDatum, p_subset, q_subset):
    """Relative simple roots between nested standard parabolics.

    For each simple index j in Q but not in P (ascending), the functional
    ``alpha_j o proj_{a_P}`` as a covector on all of ``a_B``.
    """
    p_set, q_set = set(p_subset), set(q_subset)
    if not p_set <= q_set:
        raise ValueError(f"parabolic {sorted(p_set)} is not contained "
                         f"in {sorted(q_set)}")
    proj = projector_to_aP(datum, p_subset)
    return tuple(vecmat(datum.simple_roots[j], proj)
                 for j in sorted(q_set - p_set))


def relative_weight(datum: RootDatum, q_subset, j):
    """The fundamental weight of j relative to the sub-system on ``q_subset``.

    A covector pairing to delta against the simple coroots inside the subset
    and vanishing on ``a_Q`` (in particular on the center).  For the full
    subset this is the ambient fundamental weight.

    >>> from trunca.rootdata import build_root_datum
    >>> d = build_root_datum("A2")
    >>> relative_weight(d, (0,), 0)
    (Fraction(1, 2), Fraction(0, 1))
    >>> relative_weight(d, (0, 1), 0) == d.fundamental_weights[0]
    True
    """
    q = sorted(q_subset)
    if j not in q:
        raise ValueError(f"index {j} is not in the subset {q}")
    a_sub = tuple(tuple(Fraction(datum.cartan[a][b]) for b in q) for a in q)
    inv = mat_inverse(a_sub)
    row = inv[q.index(j)]
    cov = [Fraction(0)] * datum.dim
    for pos, k in enumerate(q):
        cov[k] = row[pos]
    return tuple(cov)


def hat_delta_PQ(datum: RootDatum, p_subset, q_subset):
    """Relative fundamental weights between nested standard parabolics.

    For each simple index in Q - P (ascending), the fundamental weight
    relative to Q: it kills ``a_Q`` and every simple coroot of P.
    """
    p_set, q_set = set(p_subset), set(q_subset)
    if not p_set <= q_set:
        raise ValueError(f"parabolic {sorted(p_set)} is not contained "
                         f"in {sorted(q_set)}")
    return tuple(relative_weight(datum, q_subset, j)
                 for j in sorted(q_set - p_set))


def xi_general_position(datum: RootDatum, xi, lattice=None) -> bool:
    """Is the point ``xi`` in general position for the given coweight lattice?

    True iff for every proper standard parabolic P, the ``a_P``-component of
    ``xi`` avoids (image of the lattice in ``a_P``) + ``a_G``.  The default
    lattice is spanned by the simple coroots and the central basis.

    >>> from trunca.rootdata import build_root_datum
    >>> d = build_root_datum("A1")
    >>> xi_general_position(d, (Fraction(1, 2),))  # half a coweight
    True
    >>> xi_general_position(d, (2,))  # the simple coroot itself
    False
    >>> xi_general_position(d, (0,))
    False
    """
    if lattice is None:
        lattice = tuple(datum.simple_coroots) + tuple(datum.central_basis)
    n = datum.rank_ss
    full = frozenset(range(n))
    for size in range(n):
        for subset in combinations(range(n), size):
            if frozenset(subset) == full:
                continue
            _, xi_p = project_aP(datum, xi, subset)
            gens = [project_aP(datum, b, subset)[1] for b in lattice]
            # work modulo a_G: the central coordinates span it exactly
            target = xi_p[:n]
            gens = [g[:n] for g in gens]
            scale = lcm_den([x for g in gens for x in g] + list(target))
            int_gens = [scaled_int_vec(g, scale) for g in gens]
            int_target = scaled_int_vec(target, scale)
            if in_integer_span(int_gens, int_target):
                return False
    return True
