"""Root data in coweight coordinates, Weyl groups, and diagram folding.

A root datum here is a finite (possibly non-reduced) root system together
with a central torus direction.  The ambient vector space ``a_B`` (real
points of the maximal split torus's cocharacter space) is coordinatized by

    (fundamental coweights of the semisimple part) + (a basis of the center),

which has pleasant consequences used throughout the package:

* the i-th simple root is the i-th coordinate functional,
* the j-th simple coroot is the j-th column of the Cartan matrix,
* simple reflections act by integer matrices, so every Weyl element is an
  integer matrix and sign tests in hot loops run on machine ints.

The Cartan convention is ``cartan[i][j] = <alpha_i, alpha_j_coroot>``.

Roots are stored as covectors (their coordinates are exactly their
coefficients on the simple roots, padded with zeros on the central block),
coroots as vectors.  Positivity of a root is positivity of its coordinate
tuple.  Non-reduced systems of type BC arise from folding and carry a
``reduced`` flag per root; nothing else in the package assumes reducedness.

>>> d = build_root_datum("A2")
>>> len(d.roots), d.n_positive
(6, 3)
>>> d.weyl.order
6
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm

from .errors import CartanMatrixError, ConsistencyError, FoldingError
from .linalg import (
    Vec,
    basis_vec,
    dot,
    frac,
    identity_matrix,
    int_matrix,
    is_positive_definite,
    mat_inverse,
    matmul,
    matvec,
    vec,
    vecmat,
    zero_vec,
)

_TYPE_RE = re.compile(r"^([A-G])(\d+)$")


def _chain(n, a=-1, b=-1):
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = 2
        if i + 1 < n:
            rows[i][i + 1] = a
            rows[i + 1][i] = b
    return rows


def _cartan_rows(letter: str, n: int):
    if letter == "A" and n >= 1:
        return _chain(n)
    if letter == "B" and n >= 2:
        rows = _chain(n)
        rows[n - 2][n - 1] = -2  # last simple root short
        return rows
    if letter == "C" and n >= 2:
        rows = _chain(n)
        rows[n - 1][n - 2] = -2  # last simple root long
        return rows
    if letter == "D" and n >= 3:
        rows = _chain(n - 1) if n > 1 else []
        rows = [row + [0] for row in rows]
        rows.append([0] * n)
        rows[n - 1][n - 1] = 2
        # the fork: last node attaches to node n-3 (0-based)
        rows[n - 3][n - 1] = -1
        rows[n - 1][n - 3] = -1
        rows[n - 2][n - 1] = 0
        rows[n - 1][n - 2] = 0
        return rows
    if letter == "G" and n == 2:
        return [[2, -1], [-3, 2]]
    raise CartanMatrixError(f"unsupported Cartan type {letter}{n}; "
                            "pass an explicit Cartan matrix instead")


def parse_cartan(kind):
    """Turn a type label ("A2", "B3", "A1xA1", ...) or an explicit square
    integer matrix into Cartan-matrix rows (a product label becomes a block
    diagonal matrix, one block per factor).

    >>> parse_cartan("A1xA1")
    [[2, 0], [0, 2]]
    """
    if isinstance(kind, str):
        blocks = []
        for part in re.split(r"[x×]", kind.strip()):
            m = _TYPE_RE.match(part.strip())
            if not m:
                raise CartanMatrixError(f"cannot parse Cartan type {part!r}")
            blocks.append(_cartan_rows(m.group(1), int(m.group(2))))
        n = sum(len(b) for b in blocks)
        rows = [[0] * n for _ in range(n)]
        off = 0
        for b in blocks:
            for i, row in enumerate(b):
                for j, x in enumerate(row):
                    rows[off + i][off + j] = x
            off += len(b)
        return rows
    rows = [list(r) for r in kind]
    if any(len(r) != len(rows) for r in rows):
        raise CartanMatrixError("Cartan matrix must be square")
    if any(not isinstance(x, int) for r in rows for x in r):
        raise CartanMatrixError("Cartan matrix entries must be integers")
    return rows


def _validate_gcm(rows):
    n = len(rows)
    for i in range(n):
        if rows[i][i] != 2:
            raise CartanMatrixError(f"diagonal entry ({i},{i}) is {rows[i][i]}, not 2")
        for j in range(n):
            if i != j:
                if rows[i][j] > 0:
                    raise CartanMatrixError(
                        f"off-diagonal entry ({i},{j}) = {rows[i][j]} is positive")
                if (rows[i][j] == 0) != (rows[j][i] == 0):
                    raise CartanMatrixError(
                        f"entries ({i},{j}) and ({j},{i}) disagree about adjacency")


def _symmetrizer(rows):
    """Rational d_j > 0 with rows[i][j]*d[j] == rows[j][i]*d[i], normalized so
    the minimum over each connected component is 1 (short roots have squared
    length 2 per simple factor).  Raises if not symmetrizable or not finite."""
    n = len(rows)
    d = [None] * n
    components = []
    for start in range(n):
        if d[start] is not None:
            continue
        comp = [start]
        d[start] = Fraction(1)
        queue = [start]
        while queue:
            i = queue.pop()
            for j in range(n):
                if rows[i][j] != 0 and i != j:
                    val = d[i] * rows[j][i] / rows[i][j]
                    if d[j] is None:
                        d[j] = val
                        comp.append(j)
                        queue.append(j)
                    elif d[j] != val:
                        raise CartanMatrixError("matrix is not symmetrizable")
        components.append(frozenset(comp))
    for i in range(n):
        for j in range(n):
            if rows[i][j] * d[j] != rows[j][i] * d[i]:
                raise CartanMatrixError("matrix is not symmetrizable")
    for comp in components:
        m = min(d[i] for i in comp)
        for i in comp:
            d[i] /= m
    sym = tuple(tuple(frac(rows[i][j]) * d[j] for j in range(n)) for i in range(n))
    if n and not is_positive_definite(sym):
        raise CartanMatrixError(
            "matrix is not of finite type (symmetrization is not positive definite)")
    return tuple(d), sym, tuple(components)


@dataclass(frozen=True)
class Root:
    """One root: covector coordinates, coroot vector, and bookkeeping."""

    index: int
    coords: tuple[int, ...]       # coefficients on the simple roots
    cov: tuple[int, ...]          # ambient covector (coords padded by zeros)
    coroot: tuple[int, ...]       # ambient vector
    positive: bool
    reduced: bool


def _close_roots(cartan):
    """Simultaneous reflection closure on (root, coroot) pairs.

    Returns a dict {coords: coroot coords} where the coroot is written on
    the simple-coroot columns' ambient coordinates (length = rank_ss).
    """
    n = len(cartan)
    columns = [tuple(cartan[i][j] for i in range(n)) for j in range(n)]
    seen = {}
    pend = []
    for i in range(n):
        coords = tuple(1 if k == i else 0 for k in range(n))
        seen[coords] = columns[i]
        pend.append(coords)
    while pend:
        coords = pend.pop()
        coroot = seen[coords]
        for j in range(n):
            pair = sum(coords[i] * cartan[i][j] for i in range(n))
            new_coords = tuple(
                c - (pair if k == j else 0) for k, c in enumerate(coords))
            if new_coords not in seen:
                new_coroot = tuple(
                    cv - coroot[j] * columns[j][k] for k, cv in enumerate(coroot))
                seen[new_coords] = new_coroot
                pend.append(new_coords)
            if len(seen) > 100000:
                raise CartanMatrixError("root closure exploded; not finite type?")
    return seen


class RootDatum:
    """A finite root datum in coweight + central coordinates."""

    def __init__(self, kind, rank_central: int = 0, label: str | None = None,
                 _root_pairs=None):
        rows = parse_cartan(kind)
        _validate_gcm(rows)
        self.cartan = tuple(tuple(r) for r in rows)
        self.rank_ss = len(rows)
        if rank_central < 0:
            raise ValueError("rank_central must be >= 0")
        self.rank_central = rank_central
        self.dim = self.rank_ss + rank_central
        self.label = label if label is not None else (
            kind if isinstance(kind, str) else f"cartan{self.rank_ss}")
        self.symmetrizer, self.gram, self.components = _symmetrizer(rows)

        n, dim = self.rank_ss, self.dim
        self.simple_roots = tuple(
            tuple(1 if k == i else 0 for k in range(dim)) for i in range(n))
        self.simple_coroots = tuple(
            tuple(self.cartan[i][j] if i < n else 0 for i in range(dim))
            for j in range(n))
        inv = mat_inverse(self.cartan) if n else ()
        self.fundamental_weights = tuple(
            tuple(inv[i][j] if j < n else Fraction(0) for j in range(dim))
            for i in range(n))
        self.fundamental_coweights = tuple(basis_vec(dim, i) for i in range(n))
        self.central_basis = tuple(basis_vec(dim, n + k) for k in range(rank_central))

        pairs = _root_pairs if _root_pairs is not None else _close_roots(self.cartan)
        self._build_roots(pairs)

    def _build_roots(self, pairs):
        n, dim = self.rank_ss, self.dim
        coords_set = set(pairs)
        positives = sorted(
            (c for c in coords_set if all(x >= 0 for x in c) and any(c)),
            key=lambda c: (sum(c), c))
        if 2 * len(positives) != len(coords_set):
            raise ConsistencyError("root set is not symmetric under negation")
        roots = []
        for k, coords in enumerate(positives):
            half = tuple(x // 2 for x in coords)
            reduced = not (all(x % 2 == 0 for x in coords) and half in coords_set)
            cov = coords + (0,) * (dim - n)
            coroot = pairs[coords] + (0,) * (dim - n)
            roots.append(Root(k, coords, cov, coroot, True, reduced))
        n_pos = len(positives)
        for k, coords in enumerate(positives):
            neg = tuple(-x for x in coords)
            if neg not in pairs:
                raise ConsistencyError("negative of a root is missing")
            cov = neg + (0,) * (dim - n)
            coroot = tuple(-x for x in pairs[coords]) + (0,) * (dim - n)
            if pairs[neg] + (0,) * (dim - n) != coroot:
                raise ConsistencyError("coroot of the negative root is inconsistent")
            roots.append(Root(n_pos + k, neg, cov, coroot, False, roots[k].reduced))
        self.roots = tuple(roots)
        self.n_positive = n_pos
        self.root_index = {r.coords: r.index for r in roots}
        self.simple_root_positions = tuple(
            self.root_index[tuple(1 if k == i else 0 for k in range(n))]
            for i in range(n))

    # -- basic queries ----------------------------------------------------

    def positive_roots(self, reduced_only: bool = False):
        return tuple(r for r in self.roots
                     if r.positive and (r.reduced or not reduced_only))

    def root_inner(self, a: Root, b: Root) -> Fraction:
        """(a, b) under the Weyl-invariant form (short simple roots have
        squared length 2 in each component)."""
        total = Fraction(0)
        for i, x in enumerate(a.coords):
            if x:
                for j, y in enumerate(b.coords):
                    if y:
                        total += x * y * self.gram[i][j]
        return total

    def pairing(self, cov, v) -> Fraction:
        """<covector, vector> — the canonical pairing in these coordinates."""
        return dot(cov, v)

    def describe(self) -> dict:
        return {
            "label": self.label,
            "cartan": [list(r) for r in self.cartan],
            "rank_ss": self.rank_ss,
            "rank_central": self.rank_central,
            "num_roots": len(self.roots),
            "num_positive": self.n_positive,
            "weyl_order": self.weyl.order,
        }

    def __repr__(self):
        return (f"RootDatum({self.label!r}, rank_ss={self.rank_ss}, "
                f"rank_central={self.rank_central}, roots={len(self.roots)})")

    @cached_property
    def weyl(self) -> "WeylGroup":
        return generate_weyl(self)


def build_root_datum(kind, rank_central: int = 0, label: str | None = None) -> RootDatum:
    """Build a root datum from a type label or an explicit Cartan matrix.

    Rejects anything that is not a finite-type generalized Cartan matrix,
    with a diagnostic naming the failed axiom.

    >>> build_root_datum("G2").n_positive
    6
    >>> build_root_datum([[2, -2], [-2, 2]])
    Traceback (most recent call last):
        ...
    trunca.errors.CartanMatrixError: matrix is not of finite type (symmetrization is not positive definite)
    """
    return RootDatum(kind, rank_central, label)


def pairing(cov: Vec, v: Vec) -> Fraction:
    """Canonical pairing between a covector and a vector.

    Both live in coordinates of the same ambient space, so this is a plain
    dot product with a dimension check.

    >>> pairing((1, 0), (3, 5))
    Fraction(3, 1)
    """
    if len(cov) != len(v):
        raise ValueError(f"dimension mismatch: {len(cov)} vs {len(v)}")
    return dot(cov, v)


class WeylElement:
    """A Weyl group element: integer matrix plus its reduced word of record.

    The stored word is the lexicographically smallest reduced word.  Equality
    and hashing go through the matrix, so elements from the same datum are
    safe dictionary keys.
    """

    __slots__ = ("index", "word", "matrix", "inv_matrix", "root_perm")

    def __init__(self, index, word, matrix, inv_matrix):
        self.index = index
        self.word = word
        self.matrix = matrix
        self.inv_matrix = inv_matrix
        self.root_perm = None  # filled in by the group constructor

    @property
    def length(self) -> int:
        return len(self.word)

    def __eq__(self, other):
        if not isinstance(other, WeylElement):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"WeylElement(word={''.join(str(i + 1) for i in self.word) or 'e'})"


class WeylGroup:
    """The full Weyl group of a datum, as integer matrices with lookup tables."""

    def __init__(self, datum: RootDatum, elements, by_key):
        self.datum = datum
        self.elements = elements
        self.by_key = by_key
        self.order = len(elements)
        self.identity = elements[0]
        n = datum.rank_ss
        self.simple = tuple(self.by_key[_simple_matrix(datum, i)] for i in range(n))
        self._subgroups = {}

    def mult(self, a: WeylElement, b: WeylElement) -> WeylElement:
        return self.by_key[int_matrix(matmul(a.matrix, b.matrix))]

    def inv(self, a: WeylElement) -> WeylElement:
        return self.by_key[a.inv_matrix]

    def act(self, w: WeylElement, v):
        """w applied to a vector of a_B."""
        return matvec(w.matrix, v)

    def act_covector(self, w: WeylElement, cov):
        """w applied to a covector (composition with w^{-1})."""
        return vecmat(cov, w.inv_matrix)

    def root_image(self, w: WeylElement, root_index: int) -> int:
        return w.root_perm[root_index]

    def sends_positive(self, w: WeylElement, root_index: int) -> bool:
        return w.root_perm[root_index] < self.datum.n_positive

    def inversions(self, w: WeylElement) -> int:
        n_pos = self.datum.n_positive
        return sum(1 for k in range(n_pos)
                   if self.datum.roots[k].reduced and w.root_perm[k] >= n_pos)

    # -- coset machinery ---------------------------------------------------

    def is_min_rep(self, w: WeylElement, subset) -> bool:
        """Is w the minimal-length element of W_subset * w?  Equivalent to
        w^{-1}(alpha_i) > 0 for every i in subset."""
        winv = self.inv(w)
        for i in subset:
            pos = self.datum.simple_root_positions[i]
            if winv.root_perm[pos] >= self.datum.n_positive:
                return False
        return True

    def min_rep(self, w: WeylElement, subset) -> WeylElement:
        """The unique minimal-length element of the coset W_subset * w."""
        subset = sorted(subset)
        while True:
            winv = self.inv(w)
            for i in subset:
                pos = self.datum.simple_root_positions[i]
                if winv.root_perm[pos] >= self.datum.n_positive:
                    w = self.mult(self.simple[i], w)
                    break
            else:
                return w

    def coset_min_reps(self, subset):
        """Minimal-length representatives of W_subset \\ W, in element order."""
        return tuple(w for w in self.elements if self.is_min_rep(w, subset))

    def subgroup(self, subset):
        """Elements of the standard parabolic subgroup W_subset."""
        key = frozenset(subset)
        if key not in self._subgroups:
            members = {self.identity.index}
            queue = [self.identity]
            while queue:
                w = queue.pop()
                for i in key:
                    nxt = self.mult(w, self.simple[i])
                    if nxt.index not in members:
                        members.add(nxt.index)
                        queue.append(nxt)
            self._subgroups[key] = tuple(
                self.elements[i] for i in sorted(members))
        return self._subgroups[key]


def _simple_matrix(datum: RootDatum, i: int):
    """Matrix of s_i: v -> v - <alpha_i, v> alpha_i^vee (integer entries)."""
    dim = datum.dim
    coroot = datum.simple_coroots[i]
    rows = []
    for r in range(dim):
        row = [1 if r == c else 0 for c in range(dim)]
        row[i] -= coroot[r]
        rows.append(tuple(row))
    return tuple(rows)


def generate_weyl(datum: RootDatum, max_order: int = 1_000_000) -> WeylGroup:
    """Generate the full Weyl group by breadth-first closure.

    The BFS visits children in ascending generator order, so the recorded
    word of each element is its lexicographically smallest reduced word.
    The number of inversions is checked against the word length for every
    element (a cheap full-group sanity pass).
    """
    n = datum.rank_ss
    gens = [_simple_matrix(datum, i) for i in range(n)]
    ident = tuple(tuple(int(x) for x in row) for row in identity_matrix(datum.dim))
    first = WeylElement(0, (), ident, ident)
    elements = [first]
    by_key = {ident: first}
    frontier = [first]
    while frontier:
        new_frontier = []
        for elt in frontier:
            for i in range(n):
                mat = int_matrix(matmul(elt.matrix, gens[i]))
                if mat not in by_key:
                    inv = int_matrix(matmul(gens[i], elt.inv_matrix))
                    child = WeylElement(len(elements), elt.word + (i,), mat, inv)
                    elements.append(child)
                    by_key[mat] = child
                    new_frontier.append(child)
                    if len(elements) > max_order:
                        raise CartanMatrixError("Weyl group too large; gave up")
        frontier = new_frontier

    # root permutation tables: w(beta) = beta o w^{-1}
    for elt in elements:
        perm = []
        for r in datum.roots:
            img = vecmat(r.cov, elt.inv_matrix)
            key = tuple(int(x) for x in img[:n])
            perm.append(datum.root_index[key])
        elt.root_perm = tuple(perm)

    group = WeylGroup(datum, tuple(elements), by_key)
    n_pos = datum.n_positive
    for elt in elements:
        invs = sum(1 for k in range(n_pos)
                   if datum.roots[k].reduced and elt.root_perm[k] >= n_pos)
        if invs != elt.length:
            raise ConsistencyError(
                f"word length {elt.length} != inversion count {invs} for {elt!r}")
    return group


# --- folding ---------------------------------------------------------------


class Folding:
    """A diagram automorphism and the folded (restricted) root datum.

    ``big`` is the original datum, ``small`` the folded one, living in its
    own coweight + central coordinates.  ``embed`` maps the folded space
    isomorphically onto the sigma-fixed subspace of the big one;
    ``project_vector`` is the left inverse given by averaging over the
    automorphism orbit and re-reading coordinates.  ``c`` holds, per folded
    root, the ratio of squared lengths (restricted over original); these lie
    in (0, 1] and scale coroots under restriction.
    """

    def __init__(self, big, perm, small, orbits, c_by_index, embed, sigma_matrix):
        self.big = big
        self.perm = perm
        self.small = small
        self.orbits = orbits
        self.c = c_by_index
        self.embed = embed
        self.sigma_matrix = sigma_matrix
        d = 1
        for orbit in orbits:
            d = lcm(d, len(orbit))
        self.order = d

    def sigma_vector(self, v):
        return matvec(self.sigma_matrix, v)

    def average_vector(self, v):
        """The sigma-orbit average of a vector of the big space."""
        out = vec(v)
        cur = vec(v)
        for _ in range(self.order - 1):
            cur = self.sigma_vector(cur)
            out = tuple(a + b for a, b in zip(out, cur))
        return tuple(a / self.order for a in out)

    def project_vector(self, v):
        """Orbit-average v, then read it in folded coordinates."""
        avg = self.average_vector(v)
        return self._fixed_to_small(avg)

    def _fixed_to_small(self, v):
        coords = []
        for orbit in self.orbits:
            rep = min(orbit)
            for i in orbit:
                if v[i] != v[rep]:
                    raise ConsistencyError("vector is not sigma-fixed")
            coords.append(v[rep])
        coords.extend(v[self.big.rank_ss:])
        return tuple(coords)

    def embed_vector(self, v_small):
        return matvec(self.embed, v_small)

    def restrict_covector(self, cov):
        """Pull a big covector back along the embedding (restriction to the
        fixed subspace, in folded coordinates)."""
        return vecmat(cov, self.embed)

    @cached_property
    def weyl_correspondence(self):
        """dict: folded Weyl element index -> sigma-fixed big Weyl element.

        The restriction map from the sigma-centralizer onto the folded Weyl
        group is bijective; a failure here is a ConsistencyError.
        """
        bigw = self.big.weyl
        smallw = self.small.weyl
        sig = int_matrix(self.sigma_matrix)
        sig_inv = int_matrix(mat_inverse(self.sigma_matrix))
        match = {}
        proj = self._proj_rows()
        for w in bigw.elements:
            if int_matrix(matmul(sig, matmul(w.matrix, sig_inv))) != w.matrix:
                continue
            induced = matmul(proj, matmul(w.matrix, self.embed))
            try:
                key = int_matrix(induced)
            except ValueError as exc:
                raise ConsistencyError(
                    "sigma-fixed element restricts non-integrally") from exc
            if key not in smallw.by_key:
                raise ConsistencyError("sigma-fixed element does not restrict "
                                       "to a folded Weyl element")
            small = smallw.by_key[key]
            if small.index in match:
                raise ConsistencyError("restriction of the sigma-centralizer "
                                       "is not injective")
            match[small.index] = w
        if len(match) != smallw.order:
            raise ConsistencyError(
                f"sigma-centralizer has {len(match)} elements, folded Weyl "
                f"group has {smallw.order}")
        return match

    def _proj_rows(self):
        rows = []
        for orbit in self.orbits:
            rep = min(orbit)
            rows.append(tuple(
                Fraction(1 if i == rep else 0) for i in range(self.big.dim)))
        for k in range(self.big.rank_central):
            rows.append(tuple(
                Fraction(1 if i == self.big.rank_ss + k else 0)
                for i in range(self.big.dim)))
        return tuple(rows)


def fold(datum: RootDatum, perm, order: int | None = None) -> Folding:
    """Fold a datum along a Cartan-matrix-preserving permutation of the
    simple roots.

    Restricted roots are the restrictions of all the original roots to the
    fixed subspace (non-reduced BC systems do occur); restricted coroots are
    orbit averages scaled by 1/c.  Everything is asserted integral in the
    folded coordinates and cross-checked against every preimage.

    ``order``, if given, must be a multiple of the permutation's actual
    order (averaging over ``order`` powers of sigma then agrees with the
    orbit average).

    >>> f = fold(build_root_datum("A3"), (2, 1, 0))
    >>> [list(r) for r in f.small.cartan]
    [[2, -1], [-2, 2]]
    >>> sorted(set(f.c.values()))
    [Fraction(1, 2), Fraction(1, 1)]
    """
    n = datum.rank_ss
    perm = tuple(perm)
    if sorted(perm) != list(range(n)):
        raise FoldingError("not a permutation of the simple roots")
    if order is not None:
        if order < 1:
            raise FoldingError("order must be a positive integer")
        image = list(range(n))
        for _ in range(order):
            image = [perm[i] for i in image]
        if image != list(range(n)):
            raise FoldingError(f"permutation to the power {order} is not the "
                               "identity")
    for i in range(n):
        for j in range(n):
            if datum.cartan[perm[i]][perm[j]] != datum.cartan[i][j]:
                raise FoldingError(
                    f"permutation does not preserve the Cartan matrix at ({i},{j})")

    # orbits, sorted by smallest member
    seen = set()
    orbits = []
    for i in range(n):
        if i in seen:
            continue
        orbit = [i]
        j = perm[i]
        while j != i:
            orbit.append(j)
            j = perm[j]
        seen.update(orbit)
        orbits.append(tuple(sorted(orbit)))
    orbits.sort(key=min)

    # sigma as a matrix on the big space (coweight coords permute, center fixed)
    dim = datum.dim
    sigma = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(n):
        sigma[perm[i]][i] = Fraction(1)
    for k in range(datum.rank_central):
        sigma[n + k][n + k] = Fraction(1)
    sigma = tuple(tuple(row) for row in sigma)

    # inner products of orbit-averaged simple roots, via the big Gram matrix
    def avg_inner(o1, o2):
        total = Fraction(0)
        for i in o1:
            for j in o2:
                total += datum.gram[i][j]
        return total / (len(o1) * len(o2))

    k = len(orbits)
    folded_cartan = []
    for a in range(k):
        row = []
        for b in range(k):
            val = 2 * avg_inner(orbits[a], orbits[b]) / avg_inner(orbits[b], orbits[b])
            if val.denominator != 1:
                raise ConsistencyError(f"folded Cartan entry ({a},{b}) = {val} "
                                       "is not an integer")
            row.append(val.numerator)
        folded_cartan.append(row)

    # restrict every root; remember one preimage per restricted root and
    # check all preimages agree on c and on the folded coroot
    orbit_of = {}
    for o_idx, orbit in enumerate(orbits):
        for i in orbit:
            orbit_of[i] = o_idx

    def sigma_perm_power(coords, times):
        out = list(coords)
        for _ in range(times):
            nxt = [0] * n
            for i in range(n):
                nxt[perm[i]] = out[i]
            out = nxt
        return tuple(out)

    order = 1
    for orbit in orbits:
        order = lcm(order, len(orbit))

    def restrict_coords(coords):
        folded = [0] * k
        for i, x in enumerate(coords):
            folded[orbit_of[i]] += x
        return tuple(folded)

    def root_norm(coords):
        total = Fraction(0)
        for i, x in enumerate(coords):
            if x:
                for j, y in enumerate(coords):
                    if y:
                        total += x * y * datum.gram[i][j]
        return total

    def avg_coords(coords):
        acc = [Fraction(0)] * n
        for t in range(order):
            img = sigma_perm_power(coords, t)
            for i in range(n):
                acc[i] += img[i]
        return tuple(x / order for x in acc)

    restricted = {}
    c_of = {}
    for r in datum.roots:
        fc = restrict_coords(r.coords)
        avg = avg_coords(r.coords)
        norm_avg = Fraction(0)
        for i, x in enumerate(avg):
            if x:
                for j, y in enumerate(avg):
                    if y:
                        norm_avg += x * y * datum.gram[i][j]
        c_val = norm_avg / root_norm(r.coords)
        # folded coroot: average the coroot over sigma, scale by 1/c, read off
        cor = list(r.coroot)
        acc = [Fraction(0)] * dim
        cur = vec(cor)
        for t in range(order):
            for i in range(dim):
                acc[i] += cur[i]
            cur = matvec(sigma, cur)
        acc = [x / order for x in acc]
        folded_cor = []
        for orbit in orbits:
            rep = min(orbit)
            for i in orbit:
                if acc[i] != acc[rep]:
                    raise ConsistencyError("averaged coroot is not sigma-fixed")
            folded_cor.append(acc[rep] / c_val)
        folded_cor.extend(acc[n:])
        for x in folded_cor:
            if frac(x).denominator != 1:
                raise ConsistencyError(
                    f"folded coroot of {r.coords} is not integral: {folded_cor}")
        folded_cor = tuple(int(x) for x in folded_cor[:k])
        if fc in restricted:
            if restricted[fc] != folded_cor or c_of[fc] != c_val:
                raise ConsistencyError(
                    f"preimages of restricted root {fc} disagree")
        else:
            restricted[fc] = folded_cor
            c_of[fc] = c_val
        if not 0 < c_val <= 1:
            raise ConsistencyError(f"length ratio {c_val} outside (0, 1]")

    small = RootDatum(folded_cartan, datum.rank_central,
                      label=f"{datum.label} folded",
                      _root_pairs=restricted)

    # sanity: the folded simple coroots must be the folded Cartan columns
    for o_idx in range(k):
        fc = tuple(1 if a == o_idx else 0 for a in range(k))
        col = tuple(folded_cartan[i][o_idx] for i in range(k))
        if restricted[fc] != col:
            raise ConsistencyError("folded simple coroot disagrees with the "
                                   "folded Cartan column")

    c_by_index = {small.root_index[fc]: c_of[fc] for fc in restricted}

    # embedding of the folded space: folded fundamental coweight of an orbit
    # goes to the sum of the big fundamental coweights over the orbit
    cols = []
    for orbit in orbits:
        cols.append(tuple(
            Fraction(1 if i in orbit else 0) for i in range(dim)))
    for kk in range(datum.rank_central):
        cols.append(tuple(
            Fraction(1 if i == n + kk else 0) for i in range(dim)))
    embed = tuple(tuple(cols[j][i] for j in range(len(cols))) for i in range(dim))

    return Folding(datum, perm, small, tuple(orbits), c_by_index, embed, sigma)


# --- Levi sub-data -----------------------------------------------------------


class LeviDatum:
    """The root datum of a standard Levi subgroup, with coordinate maps.

    The Levi of the standard parabolic P_I shares the ambient space of the
    parent; its own coweight + central coordinates differ, and ``to_sub`` /
    ``from_sub`` translate (both directions are exact inverse matrices).
    ``index_map[i]`` is the parent index of the i-th sub simple root.
    """

    def __init__(self, parent: RootDatum, subset):
        subset = sorted(subset)
        self.parent = parent
        self.index_map = tuple(subset)
        sub_cartan = [[parent.cartan[i][j] for j in subset] for i in subset]
        extra_central = parent.rank_ss - len(subset)
        self.datum = RootDatum(sub_cartan, extra_central + parent.rank_central,
                               label=f"{parent.label} Levi {subset}")
        n, dim = parent.rank_ss, parent.dim
        cols = []
        if subset:
            a_sub = tuple(tuple(frac(parent.cartan[i][j]) for j in subset)
                          for i in subset)
            a_inv = mat_inverse(a_sub)
            for pos in range(len(subset)):
                col = zero_vec(dim)
                for q, j in enumerate(subset):
                    col = tuple(
                        c + a_inv[q][pos] * x
                        for c, x in zip(col, parent.simple_coroots[j]))
                cols.append(col)
        for jj in range(n):
            if jj not in subset:
                cols.append(basis_vec(dim, jj))
        for kk in range(parent.rank_central):
            cols.append(basis_vec(dim, n + kk))
        self.from_sub = tuple(tuple(cols[j][i] for j in range(dim))
                              for i in range(dim))
        self.to_sub = mat_inverse(self.from_sub)

    def vector_to_sub(self, v):
        return matvec(self.to_sub, v)

    def vector_from_sub(self, v):
        return matvec(self.from_sub, v)

    def covector_to_sub(self, cov):
        """Rewrite a parent covector in sub coordinates (pullback along from_sub)."""
        return vecmat(cov, self.from_sub)

    @cached_property
    def weyl_correspondence(self):
        """dict: sub Weyl element index -> the parent Weyl subgroup element
        with the same action (conjugated through the coordinate change)."""
        sub_weyl = self.datum.weyl
        parent_weyl = self.parent.weyl
        match = {}
        for w in sub_weyl.elements:
            parent_matrix = matmul(self.from_sub, matmul(w.matrix, self.to_sub))
            try:
                key = int_matrix(parent_matrix)
            except ValueError as exc:
                raise ConsistencyError(
                    "Levi Weyl element is not integral in parent "
                    "coordinates") from exc
            if key not in parent_weyl.by_key:
                raise ConsistencyError(
                    "Levi Weyl element does not match any parent element")
            match[w.index] = parent_weyl.by_key[key]
        expected = {w.index for w in parent_weyl.subgroup(self.index_map)}
        if {w.index for w in match.values()} != expected:
            raise ConsistencyError(
                "Levi Weyl group does not match the parent subgroup")
        return match


def levi_datum(datum: RootDatum, subset) -> LeviDatum:
    """Root datum of the standard Levi M_{P_I} with coordinate change maps."""
    return LeviDatum(datum, subset)
