"""Lattice sums of truncation profiles and their quasi-polynomial laws.

Fix a standard subset ``P``, a full-rank lattice inside the semisimple part
of the attached coordinate subspace, and a base point.  For a parameter
vector ``X`` the sum of the truncation profile ``gamma`` over the shifted
lattice is finite (the profile has bounded support), and as ``X`` runs over
a second lattice the sum obeys a quasi-polynomial law: a finite combination
of terms (root of unity)^X times a polynomial in X.

This module evaluates the sum three independent ways so the routes can be
played against each other:

* ``brute_sum`` -- direct enumeration over a certified support box;
* ``product_eval`` -- an exact generating-function calculation, where each
  cone in the profile's signed decomposition contributes a product of
  geometric series evaluated as a rational function and the removable
  singularity at the unit is extracted by Laurent expansion;
* ``fit_quasipolynomial`` -- reconstruction of the law itself from sampled
  values, with the admissible frequencies read off from the generating
  function's character data.

All arithmetic is exact: rationals throughout, roots of unity as
:class:`~trunca.cyclotomic.CyclotomicNumber`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import CyclotomicNumber
from .errors import ConsistencyError, LatticeError
from .linalg import (
    Mat,
    Vec,
    dot,
    enumerate_box,
    frac,
    lcm_den,
    mat_inverse,
    matvec,
    rank,
    vadd,
    vec,
    vscale,
    zero_vec,
)
from .linalg import integer_smith, scaled_int_vec
from .rootdata import RootDatum
from .truncation import TruncationContext, _norm_subset


def _binomial(k: int, i: int) -> Fraction:
    """Generalised binomial coefficient C(k, i), k any integer, i >= 0.

    >>> _binomial(-2, 3)
    Fraction(-4, 1)
    """
    out = Fraction(1)
    for t in range(i):
        out *= Fraction(k - t, t + 1)
    return out


def _unit(exponent: Fraction) -> CyclotomicNumber:
    """exp(2*pi*i*exponent) as an exact cyclotomic number."""
    e = frac(exponent) % 1
    return CyclotomicNumber.root_of_unity(e.denominator, e.numerator)


# ---------------------------------------------------------------------------
# truncated Laurent series in eps = u - 1


@dataclass(frozen=True)
class _EpsSeries:
    """A Laurent series known through ``eps**(lo + len(coeffs) - 1)``."""

    lo: int
    coeffs: tuple


def _ser_const(value, terms: int) -> _EpsSeries:
    zero = CyclotomicNumber.zero(1)
    one = CyclotomicNumber.from_rational(1, frac(value))
    return _EpsSeries(0, (one,) + (zero,) * (terms - 1))


def _ser_mul(a: _EpsSeries, b: _EpsSeries) -> _EpsSeries:
    n = min(len(a.coeffs), len(b.coeffs))
    out = [CyclotomicNumber.zero(1) for _ in range(n)]
    for i, ca in enumerate(a.coeffs):
        if i >= n:
            break
        for j, cb in enumerate(b.coeffs):
            if i + j >= n:
                break
            out[i + j] = out[i + j] + ca * cb
    return _EpsSeries(a.lo + b.lo, tuple(out))


def _ser_add(a: _EpsSeries, b: _EpsSeries) -> _EpsSeries:
    lo = min(a.lo, b.lo)
    valid_to = min(a.lo + len(a.coeffs), b.lo + len(b.coeffs))
    out = [CyclotomicNumber.zero(1) for _ in range(valid_to - lo)]
    for s in (a, b):
        for i, c in enumerate(s.coeffs):
            k = s.lo + i - lo
            if k < len(out):
                out[k] = out[k] + c
    return _EpsSeries(lo, tuple(out))


def _ser_scale(a: _EpsSeries, c) -> _EpsSeries:
    return _EpsSeries(a.lo, tuple(x * c for x in a.coeffs))


def _ser_inv(a: _EpsSeries) -> _EpsSeries:
    """Reciprocal of a series whose leading coefficient is nonzero."""
    lead = a.coeffs[0]
    if lead.is_zero():
        raise ConsistencyError("series inversion with vanishing leading term")
    inv_lead = lead.inverse()
    out = [inv_lead]
    for k in range(1, len(a.coeffs)):
        acc = CyclotomicNumber.zero(1)
        for i in range(1, k + 1):
            acc = acc + a.coeffs[i] * out[k - i]
        out.append(-(acc * inv_lead))
    return _EpsSeries(-a.lo, tuple(out))


def _geometric_factor(zeta_exp: Fraction, k: int, lower: int, terms: int) -> _EpsSeries:
    """The series of ``zeta^L u^(k L) / (1 - zeta u^k)`` at ``u = 1 + eps``.

    ``zeta = exp(2 pi i zeta_exp)`` and ``L = lower``; this is the rational
    form of the one-sided geometric sum ``sum_{c >= L} (zeta u^k)^c``.
    """
    if k == 0:
        raise ConsistencyError("geometric factor requires a nonzero exponent")
    zl = _unit(zeta_exp * lower)
    numer = _EpsSeries(0, tuple(zl * _binomial(k * lower, i) for i in range(terms)))
    if zeta_exp % 1 == 0:
        denom = _EpsSeries(1, tuple(
            CyclotomicNumber.from_rational(1, -_binomial(k, i + 1)) for i in range(terms)))
    else:
        z = _unit(zeta_exp)
        first = CyclotomicNumber.one(z.order) - z
        denom = _EpsSeries(0, (first,) + tuple(-(z * _binomial(k, i)) for i in range(1, terms)))
    return _ser_mul(numer, _ser_inv(denom))


# ---------------------------------------------------------------------------
# the lattice data


@dataclass(frozen=True)
class _AdaptedCone:
    """Per-superset data for the generating-function route.

    One cone of the signed decomposition, described in a basis adapted to
    the superset ``q``: each basis direction carries its dual covector, a
    flag saying whether the parameter ``X`` shifts its threshold, the
    character exponents cutting the coarser lattice down to the given one,
    and the integer exponent of the auxiliary variable.
    """

    subset: tuple
    duals: tuple
    with_x: tuple
    index: int
    chars: tuple
    k_exponents: tuple


class LatticeSpec:
    """A lattice of profile arguments, with everything the three routes need.

    ``basis`` spans a full-rank lattice in the semisimple part of the
    coordinate subspace attached to ``subset``; ``base_point`` shifts every
    lattice point before the profile is evaluated.  ``x_basis`` is the
    lattice the parameter ``X`` will range over (default: fundamental
    coweights plus the central basis).  ``denominator`` bounds the lattice
    against the mixed coroot/coweight lattices that the generating-function
    route works in; pass ``None`` to have the minimal one computed.  Either
    way it is verified, and a declared value that fails verification raises
    :class:`LatticeError`.  ``multiplicity`` is a constant prefactor applied
    by every evaluation route.

    >>> from .rootdata import build_root_datum
    >>> d = build_root_datum([[2]])
    >>> spec = LatticeSpec(d, (), [d.simple_coroots[0]])
    >>> spec.denominator
    2
    """

    def __init__(self, datum: RootDatum, subset, basis, base_point=None,
                 x_basis=None, denominator=None, multiplicity=1):
        self.datum = datum
        self.subset = _norm_subset(datum, subset)
        n = len(datum.cartan)
        dim = datum.dim
        rest = [j for j in range(n) if j not in self.subset]
        self.rank = len(rest)

        self.basis = tuple(vec(b) for b in basis)
        if len(self.basis) != self.rank:
            raise LatticeError(
                f"need {self.rank} basis vectors for this subset, got {len(self.basis)}")
        for b in self.basis:
            if len(b) != dim:
                raise LatticeError("basis vector has the wrong dimension")
            if any(b[i] != 0 for i in self.subset) or any(b[k] != 0 for k in range(n, dim)):
                raise LatticeError(
                    "basis vector is not in the semisimple part of the subspace")

        if base_point is None:
            base_point = zero_vec(dim)
        self.base_point = vec(base_point)
        if len(self.base_point) != dim:
            raise LatticeError("base point has the wrong dimension")
        if any(self.base_point[i] != 0 for i in self.subset):
            raise LatticeError("base point does not lie in the coordinate subspace")

        if x_basis is None:
            x_basis = datum.fundamental_coweights + datum.central_basis
        self.x_basis = tuple(vec(x) for x in x_basis)
        if len(self.x_basis) != dim or rank(self.x_basis) != dim:
            raise LatticeError("x_basis must be a basis of the whole space")
        self._x_mat_inv = mat_inverse(
            tuple(tuple(x[i] for x in self.x_basis) for i in range(dim)))

        self.multiplicity = frac(multiplicity)
        self._ctx = TruncationContext(datum)

        if self.rank:
            t_mat = tuple(tuple(b[j] for b in self.basis) for j in rest)
            try:
                self._t_mat_inv = mat_inverse(t_mat)
            except ValueError:
                raise LatticeError("lattice basis is not full rank") from None
        else:
            self._t_mat_inv = ()

        # adapted bases for every superset, and with them the denominator
        raw = []
        dens = [1]
        for size in range(len(self.subset), n + 1):
            for extra in itertools.combinations(rest, size - len(self.subset)):
                q = tuple(sorted(self.subset + extra))
                vectors, duals, with_x = self._adapted_basis(q)
                coords = tuple(tuple(dot(cv, b) for b in self.basis) for cv in duals)
                for row in coords:
                    dens.append(lcm_den(row))
                raw.append((q, duals, with_x, coords))
        for j in rest:
            for x in self.x_basis:
                dens.append(dot(datum.fundamental_weights[j], x).denominator)
        minimal = math.lcm(*dens)
        if denominator is None:
            denominator = minimal
        elif denominator % minimal:
            raise LatticeError(
                f"declared denominator {denominator} fails verification; "
                f"the minimal valid value is {minimal}")
        self.denominator = int(denominator)

        lambda0, k_table = self._pick_direction(raw)
        self.direction = lambda0

        cones = []
        for (q, duals, with_x, coords), k_vals in zip(raw, k_table, strict=True):
            m_int = tuple(scaled_int_vec(row, self.denominator) for row in coords)
            if m_int:
                divisors, u_mat, _ = integer_smith(m_int)
                if any(di == 0 for di in divisors):
                    raise ConsistencyError("adapted coordinate matrix is singular")
                index = math.prod(divisors)
                chars = []
                for nu in itertools.product(*[range(di) for di in divisors]):
                    phis = tuple(
                        sum((Fraction(nu[i] * u_mat[i][j], divisors[i])
                             for i in range(len(divisors))), Fraction(0)) % 1
                        for j in range(len(duals)))
                    chars.append(phis)
                chars = tuple(chars)
            else:
                index, chars = 1, ((),)
            cones.append(_AdaptedCone(q, duals, with_x, index, chars, k_vals))
        self._cones = tuple(cones)

    def _adapted_basis(self, q):
        """Basis of the lattice's ambient space adapted to the superset q."""
        datum, ctx = self.datum, self._ctx
        positions = {j: i for i, j in enumerate(q)}
        inv_block = mat_inverse(tuple(tuple(datum.cartan[i][j] for j in q) for i in q)) if q else ()
        vectors, duals, with_x = [], [], []
        for j in q:
            if j in self.subset:
                continue
            v = zero_vec(datum.dim)
            for i in q:
                v = vadd(v, vscale(inv_block[positions[i]][positions[j]],
                                   datum.simple_coroots[i]))
            vectors.append(v)
            duals.append(ctx.proj_covector(self.subset, j))
            with_x.append(False)
        proj = ctx.projector(q)
        for j in range(len(datum.cartan)):
            if j in q:
                continue
            vectors.append(matvec(proj, datum.simple_coroots[j]))
            duals.append(datum.fundamental_weights[j])
            with_x.append(True)
        return tuple(vectors), tuple(duals), tuple(with_x)

    def _pick_direction(self, raw):
        """A covector pairing nonzero with every adapted basis vector.

        Scans lambda(s) = sum of s**position * (fundamental weight) over the
        complement of the subset, taking the first s that works, and returns
        the covector together with the integer exponent table it induces.
        """
        datum = self.datum
        rest = [j for j in range(len(datum.cartan)) if j not in self.subset]
        all_vectors = []
        for q, duals, with_x, coords in raw:
            vectors, _, _ = self._adapted_basis(q)
            all_vectors.append(vectors)
        for s in range(1, 10000):
            lam = zero_vec(datum.dim)
            for pos, j in enumerate(rest):
                lam = vadd(lam, vscale(Fraction(s) ** pos, datum.fundamental_weights[j]))
            pairings = [tuple(dot(lam, v) for v in vectors) for vectors in all_vectors]
            if all(p != 0 for row in pairings for p in row):
                scale = lcm_den([p for row in pairings for p in row])
                k_table = [tuple(int(-scale * p) for p in row) for row in pairings]
                return lam, k_table
        raise ConsistencyError("no generic direction found")  # pragma: no cover

    def x_point(self, coords) -> Vec:
        """The parameter with the given integer coordinates in ``x_basis``."""
        out = zero_vec(self.datum.dim)
        for c, x in zip(coords, self.x_basis, strict=True):
            out = vadd(out, vscale(c, x))
        return out

    def x_coords(self, x) -> tuple:
        """Integer ``x_basis`` coordinates of ``x``; raises if not on the lattice."""
        sol = matvec(self._x_mat_inv, vec(x))
        if any(c.denominator != 1 for c in sol):
            raise LatticeError("point is not on the declared parameter lattice")
        return tuple(int(c) for c in sol)

    def __repr__(self):
        return (f"LatticeSpec(subset={self.subset}, rank={self.rank}, "
                f"denominator={self.denominator})")


def standard_lattice_spec(datum: RootDatum, subset, base_point=None,
                          multiplicity=1) -> LatticeSpec:
    """The spec whose lattice is spanned by projected simple coroots.

    For the empty subset this is the coroot lattice itself.

    >>> from .rootdata import build_root_datum
    >>> standard_lattice_spec(build_root_datum([[2]]), ()).basis
    ((Fraction(2, 1),),)
    """
    subset = _norm_subset(datum, subset)
    ctx = TruncationContext(datum)
    proj = ctx.projector(subset)
    basis = [matvec(proj, datum.simple_coroots[j])
             for j in range(len(datum.cartan)) if j not in subset]
    return LatticeSpec(datum, subset, basis, base_point=base_point,
                       multiplicity=multiplicity)


# ---------------------------------------------------------------------------
# route one: enumeration


def brute_sum(spec: LatticeSpec, x, certify: bool = False) -> Fraction:
    """Sum of the profile over the shifted lattice, by direct enumeration.

    The profile's support box yields bounds on the lattice coordinates (the
    box corners are pushed through the inverse coordinate matrix); every
    integer point in those bounds is evaluated.  With ``certify=True`` the
    sum is recomputed over a strictly larger box and a mismatch raises
    :class:`ConsistencyError`.

    >>> from .rootdata import build_root_datum
    >>> d = build_root_datum([[2]])
    >>> spec = LatticeSpec(d, (), [d.simple_coroots[0]])
    >>> [brute_sum(spec, (x,)) for x in (5, 6, 0)]
    [Fraction(2, 1), Fraction(3, 1), Fraction(0, 1)]
    """
    x = vec(x)
    if len(x) != spec.datum.dim:
        raise ValueError("parameter has the wrong dimension")
    ctx = spec._ctx
    if spec.rank == 0:
        return spec.multiplicity * ctx.gamma(spec.subset, spec.base_point, x)
    box = ctx.gamma_support_box(spec.subset, x)
    if box.empty:
        return Fraction(0)
    total = _sum_over_ranges(spec, x, _coordinate_ranges(spec, box, margin=0))
    if certify:
        widened = _sum_over_ranges(spec, x, _coordinate_ranges(spec, box, margin=1))
        if widened != total:
            raise ConsistencyError(
                f"support box is not certified: {total} inside, {widened} when doubled")
    return spec.multiplicity * total


def _coordinate_ranges(spec: LatticeSpec, box, margin: int):
    """Integer bounds on lattice coordinates covering the support box.

    ``margin=1`` doubles the box about its centre first (plus one step of
    slack), which is what certification compares against.
    """
    lows, highs = [], []
    for _, _, lo, hi in box.entries:
        pad = margin * (hi - lo + 1)
        lows.append(lo - pad)
        highs.append(hi + pad)
    t0 = tuple(dot(cov, spec.base_point) for _, cov, _, _ in box.entries)
    bounds = [[None, None] for _ in range(spec.rank)]
    for corner in itertools.product(*[(l, h) for l, h in zip(lows, highs, strict=True)]):
        shifted = tuple(c - o for c, o in zip(corner, t0, strict=True))
        sol = matvec(spec._t_mat_inv, shifted)
        for i, v in enumerate(sol):
            if bounds[i][0] is None or v < bounds[i][0]:
                bounds[i][0] = v
            if bounds[i][1] is None or v > bounds[i][1]:
                bounds[i][1] = v
    return (tuple(math.ceil(b[0]) for b in bounds),
            tuple(math.floor(b[1]) for b in bounds))


def _sum_over_ranges(spec: LatticeSpec, x, ranges) -> Fraction:
    lo, hi = ranges
    ctx = spec._ctx
    total = Fraction(0)
    for n in enumerate_box(lo, hi):
        h = spec.base_point
        for c, b in zip(n, spec.basis, strict=True):
            h = vadd(h, vscale(c, b))
        total += ctx.gamma(spec.subset, h, x)
    return total


# ---------------------------------------------------------------------------
# route two: generating functions


def is_prime_power(q: int) -> bool:
    """True when q = p**k for a prime p and k >= 1.

    >>> [q for q in range(2, 20) if is_prime_power(q)]
    [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19]
    """
    if q < 2:
        return False
    for p in range(2, q + 1):
        if p * p > q:
            return True  # q itself is prime
        if q % p == 0:
            while q % p == 0:
                q //= p
            return q == 1
    return True  # pragma: no cover


def product_eval(spec: LatticeSpec, x, q: int) -> Fraction:
    """The lattice sum via geometric series, exactly.

    Each superset of the spec's subset contributes a signed cone; in the
    adapted basis the cone's generating function factors into one-sided
    geometric series, twisted by the characters that carve the spec's
    lattice out of the finer one it sits inside.  The auxiliary variable is
    specialised along a generic direction, every factor becomes (root of
    unity) * u**(integer) / (1 - ...), and the value is the constant term of
    the alternating sum at u = 1, extracted by exact Laurent expansion.
    Negative powers of (u - 1) must cancel across cones; if they do not, a
    :class:`ConsistencyError` reports the failure.  The base ``q`` of the
    substitution is checked to be a prime power; the result provably does
    not depend on it.

    >>> from .rootdata import build_root_datum
    >>> d = build_root_datum([[2]])
    >>> spec = LatticeSpec(d, (), [d.simple_coroots[0]])
    >>> product_eval(spec, (5,), 2)
    Fraction(2, 1)
    """
    if not is_prime_power(q):
        raise ValueError(f"q must be a prime power, got {q}")
    x = vec(x)
    spec.x_coords(x)  # raises LatticeError when off the parameter lattice
    n = len(spec.datum.cartan)
    terms = spec.rank + 2
    big_n = spec.denominator
    total = _ser_const(0, terms)
    for cone in spec._cones:
        lower = []
        for dual, with_x in zip(cone.duals, cone.with_x, strict=True):
            shift = 0
            if with_x:
                pairing = big_n * dot(dual, x)
                if pairing.denominator != 1:
                    raise ConsistencyError("parameter pairing is not integral")
                shift = int(pairing)
            lower.append(shift + math.floor(-big_n * dot(dual, spec.base_point)) + 1)
        cone_sum = None
        for phis in cone.chars:
            prod = _ser_const(1, terms)
            for phi, k, low in zip(phis, cone.k_exponents, lower, strict=True):
                prod = _ser_mul(prod, _geometric_factor(phi, k, low, terms))
            cone_sum = prod if cone_sum is None else _ser_add(cone_sum, prod)
        sign = -1 if (n - len(cone.subset)) % 2 else 1
        total = _ser_add(total, _ser_scale(cone_sum, Fraction(sign, cone.index)))
    constant = None
    for i, c in enumerate(total.coeffs):
        order = total.lo + i
        if order < 0 and not c.is_zero():
            raise ConsistencyError(f"failure to cancel all poles: eps**{order} survives")
        if order == 0:
            constant = c
    if constant is None:
        constant = CyclotomicNumber.zero(1)
    if not constant.is_rational():
        raise ConsistencyError("constant term is not rational")
    return constant.as_rational() * spec.multiplicity


# ---------------------------------------------------------------------------
# route three: fitting the law


@dataclass(frozen=True)
class QuasiPolynomial:
    """A finite sum of (root of unity)^coords * polynomial(coords).

    ``terms`` maps each frequency covector (entries are rationals modulo 1,
    one per lattice coordinate) to a polynomial stored as monomial-exponent
    tuples with cyclotomic coefficients.
    """

    dim: int
    terms: tuple

    def evaluate(self, coords) -> CyclotomicNumber:
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.dim:
            raise ValueError("wrong number of coordinates")
        total = CyclotomicNumber.zero(1)
        for freq, poly in self.terms:
            phase = _unit(sum((f * c for f, c in zip(freq, coords, strict=True)),
                              Fraction(0)))
            value = CyclotomicNumber.zero(1)
            for mono, coeff in poly:
                scalar = Fraction(1)
                for e, c in zip(mono, coords, strict=True):
                    scalar *= Fraction(c) ** e
                value = value + coeff * scalar
            total = total + phase * value
        return total

    def evaluate_rational(self, coords) -> Fraction:
        value = self.evaluate(coords)
        if not value.is_rational():
            raise ConsistencyError("quasi-polynomial value is not rational")
        return value.as_rational()

    @property
    def frequencies(self) -> tuple:
        return tuple(freq for freq, _ in self.terms)


def _monomials(dim: int, degree: int):
    out = [m for m in itertools.product(range(degree + 1), repeat=dim)
           if sum(m) <= degree]
    return sorted(out)


def fit_quasipolynomial(spec: LatticeSpec, samples, evaluator=None) -> QuasiPolynomial:
    """Reconstruct the quasi-polynomial law of the lattice sum.

    The candidate frequencies come from the spec's character data: only the
    exponents attached to some cone's parameter-facing directions can occur.
    Values are grouped by residue class modulo the frequency denominators;
    on each class the law is an honest polynomial of degree at most the
    lattice rank, fitted exactly (the sampling grid is enlarged along a
    deterministic schedule until the linear system determines it, and every
    remaining point must then reproduce).  A finite Fourier transform over
    the classes separates the frequencies, and any amplitude outside the
    candidate set raises :class:`ConsistencyError`.

    ``samples`` is an iterable of (coords, value) pairs with integer
    coordinates in the spec's ``x_basis``; ``evaluator`` maps coords to the
    value at that point and defaults to ``brute_sum``.

    >>> from .rootdata import build_root_datum
    >>> d = build_root_datum([[2]])
    >>> spec = LatticeSpec(d, (), [d.simple_coroots[0]])
    >>> law = fit_quasipolynomial(spec, [((x,), brute_sum(spec, (x,))) for x in range(8)])
    >>> sorted(law.frequencies)
    [(Fraction(0, 1),), (Fraction(1, 2),)]
    >>> law.evaluate_rational((101,)) == brute_sum(spec, (101,))
    True
    """
    dim = len(spec.x_basis)
    degree = spec.rank
    if evaluator is None:
        evaluator = lambda coords: brute_sum(spec, spec.x_point(coords))

    candidates = set()
    for cone in spec._cones:
        scaled = []
        for dual, with_x in zip(cone.duals, cone.with_x, strict=True):
            row = None
            if with_x:
                row = tuple(int(spec.denominator * dot(dual, xb)) for xb in spec.x_basis)
            scaled.append(row)
        for phis in cone.chars:
            freq = [Fraction(0)] * dim
            for phi, row in zip(phis, scaled, strict=True):
                if row is None:
                    continue
                for i, entry in enumerate(row):
                    freq[i] = (freq[i] + phi * entry) % 1
            candidates.add(tuple(freq))
    moduli = tuple(math.lcm(*(f[i].denominator for f in candidates)) for i in range(dim))

    known = {}
    for coords, value in samples:
        coords = tuple(int(c) for c in coords)
        value = frac(value)
        if known.setdefault(coords, value) != value:
            raise ConsistencyError(f"conflicting sample values at {coords}")

    monos = _monomials(dim, degree)
    fits = {}
    for residue in itertools.product(*[range(m) for m in moduli]):
        points = [c for c in known if all(ci % m == r for ci, m, r
                                          in zip(c, moduli, residue, strict=True))]
        for g in itertools.product(range(degree + 1), repeat=dim):
            c = tuple(r + m * gi for r, m, gi in zip(residue, moduli, g, strict=True))
            if c not in points:
                points.append(c)
        rows = [tuple(math.prod(Fraction(ci) ** e for ci, e in zip(c, mono, strict=True))
                      for mono in monos) for c in points]
        chosen = []
        for i, row in enumerate(rows):
            if len(chosen) == len(monos):
                break
            if rank([rows[j] for j in chosen] + [row]) > len(chosen):
                chosen.append(i)
        if len(chosen) < len(monos):  # pragma: no cover
            raise ConsistencyError("sampling grid does not determine the fit")
        for c in points:
            if c not in known:
                known[c] = frac(evaluator(c))
        sq = mat_inverse([rows[i] for i in chosen])
        coeffs = matvec(sq, tuple(known[points[i]] for i in chosen))
        for i, row in enumerate(rows):
            if dot(row, coeffs) != known[points[i]]:
                raise ConsistencyError(
                    f"samples at {points[i]} break the degree-{degree} law")
        fits[residue] = coeffs

    class_count = math.prod(moduli)
    terms = []
    reconstructed = {r: [CyclotomicNumber.zero(1)] * len(monos) for r in fits}
    for freq in sorted(candidates):
        poly = [CyclotomicNumber.zero(1)] * len(monos)
        for residue, coeffs in fits.items():
            phase = _unit(-sum((f * r for f, r in zip(freq, residue, strict=True)),
                               Fraction(0)))
            for i, c in enumerate(coeffs):
                poly[i] = poly[i] + phase * c
        poly = [p * Fraction(1, class_count) for p in poly]
        for residue in fits:
            phase = _unit(sum((f * r for f, r in zip(freq, residue, strict=True)),
                              Fraction(0)))
            for i, p in enumerate(poly):
                reconstructed[residue][i] = reconstructed[residue][i] + phase * p
        kept = tuple((mono, c) for mono, c in zip(monos, poly, strict=True)
                     if not c.is_zero())
        if kept:
            terms.append((freq, kept))
    for residue, coeffs in fits.items():
        for got, want in zip(reconstructed[residue], coeffs, strict=True):
            if not (got - CyclotomicNumber.from_rational(1, want)).is_zero():
                raise ConsistencyError(
                    "fitted law needs a frequency outside the candidate set")
    return QuasiPolynomial(dim, tuple(terms))
