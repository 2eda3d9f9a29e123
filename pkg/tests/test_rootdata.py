"""Root data, Weyl groups, and foldings against independent combinatorics.

The oracles here are classical counts and identities computed inline
(positive-root counts, Weyl orders, duality pairings), never read back from
the code under test.
"""

import itertools
from fractions import Fraction

import pytest

from trunca.errors import CartanMatrixError, FoldingError
from trunca.linalg import dot
from trunca.rootdata import build_root_datum, fold, levi_datum

# (type, positive roots, Weyl order) from the classical closed forms:
# n(n+1)/2 for A_n, n^2 for B/C_n, n(n-1) for D_n, 6 for G2.
CLASSIC = [
    ("A1", 1, 2),
    ("A1xA1", 2, 4),
    ("A2", 3, 6),
    ("B2", 4, 8),
    ("G2", 6, 12),
    ("A3", 6, 24),
    ("C3", 9, 48),
    ("D4", 12, 192),
]


@pytest.mark.parametrize("kind,n_pos,weyl_order", CLASSIC)
def test_counts(kind, n_pos, weyl_order):
    datum = build_root_datum(kind)
    assert len(datum.positive_roots()) == n_pos
    assert datum.weyl.order == weyl_order
    # the longest element inverts every positive root
    longest = max(datum.weyl.elements, key=lambda w: w.length)
    assert longest.length == n_pos


@pytest.mark.parametrize("kind", ["A2", "B2", "G2", "A3"])
def test_weight_coroot_duality(kind):
    datum = build_root_datum(kind)
    n = datum.rank_ss
    for i in range(n):
        for j in range(n):
            want = Fraction(1 if i == j else 0)
            assert dot(datum.fundamental_weights[i],
                       datum.simple_coroots[j]) == want
            assert dot(datum.simple_roots[j],
                       datum.fundamental_coweights[i]) == want


def test_simple_reflection_action():
    datum = build_root_datum("A2")
    weyl = datum.weyl
    s1 = next(w for w in weyl.elements if w.word == (0,))
    # s_1 sends alpha_1^vee to its negative and permutes the rest of Phi+
    img = weyl.act(s1, datum.simple_coroots[0])
    assert img == tuple(-x for x in datum.simple_coroots[0])
    # length = number of inversions
    for w in weyl.elements:
        assert w.length == weyl.inversions(w)


def test_reduced_words_are_reduced():
    datum = build_root_datum("B2")
    weyl = datum.weyl
    seen = {}
    for w in weyl.elements:
        key = tuple(map(tuple, w.matrix))
        assert key not in seen
        seen[key] = w
    # word lengths attain the longest-element bound exactly once
    lengths = sorted(w.length for w in weyl.elements)
    assert lengths[-1] == 4 and lengths.count(4) == 1


def test_central_coordinates_are_inert():
    datum = build_root_datum("A1", rank_central=2)
    assert datum.dim == 3
    v = (Fraction(1), Fraction(5), Fraction(-7))
    for w in datum.weyl.elements:
        out = datum.weyl.act(w, v)
        assert out[1:] == v[1:]
    for root in datum.positive_roots():
        assert root.cov[1:] == (0, 0)


@pytest.mark.parametrize("bad", ["E9", "Q2", "A0", [[2, -1], [0, 2]]])
def test_bad_cartan_input(bad):
    with pytest.raises(CartanMatrixError):
        build_root_datum(bad)


def test_affine_matrix_rejected():
    # affine A1: symmetrizable but not positive definite
    with pytest.raises(CartanMatrixError):
        build_root_datum([[2, -2], [-2, 2]])


# --- foldings ---------------------------------------------------------------


def test_fold_a3_gives_c2():
    f = fold(build_root_datum("A3"), (2, 1, 0))
    assert [list(map(int, r)) for r in f.small.cartan] == [[2, -1], [-2, 2]]
    assert set(f.c.values()) <= {Fraction(1, 2), Fraction(1)}
    assert len(f.small.positive_roots()) == 4
    assert all(r.reduced for r in f.small.roots)


def test_fold_d4_gives_g2():
    f = fold(build_root_datum("D4"), (2, 1, 3, 0))
    assert [list(map(int, r)) for r in f.small.cartan] == [[2, -1], [-3, 2]]
    assert set(f.c.values()) <= {Fraction(1, 3), Fraction(1)}
    assert len(f.small.positive_roots()) == 6
    # triality correspondence: folded Weyl group lifts bijectively
    assert len(f.weyl_correspondence) == 12


def test_fold_identity_permutation_is_identity():
    datum = build_root_datum("B2")
    f = fold(datum, (0, 1))
    assert [list(r) for r in f.small.cartan] == [list(r) for r in datum.cartan]
    assert all(c == 1 for c in f.c.values())


def test_fold_projection_embeds_back():
    f = fold(build_root_datum("A3"), (2, 1, 0))
    for v_small in itertools.product((-2, 0, 1), repeat=2):
        v = f.embed_vector(v_small)
        assert f.sigma_vector(v) == v
        assert f.project_vector(v) == tuple(map(Fraction, v_small))


def test_fold_rejects_bad_permutations():
    datum = build_root_datum("A3")
    with pytest.raises(FoldingError):
        fold(datum, (1, 0, 2))  # does not preserve the Cartan matrix
    with pytest.raises(FoldingError):
        fold(datum, (0, 0, 1))  # not a permutation
    with pytest.raises(FoldingError):
        fold(datum, (2, 1, 0), order=3)  # wrong declared order


def test_levi_datum_of_subset():
    datum = build_root_datum("A3")
    levi = levi_datum(datum, (0, 2))
    assert levi.datum.rank_ss == 2
    assert [list(map(int, r)) for r in levi.datum.cartan] == [[2, 0], [0, 2]]
