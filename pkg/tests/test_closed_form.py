import itertools
import math
from collections import Counter

import numpy as np
import pytest

from iobound import (
    AlphaOutOfRange,
    AnalyticSpectrum,
    BadString,
    PathSpec,
    augmented_butterfly,
    butterfly,
    butterfly_bound,
    butterfly_path_census,
    butterfly_spectrum,
    hypercube,
    hypercube_bound,
    hypercube_spectrum,
    k_path_multiset,
    laplacian,
    path_spectrum,
    undirected_support,
)
from iobound.closed_form import (
    best_butterfly_alpha,
    best_hypercube_alpha,
    butterfly_alpha_for_memory,
    census_formula,
    hypercube_threshold,
    spectrum_from_census,
    union,
)


def _dense(wg, variant="unit"):
    return np.linalg.eigvalsh(laplacian(wg, variant).toarray())


def test_hypercube_spectrum_l3():
    assert hypercube_spectrum(3).entries == ((0, 1), (2, 3), (4, 3), (6, 1))
    assert hypercube_spectrum(1).entries == ((0, 1), (2, 1))


@pytest.mark.parametrize("l", range(1, 11))
def test_hypercube_total(l):
    assert hypercube_spectrum(l).total == 2 ** l


@pytest.mark.parametrize("l", range(1, 8))
def test_hypercube_matches_dense(l):
    dense = _dense(undirected_support(hypercube(l)))
    assert np.abs(hypercube_spectrum(l).expand() - dense).max() <= 1e-8


def test_hypercube_bound_values():
    assert hypercube_bound(10, 8) == pytest.approx(2048 / 11 - 176)
    assert hypercube_bound(10, 8) == pytest.approx(10.181818, abs=1e-6)
    assert hypercube_bound(10, 9) == pytest.approx(2048 / 11 - 198)
    assert hypercube_bound(10, 9) < 0
    assert hypercube_bound(3, 1, 1) == pytest.approx(-4.0)
    assert 8 < hypercube_threshold(10) < 9


def test_hypercube_bound_general_alpha_reduces():
    # the general sum at alpha=1 equals the simplified alpha=1 expression
    for l in range(2, 12):
        for M in (1, 3, 7):
            K = 1 + l
            general = sum(math.comb(l, i) * (i * 2 ** (l + 1) / (l * K) - 2 * M) for i in range(2))
            assert hypercube_bound(l, M, 1) == pytest.approx(general)
    assert hypercube_bound(6, 1, 2) == pytest.approx(
        sum(math.comb(6, i) * (i * 128 / (6 * 22) - 2) for i in range(3)))


def test_hypercube_alpha_range():
    with pytest.raises(AlphaOutOfRange):
        hypercube_bound(5, 1, 0)
    with pytest.raises(AlphaOutOfRange):
        hypercube_bound(5, 1, 5)
    alpha, value = best_hypercube_alpha(10, 1)
    assert value == max(hypercube_bound(10, 1, a) for a in range(1, 10))
    assert hypercube_bound(10, 1, alpha) == value


def test_butterfly_spectrum_b1():
    assert np.allclose(butterfly_spectrum(1).expand(), [0, 2, 2, 4])


@pytest.mark.parametrize("l", range(1, 9))
def test_butterfly_total(l):
    assert butterfly_spectrum(l).total == (l + 1) * 2 ** l


@pytest.mark.parametrize("l", range(1, 6))
def test_butterfly_matches_dense(l):
    dense = _dense(undirected_support(butterfly(l)))
    assert np.abs(butterfly_spectrum(l).expand() - dense).max() <= 1e-8


def test_butterfly_bound_values():
    assert butterfly_bound(4, 4, 2) == pytest.approx(80 * (1 - math.cos(math.pi / 5)) - 64)
    assert butterfly_bound(4, 4, 2) == pytest.approx(-48.72, abs=0.01)
    v = butterfly_bound(20, 4, 18)
    assert v == pytest.approx(21 * 2 ** 20 * (1 - math.cos(math.pi / 5)) - 2 ** 20 * 4)
    assert v == pytest.approx(1.116e4, rel=1e-3)
    with pytest.raises(AlphaOutOfRange):
        butterfly_bound(4, 4, 4)
    with pytest.raises(AlphaOutOfRange):
        butterfly_bound(4, 4, -1)


def test_butterfly_alpha_helpers():
    assert butterfly_alpha_for_memory(20, 4) == 18
    assert butterfly_alpha_for_memory(5, 2) == 4
    with pytest.raises(ValueError):
        butterfly_alpha_for_memory(5, 3)
    with pytest.raises(AlphaOutOfRange):
        butterfly_alpha_for_memory(5, 1)
    alpha, value = best_butterfly_alpha(12, 4)
    assert value == max(butterfly_bound(12, 4, a) for a in range(12))


def test_butterfly_bound_slope():
    slope = 1 - math.cos(math.pi / 5)
    vals = [butterfly_bound(l, 4, l - 2) / 2 ** l for l in (16, 20, 24)]
    assert (vals[1] - vals[0]) / 4 == pytest.approx(slope, abs=1e-9)
    assert (vals[2] - vals[1]) / 4 == pytest.approx(slope, abs=1e-9)


@pytest.mark.parametrize("spec,expected", [
    (PathSpec(2, "P"), [0, 4]),
    (PathSpec(1, "P'"), [2]),
    (PathSpec(1, "P''"), [4]),
    (PathSpec(1, "P"), [0]),
])
def test_small_paths(spec, expected):
    assert np.allclose(path_spectrum(spec).expand(), expected)
    assert np.allclose(_dense(spec.graph(), "tilde"), expected)


@pytest.mark.parametrize("variant", ["P", "P'", "P''"])
@pytest.mark.parametrize("length", range(1, 9))
def test_paths_match_dense(variant, length):
    spec = PathSpec(length, variant)
    assert np.abs(path_spectrum(spec).expand() - _dense(spec.graph(), "tilde")).max() <= 1e-9


def test_pathspec_validation():
    with pytest.raises(ValueError):
        PathSpec(0)
    with pytest.raises(ValueError):
        PathSpec(2, "Q")


def test_augmented_empty_is_butterfly():
    for l in (1, 2, 3, 4):
        wg = augmented_butterfly(l, "")
        ref = undirected_support(butterfly(l))
        assert np.array_equal(laplacian(wg, "tilde").toarray(), laplacian(ref, "unit").toarray())
        assert not wg.vertex_weights.any()


def test_augmented_l3_q1():
    wg = augmented_butterfly(3, "1")
    # 4 rows, columns 0..2 are B_2, column 2 -> 3 joined by weight-2 straight edges
    assert wg.n == 16
    for r in range(4):
        assert wg.weight(8 + r, 12 + r) == 2.0
    assert not wg.vertex_weights.any()
    wg0 = augmented_butterfly(3, "0")
    assert wg0.vertex_weights.tolist() == [0] * 8 + [2] * 8


def test_augmented_bad_string():
    with pytest.raises(BadString):
        augmented_butterfly(3, "012")
    with pytest.raises(BadString):
        augmented_butterfly(2, "111")


@pytest.mark.parametrize("l", [1, 2, 3])
def test_decomposition_lemma(l):
    def eig(q):
        return _dense(augmented_butterfly(l, q), "tilde")

    for m in range(l):
        for bits in itertools.product("01", repeat=m):
            q = "".join(bits)
            split = np.sort(np.concatenate((eig("1" + q), eig("0" + q))))
            assert np.abs(eig(q) - split).max() <= 1e-8


def test_k_path_all_ones_and_zeros():
    assert k_path_multiset("111", 3) == Counter({PathSpec(4, "P"): 1})
    zeros = k_path_multiset("000", 3)
    assert zeros == Counter({PathSpec(1, "P'"): 2, PathSpec(1, "P''"): 2})
    with pytest.raises(BadString):
        k_path_multiset("11", 3)


@pytest.mark.parametrize("l", range(1, 5))
def test_k_path_pieces_match_dense(l):
    for bits in itertools.product("01", repeat=l):
        q = "".join(bits)
        pieces = union(path_spectrum(s) for s, c in k_path_multiset(q, l).items() for _ in range(c))
        assert np.abs(pieces.expand() - _dense(augmented_butterfly(l, q), "tilde")).max() <= 1e-9


def _census_by_hand_l3():
    # enumerate the 8 strings of length 3; edge t survives iff q[t] == "1"
    total = Counter()
    for bits in itertools.product("01", repeat=3):
        cuts = [t for t, b in enumerate(bits) if b == "0"]
        start = 0
        for cut in cuts + [3]:
            end = cut
            ends = (start > 0) + (end < 3)
            total[(("P", "P'", "P''")[ends], end - start + 1)] += 1
            start = end + 1
    return total


def test_census_l3():
    hand = _census_by_hand_l3()
    assert hand == Counter({("P", 4): 1, ("P'", 3): 2, ("P'", 2): 4, ("P'", 1): 8,
                            ("P''", 2): 1, ("P''", 1): 4})
    census = butterfly_path_census(3)
    assert {(s.variant, s.length): c for s, c in census.items()} == dict(hand)
    assert sum(s.length * c for s, c in census.items()) == 32


@pytest.mark.parametrize("l", range(1, 7))
def test_census_formula_and_assembly(l):
    census = butterfly_path_census(l)
    assert census == census_formula(l)
    assert sum(s.length * c for s, c in census.items()) == (l + 1) * 2 ** l
    if l <= 5:
        gap = np.abs(spectrum_from_census(census).expand() - butterfly_spectrum(l).expand()).max()
        assert gap <= 1e-8


def test_analytic_spectrum_merge():
    s = AnalyticSpectrum.from_pairs([(1.0, 1), (1.0 + 1e-12, 2), (0.0, 1)])
    assert s.entries == ((0.0, 1), (1.0, 3))
    assert (s + s).total == 8
    with pytest.raises(ValueError):
        AnalyticSpectrum.from_pairs([(1.0, 0)])
