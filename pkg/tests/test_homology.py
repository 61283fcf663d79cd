"""Per-degree homology, graded reports with periodic tails, induced maps."""

from __future__ import annotations

import pytest

import oracle
from monofloer.data import curated_instances, invalid_instance, InvalidInput
from monofloer.complexes import Flavor, default_window
from monofloer.intlinalg import AbelianGroupInvariants, SparseIntMatrix
from monofloer.homology import (
    ChainMapSlice,
    HomologyClassMap,
    NotChainMap,
    WindowTooSmall,
    graded_homology,
    homology_at,
    identity_chain_map,
    induced_on_homology,
    presentation_at,
    structural_chain_map,
)

Z = AbelianGroupInvariants(1)
Z2 = AbelianGroupInvariants(2)
ZERO = AbelianGroupInvariants(0)


def by_name(label):
    return next(d for d in curated_instances() if d.name == label)


def grp(free, *torsion):
    return AbelianGroupInvariants(free, tuple(torsion))


# -- frozen homology values -------------------------------------------------

def test_theta_tower_patterns():
    empty = by_name("empty")
    for n in range(-4, 7):
        expect_plus = Z if n >= 0 and n % 2 == 0 else ZERO
        assert homology_at(empty, Flavor.PLUS, n) == expect_plus
        expect_minus = Z if n <= -2 and n % 2 == 0 else ZERO
        assert homology_at(empty, Flavor.MINUS, n) == expect_minus
        expect_inf = Z if n % 2 == 0 else ZERO
        assert homology_at(empty, Flavor.INFINITY, n) == expect_inf
        assert homology_at(empty, Flavor.HAT, n) == (Z if n == 0 else ZERO)
        assert homology_at(empty, Flavor.NONEQUIVARIANT, n) == ZERO


def test_theta_pair_plus_frozen():
    d = by_name("theta-coupled-pair")
    values = {-2: Z, -1: ZERO, 0: ZERO, 1: ZERO, 2: Z, 3: ZERO, 4: Z}
    for n, expect in values.items():
        assert homology_at(d, Flavor.PLUS, n) == expect, n


def test_two_step_plus_frozen():
    d = by_name("two-step")
    assert homology_at(d, Flavor.PLUS, 0) == grp(1, 2)
    assert homology_at(d, Flavor.PLUS, 1) == ZERO
    assert homology_at(d, Flavor.NONEQUIVARIANT, 1) == ZERO
    assert homology_at(d, Flavor.NONEQUIVARIANT, 0) == grp(0, 2)


def test_euler_pair_plus_frozen():
    d = by_name("euler-pair")
    expect = {-2: ZERO, -1: ZERO, 0: Z2, 1: ZERO, 2: Z2, 3: ZERO,
              4: Z, 5: ZERO, 6: Z, 7: ZERO, 8: Z}
    for n, want in expect.items():
        assert homology_at(d, Flavor.PLUS, n) == want, n


def test_tail_chain_plus_frozen():
    d = by_name("tail-chain")
    expect = {-3: ZERO, -2: Z, -1: ZERO, 0: grp(0, 3), 1: ZERO,
              2: grp(0, 6), 3: ZERO, 4: Z, 5: ZERO, 6: Z, 7: ZERO, 8: Z}
    for n, want in expect.items():
        assert homology_at(d, Flavor.PLUS, n) == want, n


def test_homology_requires_valid_data():
    with pytest.raises(InvalidInput):
        homology_at(invalid_instance(), Flavor.PLUS, 0)


# -- oracle cross-check -----------------------------------------------------

def oracle_dataset(data):
    return {
        "points": [{"id": p.id, "gr": p.grading} for p in data.points],
        "n": [{"from": s, "to": t, "value": v} for (s, t, v) in data.n_coeffs],
        "m": [{"from": s, "to": t, "value": v} for (s, t, v) in data.m_coeffs],
    }


def test_homology_matches_dense_oracle_everywhere():
    for data in curated_instances():
        blob = oracle_dataset(data)
        lo, hi = default_window(data)
        for flavor in Flavor:
            for n in range(lo, hi + 1):
                free, torsion = oracle.oracle_homology_at(blob, flavor.value, n)
                got = homology_at(data, flavor, n)
                assert (got.free_rank, list(got.torsion)) == (free, torsion), (
                    data.name, flavor, n)


# -- graded reports and tails -----------------------------------------------

def test_infinity_graded_pattern_with_tails():
    for data in curated_instances():
        report = graded_homology(data, Flavor.INFINITY, default_window(data))
        lo, hi = report.window
        for n in range(lo, hi + 1):
            assert report.groups[n] == (Z if n % 2 == 0 else ZERO), (
                data.name, n)
        for tail in (report.tail_above, report.tail_below):
            assert tail is not None and tail.verified
            assert tail.even == Z
            assert tail.odd == ZERO


def test_minus_theta_tower_tails():
    report = graded_homology(by_name("empty"), Flavor.MINUS, (-8, 6))
    assert report.groups[-2] == Z
    assert report.groups[-1] == ZERO
    assert report.groups[0] == ZERO
    assert report.tail_below is not None and report.tail_below.verified
    assert report.tail_below.even == Z
    assert report.tail_below.odd == ZERO
    # nothing above the top of the minus complex
    assert report.tail_above is not None and report.tail_above.verified
    assert report.tail_above.even == ZERO
    assert report.tail_above.odd == ZERO


def test_plus_tails():
    report = graded_homology(by_name("tail-chain"), Flavor.PLUS, (-6, 9))
    assert report.tail_above is not None and report.tail_above.verified
    assert report.tail_above.even == Z
    assert report.tail_above.odd == ZERO
    assert report.tail_below is not None
    assert report.tail_below.even == ZERO
    assert report.tail_below.odd == ZERO


def test_hat_graded_is_bounded():
    report = graded_homology(by_name("empty"), Flavor.HAT, (-4, 6))
    assert report.groups[0] == Z
    assert all(report.groups[n] == ZERO for n in range(-4, 7) if n != 0)
    assert report.tail_above.verified and report.tail_above.even == ZERO
    assert report.tail_below.verified and report.tail_below.odd == ZERO


def test_narrow_window_has_no_unverified_tail():
    d = by_name("tail-chain")
    report = graded_homology(d, Flavor.PLUS, (0, 2))
    assert report.tail_above is None
    assert report.tail_below is None


# -- induced maps -----------------------------------------------------------

def test_identity_induces_identity():
    d = by_name("theta-coupled-pair")
    window = (-2, 4)
    chain = identity_chain_map(d, Flavor.PLUS, window)
    induced = induced_on_homology(d, Flavor.PLUS, Flavor.PLUS, chain, window)
    for n in range(window[0], window[1] + 1):
        mat = induced.matrices[n]
        size = len(presentation_at(d, Flavor.PLUS, n).generators)
        assert mat == SparseIntMatrix.identity(size)


def test_omega_inverse_induced_on_theta_tower():
    empty = by_name("empty")
    window = (-2, 6)
    chain = structural_chain_map(empty, "omega_inverse", window,
                                 flavor=Flavor.PLUS)
    induced = induced_on_homology(empty, Flavor.PLUS, Flavor.PLUS, chain,
                                  window)
    assert induced.shift == -2
    for r in range(1, 4):
        assert induced.matrices[2 * r].to_dense() in ([[1]], [[-1]])
    zero_map = induced.matrices[0]
    assert (zero_map.rows, zero_map.cols) == (0, 1)


def test_projection_induced_at_degree_two():
    d = by_name("theta-coupled-pair")
    window = (0, 4)
    chain = structural_chain_map(d, "projection_plus", window)
    induced = induced_on_homology(d, Flavor.INFINITY, Flavor.PLUS, chain,
                                  window)
    assert induced.matrices[2].to_dense() in ([[1]], [[-1]])


def test_induced_composes():
    empty = by_name("empty")
    window = (0, 4)
    chain = structural_chain_map(empty, "omega_inverse", (-4, 8),
                                 flavor=Flavor.PLUS)
    twice = ChainMapSlice(
        source=Flavor.PLUS, target=Flavor.PLUS, shift=-4,
        matrices={n: chain.matrices[n - 2].mul(chain.matrices[n])
                  for n in range(-3, 8)})
    once = induced_on_homology(empty, Flavor.PLUS, Flavor.PLUS, chain, (-4, 6))
    both = induced_on_homology(empty, Flavor.PLUS, Flavor.PLUS, twice, window)
    for n in range(window[0], window[1] + 1):
        assert both.matrices[n] == once.matrices[n - 2].mul(once.matrices[n])


def test_broken_chain_map_detected():
    d = by_name("two-step")
    window = (-1, 3)
    chain = structural_chain_map(d, "projection_plus", window)
    bad = dict(chain.matrices)
    # zero out one slice; commutation must fail at an adjacent degree
    bad[1] = SparseIntMatrix.zero(bad[1].rows, bad[1].cols)
    broken = ChainMapSlice(Flavor.INFINITY, Flavor.PLUS, 0, bad)
    with pytest.raises(NotChainMap) as err:
        induced_on_homology(d, Flavor.INFINITY, Flavor.PLUS, broken, window)
    assert err.value.degree in (1, 2)


def test_window_too_small_detected():
    d = by_name("two-step")
    chain = structural_chain_map(d, "projection_plus", (0, 2))
    with pytest.raises(WindowTooSmall):
        induced_on_homology(d, Flavor.INFINITY, Flavor.PLUS, chain, (-4, 6))
