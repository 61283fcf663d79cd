"""Filtration spectral sequence, the delta maps, and the structure theorem."""

from __future__ import annotations

import pytest

from monofloer.complexes import Flavor, default_window
from monofloer.data import InvalidInput, MonopoleData, THETA, curated_instances
from monofloer.intlinalg import AbelianGroupInvariants
from monofloer.spectral import (
    ComparisonMismatch,
    delta_map,
    nonequivariant_floer,
    spectral_pages,
    structure_theorem,
)

Z = AbelianGroupInvariants(1)
ZERO = AbelianGroupInvariants(0)


def by_name(label):
    return next(d for d in curated_instances() if d.name == label)


# -- non-equivariant homology ----------------------------------------------

def test_nonequivariant_frozen():
    empty = nonequivariant_floer(by_name("empty"), (-4, 6))
    assert all(g.is_trivial for g in empty.groups.values())

    two_step = nonequivariant_floer(by_name("two-step"), (-4, 7))
    assert two_step.groups[0] == AbelianGroupInvariants(0, (2,))
    assert two_step.groups[1] == ZERO

    pair = nonequivariant_floer(by_name("theta-coupled-pair"), (-6, 6))
    for n, group in pair.groups.items():
        assert group == (Z if n in (1, -2) else ZERO), n


# -- delta maps -------------------------------------------------------------

def test_delta_map_frozen():
    assert delta_map(by_name("theta-coupled-pair"), 0).to_dense() == [[1]]
    for k in (0, 1, 2):
        assert delta_map(by_name("empty"), k).cols == 0
    assert delta_map(by_name("euler-pair"), 0).cols == 0
    assert delta_map(by_name("two-step"), 0).cols == 0
    tail = by_name("tail-chain")
    assert delta_map(tail, 0).to_dense() == [[3]]
    assert delta_map(tail, 1).to_dense() == [[6]]


def test_delta_map_rejects_negative():
    with pytest.raises(InvalidInput):
        delta_map(by_name("empty"), -1)


# -- spectral pages ---------------------------------------------------------

def test_infinity_collapses_at_e1():
    for data in curated_instances():
        span = (max([p.grading for p in data.points] + [0])
                - min([p.grading for p in data.points] + [0]))
        top = min(4, 2 * span + 3)
        pages = spectral_pages(data, Flavor.INFINITY, top)
        for page in pages[1:]:
            for (p, q), group in page.cells.items():
                if p == 0 and q % 2 == 0:
                    assert group == Z, (data.name, page.r, p, q)
                else:
                    assert group.is_trivial, (data.name, page.r, p, q)
            for mat in page.differentials.values():
                assert mat.is_zero()


def test_plus_theta_tower_pages():
    pages = spectral_pages(by_name("empty"), Flavor.PLUS, 3)
    for page in pages[1:]:
        for (p, q), group in page.cells.items():
            expected = Z if (p == 0 and q >= 0 and q % 2 == 0) else ZERO
            assert group == expected, (page.r, p, q)


def test_plus_e1_orbit_pattern():
    # eta classes at q = 0, the theta column at p = 0, nothing else
    data = by_name("two-step")
    page1 = spectral_pages(data, Flavor.PLUS, 1)[1]
    assert page1.cells[(1, 0)] == Z
    assert page1.cells[(0, 0)] == AbelianGroupInvariants(2)
    for (p, q), group in page1.cells.items():
        if q != 0 and not (p == 0 and q > 0 and q % 2 == 0):
            assert group.is_trivial, (p, q)


def test_plus_e2_frozen_two_step():
    page2 = spectral_pages(by_name("two-step"), Flavor.PLUS, 2)[2]
    assert page2.cells[(0, 0)] == AbelianGroupInvariants(1, (2,))
    assert page2.cells[(1, 0)] == ZERO


def test_plus_d3_frozen_tail_chain():
    pages = spectral_pages(by_name("tail-chain"), Flavor.PLUS, 3)
    page3 = pages[3]
    assert page3.cells[(3, 0)] == Z
    assert page3.cells[(0, 2)] == Z
    dense = page3.differentials[(3, 0)].to_dense()
    assert dense in ([[6]], [[-6]])
    # the differential dies on the next page
    assert pages[3].cells[(3, 0)] == Z
    page4 = spectral_pages(by_name("tail-chain"), Flavor.PLUS, 4)[4]
    assert page4.cells[(3, 0)] == ZERO
    assert page4.cells[(0, 2)] == AbelianGroupInvariants(0, (6,))


def test_even_pages_have_zero_differentials():
    for label in ("two-step", "tail-chain", "euler-pair"):
        pages = spectral_pages(by_name(label), Flavor.PLUS, 4)
        for page in (pages[2], pages[4]):
            for mat in page.differentials.values():
                assert mat.is_zero(), (label, page.r)


def test_next_page_is_cellwise_homology():
    from monofloer.spectral import _page_homology_invariants, _cell

    for label in ("two-step", "tail-chain"):
        data = by_name(label)
        pages = spectral_pages(data, Flavor.PLUS, 3)
        for r in range(3):
            nxt = pages[r + 1]
            for (p, q) in pages[r].cells:
                n = p + q
                expect = _page_homology_invariants(data, Flavor.PLUS, r, p, n)
                assert nxt.cells[(p, q)] == expect, (label, r, p, q)


def test_spectral_pages_input_checks():
    with pytest.raises(InvalidInput):
        spectral_pages(by_name("empty"), Flavor.MINUS, 2)
    with pytest.raises(InvalidInput):
        spectral_pages(by_name("empty"), Flavor.PLUS, 100)
    with pytest.raises(InvalidInput):
        spectral_pages(by_name("empty"), Flavor.PLUS, -1)


# -- structure theorem ------------------------------------------------------

def test_structure_theorem_on_curated():
    for data in curated_instances():
        result = structure_theorem(data)
        assert result.matches, data.name
        assert result.predicted == result.actual


def test_structure_theorem_frozen_tail_chain():
    result = structure_theorem(by_name("tail-chain"), (-6, 9))
    assert result.predicted[2] == AbelianGroupInvariants(0, (6,))
    assert result.predicted[0] == AbelianGroupInvariants(0, (3,))
    assert result.predicted[-2] == Z
    assert result.predicted[4] == Z
    assert result.t_terms[0] == AbelianGroupInvariants(0, (3,))
    assert result.t_terms[1] == AbelianGroupInvariants(0, (6,))
    assert result.t_terms[2] == Z
    assert result.delta[1].to_dense() == [[3]]
    assert result.delta[3].to_dense() == [[6]]


def test_structure_theorem_frozen_two_step():
    result = structure_theorem(by_name("two-step"), (-4, 7))
    assert result.predicted[0] == AbelianGroupInvariants(1, (2,))
    assert result.t_terms[0] == Z


def test_structure_theorem_cyclic_t_terms():
    for data in curated_instances():
        result = structure_theorem(data)
        for t in result.t_terms.values():
            assert t.free_rank <= 1 and len(t.torsion) <= 1


def test_structure_theorem_mismatch_surfaced():
    # direct sum with the theta tower fails when an eta class hits theta
    # while also carrying even torsion from the eta differential
    data = MonopoleData.build(
        "torsion-theta-clash", [("a", 1), ("b", 0)],
        n=[("a", "b", 2), ("a", THETA, 1)])
    with pytest.raises(ComparisonMismatch) as info:
        structure_theorem(data)
    assert info.value.degree == 0
    assert info.value.predicted != info.value.actual
