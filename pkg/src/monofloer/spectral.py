"""Index-filtration spectral sequence and the Plus-flavor structure theorem.

The complexes are filtered by the grading of the underlying critical point,
with the reducible orbit at filtration zero.  Pages are computed exactly
from approximation lattices: the page-r cell at filtration p is the group
of filtration-p chains whose boundary drops r filtration levels, modulo
lower chains and boundaries from above.  The structure theorem assembles a
prediction for every Plus degree out of the non-equivariant homology, the
delta maps, and the cyclic tower terms, then compares it with the directly
computed homology and refuses to paper over a disagreement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .complexes import (
    Flavor,
    Generator,
    KIND_ETA,
    KIND_THETA,
    MonopoleData,
    _differential,
    _slice,
    default_window,
    require_valid,
)
from .data import InvalidInput, THETA
from .homology import graded_homology, homology_at, presentation_at, \
    GradedAbelianGroup
from .intlinalg import (
    AbelianGroupInvariants,
    QuotientPresentation,
    SparseIntMatrix,
    column_space_basis,
    hstack,
    kernel_basis,
    preimage_lattice,
    subquotient_invariants,
)

__all__ = [
    "ComparisonMismatch",
    "SpectralPage",
    "StructureTheoremResult",
    "nonequivariant_floer",
    "delta_map",
    "spectral_pages",
    "structure_theorem",
]

_PAGE_FLAVORS = frozenset((Flavor.INFINITY, Flavor.PLUS))


class ComparisonMismatch(Exception):
    """Predicted and directly computed groups disagree in one degree."""

    def __init__(self, degree: int, predicted: AbelianGroupInvariants,
                 actual: AbelianGroupInvariants):
        super().__init__(
            f"degree {degree}: structure prediction {predicted} but direct "
            f"computation {actual}")
        self.degree = degree
        self.predicted = predicted
        self.actual = actual


@dataclass(frozen=True)
class SpectralPage:
    """One page: cell groups by (filtration, complement) and the outgoing
    differentials, each dropping r filtration levels and one total degree."""

    r: int
    cells: dict[tuple[int, int], AbelianGroupInvariants]
    differentials: dict[tuple[int, int], SparseIntMatrix]


@dataclass(frozen=True)
class StructureTheoremResult:
    """Prediction, direct values, and the ingredients that built it."""

    window: tuple[int, int]
    predicted: dict[int, AbelianGroupInvariants]
    actual: dict[int, AbelianGroupInvariants]
    delta: dict[int, SparseIntMatrix]
    t_terms: dict[int, AbelianGroupInvariants]
    matches: bool


# ---------------------------------------------------------------------------
# approximation lattices
# ---------------------------------------------------------------------------

def _filtration_of(data: MonopoleData, gen: Generator) -> int:
    if gen.kind == KIND_THETA:
        return 0
    return data.grading_of(gen.point)


def _filtration_levels(data: MonopoleData) -> list[int]:
    return sorted({p.grading for p in data.points} | {0})


@lru_cache(maxsize=None)
def _sub_inclusion(data: MonopoleData, flavor: Flavor, n: int,
                   p: int) -> SparseIntMatrix:
    """Inclusion of the filtration-p part of the degree-n slice."""
    basis = _slice(data, flavor, n).basis
    cols = [i for i, gen in enumerate(basis) if _filtration_of(data, gen) <= p]
    return SparseIntMatrix.from_entries(
        len(basis), len(cols), [(i, j, 1) for j, i in enumerate(cols)])


@lru_cache(maxsize=None)
def _high_rows(data: MonopoleData, flavor: Flavor, n: int,
               p: int) -> SparseIntMatrix:
    """Projection of the degree-n slice onto filtration above p."""
    basis = _slice(data, flavor, n).basis
    rows = [i for i, gen in enumerate(basis) if _filtration_of(data, gen) > p]
    return SparseIntMatrix.from_entries(
        len(rows), len(basis), [(j, i, 1) for j, i in enumerate(rows)])


@lru_cache(maxsize=None)
def _a_lattice(data: MonopoleData, flavor: Flavor, n: int, p: int,
               r: int) -> SparseIntMatrix:
    """Degree-n chains of filtration at most p whose boundary has
    filtration at most p - r; for negative r, all of filtration p."""
    incl = _sub_inclusion(data, flavor, n, p)
    if r < 0:
        return incl
    dropped = _high_rows(data, flavor, n - 1, p - r).mul(
        _differential(data, flavor, n).mul(incl))
    return incl.mul(kernel_basis(dropped))


@lru_cache(maxsize=None)
def _den_lattice(data: MonopoleData, flavor: Flavor, r: int, p: int,
                 n: int) -> SparseIntMatrix:
    below = _a_lattice(data, flavor, n, p - 1, r - 1)
    above = _differential(data, flavor, n + 1).mul(
        _a_lattice(data, flavor, n + 1, p + r - 1, r - 1))
    return hstack(below, above)


@lru_cache(maxsize=None)
def _cell(data: MonopoleData, flavor: Flavor, r: int, p: int,
          n: int) -> QuotientPresentation:
    return QuotientPresentation(_a_lattice(data, flavor, n, p, r),
                                _den_lattice(data, flavor, r, p, n))


@lru_cache(maxsize=None)
def _dr_matrix(data: MonopoleData, flavor: Flavor, r: int, p: int,
               n: int) -> SparseIntMatrix:
    """Page-r differential out of the cell at filtration p, degree n."""
    source = _cell(data, flavor, r, p, n)
    target = _cell(data, flavor, r, p - r, n - 1)
    d_n = _differential(data, flavor, n)
    columns = [target.coordinate_of(d_n.apply(g.vector))
               for g in source.generators]
    return SparseIntMatrix.from_columns(len(target.generators), columns)


def _page_homology_invariants(data: MonopoleData, flavor: Flavor, r: int,
                              p: int, n: int) -> AbelianGroupInvariants:
    """Kernel modulo image of the page-r differentials at one cell,
    computed on the underlying lattices."""
    lattice = _a_lattice(data, flavor, n, p, r)
    target_den = _den_lattice(data, flavor, r, p - r, n - 1)
    pre = preimage_lattice(
        _differential(data, flavor, n).mul(lattice), target_den)
    numerator = column_space_basis(lattice.mul(pre))
    image = _differential(data, flavor, n + 1).mul(
        _a_lattice(data, flavor, n + 1, p + r, r))
    denominator = hstack(_den_lattice(data, flavor, r, p, n), image)
    return subquotient_invariants(numerator, denominator)


def _composite_vanishes(second: SparseIntMatrix, first: SparseIntMatrix,
                        orders: tuple[int, ...]) -> bool:
    product = second.mul(first)
    for (i, _, v) in product.entries:
        if orders[i] == 0:
            if v != 0:
                return False
        elif v % orders[i] != 0:
            return False
    return True


def _check_d3_formula(data: MonopoleData, flavor: Flavor, p: int,
                      n: int) -> None:
    """The page-3 differential out of a filtration-3 cell must act by the
    two-step coefficient product into the reducible tower."""
    j = (n - 3) // 2
    source = _cell(data, flavor, 3, p, n)
    target = _cell(data, flavor, 3, 0, n - 1)
    basis_n = _slice(data, flavor, n).basis
    basis_m = _slice(data, flavor, n - 1).basis
    try:
        theta_idx = basis_m.index(Generator(KIND_THETA, None, j + 1))
    except ValueError:
        return
    mat = _dr_matrix(data, flavor, 3, p, n)
    for col, gen in enumerate(source.generators):
        total = 0
        for i, coeff in enumerate(gen.vector):
            g = basis_n[i]
            if coeff and g.kind == KIND_ETA and data.grading_of(g.point) == 3:
                total += coeff * sum(
                    data.m_value(g.point, c) * data.n_value(c, THETA)
                    for c in data.ids_at(1))
        predicted = [0] * len(basis_m)
        predicted[theta_idx] = total
        if target.coordinate_of(predicted) != tuple(mat.column(col)):
            raise AssertionError(
                f"page-3 differential at filtration 3, degree {n} deviates "
                "from the coefficient-product formula")


def spectral_pages(data: MonopoleData, flavor: Flavor,
                   up_to_r: int) -> list[SpectralPage]:
    """Pages 0 through up_to_r of the filtration spectral sequence.

    Cells cover the filtration levels present in the data crossed with the
    default degree window.  Every page is checked: composing consecutive
    differentials yields zero, even pages past the first carry no
    differential, and on Plus the page-3 maps into the reducible tower
    match the coefficient-product formula.
    """
    require_valid(data)
    if flavor not in _PAGE_FLAVORS:
        raise InvalidInput(
            "spectral pages exist for the infinity and plus flavors only")
    levels = _filtration_levels(data)
    span = levels[-1] - levels[0]
    if not 0 <= up_to_r <= 2 * span + 3:
        raise InvalidInput(
            f"page bound must lie in [0, {2 * span + 3}] for this data")
    lo, hi = default_window(data)

    pages = []
    for r in range(up_to_r + 1):
        cells = {}
        diffs = {}
        for p in levels:
            for n in range(lo, hi + 1):
                q = n - p
                cells[(p, q)] = _cell(data, flavor, r, p, n).invariants
                diffs[(p, q)] = _dr_matrix(data, flavor, r, p, n)
        for (p, q), mat in diffs.items():
            n = p + q
            follow = _dr_matrix(data, flavor, r, p - r, n - 1)
            orders = tuple(
                g.order for g in
                _cell(data, flavor, r, p - 2 * r, n - 2).generators)
            if not _composite_vanishes(follow, mat, orders):
                raise AssertionError(
                    f"page-{r} differentials fail to square to zero at "
                    f"({p}, {q})")
            if r >= 2 and r % 2 == 0 and not mat.is_zero():
                raise AssertionError(
                    f"even page {r} carries a nonzero differential at "
                    f"({p}, {q})")
        if flavor is Flavor.PLUS and r == 3:
            for p in levels:
                if p != 3:
                    continue
                for n in range(lo, hi + 1):
                    if n - 3 >= 0 and (n - 3) % 2 == 0:
                        _check_d3_formula(data, flavor, p, n)
        pages.append(SpectralPage(r, cells, diffs))
    return pages


# ---------------------------------------------------------------------------
# the structure theorem
# ---------------------------------------------------------------------------

def nonequivariant_floer(data: MonopoleData,
                         window: tuple[int, int] | None = None
                         ) -> GradedAbelianGroup:
    """Homology of the plain critical-point complex, graded by grading."""
    return graded_homology(data, Flavor.NONEQUIVARIANT, window)


def delta_map(data: MonopoleData, k: int) -> SparseIntMatrix:
    """Row matrix of the degree-(2k+1) obstruction on recorded generators.

    Pushes a class down through the even coefficient matrices from grading
    2k+1 to grading 1, then pairs with the reducible coupling column.
    Torsion generators must map to zero and are asserted to do so.
    """
    require_valid(data)
    if k < 0:
        raise InvalidInput("the obstruction maps live in odd degrees 2k+1, "
                           "k nonnegative")
    pres = presentation_at(data, Flavor.NONEQUIVARIANT, 2 * k + 1)
    basis = _slice(data, Flavor.NONEQUIVARIANT, 2 * k + 1).basis
    entries = []
    for col, gen in enumerate(pres.generators):
        x = {basis[i].point: c for i, c in enumerate(gen.vector) if c}
        gr = 2 * k + 1
        while gr > 1:
            x = {c: sum(v * data.m_value(a, c) for a, v in x.items())
                 for c in data.ids_at(gr - 2)}
            gr -= 2
        value = sum(v * data.n_value(a, THETA) for a, v in x.items())
        if gen.order != 0 and value != 0:
            raise AssertionError(
                "a torsion class produced a nonzero obstruction value")
        if value:
            entries.append((0, col, value))
    return SparseIntMatrix.from_entries(1, len(pres.generators), entries)


def _t_term(c: int) -> AbelianGroupInvariants:
    if c == 0:
        return AbelianGroupInvariants(1)
    if c == 1:
        return AbelianGroupInvariants(0)
    return AbelianGroupInvariants(0, (c,))


def structure_theorem(data: MonopoleData,
                      window: tuple[int, int] | None = None
                      ) -> StructureTheoremResult:
    """Predicted Plus homology versus the direct computation, per degree.

    Negative degrees copy the non-equivariant groups; positive odd degrees
    take the kernel of the obstruction row; even degrees adjoin the cyclic
    tower term.  A disagreement raises ComparisonMismatch with both values.
    """
    require_valid(data)
    if window is None:
        window = default_window(data)
    lo, hi = window

    delta = {}
    free_values = {}
    for k in range(hi // 2 + 1):
        mat = delta_map(data, k)
        delta[2 * k + 1] = mat
        pres = presentation_at(data, Flavor.NONEQUIVARIANT, 2 * k + 1)
        row = mat.to_dense()[0] if mat.cols else []
        free_values[k] = [row[j] for j, g in enumerate(pres.generators)
                          if g.order == 0]

    t_terms = {k: _t_term(math.gcd(*vals) if (vals := free_values[k]) else 0)
               for k in free_values}

    predicted = {}
    for n in range(lo, hi + 1):
        if n < 0:
            predicted[n] = homology_at(data, Flavor.NONEQUIVARIANT, n)
        elif n % 2 == 0:
            predicted[n] = homology_at(
                data, Flavor.NONEQUIVARIANT, n).direct_sum(t_terms[n // 2])
        else:
            base = homology_at(data, Flavor.NONEQUIVARIANT, n)
            vals = free_values[(n - 1) // 2]
            drop = 1 if any(vals) else 0
            predicted[n] = AbelianGroupInvariants(base.free_rank - drop,
                                                  base.torsion)

    actual = graded_homology(data, Flavor.PLUS, window).groups
    for n in range(lo, hi + 1):
        if predicted[n] != actual[n]:
            raise ComparisonMismatch(n, predicted[n], actual[n])
    return StructureTheoremResult(window, predicted, actual, delta, t_terms,
                                  True)
