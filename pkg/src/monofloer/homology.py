"""Homology of the flavored complexes, with recorded generators.

Every degree gets a pinned presentation: a primitive basis of the cycle
lattice, the boundary columns expressed in it, and generators read off the
Smith form.  Graded reports carry the in-window groups plus symbolic
2-periodic tail descriptors whose periodicity was verified on the complex
itself.  Chain maps induce matrices on the recorded generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .complexes import Flavor, MonopoleData, _differential, _slice, \
    default_window, require_valid
from .data import InvalidInput
from .intlinalg import (
    AbelianGroupInvariants,
    QuotientPresentation,
    SparseIntMatrix,
    kernel_basis,
)

__all__ = [
    "Tail",
    "GradedAbelianGroup",
    "ChainMapSlice",
    "HomologyClassMap",
    "NotChainMap",
    "WindowTooSmall",
    "homology_at",
    "presentation_at",
    "graded_homology",
    "induced_on_homology",
    "structural_chain_map",
    "identity_chain_map",
]

TRIVIAL = AbelianGroupInvariants(0)


class NotChainMap(Exception):
    """The alleged chain map fails to commute with the differentials."""

    def __init__(self, degree: int):
        super().__init__(f"does not commute with the differential at degree "
                         f"{degree}")
        self.degree = degree


class WindowTooSmall(Exception):
    """The chain map does not cover the requested window plus margin."""


@dataclass(frozen=True)
class Tail:
    """2-periodic continuation beyond one end of a window."""

    even: AbelianGroupInvariants
    odd: AbelianGroupInvariants
    verified: bool


@dataclass(frozen=True)
class GradedAbelianGroup:
    window: tuple[int, int]
    groups: dict[int, AbelianGroupInvariants]
    tail_above: Tail | None
    tail_below: Tail | None


@dataclass(frozen=True)
class ChainMapSlice:
    """Per-degree matrices of a chain map with a uniform degree shift; the
    degree-n matrix maps the source degree-n basis to the target degree-
    (n + shift) basis."""

    source: Flavor
    target: Flavor
    shift: int
    matrices: dict[int, SparseIntMatrix]


@dataclass(frozen=True)
class HomologyClassMap:
    """Action on homology: the degree-n matrix sends coordinates on the
    recorded source generators at n to coordinates on the recorded target
    generators at n + shift."""

    source: Flavor
    target: Flavor
    shift: int
    window: tuple[int, int]
    matrices: dict[int, SparseIntMatrix]


@lru_cache(maxsize=None)
def presentation_at(data: MonopoleData, flavor: Flavor,
                    n: int) -> QuotientPresentation:
    """Cycle lattice, boundary columns, and pinned generators in degree n."""
    require_valid(data)
    cycles = kernel_basis(_differential(data, flavor, n))
    boundaries = _differential(data, flavor, n + 1)
    return QuotientPresentation(cycles, boundaries)


def homology_at(data: MonopoleData, flavor: Flavor,
                n: int) -> AbelianGroupInvariants:
    return presentation_at(data, flavor, n).invariants


# ---------------------------------------------------------------------------
# graded reports with tails
# ---------------------------------------------------------------------------

def _support_floor(data: MonopoleData, flavor: Flavor) -> int | None:
    gradings = [p.grading for p in data.points]
    if flavor is Flavor.PLUS:
        return min(gradings + [0])
    if flavor is Flavor.HAT:
        return min(gradings + [0])
    if flavor is Flavor.NONEQUIVARIANT:
        return min(gradings) if gradings else 0
    return None


def _support_ceiling(data: MonopoleData, flavor: Flavor) -> int | None:
    gradings = [p.grading for p in data.points]
    if flavor is Flavor.MINUS:
        return max([g - 1 for g in gradings] + [-2])
    if flavor is Flavor.HAT:
        return max([g + 1 for g in gradings] + [0])
    if flavor is Flavor.NONEQUIVARIANT:
        return max(gradings) if gradings else -1
    return None


def _periodic_tail(data: MonopoleData, flavor: Flavor,
                   groups: dict[int, AbelianGroupInvariants],
                   edge: int, inward: int, direction: int) -> Tail | None:
    # the two edge degrees, provided the differential is verified to repeat
    for n in (edge - direction, edge, edge + direction):
        if _differential(data, flavor, n) != _differential(
                data, flavor, n + 2 * direction):
            return None
    pair = {m % 2: groups[m] for m in (edge, inward)}
    return Tail(even=pair[0], odd=pair[1], verified=True)


def _empty_tail(data: MonopoleData, flavor: Flavor, edge: int,
                direction: int) -> Tail | None:
    for n in (edge + direction, edge + 2 * direction):
        if _slice(data, flavor, n).basis:
            return None
    return Tail(even=TRIVIAL, odd=TRIVIAL, verified=True)


def graded_homology(data: MonopoleData, flavor: Flavor,
                    window: tuple[int, int] | None = None) -> GradedAbelianGroup:
    """Homology across the window plus tail descriptors where the complex is
    verified to repeat with period two (or to vanish) beyond the edges."""
    require_valid(data)
    if window is None:
        window = default_window(data)
    lo, hi = window
    if lo > hi:
        raise InvalidInput("empty degree window")
    groups = {n: homology_at(data, flavor, n) for n in range(lo, hi + 1)}
    gradings = [p.grading for p in data.points] + [0]

    tail_above: Tail | None = None
    tail_below: Tail | None = None
    if flavor is Flavor.INFINITY:
        if hi - 1 >= lo:
            tail_above = _periodic_tail(data, flavor, groups, hi, hi - 1, +1)
            tail_below = _periodic_tail(data, flavor, groups, lo, lo + 1, -1)
    else:
        ceiling = _support_ceiling(data, flavor)
        if ceiling is not None and hi >= ceiling:
            tail_above = _empty_tail(data, flavor, hi, +1)
        elif flavor is Flavor.PLUS and hi - 1 >= max(gradings) + 3:
            tail_above = _periodic_tail(data, flavor, groups, hi, hi - 1, +1)
        floor = _support_floor(data, flavor)
        if floor is not None and lo <= floor:
            tail_below = _empty_tail(data, flavor, lo, -1)
        elif flavor is Flavor.MINUS and lo + 1 <= min(gradings) - 3:
            tail_below = _periodic_tail(data, flavor, groups, lo, lo + 1, -1)
    return GradedAbelianGroup(window, groups, tail_above, tail_below)


# ---------------------------------------------------------------------------
# induced maps
# ---------------------------------------------------------------------------

def induced_on_homology(data: MonopoleData, source: Flavor, target: Flavor,
                        chain_map: ChainMapSlice,
                        window: tuple[int, int]) -> HomologyClassMap:
    """Action of a chain map on the recorded homology generators.

    Commutation with the differentials is checked over the window plus one
    degree of margin; failure raises NotChainMap with the offending degree.
    """
    require_valid(data)
    if chain_map.source is not source or chain_map.target is not target:
        raise InvalidInput("chain map flavors disagree with the arguments")
    lo, hi = window
    shift = chain_map.shift
    for n in range(lo - 1, hi + 2):
        if n not in chain_map.matrices:
            raise WindowTooSmall(f"chain map lacks the degree-{n} slice")
        mat = chain_map.matrices[n]
        want_cols = len(_slice(data, source, n).basis)
        want_rows = len(_slice(data, target, n + shift).basis)
        if (mat.rows, mat.cols) != (want_rows, want_cols):
            raise InvalidInput(f"degree-{n} slice has the wrong shape")
    for n in range(lo, hi + 2):
        left = _differential(data, target, n + shift).mul(chain_map.matrices[n])
        right = chain_map.matrices[n - 1].mul(_differential(data, source, n))
        if left != right:
            raise NotChainMap(n)

    matrices: dict[int, SparseIntMatrix] = {}
    for n in range(lo, hi + 1):
        src = presentation_at(data, source, n)
        tgt = presentation_at(data, target, n + shift)
        columns = [tgt.coordinate_of(chain_map.matrices[n].apply(g.vector))
                   for g in src.generators]
        matrices[n] = SparseIntMatrix.from_columns(len(tgt.generators), columns)
    return HomologyClassMap(source, target, shift, window, matrices)


_STRUCTURAL = {
    "inclusion_minus": (Flavor.MINUS, Flavor.INFINITY, Flavor.INFINITY),
    "projection_plus": (Flavor.INFINITY, Flavor.PLUS, Flavor.INFINITY),
    "inclusion_hat": (Flavor.HAT, Flavor.PLUS, Flavor.PLUS),
}


def structural_chain_map(data: MonopoleData, which: str,
                         window: tuple[int, int],
                         flavor: Flavor | None = None) -> ChainMapSlice:
    """Bundle a structural map over the window (plus margin) as a chain map."""
    from .complexes import structural_map
    lo, hi = window
    if which == "omega_inverse":
        if flavor is None:
            raise InvalidInput("omega_inverse needs a flavor")
        source = target = flavor
        ambient = flavor
        shift = -2
    elif which in _STRUCTURAL:
        source, target, ambient = _STRUCTURAL[which]
        shift = 0
    else:
        raise InvalidInput(f"unknown structural map: {which}")
    matrices = {n: structural_map(data, which, ambient, n)
                for n in range(lo - 2, hi + 3)}
    return ChainMapSlice(source, target, shift, matrices)


def identity_chain_map(data: MonopoleData, flavor: Flavor,
                       window: tuple[int, int]) -> ChainMapSlice:
    lo, hi = window
    matrices = {
        n: SparseIntMatrix.identity(len(_slice(data, flavor, n).basis))
        for n in range(lo - 2, hi + 3)}
    return ChainMapSlice(flavor, flavor, 0, matrices)
