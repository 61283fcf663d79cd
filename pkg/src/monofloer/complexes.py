"""Flavored chain complexes over the Omega-power bookkeeping.

Five flavors restrict which Omega-powers k a generator may carry: Infinity
takes all k, Minus takes k < 0, Plus takes k >= 0, Hat takes k = 0, and
NonEquivariant keeps only the eta generators at k = 0.  Each irreducible
point a contributes generators eta_a (degree 2k + gr(a)) and 1_a (degree
2k + gr(a) + 1); the reducible contributes 1_theta (degree 2k).  The
differential is assembled from the n and m coefficient families; targets
outside a flavor are dropped, which realizes the subcomplex and quotient
structure of the five variants at the matrix level.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

from .data import THETA, InvalidInput, MonopoleData, validate
from .intlinalg import SparseIntMatrix

__all__ = [
    "Flavor",
    "Generator",
    "DegreeSlice",
    "KIND_ETA",
    "KIND_ONE",
    "KIND_THETA",
    "generators_in_degree",
    "generator_degree",
    "differential_matrix",
    "check_d_squared",
    "structural_map",
    "default_window",
    "require_valid",
]

KIND_ETA = "eta"
KIND_ONE = "one"
KIND_THETA = "theta-one"


class Flavor(enum.Enum):
    INFINITY = "infinity"
    MINUS = "minus"
    PLUS = "plus"
    HAT = "hat"
    NONEQUIVARIANT = "noneq"


def _k_admissible(flavor: Flavor, k: int) -> bool:
    if flavor is Flavor.INFINITY:
        return True
    if flavor is Flavor.MINUS:
        return k < 0
    if flavor is Flavor.PLUS:
        return k >= 0
    return k == 0  # Hat and NonEquivariant


def _admissible(flavor: Flavor, kind: str, k: int) -> bool:
    if flavor is Flavor.NONEQUIVARIANT and kind != KIND_ETA:
        return False
    return _k_admissible(flavor, k)


@dataclass(frozen=True)
class Generator:
    kind: str
    point: str | None
    k: int


@dataclass(frozen=True)
class DegreeSlice:
    degree: int
    basis: tuple[Generator, ...]

    def index(self, gen: Generator) -> int:
        return self.basis.index(gen)


@lru_cache(maxsize=None)
def _validation_report(data: MonopoleData):
    return validate(data)


def require_valid(data: MonopoleData) -> None:
    report = _validation_report(data)
    if not report.ok:
        raise InvalidInput(f"invalid data: {report.violations[0]}")


def generator_degree(data: MonopoleData, gen: Generator) -> int:
    if gen.kind == KIND_THETA:
        return 2 * gen.k
    grading = data.grading_of(gen.point)
    if gen.kind == KIND_ETA:
        return 2 * gen.k + grading
    return 2 * gen.k + grading + 1


@lru_cache(maxsize=None)
def _slice(data: MonopoleData, flavor: Flavor, n: int) -> DegreeSlice:
    basis: list[Generator] = []
    if n % 2 == 0 and _admissible(flavor, KIND_THETA, n // 2):
        basis.append(Generator(KIND_THETA, None, n // 2))
    for p in data.points:
        gap = n - p.grading
        if gap % 2 == 0:
            kind, k = KIND_ETA, gap // 2
        else:
            kind, k = KIND_ONE, (gap - 1) // 2
        if _admissible(flavor, kind, k):
            basis.append(Generator(kind, p.id, k))
    return DegreeSlice(n, tuple(basis))


def generators_in_degree(data: MonopoleData, flavor: Flavor,
                         n: int) -> DegreeSlice:
    """The canonical degree-n basis: theta generator first, then one
    generator per point in id order (the parity of n - gr picks the kind)."""
    require_valid(data)
    return _slice(data, flavor, n)


def _image_terms(data: MonopoleData, gen: Generator):
    # the untruncated differential; flavor restriction happens at lookup
    out: list[tuple[Generator, int]] = []
    if gen.kind == KIND_ETA:
        grading = data.grading_of(gen.point)
        for b in data.ids_at(grading - 1):
            v = data.n_value(gen.point, b)
            if v:
                out.append((Generator(KIND_ETA, b, gen.k), v))
        for c in data.ids_at(grading - 2):
            v = data.m_value(gen.point, c)
            if v:
                out.append((Generator(KIND_ONE, c, gen.k), v))
        out.append((Generator(KIND_ONE, gen.point, gen.k - 1), -1))
        if grading == 1:
            v = data.n_value(gen.point, THETA)
            if v:
                out.append((Generator(KIND_THETA, None, gen.k), v))
    elif gen.kind == KIND_ONE:
        grading = data.grading_of(gen.point)
        for b in data.ids_at(grading - 1):
            v = data.n_value(gen.point, b)
            if v:
                out.append((Generator(KIND_ONE, b, gen.k), -v))
    else:
        for d in data.ids_at(-2):
            v = data.n_value(THETA, d)
            if v:
                out.append((Generator(KIND_ONE, d, gen.k), v))
    return out


@lru_cache(maxsize=None)
def _differential(data: MonopoleData, flavor: Flavor, n: int) -> SparseIntMatrix:
    cols = _slice(data, flavor, n)
    rows = _slice(data, flavor, n - 1)
    index = {g: i for i, g in enumerate(rows.basis)}
    items = []
    for j, gen in enumerate(cols.basis):
        for (target, value) in _image_terms(data, gen):
            i = index.get(target)
            if i is not None:
                items.append((i, j, value))
    return SparseIntMatrix.from_entries(len(rows.basis), len(cols.basis), items)


def differential_matrix(data: MonopoleData, flavor: Flavor,
                        n: int) -> SparseIntMatrix:
    """Matrix of D from the degree-n basis to the degree-(n-1) basis."""
    require_valid(data)
    return _differential(data, flavor, n)


def check_d_squared(data: MonopoleData, flavor: Flavor,
                    window: tuple[int, int]) -> bool:
    """True iff D composed with D vanishes at every degree of the window.

    Validity of the data is deliberately not required here: on defective
    coefficients this check is exactly what detects the broken identity.
    """
    lo, hi = window
    for n in range(lo, hi + 1):
        if not _differential(data, flavor, n - 1).mul(
                _differential(data, flavor, n)).is_zero():
            return False
    return True


def _identification(rows: DegreeSlice, cols: DegreeSlice,
                    shift_k: int = 0) -> SparseIntMatrix:
    index = {g: i for i, g in enumerate(rows.basis)}
    items = []
    for j, gen in enumerate(cols.basis):
        target = Generator(gen.kind, gen.point, gen.k + shift_k)
        i = index.get(target)
        if i is not None:
            items.append((i, j, 1))
    return SparseIntMatrix.from_entries(len(rows.basis), len(cols.basis), items)


def structural_map(data: MonopoleData, which: str, flavor: Flavor,
                   n: int) -> SparseIntMatrix:
    """One of the canonical comparison maps, in degree n.

    inclusion_minus embeds the Minus slice into Infinity (flavor must be
    Infinity); projection_plus maps Infinity onto Plus; inclusion_hat embeds
    Hat into Plus; omega_inverse lowers k by one within the given flavor,
    mapping degree n to degree n - 2 and dropping truncated targets.
    """
    require_valid(data)
    if which == "inclusion_minus":
        if flavor is not Flavor.INFINITY:
            raise InvalidInput("inclusion_minus lives in the Infinity flavor")
        return _identification(_slice(data, Flavor.INFINITY, n),
                               _slice(data, Flavor.MINUS, n))
    if which == "projection_plus":
        if flavor is not Flavor.INFINITY:
            raise InvalidInput("projection_plus lives in the Infinity flavor")
        return _identification(_slice(data, Flavor.PLUS, n),
                               _slice(data, Flavor.INFINITY, n))
    if which == "inclusion_hat":
        if flavor is not Flavor.PLUS:
            raise InvalidInput("inclusion_hat lives in the Plus flavor")
        return _identification(_slice(data, Flavor.PLUS, n),
                               _slice(data, Flavor.HAT, n))
    if which == "omega_inverse":
        if flavor not in (Flavor.INFINITY, Flavor.MINUS, Flavor.PLUS,
                          Flavor.HAT):
            raise InvalidInput(
                "omega_inverse undefined for the non-equivariant flavor")
        return _identification(_slice(data, flavor, n - 2),
                               _slice(data, flavor, n), shift_k=-1)
    raise InvalidInput(f"unknown structural map: {which}")


def default_window(data: MonopoleData) -> tuple[int, int]:
    """Degree interval covering all interesting homology plus the onset of
    the periodic tails: gradings (and the theta level 0) padded by 4 below
    and 6 above."""
    gradings = [p.grading for p in data.points] + [0]
    return (min(gradings) - 4, max(gradings) + 6)
