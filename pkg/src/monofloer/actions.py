"""Degree -2 module action on the equivariant complexes.

The variable u acts on each complex flavor that carries the full polynomial
module structure (Infinity, Minus, Plus).  On the chain level u is homotopic
to the omega-inverse shift; the homotopy lowers degree by one and witnesses
the identity u - omega_inverse = D.H + H.D exactly.  On homology the two
maps therefore induce the same endomorphism, and on Plus that endomorphism
is nilpotent on every class.
"""

from __future__ import annotations

from .complexes import (
    Flavor,
    Generator,
    KIND_ETA,
    KIND_ONE,
    KIND_THETA,
    MonopoleData,
    _slice,
    default_window,
    require_valid,
)
from .data import THETA, InvalidInput
from .homology import ChainMapSlice, HomologyClassMap, induced_on_homology, \
    structural_chain_map
from .intlinalg import SparseIntMatrix

_U_FLAVORS = frozenset((Flavor.INFINITY, Flavor.MINUS, Flavor.PLUS))


def _u_terms(data, gen):
    """Untruncated image of one generator under u, as (generator, coeff)."""
    gr = data.grading_of(gen.point) if gen.kind != KIND_THETA else 0
    if gen.kind == KIND_ETA:
        for c in data.ids_at(gr - 2):
            coeff = data.m_value(gen.point, c)
            if coeff:
                yield Generator(KIND_ETA, c, gen.k), coeff
    elif gen.kind == KIND_ONE:
        for c in data.ids_at(gr - 2):
            coeff = data.m_value(gen.point, c)
            if coeff:
                yield Generator(KIND_ONE, c, gen.k), coeff
        if gr == 1:
            coeff = data.n_value(gen.point, THETA)
            if coeff:
                yield Generator(KIND_THETA, None, gen.k), coeff
    else:
        for d in data.ids_at(-2):
            coeff = data.n_value(THETA, d)
            if coeff:
                yield Generator(KIND_ETA, d, gen.k), coeff
        yield Generator(KIND_THETA, None, gen.k - 1), 1


def u_chain_map(data: MonopoleData, flavor: Flavor, n: int) -> SparseIntMatrix:
    """Matrix of u from the degree-n slice to the degree-(n-2) slice."""
    if flavor not in _U_FLAVORS:
        raise InvalidInput(
            "u is defined only on the infinity, minus, and plus flavors")
    require_valid(data)
    source = _slice(data, flavor, n)
    target = _slice(data, flavor, n - 2)
    index = {gen: i for i, gen in enumerate(target.basis)}
    entries = []
    for col, gen in enumerate(source.basis):
        for image, coeff in _u_terms(data, gen):
            row = index.get(image)
            if row is not None:
                entries.append((row, col, coeff))
    return SparseIntMatrix.from_entries(len(target.basis), len(source.basis),
                                        entries)


def homotopy_h(flavor: Flavor, n: int, data: MonopoleData) -> SparseIntMatrix:
    """Matrix of the homotopy from the degree-n slice to degree n-1.

    Sends each generator 1_a to eta_a at the same power of Omega and kills
    eta and theta generators.
    """
    require_valid(data)
    source = _slice(data, flavor, n)
    target = _slice(data, flavor, n - 1)
    index = {gen: i for i, gen in enumerate(target.basis)}
    entries = []
    for col, gen in enumerate(source.basis):
        if gen.kind != KIND_ONE:
            continue
        row = index.get(Generator(KIND_ETA, gen.point, gen.k))
        if row is not None:
            entries.append((row, col, 1))
    return SparseIntMatrix.from_entries(len(target.basis), len(source.basis),
                                        entries)


def verify_u_homotopy(data: MonopoleData, flavor: Flavor,
                      window: tuple[int, int]) -> bool:
    """Check u - omega_inverse = D.H + H.D degree by degree on the window."""
    from .complexes import _differential, structural_map

    if flavor not in _U_FLAVORS:
        raise InvalidInput(
            "u is defined only on the infinity, minus, and plus flavors")
    require_valid(data)
    lo, hi = window
    for n in range(lo, hi + 1):
        lhs = u_chain_map(data, flavor, n).sub(
            structural_map(data, "omega_inverse", flavor, n))
        rhs = _differential(data, flavor, n - 1).mul(
            homotopy_h(flavor, n, data)).add(
            homotopy_h(flavor, n - 1, data).mul(
                _differential(data, flavor, n)))
        if lhs != rhs:
            return False
    return True


def u_module_structure(data: MonopoleData, flavor: Flavor,
                       window: tuple[int, int] | None = None
                       ) -> HomologyClassMap:
    """Endomorphism induced by u on graded homology over the window.

    Asserts degreewise equality with the map induced by omega_inverse
    before returning.
    """
    if flavor not in _U_FLAVORS:
        raise InvalidInput(
            "u is defined only on the infinity, minus, and plus flavors")
    require_valid(data)
    if window is None:
        window = default_window(data)
    lo, hi = window
    matrices = {n: u_chain_map(data, flavor, n)
                for n in range(lo - 2, hi + 3)}
    induced = induced_on_homology(
        data, flavor, flavor,
        ChainMapSlice(flavor, flavor, -2, matrices), window)
    omega = induced_on_homology(
        data, flavor, flavor,
        structural_chain_map(data, "omega_inverse", window, flavor=flavor),
        window)
    for n in range(lo, hi + 1):
        if induced.matrices[n] != omega.matrices[n]:
            raise AssertionError(
                "induced u differs from induced omega-inverse at degree "
                f"{n}")
    return induced
