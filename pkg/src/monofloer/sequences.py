"""The two long exact sequences and the reduced homology group.

The main sequence threads Minus into Infinity, projects onto Plus, and
closes up with a connecting map built from the identity lift of Plus
cycles.  The hat sequence arises from the degreewise split short exact
sequence whose quotient map is omega-inverse.  Exactness at each node is
checked as an equality of subgroup lattices inside the cycle lattice, so
torsion failures cannot hide behind rank counts.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import (
    Flavor,
    MonopoleData,
    _differential,
    _identification,
    _slice,
    default_window,
    require_valid,
    structural_map,
)
from .homology import GradedAbelianGroup, Tail, TRIVIAL, presentation_at
from .intlinalg import (
    AbelianGroupInvariants,
    SparseIntMatrix,
    column_space_basis,
    first_column_outside,
    hstack,
    kernel_basis,
    lattice_contains,
    subquotient_invariants,
)

__all__ = [
    "LiftError",
    "MismatchError",
    "NodeReport",
    "ExactnessReport",
    "HatSequenceReport",
    "connecting_delta",
    "check_les_main",
    "hf_red",
    "check_les_hat",
]


class LiftError(Exception):
    """A lifted cycle failed to land in the expected subcomplex."""


class MismatchError(Exception):
    """The two computations of the reduced group disagree in one degree."""

    def __init__(self, degree: int, cokernel: AbelianGroupInvariants,
                 kernel: AbelianGroupInvariants):
        super().__init__(
            f"degree {degree}: cokernel of the projection is {cokernel} but "
            f"the kernel of the inclusion is {kernel}")
        self.degree = degree
        self.cokernel = cokernel
        self.kernel = kernel


@dataclass(frozen=True)
class NodeReport:
    """Exactness data at one node of a long exact sequence."""

    degree: int
    node: str
    image: AbelianGroupInvariants
    kernel: AbelianGroupInvariants
    exact: bool
    witness: tuple[str, tuple[int, ...]] | None


@dataclass(frozen=True)
class ExactnessReport:
    window: tuple[int, int]
    nodes: tuple[NodeReport, ...]

    def all_exact(self) -> bool:
        return all(node.exact for node in self.nodes)

    def node(self, degree: int, name: str) -> NodeReport:
        for node in self.nodes:
            if node.degree == degree and node.node == name:
                return node
        raise KeyError((degree, name))


@dataclass(frozen=True)
class HatSequenceReport(ExactnessReport):
    hat_nonzero: bool
    plus_nonzero: bool
    biconditional_holds: bool


# ---------------------------------------------------------------------------
# connecting maps at the chain level
# ---------------------------------------------------------------------------

def _restriction(data, sub: Flavor, ambient: Flavor, n: int) -> SparseIntMatrix:
    return _identification(_slice(data, sub, n), _slice(data, ambient, n))


def _check_lands_in(data, sub: Flavor, ambient: Flavor, n: int,
                    vectors: SparseIntMatrix) -> None:
    """Every column must be supported on the sub-flavor's generators."""
    down = _restriction(data, sub, ambient, n)
    back = _identification(_slice(data, ambient, n), _slice(data, sub, n))
    if vectors != back.mul(down.mul(vectors)):
        raise LiftError(
            f"a lifted boundary in degree {n} escapes the subcomplex")


def _delta_chain(data: MonopoleData, n: int) -> SparseIntMatrix:
    """Chain-level connecting map of the main sequence in degree n.

    Lifts a Plus chain identically into Infinity, applies the Infinity
    differential, and restricts to the Minus generators.  Faithful on
    cycles, whose images lie entirely in the Minus subcomplex.
    """
    lift = _identification(_slice(data, Flavor.INFINITY, n),
                           _slice(data, Flavor.PLUS, n))
    image = _differential(data, Flavor.INFINITY, n).mul(lift)
    return _restriction(data, Flavor.MINUS, Flavor.INFINITY, n - 1).mul(image)


def _hat_delta_chain(data: MonopoleData, n: int) -> SparseIntMatrix:
    """Chain-level connecting map of the hat sequence, degree n to n + 1.

    Sections omega-inverse by raising the Omega power, applies the Plus
    differential, and restricts to the power-zero generators.
    """
    section = _identification(_slice(data, Flavor.PLUS, n + 2),
                              _slice(data, Flavor.PLUS, n), shift_k=1)
    image = _differential(data, Flavor.PLUS, n + 2).mul(section)
    return _restriction(data, Flavor.HAT, Flavor.PLUS, n + 1).mul(image)


def connecting_delta(data: MonopoleData, n: int) -> SparseIntMatrix:
    """Matrix of the connecting map on recorded generators, degree n of
    Plus to degree n - 1 of Minus.

    Checks that each lifted cycle's boundary lies in the Minus subcomplex
    and that lifting a Plus boundary yields the zero class, so the result
    does not depend on the chosen representatives.
    """
    require_valid(data)
    lift = _identification(_slice(data, Flavor.INFINITY, n),
                           _slice(data, Flavor.PLUS, n))
    d_inf = _differential(data, Flavor.INFINITY, n)
    source = presentation_at(data, Flavor.PLUS, n)
    target = presentation_at(data, Flavor.MINUS, n - 1)

    reps = SparseIntMatrix.from_columns(
        lift.cols, [list(g.vector) for g in source.generators])
    raw = d_inf.mul(lift.mul(reps))
    _check_lands_in(data, Flavor.MINUS, Flavor.INFINITY, n - 1, raw)

    boundaries = _differential(data, Flavor.PLUS, n + 1)
    raw_bd = d_inf.mul(lift.mul(boundaries))
    _check_lands_in(data, Flavor.MINUS, Flavor.INFINITY, n - 1, raw_bd)
    restrict = _restriction(data, Flavor.MINUS, Flavor.INFINITY, n - 1)
    for col in restrict.mul(raw_bd).columns():
        if not target.is_zero_class(col):
            raise LiftError(
                f"the connecting map in degree {n} depends on the lift")

    columns = [target.coordinate_of(col)
               for col in restrict.mul(raw).columns()]
    return SparseIntMatrix.from_columns(len(target.generators), columns)


# ---------------------------------------------------------------------------
# exactness as lattice equality
# ---------------------------------------------------------------------------

def _images_of_classes(data, flavor: Flavor, degree: int,
                       chain_map: SparseIntMatrix) -> SparseIntMatrix:
    """Chain images of the recorded homology generators in one degree."""
    pres = presentation_at(data, flavor, degree)
    return SparseIntMatrix.from_columns(
        chain_map.rows,
        [chain_map.apply(g.vector) for g in pres.generators])


def _node_report(data, degree: int, name: str, flavor: Flavor,
                 incoming: SparseIntMatrix, outgoing: SparseIntMatrix,
                 target_flavor: Flavor, target_degree: int) -> NodeReport:
    cycles = kernel_basis(_differential(data, flavor, degree))
    bd = _differential(data, flavor, degree + 1)
    image_lattice = hstack(incoming, bd)

    target_bd = _differential(data, target_flavor, target_degree + 1)
    from .intlinalg import preimage_lattice
    pre = preimage_lattice(outgoing.mul(cycles), target_bd)
    kernel_lattice = hstack(cycles.mul(pre), bd)

    inside = lattice_contains(image_lattice, kernel_lattice)
    onto = lattice_contains(kernel_lattice, image_lattice)
    witness = None
    if not inside:
        j = first_column_outside(image_lattice, kernel_lattice)
        witness = ("kernel class outside the incoming image",
                   tuple(kernel_lattice.column(j)))
    elif not onto:
        j = first_column_outside(kernel_lattice, image_lattice)
        witness = ("incoming image outside the kernel",
                   tuple(image_lattice.column(j)))
    image_inv = subquotient_invariants(column_space_basis(image_lattice), bd)
    kernel_inv = subquotient_invariants(column_space_basis(kernel_lattice), bd)
    return NodeReport(degree, name, image_inv, kernel_inv,
                      inside and onto, witness)


def check_les_main(data: MonopoleData,
                   window: tuple[int, int] | None = None) -> ExactnessReport:
    """Exactness of Minus into Infinity onto Plus, closed by the
    connecting map, at every node in the window."""
    require_valid(data)
    if window is None:
        window = default_window(data)
    lo, hi = window
    nodes = []
    for n in range(lo, hi + 1):
        inc = structural_map(data, "inclusion_minus", Flavor.INFINITY, n)
        proj = structural_map(data, "projection_plus", Flavor.INFINITY, n)
        nodes.append(_node_report(
            data, n, "minus", Flavor.MINUS,
            _images_of_classes(data, Flavor.PLUS, n + 1,
                               _delta_chain(data, n + 1)),
            inc, Flavor.INFINITY, n))
        nodes.append(_node_report(
            data, n, "infinity", Flavor.INFINITY,
            _images_of_classes(data, Flavor.MINUS, n, inc),
            proj, Flavor.PLUS, n))
        nodes.append(_node_report(
            data, n, "plus", Flavor.PLUS,
            _images_of_classes(data, Flavor.INFINITY, n, proj),
            _delta_chain(data, n), Flavor.MINUS, n - 1))
    return ExactnessReport(window, tuple(nodes))


# ---------------------------------------------------------------------------
# the reduced group
# ---------------------------------------------------------------------------

def _red_at(data: MonopoleData, n: int) -> AbelianGroupInvariants:
    """Common value of the projection cokernel at n and the inclusion
    kernel at n - 1; raises MismatchError if they differ."""
    proj = structural_map(data, "projection_plus", Flavor.INFINITY, n)
    cycles = kernel_basis(_differential(data, Flavor.PLUS, n))
    bd = _differential(data, Flavor.PLUS, n + 1)
    images = _images_of_classes(data, Flavor.INFINITY, n, proj)
    coker = subquotient_invariants(cycles, hstack(bd, images))

    inc = structural_map(data, "inclusion_minus", Flavor.INFINITY, n - 1)
    m_cycles = kernel_basis(_differential(data, Flavor.MINUS, n - 1))
    m_bd = _differential(data, Flavor.MINUS, n)
    from .intlinalg import preimage_lattice
    pre = preimage_lattice(inc.mul(m_cycles),
                           _differential(data, Flavor.INFINITY, n))
    kernel_lattice = hstack(m_cycles.mul(pre), m_bd)
    kernel = subquotient_invariants(column_space_basis(kernel_lattice), m_bd)

    if coker != kernel:
        raise MismatchError(n, coker, kernel)
    return coker


def hf_red(data: MonopoleData,
           window: tuple[int, int] | None = None) -> GradedAbelianGroup:
    """The reduced group per degree, computed both as the cokernel of the
    projection and as the kernel of the inclusion one degree down."""
    require_valid(data)
    if window is None:
        window = default_window(data)
    lo, hi = window
    groups = {n: _red_at(data, n) for n in range(lo, hi + 1)}
    tail_above = None
    if _red_at(data, hi + 1).is_trivial and _red_at(data, hi + 2).is_trivial:
        tail_above = Tail(TRIVIAL, TRIVIAL, True)
    tail_below = None
    if _red_at(data, lo - 1).is_trivial and _red_at(data, lo - 2).is_trivial:
        tail_below = Tail(TRIVIAL, TRIVIAL, True)
    return GradedAbelianGroup(window, groups, tail_above, tail_below)


# ---------------------------------------------------------------------------
# the hat sequence
# ---------------------------------------------------------------------------

def check_les_hat(data: MonopoleData,
                  window: tuple[int, int] | None = None) -> HatSequenceReport:
    """Exactness of Hat into Plus, omega-inverse down two degrees, closed
    by the section-and-differential connecting map.

    The induced middle map is computed both from u and from omega-inverse
    and asserted equal before the node checks run; the report also records
    whether Hat and Plus homology vanish together over the window.
    """
    from .actions import u_module_structure
    from .homology import induced_on_homology, structural_chain_map

    require_valid(data)
    if window is None:
        window = default_window(data)
    lo, hi = window

    induced_u = u_module_structure(data, Flavor.PLUS, window)
    induced_omega = induced_on_homology(
        data, Flavor.PLUS, Flavor.PLUS,
        structural_chain_map(data, "omega_inverse", window,
                             flavor=Flavor.PLUS), window)
    for n in range(lo, hi + 1):
        if induced_u.matrices[n] != induced_omega.matrices[n]:
            raise MismatchError(n, TRIVIAL, TRIVIAL)

    nodes = []
    for n in range(lo, hi + 1):
        inc = structural_map(data, "inclusion_hat", Flavor.PLUS, n)
        omega = structural_map(data, "omega_inverse", Flavor.PLUS, n)
        nodes.append(_node_report(
            data, n, "hat", Flavor.HAT,
            _images_of_classes(data, Flavor.PLUS, n - 1,
                               _hat_delta_chain(data, n - 1)),
            inc, Flavor.PLUS, n))
        nodes.append(_node_report(
            data, n, "plus-head", Flavor.PLUS,
            _images_of_classes(data, Flavor.HAT, n, inc),
            omega, Flavor.PLUS, n - 2))
        nodes.append(_node_report(
            data, n, "plus-tail", Flavor.PLUS,
            _images_of_classes(
                data, Flavor.PLUS, n + 2,
                structural_map(data, "omega_inverse", Flavor.PLUS, n + 2)),
            _hat_delta_chain(data, n), Flavor.HAT, n + 1))

    hat_nonzero = any(
        not presentation_at(data, Flavor.HAT, n).invariants.is_trivial
        for n in range(lo, hi + 1))
    plus_nonzero = any(
        not presentation_at(data, Flavor.PLUS, n).invariants.is_trivial
        for n in range(lo, hi + 1))
    return HatSequenceReport(window, tuple(nodes), hat_nonzero, plus_nonzero,
                             hat_nonzero == plus_nonzero)
