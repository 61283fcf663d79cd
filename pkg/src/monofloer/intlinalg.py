"""Exact integer matrix algebra.

Smith normal form, kernels, cokernel invariants, lattice membership,
preimages, and quotient presentations with recorded generators.  This is the
computational substrate for every homology calculation in the package.

All arithmetic is arbitrary precision and every result is exact.  Matrices
are immutable values; a matrix with r rows and c columns represents a
homomorphism from Z^c to Z^r acting on column vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "SparseIntMatrix",
    "SnfResult",
    "AbelianGroupInvariants",
    "ContainmentError",
    "smith_normal_form",
    "cokernel_invariants",
    "kernel_basis",
    "subquotient_invariants",
    "column_space_basis",
    "preimage_lattice",
    "lattice_contains",
    "first_column_outside",
    "lattice_equal",
    "solve",
    "hstack",
    "QuotientPresentation",
    "HomologyGenerator",
]


class ContainmentError(Exception):
    """A vector expected to lie in a lattice does not."""

    def __init__(self, message: str, column: int | None = None):
        super().__init__(message)
        self.column = column


@dataclass(frozen=True)
class SparseIntMatrix:
    """Immutable integer matrix stored as sorted (row, col, value) triples.

    Entries are row-major sorted, contain no zeros and no duplicate
    positions; equality is positional equality of the entry list.
    """

    rows: int
    cols: int
    entries: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimensions")
        prev = None
        for (i, j, v) in self.entries:
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise ValueError(f"entry index ({i}, {j}) out of range")
            if v == 0:
                raise ValueError("stored zero entry")
            if prev is not None and (i, j) <= prev:
                raise ValueError("entries not in canonical order")
            prev = (i, j)

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_entries(cls, rows: int, cols: int,
                     items: Iterable[tuple[int, int, int]]) -> "SparseIntMatrix":
        acc: dict[tuple[int, int], int] = {}
        for (i, j, v) in items:
            if v:
                key = (i, j)
                acc[key] = acc.get(key, 0) + v
        entries = tuple((i, j, v) for (i, j), v in sorted(acc.items()) if v)
        return cls(rows, cols, entries)

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]],
                   cols: int | None = None) -> "SparseIntMatrix":
        rows = len(dense)
        if cols is None:
            cols = len(dense[0]) if rows else 0
        items = []
        for i, row in enumerate(dense):
            if len(row) != cols:
                raise ValueError("ragged dense matrix")
            for j, v in enumerate(row):
                if v:
                    items.append((i, j, v))
        return cls(rows, cols, tuple(items))

    @classmethod
    def from_columns(cls, rows: int,
                     columns: Sequence[Sequence[int]]) -> "SparseIntMatrix":
        items = []
        for j, col in enumerate(columns):
            if len(col) != rows:
                raise ValueError("column of wrong length")
            for i, v in enumerate(col):
                if v:
                    items.append((i, j, v))
        return cls.from_entries(rows, len(columns), items)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseIntMatrix":
        return cls(rows, cols, ())

    @classmethod
    def identity(cls, n: int) -> "SparseIntMatrix":
        return cls(n, n, tuple((i, i, 1) for i in range(n)))

    # -- queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.entries

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j, v) in self.entries:
            out[i][j] = v
        return out

    def column(self, j: int) -> list[int]:
        out = [0] * self.rows
        for (i, jj, v) in self.entries:
            if jj == j:
                out[i] = v
        return out

    def columns(self) -> list[list[int]]:
        out = [[0] * self.rows for _ in range(self.cols)]
        for (i, j, v) in self.entries:
            out[j][i] = v
        return out

    # -- algebra ------------------------------------------------------------

    def transpose(self) -> "SparseIntMatrix":
        return SparseIntMatrix.from_entries(
            self.cols, self.rows, ((j, i, v) for (i, j, v) in self.entries))

    def mul(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        by_row: dict[int, list[tuple[int, int]]] = {}
        for (k, j, w) in other.entries:
            by_row.setdefault(k, []).append((j, w))
        acc: dict[tuple[int, int], int] = {}
        for (i, k, v) in self.entries:
            for (j, w) in by_row.get(k, ()):
                key = (i, j)
                acc[key] = acc.get(key, 0) + v * w
        entries = tuple((i, j, v) for (i, j), v in sorted(acc.items()) if v)
        return SparseIntMatrix(self.rows, other.cols, entries)

    def add(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in matrix sum")
        return SparseIntMatrix.from_entries(
            self.rows, self.cols,
            tuple(self.entries) + tuple(other.entries))

    def sub(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        return self.add(other.scale(-1))

    def scale(self, c: int) -> "SparseIntMatrix":
        if c == 0:
            return SparseIntMatrix.zero(self.rows, self.cols)
        return SparseIntMatrix(
            self.rows, self.cols,
            tuple((i, j, c * v) for (i, j, v) in self.entries))

    def apply(self, vec: Sequence[int]) -> list[int]:
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        out = [0] * self.rows
        for (i, j, v) in self.entries:
            if vec[j]:
                out[i] += v * vec[j]
        return out


def hstack(a: SparseIntMatrix, b: SparseIntMatrix) -> SparseIntMatrix:
    if a.rows != b.rows:
        raise ValueError("row mismatch in hstack")
    items = list(a.entries) + [(i, j + a.cols, v) for (i, j, v) in b.entries]
    return SparseIntMatrix.from_entries(a.rows, a.cols + b.cols, items)


@dataclass(frozen=True)
class SnfResult:
    """U * M * V = S with U, V unimodular and S diagonal, d_1 | d_2 | ..."""

    U: SparseIntMatrix
    S: SparseIntMatrix
    V: SparseIntMatrix

    def diagonal(self) -> list[int]:
        return [v for (i, j, v) in self.S.entries if i == j]

    @property
    def rank(self) -> int:
        return len(self.diagonal())


@dataclass(frozen=True)
class AbelianGroupInvariants:
    """Finitely generated abelian group in canonical form.

    free_rank copies of Z plus cyclic factors Z/t for the listed torsion
    numbers, which are all > 1 and satisfy t_1 | t_2 | ...
    """

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for t in self.torsion:
            if t <= 1:
                raise ValueError("torsion numbers must exceed 1")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise ValueError("torsion numbers must form a divisibility chain")

    @classmethod
    def from_parts(cls, free_rank: int,
                   torsion: Iterable[int]) -> "AbelianGroupInvariants":
        values = [t for t in torsion if t != 1]
        if any(t < 1 for t in values):
            raise ValueError("torsion numbers must be positive")
        if not values:
            return cls(free_rank, ())
        diag = SparseIntMatrix.from_entries(
            len(values), len(values),
            ((i, i, t) for i, t in enumerate(values)))
        factors = _Factorization(diag, need_u=False, need_v=False).diag
        return cls(free_rank, tuple(t for t in factors if t > 1))

    def direct_sum(self, other: "AbelianGroupInvariants") -> "AbelianGroupInvariants":
        return AbelianGroupInvariants.from_parts(
            self.free_rank + other.free_rank, self.torsion + other.torsion)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# Smith normal form on a sparse working representation
# ---------------------------------------------------------------------------

class _Factorization:
    """Sparse Smith reduction with optional tracking of U, U^-1 and V.

    Row operations premultiply (tracked in U, inverted into Uinv); column
    operations postmultiply (tracked in V).  Pivots of minimal absolute value
    keep coefficient growth down; the pivot must divide the remaining
    submatrix before it is finalized, so the diagonal forms the divisibility
    chain directly.
    """

    __slots__ = ("rows", "cols", "diag", "rank",
                 "u_rows", "uinv_cols", "v_cols")

    def __init__(self, mat: SparseIntMatrix, need_u: bool = True,
                 need_uinv: bool = False, need_v: bool = True):
        rows, cols = mat.rows, mat.cols
        a: dict[int, dict[int, int]] = {}
        colidx: dict[int, set[int]] = {}
        for (i, j, v) in mat.entries:
            a.setdefault(i, {})[j] = v
            colidx.setdefault(j, set()).add(i)

        u_rows = {i: {i: 1} for i in range(rows)} if need_u else None
        uinv_cols = {i: {i: 1} for i in range(rows)} if need_uinv else None
        v_cols = {j: {j: 1} for j in range(cols)} if need_v else None

        def set_entry(i, j, val):
            row = a.get(i)
            if val:
                if row is None:
                    a[i] = {j: val}
                else:
                    row[j] = val
                colidx.setdefault(j, set()).add(i)
            elif row is not None and j in row:
                del row[j]
                if not row:
                    del a[i]
                s = colidx[j]
                s.discard(i)
                if not s:
                    del colidx[j]

        def row_axpy(i, t, q):
            # row_i -= q * row_t
            rt = a.get(t)
            if not rt or not q:
                return
            for j, v in list(rt.items()):
                ri = a.get(i)
                cur = ri.get(j, 0) if ri else 0
                set_entry(i, j, cur - q * v)
            if u_rows is not None:
                ut = u_rows[t]
                ui = u_rows[i]
                for j, v in ut.items():
                    w = ui.get(j, 0) - q * v
                    if w:
                        ui[j] = w
                    elif j in ui:
                        del ui[j]
            if uinv_cols is not None:
                ci = uinv_cols[i]
                ct = uinv_cols[t]
                for r, v in ci.items():
                    w = ct.get(r, 0) + q * v
                    if w:
                        ct[r] = w
                    elif r in ct:
                        del ct[r]

        def col_axpy(j, t, q):
            # col_j -= q * col_t
            if not q:
                return
            for i in list(colidx.get(t, ())):
                v = a[i][t]
                cur = a[i].get(j, 0)
                set_entry(i, j, cur - q * v)
            if v_cols is not None:
                vj = v_cols[j]
                vt = v_cols[t]
                for r, v in vt.items():
                    w = vj.get(r, 0) - q * v
                    if w:
                        vj[r] = w
                    elif r in vj:
                        del vj[r]

        def swap_rows(i, t):
            ri = a.pop(i, None)
            rt = a.pop(t, None)
            if ri is not None:
                a[t] = ri
            if rt is not None:
                a[i] = rt
            for j in set((ri or {}).keys()) | set((rt or {}).keys()):
                s = colidx[j]
                has_i = i in s
                has_t = t in s
                if has_i != has_t:
                    if has_i:
                        s.discard(i)
                        s.add(t)
                    else:
                        s.discard(t)
                        s.add(i)
            if u_rows is not None:
                u_rows[i], u_rows[t] = u_rows[t], u_rows[i]
            if uinv_cols is not None:
                uinv_cols[i], uinv_cols[t] = uinv_cols[t], uinv_cols[i]

        def swap_cols(j, t):
            for i in set(colidx.get(j, ())) | set(colidx.get(t, ())):
                row = a[i]
                vj = row.pop(j, None)
                vt = row.pop(t, None)
                if vj is not None:
                    row[t] = vj
                if vt is not None:
                    row[j] = vt
            sj = colidx.pop(j, set())
            st = colidx.pop(t, set())
            if sj:
                colidx[t] = sj
            if st:
                colidx[j] = st
            if v_cols is not None:
                v_cols[j], v_cols[t] = v_cols[t], v_cols[j]

        def negate_row(t):
            row = a.get(t)
            if row:
                for j in row:
                    row[j] = -row[j]
            if u_rows is not None:
                ut = u_rows[t]
                for j in ut:
                    ut[j] = -ut[j]
            if uinv_cols is not None:
                ct = uinv_cols[t]
                for r in ct:
                    ct[r] = -ct[r]

        t = 0
        limit = min(rows, cols)
        while t < limit:
            best = None
            for j, rowset in colidx.items():
                if j < t:
                    continue
                for i in rowset:
                    av = abs(a[i][j])
                    if best is None or av < best[0]:
                        best = (av, i, j)
                        if av == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, bi, bj = best
            if bi != t:
                swap_rows(bi, t)
            if bj != t:
                swap_cols(bj, t)
            while True:
                if a[t][t] < 0:
                    negate_row(t)
                p = a[t][t]
                dirty = False
                for i in [i for i in colidx.get(t, ()) if i != t]:
                    q = a[i][t] // p
                    row_axpy(i, t, q)
                    if t in a.get(i, {}):
                        dirty = True
                if dirty:
                    least = min(
                        (i for i in colidx[t] if i != t),
                        key=lambda i: abs(a[i][t]))
                    swap_rows(least, t)
                    continue
                for j in [j for j in a.get(t, {}) if j != t]:
                    q = a[t][j] // p
                    col_axpy(j, t, q)
                    if a.get(t, {}).get(j):
                        dirty = True
                if dirty:
                    least = min(
                        (j for j in a[t] if j != t),
                        key=lambda j: abs(a[t][j]))
                    swap_cols(least, t)
                    continue
                off = None
                for j, rowset in colidx.items():
                    if j <= t:
                        continue
                    for i in rowset:
                        if i > t and a[i][j] % p:
                            off = i
                            break
                    if off is not None:
                        break
                if off is None:
                    break
                row_axpy(t, off, -1)
            t += 1

        self.rows = rows
        self.cols = cols
        self.diag = [a[s][s] for s in range(t)]
        self.rank = t
        self.u_rows = u_rows
        self.uinv_cols = uinv_cols
        self.v_cols = v_cols

    # -- assembled factors --------------------------------------------------

    def matrix_S(self) -> SparseIntMatrix:
        return SparseIntMatrix.from_entries(
            self.rows, self.cols,
            ((i, i, d) for i, d in enumerate(self.diag)))

    def matrix_U(self) -> SparseIntMatrix:
        return SparseIntMatrix.from_entries(
            self.rows, self.rows,
            ((i, j, v) for i, row in self.u_rows.items() for j, v in row.items()))

    def matrix_Uinv(self) -> SparseIntMatrix:
        return SparseIntMatrix.from_entries(
            self.rows, self.rows,
            ((i, j, v) for j, col in self.uinv_cols.items() for i, v in col.items()))

    def matrix_V(self) -> SparseIntMatrix:
        return SparseIntMatrix.from_entries(
            self.cols, self.cols,
            ((i, j, v) for j, col in self.v_cols.items() for i, v in col.items()))

    # -- solving ------------------------------------------------------------

    def apply_u(self, vec: Sequence[int]) -> list[int]:
        out = [0] * self.rows
        for i, row in self.u_rows.items():
            s = 0
            for j, v in row.items():
                if vec[j]:
                    s += v * vec[j]
            if s:
                out[i] = s
        return out

    def solve(self, vec: Sequence[int]) -> list[int] | None:
        """An integer x with M x = vec, or None when none exists."""
        if len(vec) != self.rows:
            raise ValueError("vector length mismatch")
        w = self.apply_u(vec)
        y = []
        for i, d in enumerate(self.diag):
            if w[i] % d:
                return None
            y.append(w[i] // d)
        for i in range(self.rank, self.rows):
            if w[i]:
                return None
        x = [0] * self.cols
        for i, yi in enumerate(y):
            if yi:
                for r, v in self.v_cols[i].items():
                    x[r] += v * yi
        return x

    def kernel_columns(self) -> list[dict[int, int]]:
        return [self.v_cols[j] for j in range(self.rank, self.cols)]


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def smith_normal_form(mat: SparseIntMatrix) -> SnfResult:
    """Factor U * mat * V = S, diagonal with the divisibility chain."""
    f = _Factorization(mat)
    return SnfResult(f.matrix_U(), f.matrix_S(), f.matrix_V())


def cokernel_invariants(mat: SparseIntMatrix) -> AbelianGroupInvariants:
    """Invariants of Z^rows / im(mat)."""
    f = _Factorization(mat, need_u=False, need_v=False)
    return AbelianGroupInvariants(
        mat.rows - f.rank, tuple(d for d in f.diag if d > 1))


def kernel_basis(mat: SparseIntMatrix) -> SparseIntMatrix:
    """Columns form a primitive Z-basis of ker(mat)."""
    f = _Factorization(mat, need_u=False)
    cols = f.kernel_columns()
    return SparseIntMatrix.from_entries(
        mat.cols, len(cols),
        ((i, j, v) for j, col in enumerate(cols) for i, v in col.items()))


def solve(mat: SparseIntMatrix, vec: Sequence[int]) -> list[int] | None:
    """An integral solution of mat * x = vec, or None."""
    return _Factorization(mat).solve(vec)


def column_space_basis(mat: SparseIntMatrix) -> SparseIntMatrix:
    """Independent columns spanning the same column lattice as mat."""
    f = _Factorization(mat, need_uinv=True, need_v=False)
    items = []
    for idx, d in enumerate(f.diag):
        for r, v in f.uinv_cols[idx].items():
            items.append((r, idx, v * d))
    return SparseIntMatrix.from_entries(mat.rows, f.rank, items)


def preimage_lattice(mat: SparseIntMatrix, gens: SparseIntMatrix) -> SparseIntMatrix:
    """Columns spanning {x : mat * x lies in the column span of gens}."""
    if mat.rows != gens.rows:
        raise ValueError("row mismatch between map and target lattice")
    stacked = hstack(mat, gens)
    ker = kernel_basis(stacked)
    items = [(i, j, v) for (i, j, v) in ker.entries if i < mat.cols]
    return SparseIntMatrix.from_entries(mat.cols, ker.cols, items)


def first_column_outside(lattice: SparseIntMatrix,
                         candidates: SparseIntMatrix) -> int | None:
    """Index of the first candidate column outside the lattice span, if any."""
    if lattice.rows != candidates.rows:
        raise ValueError("row mismatch between lattices")
    f = _Factorization(lattice)
    for j, col in enumerate(candidates.columns()):
        if f.solve(col) is None:
            return j
    return None


def lattice_contains(lattice: SparseIntMatrix,
                     candidates: SparseIntMatrix) -> bool:
    return first_column_outside(lattice, candidates) is None


def lattice_equal(a: SparseIntMatrix, b: SparseIntMatrix) -> bool:
    return lattice_contains(a, b) and lattice_contains(b, a)


def subquotient_invariants(z: SparseIntMatrix,
                           b: SparseIntMatrix) -> AbelianGroupInvariants:
    """Invariants of span(z) / span(b); columns of z must be independent."""
    fz = _Factorization(z)
    if fz.rank != z.cols:
        raise ValueError("quotient numerator columns are dependent")
    coords = []
    for j, col in enumerate(b.columns()):
        x = fz.solve(col)
        if x is None:
            raise ContainmentError(
                f"column {j} is not an integral combination of the numerator "
                "basis", column=j)
        coords.append(x)
    x_mat = SparseIntMatrix.from_columns(z.cols, coords)
    return cokernel_invariants(x_mat)


@dataclass(frozen=True)
class HomologyGenerator:
    """A recorded generator of a quotient: its order (0 = infinite) and a
    representative vector in ambient coordinates."""

    order: int
    vector: tuple[int, ...]


class QuotientPresentation:
    """span(Z)/span(B) with pinned generators and canonical coordinates.

    Z's columns must be an independent lattice basis; B's columns must lie in
    span(Z).  Generators are read off the Smith form of the coordinate matrix
    of B in the Z-basis, in Smith order, skipping the trivial factors.
    """

    __slots__ = ("ambient_dim", "cycle_basis", "invariants", "generators",
                 "_fz", "_fx", "_kept")

    def __init__(self, z: SparseIntMatrix, b: SparseIntMatrix):
        if z.rows != b.rows:
            raise ValueError("ambient dimension mismatch")
        fz = _Factorization(z)
        if fz.rank != z.cols:
            raise ValueError("cycle basis columns are dependent")
        coords = []
        for j, col in enumerate(b.columns()):
            x = fz.solve(col)
            if x is None:
                raise ContainmentError(
                    f"column {j} is not an integral combination of the cycle "
                    "basis", column=j)
            coords.append(x)
        x_mat = SparseIntMatrix.from_columns(z.cols, coords)
        fx = _Factorization(x_mat, need_uinv=True)

        orders = []
        kept = []
        for i in range(z.cols):
            d = fx.diag[i] if i < fx.rank else 0
            if d != 1:
                kept.append(i)
                orders.append(d)
        gens = []
        for i, order in zip(kept, orders):
            coord = [0] * z.cols
            for r, v in fx.uinv_cols[i].items():
                coord[r] = v
            gens.append(HomologyGenerator(order, tuple(z.apply(coord))))

        torsion = tuple(d for d in orders if d > 1)
        free = sum(1 for d in orders if d == 0)
        self.ambient_dim = z.rows
        self.cycle_basis = z
        self.invariants = AbelianGroupInvariants(free, torsion)
        self.generators = tuple(gens)
        self._fz = fz
        self._fx = fx
        self._kept = kept

    def coordinate_of(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Canonical coordinates of a cycle's class on the recorded
        generators; torsion coordinates are reduced to [0, order)."""
        c = self._fz.solve(list(vec))
        if c is None:
            raise ContainmentError("vector is not in the cycle lattice")
        y = self._fx.apply_u(c)
        out = []
        for i in self._kept:
            d = self._fx.diag[i] if i < self._fx.rank else 0
            out.append(y[i] % d if d else y[i])
        return tuple(out)

    def is_zero_class(self, vec: Sequence[int]) -> bool:
        return all(v == 0 for v in self.coordinate_of(vec))
