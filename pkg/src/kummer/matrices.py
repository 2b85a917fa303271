"""Exact arbitrary-precision integer matrices and their normal forms.

Everything in this module is pure and deterministic: no floats, no global
state, and fixed pivot rules, so repeated runs produce identical transforms.
Matrices are immutable; all operations return fresh values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .errors import InputError

__all__ = [
    "IntMatrix",
    "SmithDecomposition",
    "HermiteColumnForm",
    "smith_normal_form",
    "hermite_column_form",
    "kernel_lattice",
    "preimage_lattice",
    "lattice_intersection",
    "solve_linear",
    "solve_linear_explain",
    "solve_integer_system",
    "solve_modular",
    "determinant",
    "hstack",
    "vstack",
    "block_diag",
    "MatrixEquationSystem",
    "InfeasibleRow",
]


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, row-major storage."""

    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise InputError("matrix dimensions must be nonnegative")
        if len(self.data) != self.rows * self.cols:
            raise InputError(
                f"matrix data has {len(self.data)} entries, expected {self.rows * self.cols}"
            )
        if any(type(x) is not int for x in self.data):
            object.__setattr__(self, "data", tuple(int(x) for x in self.data))

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        r = len(rows)
        if r == 0:
            if cols is None:
                cols = 0
            return cls(0, cols, ())
        c = len(rows[0])
        if cols is not None and cols != c:
            raise InputError("explicit column count disagrees with row data")
        if any(len(row) != c for row in rows):
            raise InputError("ragged rows")
        return cls(r, c, tuple(int(x) for row in rows for x in row))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def diagonal(cls, entries: Sequence[int], rows: Optional[int] = None,
                 cols: Optional[int] = None) -> "IntMatrix":
        n = len(entries)
        r = n if rows is None else rows
        c = n if cols is None else cols
        if n > min(r, c):
            raise InputError("too many diagonal entries for requested shape")
        data = [0] * (r * c)
        for i, d in enumerate(entries):
            data[i * c + i] = int(d)
        return cls(r, c, tuple(data))

    @classmethod
    def column(cls, vec: Sequence[int]) -> "IntMatrix":
        return cls(len(vec), 1, tuple(int(x) for x in vec))

    # -- access ------------------------------------------------------------

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"index {key} out of range for {self.rows}x{self.cols}")
        return self.data[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.data[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return self.data[j::self.cols] if self.cols else ()

    def rows_list(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_zero(self) -> bool:
        return all(x == 0 for x in self.data)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    # -- arithmetic --------------------------------------------------------

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise InputError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        r, k, c = self.rows, self.cols, other.cols
        a, b = self.data, other.data
        out = [0] * (r * c)
        for i in range(r):
            arow = a[i * k:(i + 1) * k]
            base = i * c
            for t in range(k):
                x = arow[t]
                if x:
                    brow = b[t * c:(t + 1) * c]
                    for j in range(c):
                        out[base + j] += x * brow[j]
        return IntMatrix(r, c, tuple(out))

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise InputError("shape mismatch in matrix addition")
        return IntMatrix(self.rows, self.cols,
                         tuple(x + y for x, y in zip(self.data, other.data)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise InputError("shape mismatch in matrix subtraction")
        return IntMatrix(self.rows, self.cols,
                         tuple(x - y for x, y in zip(self.data, other.data)))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(-x for x in self.data))

    def scaled(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(k * x for x in self.data))

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         tuple(self.data[i * self.cols + j]
                               for j in range(self.cols) for i in range(self.rows)))

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Matrix times column vector."""
        if len(vec) != self.cols:
            raise InputError(f"vector length {len(vec)} does not match {self.cols} columns")
        return tuple(sum(self.data[i * self.cols + j] * vec[j] for j in range(self.cols))
                     for i in range(self.rows))

    def select(self, row_idx: Iterable[int], col_idx: Iterable[int]) -> "IntMatrix":
        ri, ci = list(row_idx), list(col_idx)
        return IntMatrix(len(ri), len(ci),
                         tuple(self.data[i * self.cols + j] for i in ri for j in ci))

    def __str__(self) -> str:
        if self.rows == 0 or self.cols == 0:
            return f"<empty {self.rows}x{self.cols}>"
        return "\n".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))


def hstack(*mats: IntMatrix) -> IntMatrix:
    mats = tuple(m for m in mats)
    if not mats:
        raise InputError("hstack of nothing")
    r = mats[0].rows
    if any(m.rows != r for m in mats):
        raise InputError("hstack row mismatch")
    data = []
    for i in range(r):
        for m in mats:
            data.extend(m.row(i))
    return IntMatrix(r, sum(m.cols for m in mats), tuple(data))


def vstack(*mats: IntMatrix) -> IntMatrix:
    mats = tuple(m for m in mats)
    if not mats:
        raise InputError("vstack of nothing")
    c = mats[0].cols
    if any(m.cols != c for m in mats):
        raise InputError("vstack column mismatch")
    data = []
    for m in mats:
        data.extend(m.data)
    return IntMatrix(sum(m.rows for m in mats), c, tuple(data))


def block_diag(*mats: IntMatrix) -> IntMatrix:
    r = sum(m.rows for m in mats)
    c = sum(m.cols for m in mats)
    out = [[0] * c for _ in range(r)]
    ro = co = 0
    for m in mats:
        for i in range(m.rows):
            out[ro + i][co:co + m.cols] = list(m.row(i))
        ro += m.rows
        co += m.cols
    return IntMatrix.from_rows(out, cols=c)


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmithDecomposition:
    """U @ source @ V == S with U, V unimodular and S a divisibility chain.

    U_inv and V_inv are the exact inverses, accumulated during elimination;
    they make changes of generators invertible without extra solving.
    """

    source: IntMatrix
    U: IntMatrix
    S: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @cached_property
    def diagonal(self) -> tuple[int, ...]:
        n = min(self.S.rows, self.S.cols)
        return tuple(self.S[i, i] for i in range(n))

    @cached_property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def smith_normal_form(mat: IntMatrix) -> SmithDecomposition:
    """Smith normal form over the integers.

    Pivot rule: smallest nonzero absolute value in the remaining block,
    ties broken leftmost then topmost. Diagonal entries are nonnegative,
    each divides the next, zeros trail.
    """
    r, c = mat.rows, mat.cols
    a = [list(mat.row(i)) for i in range(r)]
    u = [[int(i == j) for j in range(r)] for i in range(r)]
    uinv = [[int(i == j) for j in range(r)] for i in range(r)]
    v = [[int(i == j) for j in range(c)] for i in range(c)]
    vinv = [[int(i == j) for j in range(c)] for i in range(c)]

    def row_sub(i: int, t: int, q: int) -> None:
        # row_i -= q*row_t; inverse transform: column t of U_inv += q*column i
        if not q:
            return
        ai, at = a[i], a[t]
        for j in range(c):
            ai[j] -= q * at[j]
        ui, ut = u[i], u[t]
        for j in range(r):
            ui[j] -= q * ut[j]
        for k in range(r):
            uinv[k][t] += q * uinv[k][i]

    def row_add(t: int, i: int) -> None:
        row_sub(t, i, -1)

    def row_swap(i: int, t: int) -> None:
        a[i], a[t] = a[t], a[i]
        u[i], u[t] = u[t], u[i]
        for k in range(r):
            uinv[k][i], uinv[k][t] = uinv[k][t], uinv[k][i]

    def row_neg(i: int) -> None:
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]
        for k in range(r):
            uinv[k][i] = -uinv[k][i]

    def col_sub(j: int, t: int, q: int) -> None:
        # col_j -= q*col_t; inverse transform: row t of V_inv += q*row j
        if not q:
            return
        for i in range(r):
            a[i][j] -= q * a[i][t]
        for i in range(c):
            v[i][j] -= q * v[i][t]
        vt, vj = vinv[t], vinv[j]
        for i in range(c):
            vt[i] += q * vj[i]

    def col_swap(j: int, t: int) -> None:
        for i in range(r):
            a[i][j], a[i][t] = a[i][t], a[i][j]
        for i in range(c):
            v[i][j], v[i][t] = v[i][t], v[i][j]
        vinv[j], vinv[t] = vinv[t], vinv[j]

    t = 0
    mdim = min(r, c)
    while t < mdim:
        best_key = None
        bi = bj = -1
        for i in range(t, r):
            arow = a[i]
            for j in range(t, c):
                x = arow[j]
                if x:
                    key = (abs(x), j, i)
                    if best_key is None or key < best_key:
                        best_key, bi, bj = key, i, j
        if best_key is None:
            break
        if bi != t:
            row_swap(bi, t)
        if bj != t:
            col_swap(bj, t)
        while True:
            recheck = False
            for i in range(t + 1, r):
                if a[i][t]:
                    q, rem = divmod(a[i][t], a[t][t])
                    row_sub(i, t, q)
                    if rem:
                        row_swap(i, t)
                        recheck = True
            if recheck:
                continue
            for j in range(t + 1, c):
                if a[t][j]:
                    q, rem = divmod(a[t][j], a[t][t])
                    col_sub(j, t, q)
                    if rem:
                        col_swap(j, t)
                        recheck = True
            if recheck:
                continue
            # pivot clears its row and column; force it to divide the rest
            piv = a[t][t]
            done = True
            for i in range(t + 1, r):
                ai = a[i]
                for j in range(t + 1, c):
                    if ai[j] % piv:
                        row_add(t, i)
                        done = False
                        break
                if not done:
                    break
            if done:
                break
        if a[t][t] < 0:
            row_neg(t)
        t += 1

    return SmithDecomposition(
        source=mat,
        U=IntMatrix.from_rows(u, cols=r),
        S=IntMatrix.from_rows(a, cols=c),
        V=IntMatrix.from_rows(v, cols=c),
        U_inv=IntMatrix.from_rows(uinv, cols=r),
        V_inv=IntMatrix.from_rows(vinv, cols=c),
    )


# ---------------------------------------------------------------------------
# Hermite column form (canonical form of a column lattice)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HermiteColumnForm:
    """Canonical generating set of the column lattice of ``source``.

    ``matrix`` has one column per pivot, pivot rows strictly increasing,
    pivots positive, and every entry in a pivot row lying to the left of its
    pivot reduced into [0, pivot). Two integer matrices span the same column
    lattice iff their Hermite column forms are equal.
    """

    source: IntMatrix
    matrix: IntMatrix
    pivots: tuple[tuple[int, int], ...]  # (row, col) pairs

    def reduce(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Canonical representative of vec modulo the column lattice."""
        if len(vec) != self.matrix.rows:
            raise InputError("vector length does not match lattice ambient rank")
        v = [int(x) for x in vec]
        h = self.matrix
        for prow, pcol in self.pivots:
            q = v[prow] // h[prow, pcol]
            if q:
                for i in range(prow, h.rows):
                    v[i] -= q * h[i, pcol]
        return tuple(v)

    def contains(self, vec: Sequence[int]) -> bool:
        return all(x == 0 for x in self.reduce(vec))


def hermite_column_form(mat: IntMatrix) -> HermiteColumnForm:
    g = mat.rows
    cols = [list(mat.col(j)) for j in range(mat.cols)]
    pivots: list[tuple[int, int]] = []
    cidx = 0
    for row in range(g):
        while True:
            best_key = None
            bj = -1
            for j in range(cidx, len(cols)):
                x = cols[j][row]
                if x:
                    key = (abs(x), j)
                    if best_key is None or key < best_key:
                        best_key, bj = key, j
            if best_key is None:
                break
            if bj != cidx:
                cols[bj], cols[cidx] = cols[cidx], cols[bj]
            piv_col = cols[cidx]
            clean = True
            for j in range(cidx + 1, len(cols)):
                x = cols[j][row]
                if x:
                    q = x // piv_col[row]
                    cj = cols[j]
                    for i in range(g):
                        cj[i] -= q * piv_col[i]
                    if cj[row]:
                        clean = False
            if clean:
                break
        if cidx < len(cols) and cols[cidx][row]:
            if cols[cidx][row] < 0:
                cols[cidx] = [-x for x in cols[cidx]]
            piv = cols[cidx][row]
            for j in range(cidx):
                q = cols[j][row] // piv
                if q:
                    cj, pc = cols[j], cols[cidx]
                    for i in range(g):
                        cj[i] -= q * pc[i]
            pivots.append((row, cidx))
            cidx += 1
    kept = cols[:cidx]
    h = IntMatrix(g, cidx, tuple(kept[j][i] for i in range(g) for j in range(cidx)))
    return HermiteColumnForm(source=mat, matrix=h, pivots=tuple(pivots))


def kernel_lattice(mat: IntMatrix) -> IntMatrix:
    """Basis (as columns) of the integer kernel {x : mat @ x = 0}."""
    snf = smith_normal_form(mat)
    return snf.V.select(range(mat.cols), range(snf.rank, mat.cols))


def preimage_lattice(mat: IntMatrix, target_relations: IntMatrix) -> IntMatrix:
    """Hermite basis of {x : mat @ x lies in colspan(target_relations)}."""
    if mat.rows != target_relations.rows:
        raise InputError("relation lattice has wrong ambient rank")
    ker = kernel_lattice(hstack(mat, target_relations))
    top = ker.select(range(mat.cols), range(ker.cols))
    return hermite_column_form(top).matrix


def lattice_intersection(m1: IntMatrix, m2: IntMatrix) -> IntMatrix:
    """Generators (as columns) of colspan(m1) ∩ colspan(m2)."""
    if m1.rows != m2.rows:
        raise InputError("lattices live in different ambient ranks")
    ker = kernel_lattice(hstack(m1, -m2))
    top = ker.select(range(m1.cols), range(ker.cols))
    return m1 @ top


# ---------------------------------------------------------------------------
# Linear solving
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InfeasibleRow:
    """Witness that a linear system has no integer solution.

    After the unimodular change of rows, constraint ``row`` reads
    ``divisor * y = value`` with divisor not dividing value (divisor 0 means
    the equation demands a nonzero constant to vanish).
    """

    row: int
    divisor: int
    value: int


def solve_linear_explain(mat: IntMatrix, rhs: Sequence[int]):
    """Solve mat @ x = rhs over the integers.

    Returns (solution, None) or (None, InfeasibleRow witness).
    """
    if len(rhs) != mat.rows:
        raise InputError("right-hand side length does not match row count")
    snf = smith_normal_form(mat)
    target = snf.U.apply(rhs)
    w = [0] * mat.cols
    mdim = min(mat.rows, mat.cols)
    for i in range(mat.rows):
        d = snf.S[i, i] if i < mdim else 0
        if d:
            q, rem = divmod(target[i], d)
            if rem:
                return None, InfeasibleRow(row=i, divisor=d, value=target[i])
            w[i] = q
        elif target[i]:
            return None, InfeasibleRow(row=i, divisor=0, value=target[i])
    return snf.V.apply(w), None


def solve_linear(mat: IntMatrix, rhs: Sequence[int]) -> Optional[tuple[int, ...]]:
    sol, _ = solve_linear_explain(mat, rhs)
    return sol


def solve_integer_system(mat: IntMatrix, rhs: Sequence[int],
                         modulus_relations: Optional[IntMatrix] = None,
                         mod: Optional[int] = None) -> Optional[tuple[int, ...]]:
    """Solve mat @ x = rhs modulo the column span of ``modulus_relations``.

    Returns one solution x (length mat.cols) or None. The congruence is
    solved exactly: mat @ x - rhs must land in the relation lattice.

    ``mod`` is a performance hint, not a semantic change: when the caller
    knows the relation lattice contains mod * Z^rows (true with mod any
    multiple of the exponent of a finite quotient), the system is solved
    with all arithmetic reduced modulo mod, which avoids the coefficient
    swell of integer elimination on large flattened systems.
    """
    if modulus_relations is not None and modulus_relations.rows != mat.rows:
        raise InputError("relation lattice has wrong ambient rank")
    if mod is not None:
        if mod < 1:
            raise InputError("modulus hint must be positive")
        if modulus_relations is None or modulus_relations.cols == 0:
            big = mat
        else:
            big = hstack(mat, modulus_relations)
        sol = solve_modular(big, rhs, mod)
        return sol[:mat.cols] if sol is not None else None
    if modulus_relations is None or modulus_relations.cols == 0:
        return solve_linear(mat, rhs)
    sol = solve_linear(hstack(mat, modulus_relations), rhs)
    if sol is None:
        return None
    return sol[:mat.cols]


def solve_modular(mat: IntMatrix, rhs: Sequence[int], m: int
                  ) -> Optional[tuple[int, ...]]:
    """Solve mat @ x = rhs over Z/m (any m >= 1), or None.

    Diagonalizes by row/column operations with every entry kept reduced to
    the symmetric range, so entries never exceed m in size. Deterministic:
    pivot is the smallest nonzero absolute value, leftmost-topmost ties.
    """
    if len(rhs) != mat.rows:
        raise InputError("right-hand side length does not match row count")
    if m < 1:
        raise InputError("modulus must be positive")
    r, c = mat.rows, mat.cols
    if m == 1:
        return (0,) * c
    half = m // 2

    def red(x: int) -> int:
        x %= m
        return x - m if x > half else x

    a = [[red(mat[i, j]) for j in range(c)] for i in range(r)]
    b = [red(x) for x in rhs]
    v = [[int(i == j) for j in range(c)] for i in range(c)]

    t = 0
    mdim = min(r, c)
    while t < mdim:
        best = None
        bi = bj = -1
        for i in range(t, r):
            for j in range(t, c):
                x = a[i][j]
                if x:
                    key = (abs(x), j, i)
                    if best is None or key < best:
                        best, bi, bj = key, i, j
        if best is None:
            break
        a[bi], a[t] = a[t], a[bi]
        b[bi], b[t] = b[t], b[bi]
        if bj != t:
            for i in range(r):
                a[i][bj], a[i][t] = a[i][t], a[i][bj]
            v[bj], v[t] = v[t], v[bj]
        while True:
            recheck = False
            for i in range(t + 1, r):
                if a[i][t]:
                    q, rem = divmod(a[i][t], a[t][t])
                    ai, at = a[i], a[t]
                    for j in range(c):
                        ai[j] = red(ai[j] - q * at[j])
                    b[i] = red(b[i] - q * b[t])
                    if ai[t]:
                        a[i], a[t] = a[t], a[i]
                        b[i], b[t] = b[t], b[i]
                        recheck = True
            if recheck:
                continue
            for j in range(t + 1, c):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    for i in range(r):
                        a[i][j] = red(a[i][j] - q * a[i][t])
                    vj, vt = v[j], v[t]
                    for i in range(c):
                        vj[i] = red(vj[i] - q * vt[i])
                    if a[t][j]:
                        for i in range(r):
                            a[i][j], a[i][t] = a[i][t], a[i][j]
                        v[j], v[t] = v[t], v[j]
                        recheck = True
            if not recheck:
                break
        t += 1

    w = [0] * c
    for i in range(r):
        rhs_i = b[i] % m
        d = a[i][i] % m if i < mdim else 0
        if d:
            g = math.gcd(d, m)
            if rhs_i % g:
                return None
            mg = m // g
            if mg > 1:
                w[i] = ((rhs_i // g) * pow((d // g) % mg, -1, mg)) % mg
        elif rhs_i:
            return None
    return tuple(sum(v[j][i] * w[j] for j in range(c)) % m for i in range(c))


def determinant(mat: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if not mat.is_square:
        raise InputError("determinant of a non-square matrix")
    n = mat.rows
    if n == 0:
        return 1
    a = [list(mat.row(i)) for i in range(n)]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Block matrix equation systems
# ---------------------------------------------------------------------------


class MatrixEquationSystem:
    """Joint integer linear system in several unknown matrix blocks.

    Equations have the shape  sum_t  L_t @ X_{b_t} @ R_t  =  RHS  where each
    term names an unknown block and optional left/right coefficient matrices.
    ``solve`` flattens everything into one integer system; a None result is
    a proof of infeasibility (see ``last_witness``).
    """

    def __init__(self) -> None:
        self._shapes: dict[str, tuple[int, int]] = {}
        self._offsets: dict[str, int] = {}
        self._total = 0
        self._rows: list[list[int]] = []
        self._rhs: list[int] = []
        self.last_witness: Optional[InfeasibleRow] = None

    def add_unknown(self, name: str, rows: int, cols: int) -> None:
        if name in self._shapes:
            raise InputError(f"duplicate unknown block {name!r}")
        self._shapes[name] = (rows, cols)
        self._offsets[name] = self._total
        self._total += rows * cols

    def add_equation(self, terms: list[tuple[Optional[IntMatrix], str, Optional[IntMatrix]]],
                     rhs: IntMatrix) -> None:
        """Append the matrix equation  sum_t L_t @ X_t @ R_t = rhs."""
        er, ec = rhs.rows, rhs.cols
        coeffs: list[dict[int, int]] = [dict() for _ in range(er * ec)]
        for left, name, right in terms:
            if name not in self._shapes:
                raise InputError(f"unknown block {name!r}")
            xr, xc = self._shapes[name]
            lrows = left.rows if left is not None else xr
            rcols = right.cols if right is not None else xc
            if lrows != er or rcols != ec:
                raise InputError(f"term for {name!r} has shape {lrows}x{rcols}, "
                                 f"equation is {er}x{ec}")
            if left is not None and left.cols != xr:
                raise InputError(f"left coefficient for {name!r} has {left.cols} cols, "
                                 f"block has {xr} rows")
            if right is not None and right.rows != xc:
                raise InputError(f"right coefficient for {name!r} has {right.rows} rows, "
                                 f"block has {xc} cols")
            off = self._offsets[name]
            for i in range(er):
                for j in range(ec):
                    cell = coeffs[i * ec + j]
                    # coefficient of X[k][l] in (L X R)[i][j] is L[i][k] * R[l][j]
                    for k in range(xr):
                        lik = left[i, k] if left is not None else int(i == k)
                        if not lik:
                            continue
                        for l in range(xc):
                            rlj = right[l, j] if right is not None else int(l == j)
                            if rlj:
                                idx = off + k * xc + l
                                cell[idx] = cell.get(idx, 0) + lik * rlj
        for i in range(er):
            for j in range(ec):
                row = [0] * self._total
                for idx, val in coeffs[i * ec + j].items():
                    row[idx] = val
                self._rows.append(row)
                self._rhs.append(rhs[i, j])

    def solve(self, mod: Optional[int] = None) -> Optional[dict[str, IntMatrix]]:
        """Solve over Z, or over Z/mod when ``mod`` is given.

        The modular path is only equivalent to the exact one when every
        equation tolerates a slack of mod (its congruence lattice contains
        mod times the ambient lattice); callers assert that by passing it.
        """
        neq = len(self._rows)
        big = IntMatrix(neq, self._total, tuple(x for row in self._rows for x in row))
        if mod is None:
            sol, witness = solve_linear_explain(big, self._rhs)
            self.last_witness = witness
        else:
            sol = solve_modular(big, self._rhs, mod)
            self.last_witness = None
        if sol is None:
            return None
        out = {}
        for name, (xr, xc) in self._shapes.items():
            off = self._offsets[name]
            out[name] = IntMatrix(xr, xc, tuple(sol[off:off + xr * xc]))
        return out
