"""Exact integer linear algebra: Smith normal form, kernels and cokernels.

Entries are Python ints throughout, so nothing overflows.  Two routes to
the diagonal exist: :func:`smith_normal_form` (dense, tracks the unimodular
transforms) and :func:`invariant_factors` (sparse elimination that discards
them, used for the large homology towers).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple


class IntMatrix:
    """Dense integer matrix with explicit shape (so 0 x n and m x 0 are representable)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence[Sequence[int]] = None):
        self.rows = rows
        self.cols = cols
        if entries is None:
            entries = [[0] * cols for _ in range(rows)]
        entries = [[int(x) for x in r] for r in entries]
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise ValueError("entries do not match the declared shape")
        self.entries = entries

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, rows)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        m = cls(rows, len(columns))
        for j, col in enumerate(columns):
            if len(col) != rows:
                raise ValueError("column has the wrong length")
            for i, x in enumerate(col):
                m.entries[i][j] = x
        return m

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        m = cls(n, n)
        for i in range(n):
            m.entries[i][i] = 1
        return m

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __repr__(self):
        return f"IntMatrix({self.rows}, {self.cols}, {self.entries!r})"

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def copy(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, [r[:] for r in self.entries])

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, [[-x for x in r] for r in self.entries])

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        out = [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.entries]
        return IntMatrix(self.rows, other.cols, out)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("row counts differ")
        return IntMatrix(self.rows, self.cols + other.cols,
                         [a + b for a, b in zip(self.entries, other.entries)])

    def apply(self, vec: Sequence[int]) -> List[int]:
        return [sum(a * b for a, b in zip(r, vec)) for r in self.entries]

    def column(self, j: int) -> List[int]:
        return [r[j] for r in self.entries]


def as_matrix(a) -> IntMatrix:
    return a if isinstance(a, IntMatrix) else IntMatrix.from_rows(a)


def determinant(a: IntMatrix) -> int:
    """Bareiss fraction-free elimination."""
    a = as_matrix(a)
    n = a.rows
    if n != a.cols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    m = [r[:] for r in a.entries]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass
class SNFResult:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular and ``D`` in Smith form."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    def diagonal(self) -> List[int]:
        return [self.D.entries[i][i] for i in range(min(self.D.rows, self.D.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal() if d)


def smith_normal_form(a) -> SNFResult:
    """Smith normal form with transforms.

    Pivot on the smallest nonzero absolute value, clear its row and column
    by Euclidean steps, and fold in a row whenever the pivot fails to divide
    the remaining block.  Deterministic for a given input.
    """
    a = as_matrix(a)
    m, n = a.shape
    A = [r[:] for r in a.entries]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_axpy(M, dst, src, q):  # M[dst] -= q * M[src]
        rs, rd = M[src], M[dst]
        for j, x in enumerate(rs):
            if x:
                rd[j] -= q * x

    def col_axpy(M, dst, src, q, start=0):  # col dst -= q * col src
        for r in M[start:] if start else M:
            x = r[src]
            if x:
                r[dst] -= q * x

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                x = A[i][t]
                if x:
                    q = x // p
                    row_axpy(A, i, t, q)
                    row_axpy(U, i, t, q)
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                x = A[t][j]
                if x:
                    q = x // p
                    col_axpy(A, j, t, q, start=t)
                    col_axpy(V, j, t, q)
                    if A[t][j]:
                        dirty = True
            if dirty:
                # move the smallest leftover in row/column t onto the pivot
                cand = [(abs(A[i][t]), 0, i) for i in range(t + 1, m) if A[i][t]]
                cand += [(abs(A[t][j]), 1, j) for j in range(t + 1, n) if A[t][j]]
                _, kind, k = min(cand)
                if kind == 0:
                    swap_rows(k, t)
                else:
                    swap_cols(k, t)
                continue
            if abs(p) != 1:
                bad = next((i for i in range(t + 1, m)
                            if any(x % p for x in A[i][t + 1:])), None)
                if bad is not None:
                    row_axpy(A, t, bad, -1)
                    row_axpy(U, t, bad, -1)
                    continue
            break
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return SNFResult(IntMatrix(m, m, U), IntMatrix(m, n, A), IntMatrix(n, n, V))


def kernel_basis(a) -> List[List[int]]:
    """Basis of the lattice ``{x : A x = 0}`` (columns of ``V`` at zero pivots)."""
    a = as_matrix(a)
    res = smith_normal_form(a)
    r = res.rank
    return [res.V.column(j) for j in range(r, a.cols)]


def invariant_factors(a) -> Tuple[int, List[int]]:
    """``(rank, nontrivial diagonal entries)`` of the Smith form of ``a``.

    Sparse elimination on unit pivots first (these contribute factors of 1
    and never change the rest of the Smith form), then the dense algorithm
    on whatever is left.
    """
    a = as_matrix(a)
    rows: Dict[int, Dict[int, int]] = {}
    cols: Dict[int, set] = {}
    for i, r in enumerate(a.entries):
        d = {j: x for j, x in enumerate(r) if x}
        if d:
            rows[i] = d
            for j in d:
                cols.setdefault(j, set()).add(i)
    return _sparse_factors(rows, cols)


def invariant_factors_sparse(columns: Sequence[Dict[int, int]]) -> Tuple[int, List[int]]:
    """Same as :func:`invariant_factors` for a matrix given as sparse columns."""
    rows: Dict[int, Dict[int, int]] = {}
    cols: Dict[int, set] = {}
    for j, col in enumerate(columns):
        for i, x in col.items():
            if x:
                rows.setdefault(i, {})[j] = x
                cols.setdefault(j, set()).add(i)
    return _sparse_factors(rows, cols)


def _sparse_factors(rows: Dict[int, Dict[int, int]], cols: Dict[int, set]) -> Tuple[int, List[int]]:
    units = 0
    while True:
        pivot = None
        best = None
        for i, r in rows.items():
            for j, x in r.items():
                if x == 1 or x == -1:
                    cost = (len(r) - 1) * (len(cols[j]) - 1)
                    if best is None or cost < best:
                        best, pivot = cost, (i, j)
                        if cost == 0:
                            break
            if best == 0:
                break
        if pivot is None:
            break
        pi, pj = pivot
        prow = rows.pop(pi)
        pval = prow[pj]
        for j in prow:
            cols[j].discard(pi)
        for i in list(cols[pj]):
            r = rows[i]
            q = r[pj] * pval  # pval is ±1, so this is r[pj] / pval
            for j, x in prow.items():
                y = r.get(j, 0) - q * x
                if y:
                    if j not in r:
                        cols[j].add(i)
                    r[j] = y
                elif j in r:
                    del r[j]
                    cols[j].discard(i)
            if not r:
                del rows[i]
        del cols[pj]
        units += 1
    if not rows:
        return units, []
    ri = sorted(rows)
    cj = sorted({j for r in rows.values() for j in r})
    ci = {j: k for k, j in enumerate(cj)}
    dense = [[0] * len(cj) for _ in ri]
    for k, i in enumerate(ri):
        for j, x in rows[i].items():
            dense[k][ci[j]] = x
    diag = smith_normal_form(IntMatrix(len(ri), len(cj), dense)).diagonal()
    nz = [d for d in diag if d]
    return units + len(nz), [d for d in nz if d != 1]


@dataclass(frozen=True)
class Stability:
    """How a tower value was obtained: exact, stabilized at a level, or approximate."""

    kind: str = "exact"
    level: int = None

    def __str__(self):
        if self.kind == "exact":
            return "exact" if self.level is None else f"exact (stabilized at level {self.level})"
        if self.kind == "stabilized":
            return f"stabilized at level {self.level}"
        return f"approximate up to level {self.level}"


@dataclass(frozen=True)
class GroupPresentation:
    """``Z^free_rank ⊕ Z/d1 ⊕ ...`` with ``d1 | d2 | ...`` and every ``di >= 2``."""

    free_rank: int = 0
    invariant_factors: Tuple[int, ...] = ()
    stable: Stability = field(default=Stability(), compare=False)

    def __post_init__(self):
        fs = tuple(int(d) for d in self.invariant_factors)
        if self.free_rank < 0 or any(d < 2 for d in fs):
            raise ValueError("invalid group presentation")
        if any(b % a for a, b in zip(fs, fs[1:])):
            raise ValueError("invariant factors must form a divisibility chain")
        object.__setattr__(self, "invariant_factors", fs)

    @classmethod
    def from_factors(cls, free_rank: int, factors, stable: Stability = Stability()):
        """Build from arbitrary positive diagonal entries (units dropped, chain restored)."""
        return cls(free_rank, tuple(_chain(factors)), stable)

    def with_stability(self, stable: Stability) -> "GroupPresentation":
        return GroupPresentation(self.free_rank, self.invariant_factors, stable)

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def __str__(self):
        parts = [f"Z^{self.free_rank}"] if self.free_rank else []
        parts += [f"Z/{d}" for d in self.invariant_factors]
        return " (+) ".join(parts) if parts else "0"


def _chain(factors) -> List[int]:
    """Invariant factors of ``⊕ Z/d`` for arbitrary positive ``d`` (via the 1x.. SNF)."""
    fs = [abs(int(d)) for d in factors if abs(int(d)) > 1]
    if all(b % a == 0 for a, b in zip(fs, fs[1:])):
        return fs
    n = len(fs)
    diag = smith_normal_form(IntMatrix(n, n, [[fs[i] if i == j else 0 for j in range(n)]
                                              for i in range(n)])).diagonal()
    return [d for d in diag if d > 1]


def cokernel(a) -> GroupPresentation:
    """``Z^rows / column span``."""
    a = as_matrix(a)
    rank, factors = invariant_factors(a)
    return GroupPresentation.from_factors(a.rows - rank, factors)


def rank(a) -> int:
    return invariant_factors(a)[0]

