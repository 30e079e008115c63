"""Exact linear algebra over Q.

Scalars are `fractions.Fraction` (arbitrary precision, always in lowest terms
with positive denominator), matrices are dense and immutable.  Everything here
is pivot-order independent: ranks and kernel dimensions are invariants, and no
operation ever rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

Rat = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def rat(value) -> Fraction:
    """Coerce an int, Fraction, or exact string like "3" / "-5/7" to Fraction.

    Floats are rejected: the engine is exact end to end.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


def format_rat(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class QMatrix:
    """Dense rows x cols matrix over Q, row-major entries."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix shape")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"entry count {len(self.entries)} != {self.rows}x{self.cols}"
            )

    @staticmethod
    def from_rows(data: Sequence[Sequence]) -> "QMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        flat = []
        for row in data:
            if len(row) != cols:
                raise ValueError("ragged rows")
            flat.extend(rat(x) for x in row)
        return QMatrix(rows, cols, tuple(flat))

    @staticmethod
    def zero(rows: int, cols: int) -> "QMatrix":
        return QMatrix(rows, cols, (ZERO,) * (rows * cols))

    @staticmethod
    def identity(n: int) -> "QMatrix":
        return QMatrix(n, n, tuple(ONE if i == j else ZERO for i in range(n) for j in range(n)))

    def at(self, i: int, j: int) -> Fraction:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[Fraction]:
        return list(self.entries[i * self.cols : (i + 1) * self.cols])

    def row_lists(self) -> list[list[Fraction]]:
        return [self.row(i) for i in range(self.rows)]

    def apply(self, vector: Sequence[Fraction]) -> list[Fraction]:
        if len(vector) != self.cols:
            raise ValueError("vector length != cols")
        out = []
        for i in range(self.rows):
            base = i * self.cols
            out.append(sum((self.entries[base + j] * vector[j] for j in range(self.cols)), ZERO))
        return out


def _eliminate(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """In-place forward elimination to row echelon form; returns (rows, pivot cols)."""
    pivots: list[int] = []
    if not rows:
        return rows, pivots
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = ONE / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(m: QMatrix) -> int:
    """Rank over Q by exact Gaussian elimination."""
    _, pivots = _eliminate(m.row_lists())
    return len(pivots)


def kernel_basis(m: QMatrix) -> list[list[Fraction]]:
    """Basis of the right kernel; len == cols - rank(m)."""
    rows, pivots = _eliminate(m.row_lists())
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [ZERO] * m.cols
        vec[fc] = ONE
        # rows are in reduced echelon form: pivot entry 1, zeros above/below
        for r, pc in enumerate(pivots):
            vec[pc] = -rows[r][fc]
        basis.append(vec)
    return basis


def solve(m: QMatrix, rhs: Sequence[Fraction]) -> Optional[list[Fraction]]:
    """One exact solution of m x = rhs, or None if inconsistent."""
    if len(rhs) != m.rows:
        raise ValueError("rhs length != rows")
    aug = [row + [rat(b)] for row, b in zip(m.row_lists(), rhs)]
    rows, pivots = _eliminate(aug)
    # a pivot in the appended column means the system is inconsistent
    if m.cols in pivots:
        return None
    x = [ZERO] * m.cols
    for r, pc in enumerate(pivots):
        x[pc] = rows[r][m.cols]
    return x


class RowSpan:
    """Incrementally built row space; tracks dimension as vectors are added."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self._rows: list[list[Fraction]] = []
        self._pivots: list[int] = []

    @property
    def dim(self) -> int:
        return len(self._rows)

    def copy(self) -> "RowSpan":
        dup = RowSpan(self.ncols)
        dup._rows = [list(r) for r in self._rows]
        dup._pivots = list(self._pivots)
        return dup

    def reduce(self, vector: Sequence[Fraction]) -> list[Fraction]:
        vec = [rat(x) for x in vector]
        for row, p in zip(self._rows, self._pivots):
            if vec[p] != 0:
                f = vec[p]
                vec = [a - f * b for a, b in zip(vec, row)]
        return vec

    def add(self, vector: Sequence[Fraction]) -> bool:
        """Add vector to the span; True iff it was independent of the span."""
        vec = self.reduce(vector)
        for c, x in enumerate(vec):
            if x != 0:
                inv = ONE / x
                vec = [v * inv for v in vec]
                # keep reduced form: clear this column in existing rows
                for i, row in enumerate(self._rows):
                    if row[c] != 0:
                        f = row[c]
                        self._rows[i] = [a - f * b for a, b in zip(row, vec)]
                self._rows.append(vec)
                self._pivots.append(c)
                return True
        return False

    def contains(self, vector: Sequence[Fraction]) -> bool:
        return all(x == 0 for x in self.reduce(vector))


def span_dim(vectors: Iterable[Sequence[Fraction]], ncols: int) -> int:
    span = RowSpan(ncols)
    for v in vectors:
        span.add(v)
    return span.dim


def extend_independent(
    base: Iterable[Sequence[Fraction]],
    candidates: Sequence[Sequence[Fraction]],
    ncols: int,
) -> list[int]:
    """Indices of candidates that successively extend span(base)."""
    span = RowSpan(ncols)
    for v in base:
        span.add(v)
    picked = []
    for i, v in enumerate(candidates):
        if span.add(v):
            picked.append(i)
    return picked


@dataclass(frozen=True)
class GradedDims:
    """Finite map degree -> dimension with zero entries omitted (Betti profile)."""

    dims: Mapping[int, int]

    def __post_init__(self):
        clean = {}
        for deg, dim in self.dims.items():
            if deg < 0:
                raise ValueError(f"negative degree {deg}")
            if dim < 0:
                raise ValueError(f"negative dimension in degree {deg}")
            if dim > 0:
                clean[int(deg)] = int(dim)
        object.__setattr__(self, "dims", clean)

    def get(self, degree: int) -> int:
        return self.dims.get(degree, 0)

    def degrees(self) -> list[int]:
        return sorted(self.dims)

    def top(self) -> int:
        """Largest degree with nonzero dimension (0 for the empty profile)."""
        return max(self.dims) if self.dims else 0

    def total(self) -> int:
        return sum(self.dims.values())

    def as_dict(self) -> dict[int, int]:
        return dict(sorted(self.dims.items()))

    def __eq__(self, other) -> bool:
        if isinstance(other, GradedDims):
            return dict(self.dims) == dict(other.dims)
        if isinstance(other, dict):
            return dict(self.dims) == {d: n for d, n in other.items() if n}
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.dims.items())))
