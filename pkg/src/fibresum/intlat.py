"""Exact integer vector and lattice algebra.

Everything in this module runs on Python's arbitrary-precision integers.
The routines certify divisibility statements, so floating point is never
used. A pairing entry may be ``None``, meaning the value is not tracked;
all consumers treat an untracked entry as absent information rather than
as zero. All values are immutable and all functions pure, so everything
is safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

__all__ = [
    "IntVector",
    "PairingMatrix",
    "DivisibilityReport",
    "SmithDecomposition",
    "gcd_content",
    "divisibility_bounds",
    "smith_normal_form",
    "rank",
    "determinant",
    "identity_matrix",
    "matrix_multiply",
]


@dataclass(frozen=True)
class IntVector:
    """Immutable integer vector, coordinates in a declared lattice basis."""

    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    @classmethod
    def zero(cls, dim: int) -> "IntVector":
        return cls((0,) * dim)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i: int) -> int:
        return self.coords[i]

    def _check_len(self, other: "IntVector") -> None:
        if len(self) != len(other):
            raise ValueError(
                f"length mismatch: {len(self)} vs {len(other)}"
            )

    def __add__(self, other: "IntVector") -> "IntVector":
        self._check_len(other)
        return IntVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "IntVector") -> "IntVector":
        self._check_len(other)
        return IntVector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "IntVector":
        return IntVector(tuple(-a for a in self.coords))

    def __mul__(self, k: int) -> "IntVector":
        return IntVector(tuple(a * k for a in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    def support(self) -> frozenset[int]:
        return frozenset(i for i, a in enumerate(self.coords) if a != 0)


def _as_coords(v: "IntVector | Sequence[int]") -> tuple[int, ...]:
    if isinstance(v, IntVector):
        return v.coords
    return tuple(int(c) for c in v)


def gcd_content(v: "IntVector | Sequence[int]") -> int:
    """Largest k such that v = k * w for an integer vector w; 0 for v = 0."""
    return math.gcd(*_as_coords(v)) if len(_as_coords(v)) else 0


@dataclass(frozen=True)
class PairingMatrix:
    """Symmetric bilinear pairing on the tracked lattice.

    ``None`` entries mark pairings that are not tracked. ``pair`` returns
    ``None`` whenever an untracked entry would contribute with a nonzero
    coefficient, so partial knowledge never silently becomes a number.
    """

    entries: tuple[tuple[Optional[int], ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(
            tuple(None if e is None else int(e) for e in row) for row in self.entries
        )
        object.__setattr__(self, "entries", rows)
        n = len(rows)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError(f"pairing matrix not square: row {i} has {len(row)} entries")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"pairing matrix not symmetric at ({i},{j})")

    @property
    def dim(self) -> int:
        return len(self.entries)

    @classmethod
    def zeros(cls, dim: int) -> "PairingMatrix":
        return cls(tuple((0,) * dim for _ in range(dim)))

    def pair(self, u: "IntVector | Sequence[int]", v: "IntVector | Sequence[int]") -> Optional[int]:
        uc, vc = _as_coords(u), _as_coords(v)
        if len(uc) != self.dim or len(vc) != self.dim:
            raise ValueError("vector length does not match pairing dimension")
        total = 0
        for i, a in enumerate(uc):
            if a == 0:
                continue
            row = self.entries[i]
            for j, b in enumerate(vc):
                if b == 0:
                    continue
                e = row[j]
                if e is None:
                    return None
                total += a * e * b
        return total

    def basis_pairings(self, v: "IntVector | Sequence[int]") -> tuple[Optional[int], ...]:
        """Pairings of v against every basis vector, None where untracked."""
        vc = _as_coords(v)
        if len(vc) != self.dim:
            raise ValueError("vector length does not match pairing dimension")
        out = []
        for j in range(self.dim):
            total = 0
            unknown = False
            for i, a in enumerate(vc):
                if a == 0:
                    continue
                e = self.entries[i][j]
                if e is None:
                    unknown = True
                    break
                total += a * e
            out.append(None if unknown else total)
        return tuple(out)

    def masked(self, unknown_indices: Iterable[int]) -> "PairingMatrix":
        """Copy with every entry between the given indices marked untracked."""
        idx = set(unknown_indices)
        rows = [list(row) for row in self.entries]
        for i in idx:
            for j in idx:
                rows[i][j] = None
        return PairingMatrix(tuple(tuple(r) for r in rows))


@dataclass(frozen=True)
class DivisibilityReport:
    """Two-sided divisibility certificate for a lattice vector.

    ``lower`` is witnessed (the vector equals lower times an integral
    vector in the tracked basis). ``upper`` is the gcd of all declared
    pairings, 0 meaning no pairing constrains the value. ``exact`` holds
    when the two agree and are nonzero; ``undefined`` flags the zero
    vector, whose divisibility is not a number.
    """

    lower: int
    upper: int
    exact: bool
    undefined: bool = False

    def __post_init__(self) -> None:
        if self.lower < 0 or self.upper < 0:
            raise ValueError("divisibility bounds must be nonnegative")
        if self.lower and self.upper and self.upper % self.lower:
            raise ValueError(f"lower bound {self.lower} does not divide upper bound {self.upper}")
        if self.exact != (self.upper != 0 and self.lower == self.upper):
            raise ValueError("exact flag inconsistent with bounds")
        if self.undefined and (self.lower or self.upper or self.exact):
            raise ValueError("undefined report must be all-zero and inexact")


def divisibility_bounds(
    c: "IntVector | Sequence[int]",
    pairing: PairingMatrix,
    duals: Iterable["IntVector | Sequence[int]"] = (),
) -> DivisibilityReport:
    """Bracket the divisibility of c using its coordinates and pairings.

    The lower bound is gcd of the coordinates (with the quotient as an
    implicit integral witness). The upper bound is the gcd of |<c, u>|
    over the basis vectors and all supplied dual classes; any integral
    class that c is a multiple of must divide each of those pairings.
    Untracked pairings are skipped, which can only weaken the upper
    bound, never falsify it.
    """
    coords = _as_coords(c)
    if len(coords) != pairing.dim:
        raise ValueError("vector length does not match pairing dimension")
    if all(a == 0 for a in coords):
        return DivisibilityReport(lower=0, upper=0, exact=False, undefined=True)
    lower = math.gcd(*coords)
    upper = 0
    for p in pairing.basis_pairings(coords):
        if p is not None:
            upper = math.gcd(upper, p)
    for u in duals:
        p = pairing.pair(coords, u)
        if p is not None:
            upper = math.gcd(upper, p)
    return DivisibilityReport(lower=lower, upper=upper, exact=(upper != 0 and lower == upper))


# ---------------------------------------------------------------------------
# Integer matrices: Smith normal form, rank, determinants.
# ---------------------------------------------------------------------------

Matrix = Sequence[Sequence[int]]


def _copy_matrix(matrix: Matrix) -> list[list[int]]:
    rows = [list(map(int, row)) for row in matrix]
    if rows:
        n = len(rows[0])
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError(f"ragged matrix: row {i} has {len(row)} entries, expected {n}")
    return rows


def identity_matrix(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matrix_multiply(a: Matrix, b: Matrix) -> list[list[int]]:
    ra, rb = _copy_matrix(a), _copy_matrix(b)
    if ra and rb and len(ra[0]) != len(rb):
        raise ValueError("matrix shapes do not compose")
    cols = len(rb[0]) if rb else 0
    return [
        [sum(ra[i][k] * rb[k][j] for k in range(len(rb))) for j in range(cols)]
        for i in range(len(ra))
    ]


def determinant(matrix: Matrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    rows = _copy_matrix(matrix)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if rows[i][k] != 0), None)
            if swap is None:
                return 0
            rows[k], rows[swap] = rows[swap], rows[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                rows[i][j] = (rows[i][j] * rows[k][k] - rows[i][k] * rows[k][j]) // prev
            rows[i][k] = 0
        prev = rows[k][k]
    return sign * rows[n - 1][n - 1]


@dataclass(frozen=True)
class SmithDecomposition:
    """D = left * M * right with unimodular transforms and d1 | d2 | ..."""

    diagonal: tuple[int, ...]
    left: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]
    shape: tuple[int, int]

    def diagonal_matrix(self) -> list[list[int]]:
        m, n = self.shape
        out = [[0] * n for _ in range(m)]
        for i, d in enumerate(self.diagonal):
            out[i][i] = d
        return out


def smith_normal_form(matrix: Matrix) -> SmithDecomposition:
    """Diagonalize an integer matrix by unimodular row and column moves.

    Returns diagonal factors (nonnegative, each dividing the next) along
    with the left and right transforms, so callers can verify the
    identity D = U * M * V and |det U| = |det V| = 1 directly.
    """
    rows = _copy_matrix(matrix)
    m = len(rows)
    n = len(rows[0]) if rows else 0
    left = identity_matrix(m)
    right = identity_matrix(n)

    def row_op(dst: int, src: int, z: int) -> None:
        for j in range(n):
            rows[dst][j] += z * rows[src][j]
        for j in range(m):
            left[dst][j] += z * left[src][j]

    def col_op(dst: int, src: int, z: int) -> None:
        for i in range(m):
            rows[i][dst] += z * rows[i][src]
        for i in range(n):
            right[i][dst] += z * right[i][src]

    def row_swap(i1: int, i2: int) -> None:
        rows[i1], rows[i2] = rows[i2], rows[i1]
        left[i1], left[i2] = left[i2], left[i1]

    def col_swap(j1: int, j2: int) -> None:
        for row in rows:
            row[j1], row[j2] = row[j2], row[j1]
        for row in right:
            row[j1], row[j2] = row[j2], row[j1]

    def row_negate(i: int) -> None:
        rows[i] = [-x for x in rows[i]]
        left[i] = [-x for x in left[i]]

    def gcd_row_op(pivot: int, other: int, col: int) -> None:
        # 2x2 unimodular transform turning rows (pivot, other) so that
        # entry (other, col) vanishes and (pivot, col) becomes the gcd.
        a, b = rows[pivot][col], rows[other][col]
        if b == 0:
            return
        if a != 0 and b % a == 0:
            row_op(other, pivot, -(b // a))
            return
        g = math.gcd(a, b)
        x, y = _bezout(a, b)
        p, q = -(b // g), a // g
        for j in range(n):
            ra, rb = rows[pivot][j], rows[other][j]
            rows[pivot][j] = x * ra + y * rb
            rows[other][j] = p * ra + q * rb
        for j in range(m):
            la, lb = left[pivot][j], left[other][j]
            left[pivot][j] = x * la + y * lb
            left[other][j] = p * la + q * lb

    def gcd_col_op(pivot: int, other: int, row_i: int) -> None:
        a, b = rows[row_i][pivot], rows[row_i][other]
        if b == 0:
            return
        if a != 0 and b % a == 0:
            col_op(other, pivot, -(b // a))
            return
        g = math.gcd(a, b)
        x, y = _bezout(a, b)
        p, q = -(b // g), a // g
        for i in range(m):
            ca, cb = rows[i][pivot], rows[i][other]
            rows[i][pivot] = x * ca + y * cb
            rows[i][other] = p * ca + q * cb
        for i in range(n):
            ca, cb = right[i][pivot], right[i][other]
            right[i][pivot] = x * ca + y * cb
            right[i][other] = p * ca + q * cb

    t = 0
    while t < min(m, n):
        pivot = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = abs(rows[i][j])
                if v and (best is None or v < best):
                    best, pivot = v, (i, j)
        if pivot is None:
            break
        row_swap(t, pivot[0])
        col_swap(t, pivot[1])
        while True:
            for i in range(t + 1, m):
                gcd_row_op(t, i, t)
            for j in range(t + 1, n):
                gcd_col_op(t, j, t)
            if any(rows[i][t] for i in range(t + 1, m)):
                continue
            # Column and row at t are clear; enforce the divisibility chain.
            d = rows[t][t]
            offender = next(
                (
                    (i, j)
                    for i in range(t + 1, m)
                    for j in range(t + 1, n)
                    if rows[i][j] % d
                ),
                None,
            )
            if offender is None:
                break
            row_op(t, offender[0], 1)
        if rows[t][t] < 0:
            row_negate(t)
        t += 1

    diag = tuple(rows[i][i] for i in range(min(m, n)))
    return SmithDecomposition(
        diagonal=diag,
        left=tuple(tuple(r) for r in left),
        right=tuple(tuple(r) for r in right),
        shape=(m, n),
    )


def _bezout(a: int, b: int) -> tuple[int, int]:
    """x, y with x*a + y*b = gcd(a, b) >= 0."""
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y = -x, -y
    return x, y


def rank(vectors: Sequence["IntVector | Sequence[int]"]) -> int:
    """Rank over the rationals of the span, by fraction-free elimination."""
    rows = [list(_as_coords(v)) for v in vectors]
    if not rows:
        return 0
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("rank needs vectors of equal length")
    r = 0
    for col in range(width):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        p = rows[r][col]
        for i in range(r + 1, len(rows)):
            if rows[i][col]:
                factor = rows[i][col]
                rows[i] = [p * a - factor * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r
