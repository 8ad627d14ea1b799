"""Exact dense linear algebra over the rationals.

Everything here is exact: entries are Python ints or ``fractions.Fraction``
(ints are kept as ints whenever a value is integral, which keeps the common
signed-permutation workloads fast).  Rank and consistency use fraction-free
(Bareiss-style) elimination on integer-cleared rows; solving and kernels use
plain Gauss-Jordan over Fraction.  Pivoting is deterministic: first nonzero
entry scanning top-to-bottom, left-to-right.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Rat = int | Fraction


def ratnorm(x) -> Rat:
    """Collapse integral Fractions to int; leave everything else alone."""
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return int(x)
        return x
    return x


def as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def parse_rat(tok: str) -> Rat:
    """Parse "p" or "p/q" into an exact rational."""
    tok = tok.strip()
    if "/" in tok:
        p, q = tok.split("/")
        return ratnorm(Fraction(int(p), int(q)))
    return int(tok)


def format_rat(x: Rat) -> str:
    x = ratnorm(x)
    if isinstance(x, int):
        return str(x)
    return f"{x.numerator}/{x.denominator}"


class DimensionMismatch(ValueError):
    """Shapes do not line up for the requested operation."""


@dataclass(frozen=True)
class DiagMetric:
    """Diagonal metric: ordered +1/-1 signs (the diagonal of eta)."""

    signs: tuple[int, ...]

    def __post_init__(self):
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("metric signs must be +1 or -1")

    @property
    def dim(self) -> int:
        return len(self.signs)

    def inner(self, x: Sequence[Rat], y: Sequence[Rat]) -> Rat:
        if len(x) != self.dim or len(y) != self.dim:
            raise DimensionMismatch("vector length != metric dimension")
        return ratnorm(sum(s * a * b for s, a, b in zip(self.signs, x, y)))

    def norm2(self, x: Sequence[Rat]) -> Rat:
        return self.inner(x, x)

    def is_neutral(self) -> bool:
        return sum(self.signs) == 0


class RatMatrix:
    """Dense rational matrix, row-major storage."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence[Rat]):
        if len(entries) != rows * cols:
            raise DimensionMismatch("entry count != rows*cols")
        self.rows = rows
        self.cols = cols
        self.entries = [ratnorm(x) for x in entries]

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rows(rows: Sequence[Sequence[Rat]]) -> "RatMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = []
        for row in rows:
            if len(row) != c:
                raise DimensionMismatch("ragged rows")
            flat.extend(row)
        return RatMatrix(r, c, flat)

    @staticmethod
    def identity(n: int) -> "RatMatrix":
        e = [0] * (n * n)
        for i in range(n):
            e[i * n + i] = 1
        return RatMatrix(n, n, e)

    @staticmethod
    def zero(rows: int, cols: int) -> "RatMatrix":
        return RatMatrix(rows, cols, [0] * (rows * cols))

    @staticmethod
    def from_columns(cols: Sequence[Sequence[Rat]]) -> "RatMatrix":
        if not cols:
            return RatMatrix(0, 0, [])
        r = len(cols[0])
        flat = []
        for i in range(r):
            for col in cols:
                if len(col) != r:
                    raise DimensionMismatch("ragged columns")
                flat.append(col[i])
        return RatMatrix(r, len(cols), flat)

    # -- access -------------------------------------------------------

    def __getitem__(self, ij: tuple[int, int]) -> Rat:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[Rat]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> list[Rat]:
        return self.entries[j :: self.cols][: self.rows] if self.cols else []

    def to_rows(self) -> list[list[Rat]]:
        return [self.row(i) for i in range(self.rows)]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RatMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and all(a == b for a, b in zip(self.entries, other.entries))
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(map(as_fraction, self.entries))))

    def __repr__(self):
        body = "; ".join(" ".join(format_rat(x) for x in self.row(i)) for i in range(self.rows))
        return f"RatMatrix({self.rows}x{self.cols}: {body})"

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        self._same_shape(other)
        return RatMatrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        self._same_shape(other)
        return RatMatrix(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, c: Rat) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, [c * a for a in self.entries])

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        n, m, k = self.rows, other.cols, self.cols
        a, b = self.entries, other.entries
        out = [0] * (n * m)
        for i in range(n):
            arow = a[i * k : (i + 1) * k]
            for t in range(k):
                x = arow[t]
                if x:
                    brow = b[t * m : (t + 1) * m]
                    base = i * m
                    for j in range(m):
                        if brow[j]:
                            out[base + j] += x * brow[j]
        return RatMatrix(n, m, out)

    def apply(self, vec: Sequence[Rat]) -> list[Rat]:
        if len(vec) != self.cols:
            raise DimensionMismatch("vector length != cols")
        out = [0] * self.rows
        e = self.entries
        for i in range(self.rows):
            base = i * self.cols
            acc = 0
            for j, x in enumerate(vec):
                if x:
                    acc += e[base + j] * x
            out[i] = ratnorm(acc)
        return out

    def transpose(self) -> "RatMatrix":
        out = [0] * (self.rows * self.cols)
        for i in range(self.rows):
            for j in range(self.cols):
                out[j * self.rows + i] = self.entries[i * self.cols + j]
        return RatMatrix(self.cols, self.rows, out)

    def _same_shape(self, other: "RatMatrix"):
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionMismatch("shape mismatch")


def commutator(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    """AB - BA."""
    if a.rows != a.cols or b.rows != b.cols or a.rows != b.rows:
        raise DimensionMismatch("commutator needs equal square matrices")
    return (a @ b) - (b @ a)


def anticommutator(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    return (a @ b) + (b @ a)


def metric_transpose(a: RatMatrix, eta: DiagMetric) -> RatMatrix:
    """eta * A^t * eta, the adjoint w.r.t. the diagonal metric eta."""
    if a.rows != a.cols or a.rows != eta.dim:
        raise DimensionMismatch("metric transpose needs square matrix matching eta")
    n = a.rows
    s = eta.signs
    out = [0] * (n * n)
    for i in range(n):
        for j in range(n):
            out[i * n + j] = s[i] * a.entries[j * n + i] * s[j]
    return RatMatrix(n, n, out)


def is_metric_skew(a: RatMatrix, eta: DiagMetric) -> bool:
    return metric_transpose(a, eta) == -a


# ---------------------------------------------------------------------------
# integer-cleared fraction-free elimination (shared by rank / consistency)
# ---------------------------------------------------------------------------


def _int_rows(a: RatMatrix, column_order: Sequence[int] | None = None) -> list[list[int]]:
    """Integer-cleared copy of the rows (row scaling preserves rank/kernels)."""
    order = range(a.cols) if column_order is None else column_order
    rows = []
    for i in range(a.rows):
        raw = [a.entries[i * a.cols + j] for j in order]
        den = 1
        for x in raw:
            if isinstance(x, Fraction):
                den = den * x.denominator // gcd(den, x.denominator)
        rows.append([int(x * den) if isinstance(x, Fraction) else x * den for x in raw])
    return rows


def _reduce_row(row: list[int]) -> list[int]:
    g = 0
    for x in row:
        g = gcd(g, x)
        if g == 1:
            return row
    if g > 1:
        return [x // g for x in row]
    return row


def int_echelon(rows: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """In-place fraction-free row echelon; returns (rows, pivot column list)."""
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        pval = prow[c]
        for i in range(r + 1, len(rows)):
            x = rows[i][c]
            if x:
                ri = rows[i]
                rows[i] = _reduce_row([pval * ri[j] - x * prow[j] for j in range(ncols)])
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def det(a: RatMatrix) -> Rat:
    """Exact determinant via fraction-free (Bareiss) elimination."""
    if a.rows != a.cols:
        raise DimensionMismatch("determinant needs a square matrix")
    n = a.rows
    if n == 0:
        return 1
    m = [[as_fraction(a[i, j]) for j in range(n)] for i in range(n)]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if not m[k][k]:
            piv = None
            for i in range(k + 1, n):
                if m[i][k]:
                    piv = i
                    break
            if piv is None:
                return 0
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
            m[i][k] = Fraction(0)
        prev = m[k][k]
    return ratnorm(sign * m[n - 1][n - 1])


def rank(a: RatMatrix, column_order: Sequence[int] | None = None) -> int:
    """Exact row rank over Q.  column_order permutes columns first, giving an
    independent pivot sequence for cross-checks (the rank is order-invariant)."""
    _, pivots = int_echelon(_int_rows(a, column_order))
    return len(pivots)


def rank_pair(a: RatMatrix, b: Sequence[Rat], column_order: Sequence[int] | None = None) -> tuple[int, int]:
    """(rank A, rank [A|b]) from a single elimination of the extended matrix."""
    if a.rows != len(b):
        raise DimensionMismatch("rhs length != rows")
    order = list(range(a.cols)) if column_order is None else list(column_order)
    ext = RatMatrix.from_rows([a.row(i) + [b[i]] for i in range(a.rows)])
    _, pivots = int_echelon(_int_rows(ext, order + [a.cols]))
    rk_ext = len(pivots)
    rk_a = sum(1 for c in pivots if c < a.cols)
    return rk_a, rk_ext


def solve_consistent(a: RatMatrix, b: Sequence[Rat]) -> list[Rat] | None:
    """One exact solution of A x = b, or None when the system is inconsistent.
    Free variables are set to zero, so the output is deterministic."""
    if a.rows != len(b):
        raise DimensionMismatch("rhs length != rows")
    m, n = a.rows, a.cols
    rows = [[as_fraction(x) for x in a.row(i)] + [as_fraction(b[i])] for i in range(m)]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append((r, c))
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if rows[i][n]:
            return None
    x = [0] * n
    for (i, c) in pivots:
        x[c] = ratnorm(rows[i][n])
    return x


def kernel_basis(a: RatMatrix) -> list[list[Rat]]:
    """Deterministic basis of the right kernel (count = cols - rank)."""
    m, n = a.rows, a.cols
    rows = [[as_fraction(x) for x in a.row(i)] for i in range(m)]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append((r, c))
        r += 1
        if r == m:
            break
    pivot_cols = [c for (_, c) in pivots]
    free_cols = [c for c in range(n) if c not in pivot_cols]
    basis = []
    for fc in free_cols:
        v: list[Rat] = [0] * n
        v[fc] = 1
        for (i, c) in pivots:
            v[c] = ratnorm(-rows[i][fc])
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# text fixtures: first line "rows cols", then row-major "p/q" tokens
# ---------------------------------------------------------------------------


def parse_matrix(text: str) -> RatMatrix:
    toks = text.split()
    if len(toks) < 2:
        raise ValueError("matrix text needs a 'rows cols' header")
    r, c = int(toks[0]), int(toks[1])
    vals = [parse_rat(t) for t in toks[2:]]
    if len(vals) != r * c:
        raise ValueError(f"expected {r * c} entries, got {len(vals)}")
    return RatMatrix(r, c, vals)


def format_matrix(a: RatMatrix) -> str:
    lines = [f"{a.rows} {a.cols}"]
    for i in range(a.rows):
        lines.append(" ".join(format_rat(x) for x in a.row(i)))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# span / membership helpers used by the algebraic modules
# ---------------------------------------------------------------------------


class SpanTracker:
    """Incremental row-echelon span of vectors over Q (deterministic)."""

    def __init__(self, dim: int):
        self.dim = dim
        self._rows: list[tuple[int, list[Fraction]]] = []  # (pivot index, reduced row)

    def _reduce(self, vec: Sequence[Rat]) -> list[Fraction]:
        w = [as_fraction(x) for x in vec]
        for piv, row in self._rows:
            if w[piv]:
                f = w[piv]
                w = [a - f * b for a, b in zip(w, row)]
        return w

    def contains(self, vec: Sequence[Rat]) -> bool:
        return all(x == 0 for x in self._reduce(vec))

    def add(self, vec: Sequence[Rat]) -> bool:
        """Add vector to the span; True if it was independent."""
        w = self._reduce(vec)
        for i, x in enumerate(w):
            if x:
                w = [a / x for a in w]
                self._rows.append((i, w))
                self._rows.sort(key=lambda t: t[0])
                return True
        return False

    @property
    def rank(self) -> int:
        return len(self._rows)

    def coordinates(self, vec: Sequence[Rat], basis: Sequence[Sequence[Rat]]) -> list[Rat] | None:
        """Coefficients expressing vec in the given basis, or None."""
        mat = RatMatrix.from_columns(list(basis))
        return solve_consistent(mat, list(vec))


def matrix_span_contains(basis: Iterable[RatMatrix], m: RatMatrix) -> bool:
    tr = SpanTracker(m.rows * m.cols)
    for b in basis:
        tr.add(b.entries)
    return tr.contains(m.entries)


def sparse_kernel(rows: list[dict[int, Rat]], ncols: int) -> list[list[Rat]]:
    """Deterministic kernel basis for a system given by sparse rows
    (col -> coefficient).  Suited to the very sparse commutation-constraint
    systems; pivot choice is the smallest column index of each reduced row."""
    pivots: dict[int, dict[int, Fraction]] = {}
    for raw in rows:
        row = {c: as_fraction(v) for c, v in raw.items() if v}
        while row:
            lead = min(row)
            piv = pivots.get(lead)
            if piv is None:
                lv = row[lead]
                pivots[lead] = {c: v / lv for c, v in row.items()}
                break
            f = row[lead]
            for c, v in piv.items():
                nv = row.get(c, Fraction(0)) - f * v
                if nv:
                    row[c] = nv
                elif c in row:
                    del row[c]
    # back-substitute to reduced form
    for lead in sorted(pivots, reverse=True):
        row = pivots[lead]
        for other_lead, other in pivots.items():
            if other_lead == lead:
                continue
            f = other.get(lead)
            if f:
                for c, v in row.items():
                    nv = other.get(c, Fraction(0)) - f * v
                    if nv:
                        other[c] = nv
                    elif c in other:
                        del other[c]
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for fc in free:
        vec: list[Rat] = [0] * ncols
        vec[fc] = 1
        for lead, row in pivots.items():
            coef = row.get(fc)
            if coef:
                vec[lead] = ratnorm(-coef)
        out.append(vec)
    return out
