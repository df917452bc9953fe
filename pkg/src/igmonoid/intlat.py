"""Exact integer lattice linear algebra.

Matrices are tuples of row tuples of Python ints; vectors are tuples of ints.
Nothing here ever touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Optional, Sequence

Vector = tuple[int, ...]
Matrix = tuple[Vector, ...]


class InfiniteIndexError(ValueError):
    """Raised when a coset enumeration is requested for a rank deficient lattice."""


def as_matrix(rows: Iterable[Iterable[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zeros(rows: int, cols: int) -> Matrix:
    return tuple((0,) * cols for _ in range(rows))


def transpose(m: Sequence[Sequence[int]], cols: Optional[int] = None) -> Matrix:
    if not m:
        return tuple(() for _ in range(cols or 0))
    return tuple(zip(*m))


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    # row combinations skipping zeros; action matrices are often very sparse
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [0] * cols
        for x, brow in zip(row, b):
            if x:
                for j, y in enumerate(brow):
                    if y:
                        acc[j] += x * y
        out.append(tuple(acc))
    return tuple(out)


def matvec(m: Sequence[Sequence[int]], v: Sequence[int]) -> Vector:
    nz = [(k, x) for k, x in enumerate(v) if x]
    return tuple(sum(row[k] * x for k, x in nz) for row in m)


def vecmat(v: Sequence[int], m: Sequence[Sequence[int]]) -> Vector:
    if not m:
        return ()
    return tuple(sum(v[i] * m[i][j] for i in range(len(m))) for j in range(len(m[0])))


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(u, v))


def vadd(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(x + y for x, y in zip(u, v))


def vsub(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(x - y for x, y in zip(u, v))


def vscale(k: int, v: Sequence[int]) -> Vector:
    return tuple(k * x for x in v)


def primitive(v: Sequence[int]) -> Vector:
    """Divide ``v`` by the gcd of its entries (zero vector is returned as is)."""
    from math import gcd

    g = 0
    for x in v:
        g = gcd(g, x)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def det(m: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
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


def rank(m: Sequence[Sequence[int]]) -> int:
    if not m:
        return 0
    h, _ = hermite_normal_form(m)
    return sum(1 for row in h if any(row))


def rational_inverse(m: Sequence[Sequence[int]]) -> tuple[tuple[Fraction, ...], ...]:
    """Inverse over the rationals by Gauss-Jordan; raises ZeroDivisionError if singular."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return tuple(tuple(row[n:]) for row in a)


def integer_inverse(m: Sequence[Sequence[int]]) -> Matrix:
    """Inverse of a unimodular matrix."""
    inv = rational_inverse(m)
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return tuple(tuple(int(x) for x in row) for row in inv)


def hermite_normal_form(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Row-style Hermite normal form.

    Returns ``(h, u)`` with ``u`` unimodular and ``u @ m == h``.  ``h`` is in
    row echelon form, pivots are positive, entries above a pivot lie in
    ``[0, pivot)`` and zero rows come last.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    h = [list(r) for r in m]
    u = [list(r) for r in identity(rows)]
    pr = 0
    for c in range(cols):
        if pr == rows:
            break
        for i in range(pr + 1, rows):
            if h[i][c] == 0:
                continue
            a, b = h[pr][c], h[i][c]
            g, x, y = xgcd(a, b)
            p, q = -b // g, a // g
            for mat in (h, u):
                top, bot = mat[pr], mat[i]
                mat[pr] = [x * s + y * t for s, t in zip(top, bot)]
                mat[i] = [p * s + q * t for s, t in zip(top, bot)]
        if h[pr][c] == 0:
            continue
        if h[pr][c] < 0:
            h[pr] = [-s for s in h[pr]]
            u[pr] = [-s for s in u[pr]]
        piv = h[pr][c]
        for i in range(pr):
            k = h[i][c] // piv
            if k:
                h[i] = [s - k * t for s, t in zip(h[i], h[pr])]
                u[i] = [s - k * t for s, t in zip(u[i], u[pr])]
        pr += 1
    return as_matrix(h), as_matrix(u)


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form ``(d, u, v)`` with ``u @ m @ v == d``.

    ``u`` and ``v`` are unimodular, ``d`` is diagonal with non-negative
    entries and each diagonal entry divides the next.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [list(r) for r in m]
    u = [list(r) for r in identity(rows)]
    v = [list(r) for r in identity(cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        a[dst] = [s + k * t for s, t in zip(a[dst], a[src])]
        u[dst] = [s + k * t for s, t in zip(u[dst], u[src])]

    def add_col(dst, src, k):
        for row in a:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    for t in range(min(rows, cols)):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                best = (t, t)
                for i in range(t + 1, rows):
                    if a[i][t] and abs(a[i][t]) < abs(a[best[0]][best[1]]):
                        best = (i, t)
                for j in range(t + 1, cols):
                    if a[t][j] and abs(a[t][j]) < abs(a[best[0]][best[1]]):
                        best = (t, j)
                swap_rows(t, best[0])
                swap_cols(t, best[1])
                continue
            bad = next((i for i in range(t + 1, rows)
                        for j in range(t + 1, cols) if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-s for s in a[t]]
            u[t] = [-s for s in u[t]]
    return as_matrix(a), as_matrix(u), as_matrix(v)


def solve_integer_system(m: Sequence[Sequence[int]], b: Sequence[int]) -> Optional[Vector]:
    """Some integer ``x`` with ``m @ x == b``, or ``None`` if there is none."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if rows == 0:
        return (0,) * cols
    d, u, v = smith_normal_form(m)
    ub = matvec(u, b)
    y = [0] * cols
    for i in range(rows):
        di = d[i][i] if i < cols else 0
        if di == 0:
            if ub[i] != 0:
                return None
        else:
            q, r = divmod(ub[i], di)
            if r:
                return None
            y[i] = q
    return matvec(v, y)


def kernel_basis(m: Sequence[Sequence[int]], cols: Optional[int] = None) -> Matrix:
    """Rows form a basis of the integer kernel ``{x : m @ x == 0}``.

    The kernel of an integer matrix is a saturated lattice, so the returned
    basis also spans every integer point of the rational kernel.
    """
    if cols is None:
        cols = len(m[0]) if m else 0
    if not m:
        return identity(cols)
    h, u = hermite_normal_form(transpose(m))
    return tuple(u[i] for i in range(cols) if not any(h[i]))


@dataclass(frozen=True)
class Sublattice:
    """A sublattice of ``Z^ambient_rank`` stored by its canonical HNF basis."""

    ambient_rank: int
    basis: Matrix

    @classmethod
    def span(cls, rows: Iterable[Sequence[int]], ambient_rank: int) -> "Sublattice":
        rows = [tuple(r) for r in rows]
        if not rows:
            return cls(ambient_rank, ())
        for r in rows:
            if len(r) != ambient_rank:
                raise ValueError("vector length does not match ambient rank")
        h, _ = hermite_normal_form(rows)
        return cls(ambient_rank, tuple(r for r in h if any(r)))

    @classmethod
    def full(cls, n: int) -> "Sublattice":
        return cls(n, identity(n))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def is_full_rank(self) -> bool:
        return self.rank == self.ambient_rank

    def index(self) -> int:
        if not self.is_full_rank:
            raise InfiniteIndexError("sublattice is not of full rank")
        out = 1
        for i, row in enumerate(self.basis):
            out *= row[i]
        return out

    def __contains__(self, v: Sequence[int]) -> bool:
        return lattice_membership(self, v) is not None

    def reduce(self, v: Sequence[int]) -> Vector:
        """Canonical coset representative, inside the box ``0 <= x_i < h_ii``."""
        if not self.is_full_rank:
            raise InfiniteIndexError("sublattice is not of full rank")
        out = list(v)
        for i, row in enumerate(self.basis):
            k = out[i] // row[i]
            if k:
                out = [s - k * t for s, t in zip(out, row)]
        return tuple(out)

    def cosets(self) -> list[Vector]:
        return quotient_cosets(self)

    def image(self, m: Sequence[Sequence[int]]) -> "Sublattice":
        """The lattice ``m(L)`` where ``m`` acts on column vectors."""
        return Sublattice.span((matvec(m, b) for b in self.basis), len(m))

    def contains_lattice(self, other: "Sublattice") -> bool:
        return all(b in self for b in other.basis)


def lattice_membership(l: Sublattice, v: Sequence[int]) -> Optional[Vector]:
    """Coefficients ``c`` with ``c @ l.basis == v``, or ``None`` if ``v`` is not in ``l``."""
    if len(v) != l.ambient_rank:
        raise ValueError("vector length does not match ambient rank")
    if not any(v):
        return (0,) * l.rank
    if l.rank == 0:
        return None
    # the basis is in echelon form: peel off pivots left to right
    out = list(v)
    coeffs = []
    for row in l.basis:
        p = next(j for j, x in enumerate(row) if x)
        if any(out[:p]):
            return None
        k, rem = divmod(out[p], row[p])
        if rem:
            return None
        coeffs.append(k)
        if k:
            out = [a - k * b for a, b in zip(out, row)]
    return tuple(coeffs) if not any(out) else None


def quotient_cosets(l: Sublattice) -> list[Vector]:
    """All canonical representatives of ``Z^n / l`` (requires finite index)."""
    if not l.is_full_rank:
        raise InfiniteIndexError("sublattice has infinite index")
    diag = [l.basis[i][i] for i in range(l.rank)]
    return [tuple(p) for p in product(*(range(d) for d in diag))]


def solve_affine_fixed_point(m: Sequence[Sequence[int]], t: Sequence[int]) -> Optional[Vector]:
    """Integer ``x`` with ``m @ x + t == x``, or ``None``."""
    n = len(m)
    shifted = tuple(tuple(m[i][j] - (i == j) for j in range(n)) for i in range(n))
    return solve_integer_system(shifted, tuple(-x for x in t))
