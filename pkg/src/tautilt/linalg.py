"""Exact rational linear algebra on numpy object arrays.

Every matrix handled here is a 2-d ``numpy.ndarray`` with ``dtype=object``
whose entries are :class:`fractions.Fraction` (plain ints are accepted and
normalised).  No floating point is used anywhere; all pivoting is exact.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np


def mat(rows) -> np.ndarray:
    """Build an exact matrix from a nested sequence of ints/Fractions/strings."""
    data = [[_to_fraction(x) for x in row] for row in rows]
    n_cols = len(data[0]) if data else 0
    out = np.empty((len(data), n_cols), dtype=object)
    for i, row in enumerate(data):
        if len(row) != n_cols:
            raise ValueError("ragged rows in matrix literal")
        for j, x in enumerate(row):
            out[i, j] = x
    return out


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def zeros(m: int, n: int) -> np.ndarray:
    out = np.empty((m, n), dtype=object)
    out[...] = Fraction(0)
    return out


def eye(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def copy(a: np.ndarray) -> np.ndarray:
    return a.copy()


def is_zero(a: np.ndarray) -> bool:
    return all(x == 0 for x in a.flat)


def equal(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and all(x == y for x, y in zip(a.flat, b.flat))


def rref(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form.

    Returns the RREF matrix and the list of pivot column indices.
    """
    r = a.copy()
    m, n = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        pivot = None
        for i in range(row, m):
            if r[i, col] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        if pivot != row:
            r[[row, pivot]] = r[[pivot, row]]
        inv = Fraction(1) / Fraction(r[row, col])
        for j in range(col, n):
            r[row, j] = Fraction(r[row, j]) * inv
        for i in range(m):
            if i != row and r[i, col] != 0:
                f = r[i, col]
                for j in range(col, n):
                    r[i, j] = r[i, j] - f * r[row, j]
        pivots.append(col)
        row += 1
    return r, pivots


def rank(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return len(rref(a)[1])


def nullspace(a: np.ndarray) -> np.ndarray:
    """Basis of the right kernel, returned as the columns of an n x k matrix."""
    m, n = a.shape
    if n == 0:
        return zeros(0, 0)
    if m == 0:
        return eye(n)
    r, pivots = rref(a)
    free = [j for j in range(n) if j not in pivots]
    basis = zeros(n, len(free))
    for k, j in enumerate(free):
        basis[j, k] = Fraction(1)
        for i, p in enumerate(pivots):
            basis[p, k] = -r[i, j]
    return basis


def column_space(a: np.ndarray) -> np.ndarray:
    """Basis of the column space: the pivot columns of ``a`` (m x r matrix)."""
    m, n = a.shape
    if n == 0 or m == 0:
        return zeros(m, 0)
    _, pivots = rref(a)
    return a[:, pivots].copy()


def solve(a: np.ndarray, b: np.ndarray):
    """One exact solution X of A @ X = B, or None if the system is inconsistent.

    Free variables are set to zero.  B may be a matrix (solved column-wise in
    one elimination pass).
    """
    m, n = a.shape
    mb, k = b.shape
    if mb != m:
        raise ValueError("shape mismatch in solve")
    aug = zeros(m, n + k)
    aug[:, :n] = a
    aug[:, n:] = b
    r, pivots = rref(aug)
    if any(p >= n for p in pivots):
        return None
    x = zeros(n, k)
    for i, p in enumerate(pivots):
        for j in range(k):
            x[p, j] = r[i, n + j]
    return x


def inverse(a: np.ndarray) -> np.ndarray:
    m, n = a.shape
    if m != n:
        raise ValueError("inverse of a non-square matrix")
    x = solve(a, eye(n))
    if x is None or rank(a) != n:
        raise ValueError("matrix is singular")
    return x


def det(a: np.ndarray) -> Fraction:
    """Exact determinant by fraction-free-ish Gaussian elimination."""
    m, n = a.shape
    if m != n:
        raise ValueError("determinant of a non-square matrix")
    r = a.copy()
    result = Fraction(1)
    for col in range(n):
        pivot = None
        for i in range(col, n):
            if r[i, col] != 0:
                pivot = i
                break
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            r[[col, pivot]] = r[[pivot, col]]
            result = -result
        result *= Fraction(r[col, col])
        inv = Fraction(1) / Fraction(r[col, col])
        for i in range(col + 1, n):
            if r[i, col] != 0:
                f = r[i, col] * inv
                for j in range(col, n):
                    r[i, j] = r[i, j] - f * r[col, j]
    return result


def hstack(blocks: list[np.ndarray], m: int) -> np.ndarray:
    """Horizontal concatenation that tolerates zero-width blocks."""
    blocks = [b for b in blocks if b.shape[1] > 0]
    if not blocks:
        return zeros(m, 0)
    return np.concatenate(blocks, axis=1)


def vstack(blocks: list[np.ndarray], n: int) -> np.ndarray:
    blocks = [b for b in blocks if b.shape[0] > 0]
    if not blocks:
        return zeros(0, n)
    return np.concatenate(blocks, axis=0)


def block_diag(blocks: list[np.ndarray]) -> np.ndarray:
    m = sum(b.shape[0] for b in blocks)
    n = sum(b.shape[1] for b in blocks)
    out = zeros(m, n)
    i = j = 0
    for b in blocks:
        bi, bj = b.shape
        out[i:i + bi, j:j + bj] = b
        i += bi
        j += bj
    return out


def left_nullspace(a: np.ndarray) -> np.ndarray:
    """Basis of the left kernel as the rows of a k x m matrix: K @ a = 0."""
    return nullspace(a.T).T


def right_inverse(a: np.ndarray) -> np.ndarray:
    """Right inverse of a full-row-rank matrix: a @ r = I."""
    m, _ = a.shape
    r = solve(a, eye(m))
    if r is None:
        raise ValueError("matrix has no right inverse")
    return r


def quotient_projection(sub_basis: np.ndarray, ambient_dim: int) -> np.ndarray:
    """Projection q x m matrix onto a complement of the given column span.

    The projection kills exactly the span of ``sub_basis`` and has full row
    rank q = ambient_dim - rank(sub_basis).
    """
    if sub_basis.shape[0] != ambient_dim:
        raise ValueError("subspace basis does not live in the ambient space")
    return left_nullspace(sub_basis)


def as_int_matrix(a: np.ndarray) -> list[list[int]]:
    """Convert an exact matrix with integer entries to nested python ints."""
    out = []
    for i in range(a.shape[0]):
        row = []
        for j in range(a.shape[1]):
            x = Fraction(a[i, j])
            if x.denominator != 1:
                raise ValueError(f"non-integer entry {x} at ({i},{j})")
            row.append(int(x))
        out.append(row)
    return out


def from_int_matrix(rows: list[list[int]]) -> np.ndarray:
    return mat(rows)


def min_poly(a: np.ndarray) -> list[Fraction]:
    """Coefficients (low to high degree, monic) of the minimal polynomial."""
    n = a.shape[0]
    if n == 0:
        return [Fraction(0), Fraction(1)]
    power = eye(n)
    stacked = zeros(n * n, 0)
    powers = []
    for _ in range(n + 1):
        vec = power.reshape(n * n, 1)
        powers.append(vec)
        candidate = hstack([stacked, vec], n * n)
        if rank(candidate) < candidate.shape[1]:
            coeffs = solve(stacked, vec)
            assert coeffs is not None
            poly = [-Fraction(coeffs[i, 0]) for i in range(coeffs.shape[0])]
            poly.append(Fraction(1))
            return poly
        stacked = candidate
        power = power @ a
    raise AssertionError("minimal polynomial not found within degree bound")
