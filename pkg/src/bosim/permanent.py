"""Matrix permanents and submatrix selection.

Two kernels are provided: :func:`perm_naive`, a direct sum over permutations
kept as a test oracle, and :func:`perm_ryser`, Ryser's inclusion-exclusion
formula walked in Gray-code order. :func:`perm_ryser_batch` evaluates the
same recurrence over a stack of equally sized matrices at once, which is what
the distribution builders use.
"""

from __future__ import annotations

import functools
import itertools
import json
from os import PathLike
import numpy as np

NAIVE_LIMIT = 9
RYSER_LIMIT = 32


def as_complex_matrix(M, *, square: bool = False) -> np.ndarray:
    """Validate ``M`` as a finite 2-d complex array and return it as ``complex128``."""
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-d matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix contains NaN or Inf entries")
    if square and A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    return A


@functools.lru_cache(maxsize=None)
def _permutation_index(n: int) -> np.ndarray:
    """Flat indices ``i * n + sigma(i)``, one row per ``i`` and one column per permutation."""
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.intp).reshape(-1, n)
    return np.ascontiguousarray((np.arange(n) * n + perms).T)


def perm_naive(M) -> complex:
    """Permanent as the explicit sum over all n! permutations.

    Only meant as a reference; refuses matrices larger than 9x9.
    """
    A = as_complex_matrix(M, square=True)
    n = A.shape[0]
    if n > NAIVE_LIMIT:
        raise ValueError(f"perm_naive is limited to n <= {NAIVE_LIMIT}, got {n}")
    flat, index = A.ravel(), _permutation_index(n)
    terms = flat[index[0]]
    for row in index[1:]:
        terms *= flat[row]
    return complex(terms.sum())


def _gray_schedule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Column index flipped and its sign (+1 added, -1 removed) at each Gray step."""
    steps = np.arange(1, 2**n, dtype=np.int64)
    flipped = np.zeros(steps.size, dtype=np.int64)
    low = steps & -steps
    for bit in range(n):
        flipped[low == (1 << bit)] = bit
    gray = steps ^ (steps >> 1)
    added = (gray >> flipped) & 1
    return flipped, np.where(added == 1, 1.0, -1.0)


def perm_ryser(M) -> complex:
    """Permanent by Ryser's formula with Gray-code subset iteration.

    Each step toggles one column in or out of the current subset and updates
    the row sums incrementally, so the cost is O(2^n n).
    """
    A = as_complex_matrix(M, square=True)
    n = A.shape[0]
    if n > RYSER_LIMIT:
        raise ValueError(f"perm_ryser is limited to n <= {RYSER_LIMIT}, got {n}")
    row_sums = np.zeros(n, dtype=np.complex128)
    total = 0j
    sign = -1.0 if n % 2 else 1.0  # (-1)^(n - |subset|), |subset| starts at 0
    gray, prev = 0, 0
    for k in range(1, 2**n):
        gray = k ^ (k >> 1)
        col = (gray ^ prev).bit_length() - 1
        if gray & (1 << col):
            row_sums += A[:, col]
        else:
            row_sums -= A[:, col]
        prev = gray
        sign = -sign
        total += sign * np.prod(row_sums)
    return complex(total)


def perm_ryser_batch(stack) -> np.ndarray:
    """Permanents of a stack of square matrices with shape ``(B, n, n)``.

    Runs the Gray-code Ryser recurrence once for the whole stack. The result
    for each matrix does not depend on what else is in the batch.
    """
    A = np.asarray(stack, dtype=np.complex128)
    if A.ndim != 3 or A.shape[1] != A.shape[2]:
        raise ValueError(f"expected a (B, n, n) stack, got shape {A.shape}")
    B, n, _ = A.shape
    if n == 0:
        return np.ones(B, dtype=np.complex128)
    if n > RYSER_LIMIT:
        raise ValueError(f"perm_ryser_batch is limited to n <= {RYSER_LIMIT}, got {n}")
    if n == 1:
        return A[:, 0, 0].copy()
    cols = np.ascontiguousarray(A.transpose(2, 1, 0))  # cols[j, i] holds entry (i, j) of every matrix
    flipped, signs = _gray_schedule(n)
    row_sums = np.zeros((n, B), dtype=np.complex128)
    total = np.zeros(B, dtype=np.complex128)
    term = np.empty(B, dtype=np.complex128)
    parity = -1.0 if n % 2 else 1.0
    for col, s in zip(flipped, signs):
        if s > 0:
            row_sums += cols[col]
        else:
            row_sums -= cols[col]
        np.multiply(row_sums[0], row_sums[1], out=term)
        for i in range(2, n):
            term *= row_sums[i]
        parity = -parity
        if parity > 0:
            total += term
        else:
            total -= term
    return total


def _ports(pattern) -> list[int]:
    return list(getattr(pattern, "ports", pattern))


def submatrix(U, row_pattern, col_pattern) -> np.ndarray:
    """Select the rows and columns of ``U`` named by two patterns of 1-based ports.

    Row ``i`` of the result is row ``row_pattern[i]`` of ``U``; columns are
    taken in the order of ``col_pattern``, so a port listed twice gives a
    duplicated column.
    """
    A = np.asarray(U)
    rows = np.asarray(_ports(row_pattern), dtype=np.int64) - 1
    cols = np.asarray(_ports(col_pattern), dtype=np.int64) - 1
    if rows.size and (rows.min() < 0 or rows.max() >= A.shape[0]):
        raise IndexError(f"row pattern {_ports(row_pattern)} outside 1..{A.shape[0]}")
    if cols.size and (cols.min() < 0 or cols.max() >= A.shape[1]):
        raise IndexError(f"column pattern {_ports(col_pattern)} outside 1..{A.shape[1]}")
    return A[np.ix_(rows, cols)]


def matrix_to_dict(M) -> dict:
    A = as_complex_matrix(M)
    return {
        "rows": int(A.shape[0]),
        "cols": int(A.shape[1]),
        "re": A.real.ravel().tolist(),
        "im": A.imag.ravel().tolist(),
    }


def matrix_from_dict(data: dict) -> np.ndarray:
    rows, cols = int(data["rows"]), int(data["cols"])
    re, im = data["re"], data["im"]
    if len(re) != rows * cols or len(im) != rows * cols:
        raise ValueError(
            f"matrix record declares {rows}x{cols} but has {len(re)} real and {len(im)} imaginary entries"
        )
    A = (np.asarray(re, dtype=float) + 1j * np.asarray(im, dtype=float)).reshape(rows, cols)
    return as_complex_matrix(A)


def save_matrix(M, path: str | PathLike) -> None:
    with open(path, "w") as fh:
        json.dump(matrix_to_dict(M), fh)


def load_matrix(path: str | PathLike) -> np.ndarray:
    with open(path) as fh:
        return matrix_from_dict(json.load(fh))

