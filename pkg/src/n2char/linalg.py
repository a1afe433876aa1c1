"""Exact rank of rational matrices by fraction-free (Bareiss) elimination."""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence


def _integer_rows(matrix: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    rows = []
    for row in matrix:
        row = [Fraction(x) for x in row]
        scale = lcm(1, *(x.denominator for x in row))
        rows.append([int(x * scale) for x in row])
    return rows


def bareiss_rank(matrix: Sequence[Sequence[Fraction]]) -> int:
    """Rank of ``matrix`` over Q.

    Each row is cleared of denominators (row scaling keeps the rank), then
    Bareiss elimination runs on integers with full pivoting: every division
    by the previous pivot is exact, so entries stay integral and no
    fractions are formed.
    """
    m = _integer_rows(matrix)
    n_rows = len(m)
    if n_rows == 0:
        return 0
    n_cols = len(m[0])
    if any(len(row) != n_cols for row in m):
        raise ValueError("ragged matrix")
    prev = 1
    rank = 0
    for k in range(min(n_rows, n_cols)):
        pivot = None
        for i in range(k, n_rows):
            for j in range(k, n_cols):
                if m[i][j]:
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        i, j = pivot
        m[k], m[i] = m[i], m[k]
        if j != k:
            for row in m:
                row[k], row[j] = row[j], row[k]
        p = m[k][k]
        for i in range(k + 1, n_rows):
            a = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n_cols):
                row_i[j] = (p * row_i[j] - a * row_k[j]) // prev
            row_i[k] = 0
        prev = p
        rank += 1
    return rank
