"""Exact integer matrix reductions (Smith and Hermite forms) over Python ints."""

from __future__ import annotations

from typing import Sequence

Matrix = list[list[int]]


def _copy(rows: Sequence[Sequence[int]]) -> Matrix:
    return [list(map(int, r)) for r in rows]


def smith_diagonal(rows: Sequence[Sequence[int]], ncols: int | None = None) -> list[int]:
    """Non-zero invariant factors ``d1 | d2 | ...`` of an integer matrix.

    Uses elementary row and column operations only; entries stay exact.
    """
    A = _copy(rows)
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if m else 0)
    for r in A:
        if len(r) != n:
            raise ValueError("ragged matrix")
    diag: list[int] = []
    t = 0
    while t < min(m, n):
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (pivot is None or abs(A[i][j]) < abs(A[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        A[t], A[i] = A[i], A[t]
        for r in A:
            r[t], r[j] = r[j], r[t]
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    for r in A:
                        r[j] -= q * r[t]
                    if A[t][j]:
                        dirty = True
            if dirty:
                # move the smallest leftover in row/column t onto the diagonal
                best = (t, t)
                for i in range(t + 1, m):
                    if A[i][t] and abs(A[i][t]) < abs(A[best[0]][best[1]]):
                        best = (i, t)
                for j in range(t + 1, n):
                    if A[t][j] and abs(A[t][j]) < abs(A[best[0]][best[1]]):
                        best = (t, j)
                i, j = best
                A[t], A[i] = A[i], A[t]
                for r in A:
                    r[t], r[j] = r[j], r[t]
                continue
            p = A[t][t]
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % p), None)
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def rank(rows: Sequence[Sequence[int]], ncols: int | None = None) -> int:
    return len(smith_diagonal(rows, ncols))


def hermite_basis(rows: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, list[int]]]:
    """Row-echelon basis of the lattice spanned by ``rows``.

    Returns ``(pivot_column, row)`` pairs with positive pivots, entries above
    each pivot reduced into ``[0, pivot)``.
    """
    A = [r for r in _copy(rows) if any(r)]
    basis: list[tuple[int, list[int]]] = []
    for col in range(ncols):
        live = [r for r in A if r[col]]
        rest = [r for r in A if not r[col]]
        if not live:
            continue
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            head = live[0]
            nxt = [head]
            for r in live[1:]:
                q = r[col] // head[col]
                r = [a - q * b for a, b in zip(r, head)]
                if r[col]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            live = nxt
        piv = live[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        basis.append((col, piv))
        A = rest
    for k, (col, row) in enumerate(basis):
        for k2 in range(k):
            c2, r2 = basis[k2]
            q = r2[col] // row[col]
            if q:
                basis[k2] = (c2, [a - q * b for a, b in zip(r2, row)])
    return basis


def reduce_mod_lattice(vec: Sequence[int], basis: list[tuple[int, list[int]]]) -> tuple[int, ...]:
    """Canonical representative of ``vec`` modulo the lattice with the given Hermite basis."""
    v = list(vec)
    for col, row in basis:
        q = v[col] // row[col]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return tuple(v)
