#!/usr/bin/env python3
"""Sparse integer matrices and exact Smith normal form.

Two independent SNF paths live here:

* ``smith_normal_form`` eliminates unit pivots on the sparse column
  structure, then finishes the small remaining core with an extended-gcd
  dense reduction that tracks the left transform (needed for cokernel
  generators).
* ``smith_normal_form_dense`` is a naive min-pivot elimination on plain
  Python lists, kept as the reference oracle for the fast path.

All arithmetic is on Python ints (numpy object arrays in the dense core),
so entries never overflow.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

SparseVector = Dict[int, int]


@dataclass(frozen=True)
class IntegerMatrix:
    """Sparse integer matrix; entries are sorted (row, col, value) triples with value != 0"""
    rows: int
    cols: int
    entries: Tuple[Tuple[int, int, int], ...] = ()

    @classmethod
    def from_entries(cls, rows: int, cols: int,
                     entries: Iterable[Tuple[int, int, int]]) -> "IntegerMatrix":
        acc: Dict[Tuple[int, int], int] = defaultdict(int)
        for r, c, v in entries:
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"Entry ({r}, {c}) outside a {rows}x{cols} matrix")
            acc[(r, c)] += int(v)
        triples = tuple(sorted((r, c, v) for (r, c), v in acc.items() if v != 0))
        return cls(rows, cols, triples)

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[SparseVector]) -> "IntegerMatrix":
        return cls.from_entries(rows, len(columns),
                                ((r, c, v) for c, col in enumerate(columns) for r, v in col.items()))

    @classmethod
    def from_dense(cls, array) -> "IntegerMatrix":
        dense = np.asarray(array, dtype=object)
        if dense.ndim != 2:
            raise ValueError("Dense input must be two-dimensional")
        rows, cols = dense.shape
        return cls.from_entries(rows, cols, ((r, c, int(dense[r, c]))
                                             for r in range(rows) for c in range(cols) if dense[r, c] != 0))

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.rows, self.cols), dtype=object)
        for r, c, v in self.entries:
            dense[r, c] = v
        return dense

    def columns(self) -> List[SparseVector]:
        cols: List[SparseVector] = [dict() for _ in range(self.cols)]
        for r, c, v in self.entries:
            cols[c][r] = v
        return cols

    def hstack(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if other.rows != self.rows:
            raise ValueError("Row counts differ")
        shifted = ((r, c + self.cols, v) for r, c, v in other.entries)
        return IntegerMatrix(self.rows, self.cols + other.cols,
                             tuple(sorted(self.entries + tuple(shifted))))

    @cached_property
    def _by_col(self) -> Dict[int, List[Tuple[int, int]]]:
        by_col: Dict[int, List[Tuple[int, int]]] = defaultdict(list)
        for r, c, v in self.entries:
            by_col[c].append((r, v))
        return dict(by_col)

    def apply(self, vector: SparseVector) -> SparseVector:
        """Matrix times a sparse column vector"""
        out: Dict[int, int] = defaultdict(int)
        by_col = self._by_col
        for c, x in vector.items():
            for r, v in by_col.get(c, ()):
                out[r] += v * x
        return {r: v for r, v in out.items() if v != 0}

    def matmul(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError(f"Shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        products = []
        for c, col in enumerate(other.columns()):
            for r, v in self.apply(col).items():
                products.append((r, c, v))
        return IntegerMatrix.from_entries(self.rows, other.cols, products)

    def is_zero(self) -> bool:
        return not self.entries

    @property
    def nnz(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class SNFResult:
    """Diagonal d1 | d2 | ... of length min(rows, cols), zeros last.

    ``torsion_generators`` (filled on request) holds, for each diagonal
    entry > 1 in order, a vector in the original row space whose class
    generates that cyclic summand of the cokernel.
    """
    diagonal: Tuple[int, ...]
    rank: int
    rows: int
    cols: int
    torsion_generators: Optional[Tuple[SparseVector, ...]] = None

    @property
    def invariant_factors(self) -> Tuple[int, ...]:
        return tuple(d for d in self.diagonal if d > 1)

    @property
    def cokernel_free_rank(self) -> int:
        return self.rows - self.rank


def exgcd(a: int, b: int) -> np.ndarray:
    """2x2 integer matrix M of determinant 1 with M @ [a, b] = [gcd(a, b), 0].

    If a divides b, M[0, 1] is 0.
    """
    a_sign = -1 if a < 0 else 1
    a *= a_sign
    b_sign = -1 if b < 0 else 1
    b *= b_sign

    M = np.array([[a, 1, 0],
                  [b, 0, 1]], dtype=object)
    M = M[::-1]
    while M[1, 0] != 0:
        q = M[0, 0] // M[1, 0]
        M[0] -= q * M[1]
        M = M[::-1]

    g = M[0, 0]
    M = M[:, 1:].copy()
    M *= np.array([a_sign, b_sign], dtype=object)
    if g != 0:
        M[1] = [-b_sign * b // g, a_sign * a // g]
    return M


def inv_2x2_det1(M: np.ndarray) -> np.ndarray:
    return np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]], dtype=object)


def dense_smith_form(A: np.ndarray, track_left: bool = False
                     ) -> Tuple[List[int], Optional[np.ndarray], Optional[np.ndarray]]:
    """Smith form of a dense matrix by alternating extended-gcd row/column clearing.

    Returns (diagonal, S, Sinv) with A = S @ D @ T for some unimodular T
    that is not materialized; S and Sinv are None unless track_left.
    """
    D = np.array(A, dtype=object)
    if D.ndim != 2:
        raise ValueError("Expected a two-dimensional matrix")
    k, m = D.shape
    S = np.eye(k, dtype=object) if track_left else None
    Sinv = np.eye(k, dtype=object) if track_left else None

    def row_op(i: int, j: int, M: np.ndarray):
        D[[i, j]] = M @ D[[i, j]]
        if track_left:
            S[:, [i, j]] = S[:, [i, j]] @ inv_2x2_det1(M)
            Sinv[[i, j]] = M @ Sinv[[i, j]]

    def swap_rows(i: int, j: int):
        if i == j:
            return
        D[[i, j]] = D[[j, i]]
        if track_left:
            S[:, [i, j]] = S[:, [j, i]]
            Sinv[[i, j]] = Sinv[[j, i]]

    def negate_row(i: int):
        D[i] = -D[i]
        if track_left:
            S[:, i] = -S[:, i]
            Sinv[i] = -Sinv[i]

    def clear_col(i: int) -> bool:
        changed = False
        for j in range(i + 1, k):
            if D[j, i] != 0:
                row_op(i, j, exgcd(D[i, i], D[j, i]))
                changed = True
        return changed

    def clear_row(i: int) -> bool:
        changed = False
        for j in range(i + 1, m):
            if D[i, j] != 0:
                M = exgcd(D[i, i], D[i, j]).T
                D[:, [i, j]] = D[:, [i, j]] @ M
                changed = True
        return changed

    def settle(i: int):
        clear_col(i)
        while True:
            if not clear_row(i):
                break
            if not clear_col(i):
                break

    rank = 0
    for i in range(min(k, m)):
        block = D[i:, i:]
        nonzero = np.argwhere(block != 0)
        if len(nonzero) == 0:
            break
        a, b = min(((int(r), int(c)) for r, c in nonzero),
                   key=lambda rc: (abs(block[rc[0], rc[1]]), rc))
        swap_rows(i, i + a)
        if b:
            D[:, [i, i + b]] = D[:, [i + b, i]]
        settle(i)
        rank = i + 1

    for i in range(rank):
        if D[i, i] < 0:
            negate_row(i)

    # Enforce d_i | d_j by folding column j into column i and re-clearing.
    changed = True
    while changed:
        changed = False
        for i in range(rank):
            for j in range(i + 1, rank):
                if D[j, j] % D[i, i] != 0:
                    D[:, i] = D[:, i] + D[:, j]
                    settle(i)
                    for t in (i, j):
                        if D[t, t] < 0:
                            negate_row(t)
                    changed = True

    diagonal = [int(D[i, i]) for i in range(rank)] + [0] * (min(k, m) - rank)
    return diagonal, S, Sinv


def _eliminate_unit_pivots(rows: int, columns: List[SparseVector]
                           ) -> Tuple[int, List[int], List[SparseVector]]:
    """Remove (row, column) pairs with a +-1 pivot; returns units, surviving rows, surviving columns.

    The cokernel of the input equals the cokernel of the surviving block,
    with each surviving row keeping its original basis vector.
    """
    row_cols: Dict[int, set] = defaultdict(set)
    for c, col in enumerate(columns):
        for r in col:
            row_cols[r].add(c)

    alive_cols = set(c for c, col in enumerate(columns) if col)
    dead_rows = set()
    units = 0
    progress = True
    while progress:
        progress = False
        for c in sorted(alive_cols):
            if c not in alive_cols:
                continue
            col = columns[c]
            if not col:
                alive_cols.discard(c)
                continue
            candidates = [r for r, v in col.items() if v in (1, -1)]
            if not candidates:
                continue
            r = min(candidates, key=lambda x: (len(row_cols[x]), x))
            u = col[r]
            for other in sorted(row_cols[r] - {c}):
                target = columns[other]
                factor = target[r] * u
                for rr, vv in col.items():
                    nv = target.get(rr, 0) - factor * vv
                    if nv:
                        if rr not in target:
                            row_cols[rr].add(other)
                        target[rr] = nv
                    elif rr in target:
                        del target[rr]
                        row_cols[rr].discard(other)
                if not target:
                    alive_cols.discard(other)
            for rr in col:
                row_cols[rr].discard(c)
            columns[c] = {}
            alive_cols.discard(c)
            # Row r now only meets the removed pivot column.
            row_cols.pop(r, None)
            dead_rows.add(r)
            units += 1
            progress = True

    surviving_rows = [r for r in range(rows) if r not in dead_rows]
    surviving_cols = []
    seen = set()
    for c in sorted(alive_cols):
        col = columns[c]
        if not col:
            continue
        key = tuple(sorted(col.items()))
        neg = tuple(sorted((r, -v) for r, v in col.items()))
        if key in seen or neg in seen:
            continue
        seen.add(key)
        surviving_cols.append(col)
    return units, surviving_rows, surviving_cols


def smith_normal_form(M: IntegerMatrix, with_generators: bool = False) -> SNFResult:
    """Smith normal form with unit-pivot elimination followed by a dense core"""
    columns = M.columns()
    units, core_rows, core_cols = _eliminate_unit_pivots(M.rows, columns)
    logger.debug(f"SNF {M.rows}x{M.cols}: {units} unit pivots, core {len(core_rows)}x{len(core_cols)}")

    core_diag: List[int] = []
    S = None
    if core_rows and core_cols:
        row_pos = {r: i for i, r in enumerate(core_rows)}
        A = np.zeros((len(core_rows), len(core_cols)), dtype=object)
        for j, col in enumerate(core_cols):
            for r, v in col.items():
                A[row_pos[r], j] = v
        core_diag, S, _ = dense_smith_form(A, track_left=with_generators)

    nonzero = [d for d in core_diag if d != 0]
    rank = units + len(nonzero)
    width = min(M.rows, M.cols)
    diagonal = tuple([1] * units + nonzero + [0] * (width - rank))

    generators = None
    if with_generators:
        gens = []
        for t, d in enumerate(core_diag):
            if d > 1:
                vec = {core_rows[a]: int(S[a, t]) for a in range(len(core_rows)) if S[a, t] != 0}
                gens.append(vec)
        generators = tuple(gens)

    return SNFResult(diagonal=diagonal, rank=rank, rows=M.rows, cols=M.cols,
                     torsion_generators=generators)


def smith_normal_form_dense(M) -> SNFResult:
    """Reference SNF by repeated min-pivot division on a dense copy"""
    if isinstance(M, IntegerMatrix):
        rows, cols = M.rows, M.cols
        A = [[int(x) for x in row] for row in M.to_dense().tolist()] if rows and cols else []
    else:
        dense = np.asarray(M, dtype=object)
        rows, cols = dense.shape
        A = [[int(x) for x in row] for row in dense.tolist()]

    def smallest(t: int) -> Optional[Tuple[int, int]]:
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = A[i][j]
                if v and (best is None or abs(v) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        return best

    def swap_cols(a: int, b: int):
        for row in A:
            row[a], row[b] = row[b], row[a]

    diag: List[int] = []
    t = 0
    while t < min(rows, cols):
        pivot = smallest(t)
        if pivot is None:
            break
        i, j = pivot
        A[t], A[i] = A[i], A[t]
        swap_cols(t, j)
        while True:
            dirty = False
            for i in range(t + 1, rows):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, cols):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    for row in A:
                        row[j] -= q * row[t]
                    dirty = dirty or A[t][j] != 0
            if dirty:
                best_i = min((i for i in range(t + 1, rows) if A[i][t]),
                             key=lambda i: abs(A[i][t]), default=None)
                best_j = min((j for j in range(t + 1, cols) if A[t][j]),
                             key=lambda j: abs(A[t][j]), default=None)
                if best_i is not None and (best_j is None or abs(A[best_i][t]) <= abs(A[t][best_j])):
                    A[t], A[best_i] = A[best_i], A[t]
                else:
                    swap_cols(t, best_j)
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
        diag.append(abs(A[t][t]))
        t += 1

    rank = len(diag)
    diag.extend([0] * (min(rows, cols) - rank))
    return SNFResult(diagonal=tuple(diag), rank=rank, rows=rows, cols=cols)
