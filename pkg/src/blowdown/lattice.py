"""Exact integer intersection-lattice algebra.

Gram matrices of curve collections, fraction-free determinants,
negative-definiteness by principal minors, and the order of the first
homology of a linear plumbing boundary (a lens space).  Everything is
integer arithmetic; matrices in scope are tiny (<= ~30 rows).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .hjcf import Chain, as_chain, hj_eval


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric integer matrix with a declared row/column labelling."""

    ids: tuple[str, ...]
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.ids)
        if len(self.rows) != n or any(len(r) != n for r in self.rows):
            raise ValueError("matrix shape does not match id list")
        for i in range(n):
            for j in range(i, n):
                if self.rows[i][j] != self.rows[j][i]:
                    raise ValueError("matrix is not symmetric")

    @property
    def n(self) -> int:
        return len(self.ids)

    def __str__(self) -> str:
        return "\n".join(" ".join(f"{x:4d}" for x in row) for row in self.rows)


def gram(config, ids: Sequence[str]) -> GramMatrix:
    """Gram matrix of the listed curves: diagonal C.C, off-diagonal pairings."""
    seen = set()
    for i in ids:
        if i in seen:
            raise KeyError(f"duplicate curve id {i!r}")
        seen.add(i)
        if i not in config.curves:
            raise KeyError(f"unknown curve id {i!r}")
    rows = []
    for a in ids:
        row = []
        for b in ids:
            if a == b:
                row.append(config.curves[a].self_int)
            else:
                row.append(config.pairing(a, b))
        rows.append(tuple(row))
    return GramMatrix(tuple(ids), tuple(rows))


def chain_gram(c: "Chain | Sequence[int]") -> GramMatrix:
    """Tridiagonal Gram matrix of a bare chain (diagonal -b_i, off-diagonal 1)."""
    entries = as_chain(c).entries
    n = len(entries)
    rows = []
    for i in range(n):
        row = [0] * n
        row[i] = -entries[i]
        if i > 0:
            row[i - 1] = 1
        if i < n - 1:
            row[i + 1] = 1
        rows.append(tuple(row))
    ids = tuple(f"c{i + 1}" for i in range(n))
    return GramMatrix(ids, tuple(rows))


def _det_rows(rows: list[list[int]]) -> int:
    """Bareiss fraction-free elimination; exact integer determinant."""
    n = len(rows)
    if n == 0:
        return 1
    m = [row[:] for row in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        top = m[k]
        for i in range(k + 1, n):
            row = m[i]
            head = row[k]
            if head:
                for j in range(k + 1, n):
                    row[j] = (pivot * row[j] - head * top[j]) // prev
                row[k] = 0
            else:
                # Bareiss still rescales zero-head rows; zeros stay zero
                for j in range(k + 1, n):
                    v = row[j]
                    if v:
                        row[j] = (pivot * v) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def det_exact(g: GramMatrix) -> int:
    return _det_rows([list(r) for r in g.rows])


def is_negative_definite(g: GramMatrix) -> bool:
    """Leading principal minors alternate in sign starting negative."""
    for k in range(1, g.n + 1):
        minor = _det_rows([list(g.rows[i][:k]) for i in range(k)])
        if k % 2 == 1 and minor >= 0:
            return False
        if k % 2 == 0 and minor <= 0:
            return False
    return True


def boundary_group_order(c: "Chain | Sequence[int]") -> int:
    """|H_1| of the plumbing boundary lens space: |det| of the chain Gram matrix.

    Always equals the numerator of the chain's continued-fraction value;
    for a Wahl chain C_{p,q} this is p^2.
    """
    return abs(det_exact(chain_gram(c)))


def boundary_order_agrees(c: "Chain | Sequence[int]") -> bool:
    """Cross-check: determinant route equals continued-fraction numerator."""
    return boundary_group_order(c) == hj_eval(c)[0]
