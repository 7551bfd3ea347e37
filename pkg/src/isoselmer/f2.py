"""GF(2) linear algebra on int bitmasks (bit i of a row = column i)."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class F2Matrix:
    """A matrix over F2; rows are ints, column j is bit j."""

    rows: tuple[int, ...]
    ncols: int

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def rank(self) -> int:
        return f2_rank(list(self.rows), self.ncols)

    def row_bits(self) -> list[str]:
        """Rows as '01' strings, column 0 first (for reports)."""
        return [format(r, f"0{self.ncols}b")[::-1] if self.ncols else "" for r in self.rows]


def f2_rank(rows: list[int], ncols: int) -> int:
    """Rank over GF(2) via Gaussian elimination."""
    work = list(rows)
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(work)):
            if work[r] >> col & 1:
                pivot = r
                break
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        for r in range(len(work)):
            if r != rank and work[r] >> col & 1:
                work[r] ^= work[rank]
        rank += 1
        if rank == len(work):
            break
    return rank


def echelon(rows: list[int], ncols: int) -> list[int]:
    """Reduced row-echelon basis of the rowspan, pivots in column order."""
    basis: list[int] = []
    for row in rows:
        for b in basis:
            low = b & -b
            if row & low:
                row ^= b
        if row:
            basis.append(row)
            for i in range(len(basis) - 1):
                low = row & -row
                if basis[i] & low:
                    basis[i] ^= row
    basis.sort(key=lambda r: r & -r)
    return basis


def nullspace(rows: list[int], ncols: int) -> list[int]:
    """Basis of {x : M x = 0} for the matrix with the given rows."""
    work = list(rows)
    pivot_col_of_row: list[int] = []
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(work)):
            if work[r] >> col & 1:
                pivot = r
                break
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        for r in range(len(work)):
            if r != rank and work[r] >> col & 1:
                work[r] ^= work[rank]
        pivot_col_of_row.append(col)
        rank += 1
    pivot_cols = set(pivot_col_of_row)
    free_cols = [c for c in range(ncols) if c not in pivot_cols]
    out = []
    for fc in free_cols:
        vec = 1 << fc
        for r, pc in enumerate(pivot_col_of_row):
            if work[r] >> fc & 1:
                vec |= 1 << pc
        out.append(vec)
    return out
