"""
Integer lattice data models
"""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

from sympy import ImmutableMatrix

# Integer matrices are sympy ImmutableMatrix instances with exact Integer entries.
IntegerMatrix = ImmutableMatrix

# Rank n of a lattice M ≅ Z^n
LatticeRank = int


def int_matrix(rows: Sequence[Sequence[int]], cols: int) -> ImmutableMatrix:
    """Build an integer matrix that keeps its column count even with zero rows"""
    entries = [int(x) for row in rows for x in row]
    return ImmutableMatrix(len(rows), cols, entries)


def matrix_rows(m: ImmutableMatrix) -> List[List[int]]:
    """Matrix entries as nested lists of Python ints"""
    return [[int(m[i, j]) for j in range(m.cols)] for i in range(m.rows)]


def column(v: Sequence[int]) -> ImmutableMatrix:
    """Column vector"""
    return ImmutableMatrix(len(v), 1, [int(x) for x in v])


def as_tuple(v: ImmutableMatrix) -> Tuple[int, ...]:
    """Flatten a row or column vector into a tuple of ints"""
    return tuple(int(x) for x in v)


@dataclass(frozen=True)
class QuotientMap:
    """Presentation of a surjection M ↠ M/⟨σ⟩ by integer matrices"""

    source_rank: int
    kernel_basis: ImmutableMatrix  # rows span the saturation of ⟨σ⟩
    projection: ImmutableMatrix  # target_rank × source_rank
    target_rank: int

    def apply(self, v: Sequence[int]) -> Tuple[int, ...]:
        """Image of a lattice vector"""
        if self.target_rank == 0:
            return ()
        return as_tuple(self.projection * column(v))

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization"""
        return {
            "source_rank": self.source_rank,
            "target_rank": self.target_rank,
            "kernel_basis": matrix_rows(self.kernel_basis),
            "projection": matrix_rows(self.projection),
        }


@dataclass(frozen=True)
class PerpLattice:
    """Saturated sublattice σ^⊥ ∩ M^∨ of the dual lattice"""

    ambient_dual_rank: int
    basis: ImmutableMatrix

    @property
    def rank(self) -> int:
        return self.basis.rows

    def to_dict(self) -> dict:
        return {
            "ambient_dual_rank": self.ambient_dual_rank,
            "basis": matrix_rows(self.basis),
        }
