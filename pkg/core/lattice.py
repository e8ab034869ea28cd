"""
Exact integer lattice algebra: Hermite normal form, saturation, quotients and perps

Vectors of a lattice Z^n are rows of a generator matrix. The dual lattice is
identified with Z^n through the standard pairing, so σ^⊥ is an integer kernel.
"""

import math
from typing import List, Sequence, Tuple, Union

from sympy import ImmutableMatrix, eye

from models.lattice import (
    PerpLattice,
    QuotientMap,
    int_matrix,
    matrix_rows,
)
from utils.exceptions import LatticeError
from utils.logger import get_logger

logger = get_logger(__name__)

MatrixLike = Union[ImmutableMatrix, Sequence[Sequence[int]]]


def as_matrix(generators: MatrixLike, rank: int) -> ImmutableMatrix:
    """
    Coerce generators into an integer matrix with `rank` columns

    Args:
        generators: Matrix or sequence of integer vectors
        rank: Ambient lattice rank

    Returns:
        ImmutableMatrix of shape (len(generators), rank)

    Raises:
        LatticeError: If a generator has the wrong length
    """
    if rank < 0:
        raise LatticeError(f"Lattice rank must be nonnegative, got {rank}")
    if isinstance(generators, ImmutableMatrix):
        if generators.cols != rank and generators.rows > 0:
            raise LatticeError(f"Generators have {generators.cols} columns, expected {rank}")
        return int_matrix(matrix_rows(generators), rank)
    rows = [list(v) for v in generators]
    for v in rows:
        if len(v) != rank:
            raise LatticeError(f"Generator {v} does not live in Z^{rank}")
    return int_matrix(rows, rank)


def _hnf_rows(rows: List[List[int]], cols: int) -> Tuple[List[List[int]], List[List[int]]]:
    # Row-style HNF by exact Euclidean elimination; U tracks the row operations.
    a = [list(r) for r in rows]
    n = len(a)
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def sub_row(target: int, source: int, q: int) -> None:
        a[target] = [x - q * y for x, y in zip(a[target], a[source])]
        u[target] = [x - q * y for x, y in zip(u[target], u[source])]

    def swap(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    pivot_row = 0
    for col in range(cols):
        if pivot_row == n:
            break
        while True:
            nonzero = [r for r in range(pivot_row, n) if a[r][col] != 0]
            if not nonzero:
                break
            smallest = min(nonzero, key=lambda r: abs(a[r][col]))
            swap(pivot_row, smallest)
            cleared = True
            for r in range(pivot_row + 1, n):
                if a[r][col] != 0:
                    sub_row(r, pivot_row, a[r][col] // a[pivot_row][col])
                    if a[r][col] != 0:
                        cleared = False
            if cleared:
                break
        if a[pivot_row][col] == 0:
            continue
        if a[pivot_row][col] < 0:
            a[pivot_row] = [-x for x in a[pivot_row]]
            u[pivot_row] = [-x for x in u[pivot_row]]
        pivot = a[pivot_row][col]
        for r in range(pivot_row):
            q = a[r][col] // pivot
            if q:
                sub_row(r, pivot_row, q)
        pivot_row += 1
    return a, u


def hermite_normal_form(m: ImmutableMatrix) -> Tuple[ImmutableMatrix, ImmutableMatrix]:
    """
    Row-style Hermite normal form with its unimodular transform

    Pivots are positive, entries above a pivot lie in [0, pivot), zero rows
    come last.

    Args:
        m: Integer matrix

    Returns:
        (hnf, transform) with transform · m = hnf and det(transform) = ±1
    """
    rows, u = _hnf_rows(matrix_rows(m), m.cols)
    return int_matrix(rows, m.cols), int_matrix(u, m.rows)


def hnf_basis(m: ImmutableMatrix) -> ImmutableMatrix:
    """Canonical basis of the row lattice of m (nonzero HNF rows)"""
    rows, _ = _hnf_rows(matrix_rows(m), m.cols)
    return int_matrix([r for r in rows if any(r)], m.cols)


def matrix_rank(m: ImmutableMatrix) -> int:
    """Rank over Q"""
    return hnf_basis(m).rows


def primitive(v: Sequence[int]) -> Tuple[int, ...]:
    """
    Primitive lattice vector in the direction of v

    Raises:
        LatticeError: If v is the zero vector
    """
    g = math.gcd(*[int(x) for x in v]) if len(v) else 0
    if g == 0:
        raise LatticeError("The zero vector has no primitive representative")
    return tuple(int(x) // g for x in v)


def integer_kernel(m: ImmutableMatrix) -> ImmutableMatrix:
    """
    Canonical basis of {x ∈ Z^n : m · x = 0}

    The rows of the HNF transform of m^T that meet zero rows of the HNF span the
    kernel; the result is re-canonicalized by HNF.
    """
    n = m.cols
    if n == 0:
        return int_matrix([], 0)
    hnf, transform = hermite_normal_form(int_matrix(matrix_rows(m.T), m.rows))
    h_rows = matrix_rows(hnf)
    u_rows = matrix_rows(transform)
    kernel = [u_rows[i] for i in range(n) if not any(h_rows[i])]
    return hnf_basis(int_matrix(kernel, n))


def saturate(generators: MatrixLike, rank: int) -> ImmutableMatrix:
    """
    Basis of span_Q(generators) ∩ Z^rank

    Args:
        generators: Integer vectors in Z^rank (may be empty)
        rank: Ambient rank

    Returns:
        Canonical (HNF) basis of the saturation
    """
    gens = as_matrix(generators, rank)
    return integer_kernel(integer_kernel(gens))


def perp_lattice(rank: int, cone_generators: MatrixLike) -> PerpLattice:
    """
    σ^⊥ ∩ M^∨ for the cone spanned by the generators

    Args:
        rank: Rank of M
        cone_generators: Generators of σ

    Returns:
        PerpLattice with canonical saturated basis of rank rank − rank(σ)
    """
    gens = as_matrix(cone_generators, rank)
    return PerpLattice(ambient_dual_rank=rank, basis=integer_kernel(gens))


def quotient_map(rank: int, cone_generators: MatrixLike) -> QuotientMap:
    """
    Canonical presentation of M ↠ M/⟨σ⟩ with ⟨σ⟩ the saturated span of σ

    The projection rows are the canonical basis of ⟨σ⟩^⊥, which is a direct
    summand of M^∨, so the projection is surjective with kernel exactly ⟨σ⟩.

    Args:
        rank: Rank of M
        cone_generators: Generators of σ

    Returns:
        QuotientMap in canonical form
    """
    gens = as_matrix(cone_generators, rank)
    kernel = saturate(gens, rank)
    projection = integer_kernel(kernel)
    return QuotientMap(
        source_rank=rank,
        kernel_basis=kernel,
        projection=projection,
        target_rank=projection.rows,
    )


def is_unimodular(m: ImmutableMatrix) -> bool:
    """Square integer matrix with determinant ±1"""
    return m.rows == m.cols and (m.rows == 0 or abs(int(m.det())) == 1)


def is_surjective(projection: ImmutableMatrix) -> bool:
    """Whether the integer map Z^n → Z^m given by projection is onto"""
    m = projection.rows
    if m == 0:
        return True
    hnf, _ = hermite_normal_form(projection.T)
    top = hnf[:m, :] if hnf.rows >= m else None
    return top is not None and top == eye(m)


def right_inverse(projection: ImmutableMatrix) -> ImmutableMatrix:
    """
    Integer S with projection · S = I for a surjective projection

    Raises:
        LatticeError: If the projection is not surjective
    """
    m, n = projection.rows, projection.cols
    if m == 0:
        return int_matrix([[] for _ in range(n)], 0)
    hnf, transform = hermite_normal_form(projection.T)
    if hnf.rows < m or hnf[:m, :] != eye(m):
        raise LatticeError("Projection is not surjective; no integer right inverse")
    # transform · P^T = [I; 0]  ⇒  P · transform[:m]^T = I
    return ImmutableMatrix(transform[:m, :].T)


def canonical_quotient(q: QuotientMap) -> QuotientMap:
    """The canonical presentation with the same kernel as q"""
    return quotient_map(q.source_rank, integer_kernel(q.projection))


def compose_quotients(first: QuotientMap, second: QuotientMap) -> QuotientMap:
    """
    Presentation of second ∘ first

    Raises:
        LatticeError: If the maps are not composable
    """
    if first.target_rank != second.source_rank:
        raise LatticeError(
            f"Cannot compose quotient to rank {first.target_rank} with quotient from rank {second.source_rank}"
        )
    if second.target_rank == 0:
        projection = int_matrix([], first.source_rank)
    else:
        projection = ImmutableMatrix(second.projection * first.projection)
    return QuotientMap(
        source_rank=first.source_rank,
        kernel_basis=integer_kernel(projection),
        projection=projection,
        target_rank=second.target_rank,
    )


def factor_quotient(small: QuotientMap, large: QuotientMap) -> QuotientMap:
    """
    The map M/A ↠ M/B through which M ↠ M/B factors, for A ⊆ B

    Args:
        small: Presentation of M ↠ M/A
        large: Presentation of M ↠ M/B

    Returns:
        QuotientMap F with F.projection · small.projection = large.projection

    Raises:
        LatticeError: If the kernel of small is not inside the kernel of large
    """
    if small.source_rank != large.source_rank:
        raise LatticeError("Quotient maps live on different lattices")
    if small.kernel_basis.rows and large.target_rank:
        if not (large.projection * small.kernel_basis.T).is_zero_matrix:
            raise LatticeError("Kernel of the first quotient is not contained in the second")
    section = right_inverse(small.projection)
    if large.target_rank == 0:
        projection = int_matrix([], small.target_rank)
    else:
        projection = ImmutableMatrix(large.projection * section)
    return QuotientMap(
        source_rank=small.target_rank,
        kernel_basis=integer_kernel(projection),
        projection=projection,
        target_rank=large.target_rank,
    )


def unimodular_completion(basis: ImmutableMatrix) -> Tuple[ImmutableMatrix, ImmutableMatrix]:
    """
    Extend a saturated basis to a basis of Z^n

    Args:
        basis: k × n matrix whose rows form a saturated basis

    Returns:
        (completion, coordinates): completion is unimodular with first k rows
        equal to basis; coordinates is its inverse transpose, so that the
        column vector coordinates · x lists the coordinates of x.

    Raises:
        LatticeError: If the rows are not a saturated basis
    """
    k, n = basis.rows, basis.cols
    if k == 0:
        return ImmutableMatrix(eye(n)), ImmutableMatrix(eye(n))
    hnf, transform = hermite_normal_form(basis.T)
    if hnf[:k, :] != eye(k):
        raise LatticeError("Rows are not a saturated basis")
    completion = ImmutableMatrix(transform.inv().T)
    return completion, transform
