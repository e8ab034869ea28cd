"""
Tests for exact integer lattice operations
"""

import functools
import itertools
import math
import random

import pytest
from sympy import ImmutableMatrix, Matrix, eye

from core.lattice import (
    canonical_quotient,
    compose_quotients,
    factor_quotient,
    hermite_normal_form,
    hnf_basis,
    integer_kernel,
    is_surjective,
    is_unimodular,
    matrix_rank,
    perp_lattice,
    primitive,
    quotient_map,
    right_inverse,
    saturate,
    unimodular_completion,
)
from models.lattice import QuotientMap, int_matrix, matrix_rows
from utils.exceptions import LatticeError


class TestHermiteNormalForm:
    def test_transform_reproduces_hnf(self):
        m = int_matrix([[2, 4], [1, 3]], 2)
        hnf, transform = hermite_normal_form(m)
        assert transform * m == hnf
        assert is_unimodular(transform)

    def test_canonical_form(self):
        hnf, _ = hermite_normal_form(int_matrix([[2, 4], [1, 3]], 2))
        assert matrix_rows(hnf) == [[1, 1], [0, 2]]

    def test_zero_rows_last(self):
        hnf, _ = hermite_normal_form(int_matrix([[1, 2], [2, 4]], 2))
        assert matrix_rows(hnf)[1] == [0, 0]

    def test_basis_is_independent_of_generator_order(self):
        a = hnf_basis(int_matrix([[1, 1, 0], [0, 1, 1]], 3))
        b = hnf_basis(int_matrix([[0, 1, 1], [1, 2, 1]], 3))
        assert a == b

    def test_rank(self):
        assert matrix_rank(int_matrix([[1, 2, 3], [2, 4, 6], [0, 0, 1]], 3)) == 2
        assert matrix_rank(int_matrix([], 3)) == 0


class TestKernelAndSaturation:
    def test_kernel_annihilates(self):
        m = int_matrix([[1, 2, 3]], 3)
        k = integer_kernel(m)
        assert k.rows == 2
        assert (m * k.T).is_zero_matrix

    def test_kernel_is_saturated(self):
        k = integer_kernel(int_matrix([[2, 4]], 2))
        assert saturate(k, 2) == k
        assert matrix_rows(k) == [[2, -1]] or matrix_rows(k) == [[-2, 1]]

    def test_saturation_drops_index(self):
        assert matrix_rows(saturate([[2, 0]], 2)) == [[1, 0]]
        assert matrix_rows(saturate([[2, 2]], 2)) == [[1, 1]]

    def test_saturation_of_nothing(self):
        assert saturate([], 3).shape == (0, 3)

    def test_perp_rank(self):
        assert perp_lattice(3, [[1, 0, 0]]).rank == 2
        assert perp_lattice(3, [[1, 0, 0], [0, 1, 0]]).rank == 1
        assert perp_lattice(2, []).rank == 2

    def test_primitive(self):
        assert primitive((4, -6)) == (2, -3)
        assert primitive((0, -3)) == (0, -1)
        with pytest.raises(LatticeError):
            primitive((0, 0))


class TestQuotientMaps:
    def test_quotient_by_ray(self):
        q = quotient_map(2, [[1, 0]])
        assert matrix_rows(q.kernel_basis) == [[1, 0]]
        assert matrix_rows(q.projection) == [[0, 1]]
        assert q.apply((-1, -1)) == (-1,)

    def test_quotient_by_zero_cone_is_identity(self):
        q = quotient_map(3, [])
        assert q.projection == ImmutableMatrix(eye(3))
        assert q.kernel_basis.shape == (0, 3)

    def test_quotient_by_full_cone(self):
        q = quotient_map(2, [[1, 0], [0, 1]])
        assert q.target_rank == 0
        assert q.apply((5, 7)) == ()

    def test_quotient_is_surjective_with_saturated_kernel(self):
        q = quotient_map(3, [[1, 1, 0], [1, -1, 0]])
        assert is_surjective(q.projection)
        assert q.target_rank == 1
        assert matrix_rows(q.kernel_basis) == matrix_rows(saturate([[1, 0, 0], [0, 1, 0]], 3))

    def test_surjectivity(self):
        assert is_surjective(int_matrix([[1, 0]], 2))
        assert not is_surjective(int_matrix([[0, 2]], 2))
        assert is_surjective(int_matrix([], 2))

    def test_right_inverse(self):
        p = int_matrix([[1, 2, 3], [0, 1, 1]], 3)
        s = right_inverse(p)
        assert p * s == ImmutableMatrix(eye(2))

    def test_right_inverse_needs_surjection(self):
        with pytest.raises(LatticeError):
            right_inverse(int_matrix([[0, 2]], 2))

    def test_factor_through_identity(self):
        identity = quotient_map(2, [])
        large = quotient_map(2, [[1, 0]])
        assert factor_quotient(identity, large).projection == large.projection

    def test_factor_composes_back(self):
        small = quotient_map(3, [[1, 0, 0]])
        large = quotient_map(3, [[1, 0, 0], [0, 1, 1]])
        factor = factor_quotient(small, large)
        assert factor.projection * small.projection == large.projection
        assert compose_quotients(small, factor).projection == large.projection

    def test_factor_needs_nested_kernels(self):
        with pytest.raises(LatticeError):
            factor_quotient(quotient_map(2, [[1, 0]]), quotient_map(2, [[0, 1]]))

    def test_compose_checks_ranks(self):
        with pytest.raises(LatticeError):
            compose_quotients(quotient_map(2, [[1, 0]]), quotient_map(2, []))

    def test_canonical_quotient_forgets_presentation(self):
        q = quotient_map(2, [[1, 0]])
        flipped = QuotientMap(
            source_rank=2,
            kernel_basis=q.kernel_basis,
            projection=int_matrix([[0, -1]], 2),
            target_rank=1,
        )
        assert canonical_quotient(flipped).projection == q.projection


class TestUnimodularCompletion:
    def test_first_rows_are_the_basis(self):
        basis = int_matrix([[1, 1, 0]], 3)
        completion, coordinates = unimodular_completion(basis)
        assert completion[0, :] == basis
        assert is_unimodular(completion)
        assert coordinates * completion.T == ImmutableMatrix(eye(3))

    def test_empty_basis(self):
        completion, coordinates = unimodular_completion(int_matrix([], 2))
        assert completion == ImmutableMatrix(eye(2))
        assert coordinates == ImmutableMatrix(eye(2))

    def test_rejects_unsaturated(self):
        with pytest.raises(LatticeError):
            unimodular_completion(int_matrix([[2, 0]], 2))


# ---------------------------------------------------------------------------
# Randomized laws
# ---------------------------------------------------------------------------

def random_matrix(rng: random.Random, rows: int, cols: int, bound: int = 5) -> ImmutableMatrix:
    return int_matrix([[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)], cols)


def random_unimodular(rng: random.Random, size: int, steps: int = 12) -> ImmutableMatrix:
    u = Matrix(eye(size))
    for _ in range(steps):
        i, j = rng.randrange(size), rng.randrange(size)
        move = rng.choice(["add", "swap", "negate"])
        if move == "add" and i != j:
            u[i, :] = u[i, :] + rng.randint(-3, 3) * u[j, :]
        elif move == "swap":
            u.row_swap(i, j)
        elif move == "negate":
            u[i, :] = -u[i, :]
    return ImmutableMatrix(u)


def minor_gcd(m: ImmutableMatrix, k: int, cols=None) -> int:
    """gcd of the k × k minors of m restricted to the given columns"""
    cols = list(range(m.cols)) if cols is None else list(cols)
    minors = [
        int(m.extract(list(rows), list(chosen)).det())
        for rows in itertools.combinations(range(m.rows), k)
        for chosen in itertools.combinations(cols, k)
    ]
    return functools.reduce(math.gcd, minors, 0)


def full_column_rank_matrix(rng: random.Random, cols: int) -> ImmutableMatrix:
    while True:
        m = random_matrix(rng, cols + rng.randint(0, 2), cols)
        if Matrix(m).rank() == cols:
            return m


class TestHermiteNormalFormLaws:
    @pytest.mark.parametrize("seed", range(20))
    def test_invariant_under_row_recombination(self, seed):
        rng = random.Random(seed)
        m = random_matrix(rng, rng.randint(1, 4), rng.randint(1, 4))
        u = random_unimodular(rng, m.rows)
        assert is_unimodular(u)
        assert hermite_normal_form(ImmutableMatrix(u * m))[0] == hermite_normal_form(m)[0]
        assert hnf_basis(ImmutableMatrix(u * m)) == hnf_basis(m)

    @pytest.mark.parametrize("seed", range(20))
    def test_agrees_with_determinantal_divisors(self, seed):
        rng = random.Random(1000 + seed)
        n = rng.randint(1, 4)
        m = full_column_rank_matrix(rng, n)
        hnf, transform = hermite_normal_form(m)
        assert transform * m == hnf
        assert is_unimodular(transform)

        top = hnf[:n, :]
        assert all(hnf[i, j] == 0 for i in range(hnf.rows) for j in range(n) if i > j)
        product = 1
        for k in range(1, n + 1):
            pivot = int(top[k - 1, k - 1])
            assert pivot > 0
            assert all(0 <= top[i, k - 1] < pivot for i in range(k - 1))
            product *= pivot
            assert product == minor_gcd(m, k, cols=range(k))

        # every generator is an integer combination of the HNF rows
        for i in range(m.rows):
            coefficients = top.T.LUsolve(m[i, :].T)
            assert all(c.is_integer for c in coefficients)


class TestSaturationLaws:
    @pytest.mark.parametrize("seed", range(20))
    def test_double_perp_is_saturation(self, seed):
        rng = random.Random(2000 + seed)
        n = rng.randint(1, 4)
        gens = random_matrix(rng, rng.randint(1, n), n, bound=4)
        perp = perp_lattice(n, gens).basis
        if perp.rows:
            assert (gens * perp.T).is_zero_matrix
        assert perp_lattice(n, perp).basis == saturate(gens, n)

    @pytest.mark.parametrize("seed", range(20))
    def test_saturation_is_primitive_span(self, seed):
        rng = random.Random(3000 + seed)
        n = rng.randint(1, 4)
        gens = random_matrix(rng, rng.randint(1, n), n, bound=4)
        basis = saturate(gens, n)
        k = Matrix(gens).rank()
        assert basis.rows == k
        if k:
            assert Matrix.vstack(Matrix(gens), Matrix(basis)).rank() == k
            assert minor_gcd(basis, k) == 1


class TestQuotientFactorLaws:
    @pytest.mark.parametrize("seed", range(20))
    def test_factor_and_compose(self, seed):
        rng = random.Random(4000 + seed)
        n = rng.randint(2, 4)
        larger = random_matrix(rng, rng.randint(1, n), n, bound=3)
        # integer combinations of the larger generators span a sublattice of lower rank
        combinations = [
            [rng.randint(-2, 2) for _ in range(larger.rows)] for _ in range(rng.randint(0, larger.rows - 1))
        ]
        smaller = [
            [sum(c * int(larger[r, col]) for r, c in enumerate(row)) for col in range(n)]
            for row in combinations
        ]
        small, large = quotient_map(n, smaller), quotient_map(n, larger)
        factor = factor_quotient(small, large)

        assert factor.source_rank == small.target_rank
        assert factor.target_rank == large.target_rank
        assert is_surjective(factor.projection)
        assert compose_quotients(small, factor).projection == large.projection
        images = [small.apply(matrix_rows(larger)[i]) for i in range(larger.rows)]
        assert factor.kernel_basis == saturate(images, small.target_rank)
