"""同调引擎: SNF, 规范化链, 诱导映射, 等价判定"""
import math
import random
import time

import pytest
import sympy

from oracles import oracle_homology, random_chain_complex
from utils.categories import cyclic_group
from utils.errors import InvalidArgumentError, UnreliableAtTruncationError
from utils.helpers import format_group
from utils.homology import (
    Answer,
    ChainComplex,
    LocalizationSpec,
    homology,
    homology_groups,
    homology_table,
    induced_map,
    int_matrix,
    is_acyclic,
    is_equivalence,
    judge_map,
    matmul,
    normalized_chains,
    smith_normal_form,
)
from utils.sset import SMap, build_standard, point


# ==================== Smith 标准形 ====================
def test_smith_normal_form_textbook_matrix():
    A = int_matrix([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    snf = smith_normal_form(A)
    assert snf.invariant_factors == (2, 6, 12)
    assert snf.rank == 3
    assert (matmul(matmul(snf.U, A), snf.V) == snf.D).all()


def test_smith_normal_form_rank_deficient():
    snf = smith_normal_form(int_matrix([[1, 2], [2, 4], [3, 6]]))
    assert snf.rank == 1
    assert snf.invariant_factors == (1,)


def test_smith_normal_form_empty_matrix():
    assert smith_normal_form(int_matrix([], shape=(0, 3))).rank == 0


@pytest.mark.parametrize("transforms", [True, False])
def test_smith_normal_form_two_by_two(transforms):
    snf = smith_normal_form(int_matrix([[2, 4], [6, 8]]), transforms=transforms)
    assert snf.invariant_factors == (2, 4)
    assert snf.has_transforms is transforms


def _random_matrix(rng, m, n, bound):
    return int_matrix([[rng.randint(-bound, bound) for _ in range(n)] for _ in range(m)])


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_invariant_factors_without_transforms_agree(seed):
    rng = random.Random(seed)
    dense = _random_matrix(rng, 12, 12, 9)
    low_rank = matmul(_random_matrix(rng, 10, 4, 3), _random_matrix(rng, 4, 8, 3))
    torsion = int_matrix([[4, 0, 0], [0, 6, 0], [0, 0, 0], [2, 2, 0]])
    for A in (dense, low_rank, torsion, low_rank.T):
        exact, modular = smith_normal_form(A), smith_normal_form(A, transforms=False)
        assert modular.invariant_factors == exact.invariant_factors
        assert modular.rank == exact.rank
        assert modular.D.shape == A.shape


def test_invariant_factors_of_zero_matrix():
    snf = smith_normal_form(int_matrix([[0, 0], [0, 0], [0, 0]]), transforms=False)
    assert snf.rank == 0
    assert snf.invariant_factors == ()


def test_smith_normal_form_dense_growth():
    rng = random.Random(7)
    A = int_matrix([[rng.randint(-9, 9) for _ in range(30)] for _ in range(30)])
    snf = smith_normal_form(A)
    factors = snf.invariant_factors
    assert all(b % a == 0 for a, b in zip(factors, factors[1:]))


@pytest.mark.slow
def test_invariant_factors_dense_sixty():
    rng = random.Random(11)
    rows = [[rng.randint(-9, 9) for _ in range(60)] for _ in range(60)]
    start = time.perf_counter()
    snf = smith_normal_form(int_matrix(rows), transforms=False)
    assert time.perf_counter() - start < 60
    factors = snf.invariant_factors
    assert all(b % a == 0 for a, b in zip(factors, factors[1:]))
    det = int(sympy.Matrix(rows).det(method="bareiss"))
    if det:
        assert len(factors) == 60
        assert math.prod(factors) == abs(det)
    else:
        assert len(factors) < 60


def test_smith_normal_form_rejects_vectors():
    with pytest.raises(InvalidArgumentError):
        smith_normal_form(int_matrix([[1, 2]])[0])


# ==================== 同调 ====================
def test_format_group():
    assert format_group(0, ()) == "0"
    assert format_group(1, (2,)) == "Z + Z/2"
    assert format_group(2, ()) == "Z + Z"


def test_circle_homology(circle):
    assert homology_table(circle, 2) == ["Z", "Z", "0"]


def test_simplex_is_acyclic():
    assert is_acyclic(build_standard("simplex", 2, N=3), 2)
    assert not is_acyclic(build_standard("boundary", 2, N=3), 2)


@pytest.mark.parametrize("n,expected", [
    (2, ["Z", "Z/2", "0", "Z/2"]),
    (3, ["Z", "Z/3", "0", "Z/3"]),
])
def test_cyclic_group_homology(n, expected):
    assert homology_table(cyclic_group(n).nerve(4), 3) == expected


def test_top_degree_is_unreliable(circle):
    with pytest.raises(UnreliableAtTruncationError):
        homology(normalized_chains(circle), circle.trunc_level)


def test_normalized_chains_drop_degenerate_simplices():
    C = normalized_chains(build_standard("simplex", 1, N=3))
    assert C.ranks() == (2, 1, 0, 0)


def test_generators_are_cycles(circle):
    H1 = homology_groups(circle, 1)[1]
    assert H1.num_generators == 1
    assert H1.coordinates(H1.generators[0]) in ((1,), (-1,))


@pytest.mark.slow
def test_random_complexes_match_oracle():
    rng = random.Random(2024)
    for _ in range(200):
        boundaries, ranks = random_chain_complex(rng, top=3, max_rank=6)
        C = ChainComplex.from_matrices(boundaries, ranks)
        for k in range(3):
            H = homology(C, k)
            assert (H.rank, H.torsion) == oracle_homology(boundaries, ranks, k), (boundaries, ranks, k)


# ==================== 诱导映射与判定 ====================
def test_identity_induces_isomorphisms(circle):
    for k in range(3):
        assert induced_map(SMap.identity(circle), k).is_isomorphism()


def test_collapse_to_point_fails_in_degree_one(circle):
    to_point = SMap.constant(circle, point(3), 0)
    verdict = judge_map(to_point, 2)
    assert verdict.answer is Answer.NO
    assert verdict.failing_degree == 1
    assert verdict.cone_agrees


def test_contractible_maps_to_point():
    D2 = build_standard("simplex", 2, N=3)
    assert judge_map(SMap.constant(D2, point(3), 0), 2).yes


def test_range_at_truncation_is_incomplete(circle):
    verdict = judge_map(SMap.identity(circle), 3)
    assert verdict.answer is Answer.INCOMPLETE


def test_is_equivalence_h_range_needs_a_simplicial_map():
    with pytest.raises(InvalidArgumentError):
        is_equivalence(LocalizationSpec.h_range(1), "not a map")


def test_induced_maps_compose(circle):
    edge = build_standard("simplex", 1, N=3)
    f = SMap.constant(circle, edge, 0)
    g = SMap.constant(edge, circle, 0)
    composite = induced_map(g, 0).compose(induced_map(f, 0))
    assert composite.to_lists() == induced_map(g.compose(f), 0).to_lists()
