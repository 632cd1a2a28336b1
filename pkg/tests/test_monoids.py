"""单纯幺半群测试"""
import pytest

from utils.errors import CorruptInputError, IncompleteAtTruncationError, InvalidArgumentError
from utils.categories import monoid
from utils.homology import homology_groups, is_acyclic
from utils.internal_category import action_category
from utils.monoids import (
    block_sum,
    check_centrality,
    finite_group,
    from_category,
    graded_ring,
    monoid_from_elements,
    naturals,
    pontryagin_product,
)


def test_cyclic_group_is_grouplike():
    M = finite_group("cyclic", 2, 3)
    assert M.is_grouplike()
    assert len(M.components()) == 2
    assert M.component_table() == {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 0}


def test_unknown_group_kind():
    with pytest.raises(InvalidArgumentError):
        finite_group("dihedral", 3, 3)


def test_naturals_is_not_grouplike():
    M = naturals(3, 3)
    assert not M.is_grouplike()
    assert M.multiply(0, 1, 2) == 3
    with pytest.raises(IncompleteAtTruncationError):
        M.multiply(0, 2, 2)


def capped_z3(cap: int):
    C = monoid(list(range(3)), lambda g, f: (g + f) % 3, 0, name="Z3w", weights={0: 0, 1: 1, 2: 1}, cap=cap)
    return from_category(C, 3, sections=[0, 1, 2])


def test_capped_group_is_grouplike():
    assert capped_z3(2).is_grouplike()
    assert len(capped_z3(2).component_table()) == 9


def test_cap_hides_the_inverses():
    M = capped_z3(1)
    assert (1, 2) not in M.component_table()
    assert not M.is_grouplike()


def test_nonassociative_table():
    elements = ["e", "a", "b"]
    table = [["e", "a", "b"], ["a", "b", "e"], ["b", "b", "a"]]
    with pytest.raises(CorruptInputError) as info:
        monoid_from_elements(elements, table, 2)
    assert len(info.value.witness) == 3


def test_block_sum_counts():
    M = block_sum("symmetric", 2, 3)
    assert M.space.counts()[:3] == (3, 4, 6)
    assert M.cap == 2
    assert M.space.label(0, M.unit) == (0, "*")
    assert M.section_label(0) == (1, "*")


def test_block_sum_rejects_unknown_family():
    with pytest.raises(InvalidArgumentError):
        block_sum("orthogonal", 2, 3)


def test_block_sum_vertex_product():
    M = block_sum("symmetric", 2, 3)
    S = M.space
    H0 = homology_groups(S, 0)[0]

    def vertex_class(n):
        v = S.index_of(0, (n, "*"))
        return H0.coordinates([int(x == v) for x in S.nondegenerate(0)])

    assert pontryagin_product(M, H0, vertex_class(1), H0, vertex_class(1)) == vertex_class(2)


@pytest.mark.parametrize("kind, n", [("cyclic", 2), ("cyclic", 3), ("symmetric", 3)])
def test_self_action_category_is_contractible(kind, n):
    M = finite_group(kind, n, 3)
    assert is_acyclic(action_category(M.self_action()).classifying_space(), 2)


def test_abelian_ring():
    ring = graded_ring(finite_group("cyclic", 2, 3), 1)
    assert [H.describe() for H in ring.groups] == ["Z + Z", "0"]
    assert ring.unital and ring.associative and ring.central
    assert not ring.skipped


def test_symmetric_group_is_not_central():
    central, witness = check_centrality(finite_group("symmetric", 3, 3), 1)
    assert not central
    assert witness["degree"] == 0


def test_naturals_ring_skips_products_over_cap():
    ring = graded_ring(naturals(2, 3), 0)
    assert ring.central
    assert ring.groups[0].rank == 3
