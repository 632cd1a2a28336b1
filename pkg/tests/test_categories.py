"""有限范畴, 函子与神经"""
import pytest

from samples import iso_category
from utils.categories import (
    FiniteFunctor,
    arrow_category,
    bounded_naturals,
    general_linear_group,
    monoid_from_table,
    poset,
    poset_to_group_functors,
    terminal_category,
)
from utils.errors import CorruptInputError, InvalidArgumentError


def test_cyclic_group_is_a_groupoid(z3):
    assert z3.is_groupoid()
    assert z3.morphisms == (0, 1, 2)
    assert z3.inverse(z3.morphism_index(1)) == z3.morphism_index(2)


def test_poset_is_not_a_groupoid(chain3):
    assert not chain3.is_groupoid()
    assert chain3.morphisms[chain3.non_invertible()] == (0, 1)


def test_poset_closes_transitively(chain3):
    assert (0, 2) in chain3.morphisms
    assert len(chain3.morphisms) == 6


def test_poset_rejects_cycles():
    with pytest.raises(CorruptInputError):
        poset(["a", "b"], [("a", "b"), ("b", "a")])


def test_nerve_counts(chain3, s3):
    assert chain3.nerve(2).counts() == (3, 6, 10)
    assert s3.nerve(2).counts() == (1, 6, 36)
    assert arrow_category().nerve(2).nondegenerate_counts() == (2, 1, 0)


def test_nerve_labels(z2):
    N = z2.nerve(2)
    assert N.simplices[0] == ("*",)
    assert (1, 1) in N.simplices[2]


def test_weighted_nerve_respects_the_cap():
    N = bounded_naturals(2).nerve(3)
    assert N.counts() == (1, 3, 6, 10)
    assert (1, 2) not in N.simplices[2]


def test_general_linear_group_order():
    assert len(general_linear_group(2, 2).morphisms) == 6


def test_monoid_table_rejects_non_associativity():
    with pytest.raises(CorruptInputError) as info:
        monoid_from_table(["e", "a", "b"], [["e", "a", "b"], ["a", "b", "e"], ["b", "b", "a"]])
    assert len(info.value.witness) == 3


def test_monoid_table_needs_a_unit():
    with pytest.raises(CorruptInputError):
        monoid_from_table(["a", "b"], [["a", "a"], ["a", "a"]])


def test_under_category_of_a_chain(chain3):
    under = chain3.under(chain3.object_index(0))
    assert len(under.objects) == 3
    assert len(under.morphisms) == 6


# ==================== 函子 ====================
def test_functor_preserves_identities(z2):
    D = arrow_category()
    with pytest.raises(CorruptInputError):
        FiniteFunctor.from_labels(D, z2, {0: "*", 1: "*"}, {(0, 0): 1, (1, 1): 0, (0, 1): 1})


def test_functor_nerve_map_is_simplicial(z2):
    f = FiniteFunctor.from_labels(arrow_category(), z2, {0: "*", 1: "*"}, {(0, 0): 0, (1, 1): 0, (0, 1): 1})
    g = f.nerve_map(3)
    g.validate()
    assert g.target.size(1) == 2


def test_terminal_inclusion(z2):
    f = FiniteFunctor.from_labels(terminal_category(), z2, {"*": "*"}, {("id", "*"): 0})
    assert f.nerve_map(2).source.counts() == (1, 1, 1)


def test_poset_to_group_functors_count(chain3, z2):
    assert len(poset_to_group_functors(chain3, z2)) == 4


def test_poset_to_group_functors_needs_one_object(chain3):
    with pytest.raises(InvalidArgumentError):
        poset_to_group_functors(chain3, chain3)


def test_iso_category_is_a_groupoid():
    assert iso_category().is_groupoid()
