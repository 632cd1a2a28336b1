"""作用串上的双单纯构造"""
import pytest

from utils.categories import cyclic_group
from utils.errors import InvalidArgumentError
from utils.homology import LocalizationSpec, judge_map
from utils.internal_category import set_action
from utils.proof_support import (
    action_string,
    column_decomposition_agrees,
    column_verdicts,
    horn_square,
    proof_constructions,
    sigma_bar,
    x0_sigma,
    x_sigma,
    xtilde,
    xtilde_comparison,
)
from utils.sset import SMap, point

N = 2


@pytest.fixture
def swap():
    return set_action(cyclic_group(2), {"*": ["a", "b"]}, lambda g, x: x if g == 0 else {"a": "b", "b": "a"}[x], N)


@pytest.fixture
def flip(swap):
    """第 1 层上由非单位元构成的长度 1 的串"""
    mor = swap.base.mor
    return action_string(swap, 1, [mor.index_of(1, 1)])


def test_string_needs_one_arrow_per_level(swap):
    with pytest.raises(InvalidArgumentError):
        action_string(swap, 1, [])
    with pytest.raises(InvalidArgumentError):
        action_string(swap, 0, [])


def test_length_zero_string_is_trivial(swap):
    sigma = action_string(swap, 0, [], start=0)
    X, X0 = x_sigma(swap, sigma), x0_sigma(swap, sigma)
    assert X.counts() == X0.counts()
    F = sigma_bar(swap, sigma)
    assert all(F.target.label(p, q, F.components[p][q][z]) == F.source.label(p, q, z)
               for p in range(N + 1) for q in range(N + 1) for z in range(F.source.size(p, q)))


def test_string_object_sizes(swap, flip):
    X = x_sigma(swap, flip)
    assert all(X.size(p, q) == (p + 2) * (q + 2) * 2 for p in range(N + 1) for q in range(N + 1))
    assert X.counts() == x0_sigma(swap, flip).counts()


def test_comparison_is_a_coproduct_of_action_maps(swap, flip):
    F = sigma_bar(swap, flip)
    assert all(column_decomposition_agrees(swap, flip, F, p) for p in range(N + 1))
    assert all(v.yes for v in column_verdicts(F, LocalizationSpec.h_range(1)))


@pytest.mark.parametrize("k", [0, 1])
def test_horn_square_commutes(swap, flip, k):
    square = horn_square(swap, flip, k)
    assert square.commutes
    assert square.left.source.size(0, 0) < square.right.source.size(0, 0)


@pytest.mark.parametrize("k", [0, 1])
def test_horn_square_commutes_after_the_diagonal(swap, flip, k):
    square = horn_square(swap, flip, k)
    top, bottom, left, right = (m.diagonal_map() for m in (square.top, square.bottom, square.left, square.right))
    around = right.compose(top).validate()
    assert around.same_as(bottom.compose(left).validate())


def test_diagonal_of_the_comparison_is_an_equivalence(swap, flip):
    F = sigma_bar(swap, flip).diagonal_map().validate()
    assert F.is_isomorphism()
    assert judge_map(F, 1).yes


def test_horn_index_out_of_range(swap, flip):
    with pytest.raises(InvalidArgumentError):
        horn_square(swap, flip, 2)


@pytest.fixture
def arrow_map(swap):
    mor = swap.base.mor
    return SMap.constant(point(N), mor, mor.index_of(0, 1), name="a")


def test_simplex_replacements_match(swap, arrow_map):
    S, T = xtilde(swap, arrow_map, "s"), xtilde(swap, arrow_map, "t")
    assert S.counts() == T.counts()
    assert S.size(0, 0) > 0
    F = xtilde_comparison(swap, arrow_map)
    assert all(len(set(F.components[p][q])) == F.target.size(p, q) for p in range(N + 1) for q in range(N + 1))


def test_dispatch(swap, flip, arrow_map):
    assert proof_constructions(swap, flip, "X_sigma").counts() == x_sigma(swap, flip).counts()
    assert proof_constructions(swap, flip, "horn_variant", k=0).commutes
    assert proof_constructions(swap, None, "Xtilde_t", test_map=arrow_map).counts() == \
        xtilde(swap, arrow_map, "t").counts()


@pytest.mark.parametrize("mode, kwargs", [
    ("X_sigma", {}),
    ("horn_variant", {"k": None}),
    ("Xtilde_s", {}),
    ("quadruple", {}),
])
def test_dispatch_rejects_missing_inputs(swap, mode, kwargs):
    with pytest.raises(InvalidArgumentError):
        proof_constructions(swap, None, mode, **kwargs)
