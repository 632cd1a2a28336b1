"""范畴对象, 作用与纤维的测试"""
import pytest

from utils.categories import cyclic_group, poset, symmetric_group, terminal_category
from utils.errors import InvalidArgumentError, PreconditionUnverifiedError
from utils.homology import Answer, LocalizationSpec, homology_table, is_acyclic
from utils.internal_category import (
    acts_by_check,
    action_category,
    action_map,
    build_action,
    discrete_internal,
    fiber,
    object_action,
    projection_map,
    set_action,
    stable_equiv_check,
    vertex_test_maps,
)
from utils.monoids import naturals
from utils.sset import SMap, build_standard, same_labelled


def swap_action(N: int = 4):
    return set_action(cyclic_group(2), {"*": ["a", "b"]}, lambda g, x: x if g == 0 else {"a": "b", "b": "a"}[x], N)


@pytest.mark.parametrize("make", [
    lambda: poset([0, 1, 2], [(0, 1), (1, 2)]),
    lambda: cyclic_group(2),
    lambda: symmetric_group(3),
    terminal_category,
])
def test_discrete_classifying_space_is_nerve(make):
    C = make()
    D = discrete_internal(C, 3)
    assert D.is_discrete()
    assert same_labelled(D.classifying_space(), C.nerve(3))


def test_discrete_round_trip(z3):
    back = discrete_internal(z3, 2).as_finite_category()
    assert list(back.morphisms) == list(z3.morphisms)
    assert back.compose_table == z3.compose_table


def test_set_action_fibers():
    A = swap_action()
    F = fiber(A, 0, 0)
    assert F.obj.counts() == (2, 2, 2, 2, 2)
    assert {lab[1] for lab in F.obj.simplices[0]} == {("*", "a"), ("*", "b")}
    assert fiber(A, 1, 0).obj.size(0) == 4


def test_fiber_level_out_of_range():
    with pytest.raises(InvalidArgumentError):
        fiber(swap_action(3), 4, 0)


def test_action_map_swaps_points():
    A = swap_action()
    m = action_map(A, 0, 1)
    assert m.is_isomorphism()
    src, tgt = m.source, m.target
    images = {src.label(0, x)[1]: tgt.label(0, m.components[0][x])[1] for x in range(src.size(0))}
    assert images == {("*", "a"): ("*", "b"), ("*", "b"): ("*", "a")}


def test_free_action_category_is_contractible():
    A = swap_action()
    XC = action_category(A)
    BX = XC.classifying_space()
    assert homology_table(BX, 2) == ["Z", "0", "0"]
    assert projection_map(A, XC).target.counts() == discrete_internal(cyclic_group(2), 4).classifying_space().counts()


def test_object_action_category_matches_base(chain3):
    C = discrete_internal(chain3, 3)
    XC = action_category(object_action(C))
    assert XC.classifying_space().counts() == C.classifying_space().counts()
    assert is_acyclic(XC.classifying_space(), 2)


def test_acts_by_group_action():
    verdict = acts_by_check(swap_action(), LocalizationSpec.h_range(1))
    assert verdict.answer is Answer.YES
    assert verdict.checked == 2
    assert verdict.levels == (0, 0)


def test_naturals_shift_is_not_an_equivalence():
    A = naturals(3, 3).self_action()
    verdict = acts_by_check(A, LocalizationSpec.h_range(1))
    assert verdict.answer is Answer.NO
    assert verdict.witness["morphism"] == 1
    assert verdict.witness["failing_degree"] == 0


def test_vertex_shortcut_needs_fibration():
    base = discrete_internal(terminal_category(), 3)
    X = build_standard("horn", 2, k=0, N=3)
    proj = SMap.from_function(X, base.ob, lambda n, lab: base.ob.simplices[n][0], name="π")
    A = build_action(base, X, proj, lambda p, phi, x: x, name="trivial")
    with pytest.raises(PreconditionUnverifiedError):
        acts_by_check(A, LocalizationSpec.h_range(1), vertices_only=True)
    assert acts_by_check(A, LocalizationSpec.h_range(1)).yes


def test_vertex_shortcut_with_kan_projection():
    verdict = acts_by_check(swap_action(), LocalizationSpec.h_range(1), vertices_only=True)
    assert verdict.yes
    assert verdict.fibration is not None and verdict.fibration.yes


def test_stable_check_with_no_tests_is_vacuous():
    verdict = stable_equiv_check(swap_action(), LocalizationSpec.h_range(1), [])
    assert verdict.yes and verdict.vacuous


@pytest.mark.parametrize("action, expected", [
    (swap_action, Answer.YES),
    (lambda: naturals(3, 3).self_action(), Answer.NO),
])
def test_stable_check_agrees_with_acts_by(action, expected):
    A = action()
    spec = LocalizationSpec.h_range(1)
    stable = stable_equiv_check(A, spec, vertex_test_maps(A))
    assert stable.answer is expected
    assert acts_by_check(A, spec).answer is expected


def test_discrete_base_checks_all_levels_on_request():
    A = swap_action()
    verdict = acts_by_check(A, LocalizationSpec.h_range(1), all_levels=True)
    assert verdict.yes
    assert verdict.levels == (0, 4)
    assert verdict.checked == 2 * 5


def test_level_zero_shortcut_agrees_with_full_check():
    base = discrete_internal(terminal_category(), 3)
    X = build_standard("horn", 2, k=0, N=3)
    proj = SMap.from_function(X, base.ob, lambda n, lab: base.ob.simplices[n][0], name="π")
    A = build_action(base, X, proj, lambda p, phi, x: x, name="trivial")
    short = acts_by_check(A, LocalizationSpec.h_range(1))
    full = acts_by_check(A, LocalizationSpec.h_range(1), all_levels=True)
    assert short.levels == (0, 0) and full.levels == (0, 3)
    assert short.answer is full.answer is Answer.YES
    assert full.checked == 4


def test_naturals_fails_at_level_zero_under_full_check():
    A = naturals(3, 3).self_action()
    verdict = acts_by_check(A, LocalizationSpec.h_range(1), all_levels=True)
    assert verdict.answer is Answer.NO
    assert verdict.witness["level"] == 0
