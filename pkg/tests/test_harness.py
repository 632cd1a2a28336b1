"""定理 B 与 Puppe 检验的测试"""
import pytest

from utils.categories import (
    FiniteFunctor,
    arrow_category,
    cyclic_group,
    poset,
    poset_to_group_functors,
    symmetric_group,
    terminal_category,
)
from utils.documents import parse_input
from utils.errors import CorruptInputError, InvalidArgumentError, UnsupportedOracleError
from utils.harness import (
    comma_action,
    comma_category,
    comma_inclusion,
    groupoid_cover_oracle,
    hocolim,
    make_diagram,
    over_category,
    puppe_check,
    theorem_b_verify,
    transition_functors,
)
from utils.homology import LocalizationSpec, homology_table
from utils.internal_category import set_action
from utils.monoids import naturals
from utils.sset import SMap, discrete, point
from utils.verdicts import Verdict


def inclusion_into(G):
    """终对象范畴到单对象范畴的唯一函子"""
    return FiniteFunctor.from_labels(terminal_category(), G, {"*": "*"}, {("id", "*"): G.morphisms[G.identities[0]]},
                                     name="pt")


@pytest.fixture
def twist():
    """[1] -> Z/2, 唯一的非恒等箭头映到 1"""
    functors = poset_to_group_functors(arrow_category(), cyclic_group(2))
    return next(F for F in functors if F.mor_map[arrow_category().morphism_index((0, 1))] == 1)


# ==================== 逗号范畴 ====================
def test_comma_category_counts(twist):
    K = comma_category(twist, 0)
    assert len(K.objects) == 4
    assert len(K.morphisms) == 6
    assert homology_table(K.nerve(3), 1) == ["Z + Z", "0"]


def test_transition_functors_are_functorial(twist):
    functors = transition_functors(twist)
    assert len(functors) == 2
    swap = functors[1]
    assert sorted(swap.ob_map) == [0, 1, 2, 3]
    assert swap.ob_map != tuple(range(4))


def test_over_category_and_inclusion(twist):
    K = over_category(twist)
    assert len(K.objects) == 4
    incl = comma_inclusion(twist)
    assert len(incl.ob_map) == 2
    assert incl.target.objects[incl.ob_map[0]][0] == 0


def test_comma_action_fibers(twist):
    A = comma_action(twist, 3)
    assert A.total.size(0) == 4
    assert A.base.is_discrete()


def test_groupoid_cover_oracle_counts(twist):
    hofib = groupoid_cover_oracle(twist, 0, 3, 1)
    assert homology_table(hofib, 1) == ["Z + Z", "0"]


# ==================== 定理 B ====================
def test_point_into_bz2():
    report = theorem_b_verify(inclusion_into(cyclic_group(2)), "*", LocalizationSpec.h_range(2), trunc=4)
    assert report.verdict is Verdict.CONFIRMED
    assert report.fiber_homology == ("Z + Z", "0", "0")
    assert report.oracle_homology == report.fiber_homology
    assert report.exit_code == 0


@pytest.mark.parametrize("G", [cyclic_group(2), cyclic_group(3)], ids=["Z2", "Z3"])
def test_comma_agrees_with_groupoid_cover(G):
    for F in poset_to_group_functors(arrow_category(), G):
        report = theorem_b_verify(F, "*", LocalizationSpec.h_range(1), trunc=3)
        assert report.verdict is Verdict.CONFIRMED, report.to_dict()
        assert report.fiber_homology == report.oracle_homology


@pytest.mark.slow
@pytest.mark.parametrize("G", [cyclic_group(2), cyclic_group(3), symmetric_group(3)], ids=["Z2", "Z3", "S3"])
def test_comma_agrees_over_a_span(G):
    span = poset([0, 1, 2], [(0, 1), (0, 2)])
    for F in poset_to_group_functors(span, G):
        report = theorem_b_verify(F, "*", LocalizationSpec.h_range(1), trunc=3)
        assert report.verdict is Verdict.CONFIRMED
        assert report.fiber_homology == (f"{' + '.join(['Z'] * len(G.morphisms))}", "0")


def test_known_answer_oracle():
    f = inclusion_into(cyclic_group(2))
    spec = LocalizationSpec.h_range(1)
    good = theorem_b_verify(f, "*", spec, oracle="known-answer", known={"0": "Z + Z", "1": "0"}, trunc=3)
    assert good.verdict is Verdict.CONFIRMED
    bad = theorem_b_verify(f, "*", spec, oracle="known-answer", known={"degrees": {"0": "Z", "1": "0"}}, trunc=3)
    assert bad.verdict is Verdict.REFUTED
    assert bad.witness == {"degree": 0, "fiber": "Z + Z", "oracle": "Z"}


def test_known_answer_needs_a_table():
    with pytest.raises(InvalidArgumentError):
        theorem_b_verify(inclusion_into(cyclic_group(2)), "*", LocalizationSpec.h_range(1),
                         oracle="known-answer", trunc=3)


def test_unknown_oracle():
    with pytest.raises(UnsupportedOracleError):
        theorem_b_verify(inclusion_into(cyclic_group(2)), "*", LocalizationSpec.h_range(1), oracle="guess", trunc=3)


def test_range_at_truncation():
    with pytest.raises(InvalidArgumentError, match="range must be below truncation"):
        theorem_b_verify(inclusion_into(cyclic_group(2)), "*", LocalizationSpec.h_range(3), trunc=3)


def test_non_groupoid_target_is_not_checkable():
    C = arrow_category()
    f = FiniteFunctor.from_labels(terminal_category(), C, {"*": 0}, {("id", "*"): (0, 0)}, name="0")
    report = theorem_b_verify(f, 1, LocalizationSpec.h_range(1), trunc=3)
    assert report.verdict is Verdict.NOT_CHECKABLE
    assert report.witness["code"] == "unsupported-oracle"
    assert report.exit_code == 3


def test_naturals_self_action_fails_hypotheses():
    report = theorem_b_verify(naturals(3, 3).self_action(), "*", LocalizationSpec.h_range(1))
    assert report.verdict is Verdict.HYPOTHESES_NOT_MET
    assert report.witness["hypothesis"] == "acts-by"
    assert report.witness["morphism"] == 1
    assert report.exit_code == 2


def test_set_action_fiber_matches_cover():
    A = set_action(cyclic_group(2), {"*": ["a", "b"]}, lambda g, x: x if g == 0 else {"a": "b", "b": "a"}[x], 4)
    report = theorem_b_verify(A, "*", LocalizationSpec.h_range(2))
    assert report.verdict is Verdict.CONFIRMED
    assert report.fiber_homology == ("Z + Z", "0", "0")
    assert report.comparison_map.yes


# ==================== 截断与范围的单调性 ====================
@pytest.mark.parametrize("small, large", [((1, 3), (1, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 4))])
def test_comma_report_is_monotone(small, large):
    f = inclusion_into(cyclic_group(2))
    lo = theorem_b_verify(f, "*", LocalizationSpec.h_range(small[0]), trunc=small[1])
    hi = theorem_b_verify(f, "*", LocalizationSpec.h_range(large[0]), trunc=large[1])
    assert lo.verdict is hi.verdict is Verdict.CONFIRMED
    shared = lo.range + 1
    assert hi.fiber_homology[:shared] == lo.fiber_homology
    assert hi.oracle_homology[:shared] == lo.oracle_homology


def test_action_report_is_monotone():
    def swap(N):
        return set_action(cyclic_group(2), {"*": ["a", "b"]}, lambda g, x: x if g == 0 else {"a": "b", "b": "a"}[x], N)

    lo = theorem_b_verify(swap(3), "*", LocalizationSpec.h_range(1))
    hi = theorem_b_verify(swap(4), "*", LocalizationSpec.h_range(2))
    assert lo.verdict is hi.verdict is Verdict.CONFIRMED
    assert hi.fiber_homology[:2] == lo.fiber_homology


def test_refutation_survives_a_larger_truncation():
    f = inclusion_into(cyclic_group(2))
    known = {"0": "Z", "1": "0", "2": "0"}
    reports = [theorem_b_verify(f, "*", LocalizationSpec.h_range(r), oracle="known-answer", known=known, trunc=t)
               for r, t in [(1, 3), (2, 4)]]
    assert all(r.verdict is Verdict.REFUTED for r in reports)
    assert {r.witness["degree"] for r in reports} == {0}


# ==================== 同伦余极限 ====================
def span_of_points():
    shape = poset([0, 1, 2], [(0, 1), (0, 2)])
    two, pt = discrete(["a", "b"], 3), point(3)
    collapse = SMap.constant(two, pt, 0).validate()
    return shape, {0: two, 1: pt, 2: pt}, {(0, 1): collapse, (0, 2): collapse}


def test_hocolim_of_span_is_a_circle():
    shape, objects, maps = span_of_points()
    H = hocolim(make_diagram(shape, objects, maps, name="span"))
    assert homology_table(H, 2) == ["Z", "Z", "0"]


def test_diagram_missing_a_map():
    shape, objects, maps = span_of_points()
    del maps[(0, 2)]
    with pytest.raises(CorruptInputError):
        make_diagram(shape, objects, maps)


# ==================== Puppe ====================
def _puppe(fixture_path, name):
    doc = parse_input(fixture_path(name))
    setup = doc.obj
    return puppe_check(setup.diagram, setup.over, setup.transformation, setup.point, doc.spec)


def test_puppe_for_free_action(fixture_path):
    report = _puppe(fixture_path, "puppe_bz2.json")
    assert report.verdict is Verdict.CONFIRMED
    assert report.fiber_homology == report.oracle_homology


def test_puppe_rejects_non_cartesian_square(fixture_path):
    report = _puppe(fixture_path, "puppe_broken.json")
    assert report.verdict is Verdict.HYPOTHESES_NOT_MET
    assert report.witness["square"] == [0, 1]
