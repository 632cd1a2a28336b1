"""群完备化测试: 群性路线与伸缩塔路线"""
import pytest

from utils.categories import monoid
from utils.errors import HypothesesNotMetError, InvalidArgumentError
from utils.group_completion import (
    component_group,
    expand_word,
    group_completion_verify,
    homology_threads,
    localized_homology,
    telescope,
)
from utils.homology import LocalizationSpec
from utils.monoids import block_sum, finite_group, from_category, monoid_from_elements, naturals
from utils.verdicts import Verdict


def test_expand_word_cycles_the_period():
    M = finite_group("cyclic", 3, 3)
    assert expand_word(M, [2, 0, 1], 5) == (2, 0, 1, 2, 0)
    assert expand_word(M, None, 4) == (0, 1, 2, 0)


@pytest.mark.parametrize("word", [[0, 3], [0, 1]])
def test_expand_word_rejects_bad_periods(word):
    with pytest.raises(InvalidArgumentError):
        expand_word(finite_group("cyclic", 3, 3), word, 4)


def zero_absorbing(N: int = 3):
    """乘法幺半群 {1, 0}: 群完备化平凡"""
    return monoid_from_elements([1, 0], [[1, 0], [0, 0]], N, name="{1,0}")


def capped_z3():
    C = monoid(list(range(3)), lambda g, f: (g + f) % 3, 0, name="Z3w", weights={0: 0, 1: 1, 2: 1}, cap=2)
    return from_category(C, 3, sections=[0, 1, 2])


@pytest.mark.parametrize("M, expected", [
    (finite_group("cyclic", 2, 3), "Z/2"),
    (finite_group("cyclic", 3, 3), "Z/3"),
    (finite_group("symmetric", 3, 3), "nonabelian group of order 6"),
    (naturals(3, 3), "Z"),
    (zero_absorbing(), "0"),
    (capped_z3(), "Z/3"),
])
def test_component_group(M, expected):
    assert component_group(M) == expected


def test_naturals_threads_are_stable():
    M = naturals(5, 3)
    threads = homology_threads(M, expand_word(M, None, 3), 1)
    assert [t.groups for t in threads] == [("Z",) * 4, ("0",) * 4]
    assert threads[0].weights == (0, 1, 2, 3)
    assert all(t.stabilized for t in threads)


def test_telescope_needs_room_under_the_cap():
    with pytest.raises(InvalidArgumentError):
        telescope(naturals(2, 3), stages=4, n_range=1)


def test_naturals_telescope_window():
    tele = telescope(naturals(5, 3), stages=4, n_range=1)
    assert tele.window == (1, 5)
    assert len(tele.letters) == 3
    assert tele.to_dict()["stages"] == 4


def test_noncentral_components_are_rejected():
    with pytest.raises(HypothesesNotMetError):
        localized_homology(finite_group("symmetric", 3, 3), 1)


@pytest.mark.parametrize("n, group", [(2, "Z/2"), (3, "Z/3")])
def test_cyclic_group_completion(n, group):
    report = group_completion_verify(finite_group("cyclic", n, 4), LocalizationSpec.h_range(2))
    assert report.verdict is Verdict.CONFIRMED
    assert report.route == "grouplike"
    assert report.acyclic is True
    assert report.localized.component_group == group
    assert report.acts_by.yes


@pytest.mark.slow
def test_symmetric_group_completion():
    report = group_completion_verify(finite_group("symmetric", 3, 3), LocalizationSpec.h_range(2))
    assert report.verdict is Verdict.CONFIRMED
    assert report.acyclic is True


def test_range_must_be_below_truncation():
    with pytest.raises(InvalidArgumentError, match="range must be below truncation"):
        group_completion_verify(finite_group("cyclic", 2, 3), LocalizationSpec.h_range(3))


def test_known_answer_mismatch_refutes():
    report = group_completion_verify(finite_group("cyclic", 2, 4), LocalizationSpec.h_range(2),
                                     expected={"component_group": "Z"})
    assert report.verdict is Verdict.REFUTED
    assert report.witness["mismatches"]["component_group"] == {"expected": "Z", "actual": "Z/2"}
    assert report.known_answer["matches"] is False


def test_naturals_group_completion():
    expected = {"degrees": {"0": "Z", "1": "0"}, "component_group": "Z"}
    report = group_completion_verify(naturals(5, 3), LocalizationSpec.h_range(1), expected=expected)
    assert report.verdict is Verdict.CONFIRMED
    assert report.route == "telescope"
    assert report.known_answer["matches"] is True
    assert report.localized.h0() == "Z[Z]"


@pytest.mark.slow
def test_block_sum_group_completion():
    M = block_sum("symmetric", 3, 3)
    expected = {"degrees": {"0": "Z", "1": "Z/2", "2": "0"}, "component_group": "Z"}
    report = group_completion_verify(M, LocalizationSpec.h_range(2), expected=expected)
    assert report.verdict is Verdict.CONFIRMED
    threads = report.localized.threads
    assert threads[1].groups == ("0", "0", "Z/2", "Z/2")
    assert report.to_dict()["localized"]["degrees"]["1"] == "Z/2"


def test_trivial_completion_through_the_eventual_image():
    M = zero_absorbing()
    tele = telescope(M, stages=4, n_range=2)
    assert [M.space.label(0, M.sections[s]) for s in tele.letters] == [1, 0, 1]
    assert tele.space.size(0) == 1
    assert tele.colimit.image_stable_from[0] == 2
    assert all(tele.colimit.image_stabilized)
    assert tele.to_dict()["model"] == "eventual_image"

    report = group_completion_verify(M, LocalizationSpec.h_range(2), stages=4)
    assert report.verdict is Verdict.CONFIRMED
    assert report.route == "telescope"
    assert report.localized.component_group == "0"
    assert report.localized.h0() == "Z"
    assert report.localized.degrees == {0: "Z", 1: "0", 2: "0"}
    assert all(report.localized.colimit_agrees)
