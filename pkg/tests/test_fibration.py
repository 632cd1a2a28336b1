"""角提升与边界提升检验"""
import pytest

from samples import iso_category
from utils.categories import arrow_category, bounded_naturals, cyclic_group, poset, symmetric_group, terminal_category
from utils.errors import InvalidArgumentError
from utils.fibration import check_fibration, map_to_point, replay_witness
from utils.homology import Answer
from utils.sset import SMap, build_standard


def test_unknown_kind_is_rejected(circle):
    with pytest.raises(InvalidArgumentError):
        check_fibration(map_to_point(circle), "serre", 1)


def test_levels_at_truncation_are_incomplete(circle):
    assert check_fibration(map_to_point(circle), "kan", 3).result is Answer.INCOMPLETE


def test_indiscrete_nerve_is_a_trivial_fibration():
    f = map_to_point(iso_category().nerve(3))
    assert check_fibration(f, "trivial", 2).yes
    assert check_fibration(f, "kan", 2).yes


def test_simplex_is_not_kan():
    D2 = build_standard("simplex", 2, N=3)
    assert check_fibration(map_to_point(D2), "trivial", 1).result is Answer.NO


def test_horn_is_not_kan():
    horn = build_standard("horn", 2, k=0, N=3)
    verdict = check_fibration(map_to_point(horn), "kan", 2)
    assert verdict.result is Answer.NO
    assert replay_witness(map_to_point(horn), verdict.witness)


def test_identity_is_a_trivial_fibration(circle):
    assert check_fibration(SMap.identity(circle), "trivial", 2).yes


def test_bz2_is_not_contractible(z2):
    verdict = check_fibration(map_to_point(z2.nerve(3)), "trivial", 2)
    assert verdict.result is Answer.NO
    assert verdict.witness["shape"] == "∂Δ[2]"


FIXTURE_CATEGORIES = [
    ("terminal", terminal_category, True),
    ("Z/2", lambda: cyclic_group(2), True),
    ("Z/3", lambda: cyclic_group(3), True),
    ("S3", lambda: symmetric_group(3), True),
    ("iso", iso_category, True),
    ("[1]", arrow_category, False),
    ("[2]", lambda: poset([0, 1, 2], [(0, 1), (1, 2)]), False),
    ("span", lambda: poset(["a", "b", "c"], [("a", "b"), ("a", "c")]), False),
    ("N<=2", lambda: bounded_naturals(2), False),
]


@pytest.mark.slow
@pytest.mark.parametrize("name,make,groupoid", FIXTURE_CATEGORIES, ids=[c[0] for c in FIXTURE_CATEGORIES])
def test_nerve_is_kan_iff_groupoid(name, make, groupoid):
    C = make()
    assert C.is_groupoid() == groupoid
    f = map_to_point(C.nerve(4))
    verdict = check_fibration(f, "kan", 3)
    assert verdict.yes == groupoid
    if not groupoid:
        assert replay_witness(f, verdict.witness)


@pytest.mark.parametrize("make", [terminal_category, iso_category, arrow_category])
def test_trivial_implies_kan(make):
    f = map_to_point(make().nerve(3))
    if check_fibration(f, "trivial", 2).yes:
        assert check_fibration(f, "kan", 2).yes
