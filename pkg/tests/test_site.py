"""有限景, 层化与茎的测试 (以 Sierpinski 景 U -i-> X 为主)"""
import pytest

from utils.categories import cyclic_group, from_tables
from utils.errors import CorruptInputError
from utils.fibration import check_fibration
from utils.homology import Answer, LocalizationKind, LocalizationSpec, homology_table
from utils.internal_category import set_action
from utils.site import (
    SPresheaf,
    SPresheafMap,
    constant_presheaf_action,
    constant_spresheaf,
    is_local_equivalence,
    is_sheaf,
    is_simplicial_sheaf,
    make_site,
    matching_families,
    plus_construction,
    point_at,
    point_diagram,
    set_presheaf,
    sheafify_set,
    sheafify_spresheaf,
    sierpinski_site,
    spresheaf_pullback,
    stalk,
    validate_site,
)
from utils.sset import SMap, discrete, pullback

N = 2


@pytest.fixture
def site():
    return sierpinski_site()


def discrete_presheaf(site, values, restriction, name="P"):
    """U, X 上的离散值以及沿 i 的限制"""
    C = site.category
    objects = {o: discrete(values[o], N, name=f"{name}({o})") for o in C.objects}
    maps = []
    for f, m in enumerate(C.morphisms):
        tgt, src = objects[C.objects[C.target[f]]], objects[C.objects[C.source[f]]]
        maps.append(SMap.identity(tgt) if C.is_identity(f) else SMap.from_vertex_map(tgt, src, restriction))
    return SPresheaf(site, tuple(objects[o] for o in C.objects), tuple(maps), name=name).validate()


@pytest.fixture
def two_sections(site):
    return discrete_presheaf(site, {"U": ["u"], "X": ["x1", "x2"]}, {"x1": "u", "x2": "u"})


@pytest.fixture
def one_section(site):
    return discrete_presheaf(site, {"U": ["u"], "X": ["x"]}, {"x": "u"}, name="Q")


@pytest.fixture
def collapse(two_sections, one_section):
    comps = tuple(SMap.from_vertex_map(P, Q, {v: Q.simplices[0][0] for v in P.simplices[0]})
                  for P, Q in zip(two_sections.values, one_section.values))
    return SPresheafMap(two_sections, one_section, comps, name="collapse").validate()


# ==================== 拓扑公理 ====================
def test_sierpinski_axioms(site):
    report = validate_site(site)
    assert report.valid
    assert [a["axiom"] for a in report.to_dict()["axioms"]] == ["sieves", "maximal", "stability", "transitivity"]


def test_missing_maximal_sieve(site):
    broken = make_site(site.category, {"X": [["i"]]})
    report = validate_site(broken)
    assert not report.valid
    failed = {name: witness for name, ok, witness in report.axioms if not ok}
    assert failed["maximal"] == {"object": "X", "missing": "maximal sieve"}


def test_non_sieve_cover(site):
    broken = make_site(site.category, {"X": [["id_X", "i"], ["id_X"]]})
    report = validate_site(broken)
    assert dict((name, ok) for name, ok, _ in report.axioms)["sieves"] is False


def test_sieves_on_x(site):
    X = site.object_index("X")
    assert sorted(len(S) for S in site.all_sieves(X)) == [0, 1, 2]


# ==================== 集合值层化 ====================
def test_two_sections_is_not_a_sheaf(two_sections):
    ok, witness = is_sheaf(two_sections.level(0))
    assert not ok
    assert witness["object"] == "X"
    assert witness["sections"] == 2 and witness["matching_families"] == 1


def test_matching_families_on_maximal_sieve(site, two_sections):
    X = site.object_index("X")
    assert len(matching_families(two_sections.level(0), X, site.maximal_sieve(X))) == 2


def test_plus_construction_identifies_sections(two_sections):
    plus = plus_construction(two_sections.level(0))
    assert [len(v) for v in plus.presheaf.values] == [1, 1]
    assert not plus.unit.is_bijective()


def test_sheafify_set_of_a_sheaf_is_bijective(one_section):
    done = sheafify_set(one_section.level(0))
    assert done.unit.is_bijective()
    assert is_sheaf(done.sheaf)[0]


def test_set_presheaf_needs_restrictions(site):
    with pytest.raises(CorruptInputError):
        set_presheaf(site, {"U": ["u"], "X": ["x"]}, {})


# ==================== 单纯预层 ====================
def test_sheafify_simplicial(two_sections):
    done = sheafify_spresheaf(two_sections)
    assert not is_simplicial_sheaf(two_sections)
    assert is_simplicial_sheaf(done.sheaf)
    assert [X.counts() for X in done.sheaf.values] == [(1, 1, 1), (1, 1, 1)]
    again = sheafify_spresheaf(done.sheaf)
    assert all(c.is_isomorphism() for c in again.unit.components)


def test_constant_circle_is_a_sheaf(site, circle):
    P = constant_spresheaf(site, circle)
    assert is_simplicial_sheaf(P)
    done = sheafify_spresheaf(P)
    assert all(c.is_isomorphism() for c in done.unit.components)
    assert homology_table(done.sheaf.at("X"), 1) == ["Z", "Z"]


def test_restriction_must_be_functorial(site, two_sections):
    swapped = list(two_sections.restrictions)
    X = two_sections.at("X")
    swap = SMap.from_vertex_map(X, X, {"x1": "x2", "x2": "x1"})
    swapped[site.category.identities[site.object_index("X")]] = swap
    with pytest.raises(CorruptInputError):
        SPresheaf(site, two_sections.values, tuple(swapped)).validate()


def test_pullback_of_presheaves(collapse):
    P, first, _ = spresheaf_pullback(collapse, collapse)
    assert P.at("X").size(0) == 4
    assert P.at("U").size(0) == 1
    assert first.components[1].target.size(0) == 2


# ==================== 点与茎 ====================
def test_stalks_at_objects(site, two_sections):
    assert stalk(two_sections, point_at(site, "U")).size(0) == 1
    S = stalk(two_sections, point_at(site, "X"))
    assert homology_table(S, 0) == ["Z + Z"]
    assert {lab[0] for lab in S.simplices[0]} == {"X"}


def test_stalk_over_a_diagram(site, two_sections):
    p = point_diagram(site, ["U", "X"], ["i"])
    assert stalk(two_sections, p).counts() == (1, 1, 1)


def test_diagram_without_common_cone(site):
    with pytest.raises(CorruptInputError):
        point_diagram(site, ["U", "X"], [])


# ==================== 局部纤维化与局部等价 ====================
def test_stalkwise_kan_fibration(site, collapse):
    points = [point_at(site, "U"), point_at(site, "X", name="pX")]
    verdict = check_fibration(collapse, "kan", 1, stalks=points)
    assert verdict.yes
    assert verdict.context == "stalkwise"
    assert [v.context for v in verdict.stalks] == ["p_U", "pX"]


def test_stalkwise_trivial_fibration_names_the_failing_point(site, collapse):
    pU, pX = point_at(site, "U"), point_at(site, "X", name="pX")
    assert check_fibration(collapse, "trivial", 1, stalks=[pU]).yes
    verdict = check_fibration(collapse, "trivial", 1, stalks=[pU, pX])
    assert verdict.result is Answer.NO
    assert next(v for v in verdict.stalks if not v.yes).context == "pX"
    assert verdict.witness is not None


def test_stalkwise_fibration_without_points(collapse):
    assert check_fibration(collapse, "kan", 1, stalks=[]).result is Answer.NOT_CHECKABLE


def test_stalks_of_a_pullback(site, collapse):
    pU, pX = point_at(site, "U"), point_at(site, "X")
    P, first, _ = spresheaf_pullback(collapse, collapse)
    for p in (pU, pX):
        local = collapse.stalk_map(p)
        assert stalk(P, p).counts() == pullback(local, local).obj.counts()
    assert stalk(P, pX).counts() == (4, 4, 4)
    assert stalk(sheafify_spresheaf(P).sheaf, pU).counts() == stalk(P, pU).counts()
    assert check_fibration(first, "kan", 1, stalks=[pU, pX]).yes


def test_local_equivalence_at_u(site, collapse):
    verdict = is_local_equivalence(collapse, [point_at(site, "U")], 1)
    assert verdict.answer is Answer.YES


def test_local_equivalence_fails_at_x(site, collapse):
    verdict = is_local_equivalence(collapse, [point_at(site, "U"), point_at(site, "X", name="pX")], 1)
    assert verdict.answer is Answer.NO
    assert verdict.failing_degree == 0
    assert verdict.context == "pX"


def test_local_equivalence_without_points(collapse):
    assert is_local_equivalence(collapse, [], 1).answer is Answer.NOT_CHECKABLE


def test_levelwise_spec(collapse):
    spec = LocalizationSpec(LocalizationKind.LEVELWISE, 1, objects=("U",))
    assert [name for name, _ in collapse.maps_for(spec)] == ["U"]


# ==================== 预层作用 ====================
@pytest.fixture
def constant_swap(site):
    A = set_action(cyclic_group(2), {"*": ["a", "b"]}, lambda g, x: x if g == 0 else {"a": "b", "b": "a"}[x], 3)
    return constant_presheaf_action(site, A)


def test_presheaf_action_levelwise(constant_swap):
    answer, verdicts = constant_swap.acts_by_check(LocalizationSpec(LocalizationKind.LEVELWISE, 1))
    assert answer is Answer.YES
    assert [name for name, _ in verdicts] == ["U", "X"]


def test_presheaf_action_stalkwise_needs_object_points(site, constant_swap):
    p = point_diagram(site, ["U", "X"], ["i"])
    answer, _ = constant_swap.acts_by_check(LocalizationSpec(LocalizationKind.STALKWISE, 1, points=(p,)))
    assert answer is Answer.NOT_CHECKABLE
    answer, _ = constant_swap.acts_by_check(
        LocalizationSpec(LocalizationKind.STALKWISE, 1, points=(point_at(site, "X"),)))
    assert answer is Answer.YES


def test_presheaf_action_fiber(constant_swap):
    assert constant_swap.fiber("U", 0, 0).obj.size(0) == 2


def test_site_over_a_group():
    C = from_tables(["*"], [(0, "*", "*"), (1, "*", "*")], lambda g, f: (g + f) % 2, {"*": 0}, name="Z/2")
    report = validate_site(make_site(C, {}))
    assert report.valid
