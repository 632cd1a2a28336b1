"""截断单纯集合: 标准对象, 校验, 极限, 余极限与枚举"""
import pytest

from utils.errors import CorruptInputError, IncompleteAtTruncationError, InvalidArgumentError
from utils.sset import (
    SimplexAddress,
    SMap,
    TruncatedSSet,
    build_standard,
    colimit_sequence,
    coproduct,
    discrete,
    ez_normalize,
    pi0,
    point,
    product,
    pullback,
    simplex_maps,
    yoneda_map,
)


# ==================== 标准对象 ====================
def test_standard_simplex_counts():
    D1 = build_standard("simplex", 1, N=2)
    assert D1.counts() == (2, 3, 4)
    assert D1.nondegenerate_counts() == (2, 1, 0)
    assert D1.dimension() == 1


def test_boundary_and_horn_drop_top_faces():
    assert build_standard("boundary", 2, N=3).nondegenerate_counts() == (3, 3, 0, 0)
    horn = build_standard("horn", 2, k=1, N=3)
    assert horn.nondegenerate_counts() == (3, 2, 0, 0)
    assert horn.name == "Λ^1[2]"


@pytest.mark.parametrize("kind,n,k,N", [
    ("simplex", 3, None, 2),
    ("horn", 2, None, 3),
    ("horn", 2, 5, 3),
    ("cube", 1, None, 2),
])
def test_standard_rejects_bad_arguments(kind, n, k, N):
    with pytest.raises(InvalidArgumentError):
        build_standard(kind, n, k, N)


def test_discrete_and_point():
    X = discrete(["a", "b"], 2)
    assert X.counts() == (2, 2, 2)
    assert X.nondegenerate_counts() == (2, 0, 0)
    assert point(3).simplices[0] == ("*",)


# ==================== 校验 ====================
def test_from_dict_accepts_valid_payload():
    D2 = build_standard("simplex", 2, N=3)
    again = TruncatedSSet.from_dict(D2.to_dict())
    assert again.fingerprint() == D2.fingerprint()


def test_swapped_faces_are_rejected():
    payload = build_standard("simplex", 1, N=2).to_dict()
    payload["faces"][1] = [payload["faces"][1][1], payload["faces"][1][0]]
    with pytest.raises(CorruptInputError) as info:
        TruncatedSSet.from_dict(payload)
    assert info.value.witness["identity"]


def test_negative_index_is_rejected():
    payload = build_standard("simplex", 1, N=2).to_dict()
    payload["faces"][1][0][0] = -1
    with pytest.raises(CorruptInputError):
        TruncatedSSet.from_dict(payload)


def test_fingerprint_ignores_name():
    D1 = build_standard("simplex", 1, N=2)
    assert D1.relabel(D1.simplices, name="other").fingerprint() == D1.fingerprint()


# ==================== 映射与极限 ====================
def test_yoneda_map_classifies_a_simplex():
    Y = build_standard("boundary", 2, N=2)
    edge = Y.index_of(1, (0, 2))
    f = yoneda_map(Y, 1, edge).validate()
    top = f.source.index_of(1, (0, 1))
    assert f(1, top) == edge


def test_product_of_intervals():
    D1 = build_standard("simplex", 1, N=3)
    P = product(D1, D1)
    P.obj.validate()
    assert P.obj.counts() == tuple((m + 2) ** 2 for m in range(4))
    assert P.obj.nondegenerate_counts() == (4, 5, 2, 0)
    P.first.validate()
    P.second.validate()


def test_pullback_along_a_vertex_is_the_fiber():
    D1 = build_standard("simplex", 1, N=2)
    vertex = yoneda_map(D1, 0, D1.index_of(0, (1,)))
    P = pullback(vertex, SMap.identity(D1))
    assert P.obj.counts() == (1, 1, 1)


def test_pair_requires_a_commuting_cone():
    D1 = build_standard("simplex", 1, N=2)
    v0 = yoneda_map(D1, 0, 0)
    v1 = yoneda_map(D1, 0, 1)
    P = pullback(v0, v1)
    assert P.obj.counts() == (0, 0, 0)
    pt = v0.source
    with pytest.raises(InvalidArgumentError):
        P.pair(SMap.identity(pt), SMap.identity(pt))


def test_coproduct_tags_labels():
    C, inclusions = coproduct([point(2), discrete(["a", "b"], 2)], tags=["p", "q"])
    assert C.counts() == (3, 3, 3)
    assert C.simplices[0] == (("p", "*"), ("q", "a"), ("q", "b"))
    for inc in inclusions:
        inc.validate()


def test_pi0_counts_components():
    assert len(pi0(discrete(["a", "b", "c"], 1))) == 3
    assert len(pi0(build_standard("boundary", 2, N=2))) == 1
    with pytest.raises(InvalidArgumentError):
        pi0(point(0))


# ==================== 分解与枚举 ====================
def test_ez_normalize_finds_the_nondegenerate_base():
    D1 = build_standard("simplex", 1, N=2)
    table = ez_normalize(D1)
    x = D1.index_of(2, (0, 0, 1))
    base, word = table[SimplexAddress(2, x)]
    assert base == SimplexAddress(1, D1.index_of(1, (0, 1)))
    assert word == (0,)


def test_simplex_maps_from_an_interval():
    D1 = build_standard("simplex", 1, N=3)
    Y = build_standard("boundary", 2, N=3)
    assert len(simplex_maps(D1, Y)) == Y.size(1)


def test_simplex_maps_refuses_undetermined_dimension():
    K = TruncatedSSet.from_dict(build_standard("simplex", 2, N=2).to_dict())
    with pytest.raises(IncompleteAtTruncationError):
        simplex_maps(K, point(2))


def test_colimit_sequence_reports_stabilization():
    edge = build_standard("simplex", 1, N=2)
    ends = build_standard("boundary", 1, N=2)
    incl = SMap.from_function(ends, edge, lambda n, lab: lab)
    result = colimit_sequence([incl], stages=2)
    assert result.colimit.counts() == edge.counts()
    assert result.stable_from == (0, 1, 1)
    assert result.stabilized == (True, False, False)
    same = colimit_sequence([SMap.identity(edge), SMap.identity(edge)], stages=3)
    assert all(same.stabilized)
    assert same.colimit.simplices[0] == ((0, (0,)), (0, (1,)))


def test_colimit_of_constant_identity_sequence():
    edge = build_standard("simplex", 1, N=2)
    one = colimit_sequence([SMap.identity(edge)], stages=1)
    assert one.colimit.counts() == edge.counts()
    assert all(one.stabilized)
    assert one.stable_from == (0, 0, 0)
    assert all(colimit_sequence([SMap.identity(edge)], stages=1, first=edge).stabilized)


def test_colimit_inspects_maps_after_the_last_stage():
    edge = build_standard("simplex", 1, N=2)
    collapse = SMap.constant(edge, point(2), 0)
    result = colimit_sequence([SMap.identity(edge), collapse], stages=2)
    assert result.colimit.counts() == edge.counts()
    assert not any(result.stabilized)


def test_colimit_rejects_mismatched_first_object():
    edge = build_standard("simplex", 1, N=2)
    with pytest.raises(InvalidArgumentError):
        colimit_sequence([SMap.identity(edge)], stages=1, first=point(2))
    with pytest.raises(InvalidArgumentError):
        colimit_sequence([], stages=1)


def test_eventual_image_of_constant_endomaps():
    edge = build_standard("simplex", 1, N=2)
    c = SMap.constant(edge, edge, 0)
    result = colimit_sequence([c, c, c], stages=3)
    assert not any(result.stabilized)
    assert result.image.counts() == (1, 1, 1)
    assert result.image_stable_from == (1, 1, 1)
    assert all(result.image_stabilized)
