"""双单纯集合: 外积, 对角线, 行与实现引理"""
import pytest

from samples import iso_category
from utils.bisimplicial import (
    bisimplicial_product,
    column,
    diagonal,
    external_product,
    external_product_map,
    realization_check,
    row,
)
from utils.categories import cyclic_group
from utils.errors import InvalidArgumentError
from utils.fibration import map_to_point
from utils.homology import LocalizationSpec
from utils.sset import SMap, build_standard, discrete, point, product, pullback, same_labelled, yoneda_map


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_diagonal_of_box_is_the_product(n):
    D = build_standard("simplex", n, N=3)
    W = external_product(D, D)
    W.validate()
    assert same_labelled(diagonal(W), product(D, D).obj)


def test_external_product_with_a_point_has_constant_rows(circle):
    W = external_product(point(3), circle)
    for q in range(4):
        assert row(W, q).counts() == (circle.size(q),) * 4
    assert column(W, 0).counts() == circle.counts()


def test_diagonal_with_a_point_is_the_original(circle):
    W = external_product(circle, point(3))
    assert diagonal(W).fingerprint() == product(circle, point(3)).obj.fingerprint()
    assert diagonal(W).counts() == circle.counts()


def test_diagonal_preserves_level_counts():
    W = external_product(build_standard("simplex", 1, N=3), discrete(["a", "b"], 3))
    assert diagonal(W).counts() == tuple(W.size(n, n) for n in range(4))


def test_diagonal_commutes_with_products(circle):
    V = external_product(build_standard("simplex", 1, N=3), discrete(["a", "b"], 3))
    W = external_product(circle, build_standard("horn", 2, k=1, N=3))
    VW = bisimplicial_product(V, W)
    VW.validate()
    assert same_labelled(diagonal(VW), product(diagonal(V), diagonal(W)).obj)


def test_diagonal_commutes_with_pullbacks():
    edge = build_standard("simplex", 1, N=2)
    ends = build_standard("boundary", 1, N=2)
    incl = SMap.from_function(ends, edge, lambda n, lab: lab)
    F = external_product_map(incl, SMap.identity(edge))
    G = external_product_map(SMap.identity(edge), incl)
    P = pullback(F.diagonal_map(), G.diagonal_map()).obj
    P.validate()
    levelwise = []
    for n in range(3):
        left, right = F.components[n][n], G.components[n][n]
        levelwise.append(sum(left.count(z) * right.count(z) for z in set(left)))
    assert P.counts() == tuple(levelwise)
    assert P.counts() == product(ends, ends).obj.counts()


def test_row_of_box_is_a_product_with_a_discrete_set():
    D1 = build_standard("simplex", 1, N=2)
    W = external_product(D1, D1)
    R = row(W, 1)
    assert R.counts() == tuple(D1.size(p) * D1.size(1) for p in range(3))


def test_row_out_of_range(circle):
    with pytest.raises(InvalidArgumentError):
        row(external_product(circle, circle), 4)


def test_nerve_row_strings():
    C = cyclic_group(2)
    W = external_product(C.nerve(2), point(2))
    assert row(W, 0).counts() == C.nerve(2).counts()


# ==================== 实现引理 ====================
N = 4


def _equivalences():
    D1, D2 = build_standard("simplex", 1, N=N), build_standard("simplex", 2, N=N)
    horn = build_standard("horn", 2, k=1, N=N)
    return [
        map_to_point(D1),
        map_to_point(D2),
        SMap.from_function(horn, D2, lambda n, lab: lab),
        yoneda_map(D1, 0, 0),
        map_to_point(iso_category().nerve(N)),
    ]


def _second_factors():
    return [
        point(N),
        discrete(["a", "b"], N),
        discrete(["a", "b", "c"], N),
        build_standard("simplex", 1, N=N),
        build_standard("boundary", 1, N=N),
        build_standard("boundary", 2, N=N),
        build_standard("horn", 2, k=0, N=N),
        build_standard("simplex", 2, N=N),
        cyclic_group(2).nerve(N),
        build_standard("horn", 2, k=2, N=N),
    ]


@pytest.mark.slow
def test_realization_lemma_on_generated_family():
    spec = LocalizationSpec.h_range(2)
    checked = 0
    for f in _equivalences():
        for Y in _second_factors():
            F = external_product_map(f, SMap.identity(Y)).validate()
            result = realization_check(F, spec)
            assert result.rows_pass
            assert result.diagonal_verdict.yes
            assert not result.violation
            checked += 1
    assert checked >= 50


def test_failing_rows_make_no_claim(circle):
    F = external_product_map(map_to_point(circle), SMap.identity(point(3))).validate()
    result = realization_check(F, LocalizationSpec.h_range(2))
    assert not result.rows_pass
    assert not result.violation
    assert result.to_dict()["violation"] is False
