"""
单纯幺半群模块
幺半群对象 (单对象的范畴对象), 块和族 ∐ B G_n, π_0 的群性, Pontryagin 乘积与同调分次环
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from utils.categories import (
    FiniteCategory,
    bounded_naturals,
    cyclic_group,
    general_linear_group,
    monoid_from_table,
    symmetric_group,
)
from utils.errors import CorruptInputError, IncompleteAtTruncationError, InvalidArgumentError
from utils.helpers import label_to_json
from utils.homology import AbelianGroupPresentation, homology_groups, induced_map
from utils.internal_category import InternalAction, InternalCategory, Weights, build_action
from utils.sset import SMap, TruncatedSSet, coproduct, discrete, pi0, point, sub_object_where

logger = logging.getLogger(__name__)

BLOCK_FAMILIES = ("symmetric", "general_linear")


@dataclass(frozen=True, eq=False)
class MonoidObject:
    """单纯幺半群 M

    mult[p][(a, b)] = a·b; 带权时只需要 w(a) + w(b) <= cap 的乘积. sections 为整体截面 (顶点编号).
    """
    space: TruncatedSSet
    mult: Tuple[Dict[Tuple[int, int], int], ...]
    unit: int
    name: str = ""
    weights: Optional[Weights] = None
    cap: Optional[int] = None
    sections: Tuple[int, ...] = ()

    @property
    def trunc_level(self) -> int:
        return self.space.trunc_level

    def weight(self, p: int, x: int) -> int:
        return self.weights[p][x] if self.weights else 0

    def within_cap(self, p: int, *simplices: int) -> bool:
        return self.cap is None or sum(self.weight(p, x) for x in simplices) <= self.cap

    def multiply(self, p: int, a: int, b: int) -> int:
        try:
            return self.mult[p][(a, b)]
        except KeyError:
            if not self.within_cap(p, a, b):
                raise IncompleteAtTruncationError(
                    f"product of {self.space.label(p, a)!r} and {self.space.label(p, b)!r} exceeds the weight cap",
                    witness={"level": p, "cap": self.cap},
                )
            raise InvalidArgumentError(f"product at level {p} is not defined")

    def unit_at(self, p: int) -> int:
        return self.space.apply_degeneracies(0, self.unit, (0,) * p)

    def section_at(self, i: int, p: int) -> int:
        return self.space.apply_degeneracies(0, self.sections[i], (0,) * p)

    def section_label(self, i: int):
        return self.space.label(0, self.sections[i])

    # ---------- 校验 ----------
    def validate(self) -> "MonoidObject":
        """结合律, 单位律, 乘法与单纯算子交换; 截面必须是顶点"""
        M = self.space
        N = self.trunc_level
        for s in self.sections:
            if not 0 <= s < M.size(0):
                raise CorruptInputError("section is not a vertex", witness={"section": s})
        for p in range(N + 1):
            e = self.unit_at(p)
            table = self.mult[p]
            for a in range(M.size(p)):
                if table.get((e, a)) != a or table.get((a, e)) != a:
                    raise CorruptInputError("unit law fails", witness={"level": p, "simplex": label_to_json(M.label(p, a))})
            for (a, b), ab in table.items():
                if p >= 1 and any(self.mult[p - 1].get((M.faces[p][i][a], M.faces[p][i][b])) != M.faces[p][i][ab]
                                  for i in range(p + 1)):
                    raise CorruptInputError("multiplication does not commute with faces", witness=self._pair(p, a, b))
                if p < N and any(
                        self.mult[p + 1].get((M.degeneracies[p][i][a], M.degeneracies[p][i][b])) != M.degeneracies[p][i][ab]
                        for i in range(p + 1)):
                    raise CorruptInputError("multiplication does not commute with degeneracies",
                                            witness=self._pair(p, a, b))
            if p == 0:
                for a, b, c in itertools.product(range(M.size(0)), repeat=3):
                    if not self.within_cap(0, a, b, c):
                        continue
                    if table[(table[(a, b)], c)] != table[(a, table[(b, c)])]:
                        raise CorruptInputError(
                            "multiplication is not associative",
                            witness=[label_to_json(M.label(0, x)) for x in (a, b, c)],
                        )
        logger.debug("幺半群 %s 校验通过: 单形数 %s", self.name, M.counts())
        return self

    def _pair(self, p: int, a: int, b: int) -> dict:
        return {"level": p, "pair": [label_to_json(self.space.label(p, a)), label_to_json(self.space.label(p, b))]}

    # ---------- 作为范畴对象 ----------
    def to_category(self) -> InternalCategory:
        """单对象范畴对象: ob = 点, mor = M, g∘f = g·f"""
        M = self.space
        N = self.trunc_level
        pt = point(N)
        const = SMap(M, pt, tuple((0,) * M.size(p) for p in range(N + 1)), name="*")
        unit = SMap(pt, M, tuple((self.unit_at(p),) for p in range(N + 1)), name="e")
        return InternalCategory(
            ob=pt,
            mor=M,
            s=const,
            t=const,
            e=unit,
            composition=self.mult,
            name=self.name,
            ob_weights=tuple((0,) for _ in range(N + 1)) if self.weights else None,
            mor_weights=self.weights,
            cap=self.cap,
        ).validate()

    def self_action(self) -> InternalAction:
        """左乘作用 M 在自身上"""
        C = self.to_category()
        M = self.space
        proj = SMap(M, C.ob, tuple((0,) * M.size(p) for p in range(self.trunc_level + 1)), name="π")
        return build_action(C, M, proj, lambda p, phi, x: self.mult[p][(phi, x)],
                            name=f"{self.name} on itself", weights=self.weights)

    def right_multiplication(self, section: int, name: str = "") -> SMap:
        """x -> x·m_section, 定义域为 w(x) <= cap - w(m)"""
        M = self.space
        m = self.sections[section]
        w_m = self.weight(0, m)
        if self.cap is None:
            domain, incl = M, SMap.identity(M)
        else:
            domain, incl = sub_object_where(M, lambda p, x: self.weight(p, x) + w_m <= self.cap,
                                            name=f"{M.name}<={self.cap - w_m}")
        comps = tuple(
            tuple(self.mult[p][(x, self.section_at(section, p))] for x in incl.components[p])
            for p in range(self.trunc_level + 1)
        )
        return SMap(domain, M, comps, name=name or f"·{self.section_label(section)}")

    def left_multiplication(self, section: int) -> SMap:
        M = self.space
        m = self.sections[section]
        w_m = self.weight(0, m)
        if self.cap is None:
            domain, incl = M, SMap.identity(M)
        else:
            domain, incl = sub_object_where(M, lambda p, x: self.weight(p, x) + w_m <= self.cap)
        comps = tuple(
            tuple(self.mult[p][(self.section_at(section, p), x)] for x in incl.components[p])
            for p in range(self.trunc_level + 1)
        )
        return SMap(domain, M, comps, name=f"{self.section_label(section)}·")

    # ---------- π_0 ----------
    def components(self):
        return pi0(self.space)

    def component_table(self) -> Dict[Tuple[int, int], int]:
        """π_0 上的乘法 (只含 cap 内的乘积)"""
        comps = self.components()
        reps = [cls[0] for cls in comps.classes]
        table = {}
        for i, a in enumerate(reps):
            for j, b in enumerate(reps):
                if self.within_cap(0, a, b):
                    table[(i, j)] = comps.component_of[self.mult[0][(a, b)]]
        return table

    def is_grouplike(self) -> bool:
        """π_0 是群: 乘法表 (带权时只含 cap 内的乘积) 中每个分支都有双边逆"""
        comps = self.components()
        table = self.component_table()
        e = comps.component_of[self.unit]
        k = len(comps)
        return all(any(table.get((a, b)) == e and table.get((b, a)) == e for b in range(k)) for a in range(k))

    def component_of_vertex(self, v: int) -> int:
        return self.components().component_of[v]

    def component_space(self, component: int) -> TruncatedSSet:
        """π_0 的一个分支作为单纯子集合"""
        comps = self.components()
        M = self.space
        S, _ = sub_object_where(
            M, lambda p, x: comps.component_of[M.vertices(p, x)[0]] == component,
            name=f"{M.name}[{component}]",
        )
        return S

    def __repr__(self) -> str:
        return f"MonoidObject({self.name or '?'}, N={self.trunc_level})"


# ==================== 构造 ====================
def from_category(C: FiniteCategory, N: int, sections: Sequence = ()) -> MonoidObject:
    """单对象有限范畴 (离散幺半群), 单纯方向为常值"""
    if len(C.objects) != 1:
        raise InvalidArgumentError(f"{C.name} has {len(C.objects)} objects; a monoid has one")
    M = discrete(C.morphisms, N, name=C.name)
    mult = tuple(dict(C.compose_table) for _ in range(N + 1))
    weights = tuple(tuple(C.mor_weights) for _ in range(N + 1)) if C.mor_weights else None
    monoid = MonoidObject(
        space=M,
        mult=mult,
        unit=C.identities[0],
        name=C.name,
        weights=weights,
        cap=C.cap,
        sections=tuple(C.morphism_index(s) for s in sections),
    )
    return monoid.validate()


def finite_group(kind: str, n: int, N: int) -> MonoidObject:
    """ℤ/n ('cyclic') 或 Σ_n ('symmetric') 作为离散单纯群, 截面为全部元素"""
    if kind == "cyclic":
        C = cyclic_group(n)
    elif kind == "symmetric":
        C = symmetric_group(n)
    else:
        raise InvalidArgumentError(f"unknown group kind {kind!r}")
    return from_category(C, N, sections=C.morphisms)


def monoid_from_elements(elements: Sequence, table: Sequence[Sequence], N: int, name: str = "",
                         sections: Sequence = ()) -> MonoidObject:
    """由乘法表构造 (结合律在 monoid_from_table 中穷举检查)"""
    C = monoid_from_table(elements, table, name=name)
    return from_category(C, N, sections=sections or C.morphisms)


def naturals(L: int, N: int) -> MonoidObject:
    """有界的 ℕ = {0..L}, 截面 1"""
    return from_category(bounded_naturals(L), N, sections=(1,))


def _direct_sum(family: str, q: int) -> Callable:
    if family == "symmetric":
        return lambda g, h: tuple(g) + tuple(len(g) + t for t in h)

    def block(g, h):
        a, b = len(g), len(h)
        top = tuple(tuple(row) + (0,) * b for row in g)
        bottom = tuple((0,) * a + tuple(row) for row in h)
        return top + bottom

    return block


def _block_group(family: str, n: int, q: int) -> FiniteCategory:
    if family == "symmetric":
        return symmetric_group(n)
    return general_linear_group(n, q)


def block_sum(family: str, W: int, N: int, q: int = 2) -> MonoidObject:
    """∐_{n<=W} B G_n, 乘法为块和 (σ, τ) -> σ ⊕ τ; 权为块的大小, 截面为 1 块的顶点

    单形名为 (n, 神经中的名称).
    """
    if family not in BLOCK_FAMILIES:
        raise InvalidArgumentError(f"unknown block family {family!r}")
    groups = [_block_group(family, n, q) for n in range(W + 1)]
    nerves = [G.nerve(N) for G in groups]
    M, _ = coproduct(nerves, tags=list(range(W + 1)), name=f"∐B{'S' if family == 'symmetric' else 'GL'}<={W}")
    oplus = _direct_sum(family, q)
    mult = []
    for p in range(N + 1):
        table = {}
        for a in range(M.size(p)):
            n, x = M.label(p, a)
            for b in range(M.size(p)):
                m, y = M.label(p, b)
                if n + m > W:
                    continue
                if p == 0:
                    z = "*"
                else:
                    z = tuple(oplus(g, h) for g, h in zip(x, y))
                table[(a, b)] = M.index_of(p, (n + m, z))
        mult.append(table)
    weights = tuple(tuple(M.label(p, a)[0] for a in range(M.size(p))) for p in range(N + 1))
    monoid = MonoidObject(
        space=M,
        mult=tuple(mult),
        unit=M.index_of(0, (0, "*")),
        name=M.name,
        weights=weights,
        cap=W,
        sections=(M.index_of(0, (1, "*")),),
    )
    return monoid.validate()


# ==================== Pontryagin 乘积 ====================
def _shuffles(i: int, j: int):
    """(i, j) 洗牌: μ 为前 i 个位置, ν 为其余; 符号为排列 (μ, ν) 的符号"""
    for mu in itertools.combinations(range(i + j), i):
        nu = tuple(t for t in range(i + j) if t not in mu)
        sign = (-1) ** sum(m - a for a, m in enumerate(mu))
        yield mu, nu, sign


def shuffle_product(M: MonoidObject, i: int, x: int, j: int, y: int) -> Dict[int, int]:
    """非退化单形 x ∈ M_i, y ∈ M_j 的乘积链 Σ ± (s_ν x)·(s_μ y), 丢弃退化项"""
    S = M.space
    out: Dict[int, int] = {}
    for mu, nu, sign in _shuffles(i, j):
        left = S.apply_degeneracies(i, x, tuple(reversed(nu)))
        right = S.apply_degeneracies(j, y, tuple(reversed(mu)))
        z = M.multiply(i + j, left, right)
        if S.is_degenerate(i + j, z):
            continue
        out[z] = out.get(z, 0) + sign
    return out


def pontryagin_product(M: MonoidObject, a: AbelianGroupPresentation, u: Sequence[int],
                       b: AbelianGroupPresentation, v: Sequence[int]) -> Tuple[int, ...]:
    """类 u ∈ H_i, v ∈ H_j (生成元坐标) 的乘积在 H_{i+j} 生成元下的坐标"""
    S = M.space
    i, j = a.degree, b.degree
    basis_i, basis_j = S.nondegenerate(i), S.nondegenerate(j)
    basis = S.nondegenerate(i + j)
    position = {z: r for r, z in enumerate(basis)}
    left = np.zeros(len(basis_i), dtype=object)
    for g, c in zip(a.generators, u):
        left = left + c * np.array(g, dtype=object)
    right = np.zeros(len(basis_j), dtype=object)
    for g, c in zip(b.generators, v):
        right = right + c * np.array(g, dtype=object)
    chain = [0] * len(basis)
    for r, x in enumerate(basis_i):
        if left[r] == 0:
            continue
        for t, y in enumerate(basis_j):
            if right[t] == 0:
                continue
            for z, sign in shuffle_product(M, i, x, j, y).items():
                chain[position[z]] += sign * left[r] * right[t]
    target = homology_groups(S, i + j)[i + j]
    return target.coordinates(chain)


@dataclass(frozen=True)
class GradedRingPresentation:
    """M 的同调及其在生成元上的 Pontryagin 乘积

    products[(i, r, j, t)] 为 H_i 第 r 个生成元与 H_j 第 t 个生成元乘积的坐标; 超出权上限的组合列于 skipped.
    """
    name: str
    groups: Tuple[AbelianGroupPresentation, ...]
    products: Dict[Tuple[int, int, int, int], Tuple[int, ...]]
    unital: bool
    associative: bool
    central: bool
    skipped: Tuple[Tuple[int, int, int, int], ...] = ()
    central_witness: Optional[dict] = None

    def to_dict(self) -> dict:
        payload = {
            "name": self.name,
            "groups": [H.describe() for H in self.groups],
            "products": [[list(k), list(v)] for k, v in sorted(self.products.items())],
            "unital": self.unital,
            "associative": self.associative,
            "central": self.central,
            "skipped": [list(k) for k in self.skipped],
        }
        if self.central_witness is not None:
            payload["central_witness"] = self.central_witness
        return payload


def _basis_vector(H: AbelianGroupPresentation, r: int) -> Tuple[int, ...]:
    return tuple(int(k == r) for k in range(H.num_generators))


def check_centrality(M: MonoidObject, n_max: int) -> Tuple[bool, Optional[dict]]:
    """π_0 的截面类在 h_*(M) 中居中: 左乘与右乘的诱导映射一致"""
    for s in range(len(M.sections)):
        left, right = M.left_multiplication(s), M.right_multiplication(s)
        for k in range(n_max + 1):
            if induced_map(left, k).to_lists() != induced_map(right, k).to_lists():
                witness = {"section": label_to_json(M.section_label(s)), "degree": k}
                logger.info("中心性失败: %s", witness)
                return False, witness
    return True, None


def graded_ring(M: MonoidObject, n_max: int) -> GradedRingPresentation:
    """0..n_max 次同调与生成元乘积; 检查单位律, 结合律 (生成元三元组) 和截面中心性"""
    groups = tuple(homology_groups(M.space, n_max))
    products: Dict[Tuple[int, int, int, int], Tuple[int, ...]] = {}
    skipped = []
    for i, j in itertools.product(range(n_max + 1), repeat=2):
        if i + j > n_max:
            continue
        for r in range(groups[i].num_generators):
            for t in range(groups[j].num_generators):
                key = (i, r, j, t)
                try:
                    products[key] = pontryagin_product(M, groups[i], _basis_vector(groups[i], r),
                                                       groups[j], _basis_vector(groups[j], t))
                except IncompleteAtTruncationError:
                    skipped.append(key)

    unit_class = groups[0].coordinates(
        [int(x == M.unit) for x in M.space.nondegenerate(0)]
    )
    unital = True
    for k in range(n_max + 1):
        for r in range(groups[k].num_generators):
            g = _basis_vector(groups[k], r)
            target = groups[k].reduce(g)
            try:
                if (pontryagin_product(M, groups[0], unit_class, groups[k], g) != target
                        or pontryagin_product(M, groups[k], g, groups[0], unit_class) != target):
                    unital = False
            except IncompleteAtTruncationError:
                continue

    associative = True
    for i, j, k in itertools.product(range(n_max + 1), repeat=3):
        if i + j + k > n_max:
            continue
        for r, t, u in itertools.product(range(groups[i].num_generators), range(groups[j].num_generators),
                                         range(groups[k].num_generators)):
            try:
                ab = pontryagin_product(M, groups[i], _basis_vector(groups[i], r), groups[j], _basis_vector(groups[j], t))
                bc = pontryagin_product(M, groups[j], _basis_vector(groups[j], t), groups[k], _basis_vector(groups[k], u))
                left = pontryagin_product(M, groups[i + j], ab, groups[k], _basis_vector(groups[k], u))
                right = pontryagin_product(M, groups[i], _basis_vector(groups[i], r), groups[j + k], bc)
            except IncompleteAtTruncationError:
                continue
            if left != right:
                associative = False
    central, witness = check_centrality(M, n_max)
    ring = GradedRingPresentation(M.name, groups, products, unital, associative, central,
                                  tuple(skipped), witness)
    logger.debug("分次环 %s: 乘积 %d 个, 跳过 %d 个", M.name, len(products), len(skipped))
    return ring
