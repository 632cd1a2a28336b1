"""
内部范畴模块
截断单纯集合中的范畴对象, 神经与分类空间, 左作用, 作用范畴 X_C, 纤维 X(c), 作用映射 φ_*,
以及"以 λ 等价作用"的判定
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Type

from utils.bisimplicial import TruncatedBiSSet, diagonal
from utils.categories import FiniteCategory
from utils.errors import (
    ContractViolationError,
    CorruptInputError,
    InvalidArgumentError,
    PreconditionUnverifiedError,
    TopologyError,
)
from utils.fibration import FibrationVerdict, check_fibration
from utils.helpers import label_to_json
from utils.homology import Answer, EquivalenceVerdict, LocalizationKind, LocalizationSpec, judge_map
from utils.sset import (
    SMap,
    TruncatedSSet,
    _require_same_truncation,
    discrete,
    pullback,
    sub_object_where,
    yoneda_map,
)

logger = logging.getLogger(__name__)

Weights = Tuple[Tuple[int, ...], ...]
CompositionTable = Tuple[Dict[Tuple[int, int], int], ...]


def _constant_weights(values: Sequence[int], N: int) -> Weights:
    return tuple(tuple(values) for _ in range(N + 1))


# ==================== 范畴对象 ====================
@dataclass(frozen=True, eq=False)
class InternalCategory:
    """截断单纯集合中的范畴对象

    composition[p][(g, f)] = g∘f, g, f 为 mor 的 p 单形且 s(g) = t(f).
    带权时只需要总权 <= cap 的复合.
    """
    ob: TruncatedSSet
    mor: TruncatedSSet
    s: SMap
    t: SMap
    e: SMap
    composition: CompositionTable
    name: str = ""
    ob_weights: Optional[Weights] = None
    mor_weights: Optional[Weights] = None
    cap: Optional[int] = None

    @property
    def trunc_level(self) -> int:
        return self.ob.trunc_level

    def ob_weight(self, p: int, c: int) -> int:
        return self.ob_weights[p][c] if self.ob_weights else 0

    def mor_weight(self, p: int, f: int) -> int:
        return self.mor_weights[p][f] if self.mor_weights else 0

    def within_cap(self, p: int, c: int, chain: Sequence[int]) -> bool:
        if self.cap is None:
            return True
        return self.ob_weight(p, c) + sum(self.mor_weight(p, f) for f in chain) <= self.cap

    def compose(self, p: int, g: int, f: int) -> int:
        try:
            return self.composition[p][(g, f)]
        except KeyError:
            raise InvalidArgumentError(
                f"composite at level {p} of {self.mor.label(p, g)!r} and {self.mor.label(p, f)!r} is not defined"
            )

    def morphisms_from(self, p: int, c: int) -> List[int]:
        return self._outgoing[p].get(c, [])

    @property
    def _outgoing(self) -> List[Dict[int, List[int]]]:
        cached = self.__dict__.get("_outgoing_cache")
        if cached is None:
            cached = []
            for p in range(self.trunc_level + 1):
                table: Dict[int, List[int]] = {}
                for f, c in enumerate(self.s.components[p]):
                    table.setdefault(c, []).append(f)
                cached.append(table)
            object.__setattr__(self, "_outgoing_cache", cached)
        return cached

    # ---------- 校验 ----------
    def validate(self, error: Type[TopologyError] = CorruptInputError) -> "InternalCategory":
        """s∘e = t∘e = id, 单位律, 结合律, 复合与单纯算子交换"""
        N = self.trunc_level
        _require_same_truncation(self.ob, self.mor)
        for smap in (self.s, self.t, self.e):
            smap.validate()
        for p in range(N + 1):
            for c in range(self.ob.size(p)):
                u = self.e.components[p][c]
                if self.s.components[p][u] != c or self.t.components[p][u] != c:
                    raise error("unit does not have the right endpoints",
                                witness={"level": p, "object": label_to_json(self.ob.label(p, c))})
            table = self.composition[p]
            s, t = self.s.components[p], self.t.components[p]
            for (g, f), h in table.items():
                if s[g] != t[f] or s[h] != s[f] or t[h] != t[g]:
                    raise error("composite has the wrong endpoints", witness=self._pair_witness(p, g, f))
                if p >= 1:
                    for i in range(p + 1):
                        d = self.mor.faces[p][i]
                        if self.composition[p - 1].get((d[g], d[f])) != d[h]:
                            raise error("composition does not commute with faces", witness=self._pair_witness(p, g, f))
                if p < N:
                    for i in range(p + 1):
                        sd = self.mor.degeneracies[p][i]
                        if self.composition[p + 1].get((sd[g], sd[f])) != sd[h]:
                            raise error("composition does not commute with degeneracies",
                                        witness=self._pair_witness(p, g, f))
            for f in range(self.mor.size(p)):
                if not self.within_cap(p, s[f], (f,)):
                    continue
                left, right = self.e.components[p][t[f]], self.e.components[p][s[f]]
                if table.get((left, f)) != f or table.get((f, right)) != f:
                    raise error("unit law fails", witness={"level": p, "morphism": label_to_json(self.mor.label(p, f))})
                for g in self.morphisms_from(p, t[f]):
                    if not self.within_cap(p, s[f], (f, g)):
                        continue
                    gf = table.get((g, f))
                    if gf is None:
                        raise error("composite within the weight cap is missing", witness=self._pair_witness(p, g, f))
                    for h in self.morphisms_from(p, t[g]):
                        if not self.within_cap(p, s[f], (f, g, h)):
                            continue
                        if table.get((h, gf)) != table.get((table.get((h, g)), f)):
                            raise error("composition is not associative", witness={
                                "level": p,
                                "morphisms": [label_to_json(self.mor.label(p, x)) for x in (h, g, f)],
                            })
        return self

    def _pair_witness(self, p: int, g: int, f: int) -> dict:
        return {"level": p, "pair": [label_to_json(self.mor.label(p, g)), label_to_json(self.mor.label(p, f))]}

    # ---------- 神经 ----------
    def strings(self, p: int, q: int) -> List[Tuple[int, ...]]:
        """第 p 层中长度 q 的可复合串; q = 0 时为 (c,)"""
        if q == 0:
            return [(c,) for c in range(self.ob.size(p)) if self.within_cap(p, c, ())]
        s = self.s.components[p]
        level = [(f,) for f in range(self.mor.size(p)) if self.within_cap(p, s[f], (f,))]
        for _ in range(q - 1):
            level = [
                chain + (g,)
                for chain in level
                for g in self.morphisms_from(p, self.t.components[p][chain[-1]])
                if self.within_cap(p, s[chain[0]], chain + (g,))
            ]
        return level

    def nerve(self) -> TruncatedBiSSet:
        """N_{p,q}: 第 p 层的 q 串; 水平算子作用于每个分量, 竖直算子为复合/插入单位"""
        N = self.trunc_level
        cells = [[self.strings(p, q) for q in range(N + 1)] for p in range(N + 1)]
        index = [[{chain: i for i, chain in enumerate(cell)} for cell in row] for row in cells]

        def at(p: int, q: int, chain: Tuple[int, ...]) -> int:
            try:
                return index[p][q][chain]
            except KeyError:
                raise CorruptInputError("nerve operator leaves the weight cap", witness={"bidegree": [p, q]})

        def horizontal(p: int, q: int, table_ob, table_mor, dp: int):
            return tuple(
                tuple(
                    at(p + dp, q, (tob[chain[0]],) if q == 0 else tuple(tmor[f] for f in chain))
                    for chain in cells[p][q]
                )
                for tob, tmor in zip(table_ob, table_mor)
            )

        def vertical_face(p: int, q: int, j: int, chain: Tuple[int, ...]) -> Tuple[int, ...]:
            if q == 1:
                side = self.t if j == 0 else self.s
                return (side.components[p][chain[0]],)
            if j == 0:
                return chain[1:]
            if j == q:
                return chain[:-1]
            return chain[:j - 1] + (self.compose(p, chain[j], chain[j - 1]),) + chain[j + 1:]

        def vertical_degeneracy(p: int, q: int, j: int, chain: Tuple[int, ...]) -> Tuple[int, ...]:
            unit = self.e.components[p]
            if q == 0:
                return (unit[chain[0]],)
            c = self.s.components[p][chain[0]] if j == 0 else self.t.components[p][chain[j - 1]]
            return chain[:j] + (unit[c],) + chain[j:]

        hf, hs, vf, vs, labels = [], [], [], [], []
        for p in range(N + 1):
            hf_row, hs_row, vf_row, vs_row, lab_row = [], [], [], [], []
            for q in range(N + 1):
                hf_row.append(horizontal(p, q, self.ob.faces[p], self.mor.faces[p], -1) if p >= 1 else ())
                hs_row.append(horizontal(p, q, self.ob.degeneracies[p], self.mor.degeneracies[p], 1) if p < N else ())
                vf_row.append(tuple(
                    tuple(at(p, q - 1, vertical_face(p, q, j, chain)) for chain in cells[p][q])
                    for j in range(q + 1)
                ) if q >= 1 else ())
                vs_row.append(tuple(
                    tuple(at(p, q + 1, vertical_degeneracy(p, q, j, chain)) for chain in cells[p][q])
                    for j in range(q + 1)
                ) if q < N else ())
                lab_row.append(tuple(
                    self.ob.label(p, chain[0]) if q == 0 else tuple(self.mor.label(p, f) for f in chain)
                    for chain in cells[p][q]
                ))
            hf.append(tuple(hf_row))
            hs.append(tuple(hs_row))
            vf.append(tuple(vf_row))
            vs.append(tuple(vs_row))
            labels.append(tuple(lab_row))
        W = TruncatedBiSSet(N, tuple(labels), tuple(hf), tuple(hs), tuple(vf), tuple(vs), name=f"N({self.name})")
        logger.debug("神经 %s: 双次数单形数 %s", self.name, W.counts())
        return W

    def classifying_space(self) -> TruncatedSSet:
        cached = self.__dict__.get("_classifying_space")
        if cached is None:
            B = diagonal(self.nerve())
            cached = B.relabel(B.simplices, name=f"B({self.name})")
            object.__setattr__(self, "_classifying_space", cached)
        return cached

    def is_discrete(self) -> bool:
        """ob 与 mor 都是常单纯集合 (所有单纯算子为恒等)"""
        return all(_is_constant(X) for X in (self.ob, self.mor))

    def as_finite_category(self) -> FiniteCategory:
        """离散内部范畴还原为有限范畴 (0 层数据)"""
        if not self.is_discrete():
            raise InvalidArgumentError(f"{self.name} is not constant in the simplicial direction")
        table = {(g, f): h for (g, f), h in self.composition[0].items()}
        return FiniteCategory(
            objects=self.ob.simplices[0],
            morphisms=self.mor.simplices[0],
            source=self.s.components[0],
            target=self.t.components[0],
            identities=self.e.components[0],
            compose_table=table,
            name=self.name,
            ob_weights=self.ob_weights[0] if self.ob_weights else None,
            mor_weights=self.mor_weights[0] if self.mor_weights else None,
            cap=self.cap,
        ).validate()

    def __repr__(self) -> str:
        return f"InternalCategory({self.name or '?'}, N={self.trunc_level})"


def _is_constant(X: TruncatedSSet) -> bool:
    N = X.trunc_level
    if len(set(X.counts())) > 1:
        return False
    ident = tuple(range(X.size(0)))
    return (all(t == ident for n in range(1, N + 1) for t in X.faces[n])
            and all(t == ident for n in range(N) for t in X.degeneracies[n]))


def discrete_internal(C: FiniteCategory, N: int) -> InternalCategory:
    """有限范畴作为单纯方向为常值的范畴对象; 其分类空间与 C.nerve(N) 逐名相同"""
    ob = discrete(C.objects, N, name=f"ob({C.name})")
    mor = discrete(C.morphisms, N, name=f"mor({C.name})")
    const = lambda values: tuple(tuple(values) for _ in range(N + 1))
    cat = InternalCategory(
        ob=ob,
        mor=mor,
        s=SMap(mor, ob, const(C.source), name="s"),
        t=SMap(mor, ob, const(C.target), name="t"),
        e=SMap(ob, mor, const(C.identities), name="e"),
        composition=tuple(dict(C.compose_table) for _ in range(N + 1)),
        name=C.name,
        ob_weights=_constant_weights(C.ob_weights, N) if C.ob_weights else None,
        mor_weights=_constant_weights(C.mor_weights, N) if C.mor_weights else None,
        cap=C.cap,
    )
    return cat.validate()


def classifying_space(C: InternalCategory) -> TruncatedSSet:
    """B C = δ* N C"""
    return C.classifying_space()


# ==================== 左作用 ====================
@dataclass(frozen=True, eq=False)
class InternalAction:
    """C 在 X 上的左作用: π: X -> ob(C), μ: s*(X) -> X

    action[p][(φ, x)] = μ(φ, x), 要求 s(φ) = π(x) 且 w(x) + w(φ) <= cap.
    window = (lo, hi) 时只在权窗口内判定作用映射 (伸缩塔的稳定部分).
    """
    base: InternalCategory
    total: TruncatedSSet
    proj: SMap
    action: CompositionTable
    name: str = ""
    weights: Optional[Weights] = None
    window: Optional[Tuple[int, int]] = None

    @property
    def trunc_level(self) -> int:
        return self.total.trunc_level

    def weight(self, p: int, x: int) -> int:
        return self.weights[p][x] if self.weights else 0

    def defined(self, p: int, phi: int, x: int) -> bool:
        cap = self.base.cap
        return cap is None or self.weight(p, x) + self.base.mor_weight(p, phi) <= cap

    def act(self, p: int, phi: int, x: int) -> int:
        try:
            return self.action[p][(phi, x)]
        except KeyError:
            raise InvalidArgumentError(
                f"action of {self.base.mor.label(p, phi)!r} on {self.total.label(p, x)!r} is not defined"
            )

    def validate(self, error: Type[TopologyError] = CorruptInputError) -> "InternalAction":
        """π∘μ = t∘pr, 单位作用为恒等, 作用结合律, μ 与单纯算子交换"""
        C, X = self.base, self.total
        N = self.trunc_level
        _require_same_truncation(X, C.ob)
        self.proj.validate()
        for p in range(N + 1):
            pi = self.proj.components[p]
            table = self.action[p]
            for x in range(X.size(p)):
                unit = C.e.components[p][pi[x]]
                if table.get((unit, x)) != x:
                    raise error("unit does not act as the identity",
                                witness={"level": p, "simplex": label_to_json(X.label(p, x))})
                for phi in C.morphisms_from(p, pi[x]):
                    if not self.defined(p, phi, x):
                        continue
                    y = table.get((phi, x))
                    if y is None:
                        raise error("action within the weight cap is missing", witness=self._witness(p, phi, x))
                    if pi[y] != C.t.components[p][phi]:
                        raise error("π∘μ differs from t", witness=self._witness(p, phi, x))
                    for psi in C.morphisms_from(p, pi[y]):
                        if not self.defined(p, psi, y) or (psi, phi) not in C.composition[p]:
                            continue
                        if table.get((psi, y)) != table.get((C.compose(p, psi, phi), x)):
                            raise error("action is not associative", witness=self._witness(p, phi, x))
                    if p >= 1:
                        for i in range(p + 1):
                            d_phi, d_x = C.mor.faces[p][i][phi], X.faces[p][i][x]
                            if self.action[p - 1].get((d_phi, d_x)) != X.faces[p][i][y]:
                                raise error("action does not commute with faces", witness=self._witness(p, phi, x))
                    if p < N:
                        for i in range(p + 1):
                            s_phi, s_x = C.mor.degeneracies[p][i][phi], X.degeneracies[p][i][x]
                            if self.action[p + 1].get((s_phi, s_x)) != X.degeneracies[p][i][y]:
                                raise error("action does not commute with degeneracies",
                                            witness=self._witness(p, phi, x))
        return self

    def _witness(self, p: int, phi: int, x: int) -> dict:
        return {"level": p, "morphism": label_to_json(self.base.mor.label(p, phi)),
                "simplex": label_to_json(self.total.label(p, x))}

    def __repr__(self) -> str:
        return f"InternalAction({self.name or '?'} on {self.total.name})"


def build_action(base: InternalCategory, total: TruncatedSSet, proj: SMap,
                 act: Callable[[int, int, int], int], name: str = "",
                 weights: Optional[Weights] = None, window: Optional[Tuple[int, int]] = None,
                 validate: bool = True) -> InternalAction:
    """由 act(p, φ, x) -> μ(φ, x) 的编号函数生成作用表"""
    N = total.trunc_level
    tables = []
    for p in range(N + 1):
        table = {}
        for x, c in enumerate(proj.components[p]):
            for phi in base.morphisms_from(p, c):
                if base.cap is not None and (weights[p][x] if weights else 0) + base.mor_weight(p, phi) > base.cap:
                    continue
                table[(phi, x)] = act(p, phi, x)
        tables.append(table)
    A = InternalAction(base, total, proj, tuple(tables), name=name, weights=weights, window=window)
    return A.validate() if validate else A


def object_action(C: InternalCategory) -> InternalAction:
    """C 在 ob(C) 上的作用 μ(φ, s φ) = t φ; 其作用范畴与 C 同构"""
    return build_action(
        C, C.ob, SMap.identity(C.ob),
        lambda p, phi, x: C.t.components[p][phi],
        name=f"{C.name} on ob",
        weights=C.ob_weights,
    )


def set_action(C: FiniteCategory, fibers: Dict, act: Callable, N: int, name: str = "") -> InternalAction:
    """有限范畴在离散集合族上的作用: fibers[对象名] 为元素列表, act(态射名, 元素) -> 元素

    全空间的单形名为 (对象名, 元素).
    """
    base = discrete_internal(C, N)
    labels = [(o, x) for o in C.objects for x in fibers.get(o, ())]
    X = discrete(labels, N, name=name or "X")
    index = {lab: i for i, lab in enumerate(labels)}
    pi = tuple(C.object_index(o) for o, _ in labels)
    proj = SMap(X, base.ob, tuple(pi for _ in range(N + 1)), name="π")

    def step(p: int, phi: int, x: int) -> int:
        o, elem = labels[x]
        target = C.objects[C.target[phi]]
        return index[(target, act(C.morphisms[phi], elem))]

    return build_action(base, X, proj, step, name=name or f"{C.name}-set")


# ==================== 作用范畴 ====================
def action_category(A: InternalAction) -> InternalCategory:
    """X_C: ob = X, mor = s*(X) (名称为 (φ, x)), 源为投影, 靶为 μ, 复合继承自 C"""
    C, X = A.base, A.total
    N = A.trunc_level
    pb = pullback(C.s, A.proj)
    if C.cap is not None:
        mor, incl = sub_object_where(pb.obj, lambda p, z: A.defined(p, pb.first.components[p][z], pb.second.components[p][z]),
                                     name=f"s*({X.name})")
        phi_of = tuple(tuple(pb.first.components[p][z] for z in incl.components[p]) for p in range(N + 1))
        x_of = tuple(tuple(pb.second.components[p][z] for z in incl.components[p]) for p in range(N + 1))
    else:
        mor = pb.obj
        phi_of, x_of = pb.first.components, pb.second.components
    pair_index = [{(phi_of[p][z], x_of[p][z]): z for z in range(mor.size(p))} for p in range(N + 1)]

    s_comp = tuple(tuple(x_of[p]) for p in range(N + 1))
    t_comp = tuple(tuple(A.act(p, phi_of[p][z], x_of[p][z]) for z in range(mor.size(p))) for p in range(N + 1))
    e_comp = tuple(
        tuple(pair_index[p][(C.e.components[p][A.proj.components[p][x]], x)] for x in range(X.size(p)))
        for p in range(N + 1)
    )
    composition = []
    for p in range(N + 1):
        table = {}
        by_source: Dict[int, List[int]] = {}
        for z in range(mor.size(p)):
            by_source.setdefault(s_comp[p][z], []).append(z)
        for z in range(mor.size(p)):
            y = t_comp[p][z]
            for w in by_source.get(y, ()):
                key = (C.composition[p].get((phi_of[p][w], phi_of[p][z])), x_of[p][z])
                if key in pair_index[p]:
                    table[(w, z)] = pair_index[p][key]
        composition.append(table)
    XC = InternalCategory(
        ob=X,
        mor=mor,
        s=SMap(mor, X, s_comp, name="s"),
        t=SMap(mor, X, t_comp, name="t"),
        e=SMap(X, mor, e_comp, name="e"),
        composition=tuple(composition),
        name=f"{X.name}_{C.name}",
        ob_weights=A.weights,
        mor_weights=tuple(tuple(C.mor_weight(p, phi) for phi in phi_of[p]) for p in range(N + 1)) if C.cap is not None else None,
        cap=C.cap,
    )
    return XC.validate(error=ContractViolationError)


def object_inclusion(C: InternalCategory, name: str = "") -> SMap:
    """ob -> B C: n 单形 c 映到 c 上长度 n 的单位串 (竖直退化)"""
    BC = C.classifying_space()

    def image(n: int, label):
        if n == 0:
            return label
        unit = C.e.components[n][C.ob.index_of(n, label)]
        return tuple(C.mor.label(n, unit) for _ in range(n))

    return SMap.from_function(C.ob, BC, image, name=name or f"ob->B({C.name})")


def vertex_inclusion(A: InternalAction, XC: Optional[InternalCategory] = None) -> SMap:
    """X -> B X_C"""
    return object_inclusion(XC or action_category(A), name="X->BX_C")


def projection_map(A: InternalAction, XC: Optional[InternalCategory] = None) -> SMap:
    """B X_C -> B C, 由 x -> π(x), (φ, x) -> φ 诱导"""
    XC = XC or action_category(A)
    C = A.base
    BX, BC = XC.classifying_space(), C.classifying_space()

    def image(n: int, label):
        if n == 0:
            return C.ob.label(0, A.proj.components[0][A.total.index_of(0, label)])
        return tuple(phi for phi, _ in label)

    return SMap.from_function(BX, BC, image, name="BX_C->BC")


# ==================== 纤维与作用映射 ====================
@dataclass(frozen=True, eq=False)
class FiberResult:
    """X(c) = Δ[n] ×_ob X, 以及到 X 和 B X_C 的映射"""
    obj: TruncatedSSet
    to_simplex: SMap
    to_total: SMap
    comparison: Optional[SMap] = None


def fiber(A: InternalAction, n: int, c: int, with_comparison: bool = False) -> FiberResult:
    """π 沿 Δ[n] -> ob(C) 的拉回, 单形名为 (α, x), α 为单调序列 [m] -> [n]"""
    C = A.base
    if not 0 <= n <= A.trunc_level:
        raise InvalidArgumentError(f"simplex level {n} outside 0..{A.trunc_level}")
    yon = yoneda_map(C.ob, n, c)
    pb = pullback(yon, A.proj)
    P = pb.obj.relabel(pb.obj.simplices, name=f"{A.total.name}({C.ob.label(n, c)})")
    to_simplex = SMap(P, yon.source, pb.first.components, name="X(c)->Δ[n]")
    to_total = SMap(P, A.total, pb.second.components, name="X(c)->X")
    comparison = vertex_inclusion(A).compose(to_total) if with_comparison else None
    return FiberResult(P, to_simplex, to_total, comparison)


def _window_bounds(A: InternalAction, w_phi: int) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    cap = A.base.cap
    if A.window is not None:
        lo, hi = A.window
        return (lo, hi - w_phi), (lo + w_phi, hi)
    if cap is None:
        return (0, 10 ** 9), (0, 10 ** 9)
    return (0, cap - w_phi), (0, cap)


def action_map(A: InternalAction, p: int, phi: int) -> SMap:
    """φ_*: X(s φ) -> X(t φ), (α, x) -> (α, μ(α*φ, x)); 带权时定义域截到 cap - w(φ) (或权窗口)"""
    C = A.base
    c, d = C.s.components[p][phi], C.t.components[p][phi]
    source, target = fiber(A, p, c).obj, fiber(A, p, d).obj
    w_phi = C.mor_weight(p, phi)
    (src_lo, src_hi), (tgt_lo, tgt_hi) = _window_bounds(A, w_phi)
    X = A.total

    def weight_of(F: TruncatedSSet, m: int, z: int) -> int:
        return A.weight(m, X.index_of(m, F.label(m, z)[1]))

    if A.weights is not None:
        source, _ = sub_object_where(source, lambda m, z: src_lo <= weight_of(source, m, z) <= src_hi,
                                     name=source.name)
        target, _ = sub_object_where(target, lambda m, z: tgt_lo <= weight_of(target, m, z) <= tgt_hi,
                                     name=target.name)

    def image(m: int, label):
        alpha, x_label = label
        x = X.index_of(m, x_label)
        restricted = C.mor.restrict(p, phi, alpha)
        return alpha, X.label(m, A.act(m, restricted, x))

    return SMap.from_function(source, target, image, name=f"({C.mor.label(p, phi)})_*")


# ==================== 以 λ 等价作用 ====================
@dataclass(frozen=True)
class ActsByVerdict:
    """acts_by_check 的结果; NO 时 witness 给出失败的态射单形, levels 为实际检查的态射层范围"""
    answer: Answer
    range: int
    levels: Tuple[int, int]
    vertices_only: bool
    checked: int
    witness: Optional[dict] = None
    fibration: Optional[FibrationVerdict] = None
    vacuous: bool = False

    @property
    def yes(self) -> bool:
        return self.answer is Answer.YES

    def to_dict(self) -> dict:
        payload = {
            "answer": self.answer.value,
            "range": self.range,
            "levels": list(self.levels),
            "vertices_only": self.vertices_only,
            "checked": self.checked,
            "vacuous": self.vacuous,
        }
        if self.witness is not None:
            payload["witness"] = self.witness
        if self.fibration is not None:
            payload["fibration"] = self.fibration.result.value
        return payload


def fibration_range(A: InternalAction, spec: LocalizationSpec) -> int:
    return min(spec.range + 1, A.trunc_level - 1)


def acts_by_check(A: InternalAction, spec: LocalizationSpec, vertices_only: bool = False,
                  fibration: Optional[FibrationVerdict] = None, all_levels: bool = False) -> ActsByVerdict:
    """逐个态射单形 φ 判定 φ_* 是否为 spec 等价

    vertices_only 只检查 0 层态射, 前提是 π 通过 Kan 纤维化检验, 否则拒绝.
    基范畴在单纯方向为常值时默认也只检查 0 层: 高层态射都是顶点的退化,
    X(c) 为 Δ[p] × X(c_0), φ_* 为恒等与顶点情形的积, 判定结果与 0 层相同.
    all_levels=True 时不走这条捷径, 检查 0..N 全部层; 结果的 levels 记录实际范围.
    """
    if spec.name is not LocalizationKind.H_RANGE:
        raise InvalidArgumentError("internal actions are judged with h-range; use PresheafAction for site specs")
    N = A.trunc_level
    if vertices_only:
        fibration = fibration or check_fibration(A.proj, "kan", fibration_range(A, spec))
        if not fibration.yes:
            logger.warning("拒绝仅检查顶点: π 未通过纤维化检验 (%s)", fibration.result.value)
            raise PreconditionUnverifiedError(
                "the vertex-only shortcut needs π to be a fibration through the range",
                witness=fibration.witness,
            )
    top = 0 if vertices_only or (A.base.is_discrete() and not all_levels) else N
    checked = 0
    C = A.base
    for p in range(top + 1):
        for phi in range(C.mor.size(p)):
            verdict = judge_map(action_map(A, p, phi), spec.range, context=f"{C.mor.label(p, phi)}")
            checked += 1
            if verdict.answer is Answer.INCOMPLETE:
                return ActsByVerdict(Answer.INCOMPLETE, spec.range, (0, top), vertices_only, checked,
                                     witness={"reason": verdict.detail}, fibration=fibration)
            if not verdict.yes:
                witness = {
                    "level": p,
                    "morphism": label_to_json(C.mor.label(p, phi)),
                    "failing_degree": verdict.failing_degree,
                    "detail": verdict.detail,
                }
                logger.info("作用检验失败: %s", witness)
                return ActsByVerdict(Answer.NO, spec.range, (0, top), vertices_only, checked,
                                     witness=witness, fibration=fibration)
    return ActsByVerdict(Answer.YES, spec.range, (0, top), vertices_only, checked, fibration=fibration)


# ==================== 稳定等价 ====================
def mu_bar(A: InternalAction) -> Tuple[SMap, SMap, SMap]:
    """μ̄ = (pr_1, μ): s*(X) -> t*(X) 以及两者到 mor(C) 的投影"""
    C, X = A.base, A.total
    N = A.trunc_level
    XC = action_category(A)
    sX = XC.mor
    tpb = pullback(C.t, A.proj)
    tX = tpb.obj
    index = [{lab: i for i, lab in enumerate(tX.simplices[p])} for p in range(N + 1)]
    comps = []
    to_mor = []
    for p in range(N + 1):
        row, mrow = [], []
        for z in range(sX.size(p)):
            phi_label, x_label = sX.label(p, z)
            phi = C.mor.index_of(p, phi_label)
            y = XC.t.components[p][z]
            row.append(index[p][(phi_label, X.label(p, y))])
            mrow.append(phi)
        comps.append(tuple(row))
        to_mor.append(tuple(mrow))
    mu = SMap(sX, tX, tuple(comps), name="μ̄")
    return mu, SMap(sX, C.mor, tuple(to_mor), name="s*X->mor"), SMap(tX, C.mor, tpb.first.components, name="t*X->mor")


@dataclass(frozen=True)
class StableVerdict:
    """有限测试族上的稳定等价证书"""
    answer: Answer
    vacuous: bool
    verdicts: Tuple[EquivalenceVerdict, ...]
    witness: Optional[dict] = None

    @property
    def yes(self) -> bool:
        return self.answer is Answer.YES

    def to_dict(self) -> dict:
        payload = {"answer": self.answer.value, "vacuous": self.vacuous,
                   "tests": [v.to_dict() for v in self.verdicts]}
        if self.witness is not None:
            payload["witness"] = self.witness
        return payload


def stable_equiv_check(A: InternalAction, spec: LocalizationSpec, test_maps: Sequence[SMap]) -> StableVerdict:
    """把 μ̄ 沿每个测试映射 T -> mor(C) 拉回并判定"""
    if not test_maps:
        return StableVerdict(Answer.YES, True, ())
    mu, s_leg, t_leg = mu_bar(A)
    verdicts = []
    for i, a in enumerate(test_maps):
        left = pullback(a, s_leg)
        right = pullback(a, t_leg)
        pulled = right.pair(left.first, mu.compose(left.second))
        pulled = SMap(pulled.source, pulled.target, pulled.components, name=f"μ̄|{a.name or i}")
        verdict = judge_map(pulled, spec.range, context=a.name or f"test {i}")
        verdicts.append(verdict)
        if verdict.answer is not Answer.YES:
            witness = {"test": a.name or i, "failing_degree": verdict.failing_degree, "detail": verdict.detail}
            return StableVerdict(verdict.answer, False, tuple(verdicts), witness)
    return StableVerdict(Answer.YES, False, tuple(verdicts))


def vertex_test_maps(A: InternalAction) -> List[SMap]:
    """全部 0 层态射 Δ[0] -> mor(C)"""
    C = A.base
    maps = []
    for phi in range(C.mor.size(0)):
        y = yoneda_map(C.mor, 0, phi)
        maps.append(SMap(y.source, y.target, y.components, name=str(C.mor.label(0, phi))))
    return maps
