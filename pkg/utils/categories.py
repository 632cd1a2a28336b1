"""
有限范畴模块
有限范畴与函子, 经典神经, 逗号范畴和常用构造 (循环群, 对称群, 一般线性群, 偏序集, 带权的有界 ℕ/ℤ)
"""
import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from utils.errors import CorruptInputError, InvalidArgumentError
from utils.helpers import fingerprint_of, label_to_json
from utils.sset import SMap, TruncatedSSet, from_operators

logger = logging.getLogger(__name__)

Label = Hashable


@dataclass(frozen=True, eq=False)
class FiniteCategory:
    """有限范畴

    morphisms 为态射名称; source/target 为对象编号; compose_table[(g, f)] = g∘f (先 f 后 g).
    带权时 (ob_weights, mor_weights, cap) 只保留总权不超过 cap 的可复合串.
    """
    objects: Tuple[Label, ...]
    morphisms: Tuple[Label, ...]
    source: Tuple[int, ...]
    target: Tuple[int, ...]
    identities: Tuple[int, ...]
    compose_table: Dict[Tuple[int, int], int]
    name: str = ""
    ob_weights: Optional[Tuple[int, ...]] = None
    mor_weights: Optional[Tuple[int, ...]] = None
    cap: Optional[int] = None

    # ---------- 基本查询 ----------
    @property
    def weighted(self) -> bool:
        return self.cap is not None

    def ob_weight(self, c: int) -> int:
        return self.ob_weights[c] if self.ob_weights else 0

    def mor_weight(self, f: int) -> int:
        return self.mor_weights[f] if self.mor_weights else 0

    def object_index(self, label: Label) -> int:
        try:
            return self._object_index[label]
        except KeyError:
            raise InvalidArgumentError(f"no object {label!r} in {self.name or 'category'}")

    def morphism_index(self, label: Label) -> int:
        try:
            return self._morphism_index[label]
        except KeyError:
            raise InvalidArgumentError(f"no morphism {label!r} in {self.name or 'category'}")

    @cached_property
    def _object_index(self) -> Dict[Label, int]:
        return {lab: i for i, lab in enumerate(self.objects)}

    @cached_property
    def _morphism_index(self) -> Dict[Label, int]:
        return {lab: i for i, lab in enumerate(self.morphisms)}

    def compose(self, g: int, f: int) -> int:
        """g∘f"""
        try:
            return self.compose_table[(g, f)]
        except KeyError:
            raise InvalidArgumentError(
                f"composite {self.morphisms[g]!r}∘{self.morphisms[f]!r} is not defined",
            )

    def hom(self, a: int, b: int) -> List[int]:
        return self._hom.get((a, b), [])

    @cached_property
    def _hom(self) -> Dict[Tuple[int, int], List[int]]:
        table: Dict[Tuple[int, int], List[int]] = {}
        for f in range(len(self.morphisms)):
            table.setdefault((self.source[f], self.target[f]), []).append(f)
        return table

    def morphisms_into(self, c: int) -> List[int]:
        return [f for f in range(len(self.morphisms)) if self.target[f] == c]

    def is_identity(self, f: int) -> bool:
        return self.identities[self.source[f]] == f

    # ---------- 校验 ----------
    def validate(self) -> "FiniteCategory":
        """单位律, 结合律, 复合的源/靶; 带权时还检查权的公理"""
        n_mor = len(self.morphisms)
        if len(set(self.objects)) != len(self.objects) or len(set(self.morphisms)) != n_mor:
            raise CorruptInputError("duplicate object or morphism names")
        for c, e in enumerate(self.identities):
            if self.source[e] != c or self.target[e] != c:
                raise CorruptInputError("identity has the wrong endpoints", witness={"object": label_to_json(self.objects[c])})
            if self.mor_weight(e) != 0:
                raise CorruptInputError("identity morphisms must have weight 0")
        for f in range(n_mor):
            if self.ob_weight(self.target[f]) > self.ob_weight(self.source[f]) + self.mor_weight(f):
                raise CorruptInputError("target weight exceeds source weight plus morphism weight",
                                        witness={"morphism": label_to_json(self.morphisms[f])})
            for side, e in (("left", self.identities[self.target[f]]), ("right", self.identities[self.source[f]])):
                pair = (e, f) if side == "left" else (f, e)
                if self.compose_table.get(pair) != f:
                    raise CorruptInputError(f"{side} unit law fails", witness={"morphism": label_to_json(self.morphisms[f])})
        for (g, f), h in self.compose_table.items():
            if self.source[g] != self.target[f]:
                raise CorruptInputError("composite of non-composable morphisms in the table")
            if self.source[h] != self.source[f] or self.target[h] != self.target[g]:
                raise CorruptInputError("composite has the wrong endpoints",
                                        witness={"pair": [label_to_json(self.morphisms[g]), label_to_json(self.morphisms[f])]})
            if self.mor_weight(h) > self.mor_weight(g) + self.mor_weight(f):
                raise CorruptInputError("composition is not weight subadditive")
        for f in range(n_mor):
            for g in self.hom_from(self.target[f]):
                if not self._within_cap(self.source[f], (f, g)):
                    continue
                for h in self.hom_from(self.target[g]):
                    if not self._within_cap(self.source[f], (f, g, h)):
                        continue
                    left = self.compose(h, self.compose(g, f))
                    right = self.compose(self.compose(h, g), f)
                    if left != right:
                        raise CorruptInputError(
                            "composition is not associative",
                            witness=[label_to_json(self.morphisms[x]) for x in (h, g, f)],
                        )
        return self

    def hom_from(self, a: int) -> List[int]:
        return self._hom_from.get(a, [])

    @cached_property
    def _hom_from(self) -> Dict[int, List[int]]:
        table: Dict[int, List[int]] = {}
        for f in range(len(self.morphisms)):
            table.setdefault(self.source[f], []).append(f)
        return table

    def _within_cap(self, start: int, string: Sequence[int]) -> bool:
        if self.cap is None:
            return True
        return self.ob_weight(start) + sum(self.mor_weight(f) for f in string) <= self.cap

    # ---------- 群胚 ----------
    def inverse(self, f: int) -> Optional[int]:
        for g in self.hom(self.target[f], self.source[f]):
            if (self.compose_table.get((g, f)) == self.identities[self.source[f]]
                    and self.compose_table.get((f, g)) == self.identities[self.target[f]]):
                return g
        return None

    def is_groupoid(self) -> bool:
        return all(self.inverse(f) is not None for f in range(len(self.morphisms)))

    def non_invertible(self) -> Optional[int]:
        return next((f for f in range(len(self.morphisms)) if self.inverse(f) is None), None)

    # ---------- 神经 ----------
    def strings(self, n: int) -> List[Tuple[int, ...]]:
        """长度 n 的可复合串 (φ_1, ..., φ_n), n = 0 时为对象"""
        return self._strings(n)

    def _strings(self, n: int) -> List[Tuple[int, ...]]:
        if n == 0:
            return [(c,) for c in range(len(self.objects)) if self._within_cap(c, ())]
        level = [(f,) for f in range(len(self.morphisms)) if self._within_cap(self.source[f], (f,))]
        for _ in range(n - 1):
            level = [
                chain + (g,)
                for chain in level
                for g in self.hom_from(self.target[chain[-1]])
                if self._within_cap(self.source[chain[0]], chain + (g,))
            ]
        return level

    def string_label(self, chain: Tuple[int, ...], n: int) -> Label:
        if n == 0:
            return self.objects[chain[0]]
        return tuple(self.morphisms[f] for f in chain)

    def nerve(self, N: int) -> TruncatedSSet:
        """经典神经 (带权时为总权 <= cap 的单纯子集合)

        顶点名为对象名, n >= 1 单形名为态射名的元组.
        """
        levels = [self.strings(n) for n in range(N + 1)]

        def face(n: int, i: int, chain: Tuple[int, ...]) -> Tuple[int, ...]:
            if n == 1:
                return (self.target[chain[0]],) if i == 0 else (self.source[chain[0]],)
            if i == 0:
                return chain[1:]
            if i == n:
                return chain[:-1]
            return chain[:i - 1] + (self.compose(chain[i], chain[i - 1]),) + chain[i + 1:]

        def degeneracy(n: int, i: int, chain: Tuple[int, ...]) -> Tuple[int, ...]:
            if n == 0:
                return (self.identities[chain[0]],)
            obj = self.source[chain[0]] if i == 0 else self.target[chain[i - 1]]
            return chain[:i] + (self.identities[obj],) + chain[i:]

        X = from_operators(levels, face, degeneracy, trunc_level=N, name=f"N({self.name})")
        labels = [[self.string_label(chain, n) for chain in level] for n, level in enumerate(levels)]
        return X.relabel(labels)

    # ---------- 对偶与切片 ----------
    def under(self, c: int) -> "FiniteCategory":
        """c/C: 对象 (c', v: c -> c'), 态射 γ 使 γ∘v = v'"""
        objects = [f for f in range(len(self.morphisms)) if self.source[f] == c]
        obj_labels = tuple((self.objects[self.target[v]], self.morphisms[v]) for v in objects)
        index = {v: i for i, v in enumerate(objects)}
        morphisms, src, tgt, labels = [], [], [], []
        for v in objects:
            for g in self.hom_from(self.target[v]):
                w = self.compose(g, v)
                morphisms.append((g, v))
                src.append(index[v])
                tgt.append(index[w])
                labels.append((self.morphisms[g], self.morphisms[v]))
        mindex = {m: i for i, m in enumerate(morphisms)}
        table = {}
        for a, (g, v) in enumerate(morphisms):
            w = self.compose(g, v)
            for h in self.hom_from(self.target[g]):
                table[(mindex[(h, w)], a)] = mindex[(self.compose(h, g), v)]
        identities = tuple(mindex[(self.identities[self.target[v]], v)] for v in objects)
        return FiniteCategory(obj_labels, tuple(labels), tuple(src), tuple(tgt), identities, table,
                              name=f"{self.objects[c]}/{self.name}").validate()

    def fingerprint(self) -> str:
        return fingerprint_of(self.to_dict())

    def to_dict(self) -> dict:
        payload = {
            "objects": [label_to_json(o) for o in self.objects],
            "morphisms": [
                {"name": label_to_json(m), "source": label_to_json(self.objects[self.source[f]]),
                 "target": label_to_json(self.objects[self.target[f]])}
                for f, m in enumerate(self.morphisms)
            ],
            "identities": [label_to_json(self.morphisms[e]) for e in self.identities],
            "compose": sorted(
                [[label_to_json(self.morphisms[g]), label_to_json(self.morphisms[f]), label_to_json(self.morphisms[h])]
                 for (g, f), h in self.compose_table.items()],
                key=repr,
            ),
        }
        if self.weighted:
            payload["weights"] = {"objects": list(self.ob_weights or ()), "morphisms": list(self.mor_weights or ()),
                                  "cap": self.cap}
        return payload

    def __repr__(self) -> str:
        return f"FiniteCategory({self.name or '?'}, {len(self.objects)} objects, {len(self.morphisms)} morphisms)"


# ==================== 构造函数 ====================
def from_tables(objects: Sequence[Label],
                morphisms: Sequence[Tuple[Label, Label, Label]],
                compose: Callable[[Label, Label], Optional[Label]],
                identities: Dict[Label, Label],
                name: str = "",
                ob_weights: Optional[Dict[Label, int]] = None,
                mor_weights: Optional[Dict[Label, int]] = None,
                cap: Optional[int] = None) -> FiniteCategory:
    """由 (名称, 源, 靶) 列表和复合函数构造; compose 返回 None 表示超出上限"""
    objects = tuple(objects)
    oindex = {o: i for i, o in enumerate(objects)}
    names = tuple(m for m, _, _ in morphisms)
    mindex = {m: i for i, m in enumerate(names)}
    src = tuple(oindex[s] for _, s, _ in morphisms)
    tgt = tuple(oindex[t] for _, _, t in morphisms)
    table = {}
    for f, (fname, _, ft) in enumerate(morphisms):
        for g, (gname, gs, _) in enumerate(morphisms):
            if oindex[gs] != oindex[ft]:
                continue
            h = compose(gname, fname)
            if h is not None:
                if h not in mindex:
                    raise CorruptInputError(f"composite {gname!r}∘{fname!r} = {h!r} is not a morphism")
                table[(g, f)] = mindex[h]
    cat = FiniteCategory(
        objects=objects,
        morphisms=names,
        source=src,
        target=tgt,
        identities=tuple(mindex[identities[o]] for o in objects),
        compose_table=table,
        name=name,
        ob_weights=tuple(ob_weights[o] for o in objects) if ob_weights else None,
        mor_weights=tuple(mor_weights[m] for m in names) if mor_weights else None,
        cap=cap,
    )
    logger.debug("构造范畴 %s: %d 个对象, %d 个态射", name, len(objects), len(names))
    return cat.validate()


def monoid(elements: Sequence[Label], multiply: Callable[[Label, Label], Optional[Label]], unit: Label,
           name: str = "", weights: Optional[Dict[Label, int]] = None, cap: Optional[int] = None) -> FiniteCategory:
    """单对象范畴; multiply(g, f) = g·f 作为 g∘f"""
    return from_tables(
        ["*"],
        [(m, "*", "*") for m in elements],
        multiply,
        {"*": unit},
        name=name,
        ob_weights={"*": 0} if weights else None,
        mor_weights=weights,
        cap=cap,
    )


def monoid_from_table(elements: Sequence[Label], table: Sequence[Sequence[Label]], name: str = "") -> FiniteCategory:
    """由乘法表 table[i][j] = e_i·e_j 构造; 单位元由表确定"""
    elements = list(elements)
    pos = {e: i for i, e in enumerate(elements)}
    unit = next(
        (e for e in elements if all(table[pos[e]][pos[x]] == x and table[pos[x]][pos[e]] == x for x in elements)),
        None,
    )
    if unit is None:
        raise CorruptInputError("multiplication table has no unit", witness={"monoid": name})
    for a, b, c in itertools.product(elements, repeat=3):
        ab_c = table[pos[table[pos[a]][pos[b]]]][pos[c]]
        a_bc = table[pos[a]][pos[table[pos[b]][pos[c]]]]
        if ab_c != a_bc:
            raise CorruptInputError(
                "multiplication table is not associative",
                witness=[label_to_json(a), label_to_json(b), label_to_json(c)],
            )
    return monoid(elements, lambda g, f: table[pos[g]][pos[f]], unit, name=name)


def cyclic_group(n: int) -> FiniteCategory:
    """Z/n 作为单对象群胚"""
    return monoid(list(range(n)), lambda g, f: (g + f) % n, 0, name=f"Z/{n}")


def compose_permutations(g: Tuple[int, ...], f: Tuple[int, ...]) -> Tuple[int, ...]:
    return tuple(g[f[i]] for i in range(len(f)))


def symmetric_group(n: int) -> FiniteCategory:
    """Σ_n, 置换写成像的元组"""
    perms = list(itertools.permutations(range(n)))
    return monoid(perms, compose_permutations, tuple(range(n)), name=f"S{n}")


def gl_matrices(n: int, q: int) -> List[Tuple[Tuple[int, ...], ...]]:
    """F_q 上可逆 n×n 矩阵 (q 为素数)"""
    rows = list(itertools.product(range(q), repeat=n))
    return [m for m in itertools.product(rows, repeat=n) if _det_mod(m, q) != 0]


def _det_mod(m: Sequence[Sequence[int]], q: int) -> int:
    a = [list(r) for r in m]
    n, det = len(a), 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] % q), None)
        if pivot is None:
            return 0
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det = det * a[col][col] % q
        inv = pow(a[col][col], q - 2, q)
        for r in range(col + 1, n):
            factor = a[r][col] * inv % q
            a[r] = [(x - factor * y) % q for x, y in zip(a[r], a[col])]
    return det % q


def matmul_mod(g, f, q: int) -> Tuple[Tuple[int, ...], ...]:
    n = len(g)
    return tuple(tuple(sum(g[i][k] * f[k][j] for k in range(n)) % q for j in range(n)) for i in range(n))


def general_linear_group(n: int, q: int) -> FiniteCategory:
    """GL_n(F_q) 作为单对象群胚"""
    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    return monoid(gl_matrices(n, q), lambda g, f: matmul_mod(g, f, q), ident, name=f"GL{n}(F{q})")


def poset(elements: Sequence[Label], relations: Sequence[Tuple[Label, Label]], name: str = "") -> FiniteCategory:
    """由生成关系 a <= b 的传递闭包得到的偏序集; 态射名为 (a, b)"""
    elements = list(elements)
    leq = {(a, a) for a in elements} | set(relations)
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(leq), repeat=2):
            if b == c and (a, d) not in leq:
                leq.add((a, d))
                changed = True
    for a, b in leq:
        if a != b and (b, a) in leq:
            raise CorruptInputError("relations are not antisymmetric", witness=[label_to_json(a), label_to_json(b)])
    order = {e: i for i, e in enumerate(elements)}
    arrows = sorted(leq, key=lambda ab: (order[ab[0]], order[ab[1]]))
    return from_tables(
        elements,
        [((a, b), a, b) for a, b in arrows],
        lambda g, f: (f[0], g[1]),
        {e: (e, e) for e in elements},
        name=name or "poset",
    )


def arrow_category() -> FiniteCategory:
    """[1] = (0 -> 1)"""
    return poset([0, 1], [(0, 1)], name="[1]")


def bounded_naturals(L: int) -> FiniteCategory:
    """ℕ 的有限模型: 元素 0..L, 权为数值, 上限 L"""
    return monoid(
        list(range(L + 1)),
        lambda g, f: g + f if g + f <= L else None,
        0,
        name=f"N<={L}",
        weights={m: m for m in range(L + 1)},
        cap=L,
    )


def bounded_integers(L: int) -> FiniteCategory:
    """ℤ 的有限模型: 元素 -L..L, 权为绝对值, 上限 L"""
    return monoid(
        list(range(-L, L + 1)),
        lambda g, f: g + f if abs(g + f) <= L else None,
        0,
        name=f"Z<={L}",
        weights={m: abs(m) for m in range(-L, L + 1)},
        cap=L,
    )


def discrete_category(objects: Sequence[Label], name: str = "") -> FiniteCategory:
    objects = list(objects)
    return from_tables(objects, [(("id", o), o, o) for o in objects], lambda g, f: g if g == f else None,
                       {o: ("id", o) for o in objects}, name=name or "discrete")


def terminal_category() -> FiniteCategory:
    return discrete_category(["*"], name="1")


# ==================== 函子 ====================
@dataclass(frozen=True, eq=False)
class FiniteFunctor:
    """有限范畴之间的函子, ob_map/mor_map 为编号映射"""
    source: FiniteCategory
    target: FiniteCategory
    ob_map: Tuple[int, ...]
    mor_map: Tuple[int, ...]
    name: str = ""

    def validate(self) -> "FiniteFunctor":
        D, C = self.source, self.target
        for f in range(len(D.morphisms)):
            F = self.mor_map[f]
            if C.source[F] != self.ob_map[D.source[f]] or C.target[F] != self.ob_map[D.target[f]]:
                raise CorruptInputError("functor does not respect endpoints", witness={"morphism": label_to_json(D.morphisms[f])})
        for c, e in enumerate(D.identities):
            if self.mor_map[e] != C.identities[self.ob_map[c]]:
                raise CorruptInputError("functor does not preserve identities", witness={"object": label_to_json(D.objects[c])})
        for (g, f), h in D.compose_table.items():
            if C.compose_table.get((self.mor_map[g], self.mor_map[f])) != self.mor_map[h]:
                raise CorruptInputError(
                    "functor does not preserve composition",
                    witness=[label_to_json(D.morphisms[g]), label_to_json(D.morphisms[f])],
                )
        return self

    def nerve_map(self, N: int) -> SMap:
        D, C = self.source, self.target
        ND, NC = D.nerve(N), C.nerve(N)

        def image(n: int, label: Label) -> Label:
            if n == 0:
                return C.objects[self.ob_map[D.object_index(label)]]
            return tuple(C.morphisms[self.mor_map[D.morphism_index(m)]] for m in label)

        return SMap.from_function(ND, NC, image, name=f"N({self.name or 'f'})")

    @classmethod
    def from_labels(cls, source: FiniteCategory, target: FiniteCategory,
                    ob_map: Dict[Label, Label], mor_map: Dict[Label, Label], name: str = "") -> "FiniteFunctor":
        return cls(
            source,
            target,
            tuple(target.object_index(ob_map[o]) for o in source.objects),
            tuple(target.morphism_index(mor_map[m]) for m in source.morphisms),
            name=name,
        ).validate()


def poset_to_group_functors(D: FiniteCategory, G: FiniteCategory) -> List[FiniteFunctor]:
    """偏序集 D 到单对象群 G 的全部函子 (Hasse 图为森林时, 边上取值自由)"""
    if len(G.objects) != 1:
        raise InvalidArgumentError("target must be a one-object category")
    covers = []
    for f in range(len(D.morphisms)):
        a, b = D.source[f], D.target[f]
        if a == b:
            continue
        if not any(D.source[g] == a and D.target[g] not in (a, b) and D.hom(D.target[g], b) for g in D.hom_from(a)):
            covers.append(f)
    functors = []
    for values in itertools.product(range(len(G.morphisms)), repeat=len(covers)):
        assign = dict(zip(covers, values))

        def value(f: int) -> int:
            if D.source[f] == D.target[f]:
                return G.identities[0]
            if f in assign:
                return assign[f]
            a, b = D.source[f], D.target[f]
            for c in covers:
                if D.source[c] == a:
                    rest = D.hom(D.target[c], b)
                    if rest:
                        return G.compose(value(rest[0]), assign[c])
            raise InvalidArgumentError("morphism is not a composite of covering relations")

        mor_map = tuple(value(f) for f in range(len(D.morphisms)))
        candidate = FiniteFunctor(D, G, (0,) * len(D.objects), mor_map, name="f")
        try:
            functors.append(candidate.validate())
        except CorruptInputError:
            continue
    return functors
