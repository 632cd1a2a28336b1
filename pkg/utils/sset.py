"""
截断单纯集合模块
精确存储到维数 N 的单纯集合 (含全部退化单形的面/退化表), 单纯映射, 极限/余极限,
标准对象以及 Eilenberg-Zilber 分解
"""
import dataclasses
import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, Hashable, Iterator, List, Optional, Sequence, Tuple

from config import ENUMERATION_LIMITS
from utils.errors import CorruptInputError, IncompleteAtTruncationError, InvalidArgumentError
from utils.helpers import fingerprint_of, label_from_json, label_to_json

logger = logging.getLogger(__name__)

Label = Hashable
Table = Tuple[Tuple[int, ...], ...]

STANDARD_KINDS = ("simplex", "boundary", "horn")


# ==================== 基本数据类型 ====================
@dataclass(frozen=True, order=True)
class SimplexAddress:
    """单形地址: (层, 层内编号)"""
    level: int
    index: int


@dataclass(frozen=True, eq=False)
class TruncatedSSet:
    """截断单纯集合

    faces[n][i][x] 为 n 层单形 x 的第 i 个面 (n >= 1), degeneracies[n][i][x] 为第 i 个退化 (n < N).
    构造后不可变, 可在线程间共享.
    """
    trunc_level: int
    simplices: Tuple[Tuple[Label, ...], ...]
    faces: Tuple[Table, ...]
    degeneracies: Tuple[Table, ...]
    name: str = ""
    declared_dim: Optional[int] = None

    # ---------- 基本查询 ----------
    def size(self, n: int) -> int:
        return len(self.simplices[n])

    def counts(self) -> Tuple[int, ...]:
        return tuple(len(level) for level in self.simplices)

    def label(self, n: int, x: int) -> Label:
        return self.simplices[n][x]

    def index_of(self, n: int, label: Label) -> int:
        try:
            return self._index[n][label]
        except KeyError:
            raise InvalidArgumentError(f"no simplex {label!r} at level {n} of {self.name or 'sset'}")

    def has_label(self, n: int, label: Label) -> bool:
        return label in self._index[n]

    def face(self, n: int, i: int, x: int) -> int:
        return self.faces[n][i][x]

    def degeneracy(self, n: int, i: int, x: int) -> int:
        return self.degeneracies[n][i][x]

    def address(self, n: int, x: int) -> SimplexAddress:
        if not (0 <= n <= self.trunc_level and 0 <= x < self.size(n)):
            raise InvalidArgumentError(f"address ({n}, {x}) out of range")
        return SimplexAddress(n, x)

    @cached_property
    def _index(self) -> List[Dict[Label, int]]:
        return [{lab: i for i, lab in enumerate(level)} for level in self.simplices]

    # ---------- 单纯算子 ----------
    def apply_degeneracies(self, n: int, x: int, word: Sequence[int]) -> int:
        """作用退化词 s_{i_1}...s_{i_k} (最右边的先作用)"""
        for i in reversed(word):
            x = self.degeneracies[n][i][x]
            n += 1
        return x

    def restrict(self, n: int, x: int, seq: Sequence[int]) -> int:
        """沿单调映射 [m] -> [n] (以值序列给出) 作用单纯算子: 先取面再取退化"""
        image = set(seq)
        level = n
        for j in range(n, -1, -1):
            if j not in image:
                x = self.faces[level][j][x]
                level -= 1
        for p in range(len(seq) - 1):
            if seq[p] == seq[p + 1]:
                x = self.degeneracies[level][p][x]
                level += 1
        return x

    def vertices(self, n: int, x: int) -> Tuple[int, ...]:
        """单形的顶点序列"""
        return tuple(self.restrict(n, x, (j,)) for j in range(n + 1))

    @cached_property
    def _face_index(self) -> List[Dict[Tuple[int, ...], List[int]]]:
        """按面元组索引单形, 用于映射枚举"""
        index: List[Dict[Tuple[int, ...], List[int]]] = [{}]
        for n in range(1, self.trunc_level + 1):
            by_faces: Dict[Tuple[int, ...], List[int]] = {}
            for x in range(self.size(n)):
                key = tuple(self.faces[n][i][x] for i in range(n + 1))
                by_faces.setdefault(key, []).append(x)
            index.append(by_faces)
        return index

    def simplices_with_faces(self, n: int, faces: Tuple[int, ...]) -> List[int]:
        if n == 0:
            return list(range(self.size(0)))
        return self._face_index[n].get(faces, [])

    @cached_property
    def _vertex_index(self) -> List[Dict[Tuple[int, ...], List[int]]]:
        index = []
        for n in range(self.trunc_level + 1):
            by_vertices: Dict[Tuple[int, ...], List[int]] = {}
            for x in range(self.size(n)):
                by_vertices.setdefault(self.vertices(n, x), []).append(x)
            index.append(by_vertices)
        return index

    def simplices_with_vertices(self, n: int, vertices: Tuple[int, ...]) -> List[int]:
        return self._vertex_index[n].get(tuple(vertices), [])

    # ---------- Eilenberg-Zilber ----------
    @cached_property
    def _ez_table(self) -> Tuple[Tuple[Tuple[int, int, Tuple[int, ...]], ...], ...]:
        """每个单形的 (基单形层, 基单形编号, 退化词)"""
        table = [tuple((0, x, ()) for x in range(self.size(0)))]
        for n in range(1, self.trunc_level + 1):
            rows = []
            below = table[n - 1]
            for x in range(self.size(n)):
                entry = (n, x, ())
                for i in range(n - 1, -1, -1):
                    y = self.faces[n][i][x]
                    if self.degeneracies[n - 1][i][y] == x:
                        base_level, base, word = below[y]
                        if word and word[0] >= i:
                            raise CorruptInputError(
                                "degeneracy word is not admissible",
                                witness={"level": n, "index": x, "word": [i, *word]},
                            )
                        entry = (base_level, base, (i,) + word)
                        break
                base_level, base, word = entry
                if self.apply_degeneracies(base_level, base, word) != x:
                    raise CorruptInputError(
                        "simplicial identity violated in degeneracy decomposition",
                        witness={"level": n, "index": x},
                    )
                rows.append(entry)
            table.append(tuple(rows))
        return tuple(table)

    def is_degenerate(self, n: int, x: int) -> bool:
        return bool(self._ez_table[n][x][2])

    def nondegenerate(self, n: int) -> Tuple[int, ...]:
        return self._nondegenerate[n]

    @cached_property
    def _nondegenerate(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(
            tuple(x for x in range(self.size(n)) if not self._ez_table[n][x][2])
            for n in range(self.trunc_level + 1)
        )

    def nondegenerate_counts(self) -> Tuple[int, ...]:
        return tuple(len(level) for level in self._nondegenerate)

    def dimension(self) -> int:
        """已存储部分中最高的非退化单形维数 (空集为 -1)"""
        if self.declared_dim is not None:
            return self.declared_dim
        dims = [n for n in range(self.trunc_level + 1) if self._nondegenerate[n]]
        return max(dims) if dims else -1

    # ---------- 校验 ----------
    def validate(self) -> "TruncatedSSet":
        """穷举检验全部单纯恒等式, 失败时抛出 CorruptInputError"""
        N = self.trunc_level
        if len(self.simplices) != N + 1 or len(self.faces) != N + 1 or len(self.degeneracies) != N + 1:
            raise CorruptInputError("level tables do not match the truncation level")
        for n in range(N + 1):
            size = self.size(n)
            if n >= 1 and (len(self.faces[n]) != n + 1 or any(len(t) != size for t in self.faces[n])):
                raise CorruptInputError(f"face table at level {n} has the wrong shape")
            if n < N and (len(self.degeneracies[n]) != n + 1 or any(len(t) != size for t in self.degeneracies[n])):
                raise CorruptInputError(f"degeneracy table at level {n} has the wrong shape")
            if len(self._index[n]) != size:
                raise CorruptInputError(f"duplicate simplex names at level {n}")
        d, s = self.faces, self.degeneracies
        for n in range(N + 1):
            for x in range(self.size(n)):
                # d_i d_j = d_{j-1} d_i  (i < j)
                if n >= 2:
                    for j in range(n + 1):
                        for i in range(j):
                            if d[n - 1][i][d[n][j][x]] != d[n - 1][j - 1][d[n][i][x]]:
                                self._violation("d_i d_j = d_{j-1} d_i", n, x, i, j)
                if n < N:
                    for j in range(n + 1):
                        y = s[n][j][x]
                        for i in range(n + 2):
                            face = d[n + 1][i][y]
                            if i < j:
                                expected = s[n - 1][j - 1][d[n][i][x]]
                            elif i in (j, j + 1):
                                expected = x
                            else:
                                expected = s[n - 1][j][d[n][i - 1][x]]
                            if face != expected:
                                self._violation("d_i s_j", n, x, i, j)
                if n + 1 < N:
                    for j in range(n + 1):
                        for i in range(j + 1):
                            if s[n + 1][i][s[n][j][x]] != s[n + 1][j + 1][s[n][i][x]]:
                                self._violation("s_i s_j = s_{j+1} s_i", n, x, i, j)
        self._ez_table  # 触发 EZ 分解的一致性检查
        return self

    def _violation(self, identity: str, n: int, x: int, i: int, j: int):
        raise CorruptInputError(
            f"simplicial identity {identity} fails",
            witness={"identity": identity, "level": n, "simplex": label_to_json(self.label(n, x)), "i": i, "j": j},
        )

    # ---------- 序列化 ----------
    def to_dict(self) -> dict:
        return {
            "trunc_level": self.trunc_level,
            "name": self.name,
            "levels": [[label_to_json(lab) for lab in level] for level in self.simplices],
            "faces": [[list(t) for t in level] for level in self.faces],
            "degeneracies": [[list(t) for t in level] for level in self.degeneracies],
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "TruncatedSSet":
        try:
            obj = cls(
                trunc_level=int(payload["trunc_level"]),
                simplices=tuple(tuple(label_from_json(v) for v in level) for level in payload["levels"]),
                faces=tuple(tuple(tuple(int(v) for v in t) for t in level) for level in payload["faces"]),
                degeneracies=tuple(tuple(tuple(int(v) for v in t) for t in level) for level in payload["degeneracies"]),
                name=payload.get("name", ""),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CorruptInputError(f"malformed simplicial set payload: {exc}")
        for level in obj.faces + obj.degeneracies:
            for table in level:
                if any(v < 0 for v in table):
                    raise CorruptInputError("negative simplex index in operator table")
        try:
            return obj.validate()
        except IndexError:
            raise CorruptInputError("operator table points outside the simplex set")

    def fingerprint(self) -> str:
        return self._fingerprint

    @cached_property
    def _fingerprint(self) -> str:
        payload = self.to_dict()
        payload.pop("name")
        return fingerprint_of(payload)

    def relabel(self, labels: Sequence[Sequence[Label]], name: Optional[str] = None) -> "TruncatedSSet":
        """保持算子表, 替换单形名称"""
        return dataclasses.replace(
            self,
            simplices=tuple(tuple(level) for level in labels),
            name=self.name if name is None else name,
        )

    def __repr__(self) -> str:
        return f"TruncatedSSet({self.name or '?'}, N={self.trunc_level}, counts={self.counts()})"


# ==================== 单纯映射 ====================
@dataclass(frozen=True, eq=False)
class SMap:
    """单纯映射, components[n][x] 为 n 层单形 x 的像"""
    source: TruncatedSSet
    target: TruncatedSSet
    components: Tuple[Tuple[int, ...], ...]
    name: str = ""

    def __call__(self, n: int, x: int) -> int:
        return self.components[n][x]

    def validate(self) -> "SMap":
        src, tgt = self.source, self.target
        if src.trunc_level != tgt.trunc_level:
            raise InvalidArgumentError("map between different truncation levels")
        N = src.trunc_level
        if len(self.components) != N + 1 or any(len(c) != src.size(n) for n, c in enumerate(self.components)):
            raise CorruptInputError("map components do not match the source")
        for n in range(N + 1):
            comp = self.components[n]
            for x in range(src.size(n)):
                y = comp[x]
                if not 0 <= y < tgt.size(n):
                    raise CorruptInputError("map component points outside the target")
                if n >= 1:
                    for i in range(n + 1):
                        if self.components[n - 1][src.faces[n][i][x]] != tgt.faces[n][i][y]:
                            raise ContractViolation.face(self, n, x, i)
                if n < N:
                    for i in range(n + 1):
                        if self.components[n + 1][src.degeneracies[n][i][x]] != tgt.degeneracies[n][i][y]:
                            raise ContractViolation.degeneracy(self, n, x, i)
        return self

    def compose(self, first: "SMap") -> "SMap":
        """self ∘ first"""
        if first.target is not self.source and first.target.fingerprint() != self.source.fingerprint():
            raise InvalidArgumentError("maps are not composable")
        return SMap(
            first.source,
            self.target,
            tuple(tuple(mine[v] for v in theirs) for mine, theirs in zip(self.components, first.components)),
            name=f"{self.name}∘{first.name}" if self.name and first.name else "",
        )

    def is_isomorphism(self) -> bool:
        return all(
            len(set(comp)) == len(comp) == self.target.size(n)
            for n, comp in enumerate(self.components)
        )

    def is_bijective_at(self, n: int) -> bool:
        comp = self.components[n]
        return len(set(comp)) == len(comp) == self.target.size(n)

    def same_as(self, other: "SMap") -> bool:
        return self.components == other.components

    def to_dict(self) -> dict:
        return {"name": self.name, "components": [list(c) for c in self.components]}

    def fingerprint(self) -> str:
        return fingerprint_of([self.source.fingerprint(), self.target.fingerprint(), self.to_dict()["components"]])

    # ---------- 构造 ----------
    @classmethod
    def identity(cls, X: TruncatedSSet) -> "SMap":
        return cls(X, X, tuple(tuple(range(X.size(n))) for n in range(X.trunc_level + 1)), name="id")

    @classmethod
    def from_function(cls, source: TruncatedSSet, target: TruncatedSSet,
                      fn: Callable[[int, Label], Label], name: str = "", validate: bool = True) -> "SMap":
        """由标签函数构造映射"""
        _require_same_truncation(source, target)
        comps = tuple(
            tuple(target.index_of(n, fn(n, lab)) for lab in source.simplices[n])
            for n in range(source.trunc_level + 1)
        )
        smap = cls(source, target, comps, name=name)
        return smap.validate() if validate else smap

    @classmethod
    def from_vertex_map(cls, source: TruncatedSSet, target: TruncatedSSet,
                        vertex_map: Dict[Label, Label], name: str = "") -> "SMap":
        """由顶点映射构造; 目标中的单形必须由顶点序列唯一确定"""
        _require_same_truncation(source, target)
        vmap = [target.index_of(0, vertex_map[lab]) for lab in source.simplices[0]]
        comps = []
        for n in range(source.trunc_level + 1):
            row = []
            for x in range(source.size(n)):
                image = tuple(vmap[v] for v in source.vertices(n, x))
                hits = target.simplices_with_vertices(n, image)
                if len(hits) != 1:
                    raise InvalidArgumentError(
                        "vertex map does not determine a simplicial map",
                        witness={"level": n, "simplex": label_to_json(source.label(n, x)), "candidates": len(hits)},
                    )
                row.append(hits[0])
            comps.append(tuple(row))
        return cls(source, target, tuple(comps), name=name).validate()

    @classmethod
    def constant(cls, source: TruncatedSSet, target: TruncatedSSet, vertex: int, name: str = "") -> "SMap":
        _require_same_truncation(source, target)
        comps = []
        for n in range(source.trunc_level + 1):
            y = target.apply_degeneracies(0, vertex, tuple(range(n - 1, -1, -1)))
            comps.append(tuple([y] * source.size(n)))
        return cls(source, target, tuple(comps), name=name)


class ContractViolation:
    """映射违反交换性时的错误构造"""

    @staticmethod
    def face(smap: SMap, n: int, x: int, i: int) -> CorruptInputError:
        return CorruptInputError(
            "map does not commute with a face operator",
            witness={"map": smap.name, "level": n, "simplex": label_to_json(smap.source.label(n, x)), "face": i},
        )

    @staticmethod
    def degeneracy(smap: SMap, n: int, x: int, i: int) -> CorruptInputError:
        return CorruptInputError(
            "map does not commute with a degeneracy operator",
            witness={"map": smap.name, "level": n, "simplex": label_to_json(smap.source.label(n, x)), "degeneracy": i},
        )


def _require_same_truncation(*objects: TruncatedSSet):
    levels = {obj.trunc_level for obj in objects}
    if len(levels) > 1:
        raise InvalidArgumentError(f"mismatched truncation levels {sorted(levels)}")


# ==================== 构造函数 ====================
def from_operators(levels: Sequence[Sequence[Label]],
                   face: Callable[[int, int, Label], Label],
                   degeneracy: Callable[[int, int, Label], Label],
                   trunc_level: int,
                   name: str = "",
                   declared_dim: Optional[int] = None,
                   validate: bool = False) -> TruncatedSSet:
    """由每层的单形名称和标签上的面/退化函数构造截断单纯集合"""
    if len(levels) != trunc_level + 1:
        raise InvalidArgumentError("need one list of simplices per level 0..N")
    for n, level in enumerate(levels):
        if len(level) > ENUMERATION_LIMITS["max_simplices"]:
            raise InvalidArgumentError(f"level {n} of {name or 'sset'} exceeds the simplex limit")
    index = [{lab: i for i, lab in enumerate(level)} for level in levels]

    def lookup(n: int, lab: Label, op: str) -> int:
        try:
            return index[n][lab]
        except KeyError:
            raise CorruptInputError(
                f"{op} leaves the simplex set",
                witness={"level": n, "simplex": label_to_json(lab)},
            )

    faces: List[Table] = [()]
    degeneracies: List[Table] = []
    for n in range(1, trunc_level + 1):
        faces.append(tuple(
            tuple(lookup(n - 1, face(n, i, lab), f"d_{i}") for lab in levels[n])
            for i in range(n + 1)
        ))
    for n in range(trunc_level):
        degeneracies.append(tuple(
            tuple(lookup(n + 1, degeneracy(n, i, lab), f"s_{i}") for lab in levels[n])
            for i in range(n + 1)
        ))
    degeneracies.append(())
    X = TruncatedSSet(
        trunc_level=trunc_level,
        simplices=tuple(tuple(level) for level in levels),
        faces=tuple(faces),
        degeneracies=tuple(degeneracies),
        name=name,
        declared_dim=declared_dim,
    )
    logger.debug("构造 %s: 各层单形数 %s", name or "sset", X.counts())
    return X.validate() if validate else X


def _monotone_sequences(n: int, length: int) -> Iterator[Tuple[int, ...]]:
    return itertools.combinations_with_replacement(range(n + 1), length)


def build_standard(kind: str, n: int, k: Optional[int] = None, N: int = 0) -> TruncatedSSet:
    """标准对象 Δ[n], ∂Δ[n], Λ^k[n] 在 N 处的截断; m 单形为 [m] -> [n] 的单调序列"""
    if kind not in STANDARD_KINDS:
        raise InvalidArgumentError(f"unknown standard kind {kind!r}")
    if n < 0 or n > N:
        raise InvalidArgumentError(f"need 0 <= n <= N, got n={n}, N={N}")
    full = set(range(n + 1))
    if kind == "horn":
        if n < 1 or k is None or not 0 <= k <= n:
            raise InvalidArgumentError(f"horn needs n >= 1 and 0 <= k <= n, got n={n}, k={k}")
        keep = lambda seq: not (full - {k}) <= set(seq)
        name, dim = f"Λ^{k}[{n}]", n - 1
    elif kind == "boundary":
        keep = lambda seq: set(seq) != full
        name, dim = f"∂Δ[{n}]", n - 1
    else:
        keep = lambda seq: True
        name, dim = f"Δ[{n}]", n
    levels = [[seq for seq in _monotone_sequences(n, m + 1) if keep(seq)] for m in range(N + 1)]
    return from_operators(
        levels,
        face=lambda m, i, seq: seq[:i] + seq[i + 1:],
        degeneracy=lambda m, i, seq: seq[:i + 1] + seq[i:],
        trunc_level=N,
        name=name,
        declared_dim=dim,
    )


def discrete(labels: Sequence[Label], N: int, name: str = "") -> TruncatedSSet:
    """离散单纯集合: 每层都是同一个集合, 算子为恒等"""
    labels = tuple(labels)
    identity = tuple(range(len(labels)))
    return TruncatedSSet(
        trunc_level=N,
        simplices=tuple(labels for _ in range(N + 1)),
        faces=((),) + tuple(tuple(identity for _ in range(n + 1)) for n in range(1, N + 1)),
        degeneracies=tuple(tuple(identity for _ in range(n + 1)) for n in range(N)) + ((),),
        name=name or "discrete",
        declared_dim=0 if labels else -1,
    )


def point(N: int) -> TruncatedSSet:
    return discrete(("*",), N, name="point")


def empty(N: int) -> TruncatedSSet:
    return discrete((), N, name="empty")


def yoneda_map(Y: TruncatedSSet, n: int, y: int) -> SMap:
    """分类 n 单形 y 的映射 Δ[n] -> Y"""
    simplex = build_standard("simplex", n, N=Y.trunc_level)
    comps = tuple(
        tuple(Y.restrict(n, y, seq) for seq in simplex.simplices[m])
        for m in range(Y.trunc_level + 1)
    )
    return SMap(simplex, Y, comps, name=f"⟨{Y.label(n, y)}⟩")


def same_labelled(X: TruncatedSSet, Y: TruncatedSSet) -> bool:
    """按名称比较两个截断单纯集合是否相同 (给出精确同构)"""
    if X.trunc_level != Y.trunc_level or X.counts() != Y.counts():
        return False
    try:
        perm = [[Y.index_of(n, lab) for lab in X.simplices[n]] for n in range(X.trunc_level + 1)]
    except InvalidArgumentError:
        return False
    for n in range(1, X.trunc_level + 1):
        for i in range(n + 1):
            if any(perm[n - 1][X.faces[n][i][x]] != Y.faces[n][i][perm[n][x]] for x in range(X.size(n))):
                return False
    for n in range(X.trunc_level):
        for i in range(n + 1):
            if any(perm[n + 1][X.degeneracies[n][i][x]] != Y.degeneracies[n][i][perm[n][x]] for x in range(X.size(n))):
                return False
    return True


# ==================== 积与拉回 ====================
@dataclass(frozen=True, eq=False)
class LimitResult:
    """积或拉回: 对象及两个投影"""
    obj: TruncatedSSet
    first: SMap
    second: SMap
    legs: Tuple[Optional[SMap], Optional[SMap]] = (None, None)

    def pair(self, u: SMap, v: SMap) -> SMap:
        """泛性质: 由 u: W -> A, v: W -> B 得到 W -> P"""
        f, g = self.legs
        if f is not None and g is not None and not f.compose(u).same_as(g.compose(v)):
            raise InvalidArgumentError("the cone does not commute over the base")
        P = self.obj
        comps = tuple(
            tuple(P._pair_index[n][(a, b)] for a, b in zip(u.components[n], v.components[n]))
            for n in range(P.trunc_level + 1)
        )
        return SMap(u.source, P, comps, name="pair")


def _pair_object(N: int, pairs: List[List[Tuple[int, int]]], A: TruncatedSSet, B: TruncatedSSet,
                 name: str) -> TruncatedSSet:
    lookup = [{pair: idx for idx, pair in enumerate(level)} for level in pairs]
    faces: List[Table] = [()]
    for n in range(1, N + 1):
        faces.append(tuple(
            tuple(lookup[n - 1][(A.faces[n][i][a], B.faces[n][i][b])] for a, b in pairs[n])
            for i in range(n + 1)
        ))
    degens: List[Table] = []
    for n in range(N):
        degens.append(tuple(
            tuple(lookup[n + 1][(A.degeneracies[n][i][a], B.degeneracies[n][i][b])] for a, b in pairs[n])
            for i in range(n + 1)
        ))
    degens.append(())
    P = TruncatedSSet(
        trunc_level=N,
        simplices=tuple(tuple((A.label(n, a), B.label(n, b)) for a, b in pairs[n]) for n in range(N + 1)),
        faces=tuple(faces),
        degeneracies=tuple(degens),
        name=name,
    )
    object.__setattr__(P, "_pair_index", lookup)
    return P


def product(X: TruncatedSSet, Y: TruncatedSSet) -> LimitResult:
    """逐层积, 附带两个投影"""
    _require_same_truncation(X, Y)
    N = X.trunc_level
    pairs = [[(a, b) for a in range(X.size(n)) for b in range(Y.size(n))] for n in range(N + 1)]
    P = _pair_object(N, pairs, X, Y, name=f"{X.name}×{Y.name}")
    p1 = SMap(P, X, tuple(tuple(a for a, _ in level) for level in pairs), name="pr1")
    p2 = SMap(P, Y, tuple(tuple(b for _, b in level) for level in pairs), name="pr2")
    return LimitResult(P, p1, p2)


def pullback(f: SMap, g: SMap) -> LimitResult:
    """纤维积 A ×_Z B, f: A -> Z, g: B -> Z"""
    if f.target is not g.target and f.target.fingerprint() != g.target.fingerprint():
        raise InvalidArgumentError("pullback legs have different codomains")
    A, B = f.source, g.source
    _require_same_truncation(A, B, f.target)
    N = A.trunc_level
    pairs = []
    for n in range(N + 1):
        over: Dict[int, List[int]] = {}
        for b, z in enumerate(g.components[n]):
            over.setdefault(z, []).append(b)
        pairs.append([(a, b) for a, z in enumerate(f.components[n]) for b in over.get(z, ())])
    P = _pair_object(N, pairs, A, B, name=f"{A.name}×_{f.target.name}{B.name}")
    p1 = SMap(P, A, tuple(tuple(a for a, _ in level) for level in pairs), name="pr1")
    p2 = SMap(P, B, tuple(tuple(b for _, b in level) for level in pairs), name="pr2")
    return LimitResult(P, p1, p2, legs=(f, g))


def coproduct(objects: Sequence[TruncatedSSet], tags: Optional[Sequence[Label]] = None,
              name: str = "") -> Tuple[TruncatedSSet, List[SMap]]:
    """余积 ∐ X_i, 单形名为 (tag, label); 返回对象和各个包含映射"""
    if not objects:
        raise InvalidArgumentError("coproduct of an empty family needs an explicit truncation; use empty(N)")
    _require_same_truncation(*objects)
    N = objects[0].trunc_level
    tags = list(tags) if tags is not None else list(range(len(objects)))
    offsets = []
    for n in range(N + 1):
        row, total = [], 0
        for X in objects:
            row.append(total)
            total += X.size(n)
        offsets.append(row)
    simplices = tuple(
        tuple((tag, lab) for tag, X in zip(tags, objects) for lab in X.simplices[n])
        for n in range(N + 1)
    )
    faces: List[Table] = [()]
    for n in range(1, N + 1):
        faces.append(tuple(
            tuple(offsets[n - 1][j] + v for j, X in enumerate(objects) for v in X.faces[n][i])
            for i in range(n + 1)
        ))
    degens: List[Table] = []
    for n in range(N):
        degens.append(tuple(
            tuple(offsets[n + 1][j] + v for j, X in enumerate(objects) for v in X.degeneracies[n][i])
            for i in range(n + 1)
        ))
    degens.append(())
    C = TruncatedSSet(N, simplices, tuple(faces), tuple(degens), name=name or "∐")
    inclusions = [
        SMap(X, C, tuple(tuple(offsets[n][j] + x for x in range(X.size(n))) for n in range(N + 1)), name=f"in{j}")
        for j, X in enumerate(objects)
    ]
    return C, inclusions


def sub_object(X: TruncatedSSet, keep: Sequence[Sequence[int]], name: str = "") -> Tuple[TruncatedSSet, SMap]:
    """由每层保留的单形编号给出的单纯子集合及其包含映射 (必须在算子下封闭)"""
    N = X.trunc_level
    kept = [sorted(set(level)) for level in keep]
    position = [{x: i for i, x in enumerate(level)} for level in kept]

    def moved(n: int, x: int) -> int:
        try:
            return position[n][x]
        except KeyError:
            raise InvalidArgumentError(
                "selection is not closed under simplicial operators",
                witness={"level": n, "simplex": label_to_json(X.label(n, x))},
            )

    faces: List[Table] = [()]
    for n in range(1, N + 1):
        faces.append(tuple(tuple(moved(n - 1, X.faces[n][i][x]) for x in kept[n]) for i in range(n + 1)))
    degens: List[Table] = []
    for n in range(N):
        degens.append(tuple(tuple(moved(n + 1, X.degeneracies[n][i][x]) for x in kept[n]) for i in range(n + 1)))
    degens.append(())
    S = TruncatedSSet(
        N,
        tuple(tuple(X.label(n, x) for x in kept[n]) for n in range(N + 1)),
        tuple(faces),
        tuple(degens),
        name=name or f"sub({X.name})",
    )
    return S, SMap(S, X, tuple(tuple(level) for level in kept), name="incl")


def sub_object_where(X: TruncatedSSet, predicate: Callable[[int, int], bool], name: str = "") -> Tuple[TruncatedSSet, SMap]:
    return sub_object(X, [[x for x in range(X.size(n)) if predicate(n, x)] for n in range(X.trunc_level + 1)], name)


def preimage(f: SMap, keep: Sequence[Sequence[int]], name: str = "") -> Tuple[TruncatedSSet, SMap]:
    """目标中单纯子集合的原像"""
    wanted = [set(level) for level in keep]
    return sub_object_where(f.source, lambda n, x: f.components[n][x] in wanted[n], name)


# ==================== 序列余极限 ====================
@dataclass(frozen=True, eq=False)
class ColimitResult:
    """有限阶段的序列余极限

    image 为第 0 阶段在最后阶段中的像 (自映射序列的最终像), image_stable_from 为像的大小不再变化的阶段.
    """
    colimit: TruncatedSSet
    inclusions: Tuple[SMap, ...]
    stabilized: Tuple[bool, ...]
    stable_from: Tuple[int, ...]
    image: TruncatedSSet
    image_inclusion: SMap
    image_stabilized: Tuple[bool, ...]
    image_stable_from: Tuple[int, ...]


def _stable_suffix(flags: Sequence[bool]) -> int:
    j = len(flags)
    while j > 0 and flags[j - 1]:
        j -= 1
    return j


def colimit_sequence(maps: Sequence[SMap], stages: int, first: Optional[TruncatedSSet] = None) -> ColimitResult:
    """前 stages 个阶段的逐层集合余极限

    单形名为最早进入的代表 (阶段, 名称). 稳定性看全部给出的映射 (包括 stages 之后的):
    第 n 层从阶段 j 起稳定, 当且仅当之后每个映射在该层都是双射; 至少要有一个映射作证, 且 j 不晚于最后阶段.
    """
    if stages < 1:
        raise InvalidArgumentError("need at least one stage")
    if stages > len(maps) + 1:
        raise InvalidArgumentError(f"only {len(maps) + 1} stages available, asked for {stages}")
    for left, right in zip(maps, maps[1:]):
        if left.target is not right.source and left.target.fingerprint() != right.source.fingerprint():
            raise InvalidArgumentError("maps do not form a composable chain")
    if first is None:
        if not maps:
            raise InvalidArgumentError("a colimit without maps needs the first object")
        first = maps[0].source
    elif maps and first is not maps[0].source and first.fingerprint() != maps[0].source.fingerprint():
        raise InvalidArgumentError("the first object is not the source of the first map")
    chain = list(maps[: stages - 1])
    objects = [first] + [f.target for f in chain]
    last = objects[-1]
    N = last.trunc_level
    m = len(chain)

    # 各阶段到最后阶段的复合
    to_last: List[SMap] = [SMap.identity(last)]
    for f in reversed(chain):
        to_last.insert(0, to_last[0].compose(f))

    labels = []
    for n in range(N + 1):
        earliest: Dict[int, Label] = {}
        for stage, smap in enumerate(to_last):
            for y, z in enumerate(smap.components[n]):
                if z not in earliest:
                    earliest[z] = (stage, objects[stage].label(n, y))
        labels.append([earliest[z] for z in range(last.size(n))])
    colim = last.relabel(labels, name=f"colim({last.name})")
    inclusions = tuple(SMap(obj, colim, smap.components, name=f"stage{i}") for i, (obj, smap) in enumerate(zip(objects, to_last)))

    stable_from = tuple(_stable_suffix([f.is_bijective_at(n) for f in maps]) for n in range(N + 1))
    stabilized = tuple(bool(maps) and j < len(maps) and j <= m for j in stable_from)

    # 第 0 阶段沿全部映射的像的大小
    from_first = SMap.identity(first)
    sizes = [[len(set(c)) for c in from_first.components]]
    for f in maps:
        from_first = f.compose(from_first)
        sizes.append([len(set(c)) for c in from_first.components])
    image_stable_from = tuple(
        _stable_suffix([sizes[j][n] == sizes[j + 1][n] for j in range(len(maps))]) for n in range(N + 1)
    )
    image_stabilized = tuple(bool(maps) and j < len(maps) and j <= m for j in image_stable_from)
    image, image_inclusion = sub_object(colim, [sorted(set(c)) for c in inclusions[0].components],
                                        name=f"im({last.name})")
    logger.debug("序列余极限: %d 个阶段, 稳定层 %s, 像稳定层 %s", stages, stabilized, image_stabilized)
    return ColimitResult(colim, inclusions, stabilized, stable_from, image, image_inclusion,
                         image_stabilized, image_stable_from)


# ==================== 分解与连通分支 ====================
def ez_normalize(X: TruncatedSSet) -> Dict[SimplexAddress, Tuple[SimplexAddress, Tuple[int, ...]]]:
    """Eilenberg-Zilber 分解: 单形 -> (非退化单形, 递减退化词 (i_1 > ... > i_k))"""
    table = X._ez_table
    return {
        SimplexAddress(n, x): (SimplexAddress(base_level, base), word)
        for n in range(X.trunc_level + 1)
        for x, (base_level, base, word) in enumerate(table[n])
    }


@dataclass(frozen=True)
class Components:
    """连通分支: classes 为顶点编号的等价类 (按最小顶点排序)"""
    classes: Tuple[Tuple[int, ...], ...]
    component_of: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.classes)


def pi0(X: TruncatedSSet) -> Components:
    """d_0, d_1: X_1 -> X_0 的余等化子"""
    if X.trunc_level < 1:
        raise InvalidArgumentError("pi0 needs truncation level at least 1")
    parent = list(range(X.size(0)))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in range(X.size(1)):
        a, b = find(X.faces[1][0][e]), find(X.faces[1][1][e])
        if a != b:
            parent[max(a, b)] = min(a, b)
    roots = sorted({find(v) for v in range(X.size(0))})
    number = {r: i for i, r in enumerate(roots)}
    component_of = tuple(number[find(v)] for v in range(X.size(0)))
    classes = tuple(tuple(v for v in range(X.size(0)) if component_of[v] == i) for i in range(len(roots)))
    return Components(classes, component_of)


def component_of_simplex(X: TruncatedSSet, comps: Components, n: int, x: int) -> int:
    return comps.component_of[X.restrict(n, x, (0,))]


# ==================== 映射枚举 ====================
def _nondegenerate_cells(K: TruncatedSSet) -> List[Tuple[int, int]]:
    return [(n, x) for n in range(K.trunc_level + 1) for x in K.nondegenerate(n)]


def enumerate_assignments(K: TruncatedSSet, Y: TruncatedSSet) -> Iterator[Tuple[int, ...]]:
    """枚举 K -> Y 的映射在 K 的非退化单形上的取值 (按 _nondegenerate_cells 的顺序)"""
    _require_same_truncation(K, Y)
    cells = _nondegenerate_cells(K)
    position = {cell: i for i, cell in enumerate(cells)}
    ez = K._ez_table
    # 每个非退化单形的各个面: (基单形在 cells 中的位置, 基单形层, 退化词)
    face_data = []
    for n, x in cells:
        row = []
        for i in range(n + 1 if n >= 1 else 0):
            base_level, base, word = ez[n - 1][K.faces[n][i][x]]
            row.append((position[(base_level, base)], base_level, word))
        face_data.append(row)
    values = [0] * len(cells)

    def extend(i: int) -> Iterator[Tuple[int, ...]]:
        if i == len(cells):
            yield tuple(values)
            return
        n, _ = cells[i]
        if n == 0:
            candidates = range(Y.size(0))
        else:
            required = tuple(Y.apply_degeneracies(bl, values[pos], word) for pos, bl, word in face_data[i])
            candidates = Y.simplices_with_faces(n, required)
        for y in candidates:
            values[i] = y
            yield from extend(i + 1)

    yield from extend(0)


def assignment_to_map(K: TruncatedSSet, Y: TruncatedSSet, values: Sequence[int]) -> SMap:
    cells = _nondegenerate_cells(K)
    position = {cell: i for i, cell in enumerate(cells)}
    comps = []
    for n in range(K.trunc_level + 1):
        row = []
        for base_level, base, word in K._ez_table[n]:
            row.append(Y.apply_degeneracies(base_level, values[position[(base_level, base)]], word))
        comps.append(tuple(row))
    return SMap(K, Y, tuple(comps))


def simplex_maps(K: TruncatedSSet, Y: TruncatedSSet) -> List[SMap]:
    """全部单纯映射 K -> Y; K 的维数超过截断时结果不完整"""
    _require_same_truncation(K, Y)
    if K.dimension() > K.trunc_level or (K.declared_dim is None and K.nondegenerate(K.trunc_level)):
        raise IncompleteAtTruncationError(
            f"dim {K.name or 'K'} may exceed the truncation level {K.trunc_level}",
        )
    maps = []
    for values in enumerate_assignments(K, Y):
        maps.append(assignment_to_map(K, Y, values))
        if len(maps) > ENUMERATION_LIMITS["max_maps"]:
            raise InvalidArgumentError("too many simplicial maps to enumerate")
    return maps
