"""
有限景模块
覆盖筛与拓扑公理, 集合值预层的加构造与层化, 单纯预层, 点与茎, 逐茎判定和预层作用
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Hashable, List, Optional, Sequence, Tuple

from config import ENUMERATION_LIMITS
from utils.categories import FiniteCategory, from_tables
from utils.errors import CorruptInputError, IncompleteAtTruncationError, InvalidArgumentError
from utils.helpers import label_to_json, parallel_map
from utils.homology import (
    Answer,
    EquivalenceVerdict,
    LocalizationKind,
    LocalizationSpec,
    is_equivalence,
)
from utils.internal_category import ActsByVerdict, InternalAction, acts_by_check, fiber
from utils.sset import SMap, TruncatedSSet, pullback

logger = logging.getLogger(__name__)

Sieve = FrozenSet[int]


# ==================== 景与拓扑 ====================
@dataclass(frozen=True, eq=False)
class FiniteSite:
    """有限范畴及每个对象上的覆盖筛 (态射编号的集合)"""
    category: FiniteCategory
    covers: Tuple[Tuple[Sieve, ...], ...]
    name: str = ""

    def object_index(self, label) -> int:
        return self.category.object_index(label)

    def maximal_sieve(self, c: int) -> Sieve:
        return frozenset(self.category.morphisms_into(c))

    def is_sieve(self, c: int, S: Sieve) -> bool:
        C = self.category
        for f in S:
            if C.target[f] != c:
                return False
            for g in C.morphisms_into(C.source[f]):
                if C.compose(f, g) not in S:
                    return False
        return True

    def pullback_sieve(self, S: Sieve, f: int) -> Sieve:
        """f*S = {g : f∘g ∈ S}"""
        C = self.category
        return frozenset(g for g in C.morphisms_into(C.source[f]) if C.compose(f, g) in S)

    def covering(self, c: int, S: Sieve) -> bool:
        return S in self.covers[c]

    def all_sieves(self, c: int) -> List[Sieve]:
        """c 上的全部筛 (态射子集中对前复合封闭者)"""
        into = sorted(self.category.morphisms_into(c))
        if 2 ** len(into) > ENUMERATION_LIMITS["max_matching"]:
            raise IncompleteAtTruncationError(f"too many candidate sieves on {self.category.objects[c]!r}")
        found = []
        for r in range(len(into) + 1):
            for subset in itertools.combinations(into, r):
                S = frozenset(subset)
                if self.is_sieve(c, S):
                    found.append(S)
        return found

    def describe_sieve(self, S: Sieve) -> List:
        return sorted(label_to_json(self.category.morphisms[f]) for f in S)

    def __repr__(self) -> str:
        return f"FiniteSite({self.name or self.category.name})"


def make_site(category: FiniteCategory, covers: Dict, name: str = "") -> FiniteSite:
    """covers[对象名] 为态射名列表的列表; 未列出的对象只有极大筛"""
    per_object = []
    for c, obj in enumerate(category.objects):
        sieves = [frozenset(category.morphism_index(m) for m in sieve) for sieve in covers.get(obj, [])]
        maximal = frozenset(category.morphisms_into(c))
        if obj not in covers:
            sieves = [maximal]
        per_object.append(tuple(dict.fromkeys(sieves)))
    return FiniteSite(category, tuple(per_object), name=name or category.name)


def trivial_site(category: FiniteCategory) -> FiniteSite:
    return make_site(category, {}, name=f"{category.name} (trivial)")


def sierpinski_site() -> FiniteSite:
    """U -i-> X; X 由 {极大筛, {i}} 覆盖, U 只由极大筛覆盖"""
    C = from_tables(
        ["U", "X"],
        [("id_U", "U", "U"), ("id_X", "X", "X"), ("i", "U", "X")],
        lambda g, f: {("id_U", "id_U"): "id_U", ("id_X", "id_X"): "id_X",
                      ("i", "id_U"): "i", ("id_X", "i"): "i"}.get((g, f)),
        {"U": "id_U", "X": "id_X"},
        name="Sierpinski",
    )
    return make_site(C, {"U": [["id_U"]], "X": [["id_X", "i"], ["i"]]}, name="Sierpinski")


@dataclass(frozen=True)
class SiteReport:
    """每条公理的结论与失败见证"""
    site: str
    axioms: Tuple[Tuple[str, bool, Optional[dict]], ...]

    @property
    def valid(self) -> bool:
        return all(ok for _, ok, _ in self.axioms)

    def to_dict(self) -> dict:
        return {
            "site": self.site,
            "valid": self.valid,
            "axioms": [
                {"axiom": name, "passed": ok, **({"witness": w} if w is not None else {})}
                for name, ok, w in self.axioms
            ],
        }


def validate_site(site: FiniteSite) -> SiteReport:
    """穷举检查: 覆盖是筛, 极大筛覆盖, 拉回稳定, 传递性"""
    C = site.category
    results = []

    def first_failure(check) -> Optional[dict]:
        for c in range(len(C.objects)):
            witness = check(c)
            if witness is not None:
                return {"object": label_to_json(C.objects[c]), **witness}
        return None

    def sieves_ok(c):
        for S in site.covers[c]:
            if not site.is_sieve(c, S):
                return {"sieve": site.describe_sieve(S)}
        return None

    def maximal_ok(c):
        return None if site.maximal_sieve(c) in site.covers[c] else {"missing": "maximal sieve"}

    def stability_ok(c):
        for S in site.covers[c]:
            for f in C.morphisms_into(c):
                pulled = site.pullback_sieve(S, f)
                if pulled not in site.covers[C.source[f]]:
                    return {"sieve": site.describe_sieve(S), "along": label_to_json(C.morphisms[f])}
        return None

    def transitivity_ok(c):
        for S in site.covers[c]:
            for R in site.all_sieves(c):
                if R in site.covers[c]:
                    continue
                if all(site.pullback_sieve(R, f) in site.covers[C.source[f]] for f in S):
                    return {"cover": site.describe_sieve(S), "sieve": site.describe_sieve(R)}
        return None

    for name, check in (("sieves", sieves_ok), ("maximal", maximal_ok),
                        ("stability", stability_ok), ("transitivity", transitivity_ok)):
        witness = first_failure(check)
        results.append((name, witness is None, witness))
    report = SiteReport(site.name, tuple(results))
    logger.info("景 %s 公理检验: %s", site.name, "通过" if report.valid else "失败")
    return report


# ==================== 集合值预层 ====================
@dataclass(frozen=True, eq=False)
class SetPresheaf:
    """values[c] 为 P(c) 的元素名; restrictions[f] 为 P(t f) -> P(s f) 的编号表"""
    site: FiniteSite
    values: Tuple[Tuple[Hashable, ...], ...]
    restrictions: Tuple[Tuple[int, ...], ...]
    name: str = ""

    def restrict(self, f: int, x: int) -> int:
        return self.restrictions[f][x]

    def validate(self) -> "SetPresheaf":
        C = self.site.category
        for c, u in enumerate(C.identities):
            if self.restrictions[u] != tuple(range(len(self.values[c]))):
                raise CorruptInputError("identity does not restrict to the identity",
                                        witness={"object": label_to_json(C.objects[c])})
        for (g, f), gf in C.compose_table.items():
            for x in range(len(self.values[C.target[g]])):
                if self.restrict(gf, x) != self.restrict(f, self.restrict(g, x)):
                    raise CorruptInputError("restriction is not functorial",
                                            witness={"pair": [label_to_json(C.morphisms[g]), label_to_json(C.morphisms[f])]})
        return self

    def index_of(self, c: int, label) -> int:
        return self.values[c].index(label)


def set_presheaf(site: FiniteSite, values: Dict, restrictions: Dict, name: str = "") -> SetPresheaf:
    """values[对象名] 为元素列表, restrictions[态射名][元素] = 元素; 恒等可省略"""
    C = site.category
    vals = tuple(tuple(values[o]) for o in C.objects)
    tables = []
    for f, m in enumerate(C.morphisms):
        src, tgt = C.source[f], C.target[f]
        if m in restrictions:
            table = tuple(vals[src].index(restrictions[m][x]) for x in vals[tgt])
        elif C.is_identity(f):
            table = tuple(range(len(vals[tgt])))
        else:
            raise CorruptInputError(f"missing restriction along {m!r}")
        tables.append(table)
    return SetPresheaf(site, vals, tuple(tables), name=name).validate()


@dataclass(frozen=True, eq=False)
class SetPresheafMap:
    """预层映射, components[c] 为 P(c) -> Q(c) 的编号表"""
    source: SetPresheaf
    target: SetPresheaf
    components: Tuple[Tuple[int, ...], ...]

    def validate(self) -> "SetPresheafMap":
        C = self.source.site.category
        for f in range(len(C.morphisms)):
            for x in range(len(self.source.values[C.target[f]])):
                if (self.components[C.source[f]][self.source.restrict(f, x)]
                        != self.target.restrict(f, self.components[C.target[f]][x])):
                    raise CorruptInputError("presheaf map is not natural",
                                            witness={"morphism": label_to_json(C.morphisms[f])})
        return self

    def compose(self, first: "SetPresheafMap") -> "SetPresheafMap":
        return SetPresheafMap(first.source, self.target, tuple(
            tuple(mine[x] for x in theirs) for mine, theirs in zip(self.components, first.components)
        ))

    def is_bijective(self) -> bool:
        return all(sorted(comp) == list(range(len(vals))) for comp, vals in zip(self.components, self.target.values))


def matching_families(P: SetPresheaf, c: int, S: Sieve) -> List[Tuple[int, ...]]:
    """S 上的匹配族, 按 sorted(S) 排列的元素编号, 字典序"""
    site = P.site
    C = site.category
    arrows = sorted(S)
    position = {f: i for i, f in enumerate(arrows)}
    # 约束 x_{f∘g} = P(g)(x_f) 在两个下标都已赋值时检查
    pairs = [[] for _ in arrows]
    for i, f in enumerate(arrows):
        for g in C.morphisms_into(C.source[f]):
            j = position[C.compose(f, g)]
            pairs[max(i, j)].append((i, j, g))
    found: List[Tuple[int, ...]] = []
    current: List[int] = []

    def extend(k: int):
        if len(found) > ENUMERATION_LIMITS["max_matching"]:
            raise IncompleteAtTruncationError("too many matching families", witness={"object": c})
        if k == len(arrows):
            found.append(tuple(current))
            return
        for x in range(len(P.values[C.source[arrows[k]]])):
            current.append(x)
            if all(P.restrict(g, current[i]) == current[j] for i, j, g in pairs[k]):
                extend(k + 1)
            current.pop()

    extend(0)
    return found


def _restrict_to_sieve(P: SetPresheaf, c: int, x: int, S: Sieve) -> Tuple[int, ...]:
    return tuple(P.restrict(f, x) for f in sorted(S))


def is_sheaf(P: SetPresheaf) -> Tuple[bool, Optional[dict]]:
    """每个覆盖筛上 P(c) -> Match(S, P) 为双射"""
    C = P.site.category
    for c in range(len(C.objects)):
        for S in P.site.covers[c]:
            families = matching_families(P, c, S)
            images = [_restrict_to_sieve(P, c, x, S) for x in range(len(P.values[c]))]
            if sorted(images) != sorted(families) or len(set(images)) != len(images):
                witness = {"object": label_to_json(C.objects[c]), "sieve": P.site.describe_sieve(S),
                           "sections": len(images), "matching_families": len(families)}
                return False, witness
    return True, None


@dataclass(frozen=True, eq=False)
class PlusConstruction:
    """P⁺ 以及单位 P -> P⁺; classes[c] 为每个类的代表 (筛, 匹配族)"""
    presheaf: SetPresheaf
    unit: SetPresheafMap
    classes: Tuple[Tuple[Tuple[Sieve, Tuple[int, ...]], ...], ...]
    lookup: Tuple[Dict[Tuple[Sieve, Tuple[int, ...]], int], ...]

    def class_of(self, c: int, S: Sieve, family: Tuple[int, ...]) -> int:
        return self.lookup[c][(S, family)]


def plus_construction(P: SetPresheaf) -> PlusConstruction:
    """P⁺(c) = colim_S Match(S, P), (S, x) ~ (T, y) 当且仅当一致筛覆盖"""
    site = P.site
    C = site.category
    classes, lookups = [], []
    for c in range(len(C.objects)):
        pairs = [(S, fam) for S in site.covers[c] for fam in matching_families(P, c, S)]
        parent = list(range(len(pairs)))

        def find(v: int) -> int:
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for a, b in itertools.combinations(range(len(pairs)), 2):
            (S, x), (T, y) = pairs[a], pairs[b]
            xs, ys = dict(zip(sorted(S), x)), dict(zip(sorted(T), y))
            agree = frozenset(f for f in S & T if xs[f] == ys[f])
            if site.covering(c, agree):
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
        roots = sorted({find(i) for i in range(len(pairs))})
        number = {r: i for i, r in enumerate(roots)}
        classes.append(tuple(pairs[r] for r in roots))
        lookups.append({pair: number[find(i)] for i, pair in enumerate(pairs)})

    restrictions = []
    for f in range(len(C.morphisms)):
        src, tgt = C.source[f], C.target[f]
        table = []
        for S, fam in classes[tgt]:
            pulled = site.pullback_sieve(S, f)
            values = dict(zip(sorted(S), fam))
            new_family = tuple(values[C.compose(f, g)] for g in sorted(pulled))
            table.append(lookups[src][(pulled, new_family)])
        restrictions.append(tuple(table))
    plus = SetPresheaf(site, tuple(tuple(range(len(cl))) for cl in classes), tuple(restrictions),
                       name=f"{P.name}+").validate()
    unit_components = []
    for c in range(len(C.objects)):
        top = site.maximal_sieve(c)
        unit_components.append(tuple(
            lookups[c][(top, _restrict_to_sieve(P, c, x, top))] for x in range(len(P.values[c]))
        ))
    unit = SetPresheafMap(P, plus, tuple(unit_components)).validate()
    return PlusConstruction(plus, unit, tuple(classes), tuple(lookups))


def plus_map(alpha: SetPresheafMap, source_plus: PlusConstruction, target_plus: PlusConstruction) -> SetPresheafMap:
    """α⁺: P⁺ -> Q⁺, [(S, x)] -> [(S, α x)]"""
    comps = []
    for c, classes in enumerate(source_plus.classes):
        comps.append(tuple(
            target_plus.class_of(c, S, tuple(
                alpha.components[alpha.source.site.category.source[f]][x] for f, x in zip(sorted(S), fam)
            ))
            for S, fam in classes
        ))
    return SetPresheafMap(source_plus.presheaf, target_plus.presheaf, tuple(comps)).validate()


@dataclass(frozen=True, eq=False)
class Sheafification:
    """P⁺⁺, 单位 P -> P⁺⁺ 以及两次加构造的中间数据"""
    sheaf: SetPresheaf
    unit: SetPresheafMap
    first: PlusConstruction
    second: PlusConstruction


def sheafify_set(P: SetPresheaf) -> Sheafification:
    """两次加构造, 并检查结果满足层条件"""
    first = plus_construction(P)
    second = plus_construction(first.presheaf)
    unit = second.unit.compose(first.unit)
    ok, witness = is_sheaf(second.presheaf)
    if not ok:
        raise CorruptInputError("sheafification output fails the sheaf condition", witness=witness)
    logger.debug("层化 %s: 大小 %s", P.name, [len(v) for v in second.presheaf.values])
    return Sheafification(second.presheaf, unit, first, second)


# ==================== 单纯预层 ====================
def _same_object(X: TruncatedSSet, Y: TruncatedSSet) -> bool:
    return X is Y or X.fingerprint() == Y.fingerprint()


@dataclass(frozen=True, eq=False)
class SPresheaf:
    """values[c] 为截断单纯集合; restrictions[f] 为 X(t f) -> X(s f)"""
    site: FiniteSite
    values: Tuple[TruncatedSSet, ...]
    restrictions: Tuple[SMap, ...]
    name: str = ""

    @property
    def trunc_level(self) -> int:
        return self.values[0].trunc_level

    def at(self, label) -> TruncatedSSet:
        return self.values[self.site.object_index(label)]

    def validate(self) -> "SPresheaf":
        C = self.site.category
        for f, smap in enumerate(self.restrictions):
            if not (_same_object(smap.source, self.values[C.target[f]])
                    and _same_object(smap.target, self.values[C.source[f]])):
                raise CorruptInputError("restriction has the wrong endpoints",
                                        witness={"morphism": label_to_json(C.morphisms[f])})
            smap.validate()
        for c, u in enumerate(C.identities):
            if not self.restrictions[u].same_as(SMap.identity(self.values[c])):
                raise CorruptInputError("identity does not restrict to the identity",
                                        witness={"object": label_to_json(C.objects[c])})
        for (g, f), gf in C.compose_table.items():
            if not self.restrictions[gf].same_as(self.restrictions[f].compose(self.restrictions[g])):
                raise CorruptInputError("restriction is not functorial",
                                        witness={"pair": [label_to_json(C.morphisms[g]), label_to_json(C.morphisms[f])]})
        return self

    def level(self, n: int) -> SetPresheaf:
        return SetPresheaf(
            self.site,
            tuple(X.simplices[n] for X in self.values),
            tuple(r.components[n] for r in self.restrictions),
            name=f"{self.name}_{n}",
        )


def constant_spresheaf(site: FiniteSite, X: TruncatedSSet, name: str = "") -> SPresheaf:
    C = site.category
    return SPresheaf(site, tuple(X for _ in C.objects),
                     tuple(SMap.identity(X) for _ in C.morphisms), name=name or X.name).validate()


@dataclass(frozen=True, eq=False)
class SPresheafMap:
    """单纯预层映射; maps_for 给出逐茎或逐对象需要判定的映射"""
    source: SPresheaf
    target: SPresheaf
    components: Tuple[SMap, ...]
    name: str = ""

    def validate(self) -> "SPresheafMap":
        C = self.source.site.category
        for f in range(len(C.morphisms)):
            left = self.components[C.source[f]].compose(self.source.restrictions[f])
            right = self.target.restrictions[f].compose(self.components[C.target[f]])
            if not left.same_as(right):
                raise CorruptInputError("presheaf map is not natural",
                                        witness={"morphism": label_to_json(C.morphisms[f])})
        return self

    def stalk_map(self, p: "PointDiagram") -> SMap:
        src, src_data = stalk_with_classes(self.source, p)
        tgt, tgt_data = stalk_with_classes(self.target, p)
        N = src.trunc_level
        comps = []
        for n in range(N + 1):
            row = []
            for obj, x in src_data.representatives[n]:
                row.append(tgt_data.class_of[n][(obj, self.components[obj].components[n][x])])
            comps.append(tuple(row))
        return SMap(src, tgt, tuple(comps), name=f"{self.name or 'f'}@{p.name}")

    def maps_for(self, spec: LocalizationSpec) -> List[Tuple[str, SMap]]:
        C = self.source.site.category
        if spec.name is LocalizationKind.STALKWISE:
            return [(p.name, self.stalk_map(p)) for p in spec.points]
        if spec.name is LocalizationKind.LEVELWISE:
            objects = spec.objects or C.objects
            return [(str(o), self.components[C.object_index(o)]) for o in objects]
        raise InvalidArgumentError(f"{spec.name.value} does not apply to presheaf maps")


def spresheaf_pullback(f: SPresheafMap, g: SPresheafMap) -> Tuple[SPresheaf, SPresheafMap, SPresheafMap]:
    """逐对象拉回 A ×_Z B 及两个投影"""
    site = f.source.site
    C = site.category
    results = [pullback(fc, gc) for fc, gc in zip(f.components, g.components)]
    values = tuple(r.obj for r in results)
    restrictions = []
    for m in range(len(C.morphisms)):
        src, tgt = C.source[m], C.target[m]
        top = results[tgt]
        restrictions.append(results[src].pair(
            f.source.restrictions[m].compose(top.first),
            g.source.restrictions[m].compose(top.second),
        ))
    P = SPresheaf(site, values, tuple(restrictions), name=f"{f.source.name}×{g.source.name}").validate()
    first = SPresheafMap(P, f.source, tuple(r.first for r in results), name="pr1").validate()
    second = SPresheafMap(P, g.source, tuple(r.second for r in results), name="pr2").validate()
    return P, first, second


@dataclass(frozen=True, eq=False)
class SheafifiedSPresheaf:
    sheaf: SPresheaf
    unit: SPresheafMap
    levels: Tuple[Sheafification, ...]


def sheafify_spresheaf(X: SPresheaf) -> SheafifiedSPresheaf:
    """逐层集合层化; 单纯算子由加构造的函子性诱导"""
    site = X.site
    C = site.category
    N = X.trunc_level
    levels = tuple(parallel_map(lambda n: sheafify_set(X.level(n)), range(N + 1)))

    def operator_map(n_from: int, n_to: int, op: str, i: int) -> SetPresheafMap:
        table = X.values
        comps = tuple(
            tuple((Y.faces[n_from][i] if op == "face" else Y.degeneracies[n_from][i]))
            for Y in table
        )
        alpha = SetPresheafMap(X.level(n_from), X.level(n_to), comps).validate()
        once = plus_map(alpha, levels[n_from].first, levels[n_to].first)
        return plus_map(once, levels[n_from].second, levels[n_to].second)

    faces = [[()] * len(C.objects)]
    for n in range(1, N + 1):
        maps = [operator_map(n, n - 1, "face", i) for i in range(n + 1)]
        faces.append([tuple(m.components[c] for m in maps) for c in range(len(C.objects))])
    degens = []
    for n in range(N):
        maps = [operator_map(n, n + 1, "degeneracy", i) for i in range(n + 1)]
        degens.append([tuple(m.components[c] for m in maps) for c in range(len(C.objects))])
    degens.append([()] * len(C.objects))

    values = []
    for c, obj in enumerate(C.objects):
        values.append(TruncatedSSet(
            N,
            tuple(levels[n].sheaf.values[c] for n in range(N + 1)),
            tuple(faces[n][c] for n in range(N + 1)),
            tuple(degens[n][c] for n in range(N + 1)),
            name=f"a{X.name}({obj})",
        ).validate())
    restrictions = tuple(
        SMap(values[C.target[f]], values[C.source[f]],
             tuple(levels[n].sheaf.restrictions[f] for n in range(N + 1)), name=str(C.morphisms[f]))
        for f in range(len(C.morphisms))
    )
    sheaf = SPresheaf(site, tuple(values), restrictions, name=f"a{X.name}").validate()
    unit = SPresheafMap(X, sheaf, tuple(
        SMap(X.values[c], values[c], tuple(levels[n].unit.components[c] for n in range(N + 1)), name="η")
        for c in range(len(C.objects))
    ), name="η").validate()
    return SheafifiedSPresheaf(sheaf, unit, levels)


def is_simplicial_sheaf(X: SPresheaf) -> bool:
    return all(is_sheaf(X.level(n))[0] for n in range(X.trunc_level + 1))


# ==================== 点与茎 ====================
@dataclass(frozen=True, eq=False)
class PointDiagram:
    """景中有限余滤图 (对象编号, 态射编号); 预层在其上的余极限为茎"""
    site: FiniteSite
    objects: Tuple[int, ...]
    arrows: Tuple[int, ...]
    name: str = ""

    def validate(self) -> "PointDiagram":
        C = self.site.category
        objs, arrows = set(self.objects), set(self.arrows)
        if not self.objects:
            raise CorruptInputError("a point diagram needs at least one object", witness={"point": self.name})
        for f in self.arrows:
            if C.source[f] not in objs or C.target[f] not in objs:
                raise CorruptInputError("arrow leaves the diagram", witness={"arrow": label_to_json(C.morphisms[f])})
        for c in self.objects:
            if C.identities[c] not in arrows:
                raise CorruptInputError("diagram misses an identity", witness={"object": label_to_json(C.objects[c])})
        for g, f in itertools.product(self.arrows, repeat=2):
            if C.source[g] == C.target[f] and C.compose(g, f) not in arrows:
                raise CorruptInputError("diagram is not closed under composition",
                                        witness={"pair": [label_to_json(C.morphisms[g]), label_to_json(C.morphisms[f])]})
        witness = self.cofiltered_witness()
        if witness is not None:
            raise CorruptInputError("diagram is not cofiltered", witness=witness)
        return self

    def arrows_between(self, a: int, b: int) -> List[int]:
        return [f for f in self.arrows if self.site.category.source[f] == a and self.site.category.target[f] == b]

    def cofiltered_witness(self) -> Optional[dict]:
        """任意两个对象有公共锥顶, 任意平行箭头被某个箭头等化"""
        C = self.site.category
        for a, b in itertools.combinations_with_replacement(self.objects, 2):
            if not any(self.arrows_between(d, a) and self.arrows_between(d, b) for d in self.objects):
                return {"objects": [label_to_json(C.objects[a]), label_to_json(C.objects[b])]}
        for a, b in itertools.product(self.objects, repeat=2):
            for f, g in itertools.combinations(self.arrows_between(a, b), 2):
                if not any(C.compose(f, h) == C.compose(g, h) for d in self.objects for h in self.arrows_between(d, a)):
                    return {"parallel": [label_to_json(C.morphisms[f]), label_to_json(C.morphisms[g])]}
        return None


def point_at(site: FiniteSite, obj, name: str = "") -> PointDiagram:
    """单对象图 (只含恒等)"""
    c = site.object_index(obj)
    return PointDiagram(site, (c,), (site.category.identities[c],), name=name or f"p_{obj}").validate()


def point_diagram(site: FiniteSite, objects: Sequence, arrows: Sequence, name: str = "") -> PointDiagram:
    C = site.category
    obj_idx = tuple(C.object_index(o) for o in objects)
    arrow_idx = set(C.morphism_index(m) for m in arrows) | {C.identities[c] for c in obj_idx}
    return PointDiagram(site, obj_idx, tuple(sorted(arrow_idx)), name=name or "p").validate()


@dataclass(frozen=True)
class StalkData:
    """每层的类代表 (对象, 单形) 以及 (对象, 单形) -> 类"""
    representatives: Tuple[Tuple[Tuple[int, int], ...], ...]
    class_of: Tuple[Dict[Tuple[int, int], int], ...]


def stalk_with_classes(X: SPresheaf, p: PointDiagram) -> Tuple[TruncatedSSet, StalkData]:
    """∐ X(a) 模去 x ~ X(u)(x) 的逐层余极限; 单形名为最早代表 (对象名, 单形名)"""
    C = X.site.category
    N = X.trunc_level
    reps_all, lookup_all, labels = [], [], []
    for n in range(N + 1):
        cells = [(a, x) for a in p.objects for x in range(X.values[a].size(n))]
        position = {cell: i for i, cell in enumerate(cells)}
        parent = list(range(len(cells)))

        def find(v: int) -> int:
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for u in p.arrows:
            src, tgt = C.source[u], C.target[u]
            for x, y in enumerate(X.restrictions[u].components[n]):
                ra, rb = find(position[(tgt, x)]), find(position[(src, y)])
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
        roots = sorted({find(i) for i in range(len(cells))})
        number = {r: i for i, r in enumerate(roots)}
        reps_all.append(tuple(cells[r] for r in roots))
        lookup_all.append({cell: number[find(i)] for i, cell in enumerate(cells)})
        labels.append(tuple((C.objects[a], X.values[a].label(n, x)) for a, x in reps_all[-1]))

    faces = [()]
    for n in range(1, N + 1):
        faces.append(tuple(
            tuple(lookup_all[n - 1][(a, X.values[a].faces[n][i][x])] for a, x in reps_all[n])
            for i in range(n + 1)
        ))
    degens = []
    for n in range(N):
        degens.append(tuple(
            tuple(lookup_all[n + 1][(a, X.values[a].degeneracies[n][i][x])] for a, x in reps_all[n])
            for i in range(n + 1)
        ))
    degens.append(())
    S = TruncatedSSet(N, tuple(labels), tuple(faces), tuple(degens), name=f"{X.name}_{p.name}").validate()
    return S, StalkData(tuple(reps_all), tuple(lookup_all))


def stalk(X: SPresheaf, p: PointDiagram) -> TruncatedSSet:
    return stalk_with_classes(X, p)[0]


def is_local_equivalence(f: SPresheafMap, points: Sequence[PointDiagram], n_max: int) -> EquivalenceVerdict:
    """逐茎 h-range 判定; 空点列为 not-checkable"""
    return is_equivalence(LocalizationSpec(LocalizationKind.STALKWISE, n_max, points=tuple(points)), f)


# ==================== 预层作用 ====================
@dataclass(frozen=True, eq=False)
class PresheafAction:
    """每个景对象上的内部作用, 以及沿景态射的限制

    restrictions[f] = (ob 限制, mor 限制, X 限制), 都从 t f 处到 s f 处.
    """
    site: FiniteSite
    actions: Tuple[InternalAction, ...]
    restrictions: Tuple[Tuple[SMap, SMap, SMap], ...]
    name: str = ""

    def validate(self) -> "PresheafAction":
        """π 与 μ 对所有景态射自然 (穷举)"""
        C = self.site.category
        for f, (r_ob, r_mor, r_x) in enumerate(self.restrictions):
            top, bottom = self.actions[C.target[f]], self.actions[C.source[f]]
            if not r_ob.compose(top.proj).same_as(bottom.proj.compose(r_x)):
                raise CorruptInputError("projection is not natural", witness={"morphism": label_to_json(C.morphisms[f])})
            for p in range(top.trunc_level + 1):
                for (phi, x), y in top.action[p].items():
                    moved = bottom.action[p].get((r_mor.components[p][phi], r_x.components[p][x]))
                    if moved is not None and moved != r_x.components[p][y]:
                        raise CorruptInputError("action is not natural",
                                                witness={"morphism": label_to_json(C.morphisms[f]), "level": p})
        return self

    def at(self, obj) -> InternalAction:
        return self.actions[self.site.object_index(obj)]

    def fiber(self, obj, n: int, c: int):
        """X(c) 在景对象 obj 上"""
        return fiber(self.at(obj), n, c)

    def acts_by_check(self, spec: LocalizationSpec, vertices_only: bool = False,
                      all_levels: bool = False) -> Tuple[Answer, List[Tuple[str, ActsByVerdict]]]:
        """levelwise: 逐个景对象判定; stalkwise: 只支持单对象点, 其余为 not-checkable

        每个对象上的判定同 internal_category.acts_by_check: 常值基范畴默认只查 0 层态射, all_levels 查全部层
        """
        C = self.site.category
        if spec.name is LocalizationKind.LEVELWISE:
            objects = [C.object_index(o) for o in (spec.objects or C.objects)]
        elif spec.name is LocalizationKind.STALKWISE:
            if not spec.points or any(len(p.objects) != 1 for p in spec.points):
                return Answer.NOT_CHECKABLE, []
            objects = [p.objects[0] for p in spec.points]
        else:
            raise InvalidArgumentError("presheaf actions are judged levelwise or stalkwise")
        verdicts = []
        for c in objects:
            verdict = acts_by_check(self.actions[c], LocalizationSpec.h_range(spec.range), vertices_only,
                                   all_levels=all_levels)
            verdicts.append((str(C.objects[c]), verdict))
            if not verdict.yes:
                return verdict.answer, verdicts
        return Answer.YES, verdicts


def constant_presheaf_action(site: FiniteSite, A: InternalAction) -> PresheafAction:
    """常值预层作用, 限制都为恒等"""
    C = site.category
    ident = (SMap.identity(A.base.ob), SMap.identity(A.base.mor), SMap.identity(A.total))
    return PresheafAction(site, tuple(A for _ in C.objects), tuple(ident for _ in C.morphisms),
                          name=A.name).validate()
