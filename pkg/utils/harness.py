"""
定理 B 验证模块
逗号范畴与转移函子, 群胚覆叠预言机, 定理 B 报告, 图表的同伦余极限与 Puppe 检验
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from config import DEFAULTS, ORACLE_NAMES
from utils.categories import FiniteCategory, FiniteFunctor, from_tables
from utils.errors import (
    ContractViolationError,
    CorruptInputError,
    InvalidArgumentError,
    PreconditionUnverifiedError,
    UnsupportedOracleError,
)
from utils.fibration import FibrationVerdict, check_fibration
from utils.helpers import label_to_json
from utils.homology import Answer, EquivalenceVerdict, LocalizationSpec, homology_groups, judge_map
from utils.internal_category import (
    ActsByVerdict,
    InternalAction,
    _is_constant,
    action_category,
    acts_by_check,
    build_action,
    discrete_internal,
    fiber,
    fibration_range,
    object_inclusion,
    projection_map,
    vertex_inclusion,
)
from utils.sset import SMap, TruncatedSSet, coproduct, preimage, pullback, yoneda_map
from utils.verdicts import Verdict, hypothesis_verdict

logger = logging.getLogger(__name__)


# ==================== 逗号范畴 ====================
def comma_category(f: FiniteFunctor, c: int) -> FiniteCategory:
    """f/c: 对象 (d, u: f(d) -> c), 态射 (δ, u'): (d, u'∘f(δ)) -> (d', u')

    对象名为 (d 的名称, u 的名称), 态射名为 (δ 的名称, u' 的名称).
    """
    D, C = f.source, f.target
    objects = [
        (D.objects[d], C.morphisms[u])
        for d in range(len(D.objects))
        for u in C.hom(f.ob_map[d], c)
    ]
    morphisms = []
    for delta in range(len(D.morphisms)):
        for u2 in C.hom(f.ob_map[D.target[delta]], c):
            u1 = C.compose(u2, f.mor_map[delta])
            morphisms.append((
                (D.morphisms[delta], C.morphisms[u2]),
                (D.objects[D.source[delta]], C.morphisms[u1]),
                (D.objects[D.target[delta]], C.morphisms[u2]),
            ))

    def compose(g, h):
        delta = D.compose(D.morphism_index(g[0]), D.morphism_index(h[0]))
        return D.morphisms[delta], g[1]

    identities = {(d_label, u_label): (D.morphisms[D.identities[D.object_index(d_label)]], u_label)
                  for d_label, u_label in objects}
    return from_tables(objects, morphisms, compose, identities, name=f"{f.name or 'f'}/{C.objects[c]}")


def transition_functor(f: FiniteFunctor, alpha: int,
                       commas: Optional[Mapping[int, FiniteCategory]] = None) -> FiniteFunctor:
    """α_*: f/c -> f/c', 对 u 作后复合"""
    C = f.target
    c, c2 = C.source[alpha], C.target[alpha]
    commas = commas or {}
    src = commas.get(c) or comma_category(f, c)
    tgt = commas.get(c2) or comma_category(f, c2)
    push = lambda u_label: C.morphisms[C.compose(alpha, C.morphism_index(u_label))]
    return FiniteFunctor.from_labels(
        src, tgt,
        {(d, u): (d, push(u)) for d, u in src.objects},
        {(delta, u): (delta, push(u)) for delta, u in src.morphisms},
        name=f"({C.morphisms[alpha]})_*",
    )


def transition_functors(f: FiniteFunctor) -> Dict[int, FiniteFunctor]:
    """全部转移函子, 并检查 (β∘α)_* = β_*∘α_*, id_* = id"""
    C = f.target
    commas = {c: comma_category(f, c) for c in range(len(C.objects))}
    functors = {alpha: transition_functor(f, alpha, commas) for alpha in range(len(C.morphisms))}
    for c, e in enumerate(C.identities):
        F = functors[e]
        if F.ob_map != tuple(range(len(F.source.objects))) or F.mor_map != tuple(range(len(F.source.morphisms))):
            raise ContractViolationError("identity does not act as the identity functor",
                                         witness={"object": label_to_json(C.objects[c])})
    for (beta, alpha), composite in C.compose_table.items():
        F, G, H = functors[alpha], functors[beta], functors[composite]
        if (tuple(G.ob_map[x] for x in F.ob_map) != H.ob_map
                or tuple(G.mor_map[x] for x in F.mor_map) != H.mor_map):
            raise ContractViolationError(
                "transition functors are not functorial",
                witness=[label_to_json(C.morphisms[beta]), label_to_json(C.morphisms[alpha])],
            )
    return functors


def over_category(f: FiniteFunctor) -> FiniteCategory:
    """f/C: 对象 (d, u: f(d) -> c), 态射 (δ, α, u, u') 使 α∘u = u'∘f(δ)"""
    D, C = f.source, f.target
    objects = [(D.objects[d], C.morphisms[u]) for d in range(len(D.objects)) for u in C.hom_from(f.ob_map[d])]
    morphisms = []
    for delta in range(len(D.morphisms)):
        d, d2 = D.source[delta], D.target[delta]
        for u in C.hom_from(f.ob_map[d]):
            for u2 in C.hom_from(f.ob_map[d2]):
                lower = C.compose(u2, f.mor_map[delta])
                for alpha in C.hom(C.target[u], C.target[u2]):
                    if C.compose(alpha, u) == lower:
                        morphisms.append((
                            (D.morphisms[delta], C.morphisms[alpha], C.morphisms[u], C.morphisms[u2]),
                            (D.objects[d], C.morphisms[u]),
                            (D.objects[d2], C.morphisms[u2]),
                        ))

    def compose(g, h):
        delta = D.compose(D.morphism_index(g[0]), D.morphism_index(h[0]))
        alpha = C.compose(C.morphism_index(g[1]), C.morphism_index(h[1]))
        return D.morphisms[delta], C.morphisms[alpha], h[2], g[3]

    identities = {}
    for d_label, u_label in objects:
        u = C.morphism_index(u_label)
        e_d = D.identities[D.object_index(d_label)]
        identities[(d_label, u_label)] = (D.morphisms[e_d], C.morphisms[C.identities[C.target[u]]], u_label, u_label)
    return from_tables(objects, morphisms, compose, identities, name=f"{f.name or 'f'}/{C.name}")


def comma_inclusion(f: FiniteFunctor) -> FiniteFunctor:
    """D -> f/C, d -> (d, id), 是投影 f/C -> D 的左伴随"""
    D, C = f.source, f.target
    target = over_category(f)
    ident = lambda d: C.morphisms[C.identities[f.ob_map[d]]]
    ob_map = {D.objects[d]: (D.objects[d], ident(d)) for d in range(len(D.objects))}
    mor_map = {
        D.morphisms[delta]: (D.morphisms[delta], C.morphisms[f.mor_map[delta]],
                             ident(D.source[delta]), ident(D.target[delta]))
        for delta in range(len(D.morphisms))
    }
    return FiniteFunctor.from_labels(D, target, ob_map, mor_map, name="D->f/C")


def comma_action(f: FiniteFunctor, N: int) -> InternalAction:
    """C 在 ∐_c N(f/c) 上的作用 (转移函子); 单形名为 (c 的名称, 神经中的名称)"""
    C = f.target
    commas = [comma_category(f, c) for c in range(len(C.objects))]
    X, _ = coproduct([K.nerve(N) for K in commas], tags=list(C.objects), name=f"∐N({f.name or 'f'}/c)")
    base = discrete_internal(C, N)
    proj = SMap(
        X, base.ob,
        tuple(tuple(C.object_index(X.label(p, x)[0]) for x in range(X.size(p))) for p in range(N + 1)),
        name="π",
    )

    def push(alpha: int, pair):
        return pair[0], C.morphisms[C.compose(alpha, C.morphism_index(pair[1]))]

    def act(p: int, alpha: int, x: int) -> int:
        _, inner = X.label(p, x)
        moved = push(alpha, inner) if p == 0 else tuple(push(alpha, m) for m in inner)
        return X.index_of(p, (C.objects[C.target[alpha]], moved))

    return build_action(base, X, proj, act, name=f"C on N({f.name or 'f'}/-)")


# ==================== 群胚覆叠预言机 ====================
def groupoid_cover(C: FiniteCategory, c: int, base: TruncatedSSet, n_max: int) -> Tuple[SMap, FibrationVerdict]:
    """B(c/C) -> BC, 目标为与 C.nerve 同名的 base; 要求 C 是群胚且覆叠通过 Kan 检验"""
    if not C.is_groupoid():
        bad = C.non_invertible()
        raise UnsupportedOracleError(f"{C.name or 'category'} is not a groupoid",
                                     witness={"morphism": label_to_json(C.morphisms[bad])})
    U = C.under(c)

    def image(n: int, label):
        if n == 0:
            return label[0]
        return tuple(gamma for gamma, _ in label)

    cover = SMap.from_function(U.nerve(base.trunc_level), base, image, name=f"B({C.objects[c]}/C)->BC")
    verdict = check_fibration(cover, "kan", n_max)
    if not verdict.yes:
        raise PreconditionUnverifiedError("the covering map failed the fibration check through the range",
                                          witness=verdict.witness)
    return cover, verdict


def _oracle_levels(N: int, n_range: int) -> int:
    return min(n_range + 1, N - 1)


def groupoid_cover_oracle(f: FiniteFunctor, c: int, N: int, n_range: Optional[int] = None) -> TruncatedSSet:
    """BD ×_BC B(c/C): B f 沿覆叠的严格拉回作为同伦纤维"""
    n_range = DEFAULTS["range"] if n_range is None else n_range
    leg = f.nerve_map(N)
    cover, _ = groupoid_cover(f.target, c, leg.target, _oracle_levels(N, n_range))
    pb = pullback(leg, cover)
    return pb.obj.relabel(pb.obj.simplices, name=f"hofib({f.name or 'f'}, {f.target.objects[c]})")


# ==================== 定理 B 报告 ====================
@dataclass(frozen=True)
class TheoremBReport:
    """纤维与同伦纤维的比较; 只有前提通过且范围内各次同构时才是 confirmed"""
    kind: str
    point: object
    range: int
    oracle: str
    verdict: Verdict
    fibration: Optional[FibrationVerdict] = None
    acts_by: Optional[ActsByVerdict] = None
    fiber_homology: Tuple[str, ...] = ()
    oracle_homology: Tuple[str, ...] = ()
    comparison: Tuple[bool, ...] = ()
    comparison_map: Optional[EquivalenceVerdict] = None
    witness: Optional[dict] = None
    notes: Tuple[str, ...] = ()

    @property
    def exit_code(self) -> int:
        return self.verdict.exit_code

    def to_dict(self) -> dict:
        payload = {
            "kind": self.kind,
            "point": label_to_json(self.point),
            "range": self.range,
            "oracle": self.oracle,
            "verdict": self.verdict.value,
            "fiber_homology": list(self.fiber_homology),
            "oracle_homology": list(self.oracle_homology),
            "comparison": list(self.comparison),
            "notes": list(self.notes),
        }
        if self.fibration is not None:
            payload["fibration"] = self.fibration.to_dict()
        if self.acts_by is not None:
            payload["acts_by"] = self.acts_by.to_dict()
        if self.comparison_map is not None:
            payload["comparison_map"] = self.comparison_map.to_dict()
        if self.witness is not None:
            payload["witness"] = self.witness
        return payload


@dataclass(frozen=True)
class _Hypotheses:
    verdict: Optional[Verdict]
    fibration: Optional[FibrationVerdict]
    acts_by: Optional[ActsByVerdict]
    witness: Optional[dict]
    notes: Tuple[str, ...]


def _check_hypotheses(A: InternalAction, spec: LocalizationSpec) -> _Hypotheses:
    """π 是纤维化 (ob 为常值离散时自动成立) 且 C 以 spec 等价作用"""
    notes = []
    fib = None
    if _is_constant(A.base.ob):
        notes.append("ob(C) is discrete: fibers over vertices are homotopy fibers")
    else:
        fib = check_fibration(A.proj, "kan", fibration_range(A, spec))
        if not fib.yes:
            logger.info("前提不成立: π 不是纤维化 (%s)", fib.result.value)
            return _Hypotheses(hypothesis_verdict(fib.result), fib, None,
                               {"hypothesis": "fibration", **(fib.witness or {})}, tuple(notes))
    acts = acts_by_check(A, spec, vertices_only=fib is not None, fibration=fib)
    if not acts.yes:
        logger.info("前提不成立: 作用检验 %s", acts.answer.value)
        return _Hypotheses(hypothesis_verdict(acts.answer), fib, acts,
                           {"hypothesis": "acts-by", **(acts.witness or {})}, tuple(notes))
    return _Hypotheses(None, fib, acts, None, tuple(notes))


def _known_table(known: Optional[Mapping], n_range: int) -> Tuple[str, ...]:
    if known is None:
        raise InvalidArgumentError("the known-answer oracle needs an expected homology table")
    table = known.get("degrees", known)
    try:
        return tuple(str(table[str(k)] if str(k) in table else table[k]) for k in range(n_range + 1))
    except KeyError as exc:
        raise InvalidArgumentError(f"known-answer table has no entry for degree {exc.args[0]}")


def _compare(fiber_space: TruncatedSSet, oracle_groups: Sequence, n_range: int) -> Tuple[Tuple[str, ...], Tuple[bool, ...]]:
    groups = homology_groups(fiber_space, n_range)
    described = tuple(H.describe() for H in groups)
    if oracle_groups and isinstance(oracle_groups[0], str):
        return described, tuple(a == b for a, b in zip(described, oracle_groups))
    return described, tuple(a.same_group(b) for a, b in zip(groups, oracle_groups))


def _final(kind, point, spec, oracle, fiber_groups, oracle_groups, comparison, hyp: _Hypotheses,
           comparison_map: Optional[EquivalenceVerdict] = None, notes: Sequence[str] = ()) -> TheoremBReport:
    oracle_text = tuple(g if isinstance(g, str) else g.describe() for g in oracle_groups)
    witness = None
    if comparison_map is not None and comparison_map.answer is Answer.INCOMPLETE:
        verdict = Verdict.INCOMPLETE
        witness = {"reason": comparison_map.detail}
    elif all(comparison) and (comparison_map is None or comparison_map.yes):
        verdict = Verdict.CONFIRMED
    else:
        verdict = Verdict.REFUTED
        degree = next((k for k, ok in enumerate(comparison) if not ok),
                      comparison_map.failing_degree if comparison_map is not None else None)
        witness = {"degree": degree}
        if degree is not None and degree < len(fiber_groups):
            witness.update({"fiber": fiber_groups[degree], "oracle": oracle_text[degree]})
    report = TheoremBReport(kind, point, spec.range, oracle, verdict, hyp.fibration, hyp.acts_by,
                            tuple(fiber_groups), oracle_text, tuple(comparison), comparison_map, witness,
                            hyp.notes + tuple(notes))
    logger.info("%s 报告 (%s, oracle=%s): %s", kind, point, oracle, verdict.value)
    return report


def _early(kind, point, spec, oracle, verdict: Verdict, hyp: Optional[_Hypotheses] = None,
           witness: Optional[dict] = None, notes: Sequence[str] = ()) -> TheoremBReport:
    hyp = hyp or _Hypotheses(None, None, None, None, ())
    return TheoremBReport(kind, point, spec.range, oracle, verdict, hyp.fibration, hyp.acts_by,
                          witness=witness if witness is not None else hyp.witness, notes=hyp.notes + tuple(notes))


def _check_oracle_name(oracle: str):
    if oracle not in ORACLE_NAMES:
        raise UnsupportedOracleError(f"unknown oracle {oracle!r}; expected one of {', '.join(ORACLE_NAMES)}")


def theorem_b_verify(setup: Union[FiniteFunctor, InternalAction], c, spec: LocalizationSpec,
                     oracle: str = "groupoid-cover", known: Optional[Mapping] = None,
                     trunc: Optional[int] = None) -> TheoremBReport:
    """比较纤维 X(c) (或 B(f/c)) 与同伦纤维在 spec 范围内的同调

    setup 为函子 f: D -> C 时 c 是 C 的对象名, 为作用时 c 是 ob(C) 的顶点名.
    """
    _check_oracle_name(oracle)
    if isinstance(setup, FiniteFunctor):
        N = trunc or DEFAULTS["trunc"]
        A = comma_action(setup, N)
        c_index = setup.target.object_index(c)
        kind = "comma"
    else:
        A = setup
        N = A.trunc_level
        c_index = A.base.ob.index_of(0, c)
        kind = "action"
    if spec.range >= N:
        raise InvalidArgumentError("range must be below truncation")

    hyp = _check_hypotheses(A, spec)
    if hyp.verdict is not None:
        return _early(kind, c, spec, oracle, hyp.verdict, hyp)

    if kind == "comma":
        fiber_space = comma_category(setup, c_index).nerve(N)
    else:
        fiber_result = fiber(A, 0, c_index, with_comparison=True)
        fiber_space = fiber_result.obj

    if oracle == "known-answer":
        expected = _known_table(known, spec.range)
        described, comparison = _compare(fiber_space, expected, spec.range)
        return _final(kind, c, spec, oracle, described, expected, comparison, hyp,
                      notes=("oracle is a user-supplied known-answer table",))

    n_max = _oracle_levels(N, spec.range)
    comparison_map = None
    try:
        if kind == "comma":
            if oracle == "groupoid-cover":
                hofib = groupoid_cover_oracle(setup, c_index, N, spec.range)
            else:
                leg = setup.nerve_map(N)
                fv = check_fibration(leg, "kan", n_max)
                if not fv.yes:
                    return _early(kind, c, spec, oracle, Verdict.NOT_CHECKABLE, hyp,
                                  witness={"reason": "Bf is not a fibration through the range", **(fv.witness or {})})
                vertex = yoneda_map(leg.target, 0, leg.target.index_of(0, setup.target.objects[c_index]))
                hofib = pullback(vertex, leg).obj
        else:
            hofib, comparison_map = _action_oracle(A, c_index, fiber_result, oracle, spec, n_max)
    except (UnsupportedOracleError, PreconditionUnverifiedError) as exc:
        logger.warning("没有可靠的同伦纤维预言机: %s", exc.message)
        return _early(kind, c, spec, oracle, Verdict.NOT_CHECKABLE, hyp, witness=exc.to_dict())
    oracle_groups = homology_groups(hofib, spec.range)
    described, comparison = _compare(fiber_space, oracle_groups, spec.range)
    return _final(kind, c, spec, oracle, described, oracle_groups, comparison, hyp, comparison_map)


def _action_oracle(A: InternalAction, c: int, fiber_result, oracle: str, spec: LocalizationSpec, n_max: int):
    """作用情形的同伦纤维及比较映射 X(c) -> hofib"""
    XC = action_category(A)
    proj = projection_map(A, XC)
    BC = proj.target
    c_label = A.base.ob.label(0, c)
    if oracle == "groupoid-cover":
        if not A.base.is_discrete():
            raise UnsupportedOracleError("the groupoid cover needs a discrete base category")
        C = A.base.as_finite_category()
        cover, _ = groupoid_cover(C, C.object_index(c_label), BC, n_max)
        pb = pullback(proj, cover)
        start = cover.source.index_of(0, (c_label, C.morphisms[C.identities[C.object_index(c_label)]]))
        other = SMap.constant(fiber_result.obj, cover.source, start)
    else:
        fv = check_fibration(proj, "kan", n_max)
        if not fv.yes:
            raise PreconditionUnverifiedError("BX_C -> BC is not a fibration through the range", witness=fv.witness)
        vertex = yoneda_map(BC, 0, BC.index_of(0, c_label))
        pb = pullback(proj, vertex)
        other = fiber_result.to_simplex
    to_pullback = pb.pair(fiber_result.comparison, other)
    to_pullback = SMap(to_pullback.source, to_pullback.target, to_pullback.components, name="X(c)->hofib")
    return pb.obj, judge_map(to_pullback, spec.range, context=f"X({c_label})")


# ==================== 图表与同伦余极限 ====================
@dataclass(frozen=True, eq=False)
class Diagram:
    """I 形图表: objects[i] 为 X_i, maps[α] 为 α_*: X_{s α} -> X_{t α}"""
    shape: FiniteCategory
    objects: Tuple[TruncatedSSet, ...]
    maps: Tuple[SMap, ...]
    name: str = ""

    @property
    def trunc_level(self) -> int:
        return self.objects[0].trunc_level

    def validate(self) -> "Diagram":
        I = self.shape
        for alpha, smap in enumerate(self.maps):
            src, tgt = self.objects[I.source[alpha]], self.objects[I.target[alpha]]
            if smap.source.fingerprint() != src.fingerprint() or smap.target.fingerprint() != tgt.fingerprint():
                raise CorruptInputError("diagram map has the wrong endpoints",
                                        witness={"morphism": label_to_json(I.morphisms[alpha])})
            smap.validate()
        for i, e in enumerate(I.identities):
            if not self.maps[e].same_as(SMap.identity(self.objects[i])):
                raise CorruptInputError("identity does not map to the identity",
                                        witness={"object": label_to_json(I.objects[i])})
        for (g, f), h in I.compose_table.items():
            if not self.maps[g].compose(self.maps[f]).same_as(self.maps[h]):
                raise CorruptInputError("diagram is not functorial",
                                        witness=[label_to_json(I.morphisms[g]), label_to_json(I.morphisms[f])])
        return self


def make_diagram(shape: FiniteCategory, objects: Mapping, maps: Mapping, name: str = "") -> Diagram:
    """objects[对象名] = X_i, maps[态射名] = SMap; 恒等自动补全, 缺少的复合由已有映射复合得到"""
    values = tuple(objects[o] for o in shape.objects)
    table: Dict[int, SMap] = {shape.morphism_index(m): smap for m, smap in maps.items()}
    for i, e in enumerate(shape.identities):
        table.setdefault(e, SMap.identity(values[i]))
    changed = True
    while changed:
        changed = False
        for (g, f), h in shape.compose_table.items():
            if h not in table and g in table and f in table:
                table[h] = table[g].compose(table[f])
                changed = True
    missing = [shape.morphisms[a] for a in range(len(shape.morphisms)) if a not in table]
    if missing:
        raise CorruptInputError("diagram is missing maps", witness=[label_to_json(m) for m in missing])
    return Diagram(shape, values, tuple(table[a] for a in range(len(shape.morphisms))), name=name).validate()


def _owners(inclusions: Sequence[SMap], N: int) -> List[Dict[int, Tuple[int, int]]]:
    """余积中单形 -> (分量编号, 分量内编号)"""
    owners = [dict() for _ in range(N + 1)]
    for j, incl in enumerate(inclusions):
        for p in range(N + 1):
            for local, z in enumerate(incl.components[p]):
                owners[p][z] = (j, local)
    return owners


def tautological_action(D: Diagram) -> Tuple[InternalAction, List[SMap]]:
    """I 在 X̃ = ∐ X_i 上的作用, α·x = α_*(x); 返回作用和各分量的包含映射"""
    I, N = D.shape, D.trunc_level
    total, inclusions = coproduct(list(D.objects), tags=list(I.objects), name=f"∐{D.name or 'X'}_i")
    base = discrete_internal(I, N)
    owners = _owners(inclusions, N)
    proj = SMap(total, base.ob, tuple(tuple(owners[p][x][0] for x in range(total.size(p))) for p in range(N + 1)),
                name="π")

    def act(p: int, alpha: int, x: int) -> int:
        _, local = owners[p][x]
        return inclusions[I.target[alpha]].components[p][D.maps[alpha].components[p][local]]

    return build_action(base, total, proj, act, name=f"{I.name} on {total.name}"), inclusions


def hocolim(D: Diagram) -> TruncatedSSet:
    """B 作用范畴 X_I, 是 hocolim_i X_i 的模型"""
    A, _ = tautological_action(D)
    B = action_category(A).classifying_space()
    return B.relabel(B.simplices, name=f"hocolim({D.name or 'X'})")


# ==================== Puppe 检验 ====================
def _check_transformation(Y: Diagram, X: Diagram, f: Sequence[SMap]):
    I = Y.shape
    for alpha in range(len(I.morphisms)):
        i, j = I.source[alpha], I.target[alpha]
        if not f[j].compose(Y.maps[alpha]).same_as(X.maps[alpha].compose(f[i])):
            raise CorruptInputError("transformation is not natural",
                                    witness={"morphism": label_to_json(I.morphisms[alpha])})


def puppe_action(Y: Diagram, X: Diagram, f: Mapping) -> Tuple[InternalAction, List[SMap], List[SMap]]:
    """范畴对象 X_I 在 Ỹ = ∐ Y_i 上的作用 (α, x)·y = α_*(y); 返回作用和 Ỹ, X̃ 的包含映射"""
    if Y.shape is not X.shape and Y.shape.fingerprint() != X.shape.fingerprint():
        raise InvalidArgumentError("diagrams are indexed by different categories")
    I, N = X.shape, X.trunc_level
    components = [f[o] for o in I.objects]
    _check_transformation(Y, X, components)
    TX, x_incl = tautological_action(X)
    XC = action_category(TX)
    total, y_incl = coproduct(list(Y.objects), tags=list(I.objects), name=f"∐{Y.name or 'Y'}_i")
    owners = _owners(y_incl, N)
    proj = SMap(
        total, XC.ob,
        tuple(
            tuple(x_incl[owners[p][y][0]].components[p][components[owners[p][y][0]].components[p][owners[p][y][1]]]
                  for y in range(total.size(p)))
            for p in range(N + 1)
        ),
        name="∐f",
    )

    def act(p: int, z: int, y: int) -> int:
        alpha = I.morphism_index(XC.mor.label(p, z)[0])
        _, local = owners[p][y]
        return y_incl[I.target[alpha]].components[p][Y.maps[alpha].components[p][local]]

    A = build_action(XC, total, proj, act, name=f"X_I on {total.name}")
    return A, y_incl, x_incl


def puppe_check(Y: Diagram, X: Diagram, f: Mapping, i0, spec: LocalizationSpec,
                oracle: str = "fibration-pullback", known: Optional[Mapping] = None) -> TheoremBReport:
    """Y_{i0} -> X_{i0} ×^h_{hocolim X} hocolim Y 在 spec 范围内的比较

    前提: 各自然性方块在 spec 意义下是同伦拉回, 即 X_I 以 spec 等价作用在 Ỹ 上.
    """
    _check_oracle_name(oracle)
    N = X.trunc_level
    if spec.range >= N:
        raise InvalidArgumentError("range must be below truncation")
    A, y_incl, x_incl = puppe_action(Y, X, f)
    I = X.shape
    i = I.object_index(i0)
    hyp = _check_hypotheses(A, spec)
    if hyp.verdict is not None:
        witness = dict(hyp.witness or {})
        if hyp.acts_by is not None and hyp.acts_by.witness and "morphism" in hyp.acts_by.witness:
            witness["square"] = hyp.acts_by.witness["morphism"][0]
        return _early("puppe", i0, spec, oracle, hyp.verdict, hyp, witness=witness)

    source = Y.objects[i]
    if oracle == "known-answer":
        expected = _known_table(known, spec.range)
        described, comparison = _compare(source, expected, spec.range)
        return _final("puppe", i0, spec, oracle, described, expected, comparison, hyp,
                      notes=("oracle is a user-supplied known-answer table",))

    XC, YC = A.base, action_category(A)
    proj = projection_map(A, YC)
    f_i0 = f[i0]
    to_BX = object_inclusion(XC).compose(x_incl[i])
    to_BY = vertex_inclusion(A, YC).compose(y_incl[i])
    n_max = _oracle_levels(N, spec.range)
    try:
        if oracle == "fibration-pullback":
            fv = check_fibration(proj, "kan", n_max)
            if not fv.yes:
                return _early("puppe", i0, spec, oracle, Verdict.NOT_CHECKABLE, hyp,
                              witness={"reason": "hocolim Y -> hocolim X is not a fibration through the range",
                                       **(fv.witness or {})})
            pb = pullback(to_BX, proj)
            comparison_map = judge_map(pb.pair(f_i0, to_BY), spec.range, context=f"Y({i0})")
            hofib_groups = homology_groups(pb.obj, spec.range)
        else:
            comparison_map, hofib_groups = _puppe_groupoid(A, X, i, f_i0, to_BY, proj, spec, n_max)
    except (UnsupportedOracleError, PreconditionUnverifiedError) as exc:
        logger.warning("没有可靠的同伦拉回预言机: %s", exc.message)
        return _early("puppe", i0, spec, oracle, Verdict.NOT_CHECKABLE, hyp, witness=exc.to_dict())
    described, comparison = _compare(source, hofib_groups, spec.range)
    return _final("puppe", i0, spec, oracle, described, hofib_groups, comparison, hyp, comparison_map)


def _puppe_groupoid(A: InternalAction, X: Diagram, i: int, f_i0: SMap, to_BY: SMap, proj: SMap,
                    spec: LocalizationSpec, n_max: int):
    """X 离散且 X_I 是群胚时: 同伦拉回为各顶点 x ∈ X_{i0} 上同伦纤维的无交并"""
    XC = A.base
    if not XC.is_discrete():
        raise UnsupportedOracleError("the groupoid cover needs every X_i to be discrete")
    C = XC.as_finite_category()
    X_i0 = X.objects[i]
    tag = X.shape.objects[i]
    pieces, maps = [], []
    for x in range(X_i0.size(0)):
        c_label = (tag, X_i0.label(0, x))
        c = C.object_index(c_label)
        cover, _ = groupoid_cover(C, c, proj.target, n_max)
        pb = pullback(proj, cover)
        keep = [[x] for _ in range(X_i0.trunc_level + 1)]
        piece, incl = preimage(f_i0, keep, name=f"Y({c_label})")
        start = cover.source.index_of(0, (c_label, C.morphisms[C.identities[c]]))
        to_pb = pb.pair(to_BY.compose(incl), SMap.constant(piece, cover.source, start))
        pieces.append(pb.obj)
        maps.append(SMap(piece, pb.obj, to_pb.components, name=f"Y({c_label})->hofib"))
    total, _ = coproduct(pieces, name="∐hofib")
    verdicts = [judge_map(m, spec.range, context=m.name) for m in maps]
    failing = next((v for v in verdicts if not v.yes), None)
    comparison_map = failing or EquivalenceVerdict(Answer.YES, spec.range, cone_agrees=True,
                                                   checked=tuple(v.context or "" for v in verdicts))
    return comparison_map, homology_groups(total, spec.range)
