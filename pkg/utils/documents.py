"""
输入文档模块
统一的 JSON 输入格式: 顶层 kind 标签, 声明的截断和比较范围, 以及各类对象的描述体.
结构错误在计算之前以 SchemaError 报出 (文件, JSON 路径); 数学上的错误由各构造函数报出.
"""
import json
import logging
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from config import DEFAULTS, DOCUMENT_KINDS
from utils.categories import (
    FiniteCategory,
    FiniteFunctor,
    arrow_category,
    bounded_integers,
    bounded_naturals,
    cyclic_group,
    discrete_category,
    from_tables,
    general_linear_group,
    monoid_from_table,
    poset,
    symmetric_group,
    terminal_category,
)
from utils.errors import CorruptInputError, InvalidArgumentError, SchemaError
from utils.harness import Diagram, make_diagram
from utils.helpers import canonical_json, label_from_json
from utils.homology import LocalizationSpec
from utils.internal_category import InternalAction, set_action
from utils.monoids import MonoidObject, block_sum, finite_group, from_category, naturals
from utils.site import (
    FiniteSite,
    PointDiagram,
    SPresheaf,
    SPresheafMap,
    make_site,
    point_at,
    point_diagram,
    sierpinski_site,
)
from utils.sset import SMap, TruncatedSSet, build_standard, discrete, point

logger = logging.getLogger(__name__)

Json = Union[dict, list, str, int, None]


# ==================== 文档类型 ====================
@dataclass(frozen=True, eq=False)
class ActionSetup:
    """定理 B 的输入: 函子 f: D -> C 或内部作用, 以及所取的点"""
    setup: Union[FiniteFunctor, InternalAction]
    point: Any
    known: Optional[dict] = None


@dataclass(frozen=True, eq=False)
class MonoidSetup:
    monoid: MonoidObject
    word: Optional[Tuple[int, ...]] = None
    stages: Optional[int] = None
    expected: Optional[dict] = None


@dataclass(frozen=True, eq=False)
class PresheafSetup:
    """离散 (或给定单纯集合值) 预层, 点图, 以及可选的到另一预层的映射"""
    presheaf: SPresheaf
    points: Tuple[PointDiagram, ...] = ()
    map: Optional[SPresheafMap] = None


@dataclass(frozen=True, eq=False)
class DiagramSetup:
    """图 Y; Puppe 情形还有 X 和自然变换 f: Y -> X 以及所取的指标 i0"""
    diagram: Diagram
    over: Optional[Diagram] = None
    transformation: Optional[Dict[Any, SMap]] = None
    point: Any = None
    known: Optional[dict] = None


@dataclass(frozen=True, eq=False)
class InputDocument:
    """已通过结构检查的输入文档; obj 惰性构造对应的数学对象"""
    kind: str
    body: dict
    trunc: int
    range: int
    name: str = ""
    source: Optional[str] = None
    base_dir: Path = field(default_factory=Path.cwd)

    @property
    def spec(self) -> LocalizationSpec:
        return LocalizationSpec.h_range(self.range)

    def with_overrides(self, trunc: Optional[int] = None, n_range: Optional[int] = None) -> "InputDocument":
        """命令行的 --trunc/--range 覆盖文档中声明的值"""
        doc = replace(self, trunc=self.trunc if trunc is None else trunc,
                      range=self.range if n_range is None else n_range)
        _check_range(doc.trunc, doc.range)
        return doc

    @cached_property
    def obj(self):
        builder = BUILDERS[self.kind]
        ctx = _Context(self.trunc, self.source, self.base_dir)
        built = builder(ctx, self.body, "$.body")
        logger.debug("构造文档 %s (%s)", self.name or self.source, self.kind)
        return built


# ==================== 解析 ====================
def _check_range(trunc: int, n_range: int):
    if n_range >= trunc:
        raise InvalidArgumentError("range must be below truncation", witness={"trunc": trunc, "range": n_range})


def load_document(payload: Any, source: Optional[str] = None, base_dir: Optional[Path] = None) -> InputDocument:
    """由已解码的 JSON 值构造文档并做结构检查"""
    if not isinstance(payload, dict):
        raise SchemaError("document must be a JSON object", "$", source)
    kind = payload.get("kind")
    if kind not in DOCUMENT_KINDS:
        raise SchemaError(f"kind must be one of {', '.join(DOCUMENT_KINDS)}", "$.kind", source)
    trunc = payload.get("trunc", DEFAULTS["trunc"])
    n_range = payload.get("range", DEFAULTS["range"])
    for key, value, low in (("trunc", trunc, 1), ("range", n_range, 0)):
        if not isinstance(value, int) or isinstance(value, bool) or value < low:
            raise SchemaError(f"{key} must be an integer >= {low}", f"$.{key}", source)
    _check_range(trunc, n_range)
    body = payload.get("body")
    if not isinstance(body, dict):
        raise SchemaError("body must be a JSON object", "$.body", source)
    doc = InputDocument(kind, body, trunc, n_range, name=str(payload.get("name", "")), source=source,
                        base_dir=base_dir or Path.cwd())
    SCHEMAS[kind](_Context(trunc, source, doc.base_dir), body, "$.body")
    if kind == "monoid" and "table" in body:
        # 乘法表的结合律在计算前穷举检查
        doc.obj
    return doc


def parse_input(path: Union[str, Path]) -> InputDocument:
    """读取并检查输入文件"""
    path = Path(path)
    if not path.exists():
        raise InvalidArgumentError(f"input file {path} does not exist")
    text = path.read_text(encoding="utf-8")
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}", "$", str(path))
    doc = load_document(payload, source=str(path), base_dir=path.parent)
    logger.info("读取 %s: kind=%s, trunc=%d, range=%d", path, doc.kind, doc.trunc, doc.range)
    return doc


# ==================== 结构检查辅助 ====================
@dataclass(frozen=True)
class _Context:
    trunc: int
    source: Optional[str]
    base_dir: Path

    def fail(self, message: str, path: str) -> SchemaError:
        return SchemaError(message, path, self.source)


def _require(ctx: _Context, body: dict, key: str, path: str, types=None):
    if not isinstance(body, dict):
        raise ctx.fail("expected a JSON object", path)
    if key not in body:
        raise ctx.fail(f"missing field {key!r}", path)
    value = body[key]
    if types is not None and (not isinstance(value, types) or isinstance(value, bool)):
        names = ", ".join(t.__name__ for t in _tuple(types))
        raise ctx.fail(f"field must be of type {names}", f"{path}.{key}")
    return value


def _tuple(types) -> tuple:
    return types if isinstance(types, tuple) else (types,)


def _variant(ctx: _Context, body: dict, variants: Sequence[str], path: str) -> str:
    present = [v for v in variants if v in body]
    if len(present) != 1:
        raise ctx.fail(f"exactly one of {', '.join(variants)} is required", path)
    return present[0]


def _pairs(ctx: _Context, value: Json, path: str) -> List[Tuple[Any, Any]]:
    """映射可写成 {键: 值} 或 [[键, 值], ...]"""
    if isinstance(value, dict):
        return [(k, v) for k, v in value.items()]
    if isinstance(value, list) and all(isinstance(p, list) and len(p) == 2 for p in value):
        return [(p[0], p[1]) for p in value]
    raise ctx.fail("expected an object or a list of [key, value] pairs", path)


def _resolve(ctx: _Context, candidates: Sequence, raw: Any, path: str):
    """把 JSON 键 (可能被转成字符串) 还原为已有的标签"""
    value = label_from_json(raw)
    if value in candidates:
        return value
    for label in candidates:
        if isinstance(raw, str) and (raw == str(label) or raw == canonical_json(label)):
            return label
    raise ctx.fail(f"unknown label {raw!r}", path)


def _mapping(ctx: _Context, value: Json, keys: Sequence, values: Sequence, path: str) -> Dict:
    return {_resolve(ctx, keys, k, f"{path}[{i}]"): _resolve(ctx, values, v, f"{path}[{i}]")
            for i, (k, v) in enumerate(_pairs(ctx, value, path))}


# ==================== 单纯集合 ====================
SSET_VARIANTS = ("standard", "discrete", "nerve", "levels")


def _schema_sset(ctx: _Context, body: dict, path: str):
    variant = _variant(ctx, body, SSET_VARIANTS, path)
    if variant == "standard":
        kind = _require(ctx, body, "standard", path, str)
        if kind not in ("point", "simplex", "boundary", "horn"):
            raise ctx.fail("standard must be point, simplex, boundary or horn", f"{path}.standard")
        if kind != "point":
            _require(ctx, body, "n", path, int)
    elif variant == "discrete":
        _require(ctx, body, "discrete", path, list)
    elif variant == "nerve":
        _schema_category(ctx, _require(ctx, body, "nerve", path, dict), f"{path}.nerve")
    else:
        for key in ("levels", "faces", "degeneracies"):
            _require(ctx, body, key, path, list)


def build_sset(ctx: _Context, body: dict, path: str) -> TruncatedSSet:
    N = ctx.trunc
    if "standard" in body:
        kind = body["standard"]
        if kind == "point":
            return point(N)
        return build_standard(kind, body["n"], body.get("k"), N)
    if "discrete" in body:
        return discrete([label_from_json(v) for v in body["discrete"]], N, name=body.get("name", ""))
    if "nerve" in body:
        return build_category(ctx, body["nerve"], f"{path}.nerve").nerve(N)
    if len(body["levels"]) != N + 1:
        raise ctx.fail(f"levels must list the simplices of levels 0..{N}", f"{path}.levels")
    return TruncatedSSet.from_dict({**body, "trunc_level": N})


# ==================== 有限范畴与函子 ====================
BUILTIN_CATEGORIES = ("cyclic", "symmetric", "general_linear", "naturals", "integers", "terminal", "arrow")
CATEGORY_VARIANTS = ("builtin", "poset", "discrete", "monoid_table", "objects")


def _schema_category(ctx: _Context, body: dict, path: str):
    variant = _variant(ctx, body, CATEGORY_VARIANTS, path)
    if variant == "builtin":
        name = _require(ctx, body, "builtin", path, str)
        if name not in BUILTIN_CATEGORIES:
            raise ctx.fail(f"builtin must be one of {', '.join(BUILTIN_CATEGORIES)}", f"{path}.builtin")
        if name in ("cyclic", "symmetric", "general_linear"):
            _require(ctx, body, "n", path, int)
        if name in ("naturals", "integers"):
            _require(ctx, body, "L", path, int)
    elif variant == "poset":
        spec = _require(ctx, body, "poset", path, dict)
        _require(ctx, spec, "elements", f"{path}.poset", list)
        _require(ctx, spec, "relations", f"{path}.poset", list)
    elif variant == "discrete":
        _require(ctx, body, "discrete", path, list)
    elif variant == "monoid_table":
        spec = _require(ctx, body, "monoid_table", path, dict)
        _schema_table(ctx, spec, f"{path}.monoid_table")
    else:
        _require(ctx, body, "objects", path, list)
        morphisms = _require(ctx, body, "morphisms", path, list)
        for i, m in enumerate(morphisms):
            if not isinstance(m, list) or len(m) != 3:
                raise ctx.fail("a morphism is [name, source, target]", f"{path}.morphisms[{i}]")
        _require(ctx, body, "compose", path, list)
        _require(ctx, body, "identities", path, (dict, list))


def _schema_table(ctx: _Context, spec: dict, path: str):
    elements = _require(ctx, spec, "elements", path, list)
    table = _require(ctx, spec, "table", path, list)
    if len(table) != len(elements) or any(not isinstance(r, list) or len(r) != len(elements) for r in table):
        raise ctx.fail("table must be a square list with one row per element", f"{path}.table")


def build_category(ctx: _Context, body: dict, path: str) -> FiniteCategory:
    if "builtin" in body:
        name = body["builtin"]
        if name == "cyclic":
            return cyclic_group(body["n"])
        if name == "symmetric":
            return symmetric_group(body["n"])
        if name == "general_linear":
            return general_linear_group(body["n"], body.get("q", 2))
        if name == "naturals":
            return bounded_naturals(body["L"])
        if name == "integers":
            return bounded_integers(body["L"])
        if name == "terminal":
            return terminal_category()
        return arrow_category()
    if "poset" in body:
        spec = body["poset"]
        elements = [label_from_json(e) for e in spec["elements"]]
        relations = [tuple(label_from_json(v) for v in r) for r in spec["relations"]]
        return poset(elements, relations, name=body.get("name", "poset"))
    if "discrete" in body:
        return discrete_category([label_from_json(e) for e in body["discrete"]], name=body.get("name", ""))
    if "monoid_table" in body:
        spec = body["monoid_table"]
        return monoid_from_table([label_from_json(e) for e in spec["elements"]],
                                 [[label_from_json(v) for v in row] for row in spec["table"]],
                                 name=body.get("name", "monoid"))
    objects = [label_from_json(o) for o in body["objects"]]
    morphisms = [tuple(label_from_json(v) for v in m) for m in body["morphisms"]]
    names = [m[0] for m in morphisms]
    table = {}
    for i, entry in enumerate(body["compose"]):
        if not isinstance(entry, list) or len(entry) != 3:
            raise ctx.fail("a composite is [g, f, g∘f]", f"{path}.compose[{i}]")
        g, f, h = (_resolve(ctx, names, v, f"{path}.compose[{i}]") for v in entry)
        table[(g, f)] = h
    identities = _mapping(ctx, body["identities"], objects, names, f"{path}.identities")
    weights = body.get("weights")
    return from_tables(
        objects,
        morphisms,
        lambda g, f: table.get((g, f)),
        identities,
        name=body.get("name", ""),
        ob_weights=_mapping_int(ctx, weights.get("objects"), objects, f"{path}.weights.objects") if weights else None,
        mor_weights=_mapping_int(ctx, weights.get("morphisms"), names, f"{path}.weights.morphisms") if weights else None,
        cap=weights.get("cap") if weights else None,
    )


def _mapping_int(ctx: _Context, value: Json, keys: Sequence, path: str) -> Optional[Dict]:
    if value is None:
        return None
    return {_resolve(ctx, keys, k, path): int(v) for k, v in _pairs(ctx, value, path)}


def build_functor(ctx: _Context, body: dict, path: str) -> FiniteFunctor:
    D = build_category(ctx, body["source"], f"{path}.source")
    C = build_category(ctx, body["target"], f"{path}.target")
    ob_map = _mapping(ctx, body["objects"], D.objects, C.objects, f"{path}.objects")
    mor_map = _mapping(ctx, body["morphisms"], D.morphisms, C.morphisms, f"{path}.morphisms")
    # 恒等态射可省略
    for o, e in zip(D.objects, D.identities):
        mor_map.setdefault(D.morphisms[e], C.morphisms[C.identities[C.object_index(ob_map[o])]])
    missing = [m for m in D.morphisms if m not in mor_map]
    if missing:
        raise ctx.fail(f"functor does not map morphism {missing[0]!r}", f"{path}.morphisms")
    return FiniteFunctor.from_labels(D, C, ob_map, mor_map, name=body.get("name", "f"))


def _schema_functor(ctx: _Context, body: dict, path: str):
    for key in ("source", "target"):
        _schema_category(ctx, _require(ctx, body, key, path, dict), f"{path}.{key}")
    _require(ctx, body, "objects", path, (dict, list))
    _require(ctx, body, "morphisms", path, (dict, list))


# ==================== 作用 ====================
ACTION_VARIANTS = ("functor", "self_action", "set_action")


def _schema_action(ctx: _Context, body: dict, path: str):
    variant = _variant(ctx, body, ACTION_VARIANTS, path)
    if variant == "functor":
        _schema_functor(ctx, _require(ctx, body, "functor", path, dict), f"{path}.functor")
    elif variant == "self_action":
        _schema_monoid(ctx, _require(ctx, body, "self_action", path, dict), f"{path}.self_action")
    else:
        spec = _require(ctx, body, "set_action", path, dict)
        _schema_category(ctx, _require(ctx, spec, "category", f"{path}.set_action", dict), f"{path}.set_action.category")
        _require(ctx, spec, "fibers", f"{path}.set_action", dict)
        _require(ctx, spec, "action", f"{path}.set_action", dict)
    _require(ctx, body, "point", path)


def build_action(ctx: _Context, body: dict, path: str) -> ActionSetup:
    known = _known_answer(ctx, body, path)
    if "functor" in body:
        f = build_functor(ctx, body["functor"], f"{path}.functor")
        return ActionSetup(f, _resolve(ctx, f.target.objects, body["point"], f"{path}.point"), known)
    if "self_action" in body:
        M = build_monoid(ctx, body["self_action"], f"{path}.self_action").monoid
        return ActionSetup(M.self_action(), label_from_json(body["point"]), known)
    spec = body["set_action"]
    C = build_category(ctx, spec["category"], f"{path}.set_action.category")
    fibers = {_resolve(ctx, C.objects, o, f"{path}.set_action.fibers"): [label_from_json(x) for x in xs]
              for o, xs in spec["fibers"].items()}
    moves = {}
    for m, table in spec["action"].items():
        name = _resolve(ctx, C.morphisms, m, f"{path}.set_action.action")
        moves[name] = {label_from_json(k) if not isinstance(k, str) else k: label_from_json(v)
                       for k, v in _pairs(ctx, table, f"{path}.set_action.action.{m}")}

    def act(morphism, element):
        if C.is_identity(C.morphism_index(morphism)):
            return element
        table = moves.get(morphism, {})
        for key in (element, str(element), canonical_json(element)):
            if key in table:
                return table[key]
        raise CorruptInputError(f"action of {morphism!r} on {element!r} is not given")

    A = set_action(C, fibers, act, ctx.trunc, name=body.get("name", "X"))
    return ActionSetup(A, _resolve(ctx, C.objects, body["point"], f"{path}.point"), known)


def _known_answer(ctx: _Context, body: dict, path: str) -> Optional[dict]:
    """内联的已知答案表, 或相对文档目录的已知答案文件"""
    if "known_answer" in body:
        value = body["known_answer"]
        if isinstance(value, dict):
            return value
        if isinstance(value, str):
            return load_known_answer(ctx.base_dir / value)
        raise ctx.fail("known_answer must be an object or a file name", f"{path}.known_answer")
    return None


def load_known_answer(path: Union[str, Path]) -> dict:
    """已知答案文件: {"degrees": {"0": "Z", ...}, "component_group": "Z"}"""
    path = Path(path)
    if not path.exists():
        raise InvalidArgumentError(f"known-answer file {path} does not exist")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON at line {exc.lineno}: {exc.msg}", "$", str(path))
    if not isinstance(payload, dict) or not isinstance(payload.get("degrees", {}), dict):
        raise SchemaError("known-answer table needs a degrees object", "$.degrees", str(path))
    return payload


# ==================== 幺半群 ====================
MONOID_VARIANTS = ("group", "naturals", "block_sum", "table")


def _schema_monoid(ctx: _Context, body: dict, path: str):
    variant = _variant(ctx, body, MONOID_VARIANTS, path)
    if variant == "group":
        kind = _require(ctx, body, "group", path, str)
        if kind not in ("cyclic", "symmetric"):
            raise ctx.fail("group must be cyclic or symmetric", f"{path}.group")
        _require(ctx, body, "n", path, int)
    elif variant == "naturals":
        _require(ctx, body, "naturals", path, int)
    elif variant == "block_sum":
        spec = _require(ctx, body, "block_sum", path, dict)
        _require(ctx, spec, "family", f"{path}.block_sum", str)
        _require(ctx, spec, "W", f"{path}.block_sum", int)
    else:
        _schema_table(ctx, _require(ctx, body, "table", path, dict), f"{path}.table")
    if "word" in body:
        _require(ctx, body, "word", path, list)
    if "stages" in body:
        _require(ctx, body, "stages", path, int)


def build_monoid(ctx: _Context, body: dict, path: str) -> MonoidSetup:
    N = ctx.trunc
    if "group" in body:
        M = finite_group(body["group"], body["n"], N)
    elif "naturals" in body:
        M = naturals(body["naturals"], N)
    elif "block_sum" in body:
        spec = body["block_sum"]
        M = block_sum(spec["family"], spec["W"], N, spec.get("q", 2))
    else:
        spec = body["table"]
        elements = [label_from_json(e) for e in spec["elements"]]
        C = monoid_from_table(elements, [[label_from_json(v) for v in row] for row in spec["table"]],
                              name=body.get("name", "M"))
        sections = [_resolve(ctx, elements, s, f"{path}.table.sections") for s in spec.get("sections", [])]
        M = from_category(C, N, sections=sections or C.morphisms)
    word = None
    if "word" in body:
        labels = [M.section_label(i) for i in range(len(M.sections))]
        word = tuple(labels.index(_resolve(ctx, labels, w, f"{path}.word")) for w in body["word"])
    return MonoidSetup(M, word, body.get("stages"), _known_answer(ctx, body, path))


# ==================== 景与预层 ====================
def _schema_site(ctx: _Context, body: dict, path: str):
    variant = _variant(ctx, body, ("builtin", "category"), path)
    if variant == "builtin":
        if _require(ctx, body, "builtin", path, str) != "sierpinski":
            raise ctx.fail("the only builtin site is sierpinski", f"{path}.builtin")
    else:
        _schema_category(ctx, _require(ctx, body, "category", path, dict), f"{path}.category")
        _require(ctx, body, "covers", path, dict)


def build_site(ctx: _Context, body: dict, path: str) -> FiniteSite:
    if "builtin" in body:
        return sierpinski_site()
    C = build_category(ctx, body["category"], f"{path}.category")
    covers = {}
    for o, sieves in body["covers"].items():
        obj = _resolve(ctx, C.objects, o, f"{path}.covers")
        covers[obj] = [[_resolve(ctx, C.morphisms, m, f"{path}.covers.{o}") for m in sieve] for sieve in sieves]
    return make_site(C, covers, name=body.get("name", C.name))


def _schema_presheaf(ctx: _Context, body: dict, path: str):
    _schema_site(ctx, _require(ctx, body, "site", path, dict), f"{path}.site")
    _require(ctx, body, "values", path, dict)
    _require(ctx, body, "restrictions", path, dict)
    for i, p in enumerate(body.get("points", [])):
        _require(ctx, p, "objects", f"{path}.points[{i}]", list)
    if "map" in body:
        spec = _require(ctx, body, "map", path, dict)
        _require(ctx, spec, "values", f"{path}.map", dict)
        _require(ctx, spec, "restrictions", f"{path}.map", dict)
        _require(ctx, spec, "components", f"{path}.map", dict)


def _discrete_presheaf(ctx: _Context, site: FiniteSite, values: dict, restrictions: dict, path: str,
                       name: str) -> SPresheaf:
    """集合值预层作为离散单纯预层; restrictions[态射][元素] = 元素, 恒等可省略"""
    C = site.category
    objects = {}
    for o, xs in values.items():
        obj = _resolve(ctx, C.objects, o, f"{path}.values")
        objects[obj] = discrete([label_from_json(x) for x in xs], ctx.trunc, name=f"{name}({obj})")
    missing = [o for o in C.objects if o not in objects]
    if missing:
        raise ctx.fail(f"no value at object {missing[0]!r}", f"{path}.values")
    maps = []
    for f, m in enumerate(C.morphisms):
        src, tgt = objects[C.objects[C.source[f]]], objects[C.objects[C.target[f]]]
        key = next((k for k in restrictions if _resolve(ctx, C.morphisms, k, f"{path}.restrictions") == m), None)
        if key is None:
            if not C.is_identity(f):
                raise ctx.fail(f"missing restriction along {m!r}", f"{path}.restrictions")
            maps.append(SMap.identity(tgt))
            continue
        table = _mapping(ctx, restrictions[key], tgt.simplices[0], src.simplices[0], f"{path}.restrictions.{key}")
        maps.append(SMap.from_vertex_map(tgt, src, table, name=str(m)))
    return SPresheaf(site, tuple(objects[o] for o in C.objects), tuple(maps), name=name).validate()


def build_presheaf(ctx: _Context, body: dict, path: str) -> PresheafSetup:
    site = build_site(ctx, body["site"], f"{path}.site")
    C = site.category
    P = _discrete_presheaf(ctx, site, body["values"], body["restrictions"], path, body.get("name", "P"))
    points = []
    for i, spec in enumerate(body.get("points", [])):
        objs = [_resolve(ctx, C.objects, o, f"{path}.points[{i}].objects") for o in spec["objects"]]
        arrows = [_resolve(ctx, C.morphisms, m, f"{path}.points[{i}].arrows") for m in spec.get("arrows", [])]
        name = spec.get("name", f"p{i}")
        points.append(point_at(site, objs[0], name=name) if len(objs) == 1 and not arrows
                      else point_diagram(site, objs, arrows, name=name))
    smap = None
    if "map" in body:
        spec = body["map"]
        Q = _discrete_presheaf(ctx, site, spec["values"], spec["restrictions"], f"{path}.map", spec.get("name", "Q"))
        comps = []
        for c, o in enumerate(C.objects):
            key = next((k for k in spec["components"] if _resolve(ctx, C.objects, k, f"{path}.map.components") == o), None)
            if key is None:
                raise ctx.fail(f"map has no component at {o!r}", f"{path}.map.components")
            table = _mapping(ctx, spec["components"][key], P.values[c].simplices[0], Q.values[c].simplices[0],
                             f"{path}.map.components.{key}")
            comps.append(SMap.from_vertex_map(P.values[c], Q.values[c], table, name=f"f({o})"))
        smap = SPresheafMap(P, Q, tuple(comps), name=spec.get("name", "f")).validate()
    return PresheafSetup(P, tuple(points), smap)


# ==================== 图 ====================
def _schema_diagram(ctx: _Context, body: dict, path: str):
    _schema_category(ctx, _require(ctx, body, "shape", path, dict), f"{path}.shape")
    for side in ("objects", "maps"):
        _require(ctx, body, side, path, dict)
    if "over" in body:
        over = _require(ctx, body, "over", path, dict)
        _require(ctx, over, "objects", f"{path}.over", dict)
        _require(ctx, over, "maps", f"{path}.over", dict)
        _require(ctx, body, "transformation", path, dict)
        _require(ctx, body, "point", path)


def build_map(ctx: _Context, source: TruncatedSSet, target: TruncatedSSet, body: Json, path: str) -> SMap:
    """映射描述: {"identity": true} / {"constant": 顶点} / {"vertices": {...}} / {"functor": {...}}"""
    if not isinstance(body, dict):
        raise ctx.fail("a map is a JSON object", path)
    variant = _variant(ctx, body, ("identity", "constant", "vertices", "functor"), path)
    if variant == "identity":
        if source.fingerprint() != target.fingerprint():
            raise ctx.fail("identity between different objects", path)
        return SMap.identity(source)
    if variant == "constant":
        vertex = _resolve(ctx, target.simplices[0], body["constant"], f"{path}.constant")
        return SMap.constant(source, target, target.index_of(0, vertex)).validate()
    if variant == "vertices":
        table = _mapping(ctx, body["vertices"], source.simplices[0], target.simplices[0], f"{path}.vertices")
        return SMap.from_vertex_map(source, target, table)
    return build_functor(ctx, body["functor"], f"{path}.functor").nerve_map(ctx.trunc)


def _build_diagram(ctx: _Context, shape: FiniteCategory, body: dict, path: str, name: str) -> Diagram:
    objects = {}
    for o, spec in body["objects"].items():
        obj = _resolve(ctx, shape.objects, o, f"{path}.objects")
        _schema_sset(ctx, spec, f"{path}.objects.{o}")
        objects[obj] = build_sset(ctx, spec, f"{path}.objects.{o}")
    missing = [o for o in shape.objects if o not in objects]
    if missing:
        raise ctx.fail(f"no object at {missing[0]!r}", f"{path}.objects")
    maps = {}
    for m, spec in body["maps"].items():
        alpha = _resolve(ctx, shape.morphisms, m, f"{path}.maps")
        a = shape.morphism_index(alpha)
        src, tgt = objects[shape.objects[shape.source[a]]], objects[shape.objects[shape.target[a]]]
        maps[alpha] = build_map(ctx, src, tgt, spec, f"{path}.maps.{m}")
    return make_diagram(shape, objects, maps, name=name)


def build_diagram(ctx: _Context, body: dict, path: str) -> DiagramSetup:
    shape = build_category(ctx, body["shape"], f"{path}.shape")
    Y = _build_diagram(ctx, shape, body, path, body.get("name", "Y"))
    if "over" not in body:
        return DiagramSetup(Y)
    X = _build_diagram(ctx, shape, body["over"], f"{path}.over", body["over"].get("name", "X"))
    f = {}
    for o, spec in body["transformation"].items():
        obj = _resolve(ctx, shape.objects, o, f"{path}.transformation")
        i = shape.object_index(obj)
        f[obj] = build_map(ctx, Y.objects[i], X.objects[i], spec, f"{path}.transformation.{o}")
    missing = [o for o in shape.objects if o not in f]
    if missing:
        raise ctx.fail(f"transformation has no component at {missing[0]!r}", f"{path}.transformation")
    i0 = _resolve(ctx, shape.objects, body["point"], f"{path}.point")
    return DiagramSetup(Y, X, f, i0, _known_answer(ctx, body, path))


# ==================== 套件 ====================
@dataclass(frozen=True)
class SuiteCase:
    command: str
    input: Path
    expect: Optional[int] = None
    oracle: Optional[str] = None


def _schema_suite(ctx: _Context, body: dict, path: str):
    cases = _require(ctx, body, "cases", path, list)
    for i, case in enumerate(cases):
        _require(ctx, case, "command", f"{path}.cases[{i}]", str)
        _require(ctx, case, "input", f"{path}.cases[{i}]", str)
        if "expect" in case:
            _require(ctx, case, "expect", f"{path}.cases[{i}]", int)


def build_suite(ctx: _Context, body: dict, path: str) -> Tuple[SuiteCase, ...]:
    return tuple(
        SuiteCase(case["command"], ctx.base_dir / case["input"], case.get("expect"), case.get("oracle"))
        for case in body["cases"]
    )


# ==================== 路由表 ====================
SCHEMAS = {
    "sset": _schema_sset,
    "category": _schema_category,
    "action": _schema_action,
    "monoid": _schema_monoid,
    "site": _schema_site,
    "presheaf": _schema_presheaf,
    "diagram": _schema_diagram,
    "suite": _schema_suite,
}

BUILDERS = {
    "sset": build_sset,
    "category": build_category,
    "action": build_action,
    "monoid": build_monoid,
    "site": build_site,
    "presheaf": build_presheaf,
    "diagram": build_diagram,
    "suite": build_suite,
}
