"""
纤维化检验模块
在截断范围内判定角/边界提升的满射条件 (Kan 纤维化与平凡纤维化), 以及逐茎的局部版本
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from utils.errors import InvalidArgumentError
from utils.helpers import label_from_json, label_to_json, parallel_map
from utils.homology import Answer
from utils.sset import SMap, TruncatedSSet, _nondegenerate_cells, build_standard, enumerate_assignments, point

logger = logging.getLogger(__name__)

FIBRATION_KINDS = ("kan", "trivial")


@dataclass(frozen=True)
class LiftingInstance:
    """一个提升问题 (n, k) 的结果; k 为 None 表示边界"""
    n: int
    k: Optional[int]
    surjective: bool
    problems: int
    witness: Optional[dict] = None

    def to_dict(self) -> dict:
        payload = {"n": self.n, "k": self.k, "surjective": self.surjective, "problems": self.problems}
        if self.witness is not None:
            payload["witness"] = self.witness
        return payload


@dataclass(frozen=True)
class FibrationVerdict:
    """纤维化判定; NO 时 witness 给出无提升的角 (或边界) 及其下方单形"""
    kind: str
    checked_levels: Tuple[int, int]
    result: Answer
    table: Tuple[LiftingInstance, ...] = ()
    witness: Optional[dict] = None
    context: Optional[str] = None
    stalks: Tuple["FibrationVerdict", ...] = ()

    @property
    def yes(self) -> bool:
        return self.result is Answer.YES

    def to_dict(self) -> dict:
        payload = {
            "kind": self.kind,
            "checked_levels": list(self.checked_levels),
            "result": self.result.value,
            "table": [row.to_dict() for row in self.table],
        }
        if self.witness is not None:
            payload["witness"] = self.witness
        if self.context is not None:
            payload["context"] = self.context
        if self.stalks:
            payload["stalks"] = [v.to_dict() for v in self.stalks]
        return payload


def _instances(kind: str, n_max: int) -> List[Tuple[int, Optional[int]]]:
    if kind == "trivial":
        return [(n, None) for n in range(n_max + 1)]
    return [(n, k) for n in range(1, n_max + 1) for k in range(n + 1)]


def _shape(kind: str, n: int, k: Optional[int], N: int) -> TruncatedSSet:
    return build_standard("boundary", n, N=N) if kind == "trivial" else build_standard("horn", n, k, N=N)


def check_lifting(f: SMap, kind: str, n: int, k: Optional[int]) -> LiftingInstance:
    """单个提升问题: Y_n -> X_n ×_{X(K)} Y(K) 是否满射, K 为角或边界"""
    Y, X = f.source, f.target
    N = Y.trunc_level
    K = _shape(kind, n, k, N)
    cells = [K.label(m, x) for m, x in _nondegenerate_cells(K)]
    dims = [len(seq) - 1 for seq in cells]

    def key(space: TruncatedSSet, simplex: int) -> Tuple[int, ...]:
        return tuple(space.restrict(n, simplex, seq) for seq in cells)

    lifted = {(f.components[n][y], key(Y, y)) for y in range(Y.size(n))}
    by_boundary: Dict[Tuple[int, ...], List[int]] = {}
    for x in range(X.size(n)):
        by_boundary.setdefault(key(X, x), []).append(x)

    problems = 0
    for values in enumerate_assignments(K, Y):
        image = tuple(f.components[d][v] for d, v in zip(dims, values))
        for x in by_boundary.get(image, ()):
            problems += 1
            if (x, tuple(values)) not in lifted:
                witness = {
                    "n": n,
                    "k": k,
                    "shape": K.name,
                    "map": [[label_to_json(seq), label_to_json(Y.label(d, v))] for seq, d, v in zip(cells, dims, values)],
                    "base": label_to_json(X.label(n, x)),
                }
                return LiftingInstance(n, k, False, problems, witness)
    return LiftingInstance(n, k, True, problems)


def replay_witness(f: SMap, witness: dict) -> bool:
    """重放无提升的见证: 返回 True 表示该角/边界确实没有提升"""
    Y, X = f.source, f.target
    n = witness["n"]
    assignment = {label_from_json(seq): label_from_json(lab) for seq, lab in witness["map"]}
    x = X.index_of(n, label_from_json(witness["base"]))
    for y in range(Y.size(n)):
        if f.components[n][y] != x:
            continue
        if all(Y.label(len(seq) - 1, Y.restrict(n, y, seq)) == lab for seq, lab in assignment.items()):
            return False
    return True


def check_fibration(f, kind: str = "kan", n_max: int = 2, stalks: Optional[Sequence] = None) -> FibrationVerdict:
    """判定 f: Y -> X 在 0..n_max 层的提升条件

    stalks 给出时 f 必须提供 stalk_map(point), 对每个茎分别判定 (局部纤维化).
    """
    if kind not in FIBRATION_KINDS:
        raise InvalidArgumentError(f"unknown fibration kind {kind!r}")
    if stalks is not None:
        if not stalks:
            return FibrationVerdict(kind, (0, n_max), Answer.NOT_CHECKABLE, context="no points supplied")
        verdicts = [check_fibration(f.stalk_map(p), kind, n_max) for p in stalks]
        verdicts = [
            FibrationVerdict(v.kind, v.checked_levels, v.result, v.table, v.witness, context=p.name)
            for v, p in zip(verdicts, stalks)
        ]
        failing = next((v for v in verdicts if v.result is not Answer.YES), None)
        result = Answer.YES if failing is None else failing.result
        return FibrationVerdict(kind, (0, n_max), result, witness=None if failing is None else failing.witness,
                                context="stalkwise", stalks=tuple(verdicts))

    N = f.source.trunc_level
    if f.target.trunc_level != N:
        raise InvalidArgumentError("map between different truncation levels")
    low = 0 if kind == "trivial" else 1
    if n_max >= N:
        return FibrationVerdict(kind, (low, n_max), Answer.INCOMPLETE,
                                witness={"reason": f"n_max {n_max} is not below truncation {N}"})
    rows = parallel_map(lambda nk: check_lifting(f, kind, *nk), _instances(kind, n_max))
    failing = next((row for row in rows if not row.surjective), None)
    if failing is None:
        verdict = FibrationVerdict(kind, (low, n_max), Answer.YES, tuple(rows))
    else:
        verdict = FibrationVerdict(kind, (low, n_max), Answer.NO, tuple(rows), witness=failing.witness)
    logger.info("%s 纤维化检验 %s: %s", kind, f.name or "map", verdict.result.value)
    return verdict


def map_to_point(X: TruncatedSSet) -> SMap:
    """X -> 点"""
    P = point(X.trunc_level)
    return SMap(X, P, tuple((0,) * X.size(n) for n in range(X.trunc_level + 1)), name=f"{X.name}->*")
