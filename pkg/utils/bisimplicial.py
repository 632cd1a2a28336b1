"""
截断双单纯集合模块
(p, q) 两个方向都截断在 N 的双单纯集合, 对角线 δ*, 行/列抽取, 以及实现引理的检验
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Sequence, Tuple

from utils.errors import CorruptInputError, InvalidArgumentError
from utils.helpers import fingerprint_of, label_to_json, parallel_map
from utils.homology import Answer, EquivalenceVerdict, LocalizationSpec, judge_map
from utils.sset import SMap, TruncatedSSet, _require_same_truncation

logger = logging.getLogger(__name__)

Label = Hashable
Grid = Tuple[Tuple[Tuple[Tuple[int, ...], ...], ...], ...]


@dataclass(frozen=True, eq=False)
class TruncatedBiSSet:
    """截断双单纯集合

    simplices[p][q] 为 (p, q) 单形名称; hfaces[p][q][i] (p >= 1), hdegens[p][q][i] (p < N) 为水平算子,
    vfaces[p][q][j] (q >= 1), vdegens[p][q][j] (q < N) 为竖直算子.
    """
    trunc_level: int
    simplices: Tuple[Tuple[Tuple[Label, ...], ...], ...]
    hfaces: Grid
    hdegens: Grid
    vfaces: Grid
    vdegens: Grid
    name: str = ""

    def size(self, p: int, q: int) -> int:
        return len(self.simplices[p][q])

    def label(self, p: int, q: int, x: int) -> Label:
        return self.simplices[p][q][x]

    def index_of(self, p: int, q: int, label: Label) -> int:
        try:
            return self._index[p][q][label]
        except KeyError:
            raise InvalidArgumentError(f"no simplex {label!r} in bidegree ({p}, {q})")

    @cached_property
    def _index(self):
        return [[{lab: i for i, lab in enumerate(cell)} for cell in row] for row in self.simplices]

    def counts(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(len(cell) for cell in row) for row in self.simplices)

    def validate(self) -> "TruncatedBiSSet":
        """行、列的单纯恒等式以及水平/竖直算子的交换性"""
        N = self.trunc_level
        for q in range(N + 1):
            row(self, q).validate()
        for p in range(N + 1):
            column(self, p).validate()
        hf, hs, vf, vs = self.hfaces, self.hdegens, self.vfaces, self.vdegens
        for p in range(N + 1):
            for q in range(N + 1):
                for x in range(self.size(p, q)):
                    h_ops = []
                    if p >= 1:
                        h_ops += [("d", i, hf[p][q][i], lambda qq, y, i=i: hf[p][qq][i][y], p - 1) for i in range(p + 1)]
                    if p < N:
                        h_ops += [("s", i, hs[p][q][i], lambda qq, y, i=i: hs[p][qq][i][y], p + 1) for i in range(p + 1)]
                    for _, _, table, h_at, p2 in h_ops:
                        if q >= 1:
                            for j in range(q + 1):
                                if vf[p2][q][j][table[x]] != h_at(q - 1, vf[p][q][j][x]):
                                    self._violation(p, q, x, "horizontal/vertical face")
                        if q < N:
                            for j in range(q + 1):
                                if vs[p2][q][j][table[x]] != h_at(q + 1, vs[p][q][j][x]):
                                    self._violation(p, q, x, "horizontal/vertical degeneracy")
        return self

    def _violation(self, p: int, q: int, x: int, what: str):
        raise CorruptInputError(
            f"{what} operators do not commute",
            witness={"bidegree": [p, q], "simplex": label_to_json(self.label(p, q, x))},
        )

    def to_dict(self) -> dict:
        N = self.trunc_level
        cells = {}
        for p in range(N + 1):
            for q in range(N + 1):
                cells[f"{p},{q}"] = {
                    "simplices": [label_to_json(lab) for lab in self.simplices[p][q]],
                    "hfaces": [list(t) for t in self.hfaces[p][q]],
                    "hdegens": [list(t) for t in self.hdegens[p][q]],
                    "vfaces": [list(t) for t in self.vfaces[p][q]],
                    "vdegens": [list(t) for t in self.vdegens[p][q]],
                }
        return {"trunc_level": N, "name": self.name, "cells": cells}

    def fingerprint(self) -> str:
        payload = self.to_dict()
        payload.pop("name")
        return fingerprint_of(payload)

    def __repr__(self) -> str:
        return f"TruncatedBiSSet({self.name or '?'}, N={self.trunc_level})"


def from_operators(labels: Callable[[int, int], Sequence[Label]],
                   hface: Callable[[int, int, int, Label], Label],
                   hdegen: Callable[[int, int, int, Label], Label],
                   vface: Callable[[int, int, int, Label], Label],
                   vdegen: Callable[[int, int, int, Label], Label],
                   trunc_level: int,
                   name: str = "") -> TruncatedBiSSet:
    """由每个双次数的单形名称和标签上的算子构造"""
    N = trunc_level
    simplices = [[tuple(labels(p, q)) for q in range(N + 1)] for p in range(N + 1)]
    index = [[{lab: i for i, lab in enumerate(cell)} for cell in row_] for row_ in simplices]

    def lookup(p: int, q: int, lab: Label, op: str) -> int:
        try:
            return index[p][q][lab]
        except KeyError:
            raise CorruptInputError(f"{op} leaves the simplex set",
                                    witness={"bidegree": [p, q], "simplex": label_to_json(lab)})

    def grid(op: Callable, dp: int, dq: int, count: Callable[[int, int], int], defined: Callable[[int, int], bool], tag: str):
        return tuple(
            tuple(
                tuple(
                    tuple(lookup(p + dp, q + dq, op(p, q, i, lab), f"{tag}_{i}") for lab in simplices[p][q])
                    for i in range(count(p, q))
                ) if defined(p, q) else ()
                for q in range(N + 1)
            )
            for p in range(N + 1)
        )

    W = TruncatedBiSSet(
        trunc_level=N,
        simplices=tuple(tuple(cell for cell in row_) for row_ in simplices),
        hfaces=grid(hface, -1, 0, lambda p, q: p + 1, lambda p, q: p >= 1, "dh"),
        hdegens=grid(hdegen, 1, 0, lambda p, q: p + 1, lambda p, q: p < N, "sh"),
        vfaces=grid(vface, 0, -1, lambda p, q: q + 1, lambda p, q: q >= 1, "dv"),
        vdegens=grid(vdegen, 0, 1, lambda p, q: q + 1, lambda p, q: q < N, "sv"),
        name=name,
    )
    logger.debug("构造双单纯集合 %s", name or "bisset")
    return W


# ==================== 基本构造 ====================
def external_product(X: TruncatedSSet, Y: TruncatedSSet) -> TruncatedBiSSet:
    """X ⊠ Y: (p, q) 单形为 (x_p, y_q), 两个方向的算子互相独立"""
    _require_same_truncation(X, Y)
    N = X.trunc_level
    simplices, hf, hs, vf, vs = [], [], [], [], []
    for p in range(N + 1):
        s_row, hf_row, hs_row, vf_row, vs_row = [], [], [], [], []
        for q in range(N + 1):
            xp, yq = X.size(p), Y.size(q)
            s_row.append(tuple((a, b) for a in X.simplices[p] for b in Y.simplices[q]))
            hf_row.append(tuple(
                tuple(t[a] * yq + b for a in range(xp) for b in range(yq)) for t in X.faces[p]
            ) if p >= 1 else ())
            hs_row.append(tuple(
                tuple(t[a] * yq + b for a in range(xp) for b in range(yq)) for t in X.degeneracies[p]
            ) if p < N else ())
            vf_row.append(tuple(
                tuple(a * Y.size(q - 1) + t[b] for a in range(xp) for b in range(yq)) for t in Y.faces[q]
            ) if q >= 1 else ())
            vs_row.append(tuple(
                tuple(a * Y.size(q + 1) + t[b] for a in range(xp) for b in range(yq)) for t in Y.degeneracies[q]
            ) if q < N else ())
        simplices.append(tuple(s_row))
        hf.append(tuple(hf_row))
        hs.append(tuple(hs_row))
        vf.append(tuple(vf_row))
        vs.append(tuple(vs_row))
    return TruncatedBiSSet(N, tuple(simplices), tuple(hf), tuple(hs), tuple(vf), tuple(vs),
                           name=f"{X.name}⊠{Y.name}")


def bisimplicial_product(V: TruncatedBiSSet, W: TruncatedBiSSet) -> TruncatedBiSSet:
    """逐双次数的积"""
    if V.trunc_level != W.trunc_level:
        raise InvalidArgumentError("mismatched truncation levels")
    N = V.trunc_level

    def pair_grid(gv: Grid, gw: Grid, dp: int, dq: int):
        out = []
        for p in range(N + 1):
            row_ = []
            for q in range(N + 1):
                if not gv[p][q]:
                    row_.append(())
                    continue
                ws = W.size(p + dp, q + dq)
                row_.append(tuple(
                    tuple(tv[a] * ws + tw[b] for a in range(V.size(p, q)) for b in range(W.size(p, q)))
                    for tv, tw in zip(gv[p][q], gw[p][q])
                ))
            out.append(tuple(row_))
        return tuple(out)

    simplices = tuple(
        tuple(tuple((a, b) for a in V.simplices[p][q] for b in W.simplices[p][q]) for q in range(N + 1))
        for p in range(N + 1)
    )
    return TruncatedBiSSet(
        N, simplices,
        pair_grid(V.hfaces, W.hfaces, -1, 0), pair_grid(V.hdegens, W.hdegens, 1, 0),
        pair_grid(V.vfaces, W.vfaces, 0, -1), pair_grid(V.vdegens, W.vdegens, 0, 1),
        name=f"{V.name}×{W.name}",
    )


def diagonal(W: TruncatedBiSSet) -> TruncatedSSet:
    """δ*W: n 层为 W(n, n), 算子为水平与竖直算子同时作用"""
    N = W.trunc_level
    faces = [()]
    for n in range(1, N + 1):
        faces.append(tuple(
            tuple(W.hfaces[n][n - 1][i][W.vfaces[n][n][i][x]] for x in range(W.size(n, n)))
            for i in range(n + 1)
        ))
    degens = []
    for n in range(N):
        degens.append(tuple(
            tuple(W.hdegens[n][n + 1][i][W.vdegens[n][n][i][x]] for x in range(W.size(n, n)))
            for i in range(n + 1)
        ))
    degens.append(())
    return TruncatedSSet(
        trunc_level=N,
        simplices=tuple(W.simplices[n][n] for n in range(N + 1)),
        faces=tuple(faces),
        degeneracies=tuple(degens),
        name=f"δ*({W.name})",
    )


def row(W: TruncatedBiSSet, q: int) -> TruncatedSSet:
    """固定 q 的单纯集合 p -> W(p, q), 带水平算子"""
    N = W.trunc_level
    if not 0 <= q <= N:
        raise InvalidArgumentError(f"row index {q} outside 0..{N}")
    return TruncatedSSet(
        trunc_level=N,
        simplices=tuple(W.simplices[p][q] for p in range(N + 1)),
        faces=tuple(W.hfaces[p][q] for p in range(N + 1)),
        degeneracies=tuple(W.hdegens[p][q] for p in range(N + 1)),
        name=f"{W.name}[-,{q}]",
    )


def column(W: TruncatedBiSSet, p: int) -> TruncatedSSet:
    """固定 p 的单纯集合 q -> W(p, q), 带竖直算子"""
    N = W.trunc_level
    if not 0 <= p <= N:
        raise InvalidArgumentError(f"column index {p} outside 0..{N}")
    return TruncatedSSet(
        trunc_level=N,
        simplices=tuple(W.simplices[p][q] for q in range(N + 1)),
        faces=tuple(W.vfaces[p][q] for q in range(N + 1)),
        degeneracies=tuple(W.vdegens[p][q] for q in range(N + 1)),
        name=f"{W.name}[{p},-]",
    )


# ==================== 双单纯映射 ====================
@dataclass(frozen=True, eq=False)
class BiSMap:
    """双单纯映射, components[p][q][x]"""
    source: TruncatedBiSSet
    target: TruncatedBiSSet
    components: Tuple[Tuple[Tuple[int, ...], ...], ...]
    name: str = ""

    def validate(self) -> "BiSMap":
        N = self.source.trunc_level
        for q in range(N + 1):
            self.row_map(q).validate()
        for p in range(N + 1):
            self.column_map(p).validate()
        return self

    def row_map(self, q: int) -> SMap:
        N = self.source.trunc_level
        return SMap(row(self.source, q), row(self.target, q),
                    tuple(self.components[p][q] for p in range(N + 1)), name=f"{self.name}[-,{q}]")

    def column_map(self, p: int) -> SMap:
        N = self.source.trunc_level
        return SMap(column(self.source, p), column(self.target, p),
                    tuple(self.components[p][q] for q in range(N + 1)), name=f"{self.name}[{p},-]")

    def diagonal_map(self) -> SMap:
        N = self.source.trunc_level
        return SMap(diagonal(self.source), diagonal(self.target),
                    tuple(self.components[n][n] for n in range(N + 1)), name=f"δ*({self.name})")

    @classmethod
    def from_function(cls, source: TruncatedBiSSet, target: TruncatedBiSSet,
                      fn: Callable[[int, int, Label], Label], name: str = "") -> "BiSMap":
        N = source.trunc_level
        comps = tuple(
            tuple(tuple(target.index_of(p, q, fn(p, q, lab)) for lab in source.simplices[p][q]) for q in range(N + 1))
            for p in range(N + 1)
        )
        return cls(source, target, comps, name=name).validate()


def external_product_map(f: SMap, g: SMap) -> BiSMap:
    """f ⊠ g"""
    S, T = external_product(f.source, g.source), external_product(f.target, g.target)
    N = S.trunc_level
    comps = tuple(
        tuple(
            tuple(f.components[p][a] * g.target.size(q) + g.components[q][b]
                  for a in range(f.source.size(p)) for b in range(g.source.size(q)))
            for q in range(N + 1)
        )
        for p in range(N + 1)
    )
    return BiSMap(S, T, comps, name=f"{f.name}⊠{g.name}")


# ==================== 实现引理检验 ====================
@dataclass(frozen=True)
class RealizationCheck:
    """逐行判定与对角线判定; 行全部通过而对角线失败即为违例"""
    row_verdicts: Tuple[EquivalenceVerdict, ...]
    diagonal_verdict: EquivalenceVerdict

    @property
    def rows_pass(self) -> bool:
        return all(v.yes for v in self.row_verdicts)

    @property
    def violation(self) -> bool:
        return self.rows_pass and self.diagonal_verdict.answer is Answer.NO

    def to_dict(self) -> dict:
        return {
            "rows": [v.to_dict() for v in self.row_verdicts],
            "diagonal": self.diagonal_verdict.to_dict(),
            "violation": self.violation,
        }


def realization_check(F: BiSMap, spec: LocalizationSpec) -> RealizationCheck:
    """每一行 F[-,q] 和对角线 δ*F 分别按范围内同调判定"""
    N = F.source.trunc_level
    rows = parallel_map(lambda q: judge_map(F.row_map(q), spec.range, f"row {q}"), range(N + 1))
    diag = judge_map(F.diagonal_map(), spec.range, "diagonal")
    result = RealizationCheck(tuple(rows), diag)
    if result.violation:
        logger.warning("实现引理违例: %s", F.name)
    return result
