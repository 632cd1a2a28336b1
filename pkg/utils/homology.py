"""
链复形与同调模块
规范化整数链复形, Smith 标准形, 同调群, 诱导映射, 以及在给定范围内的同调等价判定
全部使用精确整数 (numpy object 数组), 不使用浮点
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Hashable, List, Optional, Sequence, Tuple

import numpy as np

from config import SNF_CONFIG
from utils.errors import (
    ContractViolationError,
    InvalidArgumentError,
    UnreliableAtTruncationError,
)
from utils.helpers import cached_function, fingerprint_of, format_group, parallel_map
from utils.sset import SMap, TruncatedSSet

logger = logging.getLogger(__name__)


# ==================== 整数矩阵工具 ====================
def int_matrix(rows: Sequence[Sequence[int]], shape: Optional[Tuple[int, int]] = None) -> np.ndarray:
    """构造精确整数矩阵 (dtype=object)"""
    if shape is not None and (shape[0] == 0 or shape[1] == 0):
        return np.zeros(shape, dtype=object)
    M = np.array([[int(v) for v in row] for row in rows], dtype=object)
    if M.ndim != 2:
        M = M.reshape(shape if shape is not None else (len(rows), 0))
    return M


def zeros(m: int, n: int) -> np.ndarray:
    return np.zeros((m, n), dtype=object)


def identity(n: int) -> np.ndarray:
    M = np.zeros((n, n), dtype=object)
    for i in range(n):
        M[i, i] = 1
    return M


def matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """对象矩阵乘法, 正确处理零维情形"""
    if A.shape[1] == 0 or A.shape[0] == 0 or B.shape[1] == 0:
        return zeros(A.shape[0], B.shape[1])
    return A.dot(B)


def matrix_to_lists(M: np.ndarray) -> List[List[int]]:
    return [[int(v) for v in row] for row in M]


# ==================== Smith 标准形 ====================
@dataclass(frozen=True, eq=False)
class SmithForm:
    """D = U·A·V, U 和 V 幺模; 同时保存两者的逆

    只求不变因子时 (transforms=False) 四个变换矩阵均为 None.
    """
    U: Optional[np.ndarray]
    D: np.ndarray
    V: Optional[np.ndarray]
    U_inv: Optional[np.ndarray]
    V_inv: Optional[np.ndarray]

    @property
    def has_transforms(self) -> bool:
        return self.U is not None

    @cached_property
    def diagonal(self) -> Tuple[int, ...]:
        k = min(self.D.shape)
        return tuple(int(self.D[i, i]) for i in range(k))

    @cached_property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    @property
    def invariant_factors(self) -> Tuple[int, ...]:
        return tuple(d for d in self.diagonal if d != 0)


class _Reducer:
    """在矩阵上做初等变换, 同时维护变换矩阵及其逆"""

    def __init__(self, A: np.ndarray):
        m, n = A.shape
        self.A = A.copy()
        self.U, self.U_inv = identity(m), identity(m)
        self.V, self.V_inv = identity(n), identity(n)

    # 行变换: row_i += q * row_j
    def add_row(self, i: int, j: int, q: int):
        self.A[i, :] += q * self.A[j, :]
        self.U[i, :] += q * self.U[j, :]
        self.U_inv[:, j] -= q * self.U_inv[:, i]

    def swap_rows(self, i: int, j: int):
        if i == j:
            return
        for M in (self.A, self.U):
            M[[i, j], :] = M[[j, i], :]
        self.U_inv[:, [i, j]] = self.U_inv[:, [j, i]]

    def negate_row(self, i: int):
        self.A[i, :] *= -1
        self.U[i, :] *= -1
        self.U_inv[:, i] *= -1

    # 列变换: col_i += q * col_j
    def add_col(self, i: int, j: int, q: int):
        self.A[:, i] += q * self.A[:, j]
        self.V[:, i] += q * self.V[:, j]
        self.V_inv[j, :] -= q * self.V_inv[i, :]

    def swap_cols(self, i: int, j: int):
        if i == j:
            return
        for M in (self.A, self.V):
            M[:, [i, j]] = M[:, [j, i]]
        self.V_inv[[i, j], :] = self.V_inv[[j, i], :]


def _min_abs_position(A: np.ndarray, s: int, cells) -> Optional[Tuple[int, int]]:
    best, where = None, None
    for i, j in cells:
        v = A[i, j]
        if v != 0 and (best is None or abs(v) < best):
            best, where = abs(v), (i, j)
            if best == 1:
                break
    return where


def _bareiss_rank(A: np.ndarray) -> Tuple[int, int]:
    """无分数的 Bareiss 消元 (全主元): 秩 r 与某个非零 r 阶子式的绝对值

    每一步的中间元素都是 A 的子式, 位数受 Hadamard 界控制.
    """
    M = A.copy()
    m, n = M.shape
    prev, r = 1, 0
    while r < min(m, n):
        where = _min_abs_position(M, r, ((i, j) for i in range(r, m) for j in range(r, n)))
        if where is None:
            break
        M[[r, where[0]], :] = M[[where[0], r], :]
        M[:, [r, where[1]]] = M[:, [where[1], r]]
        pivot = M[r, r]
        if r + 1 < m and r + 1 < n:
            M[r + 1:, r + 1:] = (M[r + 1:, r + 1:] * pivot - M[r + 1:, r:r + 1] * M[r:r + 1, r + 1:]) // prev
        M[r + 1:, r] = 0
        prev = pivot
        r += 1
    return r, abs(int(prev)) if r else 0


def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """g = gcd(a, b) = x·a + y·b"""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        t = a // b
        a, b = b, a - t * b
        x0, x1 = x1, x0 - t * x1
        y0, y1 = y1, y0 - t * y1
    return a, x0, y0


def _modular_diagonal(A: np.ndarray, q: int) -> List[int]:
    """在 Z/q 上把 A 对角化, 返回对角元 (非负代表元)

    每次用行列式为 1 的 2×2 变换 [[x, y], [-b/g, a/g]] 把主元换成 gcd; 主元每轮严格变小或不变, 不变时一轮即干净.
    """
    M = A % q
    m, n = M.shape
    s = 0
    while s < min(m, n):
        where = _min_abs_position(M, s, ((i, j) for i in range(s, m) for j in range(s, n)))
        if where is None:
            break
        M[[s, where[0]], :] = M[[where[0], s], :]
        M[:, [s, where[1]]] = M[:, [where[1], s]]
        while True:
            for i in range(s + 1, m):
                b = M[i, s]
                if b:
                    a = M[s, s]
                    g, x, y = _xgcd(a, b)
                    top, row = M[s, s:].copy(), M[i, s:].copy()
                    M[s, s:] = (x * top + y * row) % q
                    M[i, s:] = ((a // g) * row - (b // g) * top) % q
            for j in range(s + 1, n):
                b = M[s, j]
                if b:
                    a = M[s, s]
                    g, x, y = _xgcd(a, b)
                    left, col = M[s:, s].copy(), M[s:, j].copy()
                    M[s:, s] = (x * left + y * col) % q
                    M[s:, j] = ((a // g) * col - (b // g) * left) % q
            if not any(M[i, s] for i in range(s + 1, m)):
                break
        s += 1
    return [int(M[i, i]) for i in range(min(m, n))]


def _divisibility_chain(orders: List[int]) -> List[int]:
    """循环群阶的列表 -> 同一个群的不变因子链 (两两换成 gcd 与 lcm)"""
    chain = list(orders)
    for i in range(len(chain)):
        for j in range(i + 1, len(chain)):
            g = math.gcd(chain[i], chain[j])
            chain[i], chain[j] = g, chain[i] * chain[j] // g
    return chain


def _modular_smith_form(A: np.ndarray) -> SmithForm:
    """只求不变因子: 模 q = 2δ 消元, δ 为非零的 r 阶子式

    coker(A) ⊗ Z/q = ⊕ Z/d_i ⊕ (Z/q)^{m-r}, 且每个 d_i | δ < q, 所以末尾 m - r 个因子恰为 q.
    """
    m, n = A.shape
    r, delta = _bareiss_rank(A)
    D = zeros(m, n)
    if r == 0:
        return SmithForm(None, D, None, None, None)
    q = 2 * delta
    orders = [math.gcd(d, q) for d in _modular_diagonal(A, q)] + [q] * (m - min(m, n))
    chain = _divisibility_chain(orders)
    if any(d != q for d in chain[r:]) or any(d == q for d in chain[:r]):
        raise ContractViolationError("modular invariant factors disagree with the rank",
                                     witness={"rank": r, "modulus": q})
    for i, d in enumerate(chain[:r]):
        D[i, i] = d
    return SmithForm(None, D, None, None, None)


def smith_normal_form(A: np.ndarray, transforms: bool = True) -> SmithForm:
    """整数矩阵的 Smith 标准形 (最小绝对值主元)

    Args:
        A: 任意整数矩阵
        transforms: False 时不维护 U, V, 改为模一个非零子式消元 (稠密大矩阵不会出现系数膨胀)

    Returns:
        SmithForm, 其中 D 对角且 d_1 | d_2 | ..., 带变换时 U·A·V = D 精确成立
    """
    A = np.asarray(A, dtype=object)
    if A.ndim != 2:
        raise InvalidArgumentError("smith_normal_form needs a 2-dimensional matrix")
    if not transforms:
        result = _modular_smith_form(A)
        if SNF_CONFIG["verify"]:
            verify_smith_form(A, result)
        return result
    m, n = A.shape
    red = _Reducer(A)
    M = red.A
    s = 0
    while s < min(m, n):
        where = _min_abs_position(M, s, ((i, j) for i in range(s, m) for j in range(s, n)))
        if where is None:
            break
        red.swap_rows(s, where[0])
        red.swap_cols(s, where[1])
        while True:
            pivot = M[s, s]
            clean = True
            for i in range(s + 1, m):
                if M[i, s] != 0:
                    red.add_row(i, s, -(M[i, s] // pivot))
                    clean = clean and M[i, s] == 0
            for j in range(s + 1, n):
                if M[s, j] != 0:
                    red.add_col(j, s, -(M[s, j] // pivot))
                    clean = clean and M[s, j] == 0
            if not clean:
                cells = [(i, s) for i in range(s, m)] + [(s, j) for j in range(s + 1, n)]
                i, j = _min_abs_position(M, s, cells)
                red.swap_rows(s, i)
                red.swap_cols(s, j)
                continue
            bad = next(
                ((i, j) for i in range(s + 1, m) for j in range(s + 1, n) if M[i, j] % pivot != 0),
                None,
            )
            if bad is None:
                break
            red.add_row(s, bad[0], 1)
        if M[s, s] < 0:
            red.negate_row(s)
        s += 1
    result = SmithForm(red.U, M, red.V, red.U_inv, red.V_inv)
    if SNF_CONFIG["verify"]:
        verify_smith_form(A, result)
    return result


def verify_smith_form(A: np.ndarray, snf: SmithForm):
    """精确检查 U·A·V = D, 对角性, 整除链和逆矩阵 (无变换时只查后三者)"""
    m, n = A.shape
    if snf.has_transforms and not np.array_equal(matmul(matmul(snf.U, A), snf.V), snf.D):
        raise ContractViolationError("U·A·V != D")
    if snf.has_transforms and not (np.array_equal(matmul(snf.U, snf.U_inv), identity(m)) and np.array_equal(matmul(snf.V, snf.V_inv), identity(n))):
        raise ContractViolationError("transformation matrices are not unimodular")
    off = [(i, j) for i in range(m) for j in range(n) if i != j and snf.D[i, j] != 0]
    if off:
        raise ContractViolationError("D is not diagonal", witness=off[:3])
    factors = snf.invariant_factors
    if any(d <= 0 for d in factors) or any(b % a != 0 for a, b in zip(factors, factors[1:])):
        raise ContractViolationError("divisibility chain fails", witness=list(factors))
    if any(d != 0 for d in snf.diagonal[len(factors):]):
        raise ContractViolationError("zero diagonal entries are not trailing")


# ==================== 链复形 ====================
@dataclass(frozen=True, eq=False)
class ChainComplex:
    """boundaries[n] 为 ∂_n: C_n -> C_{n-1} (行 = n-1 次基, 列 = n 次基); boundaries[0] 形状 (0, c_0)"""
    top_degree: int
    boundaries: Tuple[np.ndarray, ...]
    bases: Tuple[Tuple[Hashable, ...], ...]
    name: str = ""

    def rank(self, n: int) -> int:
        return len(self.bases[n])

    def ranks(self) -> Tuple[int, ...]:
        return tuple(len(b) for b in self.bases)

    def validate(self) -> "ChainComplex":
        for n in range(1, self.top_degree + 1):
            shape = (self.rank(n - 1), self.rank(n))
            if self.boundaries[n].shape != shape:
                raise ContractViolationError(f"∂_{n} has shape {self.boundaries[n].shape}, expected {shape}")
            if n >= 2 and np.any(matmul(self.boundaries[n - 1], self.boundaries[n]) != 0):
                raise ContractViolationError(f"∂_{n - 1}∘∂_{n} != 0")
        return self

    def fingerprint(self) -> str:
        return self._fingerprint

    @cached_property
    def _fingerprint(self) -> str:
        return fingerprint_of([self.top_degree] + [matrix_to_lists(B) + [list(B.shape)] for B in self.boundaries])

    @classmethod
    def from_matrices(cls, boundaries: Sequence[Sequence[Sequence[int]]], ranks: Sequence[int],
                      name: str = "") -> "ChainComplex":
        """由 ∂_1..∂_top 和各次秩构造 (用于测试和序列化)"""
        top = len(ranks) - 1
        mats = [zeros(0, ranks[0])]
        for n in range(1, top + 1):
            mats.append(int_matrix(boundaries[n - 1], shape=(ranks[n - 1], ranks[n])))
        bases = tuple(tuple(range(r)) for r in ranks)
        return cls(top, tuple(mats), bases, name=name).validate()

    def to_dict(self) -> dict:
        return {
            "top_degree": self.top_degree,
            "ranks": list(self.ranks()),
            "boundaries": [matrix_to_lists(B) for B in self.boundaries[1:]],
        }


@cached_function
def normalized_chains(X: TruncatedSSet) -> ChainComplex:
    """规范化链复形: n 次基为非退化 n 单形, ∂ 为面的交错和 (丢弃退化面)"""
    N = X.trunc_level
    bases = [X.nondegenerate(n) for n in range(N + 1)]
    position = [{x: i for i, x in enumerate(b)} for b in bases]
    mats = [zeros(0, len(bases[0]))]
    for n in range(1, N + 1):
        D = zeros(len(bases[n - 1]), len(bases[n]))
        for col, x in enumerate(bases[n]):
            for i in range(n + 1):
                row = position[n - 1].get(X.faces[n][i][x])
                if row is not None:
                    D[row, col] += (-1) ** i
        mats.append(D)
    C = ChainComplex(N, tuple(mats), tuple(tuple(X.label(n, x) for x in b) for n, b in enumerate(bases)),
                     name=X.name)
    logger.debug("规范化链复形 %s: 秩 %s", X.name or "sset", C.ranks())
    return C.validate()


def chain_map_matrix(f: SMap, k: int) -> np.ndarray:
    """f_#: C_k(X) -> C_k(Y) 在规范化基下的矩阵"""
    X, Y = f.source, f.target
    rows = {y: i for i, y in enumerate(Y.nondegenerate(k))}
    F = zeros(len(rows), len(X.nondegenerate(k)))
    for col, x in enumerate(X.nondegenerate(k)):
        row = rows.get(f.components[k][x])
        if row is not None:
            F[row, col] = 1
    return F


# ==================== 同调群 ====================
@dataclass(frozen=True, eq=False)
class AbelianGroupPresentation:
    """Z^rank ⊕ ⊕ Z/d_i; 生成元顺序为先自由后挠, 坐标矩阵把闭链映到生成元坐标"""
    degree: int
    rank: int
    torsion: Tuple[int, ...]
    generators: Tuple[Tuple[int, ...], ...]
    coordinate_matrix: np.ndarray
    cycle_test: np.ndarray

    @property
    def moduli(self) -> Tuple[int, ...]:
        return (0,) * self.rank + self.torsion

    @property
    def num_generators(self) -> int:
        return self.rank + len(self.torsion)

    def is_trivial(self) -> bool:
        return self.num_generators == 0

    def same_group(self, other: "AbelianGroupPresentation") -> bool:
        return self.rank == other.rank and self.torsion == other.torsion

    def reduce(self, coords: Sequence[int]) -> Tuple[int, ...]:
        return tuple(int(c) % d if d else int(c) for c, d in zip(coords, self.moduli))

    def coordinates(self, cycle: Sequence[int]) -> Tuple[int, ...]:
        """闭链所代表的同调类的坐标"""
        v = np.array([int(c) for c in cycle], dtype=object).reshape(-1, 1)
        if self.cycle_test.shape[0] and np.any(matmul(self.cycle_test, v) != 0):
            raise ContractViolationError(f"chain is not a cycle in degree {self.degree}")
        raw = matmul(self.coordinate_matrix, v)
        return self.reduce(raw[:, 0])

    def describe(self) -> str:
        return format_group(self.rank, self.torsion)

    def to_dict(self) -> dict:
        return {"degree": self.degree, "rank": self.rank, "torsion": list(self.torsion), "group": self.describe()}


@cached_function
def homology(C: ChainComplex, k: int) -> AbelianGroupPresentation:
    """H_k = ker ∂_k / im ∂_{k+1}, 附带生成元闭链

    最高次 (top_degree) 在截断下不可靠, 拒绝计算.
    """
    if k < 0:
        raise InvalidArgumentError("homology degree must be non-negative")
    if k > C.top_degree - 1:
        raise UnreliableAtTruncationError(
            f"H_{k} is unreliable at truncation {C.top_degree}",
            witness={"degree": k, "top_degree": C.top_degree},
        )
    A, B = C.boundaries[k], C.boundaries[k + 1]
    snf_a = smith_normal_form(A)
    r = snf_a.rank
    kernel = snf_a.V[:, r:]
    to_kernel = snf_a.V_inv[r:, :]
    image = matmul(to_kernel, B)
    snf_b = smith_normal_form(image)
    factors = snf_b.diagonal
    z = kernel.shape[1]
    new_basis = matmul(kernel, snf_b.U_inv)
    coords = matmul(snf_b.U, to_kernel)
    rb = snf_b.rank
    torsion_idx = [i for i in range(rb) if factors[i] > 1]
    free_idx = list(range(rb, z))
    order = free_idx + torsion_idx
    generators = tuple(tuple(int(v) for v in new_basis[:, i]) for i in order)
    coordinate_matrix = coords[order, :] if order else zeros(0, A.shape[1])
    H = AbelianGroupPresentation(
        degree=k,
        rank=len(free_idx),
        torsion=tuple(int(factors[i]) for i in torsion_idx),
        generators=generators,
        coordinate_matrix=coordinate_matrix,
        cycle_test=A,
    )
    if SNF_CONFIG["verify"]:
        for g in generators:
            if A.shape[0] and np.any(matmul(A, np.array(g, dtype=object).reshape(-1, 1)) != 0):
                raise ContractViolationError("generator lift is not a cycle")
    return H


def homology_of(X: TruncatedSSet, k: int) -> AbelianGroupPresentation:
    return homology(normalized_chains(X), k)


def homology_groups(X: TruncatedSSet, max_degree: int) -> List[AbelianGroupPresentation]:
    """0..max_degree 次同调, 各次独立计算 (可并行, 结果与调度无关)"""
    C = normalized_chains(X)
    return parallel_map(lambda k: homology(C, k), range(max_degree + 1))


def homology_table(X: TruncatedSSet, max_degree: int) -> List[str]:
    return [H.describe() for H in homology_groups(X, max_degree)]


# ==================== 诱导映射 ====================
@dataclass(frozen=True, eq=False)
class HomologyMap:
    """f_*: H_k(X) -> H_k(Y) 在所选生成元上的矩阵 (列 = 源生成元)"""
    degree: int
    source: AbelianGroupPresentation
    target: AbelianGroupPresentation
    matrix: np.ndarray

    def is_surjective(self) -> bool:
        t = self.target
        relations = zeros(t.num_generators, len(t.torsion))
        for j, d in enumerate(t.torsion):
            relations[t.rank + j, j] = d
        combined = np.concatenate([self.matrix, relations], axis=1) if relations.shape[1] else self.matrix
        if t.num_generators == 0:
            return True
        snf = smith_normal_form(combined, transforms=False)
        return snf.rank == t.num_generators and all(d == 1 for d in snf.invariant_factors)

    def is_isomorphism(self) -> bool:
        # 有限生成阿贝尔群是 Hopf 的: 同构群之间的满射是同构
        return self.source.same_group(self.target) and self.is_surjective()

    def compose(self, first: "HomologyMap") -> "HomologyMap":
        """self ∘ first"""
        M = matmul(self.matrix, first.matrix)
        reduced = zeros(*M.shape)
        for i in range(M.shape[0]):
            d = self.target.moduli[i]
            for j in range(M.shape[1]):
                reduced[i, j] = M[i, j] % d if d else M[i, j]
        return HomologyMap(self.degree, first.source, self.target, reduced)

    def to_lists(self) -> List[List[int]]:
        return matrix_to_lists(self.matrix)


def induced_map(f: SMap, k: int) -> HomologyMap:
    """把源的生成元闭链推到目标, 再用目标的 SNF 数据表示"""
    HX, HY = homology_of(f.source, k), homology_of(f.target, k)
    F = chain_map_matrix(f, k)
    M = zeros(HY.num_generators, HX.num_generators)
    for j, gen in enumerate(HX.generators):
        pushed = matmul(F, np.array(gen, dtype=object).reshape(-1, 1))[:, 0] if gen else []
        for i, c in enumerate(HY.coordinates(pushed)):
            M[i, j] = c
    return HomologyMap(k, HX, HY, M)


def mapping_cone(f: SMap) -> ChainComplex:
    """链映射 f_# 的映射锥: Cone_n = C_{n-1}(X) ⊕ C_n(Y), ∂(x, y) = (-∂x, f x + ∂y)"""
    CX, CY = normalized_chains(f.source), normalized_chains(f.target)
    N = CX.top_degree
    rank_x = lambda n: CX.rank(n) if 0 <= n <= N else 0
    bases = tuple(
        tuple(("s", b) for b in (CX.bases[n - 1] if n >= 1 else ())) + tuple(("t", b) for b in CY.bases[n])
        for n in range(N + 1)
    )
    mats = [zeros(0, len(bases[0]))]
    for n in range(1, N + 1):
        D = zeros(len(bases[n - 1]), len(bases[n]))
        xs_prev, xs = rank_x(n - 2), rank_x(n - 1)
        if n >= 2:
            D[:xs_prev, :xs] = -CX.boundaries[n - 1]
        D[xs_prev:, :xs] = chain_map_matrix(f, n - 1)
        D[xs_prev:, xs:] = CY.boundaries[n]
        mats.append(D)
    return ChainComplex(N, tuple(mats), bases, name=f"cone({f.name})").validate()


# ==================== 局部化判定 ====================
class LocalizationKind(Enum):
    """λ 的可实现替身"""
    H_RANGE = "h-range"
    STALKWISE = "stalkwise-h-range"
    LEVELWISE = "levelwise-h-range"


class Answer(Enum):
    """判定结果"""
    YES = "yes"
    NO = "no"
    INCOMPLETE = "incomplete-at-truncation"
    NOT_CHECKABLE = "not-checkable"


@dataclass(frozen=True)
class LocalizationSpec:
    """命名的等价谓词: 范围内同调同构 (整体 / 逐茎 / 逐对象)"""
    name: LocalizationKind = LocalizationKind.H_RANGE
    range: int = 2
    points: Tuple = ()
    objects: Tuple = ()

    @classmethod
    def h_range(cls, n_max: int) -> "LocalizationSpec":
        return cls(LocalizationKind.H_RANGE, n_max)

    def to_dict(self) -> dict:
        return {"name": self.name.value, "range": self.range,
                "points": [getattr(p, "name", str(p)) for p in self.points],
                "objects": [str(o) for o in self.objects]}


@dataclass(frozen=True)
class EquivalenceVerdict:
    """is_equivalence 的结果; NO 时带失败的次数和上下文"""
    answer: Answer
    range: int
    failing_degree: Optional[int] = None
    context: Optional[str] = None
    detail: str = ""
    cone_agrees: Optional[bool] = None
    checked: Tuple[str, ...] = ()

    @property
    def yes(self) -> bool:
        return self.answer is Answer.YES

    def to_dict(self) -> dict:
        payload = {"answer": self.answer.value, "range": self.range, "checked": list(self.checked)}
        if self.failing_degree is not None:
            payload["failing_degree"] = self.failing_degree
        if self.context is not None:
            payload["context"] = self.context
        if self.detail:
            payload["detail"] = self.detail
        if self.cone_agrees is not None:
            payload["cone_agrees"] = self.cone_agrees
        return payload


def judge_map(f: SMap, n_max: int, context: str = "") -> EquivalenceVerdict:
    """判断 f 是否在 0..n_max 次诱导同调同构, 并用映射锥交叉检验"""
    N = f.source.trunc_level
    if f.target.trunc_level != N:
        raise InvalidArgumentError("map between different truncation levels")
    if n_max >= N:
        return EquivalenceVerdict(Answer.INCOMPLETE, n_max, context=context or None,
                                  detail=f"range {n_max} is not below truncation {N}")
    maps = parallel_map(lambda k: induced_map(f, k), range(n_max + 1))
    failing = next((hm for hm in maps if not hm.is_isomorphism()), None)
    cone = mapping_cone(f)
    cone_trivial = [homology(cone, k).is_trivial() for k in range(n_max + 1)]
    cone_vanishes = all(cone_trivial)
    if failing is None:
        agrees = cone_vanishes
    else:
        # 锥在范围内消失时, 只允许最高次的单射性失败
        agrees = not cone_vanishes or (failing.degree == n_max and failing.is_surjective())
    if not agrees:
        raise ContractViolationError(
            "induced maps and mapping-cone homology disagree",
            witness={"map": f.name, "cone_trivial": cone_trivial,
                     "failing_degree": None if failing is None else failing.degree},
        )
    if failing is None:
        return EquivalenceVerdict(Answer.YES, n_max, context=context or None, cone_agrees=True,
                                  checked=(context,) if context else ())
    detail = (f"H_{failing.degree}: {failing.source.describe()} -> {failing.target.describe()} "
              f"is not an isomorphism")
    logger.info("映射 %s 在 H_%d 失败: %s", f.name or context, failing.degree, detail)
    return EquivalenceVerdict(Answer.NO, n_max, failing_degree=failing.degree, context=context or None,
                              detail=detail, cone_agrees=True, checked=(context,) if context else ())


def is_equivalence(spec: LocalizationSpec, f) -> EquivalenceVerdict:
    """按 spec 判定 f; 逐茎/逐对象的情形由 f.maps_for(spec) 给出需要判定的映射列表"""
    if spec.name is LocalizationKind.H_RANGE:
        if not isinstance(f, SMap):
            raise InvalidArgumentError("h-range judges maps of simplicial sets")
        return judge_map(f, spec.range)
    maps = f.maps_for(spec)
    if not maps:
        return EquivalenceVerdict(Answer.NOT_CHECKABLE, spec.range, detail="no points or objects to judge")
    checked = []
    for context, g in maps:
        verdict = judge_map(g, spec.range, context)
        if not verdict.yes:
            return verdict
        checked.append(context)
    return EquivalenceVerdict(Answer.YES, spec.range, cone_agrees=True, checked=tuple(checked))


def is_acyclic(X: TruncatedSSet, n_max: int) -> bool:
    """约化同调在 0..n_max 次为零"""
    groups = homology_groups(X, n_max)
    return groups[0].rank == 1 and not groups[0].torsion and all(H.is_trivial() for H in groups[1:])
