"""
独立的同调预言机
有理秩加行列式因子 (所有 i 阶子式的最大公约数), 只用 sympy, 不经过 SNF 模块
"""
import math
import random
from itertools import combinations
from typing import List, Sequence, Tuple

import sympy


def matrix(rows: Sequence[Sequence[int]], shape: Tuple[int, int]) -> sympy.Matrix:
    if shape[0] == 0 or shape[1] == 0:
        return sympy.zeros(*shape)
    return sympy.Matrix(rows)


def invariant_factors(M: sympy.Matrix) -> List[int]:
    """d_i / d_{i-1}, 其中 d_i 为 i 阶子式的最大公约数"""
    r = M.rank()
    divisors = [1]
    for i in range(1, r + 1):
        g = 0
        for rows in combinations(range(M.rows), i):
            for cols in combinations(range(M.cols), i):
                g = math.gcd(g, int(M.extract(list(rows), list(cols)).det()))
        divisors.append(g)
    return [divisors[i] // divisors[i - 1] for i in range(1, r + 1)]


def oracle_homology(boundaries: Sequence[Sequence[Sequence[int]]], ranks: Sequence[int], k: int) -> Tuple[int, Tuple[int, ...]]:
    """(自由秩, 挠系数); boundaries[n-1] 为 ∂_n"""
    outgoing = matrix(boundaries[k - 1], (ranks[k - 1], ranks[k])) if k > 0 else sympy.zeros(0, ranks[k])
    incoming = matrix(boundaries[k], (ranks[k], ranks[k + 1]))
    rank_out = outgoing.rank() if outgoing.rows and outgoing.cols else 0
    rank_in = incoming.rank() if incoming.rows and incoming.cols else 0
    free = ranks[k] - rank_out - rank_in
    torsion = tuple(d for d in invariant_factors(incoming) if d > 1) if incoming.rows and incoming.cols else ()
    return free, torsion


def _unimodular(rng: random.Random, n: int) -> sympy.Matrix:
    U = sympy.eye(n)
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            U[i, :] = -U[i, :]
        else:
            U[i, :] = U[i, :] + rng.choice([-2, -1, 1, 2]) * U[j, :]
    return U


def random_chain_complex(rng: random.Random, top: int = 3, max_rank: int = 6):
    """基本复形 (自由生成元与 d 倍对) 的直和, 再用随机幺模基变换打乱

    返回 (boundaries, ranks), boundaries[n-1] 为 ∂_n 的行列表.
    """
    ranks = [0] * (top + 1)
    pairs = []
    for _ in range(rng.randint(2, 3 * top)):
        k = rng.randint(0, top)
        if k < top and rng.random() < 0.6 and ranks[k] < max_rank and ranks[k + 1] < max_rank:
            pairs.append((k, ranks[k], ranks[k + 1], rng.randint(1, 4)))
            ranks[k] += 1
            ranks[k + 1] += 1
        elif ranks[k] < max_rank:
            ranks[k] += 1
    diagonal = [sympy.zeros(ranks[n - 1], ranks[n]) for n in range(1, top + 1)]
    for k, row, col, d in pairs:
        diagonal[k][row, col] = d
    bases = [_unimodular(rng, r) if r else sympy.zeros(0, 0) for r in ranks]
    boundaries = []
    for n in range(1, top + 1):
        D = diagonal[n - 1]
        if D.rows and D.cols:
            B = bases[n - 1] * D * bases[n].inv()
            boundaries.append([[int(v) for v in B.row(i)] for i in range(B.rows)])
        else:
            boundaries.append([[0] * ranks[n] for _ in range(ranks[n - 1])])
    return boundaries, ranks
