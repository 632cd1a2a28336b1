"""
证明构造模块
作用串 σ 上的双单纯对象 X_σ, X⁰_σ, 比较映射 σ̄_*, 角形变体的交换方块,
以及沿测试映射 a: A -> mor 的单形范畴替换 X̃(s), X̃(t)
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from utils.bisimplicial import BiSMap, TruncatedBiSSet, from_operators
from utils.errors import IncompleteAtTruncationError, InvalidArgumentError
from utils.homology import EquivalenceVerdict, LocalizationSpec, judge_map
from utils.internal_category import InternalAction, action_map, mu_bar
from utils.sset import SMap, _monotone_sequences

logger = logging.getLogger(__name__)

PROOF_MODES = ("X_sigma", "X0_sigma", "sigma_bar", "horn_variant", "Xtilde_s", "Xtilde_t")


@dataclass(frozen=True)
class ActionString:
    """第 n 层的可复合串 c_0 -σ_1-> c_1 -> ... -σ_n-> c_n (编号)"""
    level: int
    objects: Tuple[int, ...]
    arrows: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.arrows)


def action_string(A: InternalAction, n: int, arrows: Sequence[int], start: Optional[int] = None) -> ActionString:
    """由第 n 层的 n 个态射构造作用串; 长度 0 时必须给出 start"""
    C = A.base
    if not 0 <= n <= A.trunc_level:
        raise IncompleteAtTruncationError(f"string level {n} exceeds truncation {A.trunc_level}")
    arrows = tuple(arrows)
    if len(arrows) != n:
        raise InvalidArgumentError(f"a string at level {n} has {n} arrows, got {len(arrows)}")
    if not arrows:
        if start is None:
            raise InvalidArgumentError("a string of length 0 needs its object")
        return ActionString(n, (start,), ())
    objects = [C.s.components[n][arrows[0]]]
    for f in arrows:
        if C.s.components[n][f] != objects[-1]:
            raise InvalidArgumentError("arrows are not composable",
                                       witness={"arrow": str(C.mor.label(n, f))})
        objects.append(C.t.components[n][f])
    return ActionString(n, tuple(objects), arrows)


def _composite(A: InternalAction, sigma: ActionString, i: int, j: int) -> int:
    """σ_j ∘ ... ∘ σ_{i+1}: c_i -> c_j (i = j 时为单位)"""
    C = A.base
    n = sigma.level
    g = C.e.components[n][sigma.objects[i]]
    for k in range(i, j):
        g = C.compose(n, sigma.arrows[k], g)
    return g


def _move(A: InternalAction, sigma: ActionString, beta: Tuple[int, ...], i: int, j: int, x: int) -> int:
    """x ∈ X_q 沿 β*(c_i -> c_j) 作用"""
    if i == j:
        return x
    q = len(beta) - 1
    phi = A.base.mor.restrict(sigma.level, _composite(A, sigma, i, j), beta)
    if not A.defined(q, phi, x):
        raise IncompleteAtTruncationError("action leaves the weight cap", witness={"level": q})
    return A.act(q, phi, x)


def _string_object(A: InternalAction, sigma: ActionString, based: bool, horn: Optional[int] = None,
                   name: str = "") -> TruncatedBiSSet:
    """based=False 为 X_σ (π x = β*c_{α(0)}), based=True 为 X⁰_σ (π x = β*c_0); horn 给出时 α, β 同时避开某个 l != k"""
    C, X = A.base, A.total
    N, n = A.trunc_level, sigma.level
    ob_pi = A.proj.components

    def in_horn(alpha, beta) -> bool:
        if horn is None:
            return True
        return any(l not in alpha and l not in beta for l in range(n + 1) if l != horn)

    def labels(p: int, q: int):
        out = []
        for alpha in _monotone_sequences(n, p + 1):
            anchor = sigma.objects[0] if based else sigma.objects[alpha[0]]
            for beta in _monotone_sequences(n, q + 1):
                if not in_horn(alpha, beta):
                    continue
                c = C.ob.restrict(n, anchor, beta)
                out.extend((alpha, beta, X.label(q, x)) for x in range(X.size(q)) if ob_pi[q][x] == c)
        return out

    def hface(p, q, i, lab):
        alpha, beta, x_label = lab
        new = alpha[:i] + alpha[i + 1:]
        if based:
            return new, beta, x_label
        x = _move(A, sigma, beta, alpha[0], new[0], X.index_of(q, x_label))
        return new, beta, X.label(q, x)

    def hdegen(p, q, i, lab):
        alpha, beta, x_label = lab
        return alpha[:i + 1] + alpha[i:], beta, x_label

    def vface(p, q, j, lab):
        alpha, beta, x_label = lab
        return alpha, beta[:j] + beta[j + 1:], X.label(q - 1, X.faces[q][j][X.index_of(q, x_label)])

    def vdegen(p, q, j, lab):
        alpha, beta, x_label = lab
        return alpha, beta[:j + 1] + beta[j:], X.label(q + 1, X.degeneracies[q][j][X.index_of(q, x_label)])

    W = from_operators(labels, hface, hdegen, vface, vdegen, N,
                       name=name or ("X0_sigma" if based else "X_sigma"))
    return W


def x_sigma(A: InternalAction, sigma: ActionString, horn: Optional[int] = None) -> TruncatedBiSSet:
    return _string_object(A, sigma, based=False, horn=horn)


def x0_sigma(A: InternalAction, sigma: ActionString, horn: Optional[int] = None) -> TruncatedBiSSet:
    return _string_object(A, sigma, based=True, horn=horn)


def sigma_bar(A: InternalAction, sigma: ActionString, horn: Optional[int] = None,
              source: Optional[TruncatedBiSSet] = None, target: Optional[TruncatedBiSSet] = None) -> BiSMap:
    """σ̄_*: X⁰_σ -> X_σ, (α, β, x) -> (α, β, β*(σ_{α(0)}∘...∘σ_1)_* x)"""
    X = A.total
    source = source or x0_sigma(A, sigma, horn)
    target = target or x_sigma(A, sigma, horn)

    def image(p, q, lab):
        alpha, beta, x_label = lab
        x = _move(A, sigma, beta, 0, alpha[0], X.index_of(q, x_label))
        return alpha, beta, X.label(q, x)

    return BiSMap.from_function(source, target, image, name="sigma_bar")


def column_decomposition_agrees(A: InternalAction, sigma: ActionString, F: BiSMap, p: int) -> bool:
    """固定 p 时, σ̄_* 在第 p 列上是 ∐_α (σ_{α(0)}∘...∘σ_1)_* 的余积 (逐个单形比较)"""
    X = A.total
    n = sigma.level
    col = F.column_map(p)
    for alpha in _monotone_sequences(n, p + 1):
        phi = _composite(A, sigma, 0, alpha[0])
        local = action_map(A, n, phi)
        for q in range(A.trunc_level + 1):
            for z, lab in enumerate(col.source.simplices[q]):
                if lab[0] != alpha:
                    continue
                beta, x_label = lab[1], lab[2]
                if not local.source.has_label(q, (beta, x_label)):
                    continue
                expected = local.target.label(q, local.components[q][local.source.index_of(q, (beta, x_label))])
                if col.target.label(q, col.components[q][z]) != (alpha,) + tuple(expected):
                    return False
    return True


def column_verdicts(F: BiSMap, spec: LocalizationSpec) -> Tuple[EquivalenceVerdict, ...]:
    """逐列 (固定 p) 的 h-range 判定"""
    N = F.source.trunc_level
    return tuple(judge_map(F.column_map(p), spec.range, f"column {p}") for p in range(N + 1))


@dataclass(frozen=True)
class HornSquare:
    """角形部分到整体的包含与 σ̄_* 构成的方块"""
    horn: int
    commutes: bool
    top: BiSMap
    bottom: BiSMap
    left: BiSMap
    right: BiSMap


def _inclusion(sub: TruncatedBiSSet, whole: TruncatedBiSSet, name: str) -> BiSMap:
    return BiSMap.from_function(sub, whole, lambda p, q, lab: lab, name=name)


def horn_square(A: InternalAction, sigma: ActionString, k: int) -> HornSquare:
    """X⁰_{σ,k} -> X⁰_σ 在 X_{σ,k} -> X_σ 之上; 检查 σ̄_*∘包含 = 包含∘σ̄_*"""
    if not 0 <= k <= sigma.level:
        raise InvalidArgumentError(f"horn index {k} outside 0..{sigma.level}")
    whole0, whole = x0_sigma(A, sigma), x_sigma(A, sigma)
    part0, part = x0_sigma(A, sigma, horn=k), x_sigma(A, sigma, horn=k)
    top = _inclusion(part0, whole0, "incl0")
    bottom = _inclusion(part, whole, "incl")
    left = sigma_bar(A, sigma, horn=k, source=part0, target=part)
    right = sigma_bar(A, sigma, source=whole0, target=whole)
    N = A.trunc_level
    commutes = all(
        right.components[p][q][top.components[p][q][z]] == bottom.components[p][q][left.components[p][q][z]]
        for p in range(N + 1) for q in range(N + 1) for z in range(part0.size(p, q))
    )
    if not commutes:
        logger.warning("角形方块不交换: k = %d", k)
    return HornSquare(k, commutes, top, bottom, left, right)


# ==================== 单形范畴替换 ====================
def _chains(T, dim: int, q: int) -> List[Tuple[Tuple[Tuple[int, ...], ...], Tuple[int, ...], int]]:
    """长度 q 的链 (θ_1..θ_q, (n_0..n_q), a_q), θ_i: [n_{i-1}] -> [n_i], 各 n_i <= dim"""
    out = []

    def extend(thetas: Tuple, dims: Tuple[int, ...]):
        if len(thetas) == q:
            out.extend((thetas, dims, a) for a in range(T.size(dims[-1])))
            return
        for m in range(dim + 1):
            for theta in _monotone_sequences(m, dims[-1] + 1):
                extend(thetas + (theta,), dims + (m,))

    for n0 in range(dim + 1):
        extend((), (n0,))
    return out


def xtilde(A: InternalAction, a: SMap, side: str, dim: int = 1) -> TruncatedBiSSet:
    """X̃(s) 或 X̃(t) 沿测试映射 a: T -> mor

    (p, q) 单形为 (θ_0, (θ_1..θ_q), (n_0..n_q), a_q, e), θ_0: [p] -> [n_0], e ∈ s*X (或 t*X) 位于 θ_0*a_0 之上.
    """
    if side not in ("s", "t"):
        raise InvalidArgumentError(f"side must be 's' or 't', got {side!r}")
    N = A.trunc_level
    if dim > N:
        raise IncompleteAtTruncationError(f"chain dimension {dim} exceeds truncation {N}")
    mu, s_leg, t_leg = mu_bar(A)
    E, leg = (mu.source, s_leg) if side == "s" else (mu.target, t_leg)
    mor = A.base.mor
    T = a.source

    def first_simplex(thetas, dims, a_last) -> int:
        x = a_last
        for theta, n in zip(reversed(thetas), reversed(dims[1:])):
            x = T.restrict(n, x, theta)
        return x

    def labels(p: int, q: int):
        out = []
        for thetas, dims, a_last in _chains(T, dim, q):
            over_base = a.components[dims[0]][first_simplex(thetas, dims, a_last)]
            a_label = T.label(dims[-1], a_last)
            for theta0 in _monotone_sequences(dims[0], p + 1):
                over = mor.restrict(dims[0], over_base, theta0)
                out.extend((theta0, thetas, dims, a_label, E.label(p, e))
                           for e in range(E.size(p)) if leg.components[p][e] == over)
        return out

    def hface(p, q, i, lab):
        theta0, thetas, dims, a_label, e_label = lab
        e = E.faces[p][i][E.index_of(p, e_label)]
        return theta0[:i] + theta0[i + 1:], thetas, dims, a_label, E.label(p - 1, e)

    def hdegen(p, q, i, lab):
        theta0, thetas, dims, a_label, e_label = lab
        e = E.degeneracies[p][i][E.index_of(p, e_label)]
        return theta0[:i + 1] + theta0[i:], thetas, dims, a_label, E.label(p + 1, e)

    def vface(p, q, j, lab):
        theta0, thetas, dims, a_label, e_label = lab
        if j == 0:
            return tuple(thetas[0][t] for t in theta0), thetas[1:], dims[1:], a_label, e_label
        if j == q:
            a_last = T.restrict(dims[q], T.index_of(dims[q], a_label), thetas[-1])
            return theta0, thetas[:-1], dims[:-1], T.label(dims[q - 1], a_last), e_label
        composed = tuple(thetas[j][t] for t in thetas[j - 1])
        return theta0, thetas[:j - 1] + (composed,) + thetas[j + 1:], dims[:j] + dims[j + 1:], a_label, e_label

    def vdegen(p, q, j, lab):
        theta0, thetas, dims, a_label, e_label = lab
        ident = tuple(range(dims[j] + 1))
        return theta0, thetas[:j] + (ident,) + thetas[j:], dims[:j + 1] + dims[j:], a_label, e_label

    W = from_operators(labels, hface, hdegen, vface, vdegen, N, name=f"Xtilde({side})")
    logger.debug("X̃(%s): 双次数单形数 %s", side, W.counts())
    return W


def xtilde_comparison(A: InternalAction, a: SMap, dim: int = 1) -> BiSMap:
    """X̃(s) -> X̃(t), 在 e 上作用 μ̄"""
    mu, _, _ = mu_bar(A)
    source, target = xtilde(A, a, "s", dim), xtilde(A, a, "t", dim)

    def image(p, q, lab):
        theta0, thetas, dims, a_label, e_label = lab
        e = mu.components[p][mu.source.index_of(p, e_label)]
        return theta0, thetas, dims, a_label, mu.target.label(p, e)

    return BiSMap.from_function(source, target, image, name="mu_bar~")


# ==================== 统一入口 ====================
def proof_constructions(A: InternalAction, sigma: Optional[ActionString], mode: str, k: Optional[int] = None,
                        test_map: Optional[SMap] = None, dim: int = 1):
    """按名称构造证明中的对象或映射"""
    if mode not in PROOF_MODES:
        raise InvalidArgumentError(f"unknown construction {mode!r}")
    if mode in ("Xtilde_s", "Xtilde_t"):
        if test_map is None:
            raise InvalidArgumentError(f"{mode} needs a test map into mor")
        return xtilde(A, test_map, mode[-1], dim)
    if sigma is None:
        raise InvalidArgumentError(f"{mode} needs an action string")
    if mode == "X_sigma":
        return x_sigma(A, sigma)
    if mode == "X0_sigma":
        return x0_sigma(A, sigma)
    if mode == "sigma_bar":
        return sigma_bar(A, sigma)
    if k is None:
        raise InvalidArgumentError("horn_variant needs the horn index k")
    return horn_square(A, sigma, k)
