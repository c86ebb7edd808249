"""
谱计算引擎模块
功能：σ̂ 精确递推与闭式、2-adic 赋值报告、TM 等价、奇数次幂互斥见证、经验相关与稳定化检查
"""

import sys
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from ..utils.errors import (DomainError, SequenceRangeError, UnsupportedInputError,
                            WitnessNotFoundError)
from ..utils.resource_monitor import get_default_monitor
from ..utils.run_config import DEFAULT_MAX_HORIZON, DEFAULT_WITNESS_BOUND
from .exact_arith import find_odd_t, floor_log2, lemma_t_candidates, odd_chain, v2
from .sequence_generator import (DENSE_CHUNK, MorseSequence, MorseSpec, SequenceAccessor,
                                 ThueMorseSequence)

SIGMA_0 = Fraction(1)
SIGMA_1 = Fraction(-1, 3)


class SigmaCache:
    """σ̂ 备忘表：读不加锁，写入加锁"""

    def __init__(self):
        self._memo: Dict[int, Fraction] = {0: SIGMA_0, 1: SIGMA_1}
        self._lock = threading.Lock()

    def get(self, k: int) -> Optional[Fraction]:
        return self._memo.get(k)

    def put(self, k: int, value: Fraction):
        with self._lock:
            self._memo.setdefault(k, value)

    def __len__(self) -> int:
        return len(self._memo)

    def __contains__(self, k: int) -> bool:
        return k in self._memo


@dataclass(frozen=True)
class ValuationReport:
    """奇数 K 的 σ̂(K) 赋值结构

    lemma_holds 严格按公式计算；K ∈ {1, 3} 时弱形式不成立，base_case 标记 K < 5 的基例。
    """
    K: int
    sigma: Fraction
    is_zero: bool
    v2: Optional[int]
    l: int
    lemma_holds: bool
    base_case: bool

    @property
    def acceptable(self) -> bool:
        return self.lemma_holds or self.base_case

    def to_dict(self) -> dict:
        return {"K": self.K, "sigma": self.sigma, "is_zero": self.is_zero, "v2": self.v2,
                "l": self.l, "lemma_holds": self.lemma_holds, "base_case": self.base_case}


@dataclass(frozen=True)
class DisjointnessWitness:
    """|σ̂(t·r)| ≠ |σ̂(t·s)| 的见证"""
    r: int
    s: int
    t: int
    c1: Fraction
    c2: Fraction
    l_split: Optional[int] = None
    lemma_t: Tuple[int, ...] = ()
    source: str = "scan"

    def to_dict(self) -> dict:
        return {"r": self.r, "s": self.s, "t": self.t, "c1": self.c1, "c2": self.c2,
                "l_split": self.l_split, "lemma_t": list(self.lemma_t), "source": self.source}


@dataclass(frozen=True)
class CorrelationReport:
    """(1/N)Σ_{n=1}^{N} m_{n+k}·m_n 的经验值与精确目标"""
    k: int
    N: int
    empirical: Fraction
    exact: Optional[Fraction] = None
    deviation: Optional[float] = None
    scale: Optional[int] = None
    run_length: Optional[int] = None
    envelope: Optional[Fraction] = None
    extra: Dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        row = {"k": self.k, "N": self.N, "empirical": self.empirical,
               "exact": self.exact, "deviation": self.deviation}
        if self.scale is not None:
            row.update({"scale": self.scale, "run_length": self.run_length,
                        "envelope": self.envelope})
        row.update(self.extra)
        return row


def pair_disjoint_expected(r: int, s: int) -> bool:
    """σ^(r) ⊥ σ^(s) 当且仅当 max{r/s, s/r} 不是 2 的幂，即 r、s 的奇数部分不同"""
    if r < 1 or s < 1:
        raise DomainError(f"r, s 必须为正整数，收到 ({r}, {s})")
    return (r >> ((r & -r).bit_length() - 1)) != (s >> ((s & -s).bit_length() - 1))


class SpectralEngine:
    """Thue-Morse 谱计算引擎"""

    def __init__(self, logger=None,
                 witness_bound: int = DEFAULT_WITNESS_BOUND,
                 max_horizon: int = DEFAULT_MAX_HORIZON,
                 threads: int = 1,
                 monitor=None):
        """
        初始化谱计算引擎

        Args:
            logger: 日志记录器实例
            witness_bound: 互斥见证的 t 扫描上界
            max_horizon: 经验相关允许的最大下标
            threads: 经验相关的并行线程数
            monitor: ResourceMonitor 实例
        """
        self.logger = logger
        self.cache = SigmaCache()
        self.witness_bound = witness_bound
        self.max_horizon = max_horizon
        self.threads = max(1, threads)
        self.monitor = monitor or get_default_monitor()

    def log_message(self, message: str, level: str = "INFO"):
        """记录日志消息"""
        if self.logger:
            self.logger.log_message(message, level)
        else:
            print(f"[{level}] {message}", file=sys.stderr)

    # ------------------------------------------------------------------
    # 精确值
    # ------------------------------------------------------------------

    def sigma_hat(self, k: int) -> Fraction:
        """σ̂(k)：σ̂(2n) = σ̂(n)，σ̂(2n+1) = −(σ̂(n) + σ̂(n+1))/2（n ≥ 1）

        用显式栈代替递归，对任意大的 k 都不会触及递归深度限制。
        """
        if k < 0:
            raise DomainError(f"σ̂ 只对 k ≥ 0 计算，收到 {k}")
        cached = self.cache.get(k)
        if cached is not None:
            return cached

        stack = [k]
        while stack:
            n = stack[-1]
            if n in self.cache:
                stack.pop()
                continue
            if n % 2 == 0:
                half = self.cache.get(n // 2)
                if half is None:
                    stack.append(n // 2)
                    continue
                self.cache.put(n, half)
            else:
                m = n // 2
                low, high = self.cache.get(m), self.cache.get(m + 1)
                if low is None or high is None:
                    if low is None:
                        stack.append(m)
                    if high is None:
                        stack.append(m + 1)
                    continue
                self.cache.put(n, -(low + high) / 2)
            stack.pop()
        return self.cache.get(k)

    def sigma_hat_closed(self, n: int, a: int) -> Fraction:
        """(−1/2)^a·(σ̂(n+1) + σ̂(n)/3) − σ̂(n)/3，等于 σ̂(2^a·n + 1)"""
        if n < 1 or a < 1:
            raise DomainError(f"闭式要求 n ≥ 1 且 a ≥ 1，收到 ({n}, {a})")
        sigma_n = self.sigma_hat(n)
        return Fraction(-1, 2) ** a * (self.sigma_hat(n + 1) + sigma_n / 3) - sigma_n / 3

    def sigma_table(self, ks: Iterable[int]) -> List[Tuple[int, Fraction]]:
        return [(k, self.sigma_hat(k)) for k in ks]

    def valuation_report(self, K: int) -> ValuationReport:
        """σ̂(K) 的 2-adic 赋值与 l(K) 的关系

        Raises:
            DomainError: K 为偶数或 < 1
        """
        if K < 1 or K % 2 == 0:
            raise DomainError(f"valuation_report 要求正奇数 K，收到 {K}")
        sigma = self.sigma_hat(K)
        is_zero = sigma == 0
        valuation = None if is_zero else v2(sigma)
        l = odd_chain(K).l
        if K < 9:
            holds = is_zero or valuation >= 2 - l
        else:
            holds = (not is_zero) and valuation == 2 - l
        return ValuationReport(K=K, sigma=sigma, is_zero=is_zero, v2=valuation, l=l,
                               lemma_holds=holds, base_case=K < 5)

    def tm_equivalent(self, K: int, L: int) -> bool:
        """σ̂(2K+1) == σ̂(2L+1)"""
        if K < 0 or L < 0:
            raise DomainError(f"K, L 必须 ≥ 0，收到 ({K}, {L})")
        return self.sigma_hat(2 * K + 1) == self.sigma_hat(2 * L + 1)

    def tm_equivalence_classes(self, Ks: Iterable[int]) -> List[Tuple[Fraction, List[int]]]:
        """按 σ̂(2K+1) 分组，组按首个 K 的顺序排列"""
        groups: Dict[Fraction, List[int]] = {}
        for K in Ks:
            groups.setdefault(self.sigma_hat(2 * K + 1), []).append(K)
        return list(groups.items())

    # ------------------------------------------------------------------
    # 互斥见证
    # ------------------------------------------------------------------

    def _differs(self, r: int, s: int, t: int) -> bool:
        return abs(self.sigma_hat(t * r)) != abs(self.sigma_hat(t * s))

    def _witness(self, r: int, s: int, t: int, source: str) -> DisjointnessWitness:
        low, high = min(r, s), max(r, s)
        split = None
        # ⌊log₂(rt)⌋ < a ≤ ⌊log₂(st)⌋ 时 rt 与 st 的 l 不同
        if floor_log2(low * t) < floor_log2(high * t):
            split = floor_log2(high * t)
        lemma = tuple(lemma_t_candidates(low, high, split)) if split else ()
        return DisjointnessWitness(r=r, s=s, t=t, c1=self.sigma_hat(t * r),
                                   c2=self.sigma_hat(t * s), l_split=split,
                                   lemma_t=lemma, source=source)

    def disjointness_witness(self, r: int, s: int) -> DisjointnessWitness:
        """最小奇数 t ≥ 1 使 |σ̂(t·r)| ≠ |σ̂(t·s)|

        扫描到 witness_bound 仍未找到时，按 rt < 2^a < st 构造候选 t 继续尝试。

        Raises:
            DomainError: r、s 非正奇数或相等
            WitnessNotFoundError: 搜索用尽
        """
        for name, value in (("r", r), ("s", s)):
            if value < 1 or value % 2 == 0:
                raise DomainError(f"{name} 必须是正奇数，收到 {value}")
        if r == s:
            raise DomainError(f"r 与 s 必须不同，收到 ({r}, {s})")

        for t in range(1, self.witness_bound + 1, 2):
            if self._differs(r, s, t):
                self.log_message(f"互斥见证 ({r}, {s}): t = {t}")
                return self._witness(r, s, t, "scan")

        self.log_message(f"({r}, {s}) 扫描到 t ≤ {self.witness_bound} 未找到见证，改用构造候选",
                         "WARNING")
        low, high = min(r, s), max(r, s)
        tried = []
        first_a = floor_log2(self.witness_bound * low) + 1
        for a in range(first_a, first_a + 64):
            candidates = lemma_t_candidates(low, high, a)
            smallest = find_odd_t(low, high, a)
            if smallest is not None:
                candidates.append(smallest)
            for t in sorted(set(candidates)):
                tried.append(t)
                if self._differs(r, s, t):
                    return self._witness(r, s, t, "lemma")
        raise WitnessNotFoundError(
            f"({r}, {s}) 的互斥见证未找到",
            diagnostics={"r": r, "s": s, "bound": self.witness_bound,
                         "lemma_candidates_tried": tried[:32]})

    # ------------------------------------------------------------------
    # 经验相关
    # ------------------------------------------------------------------

    def _disagreements(self, seq: SequenceAccessor, k: int, start: int, stop: int) -> int:
        """n ∈ [start, stop) 中 w(n) ≠ w(n+k) 的个数"""
        head = seq.bits(start, stop)
        shifted = seq.bits(start + k, stop + k)
        return int(np.count_nonzero(head != shifted))

    def empirical_correlation(self, seq: SequenceAccessor, k: int, N: int) -> CorrelationReport:
        """(1/N)Σ_{n=1}^{N} m_{n+k}·m_n，m_n = (−1)^{w(n)}

        按区块计数不一致的位置，整数归约保证结果与线程调度无关。

        Raises:
            SequenceRangeError: N + k 超过横域上限或序列定义域
        """
        if N < 1 or k < 0:
            raise DomainError(f"要求 N ≥ 1 且 k ≥ 0，收到 (k={k}, N={N})")
        if N + k > self.max_horizon:
            raise SequenceRangeError(
                f"N + k = {N + k} 超过横域上限 {self.max_horizon}（可用 --max-horizon 调整）")
        seq.check_range(1, N + k + 1)

        chunk = min(DENSE_CHUNK, N)
        self.monitor.ensure_available(32 * chunk * self.threads, "经验相关区块")
        bounds = [(lo, min(lo + chunk, N + 1)) for lo in range(1, N + 1, chunk)]
        if self.threads > 1 and len(bounds) > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                counts = list(pool.map(lambda b: self._disagreements(seq, k, b[0], b[1]), bounds))
        else:
            counts = [self._disagreements(seq, k, lo, hi) for lo, hi in bounds]
        disagreements = sum(counts)

        empirical = Fraction(N - 2 * disagreements, N)
        exact = self.sigma_hat(k) if _is_thue_morse(seq) else None
        deviation = float(abs(empirical - exact)) if exact is not None else None
        return CorrelationReport(k=k, N=N, empirical=empirical, exact=exact, deviation=deviation)

    def stabilization_check(self, spec: MorseSpec, s: int, levels: Iterable[int],
                            N: int) -> List[CorrelationReport]:
        """各 level k 上 |η̂(s·q_k)| 与 |σ̂(s)| 的对照

        run_length 为从第 k 个块开始连续 01 块的个数 K，envelope = s/2^K（K 无限时为 0）。

        Raises:
            UnsupportedInputError: 规格没有声明 01 段
            SequenceRangeError: s·q_k + N 超过横域上限
        """
        if s < 1 or s % 2 == 0:
            raise DomainError(f"s 必须是正奇数，收到 {s}")
        if not spec.has_runs():
            raise UnsupportedInputError(f"规格 {spec} 没有声明 01 段，无法做稳定化检查")

        sequence = MorseSequence(spec)
        target = abs(self.sigma_hat(s))
        reports = []
        for level in levels:
            scale = s * spec.q(level)
            base = self.empirical_correlation(sequence, scale, N)
            run = spec.run_length_at(level)
            envelope = Fraction(0) if run is None else Fraction(s, 1 << run)
            empirical = abs(base.empirical)
            reports.append(CorrelationReport(
                k=level, N=N, empirical=empirical, exact=target,
                deviation=float(abs(empirical - target)), scale=scale,
                run_length=run, envelope=envelope))
            self.log_message(f"稳定化 level {level}: |η̂({scale})| = {float(empirical):.6f}")
        return reports


def _is_thue_morse(seq: SequenceAccessor) -> bool:
    if isinstance(seq, ThueMorseSequence):
        return True
    return isinstance(seq, MorseSequence) and seq.spec.is_pure_tm


_default_engine: Optional[SpectralEngine] = None


def get_default_spectral_engine() -> SpectralEngine:
    """获取默认谱计算引擎实例（单例模式）"""
    global _default_engine
    if _default_engine is None:
        _default_engine = SpectralEngine()
    return _default_engine


def sigma_hat(k: int) -> Fraction:
    """便捷函数：用默认引擎计算 σ̂(k)"""
    return get_default_spectral_engine().sigma_hat(k)


def sigma_hat_closed(n: int, a: int) -> Fraction:
    return get_default_spectral_engine().sigma_hat_closed(n, a)


def valuation_report(K: int) -> ValuationReport:
    return get_default_spectral_engine().valuation_report(K)


def tm_equivalent(K: int, L: int) -> bool:
    return get_default_spectral_engine().tm_equivalent(K, L)


def disjointness_witness(r: int, s: int) -> DisjointnessWitness:
    return get_default_spectral_engine().disjointness_witness(r, s)


def empirical_correlation(seq: SequenceAccessor, k: int, N: int) -> CorrelationReport:
    return get_default_spectral_engine().empirical_correlation(seq, k, N)


def stabilization_check(spec: MorseSpec, s: int, levels: Iterable[int],
                        N: int) -> List[CorrelationReport]:
    return get_default_spectral_engine().stabilization_check(spec, s, levels, N)


__all__ = [
    'SigmaCache',
    'ValuationReport',
    'DisjointnessWitness',
    'CorrelationReport',
    'SpectralEngine',
    'get_default_spectral_engine',
    'pair_disjoint_expected',
    'sigma_hat',
    'sigma_hat_closed',
    'valuation_report',
    'tm_equivalent',
    'disjointness_witness',
    'empirical_correlation',
    'stabilization_check',
]
