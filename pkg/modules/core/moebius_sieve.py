"""
Möbius 筛模块
功能：线性筛计算 μ(0..N)、无平方因子计数、Mertens 部分和
"""

import math
import sys
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from ..utils.errors import CapacityError, DomainError, SequenceRangeError
from ..utils.resource_monitor import get_default_monitor
from ..utils.run_config import DEFAULT_SIEVE_LIMIT

try:
    from numba import njit
    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False


def _linear_sieve_kernel(limit, mu, composite, primes):
    """线性筛：每个合数只被其最小素因子筛去一次"""
    count = 0
    if limit >= 1:
        mu[1] = 1
    for i in range(2, limit + 1):
        if not composite[i]:
            primes[count] = i
            count += 1
            mu[i] = -1
        for j in range(count):
            p = primes[j]
            ip = i * p
            if ip > limit:
                break
            composite[ip] = True
            if i % p == 0:
                mu[ip] = 0
                break
            mu[ip] = -mu[i]
    return count


if HAS_NUMBA:
    _linear_sieve = njit(cache=False)(_linear_sieve_kernel)
else:
    _linear_sieve = None


def _prime_count_bound(limit: int) -> int:
    """π(N) 的上界（Rosser–Schoenfeld：π(x) < 1.25506 x / ln x）"""
    if limit < 17:
        return 8
    return int(1.25506 * limit / math.log(limit)) + 16


def _slicing_sieve(limit: int) -> np.ndarray:
    """numpy 切片筛：numba 不可用时的回退实现"""
    mu = np.ones(limit + 1, dtype=np.int8)
    mu[0] = 0
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if is_prime[i]:
            is_prime[i * i::i] = False
    for p in np.flatnonzero(is_prime).tolist():
        mu[p::p] *= -1
        square = p * p
        if square <= limit:
            mu[square::square] = 0
    return mu


@dataclass(frozen=True, eq=False)
class MoebiusTable:
    """μ(0), μ(1), …, μ(N) 的只读表，μ(0) := 0"""
    limit: int
    values: np.ndarray

    def __post_init__(self):
        self.values.setflags(write=False)

    def _check(self, n: int):
        if n < 0 or n > self.limit:
            raise SequenceRangeError(f"μ 表只覆盖 [0, {self.limit}]，请求 {n}")

    def __getitem__(self, n: int) -> int:
        self._check(n)
        return int(self.values[n])

    def __len__(self) -> int:
        return self.limit + 1

    def window(self, start: int, stop: int) -> np.ndarray:
        """μ(start), …, μ(stop-1) 的只读视图"""
        if start < 0 or stop - 1 > self.limit:
            raise SequenceRangeError(f"μ 表只覆盖 [0, {self.limit}]，请求 [{start}, {stop})")
        return self.values[start:stop]

    def require(self, N: int):
        """确认表覆盖 [1, N]"""
        if N > self.limit:
            raise SequenceRangeError(f"μ 表只覆盖到 {self.limit}，需要 {N}")

    @cached_property
    def mertens_prefix(self) -> np.ndarray:
        """M(n) = Σ_{k≤n} μ(k) 的累计数组"""
        return np.cumsum(self.values, dtype=np.int64)

    @cached_property
    def squarefree_prefix(self) -> np.ndarray:
        """Σ_{k≤n} μ(k)² 的累计数组"""
        return np.cumsum(self.values != 0, dtype=np.int64)

    def mertens(self, N: int) -> int:
        self.require(N)
        return int(self.mertens_prefix[N])

    def squarefree_count(self, N: int) -> int:
        self.require(N)
        if N < 1:
            raise DomainError("squarefree_count 要求 N ≥ 1")
        return int(self.squarefree_prefix[N])

    def truncated(self, N: int) -> "MoebiusTable":
        """返回只覆盖 [0, N] 的子表（共享内存）"""
        self.require(N)
        return MoebiusTable(limit=N, values=self.values[:N + 1])


class MoebiusSieve:
    """Möbius 筛引擎，缓存已构建的最大表"""

    def __init__(self, logger=None, capacity: int = DEFAULT_SIEVE_LIMIT, monitor=None):
        """
        初始化筛引擎

        Args:
            logger: 日志记录器实例
            capacity: 允许构建的最大上界
            monitor: ResourceMonitor 实例
        """
        self.logger = logger
        self.capacity = capacity
        self.monitor = monitor or get_default_monitor()
        self._table: Optional[MoebiusTable] = None

    def log_message(self, message: str, level: str = "INFO"):
        """记录日志消息"""
        if self.logger:
            self.logger.log_message(message, level)
        else:
            print(f"[{level}] {message}", file=sys.stderr)

    def build(self, N: int) -> MoebiusTable:
        """构建（或从缓存截取）覆盖 [0, N] 的 μ 表

        Args:
            N: 上界，≥ 1

        Returns:
            MoebiusTable

        Raises:
            DomainError: N < 1
            CapacityError: N 超过配置容量
        """
        if N < 1:
            raise DomainError(f"moebius_sieve 要求 N ≥ 1，收到 {N}")
        if N > self.capacity:
            raise CapacityError(f"N = {N} 超过筛容量 {self.capacity}（可用 --sieve-limit 调整）")

        if self._table is not None and self._table.limit >= N:
            return self._table.truncated(N)

        if HAS_NUMBA:
            bound = _prime_count_bound(N)
            self.monitor.ensure_available(2 * (N + 1) + 8 * bound, "Möbius 线性筛")
            mu = np.zeros(N + 1, dtype=np.int8)
            composite = np.zeros(N + 1, dtype=np.bool_)
            primes = np.zeros(bound, dtype=np.int64)
            count = _linear_sieve(N, mu, composite, primes)
            self.log_message(f"线性筛完成: N = {N}, 素数个数 {count}")
        else:
            self.monitor.ensure_available(2 * (N + 1), "Möbius 切片筛")
            mu = _slicing_sieve(N)
            self.log_message(f"切片筛完成（未安装 numba）: N = {N}")

        self._table = MoebiusTable(limit=N, values=mu)
        return self._table


_default_sieve: Optional[MoebiusSieve] = None


def get_default_sieve() -> MoebiusSieve:
    """获取默认筛引擎实例（单例模式）"""
    global _default_sieve
    if _default_sieve is None:
        _default_sieve = MoebiusSieve()
    return _default_sieve


def moebius_sieve(N: int) -> MoebiusTable:
    """便捷函数：用默认引擎构建 μ(0..N)"""
    return get_default_sieve().build(N)


def squarefree_count(N: int, table: Optional[MoebiusTable] = None) -> int:
    """|{k ∈ [1, N] : μ(k) ≠ 0}|

    Args:
        N: ≥ 1
        table: 已有的 μ 表，缺省时用默认引擎构建
    """
    if N < 1:
        raise DomainError(f"squarefree_count 要求 N ≥ 1，收到 {N}")
    if table is None:
        table = moebius_sieve(N)
    return table.squarefree_count(N)


__all__ = [
    'HAS_NUMBA',
    'MoebiusTable',
    'MoebiusSieve',
    'get_default_sieve',
    'moebius_sieve',
    'squarefree_count',
]
