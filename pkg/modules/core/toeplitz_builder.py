"""
Toeplitz 构造模块
功能：等差填充构造部分序列、Thue-Toeplitz 逐阶构造、正则性统计、非正则反例序列
"""

import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..utils.errors import ConfigError, ConstructionError, DomainError, UnsupportedInputError
from ..utils.resource_monitor import get_default_monitor
from .moebius_sieve import MoebiusTable
from .sequence_generator import Block, SequenceAccessor, ThueToeplitzSequence

HOLE = -1
FILL_MODES = ("absolute", "holes")


@dataclass(frozen=True)
class FillStep:
    """一次等差填充

    absolute 模式下 start/step 是绝对下标；holes 模式下是当前空洞列表中的序号。
    """
    start: int
    step: int
    symbol: int
    mode: str = "holes"

    def __post_init__(self):
        if self.mode not in FILL_MODES:
            raise DomainError(f"未知填充模式: {self.mode}")
        if self.step < 1:
            raise DomainError(f"step 必须 ≥ 1，收到 {self.step}")
        if self.start < 0:
            raise DomainError(f"start 必须 ≥ 0，收到 {self.start}")
        if self.symbol not in (0, 1):
            raise DomainError(f"填充符号只能是 0/1，收到 {self.symbol}")


class PartialSequence:
    """[0, horizon) 上的部分 0/1 序列，HOLE 表示尚未填充

    已填格永不覆盖；freeze() 之后不可再填充。
    """

    def __init__(self, horizon: int):
        if horizon < 1:
            raise DomainError(f"horizon 必须 ≥ 1，收到 {horizon}")
        self.horizon = horizon
        self.cells = np.full(horizon, HOLE, dtype=np.int8)
        self.fills: List[FillStep] = []
        self._frozen = False

    def apply(self, step: FillStep) -> int:
        """执行一次填充，返回填充的格数

        Raises:
            ConstructionError: absolute 模式试图覆盖已填格，或序列已冻结
        """
        if self._frozen:
            raise ConstructionError("部分序列已冻结，不能继续填充")
        if step.mode == "absolute":
            targets = np.arange(step.start, self.horizon, step.step)
            clash = targets[self.cells[targets] != HOLE]
            if clash.size:
                raise ConstructionError(
                    f"填充 {step} 会覆盖已填位置 {int(clash[0])}（共 {clash.size} 处）")
        else:
            targets = self.hole_positions()[step.start::step.step]
        self.cells[targets] = step.symbol
        self.fills.append(step)
        return int(targets.size)

    def freeze(self) -> "PartialSequence":
        self._frozen = True
        self.cells.setflags(write=False)
        return self

    def hole_positions(self) -> np.ndarray:
        return np.flatnonzero(self.cells == HOLE)

    def hole_density(self, period: Optional[int] = None) -> Fraction:
        """空洞比例；给定 period 时只统计完整周期覆盖的前缀"""
        span = self.horizon if period is None else (self.horizon // period) * period
        if span == 0:
            raise DomainError(f"horizon {self.horizon} 不足一个周期 {period}")
        holes = int(np.count_nonzero(self.cells[:span] == HOLE))
        return Fraction(holes, span)

    @property
    def is_complete(self) -> bool:
        return not bool(np.any(self.cells == HOLE))

    def to_block(self) -> Block:
        if not self.is_complete:
            raise ConstructionError("部分序列仍有空洞")
        return Block.from_array(self.cells)

    def __str__(self) -> str:
        return "".join("?" if cell == HOLE else str(int(cell)) for cell in self.cells)


StepLike = Union[FillStep, Tuple[int, int, int], Tuple[int, int, int, str]]


def toeplitz_build(steps: Iterable[StepLike], horizon: int, mode: str = "holes") -> PartialSequence:
    """按顺序执行等差填充

    Args:
        steps: FillStep 或 (start, step, symbol[, mode]) 元组
        horizon: 序列长度
        mode: 元组未指定模式时使用的默认模式

    Returns:
        冻结的 PartialSequence
    """
    partial = PartialSequence(horizon)
    for raw in steps:
        if isinstance(raw, FillStep):
            step = raw
        elif len(raw) == 4:
            step = FillStep(raw[0], raw[1], raw[2], raw[3])
        else:
            step = FillStep(raw[0], raw[1], raw[2], mode)
        partial.apply(step)
    return partial.freeze()


def thue_toeplitz_steps(n: int) -> List[FillStep]:
    """Thue-Toeplitz 前 n 阶：每阶在当前空洞中隔一个填一个，符号 1, 0, 1, 0, …"""
    return [FillStep(0, 2, (stage + 1) % 2, "holes") for stage in range(n)]


def thue_toeplitz_stage(n: int, horizon: int) -> PartialSequence:
    """n 阶 Thue-Toeplitz 部分序列：形如 B_n ? B_n ? …，|B_n| = 2^n − 1"""
    if n < 0:
        raise DomainError(f"阶段 n 必须 ≥ 0，收到 {n}")
    return toeplitz_build(thue_toeplitz_steps(n), horizon)


# ---------------------------------------------------------------------------
# 非正则反例
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DivisibilityChain:
    """整除链 a_1 | a_2 | …：显式前缀之后按 tail_base 几何增长"""
    explicit: Tuple[int, ...] = ()
    tail_base: int = 5

    def __post_init__(self):
        if self.tail_base < 2:
            raise ConfigError(f"几何尾的底数必须 ≥ 2，收到 {self.tail_base}")
        previous = 1
        for n, a in enumerate(self.explicit, start=1):
            if a <= previous or a % previous != 0:
                raise ConfigError(f"a_{n} = {a} 不满足 a_{n - 1} | a_{n} 且递增")
            previous = a
        if self.rho > Fraction(1, 4):
            raise ConfigError(f"ρ = Σ 1/a_n = {self.rho} 超过 1/4")

    @classmethod
    def geometric(cls, base: int) -> "DivisibilityChain":
        """a_n = base^n，ρ = 1/(base − 1)"""
        return cls(explicit=(), tail_base=base)

    def a(self, n: int) -> int:
        """a_n，n ≥ 1"""
        if n < 1:
            raise DomainError(f"整除链下标从 1 开始，收到 {n}")
        if n <= len(self.explicit):
            return self.explicit[n - 1]
        last = self.explicit[-1] if self.explicit else 1
        return last * self.tail_base ** (n - len(self.explicit))

    @property
    def rho(self) -> Fraction:
        """ρ = Σ_{n≥1} 1/a_n（精确）"""
        head = sum((Fraction(1, a) for a in self.explicit), Fraction(0))
        last = self.explicit[-1] if self.explicit else 1
        return head + Fraction(1, last * (self.tail_base - 1))

    def describe(self) -> str:
        if not self.explicit:
            return f"a_n = {self.tail_base}^n"
        return f"a = {list(self.explicit)} 之后 ×{self.tail_base}"


class CounterexampleSequence(SequenceAccessor):
    """z(n) = μ(初始元(n))，n ∈ [0, horizon]，取值 {−1, 0, 1}"""
    binary = False

    def __init__(self, chain: DivisibilityChain, horizon: int,
                 values: np.ndarray, initial_of: np.ndarray):
        self.chain = chain
        self.horizon = horizon
        self.name = f"counterexample:{chain.describe()}"
        self.z = values
        self.initial_of = initial_of
        self.z.setflags(write=False)
        self.initial_of.setflags(write=False)

    @property
    def rho(self) -> Fraction:
        return self.chain.rho

    def _values_dense(self, start: int, stop: int) -> np.ndarray:
        return self.z[start:stop]

    def value(self, n: int) -> int:
        self.check_range(n, n + 1)
        return int(self.z[n])

    def is_initial(self, n: int) -> bool:
        self.check_range(n, n + 1)
        return int(self.initial_of[n]) == n

    def initials(self) -> np.ndarray:
        return np.flatnonzero(self.initial_of == np.arange(self.horizon + 1))

    def a_set(self, m: int) -> np.ndarray:
        """A_m ∩ [0, horizon]；m 不是初始元时为空"""
        return np.flatnonzero(self.initial_of == m)

    def non_initial_prefix(self) -> np.ndarray:
        """第 n 项为 [1, n] 中非初始元的个数（第 0 项为 0）"""
        flags = (self.initial_of != np.arange(self.horizon + 1)).astype(np.int64)
        flags[0] = 0
        return np.cumsum(flags)


class ToeplitzBuilder:
    """Toeplitz 构造引擎"""

    def __init__(self, logger=None, monitor=None):
        """
        初始化构造引擎

        Args:
            logger: 日志记录器实例
            monitor: ResourceMonitor 实例
        """
        self.logger = logger
        self.monitor = monitor or get_default_monitor()

    def log_message(self, message: str, level: str = "INFO"):
        """记录日志消息"""
        if self.logger:
            self.logger.log_message(message, level)
        else:
            print(f"[{level}] {message}", file=sys.stderr)

    def thue_toeplitz_stage(self, n: int, horizon: int) -> PartialSequence:
        self.monitor.ensure_available(horizon, "Thue-Toeplitz 部分序列")
        partial = thue_toeplitz_stage(n, horizon)
        self.log_message(f"Thue-Toeplitz {n} 阶构造完成，剩余空洞 {partial.hole_positions().size}")
        return partial

    def build_counterexample(self, chain: DivisibilityChain, N: int,
                             mu: MoebiusTable) -> CounterexampleSequence:
        """按归纳构造 A_n 并得到 z(0..N)

        n 为初始元 iff n ∉ ⋃_{m<n} A_m；初始元 m 的集合 A_m = {m + k·a_{m+1} : k ≥ 0}。
        a_{m+1} > N 时 A_m ∩ [0, N] = {m}，因此只需显式展开前若干个初始元。

        Args:
            chain: 整除链
            N: 横域，z 定义在 [0, N]
            mu: 覆盖 [0, N] 的 μ 表

        Returns:
            CounterexampleSequence

        Raises:
            SequenceRangeError: μ 表不足
            ConstructionError: 等差集合相交（整除链被破坏时）
        """
        if N < 1:
            raise DomainError(f"N 必须 ≥ 1，收到 {N}")
        mu.require(N)
        self.monitor.ensure_available(9 * (N + 1), "反例序列")

        initial_of = np.full(N + 1, HOLE, dtype=np.int64)
        n = 0
        while chain.a(n + 1) <= N:
            if initial_of[n] == HOLE:
                targets = np.arange(n, N + 1, chain.a(n + 1))
                if np.any(initial_of[targets] != HOLE):
                    raise ConstructionError(f"A_{n} 与之前的集合相交")
                initial_of[targets] = n
            n += 1
        holes = np.flatnonzero(initial_of == HOLE)
        initial_of[holes] = holes

        values = mu.values[initial_of].astype(np.int8)
        sequence = CounterexampleSequence(chain, N, values, initial_of)
        self.log_message(
            f"反例序列构造完成: N = {N}, {chain.describe()}, ρ = {chain.rho}, "
            f"展开初始元 {n} 个")
        return sequence


_default_builder: Optional[ToeplitzBuilder] = None


def get_default_builder() -> ToeplitzBuilder:
    """获取默认构造引擎实例（单例模式）"""
    global _default_builder
    if _default_builder is None:
        _default_builder = ToeplitzBuilder()
    return _default_builder


def build_counterexample(chain: Optional[DivisibilityChain], N: int,
                         mu: MoebiusTable) -> CounterexampleSequence:
    """便捷函数：chain 为 None 时使用 a_n = 5^n"""
    if chain is None:
        chain = DivisibilityChain.geometric(5)
    return get_default_builder().build_counterexample(chain, N, mu)


def regularity_profile(source: Union[ThueToeplitzSequence, CounterexampleSequence],
                       stages: Sequence[int], horizon: Optional[int] = None) -> List[dict]:
    """各阶段未确定位置的比例

    Thue-Toeplitz：n 阶部分序列在 horizon 内的空洞比例（理论值 2^{−n}）。
    反例序列：[0, N] 中不属于 A_0, …, A_{m−1} 的位置比例。
    """
    rows = []
    if isinstance(source, CounterexampleSequence):
        for m in stages:
            uncovered = int(np.count_nonzero(source.initial_of >= m))
            rows.append({"stage": m, "hole_density": Fraction(uncovered, source.horizon + 1)})
        return rows

    if not source.has_skeleton:
        raise UnsupportedInputError(f"{source.name} 没有阶段结构")
    if horizon is None:
        raise DomainError("Thue-Toeplitz 正则性统计需要 horizon")
    for n in stages:
        partial = thue_toeplitz_stage(n, horizon)
        rows.append({"stage": n, "hole_density": partial.hole_density(period=1 << n),
                     "expected": Fraction(1, 1 << n)})
    return rows


__all__ = [
    'HOLE',
    'FillStep',
    'PartialSequence',
    'toeplitz_build',
    'thue_toeplitz_steps',
    'thue_toeplitz_stage',
    'DivisibilityChain',
    'CounterexampleSequence',
    'ToeplitzBuilder',
    'get_default_builder',
    'build_counterexample',
    'regularity_profile',
]
