"""
Möbius 正交性实验模块
功能：柱函数加权和、Thue-Morse 相关、检查点序列、行分解诊断、周期序列相关、反例不等式链
"""

import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Mapping, Optional, Sequence, Union

import numpy as np

from ..utils.errors import DomainError, SequenceRangeError, UnsupportedInputError
from ..utils.resource_monitor import get_default_monitor
from ..utils.run_config import DEFAULT_CHECKPOINT_BASE
from .moebius_sieve import MoebiusTable
from .sequence_generator import SequenceAccessor, ThueMorseSequence
from .toeplitz_builder import CounterexampleSequence

Value = Union[Fraction, complex]

MAX_CYLINDER_LENGTH = 16
COMPLEX_TOLERANCE = 1e-9
TREND_SLACK = 1.5


def _is_exact(value) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


@dataclass(frozen=True)
class CylinderFunction:
    """f(w) = table[w[a, a+ℓ))

    table 以字为键（"01" 之类），缺失的字取 0，此时 partial 为 True。
    有理表精确累加，含复数值时按浮点累加。
    """
    offset: int
    length: int
    table: Mapping[str, Value] = field(default_factory=dict)
    partial: bool = field(default=False, init=False)

    def __post_init__(self):
        if self.offset < -1:
            raise DomainError(f"柱函数偏移 a 必须 ≥ −1，收到 {self.offset}")
        if not 1 <= self.length <= MAX_CYLINDER_LENGTH:
            raise DomainError(f"柱函数长度 ℓ 必须在 [1, {MAX_CYLINDER_LENGTH}] 内，收到 {self.length}")
        for word in self.table:
            if len(word) != self.length or any(ch not in "01" for ch in word):
                raise DomainError(f"柱函数表的键 '{word}' 不是长为 {self.length} 的 0/1 字")
        object.__setattr__(self, "partial", len(self.table) < (1 << self.length))

    @classmethod
    def from_values(cls, offset: int, length: int, values: Sequence[Value]) -> "CylinderFunction":
        """按字的二进制编码顺序给出全部 2^ℓ 个值（首位为最高位）"""
        if len(values) != 1 << length:
            raise DomainError(f"需要 {1 << length} 个值，收到 {len(values)}")
        table = {format(code, f"0{length}b"): value for code, value in enumerate(values)}
        return cls(offset, length, table)

    @classmethod
    def constant(cls, value: Value) -> "CylinderFunction":
        return cls(0, 1, {"0": value, "1": value})

    @classmethod
    def sign(cls, offset: int = 0) -> "CylinderFunction":
        """(−1)^{w(offset)}"""
        return cls(offset, 1, {"0": Fraction(1), "1": Fraction(-1)})

    @classmethod
    def indicator(cls, word: str, offset: int = 0) -> "CylinderFunction":
        return cls(offset, len(word), {word: Fraction(1)})

    @property
    def exact(self) -> bool:
        return all(_is_exact(value) for value in self.table.values())

    @property
    def bound(self) -> Value:
        """F = max |f|"""
        if not self.table:
            return Fraction(0)
        if self.exact:
            return max(abs(Fraction(value)) for value in self.table.values())
        return max(abs(complex(value)) for value in self.table.values())

    def value_of(self, code: int) -> Value:
        word = format(code, f"0{self.length}b")
        value = self.table.get(word, 0)
        return Fraction(value) if self.exact else complex(value)

    def codes(self, seq: SequenceAccessor, N: int) -> np.ndarray:
        """k = 1..N 时 w[a+k, a+k+ℓ) 的二进制编码"""
        start = self.offset + 1
        bits = seq.bits(start, start + N + self.length - 1).astype(np.int64)
        codes = np.zeros(N, dtype=np.int64)
        for j in range(self.length):
            codes = (codes << 1) | bits[j:j + N]
        return codes

    def combine(self, counts: np.ndarray) -> Value:
        """Σ_word f(word)·counts[word]"""
        total: Value = Fraction(0) if self.exact else 0j
        for code in np.flatnonzero(counts):
            total += self.value_of(int(code)) * int(counts[code])
        return total

    def describe(self) -> dict:
        return {"offset": self.offset, "length": self.length,
                "table": dict(sorted(self.table.items())), "partial": self.partial}


def _signed_counts(index: np.ndarray, mu: np.ndarray, size: int) -> np.ndarray:
    """按 index 分桶的 Σ μ（精确整数）"""
    positive = np.bincount(index[mu > 0], minlength=size)
    negative = np.bincount(index[mu < 0], minlength=size)
    return positive.astype(np.int64) - negative.astype(np.int64)


def _magnitude(value: Value) -> float:
    return float(abs(value))


@dataclass
class Checkpoint:
    N: int
    value: Value
    magnitude: float

    def to_dict(self) -> dict:
        return {"N": self.N, "S_N": self.value, "abs_S_N": self.magnitude}


@dataclass
class OrthogonalitySeries:
    """检查点 (N, S_N, |S_N|) 及相邻检查点的趋势判定"""
    checkpoints: List[Checkpoint]
    trend: List[bool]

    @property
    def trend_ok(self) -> bool:
        return all(self.trend)

    def rows(self) -> List[dict]:
        rows = []
        for index, point in enumerate(self.checkpoints):
            row = point.to_dict()
            row["trend_ok"] = self.trend[index - 1] if index else None
            rows.append(row)
        return rows


@dataclass
class RowDecomposition:
    """Σ_{k=1}^{N} f(T^k w)μ(k) 的分行重组

    行 i（1 ≤ i ≤ P = 2^n）为 {i + jP : 0 ≤ j < M}，M = ⌊N/P⌋；E' 为空，
    E'' 收集 (MP, N] 中的 c'' < P 项。
    """
    n: int
    period: int
    c_prime: int
    c_double: int
    E_prime: Value
    E_double: Value
    rows: List[Value]
    total: Value
    flat_total: Value
    M: int
    F: Value
    hole_rows: List[int]
    hole_free_rows_periodic: bool

    @property
    def identity_ok(self) -> bool:
        regrouped = self.E_prime + sum(self.rows, Fraction(0)) + self.E_double
        return _close(regrouped, self.total) and _close(self.total, self.flat_total)

    @property
    def boundary_ok(self) -> bool:
        """|E' + E''| ≤ 2^n·F"""
        return _within(self.E_prime + self.E_double, self.period * self.F)

    @property
    def rows_ok(self) -> bool:
        """|Σ_i| ≤ M·F"""
        return all(_within(row, self.M * self.F) for row in self.rows)

    @property
    def hole_free_count(self) -> int:
        return self.period - len(self.hole_rows)

    def summary(self) -> dict:
        return {"n": self.n, "period": self.period, "M": self.M, "c_prime": self.c_prime,
                "c_double": self.c_double, "E_prime": self.E_prime, "E_double": self.E_double,
                "total": self.total, "F": self.F, "hole_rows": len(self.hole_rows),
                "hole_free_rows": self.hole_free_count, "identity_ok": self.identity_ok,
                "boundary_ok": self.boundary_ok, "rows_ok": self.rows_ok,
                "hole_free_rows_periodic": self.hole_free_rows_periodic}


def _close(left: Value, right: Value) -> bool:
    if _is_exact(left) and _is_exact(right):
        return left == right
    return abs(complex(left) - complex(right)) <= COMPLEX_TOLERANCE * max(1.0, abs(complex(right)))


def _within(value: Value, limit: Value) -> bool:
    if _is_exact(value) and _is_exact(limit):
        return abs(value) <= limit
    return _magnitude(value) <= _magnitude(limit) + COMPLEX_TOLERANCE


@dataclass(frozen=True)
class CounterexampleCorrelation:
    """Σ z(k)μ(k) 与下界 Σ μ(k)² − 2Nρ 的精确比较"""
    N: int
    sum: int
    average: Fraction
    squarefree: int
    lower_bound: Fraction
    lower_bound_ok: bool
    non_initials: int

    def to_dict(self) -> dict:
        return {"N": self.N, "sum": self.sum, "average": self.average,
                "squarefree": self.squarefree, "lower_bound": self.lower_bound,
                "lower_bound_ok": self.lower_bound_ok, "non_initials": self.non_initials}


@dataclass
class InequalityChainReport:
    """对每个 N' ≤ N 检验 Σ zμ ≥ Σ μ² − 2N'ρ 与非初始元个数 < N'ρ"""
    N: int
    rho: Fraction
    holds: bool
    first_violation: Optional[int]
    non_initial_ok: bool
    first_non_initial_violation: Optional[int]
    checkpoints: List[CounterexampleCorrelation]

    @property
    def ok(self) -> bool:
        return self.holds and self.non_initial_ok


class MoebiusExperiments:
    """Möbius 正交性实验引擎"""

    def __init__(self, logger=None, monitor=None):
        """
        初始化实验引擎

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

    # ------------------------------------------------------------------
    # 加权和
    # ------------------------------------------------------------------

    def weighted_total(self, f: CylinderFunction, w: SequenceAccessor,
                       mu: MoebiusTable, N: int) -> Value:
        """Σ_{k=1}^{N} f(w[a+k, a+k+ℓ))·μ(k)"""
        if N < 1:
            raise DomainError(f"N 必须 ≥ 1，收到 {N}")
        mu.require(N)
        self.monitor.ensure_available(24 * N, "加权和窗口")
        codes = f.codes(w, N)
        counts = _signed_counts(codes, mu.window(1, N + 1), 1 << f.length)
        return f.combine(counts)

    def weighted_sum(self, f: CylinderFunction, w: SequenceAccessor,
                     mu: MoebiusTable, N: int) -> Value:
        """(1/N)Σ_{k=1}^{N} f(w[a+k, a+k+ℓ))·μ(k)

        Raises:
            SequenceRangeError: w 或 μ 表不覆盖所需下标
        """
        return self.weighted_total(f, w, mu, N) / N

    def tm_orthogonality(self, N: int, mu: MoebiusTable) -> Fraction:
        """(1/N)Σ_{n=1}^{N} (−1)^{x(n)}·μ(n)，x 为 Thue-Morse"""
        if N < 1:
            raise DomainError(f"N 必须 ≥ 1，收到 {N}")
        mu.require(N)
        signs = ThueMorseSequence().values(1, N + 1).astype(np.int64)
        return Fraction(int(np.dot(signs, mu.window(1, N + 1).astype(np.int64))), N)

    def orthogonality_series(self, f: Optional[CylinderFunction], w: SequenceAccessor,
                             mu: MoebiusTable, checkpoints: Optional[Sequence[int]] = None
                             ) -> OrthogonalitySeries:
        """检查点上的 S_N 与趋势

        f 为 None 时直接使用序列的数值观测（二值序列取 (−1)^{w(n)}，三值序列取 w(n)）。
        检查点缺省为不超过 μ 表上界的 10 的幂。趋势判定：
        |S_{N'}| ≤ 1.5·max(|S_N|, N^{−1/2})。
        """
        if checkpoints is None:
            checkpoints = default_checkpoints(mu.limit)
        checkpoints = sorted(set(int(N) for N in checkpoints))
        if not checkpoints or checkpoints[0] < 1:
            raise DomainError("检查点必须为正整数且非空")
        top = checkpoints[-1]
        mu.require(top)

        points: List[Checkpoint] = []
        if f is None:
            observed = w.values(1, top + 1).astype(np.int64)
            partial = np.cumsum(observed * mu.window(1, top + 1).astype(np.int64))
            for N in checkpoints:
                value = Fraction(int(partial[N - 1]), N)
                points.append(Checkpoint(N, value, _magnitude(value)))
        else:
            size = 1 << f.length
            codes = f.codes(w, top)
            weights = mu.window(1, top + 1)
            counts = np.zeros(size, dtype=np.int64)
            previous = 0
            for N in checkpoints:
                counts += _signed_counts(codes[previous:N], weights[previous:N], size)
                previous = N
                value = f.combine(counts) / N
                points.append(Checkpoint(N, value, _magnitude(value)))

        trend = []
        for before, after in zip(points, points[1:]):
            floor = max(before.magnitude, before.N ** -0.5)
            trend.append(after.magnitude <= TREND_SLACK * floor)
        self.log_message(f"正交性序列: {len(points)} 个检查点，趋势{'正常' if all(trend) else '异常'}")
        return OrthogonalitySeries(points, trend)

    def periodic_orthogonality(self, pattern: Sequence[Value], mu: MoebiusTable, N: int,
                               prefix: Sequence[Value] = ()) -> Value:
        """(1/N)Σ_{k=1}^{N} b_k·μ(k)

        b_1, …, b_m 取 prefix，其后 b_k = pattern[(k − m − 1) mod P]（最终周期序列）。
        """
        if not pattern:
            raise DomainError("周期模式不能为空")
        if N < 1:
            raise DomainError(f"N 必须 ≥ 1，收到 {N}")
        mu.require(N)
        weights = mu.window(1, N + 1)
        head = min(len(prefix), N)
        exact = all(_is_exact(v) for v in list(pattern) + list(prefix))
        total: Value = Fraction(0) if exact else 0j
        for k in range(head):
            total += prefix[k] * int(weights[k])
        period = len(pattern)
        residues = np.arange(N - head, dtype=np.int64) % period
        sums = _signed_counts(residues, weights[head:], period)
        for residue in range(period):
            total += pattern[residue] * int(sums[residue])
        return total / N

    # ------------------------------------------------------------------
    # 行分解
    # ------------------------------------------------------------------

    def row_decomposition(self, f: CylinderFunction, w: SequenceAccessor, n: int,
                          mu: MoebiusTable, N: int) -> RowDecomposition:
        """按 n 阶骨架重组 Σ f(T^k w)μ(k)

        Raises:
            UnsupportedInputError: w 没有声明阶段结构
            DomainError: N ≤ 2^n 或 n < 1
            CapacityError: n 阶骨架超出内存预算
        """
        if not w.has_skeleton:
            raise UnsupportedInputError(f"{w.name} 没有声明 Toeplitz 阶段结构，无法做行分解")
        if n < 1:
            raise DomainError(f"阶段 n 必须 ≥ 1，收到 {n}")
        # 骨架构造时每格约 9 字节（uint64 下标 + uint8 位）
        self.monitor.ensure_available(9 * (1 << n), f"{n} 阶骨架")
        skeleton = w.skeleton(n)
        period = skeleton.period
        if N <= period:
            raise DomainError(f"行分解要求 N > 2^n = {period}，收到 N = {N}")
        mu.require(N)

        size = 1 << f.length
        codes = f.codes(w, N)
        weights = mu.window(1, N + 1)
        M = N // period
        body = M * period

        # k = 1..MP 所在的行 (k − 1) mod P
        row_index = np.arange(body, dtype=np.int64) % period
        matrix = _signed_counts(row_index * size + codes[:body], weights[:body], period * size)
        matrix = matrix.reshape(period, size)
        rows = [f.combine(matrix[i]) for i in range(period)]

        tail_counts = _signed_counts(codes[body:], weights[body:], size)
        E_double = f.combine(tail_counts)
        E_prime: Value = Fraction(0) if f.exact else 0j
        zero: Value = Fraction(0) if f.exact else 0j
        total = E_prime + sum(rows, zero) + E_double
        flat_total = self.weighted_total(f, w, mu, N)

        # 行 i 的窗口覆盖 (a + i + t) mod P，t < ℓ；含空洞剩余类即为不确定行
        hole_rows = []
        periodic = True
        for i in range(1, period + 1):
            residues = {(f.offset + i + t) % period for t in range(f.length)}
            if skeleton.hole_residue in residues:
                hole_rows.append(i)
                continue
            row_codes = np.unique(codes[i - 1:body:period])
            if row_codes.size > 1:
                periodic = False
                continue
            phi = f.value_of(int(row_codes[0])) if row_codes.size else zero
            row_mu = int(weights[i - 1:body:period].astype(np.int64).sum())
            if not _close(rows[i - 1], phi * row_mu):
                periodic = False

        decomposition = RowDecomposition(
            n=n, period=period, c_prime=0, c_double=N - body, E_prime=E_prime,
            E_double=E_double, rows=rows, total=total, flat_total=flat_total, M=M,
            F=f.bound, hole_rows=hole_rows, hole_free_rows_periodic=periodic)
        self.log_message(
            f"行分解 n = {n}: {period} 行，其中 {len(hole_rows)} 行含空洞，"
            f"恒等式{'成立' if decomposition.identity_ok else '不成立'}")
        return decomposition

    # ------------------------------------------------------------------
    # 非正则反例
    # ------------------------------------------------------------------

    def counterexample_correlation(self, cs: CounterexampleSequence, mu: MoebiusTable,
                                   N: int) -> CounterexampleCorrelation:
        """sum = Σ_{k=1}^{N} z(k)μ(k)，lower_bound_ok ⇔ sum ≥ Σ μ(k)² − 2Nρ

        Raises:
            SequenceRangeError: N 超过反例序列横域或 μ 表
        """
        if N < 1:
            raise DomainError(f"N 必须 ≥ 1，收到 {N}")
        if N > cs.horizon:
            raise SequenceRangeError(f"反例序列横域为 {cs.horizon}，请求 N = {N}")
        mu.require(N)
        z = cs.values(1, N + 1).astype(np.int64)
        total = int(np.dot(z, mu.window(1, N + 1).astype(np.int64)))
        squarefree = mu.squarefree_count(N)
        bound = squarefree - 2 * N * cs.rho
        return CounterexampleCorrelation(
            N=N, sum=total, average=Fraction(total, N), squarefree=squarefree,
            lower_bound=bound, lower_bound_ok=total >= bound,
            non_initials=int(cs.non_initial_prefix()[N]))

    def inequality_chain(self, cs: CounterexampleSequence, mu: MoebiusTable, N: int,
                         checkpoints: Optional[Sequence[int]] = None) -> InequalityChainReport:
        """对每个 N' ∈ [1, N] 精确检验两条不等式，返回首个违例位置"""
        if N < 1:
            raise DomainError(f"N 必须 ≥ 1，收到 {N}")
        if N > cs.horizon:
            raise SequenceRangeError(f"反例序列横域为 {cs.horizon}，请求 N = {N}")
        mu.require(N)

        rho = cs.rho
        p, q = rho.numerator, rho.denominator
        # q·4N 溢出 int64 时改用 Python 整数
        dtype = np.int64 if q * 4 * (N + 1) < 2**62 else object
        z = cs.values(1, N + 1).astype(np.int64)
        partial = np.cumsum(z * mu.window(1, N + 1).astype(np.int64)).astype(dtype)
        squares = mu.squarefree_prefix[1:N + 1].astype(dtype)
        horizon = np.arange(1, N + 1, dtype=np.int64).astype(dtype)
        non_initial = cs.non_initial_prefix()[1:N + 1].astype(dtype)

        chain_ok = np.asarray(q * partial >= q * squares - 2 * p * horizon, dtype=bool)
        violations = np.flatnonzero(~chain_ok)
        counts_ok = np.asarray(q * non_initial < p * horizon, dtype=bool)
        non_initial_violations = np.flatnonzero(~counts_ok)

        if checkpoints is None:
            checkpoints = default_checkpoints(N)
        points = [self.counterexample_correlation(cs, mu, c) for c in checkpoints if c <= N]

        report = InequalityChainReport(
            N=N, rho=rho, holds=violations.size == 0,
            first_violation=int(violations[0]) + 1 if violations.size else None,
            non_initial_ok=non_initial_violations.size == 0,
            first_non_initial_violation=(int(non_initial_violations[0]) + 1
                                         if non_initial_violations.size else None),
            checkpoints=points)
        level = "INFO" if report.ok else "WARNING"
        self.log_message(f"反例不等式链 N = {N}: {'全部成立' if report.ok else '存在违例'}", level)
        return report


def default_checkpoints(limit: int, base: int = DEFAULT_CHECKPOINT_BASE) -> List[int]:
    """不超过 limit 的 base 的幂，limit 本身不是幂时追加在末尾"""
    if limit < 1:
        raise DomainError(f"limit 必须 ≥ 1，收到 {limit}")
    points = []
    value = base
    while value <= limit:
        points.append(value)
        value *= base
    if not points or points[-1] != limit:
        points.append(limit)
    return points


_default_experiments: Optional[MoebiusExperiments] = None


def get_default_experiments() -> MoebiusExperiments:
    """获取默认实验引擎实例（单例模式）"""
    global _default_experiments
    if _default_experiments is None:
        _default_experiments = MoebiusExperiments()
    return _default_experiments


def weighted_sum(f: CylinderFunction, w: SequenceAccessor, mu: MoebiusTable, N: int) -> Value:
    return get_default_experiments().weighted_sum(f, w, mu, N)


def tm_orthogonality(N: int, mu: MoebiusTable) -> Fraction:
    return get_default_experiments().tm_orthogonality(N, mu)


def orthogonality_series(f: Optional[CylinderFunction], w: SequenceAccessor, mu: MoebiusTable,
                         checkpoints: Optional[Sequence[int]] = None) -> OrthogonalitySeries:
    return get_default_experiments().orthogonality_series(f, w, mu, checkpoints)


def periodic_orthogonality(pattern: Sequence[Value], mu: MoebiusTable, N: int,
                           prefix: Sequence[Value] = ()) -> Value:
    return get_default_experiments().periodic_orthogonality(pattern, mu, N, prefix)


def row_decomposition(f: CylinderFunction, w: SequenceAccessor, n: int,
                      mu: MoebiusTable, N: int) -> RowDecomposition:
    return get_default_experiments().row_decomposition(f, w, n, mu, N)


def counterexample_correlation(cs: CounterexampleSequence, mu: MoebiusTable,
                               N: int) -> CounterexampleCorrelation:
    return get_default_experiments().counterexample_correlation(cs, mu, N)


def inequality_chain(cs: CounterexampleSequence, mu: MoebiusTable, N: int,
                     checkpoints: Optional[Sequence[int]] = None) -> InequalityChainReport:
    return get_default_experiments().inequality_chain(cs, mu, N, checkpoints)


__all__ = [
    'CylinderFunction',
    'Checkpoint',
    'OrthogonalitySeries',
    'RowDecomposition',
    'CounterexampleCorrelation',
    'InequalityChainReport',
    'MoebiusExperiments',
    'default_checkpoints',
    'get_default_experiments',
    'weighted_sum',
    'tm_orthogonality',
    'orthogonality_series',
    'periodic_orthogonality',
    'row_decomposition',
    'counterexample_correlation',
    'inequality_chain',
]
