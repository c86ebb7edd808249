"""
序列生成模块
功能：0/1 块与块乘积、广义 Morse 规格、Thue-Morse / Thue-Toeplitz / s_E 序列访问器
"""

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from ..utils.errors import ConfigError, DomainError, SequenceRangeError, UnsupportedInputError

# 单次稠密窗口允许的最大长度，访问器按区块取值时不超过它
DENSE_CHUNK = 1 << 22


@dataclass(frozen=True)
class Block:
    """0/1 有限字"""
    bits: Tuple[int, ...] = ()

    def __post_init__(self):
        for bit in self.bits:
            if bit not in (0, 1):
                raise DomainError(f"块只能包含 0/1，收到 {bit!r}")

    @classmethod
    def from_str(cls, text: str) -> "Block":
        text = text.strip()
        if any(ch not in "01" for ch in text):
            raise DomainError(f"块文本只能包含 0/1: '{text}'")
        return cls(tuple(int(ch) for ch in text))

    @classmethod
    def from_array(cls, values) -> "Block":
        return cls(tuple(int(v) for v in np.asarray(values).ravel()))

    def __len__(self) -> int:
        return len(self.bits)

    def __getitem__(self, index: int) -> int:
        return self.bits[index]

    def __str__(self) -> str:
        return "".join(str(bit) for bit in self.bits)

    def as_array(self) -> np.ndarray:
        return np.array(self.bits, dtype=np.uint8)


def _as_block(value: Union[Block, str, Sequence[int]]) -> Block:
    if isinstance(value, Block):
        return value
    if isinstance(value, str):
        return Block.from_str(value)
    return Block(tuple(int(v) for v in value))


def complement(block: Union[Block, str]) -> Block:
    """逐位 0↔1 互换"""
    block = _as_block(block)
    return Block(tuple(1 - bit for bit in block.bits))


def block_product(left: Union[Block, str], right: Union[Block, str]) -> Block:
    """块乘积 B × C：|C| 段拼接，第 j 段为 B（C(j)=0）或 B 的补（C(j)=1）

    Raises:
        DomainError: 任一块为空
    """
    left, right = _as_block(left), _as_block(right)
    if len(left) == 0 or len(right) == 0:
        raise DomainError("block_product 不接受空块")
    product = left.as_array()[None, :] ^ right.as_array()[:, None]
    return Block.from_array(product.ravel())


BLOCK_01 = Block((0, 1))


def _xor_fold_parity(values: np.ndarray) -> np.ndarray:
    """uint64 数组中每个元素二进制 1 个数的奇偶"""
    v = values.astype(np.uint64, copy=True)
    for shift in (32, 16, 8, 4, 2, 1):
        v ^= v >> np.uint64(shift)
    return (v & np.uint64(1)).astype(np.uint8)


# ---------------------------------------------------------------------------
# 广义 Morse 规格
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MorseSpec:
    """块序列 b⁰, b¹, … 的描述

    两种内部形式：
      * 显式前缀 + 周期尾（tail 为空即有限规格；单块尾即代换情形）
      * TM 型模板：基块 base，在位置 i_m 处插入 m 个 01 块
        （runs_auto 时 i_m = m(m+1)/2，否则取 run_starts 中显式给出的起点）
    """
    prefix: Tuple[Block, ...] = ()
    tail: Tuple[Block, ...] = ()
    base: Optional[Block] = None
    run_starts: Tuple[int, ...] = ()
    runs_auto: bool = False
    text: str = ""

    def __post_init__(self):
        blocks = list(self.prefix) + list(self.tail)
        if self.base is not None:
            blocks.append(self.base)
        elif not self.prefix and not self.tail:
            raise ConfigError("MorseSpec 至少需要一个块")
        for block in blocks:
            if len(block) < 2 or block[0] != 0:
                raise ConfigError(f"块 {block} 不合法：要求长度 ≥ 2 且首位为 0")
        if self.base is not None and not self.runs_auto:
            for m, start in enumerate(self.run_starts, start=1):
                if start < 0:
                    raise ConfigError(f"tm_runs 起点必须 ≥ 0，收到 {start}")
                if m > 1 and start < self.run_starts[m - 2] + (m - 1):
                    raise ConfigError(f"tm_runs 第 {m} 段与前一段重叠")

    # -- 构造 -----------------------------------------------------------------

    @classmethod
    def thue_morse(cls) -> "MorseSpec":
        return cls(tail=(BLOCK_01,), text="tm")

    @classmethod
    def substitution(cls, block: Union[Block, str]) -> "MorseSpec":
        block = _as_block(block)
        return cls(tail=(block,), text=f"{block}*")

    @classmethod
    def template(cls, base: Union[Block, str], run_starts: Optional[Sequence[int]] = None) -> "MorseSpec":
        base = _as_block(base)
        if run_starts is None:
            return cls(base=base, runs_auto=True, text=f"base={base};tm_runs=auto")
        starts = tuple(int(s) for s in run_starts)
        return cls(base=base, run_starts=starts,
                   text=f"base={base};tm_runs={','.join(str(s) for s in starts)}")

    # -- 查询 -----------------------------------------------------------------

    @property
    def is_template(self) -> bool:
        return self.base is not None

    @property
    def is_finite(self) -> bool:
        return not self.is_template and not self.tail

    @property
    def depth(self) -> Optional[int]:
        """有限规格的块数，无限规格为 None"""
        return len(self.prefix) if self.is_finite else None

    @property
    def is_pure_tm(self) -> bool:
        """所有块都是 01，即 Thue-Morse 本身"""
        if self.is_template or self.is_finite:
            return False
        return all(block == BLOCK_01 for block in self.prefix + self.tail)

    def _template_run(self, i: int) -> Optional[Tuple[int, int]]:
        """位置 i 所在的 01 段 (起点, 长度)，不在任何段内时为 None"""
        if self.runs_auto:
            # 最大的 m 使 m(m+1)/2 ≤ i
            m = (math.isqrt(8 * i + 1) - 1) // 2
            start = m * (m + 1) // 2
            if m >= 1 and i < start + m:
                return start, m
            return None
        m = bisect_right(self.run_starts, i)
        if m == 0:
            return None
        start = self.run_starts[m - 1]
        if i < start + m:
            return start, m
        return None

    def block_at(self, i: int) -> Block:
        """第 i 个块 b^i

        Raises:
            SequenceRangeError: 有限规格越界
        """
        if i < 0:
            raise SequenceRangeError(f"块下标必须 ≥ 0，收到 {i}")
        if self.is_template:
            return BLOCK_01 if self._template_run(i) is not None else self.base
        if i < len(self.prefix):
            return self.prefix[i]
        if not self.tail:
            raise SequenceRangeError(f"有限规格只有 {len(self.prefix)} 个块，请求第 {i} 个")
        return self.tail[(i - len(self.prefix)) % len(self.tail)]

    def q(self, k: int) -> int:
        """q_k = p₀·p₁·…·p_{k−1}"""
        result = 1
        for i in range(k):
            result *= len(self.block_at(i))
        return result

    def levels_covering(self, n: int) -> int:
        """最小的 k 使 q_k > n"""
        k, size = 0, 1
        while size <= n:
            size *= len(self.block_at(k))
            k += 1
        return k

    def run_length_at(self, k: int) -> Optional[int]:
        """从第 k 个块开始连续 01 块的个数，无限长时返回 None"""
        if self.is_template:
            run = self._template_run(k)
            if run is None:
                return 0
            start, length = run
            return start + length - k

        tail_all_01 = bool(self.tail) and all(block == BLOCK_01 for block in self.tail)
        count, i = 0, k
        while True:
            if i >= len(self.prefix) and tail_all_01:
                return None
            if self.is_finite and i >= len(self.prefix):
                return count
            if self.block_at(i) != BLOCK_01:
                return count
            count += 1
            i += 1

    def has_runs(self) -> bool:
        """规格中是否声明了至少一个 01 块"""
        if self.is_template:
            return self.runs_auto or bool(self.run_starts)
        return any(block == BLOCK_01 for block in self.prefix + self.tail)

    def max_run_length(self) -> Optional[int]:
        """声明的 01 段最大长度，无界时返回 None"""
        if self.is_template:
            if self.runs_auto:
                return None
            return len(self.run_starts)
        if self.tail and all(block == BLOCK_01 for block in self.tail):
            return None
        longest = 0
        span = len(self.prefix) + 2 * len(self.tail)
        for i in range(span if not self.is_finite else len(self.prefix)):
            longest = max(longest, self.run_length_at(i) or 0)
        return longest

    def __str__(self) -> str:
        return self.text or self.format()

    def format(self) -> str:
        """序列化为文本形式（parse_morse_spec 的逆）"""
        if self.is_template:
            if self.runs_auto:
                return f"base={self.base};tm_runs=auto"
            return f"base={self.base};tm_runs={','.join(str(s) for s in self.run_starts)}"
        parts = [str(block) for block in self.prefix]
        if len(self.tail) == 1:
            parts.append(f"{self.tail[0]}*")
        elif self.tail:
            parts.append("(" + ",".join(str(block) for block in self.tail) + ")*")
        return ",".join(parts)


def parse_morse_spec(text: str) -> MorseSpec:
    """解析 MorseSpec 文本

    语法见 docs/MORSE_SPEC_FORMAT.md：
      tm                          Thue-Morse（等价于 01*）
      001,01*                     前缀 001，之后 01 永远重复
      (001,01)*                   组周期尾
      0110,001                    有限规格
      base=001;tm_runs=auto       TM 型模板，i_m = m(m+1)/2
      base=001;tm_runs=1,3,6      TM 型模板，显式起点

    Raises:
        ConfigError: 文本不合法
    """
    raw = text
    text = text.strip().replace(" ", "")
    if not text:
        raise ConfigError("MorseSpec 文本为空")
    if text.lower() == "tm":
        return MorseSpec(tail=(BLOCK_01,), text=raw.strip())

    if "base=" in text:
        fields = {}
        for part in text.split(";"):
            if not part:
                continue
            if "=" not in part:
                raise ConfigError(f"模板字段缺少 '=': '{part}'")
            key, value = part.split("=", 1)
            fields[key] = value
        unknown = set(fields) - {"base", "tm_runs"}
        if unknown:
            raise ConfigError(f"未知模板字段: {', '.join(sorted(unknown))}")
        base = _parse_block(fields["base"])
        runs = fields.get("tm_runs", "auto")
        if runs == "auto":
            return MorseSpec(base=base, runs_auto=True, text=raw.strip())
        try:
            starts = tuple(int(item) for item in runs.split(",") if item)
        except ValueError as e:
            raise ConfigError(f"tm_runs 必须是 'auto' 或整数列表: '{runs}'") from e
        return MorseSpec(base=base, run_starts=starts, text=raw.strip())

    tail: Tuple[Block, ...] = ()
    head = text
    if text.endswith(")*"):
        open_at = text.rfind("(")
        if open_at < 0:
            raise ConfigError(f"括号不匹配: '{raw}'")
        tail = tuple(_parse_block(item) for item in text[open_at + 1:-2].split(",") if item)
        if not tail:
            raise ConfigError(f"周期组为空: '{raw}'")
        head = text[:open_at]
        if head and not head.endswith(","):
            raise ConfigError(f"周期组前缺少逗号: '{raw}'")

    items = [item for item in head.split(",")]
    # 末尾逗号忽略
    while items and items[-1] == "":
        items.pop()
    if any(item == "" for item in items):
        raise ConfigError(f"空块: '{raw}'")

    prefix = []
    for index, item in enumerate(items):
        if item.endswith("*"):
            if index != len(items) - 1 or tail:
                raise ConfigError(f"只有最后一项可以带 '*': '{raw}'")
            tail = (_parse_block(item[:-1]),)
        else:
            prefix.append(_parse_block(item))
    return MorseSpec(prefix=tuple(prefix), tail=tail, text=raw.strip())


def _parse_block(text: str) -> Block:
    try:
        return Block.from_str(text)
    except DomainError as e:
        raise ConfigError(str(e)) from e


def morse_prefix(spec: MorseSpec, k: int) -> Block:
    """长 q_k 的前缀：左折叠 block_product(b⁰, b¹, …, b^{k−1})，k = 0 时为 "0" """
    if k < 0:
        raise DomainError(f"k 必须 ≥ 0，收到 {k}")
    word = Block((0,))
    for i in range(k):
        word = block_product(word, spec.block_at(i))
    return word


def kakutani_spec_from_E(E: "DigitSet", depth: int) -> MorseSpec:
    """b^n = 01（n+1 ∈ E）或 00（否则），n < depth，得到有限规格

    E 可以是有限集，也可以是谓词；谓词在 1..depth 上求值。
    """
    if depth < 1:
        raise DomainError(f"depth 必须 ≥ 1，收到 {depth}")
    if callable(E):
        members = {i for i in range(1, depth + 1) if E(i)}
    else:
        members = set(E)
    blocks = tuple(BLOCK_01 if n + 1 in members else Block((0, 0)) for n in range(depth))
    label = ",".join(str(e) for e in sorted(members))
    return MorseSpec(prefix=blocks, text=f"kakutani:{label}")


# ---------------------------------------------------------------------------
# 单点公式
# ---------------------------------------------------------------------------

def thue_morse_bit(n: int) -> int:
    """n 的二进制中 1 的个数的奇偶"""
    if n < 0:
        raise SequenceRangeError(f"单边序列不接受负下标 {n}")
    return bin(n).count("1") & 1


def thue_toeplitz_bit(n: int) -> int:
    """x(n) XOR x(n+1)"""
    return thue_morse_bit(n) ^ thue_morse_bit(n + 1)


DigitSet = Union[Iterable[int], Callable[[int], bool]]


def _digit_mask(E: DigitSet, first_digit: int, width: int) -> int:
    """把 E 转换为按位掩码；可调用的 E 按 width 个数位求值"""
    if callable(E):
        members = [i for i in range(first_digit, first_digit + width) if E(i)]
    else:
        members = [i for i in E if i >= first_digit]
    mask = 0
    for i in members:
        mask |= 1 << (i - first_digit)
    return mask


def s_E_bit(n: int, E: DigitSet, first_digit: int = 0) -> int:
    """Σ_{i∈E} n_i 的奇偶

    Args:
        n: 自然数
        E: 有限下标集，或谓词（按 n 的二进制长度求值）
        first_digit: 最低位的编号；0 表示 n = Σ n_i 2^i，1 表示 n = Σ n_i 2^{i−1}
    """
    if n < 0:
        raise SequenceRangeError(f"单边序列不接受负下标 {n}")
    if first_digit not in (0, 1):
        raise DomainError(f"first_digit 只能是 0 或 1，收到 {first_digit}")
    mask = _digit_mask(E, first_digit, max(n.bit_length(), 1))
    return bin(n & mask).count("1") & 1


# ---------------------------------------------------------------------------
# 序列访问器
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StageSkeleton:
    """n 阶 Toeplitz 骨架：周期 2^n 内前 2^n−1 格为 B_n，余下一格（剩余类 hole_residue）为空洞"""
    stage: int
    period: int
    block: Block
    hole_residue: int

    def is_hole(self, index: int) -> bool:
        return index % self.period == self.hole_residue


class SequenceAccessor:
    """惰性 index → symbol 访问器基类

    子类实现 _bits_dense(start, stop)（二值）或 _values_dense（三值）。
    horizon 为 None 表示无限序列，否则定义域为 [0, horizon]。
    """
    name = "sequence"
    binary = True
    horizon: Optional[int] = None

    def check_range(self, start: int, stop: int):
        """确认 [start, stop) 在定义域内

        Raises:
            SequenceRangeError: 负下标或越过 horizon
        """
        if start < 0:
            raise SequenceRangeError(f"{self.name}: 单边序列不接受负下标 {start}")
        if self.horizon is not None and stop - 1 > self.horizon:
            raise SequenceRangeError(f"{self.name}: 定义域为 [0, {self.horizon}]，请求到 {stop - 1}")

    def bit(self, n: int) -> int:
        return int(self.bits(n, n + 1)[0])

    def bits(self, start: int, stop: int) -> np.ndarray:
        """w(start), …, w(stop−1)，uint8 数组"""
        if not self.binary:
            raise UnsupportedInputError(f"{self.name} 不是 0/1 序列")
        self.check_range(start, stop)
        if stop <= start:
            return np.zeros(0, dtype=np.uint8)
        return self._bits_dense(start, stop)

    def values(self, start: int, stop: int) -> np.ndarray:
        """数值观测：二值序列为 (−1)^{w(n)}，三值序列为 w(n) 本身"""
        if self.binary:
            return 1 - 2 * self.bits(start, stop).astype(np.int8)
        self.check_range(start, stop)
        return self._values_dense(start, stop)

    def skeleton(self, n: int) -> StageSkeleton:
        raise UnsupportedInputError(f"{self.name} 没有声明 Toeplitz 阶段结构")

    @property
    def has_skeleton(self) -> bool:
        return False

    def _bits_dense(self, start: int, stop: int) -> np.ndarray:
        raise NotImplementedError

    def _values_dense(self, start: int, stop: int) -> np.ndarray:
        raise NotImplementedError


class ThueMorseSequence(SequenceAccessor):
    """x(n) = n 的二进制数字和 mod 2"""
    name = "tm"

    def bit(self, n: int) -> int:
        self.check_range(n, n + 1)
        return thue_morse_bit(n)

    def _bits_dense(self, start: int, stop: int) -> np.ndarray:
        return _xor_fold_parity(np.arange(start, stop, dtype=np.uint64))


class ThueToeplitzSequence(SequenceAccessor):
    """z(n) = x(n) XOR x(n+1)，Thue-Morse 的 Toeplitz 因子"""
    name = "thue"

    def bit(self, n: int) -> int:
        self.check_range(n, n + 1)
        return thue_toeplitz_bit(n)

    def _bits_dense(self, start: int, stop: int) -> np.ndarray:
        x = _xor_fold_parity(np.arange(start, stop + 1, dtype=np.uint64))
        return x[:-1] ^ x[1:]

    @property
    def has_skeleton(self) -> bool:
        return True

    def skeleton(self, n: int) -> StageSkeleton:
        """n 阶骨架：周期 2^n，B_n 为前 2^n−1 格，空洞剩余类为 2^n−1"""
        if n < 1:
            raise DomainError(f"阶段 n 必须 ≥ 1，收到 {n}")
        period = 1 << n
        return StageSkeleton(stage=n, period=period,
                             block=Block.from_array(self._bits_dense(0, period - 1)),
                             hole_residue=period - 1)


class MorseSequence(SequenceAccessor):
    """广义 Morse 序列 x = b⁰ × b¹ × …

    x(n) = Σ_i b^i(d_i) mod 2，其中 d_i 为 n 在混合进制 (p₀, p₁, …) 下的数字。
    """

    def __init__(self, spec: MorseSpec):
        self.spec = spec
        self.name = f"morse:{spec}"
        if spec.is_finite:
            self.horizon = spec.q(len(spec.prefix)) - 1

    def _bits_dense(self, start: int, stop: int) -> np.ndarray:
        remaining = np.arange(start, stop, dtype=np.int64)
        result = np.zeros(stop - start, dtype=np.uint8)
        levels = self.spec.levels_covering(stop - 1)
        for i in range(levels):
            block = self.spec.block_at(i).as_array()
            digits = remaining % len(block)
            remaining //= len(block)
            result ^= block[digits]
        return result


class SESequence(SequenceAccessor):
    """s_E(n) = Σ_{i∈E} n_i mod 2"""

    def __init__(self, E: Iterable[int], first_digit: int = 0):
        if first_digit not in (0, 1):
            raise DomainError(f"first_digit 只能是 0 或 1，收到 {first_digit}")
        self.E = frozenset(int(i) for i in E)
        if any(i < 0 for i in self.E):
            raise DomainError("E 只能包含自然数")
        self.first_digit = first_digit
        self.mask = _digit_mask(self.E, first_digit, 0)
        if self.mask.bit_length() > 63:
            raise DomainError("E 超出 63 个数位")
        self.name = f"se:{','.join(str(i) for i in sorted(self.E))}"

    def bit(self, n: int) -> int:
        self.check_range(n, n + 1)
        return s_E_bit(n, self.E, self.first_digit)

    def _bits_dense(self, start: int, stop: int) -> np.ndarray:
        indices = np.arange(start, stop, dtype=np.uint64)
        return _xor_fold_parity(indices & np.uint64(self.mask))


def is_thue_morse_type(spec: MorseSpec, min_run: int) -> bool:
    """规格是否声明了长度 ≥ min_run 的 01 段（无界时总为 True）"""
    longest = spec.max_run_length()
    return longest is None or longest >= min_run


def window(seq: SequenceAccessor, a: int, length: int):
    """(w(a), …, w(a+length−1))

    二值序列返回 Block，三值序列返回整数元组。

    Raises:
        SequenceRangeError: 负下标或超出定义域
    """
    if length < 0:
        raise DomainError(f"length 必须 ≥ 0，收到 {length}")
    if length == 0:
        return Block() if seq.binary else ()
    if seq.binary:
        return Block.from_array(seq.bits(a, a + length))
    return tuple(int(v) for v in seq.values(a, a + length))


__all__ = [
    'DENSE_CHUNK',
    'Block',
    'BLOCK_01',
    'complement',
    'block_product',
    'MorseSpec',
    'parse_morse_spec',
    'morse_prefix',
    'kakutani_spec_from_E',
    'thue_morse_bit',
    'thue_toeplitz_bit',
    's_E_bit',
    'StageSkeleton',
    'SequenceAccessor',
    'ThueMorseSequence',
    'ThueToeplitzSequence',
    'MorseSequence',
    'SESequence',
    'is_thue_morse_type',
    'window',
]
