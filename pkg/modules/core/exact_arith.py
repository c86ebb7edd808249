"""
精确算术模块
功能：约化有理数、2-adic 赋值、奇数链分解、奇乘子搜索
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from ..utils.errors import DomainError

# 约化分数：每次构造与运算后 gcd(|p|, q) = 1 且 q ≥ 1，零为 0/1
ExactRational = Fraction

RationalLike = Union[int, Fraction]


def format_rational(value: RationalLike) -> str:
    """序列化为规范的 "p/q" 形式，整数也带分母（如 "1/1"）"""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    """解析 "p/q" 或整数文本

    Raises:
        DomainError: 文本不是有理数或分母为零
    """
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise DomainError(f"无法解析有理数 '{text}': {e}") from e


def trailing_zeros(n: int) -> int:
    """非零整数二进制末尾 0 的个数"""
    if n == 0:
        raise DomainError("0 没有有限的末尾零个数")
    n = abs(n)
    return (n & -n).bit_length() - 1


def floor_log2(n: int) -> int:
    """正整数的 ⌊log₂ n⌋"""
    if n < 1:
        raise DomainError(f"floor_log2 要求 n ≥ 1，收到 {n}")
    return n.bit_length() - 1


def v2(w: RationalLike) -> int:
    """2-adic 赋值：w = 2^k p / (2^l q)（p, q 奇）时返回 k − l

    Args:
        w: 非零有理数

    Returns:
        2 的重数

    Raises:
        DomainError: w = 0
    """
    w = Fraction(w)
    if w == 0:
        raise DomainError("v2 在 0 处无定义")
    return trailing_zeros(w.numerator) - trailing_zeros(w.denominator)


@dataclass(frozen=True)
class OddChain:
    """奇数 K 的链分解 K_{i-1} = 2^{a_i}·K_i + 1，K_r = 1"""
    K: int
    ks: Tuple[int, ...]
    exps: Tuple[int, ...]

    @property
    def r(self) -> int:
        return len(self.exps)

    @property
    def l(self) -> int:
        return sum(self.exps)


def odd_chain(K: int) -> OddChain:
    """计算奇数 K 的链分解

    K = 1 为退化基例：r = 0，l = 0，ks = (1,)，exps = ()。

    Args:
        K: 正奇数

    Returns:
        OddChain

    Raises:
        DomainError: K 为偶数或 < 1
    """
    if K < 1 or K % 2 == 0:
        raise DomainError(f"odd_chain 要求正奇数，收到 {K}")

    ks: List[int] = [K]
    exps: List[int] = []
    current = K
    while current != 1:
        # current - 1 为偶数，拆出 2 的幂后余下奇数
        a = trailing_zeros(current - 1)
        current = (current - 1) >> a
        exps.append(a)
        ks.append(current)
    return OddChain(K=K, ks=tuple(ks), exps=tuple(exps))


def find_odd_t(r: int, s: int, a: int) -> Optional[int]:
    """寻找最小奇数 t 使 r·t < 2^a < s·t

    候选窗口为 (2^a/s, 2^a/r)，升序扫描其中的奇数。

    Args:
        r: 奇数，r < s
        s: 奇数
        a: ≥ 1

    Returns:
        最小的奇数 t，窗口内没有奇数时返回 None

    Raises:
        DomainError: 参数不满足前置条件
    """
    if r < 1 or s < 1 or r % 2 == 0 or s % 2 == 0:
        raise DomainError(f"find_odd_t 要求正奇数 r, s，收到 ({r}, {s})")
    if r >= s:
        raise DomainError(f"find_odd_t 要求 r < s，收到 ({r}, {s})")
    if a < 1:
        raise DomainError(f"find_odd_t 要求 a ≥ 1，收到 {a}")

    power = 1 << a
    # s·t > 2^a  ⇔  t ≥ ⌊2^a/s⌋ + 1
    t = power // s + 1
    if t % 2 == 0:
        t += 1
    # r·t < 2^a  ⇔  t ≤ ⌈2^a/r⌉ - 1
    upper = -(-power // r) - 1
    if t <= upper:
        return t
    return None


def lemma_t_candidates(r: int, s: int, a: int) -> List[int]:
    """候选 t：⌊2^a/(r+1)⌋ 与其后一个数，取奇数并过滤不满足 r·t < 2^a < s·t 的"""
    base = (1 << a) // (r + 1)
    candidates = []
    for t in (base, base + 1):
        if t >= 1 and t % 2 == 1 and r * t < (1 << a) < s * t:
            candidates.append(t)
    return candidates


__all__ = [
    'ExactRational',
    'format_rational',
    'parse_rational',
    'trailing_zeros',
    'floor_log2',
    'v2',
    'OddChain',
    'odd_chain',
    'find_odd_t',
    'lemma_t_candidates',
]
