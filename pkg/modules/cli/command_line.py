"""
命令行界面模块
功能：argparse 解析器、区间与列表参数、序列选择器、参数到 RunConfig 的转换
"""

import argparse
from typing import Callable, List, Optional, Tuple

from ..utils.errors import ConfigError, MorseToolkitError
from ..utils.run_config import (DEFAULT_CHAIN_BASE, DEFAULT_MAX_HORIZON, DEFAULT_SIEVE_LIMIT,
                                DEFAULT_WITNESS_BOUND, FORMATS, RunConfig)

SEQUENCE_KINDS = ("tm", "thue", "morse", "se", "kakutani", "counterexample")
GLOBAL_KEYS = ("fmt", "out_path", "threads", "sieve_limit", "max_horizon", "witness_bound",
               "verbose", "timing")


def parse_range(text: str) -> List[int]:
    """解析 "a..b"（闭区间）、"a,b,c" 或单个整数，允许混合如 "1..4,9"

    Raises:
        ConfigError: 文本不是整数区间
    """
    values: List[int] = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ".." in part:
                low, high = part.split("..", 1)
                low, high = int(low), int(high)
                if high < low:
                    raise ConfigError(f"区间上界小于下界: '{part}'")
                values.extend(range(low, high + 1))
            else:
                values.append(int(part))
        except ValueError as e:
            raise ConfigError(f"无法解析整数区间 '{text}'") from e
    if not values:
        raise ConfigError(f"区间为空: '{text}'")
    return values


def is_range_text(text: str) -> bool:
    return ".." in str(text) or "," in str(text)


def parse_sequence_selector(text: str) -> Tuple[str, str]:
    """拆分序列选择器 "kind[:argument]"

    支持 tm、thue、morse:<MorseSpec>、se:<E>、kakutani:<E>、counterexample[:<base>]。

    Raises:
        ConfigError: 未知的序列种类或缺少参数
    """
    kind, _, argument = str(text).partition(":")
    kind = kind.strip().lower()
    if kind not in SEQUENCE_KINDS:
        raise ConfigError(f"未知序列选择器 '{text}'，可选: {', '.join(SEQUENCE_KINDS)}")
    if kind in ("morse", "se", "kakutani") and not argument:
        raise ConfigError(f"序列选择器 '{kind}' 需要参数，如 {kind}:...")
    if kind == "counterexample" and not argument:
        argument = str(DEFAULT_CHAIN_BASE)
    return kind, argument


def _typed(parser_fn: Callable) -> Callable:
    """把 ConfigError 转换为 argparse 的参数错误（退出码 2）"""
    def convert(text):
        try:
            return parser_fn(text)
        except MorseToolkitError as e:
            raise argparse.ArgumentTypeError(str(e)) from e
    convert.__name__ = parser_fn.__name__
    return convert


def _global_options(suppress: bool) -> argparse.ArgumentParser:
    """全局参数；子命令上注册同一组参数，使其既可写在子命令前也可写在子命令后"""
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser = argparse.ArgumentParser(add_help=False)
    group = parser.add_argument_group("全局参数")
    group.add_argument("--format", dest="fmt", choices=FORMATS, default=default("table"),
                       help="输出格式（默认 table）")
    group.add_argument("--out", dest="out_path", default=default(None),
                       help="输出文件路径（默认标准输出）")
    group.add_argument("--threads", type=int, default=default(1),
                       help="经验相关使用的线程数")
    group.add_argument("--sieve-limit", dest="sieve_limit", type=int,
                       default=default(DEFAULT_SIEVE_LIMIT), help="Möbius 筛容量上限")
    group.add_argument("--max-horizon", dest="max_horizon", type=int,
                       default=default(DEFAULT_MAX_HORIZON), help="稠密序列窗口的长度上限")
    group.add_argument("--witness-bound", dest="witness_bound", type=int,
                       default=default(DEFAULT_WITNESS_BOUND), help="互斥见证扫描的 t 上界")
    group.add_argument("--verbose", action="store_true", default=default(False),
                       help="输出 INFO 日志到 stderr")
    group.add_argument("--timing", action="store_true", default=default(False),
                       help="结束时输出计时摘要")
    return parser


def build_parser() -> argparse.ArgumentParser:
    """构建完整的命令行解析器"""
    parser = argparse.ArgumentParser(
        prog="main.py",
        description="Thue-Morse 家族谱系数与 Möbius 正交性实验工具",
        parents=[_global_options(suppress=False)])
    common = [_global_options(suppress=True)]
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    ranged = _typed(parse_range)
    selector = _typed(parse_sequence_selector)

    p = sub.add_parser("sigma", parents=common, help="σ̂(k) 精确值")
    p.add_argument("target", type=ranged, help="k 或区间 a..b")
    p.add_argument("--odd", action="store_true", help="只输出奇数 k")

    p = sub.add_parser("valuations", parents=common, help="奇数 K 的 2-adic 赋值报告")
    p.add_argument("target", help="K 或区间 a..b（区间中只取奇数）")

    p = sub.add_parser("equiv", parents=common, help="TM 等价判定或等价类")
    p.add_argument("K", help="K，或省略 L 时的区间 a..b")
    p.add_argument("L", nargs="?", type=int, default=None)

    p = sub.add_parser("disjoint", parents=common, help="奇数次幂谱互斥见证")
    p.add_argument("r", type=int)
    p.add_argument("s", type=int)

    p = sub.add_parser("correlate", parents=common, help="经验相关 (1/N)Σ m_{n+k} m_n")
    p.add_argument("seq", type=selector, help="序列选择器")
    p.add_argument("k", type=int)
    p.add_argument("N", type=int)

    p = sub.add_parser("stabilize", parents=common, help="TM 型 Morse 序列的稳定化检查")
    p.add_argument("spec", help="MorseSpec 文本")
    p.add_argument("s", type=int)
    p.add_argument("N", type=int)
    p.add_argument("--levels", type=ranged, default=list(range(0, 7)), help="level 列表或区间")

    p = sub.add_parser("orthogonality", parents=common, help="检查点上的 Möbius 加权平均")
    p.add_argument("seq", type=selector)
    p.add_argument("N", type=int)
    p.add_argument("--checkpoints", type=ranged, default=None, help="检查点列表（默认 10 的幂）")
    p.add_argument("--word", default=None, help="柱函数取字 w 的示性函数")
    p.add_argument("--offset", type=int, default=0, help="柱函数偏移 a（≥ −1）")

    p = sub.add_parser("rows", parents=common, help="Toeplitz 行分解诊断")
    p.add_argument("N", type=int)
    p.add_argument("--stage", type=int, required=True, help="阶段 n")
    p.add_argument("--seq", type=selector, default=("thue", ""), help="带阶段结构的序列")
    p.add_argument("--word", default=None)
    p.add_argument("--offset", type=int, default=0)

    p = sub.add_parser("counterexample", parents=common, help="非正则 Toeplitz 反例的不等式链")
    p.add_argument("N", type=int)
    p.add_argument("--base", type=int, default=DEFAULT_CHAIN_BASE, help="a_n = base^n")
    p.add_argument("--chain", type=ranged, default=None, help="显式前缀 a_1,a_2,…，之后按 base 增长")
    p.add_argument("--checkpoints", type=ranged, default=None)

    p = sub.add_parser("toeplitz", parents=common, help="Toeplitz 部分序列构造")
    p.add_argument("kind", choices=("thue",))
    p.add_argument("--stage", type=int, required=True)
    p.add_argument("--horizon", type=int, required=True)

    p = sub.add_parser("generate", parents=common, help="输出序列窗口")
    p.add_argument("seq", type=selector)
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--length", type=int, required=True)

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """把解析结果转换为 RunConfig

    Raises:
        ConfigError: 参数组合不合法
    """
    values = vars(args)
    command = values["command"]
    params = {key: value for key, value in values.items()
              if key not in GLOBAL_KEYS and key != "command"}

    if command == "sigma":
        params["ks"] = params.pop("target")
    elif command == "valuations":
        target = params.pop("target")
        Ks = parse_range(target)
        if is_range_text(target):
            Ks = [K for K in Ks if K % 2 == 1]
        params["Ks"] = Ks
    elif command == "equiv":
        K = params.pop("K")
        if params.get("L") is None:
            params["Ks"] = parse_range(K)
            params["K"] = None
        else:
            if is_range_text(K):
                raise ConfigError("给出 L 时 K 必须是单个整数")
            params["K"] = parse_range(K)[0]
    elif command in ("orthogonality", "rows") and params.get("word") is not None:
        word = params["word"]
        if not word or any(ch not in "01" for ch in word):
            raise ConfigError(f"--word 必须是非空 0/1 字，收到 '{word}'")

    return RunConfig(
        command=command,
        params=params,
        fmt=values["fmt"],
        out_path=values["out_path"],
        threads=values["threads"],
        sieve_limit=values["sieve_limit"],
        max_horizon=values["max_horizon"],
        witness_bound=values["witness_bound"],
        verbose=values["verbose"],
        timing=values["timing"],
    )


def parse_config(argv: Optional[List[str]] = None) -> RunConfig:
    """解析命令行并返回 RunConfig（argparse 用法错误以 SystemExit(2) 退出）"""
    return config_from_args(build_parser().parse_args(argv))


__all__ = [
    'SEQUENCE_KINDS',
    'parse_range',
    'parse_sequence_selector',
    'build_parser',
    'config_from_args',
    'parse_config',
]
