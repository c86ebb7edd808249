"""
异常定义模块
功能：统一的异常层级，供核心引擎抛出、应用层转换为退出码
"""


class MorseToolkitError(Exception):
    """工具包所有异常的基类"""


class DomainError(MorseToolkitError, ValueError):
    """数学定义域错误（如 v2(0)、偶数 K、空块）"""


class ConfigError(MorseToolkitError, ValueError):
    """配置或规格文本错误（MorseSpec 语法、整除链、ρ 超界）"""


class ConstructionError(MorseToolkitError):
    """Toeplitz 构造试图覆盖已填位置"""


class SequenceRangeError(MorseToolkitError, IndexError):
    """序列访问越界或横域不足"""


class CapacityError(MorseToolkitError):
    """超出筛容量或内存预算"""


class UnsupportedInputError(MorseToolkitError):
    """输入序列没有声明所需的结构"""


class WitnessNotFoundError(MorseToolkitError):
    """谱互斥见证搜索用尽"""

    def __init__(self, message: str, diagnostics: dict = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class InvariantViolation(MorseToolkitError):
    """命令检查到的数学不变量被违反"""


# 退出码约定
EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_USAGE = 2
EXIT_CAPACITY = 3


def exit_code_for(error: BaseException) -> int:
    """把异常映射为命令行退出码

    Args:
        error: 捕获到的异常

    Returns:
        退出码
    """
    if isinstance(error, InvariantViolation):
        return EXIT_INVARIANT
    if isinstance(error, WitnessNotFoundError):
        return EXIT_INVARIANT
    if isinstance(error, CapacityError):
        return EXIT_CAPACITY
    return EXIT_USAGE


__all__ = [
    'MorseToolkitError',
    'DomainError',
    'ConfigError',
    'ConstructionError',
    'SequenceRangeError',
    'CapacityError',
    'UnsupportedInputError',
    'WitnessNotFoundError',
    'InvariantViolation',
    'EXIT_OK',
    'EXIT_INVARIANT',
    'EXIT_USAGE',
    'EXIT_CAPACITY',
    'exit_code_for',
]
