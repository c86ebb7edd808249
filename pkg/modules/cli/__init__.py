"""
命令行界面模块包
包含参数解析与序列选择器
"""

# 导入命令行模块
from .command_line import (SEQUENCE_KINDS, build_parser, config_from_args, parse_config,
                           parse_range, parse_sequence_selector)

__all__ = [
    'SEQUENCE_KINDS',
    'build_parser',
    'config_from_args',
    'parse_config',
    'parse_range',
    'parse_sequence_selector',
]
