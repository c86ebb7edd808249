"""
工具模块包
包含日志、计时、配置、报告输出、资源检查与异常定义
"""

# 导入工具模块
from .errors import (EXIT_CAPACITY, EXIT_INVARIANT, EXIT_OK, EXIT_USAGE, CapacityError,
                     ConfigError, ConstructionError, DomainError, InvariantViolation,
                     MorseToolkitError, SequenceRangeError, UnsupportedInputError,
                     WitnessNotFoundError, exit_code_for)
from .run_logger import RunLogger, TimingRecorder
from .run_config import RunConfig
from .report_writer import ReportWriter, render_record
from .resource_monitor import ResourceMonitor, get_default_monitor

__all__ = [
    'EXIT_CAPACITY', 'EXIT_INVARIANT', 'EXIT_OK', 'EXIT_USAGE',
    'CapacityError', 'ConfigError', 'ConstructionError', 'DomainError', 'InvariantViolation',
    'MorseToolkitError', 'SequenceRangeError', 'UnsupportedInputError',
    'WitnessNotFoundError', 'exit_code_for',
    'RunLogger', 'TimingRecorder',
    'RunConfig',
    'ReportWriter', 'render_record',
    'ResourceMonitor', 'get_default_monitor',
]
