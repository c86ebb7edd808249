"""
运行日志系统模块
功能：日志输出、时间记录、性能监控
"""

import sys
import time
from datetime import datetime
from typing import Dict, Optional, Callable


class RunLogger:
    """运行日志系统类"""

    def __init__(self, log_callback: Optional[Callable[[str, str], None]] = None,
                 verbose: bool = False):
        """初始化日志系统

        Args:
            log_callback: 日志回调函数，接收(message, level)参数
            verbose: 是否输出INFO级别消息
        """
        self.log_callback = log_callback
        self.verbose = verbose

    def log_message(self, message: str, level: str = "INFO"):
        """输出一条日志消息

        stdout 留给计算结果，日志一律写到 stderr。

        Args:
            message: 日志消息
            level: 日志级别
        """
        if level == "INFO" and not self.verbose:
            return
        try:
            if self.log_callback:
                self.log_callback(message, level)
            else:
                timestamp = datetime.now().strftime("%H:%M:%S.%f")[:-3]
                print(f"[{timestamp}] [{level}] {message}", file=sys.stderr)
        except Exception as e:
            print(f"日志输出错误: {e}", file=sys.stderr)

    def log_timing_info(self, timing_info: Dict[str, float], title: str = "时间统计"):
        """记录时间统计信息

        Args:
            timing_info: 时间信息字典
            title: 统计标题
        """
        self.log_message(f"=== {title} ===", "TIMING")
        for stage, duration in timing_info.items():
            if isinstance(duration, (int, float)):
                self.log_message(f"{stage}: {duration:.3f}秒", "TIMING")
            else:
                self.log_message(f"{stage}: {duration}", "TIMING")
        self.log_message("=" * (len(title) + 8), "TIMING")

    def set_verbose(self, enabled: bool):
        """设置是否输出INFO级别日志

        Args:
            enabled: 是否启用
        """
        self.verbose = enabled


class TimingRecorder:
    """时间记录器类"""

    def __init__(self, logger: Optional[RunLogger] = None, monitor=None):
        """初始化时间记录器

        Args:
            logger: 日志器实例
            monitor: ResourceMonitor实例，用于在摘要中附带内存占用
        """
        self.logger = logger
        self.monitor = monitor
        self.timing_data: Dict[str, float] = {}
        self.start_times: Dict[str, float] = {}

    def start_timing(self, task_name: str):
        """开始某个任务的计时

        Args:
            task_name: 任务名称
        """
        self.start_times[task_name] = time.perf_counter()

        if self.logger:
            self.logger.log_message(f"开始计时: {task_name}")

    def end_timing(self, task_name: str):
        """结束某个任务的计时

        Args:
            task_name: 任务名称
        """
        if task_name in self.start_times:
            elapsed_time = time.perf_counter() - self.start_times.pop(task_name)
            self.timing_data[task_name] = elapsed_time

            if self.logger:
                self.logger.log_message(f"完成计时: {task_name}, 耗时: {elapsed_time:.3f}秒")
        elif self.logger:
            self.logger.log_message(f"警告: 任务 {task_name} 没有开始计时", "WARNING")

    def get_timing(self, task_name: str) -> Optional[float]:
        """获取某个任务的耗时，不存在时返回None"""
        return self.timing_data.get(task_name)

    def output_summary(self, title: str = "性能统计"):
        """输出时间统计摘要

        Args:
            title: 统计标题
        """
        if not self.logger:
            return
        summary: Dict[str, object] = dict(self.timing_data)
        if self.monitor is not None:
            info = self.monitor.process_info()
            if info:
                summary["常驻内存"] = f"{info['rss'] / 2**20:.1f} MiB"
        self.logger.log_timing_info(summary, title)
