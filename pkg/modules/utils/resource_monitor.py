"""
资源监控模块
功能：进程内存查询、稠密数组分配前的内存预算检查
"""

import os
import sys
from typing import Dict, Optional

import psutil

from .errors import CapacityError


class ResourceMonitor:
    """资源监控类"""

    def __init__(self, logger=None, reserve_fraction: float = 0.8):
        """初始化资源监控器

        Args:
            logger: 日志记录器实例
            reserve_fraction: 单次分配允许占用的可用内存比例
        """
        self.logger = logger
        self.reserve_fraction = reserve_fraction

    def log_message(self, message: str, level: str = "INFO"):
        """记录日志消息"""
        if self.logger:
            self.logger.log_message(message, level)
        else:
            print(f"[{level}] {message}", file=sys.stderr)

    def process_info(self) -> Optional[Dict]:
        """获取当前进程信息

        Returns:
            进程信息字典或None
        """
        try:
            process = psutil.Process(os.getpid())
            return {
                'pid': process.pid,
                'rss': process.memory_info().rss,
                'cpu_percent': process.cpu_percent(),
            }
        except (psutil.NoSuchProcess, psutil.AccessDenied) as e:
            self.log_message(f"获取进程信息失败: {e}", "WARNING")
            return None

    def available_bytes(self) -> int:
        """当前系统可用内存（字节）"""
        return int(psutil.virtual_memory().available)

    def ensure_available(self, n_bytes: int, what: str):
        """分配前检查内存预算

        Args:
            n_bytes: 计划分配的字节数
            what: 分配用途（用于错误信息）

        Raises:
            CapacityError: 可用内存不足
        """
        budget = int(self.available_bytes() * self.reserve_fraction)
        if n_bytes > budget:
            raise CapacityError(
                f"{what} 需要 {n_bytes / 2**20:.1f} MiB，超过可用预算 {budget / 2**20:.1f} MiB")
        self.log_message(f"{what}: 分配 {n_bytes / 2**20:.2f} MiB")


_default_monitor: Optional[ResourceMonitor] = None


def get_default_monitor() -> ResourceMonitor:
    """获取默认资源监控器实例（单例模式）"""
    global _default_monitor
    if _default_monitor is None:
        _default_monitor = ResourceMonitor()
    return _default_monitor
