"""
报告输出模块
功能：把实验记录渲染为 table / csv / json，并写到标准输出或文件
"""

import io
import os
import csv
import json
import sys
from fractions import Fraction
from typing import Dict, List, Optional

FLOAT_DIGITS = 12
OUTPUT_FORMATS = ("table", "csv", "json")


def _plain(value):
    """把单个值转换为可序列化的稳定形式（JSON用）"""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        return float(f"{value:.{FLOAT_DIGITS}g}")
    if isinstance(value, complex):
        return f"{value.real:.{FLOAT_DIGITS}g}{value.imag:+.{FLOAT_DIGITS}g}j"
    if isinstance(value, dict):
        return {key: _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if hasattr(value, "item"):
        # numpy 标量
        return _plain(value.item())
    return value


def _text(value) -> str:
    """把单个值转换为 table/csv 单元格文本"""
    plain = _plain(value)
    if plain is None:
        return ""
    if isinstance(plain, bool):
        return "true" if plain else "false"
    if isinstance(plain, float):
        return f"{plain:.{FLOAT_DIGITS}g}"
    if isinstance(plain, list):
        return " ".join(_text(item) for item in plain)
    if isinstance(plain, dict):
        return json.dumps(plain, ensure_ascii=False)
    return str(plain)


def render_record(record: Dict, fmt: str) -> str:
    """渲染一条实验记录

    Args:
        record: {"experiment": 名称, "params": 参数, "rows": 行列表, 可选 "summary"}
        fmt: 输出格式 table / csv / json

    Returns:
        渲染后的文本（以换行结尾）
    """
    rows: List[Dict] = record.get("rows", [])
    if fmt == "json":
        payload = {
            "experiment": record.get("experiment"),
            "params": _plain(record.get("params", {})),
            "rows": _plain(rows),
        }
        if "summary" in record:
            payload["summary"] = _plain(record["summary"])
        return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"

    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        if rows:
            header = list(rows[0].keys())
            writer.writerow(header)
            for row in rows:
                writer.writerow([_text(row.get(key)) for key in header])
        return buffer.getvalue()

    if fmt == "table":
        lines = [", ".join(_text(item) for item in row.values()) for row in rows]
        if "summary" in record:
            for key, item in record["summary"].items():
                lines.append(f"# {key}: {_text(item)}")
        return "\n".join(lines) + ("\n" if lines else "")

    raise ValueError(f"不支持的输出格式: {fmt}")


class ReportWriter:
    """报告输出类，负责渲染与落盘"""

    def __init__(self, logger=None, out_path: Optional[str] = None, fmt: str = "table"):
        """
        初始化报告输出器

        Args:
            logger: 日志记录器实例
            out_path: 输出文件路径，None 表示标准输出
            fmt: 输出格式
        """
        self.logger = logger
        self.out_path = out_path
        self.fmt = fmt

    def log_message(self, message: str, level: str = "INFO"):
        """记录日志消息"""
        if self.logger:
            self.logger.log_message(message, level)
        else:
            print(f"[{level}] {message}", file=sys.stderr)

    def write(self, record: Dict) -> bool:
        """渲染并输出一条记录

        Args:
            record: 实验记录

        Returns:
            是否写出成功
        """
        text = render_record(record, self.fmt)
        if self.out_path is None:
            sys.stdout.write(text)
            sys.stdout.flush()
            return True

        try:
            directory = os.path.dirname(os.path.abspath(self.out_path))
            if not os.path.exists(directory):
                os.makedirs(directory, exist_ok=True)
            with open(self.out_path, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
            self.log_message(f"报告已保存到: {self.out_path}")
            return True
        except OSError as e:
            self.log_message(f"保存报告失败: {e}", "ERROR")
            return False
