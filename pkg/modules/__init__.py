"""
Thue-Morse 家族谱计算与 Möbius 正交性工具 - 模块包
包含所有核心功能模块
"""

__version__ = "1.0.0"

# 模块说明
__doc__ = """
Thue-Morse 谱与 Möbius 正交性工具模块化版本

模块结构:
- core/: 核心计算模块
  - exact_arith.py: 精确有理数、2-adic 赋值、奇数链
  - moebius_sieve.py: Möbius 线性筛
  - sequence_generator.py: 块乘积、Morse 规格、序列访问器
  - toeplitz_builder.py: Toeplitz 构造与非正则反例
  - spectral_engine.py: σ̂ 精确值、互斥见证、经验相关
  - moebius_experiments.py: Möbius 正交性实验
- cli/: 命令行界面模块
  - command_line.py: 参数解析与序列选择器
- utils/: 工具模块
  - run_logger.py: 日志与计时
  - run_config.py: 运行配置
  - report_writer.py: 报告输出
  - resource_monitor.py: 内存检查
  - errors.py: 异常层级与退出码
"""
