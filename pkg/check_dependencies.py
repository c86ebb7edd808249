#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
依赖库验证脚本
检查 Thue-Morse 谱与 Möbius 正交性工具所需的依赖库是否正确安装
"""

import sys
import importlib


def check_python_version():
    """检查Python版本"""
    version = sys.version_info
    print(f"Python版本: {version.major}.{version.minor}.{version.micro}")

    if version < (3, 8):
        print("❌ Python版本过低，需要Python 3.8或以上版本")
        return False
    print("✓ Python版本符合要求")
    return True


def check_library(name, description=""):
    """检查单个库是否可用"""
    try:
        module = importlib.import_module(name)
        version = getattr(module, "__version__", "未知版本")
        print(f"✓ {name:<12} - {description} ({version})")
        return True
    except ImportError as e:
        print(f"❌ {name:<12} - {description} (导入失败: {e})")
        return False


def check_optional_library(name, description="", reason=""):
    """检查可选库"""
    try:
        importlib.import_module(name)
        print(f"✓ {name:<12} - {description}")
        return True
    except ImportError:
        print(f"! {name:<12} - {description} ({reason})")
        return False


def check_specific_functions():
    """检查特定功能是否可用"""
    print("\n=== 功能验证 ===")

    # 小规模筛与 σ̂ 递推
    try:
        from modules.core import SpectralEngine, moebius_sieve
        table = moebius_sieve(30)
        assert (table[1], table[12], table[30]) == (1, 0, -1)
        print("✓ Möbius 筛 - μ(1), μ(12), μ(30) 正确")
        engine = SpectralEngine()
        assert str(engine.sigma_hat(47)) == "-1/8"
        print("✓ σ̂ 递推 - σ̂(47) = -1/8")
    except Exception as e:
        print(f"❌ 核心计算 - 自检失败: {e}")

    try:
        from modules.core.moebius_sieve import HAS_NUMBA
        print(f"✓ 筛内核 - {'numba 编译' if HAS_NUMBA else 'numpy 切片（未安装 numba）'}")
    except Exception as e:
        print(f"❌ 筛内核 - 检查失败: {e}")


def main():
    """主函数"""
    print("Thue-Morse 谱与 Möbius 正交性工具 - 依赖库验证")
    print("=" * 50)

    if not check_python_version():
        print("\n⚠️ 建议升级Python版本后重新运行")

    print("\n=== 核心依赖库检查 ===")
    required_libs = [
        ("numpy", "数值计算库"),
        ("psutil", "内存与进程信息"),
    ]
    success_count = sum(1 for name, desc in required_libs if check_library(name, desc))
    total_count = len(required_libs)

    print("\n=== 可选依赖库检查 ===")
    optional_libs = [
        ("numba", "JIT 编译", "线性筛加速，缺失时回退到 numpy"),
        ("pytest", "测试框架", "运行 tests/ 需要"),
        ("hypothesis", "属性测试", "运行 tests/ 需要"),
    ]
    for name, desc, reason in optional_libs:
        check_optional_library(name, desc, reason)

    if success_count == total_count:
        check_specific_functions()

    print("\n" + "=" * 50)
    print(f"核心库检查结果: {success_count}/{total_count} 通过")

    if success_count == total_count:
        print("🎉 所有核心依赖库安装正确！")
        print("\n示例命令:")
        print("  python main.py sigma 9..15 --odd")
    else:
        print("❌ 部分依赖库缺失，请参考以下安装命令:")
        print("\n安装命令:")
        print("  pip install -r requirements.txt")

    print("\n详细安装指南请查看 docs/INSTALL.md 文件")


if __name__ == "__main__":
    try:
        main()
    except KeyboardInterrupt:
        print("\n\n用户中断检查")
    except Exception as e:
        print(f"\n\n检查过程中出现错误: {e}")
        print("请确保在正确的Python环境中运行此脚本")
