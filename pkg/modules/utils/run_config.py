"""
运行配置模块
功能：集中保存全局参数与各命令参数，并在派发前校验定义域
"""

from typing import Any, Dict, Optional

from .errors import ConfigError, DomainError

DEFAULT_SIEVE_LIMIT = 10**7
DEFAULT_MAX_HORIZON = 2**26
DEFAULT_WITNESS_BOUND = 2**16
DEFAULT_CHAIN_BASE = 5
DEFAULT_CHECKPOINT_BASE = 10

COMMANDS = (
    "sigma", "valuations", "equiv", "disjoint", "correlate", "stabilize",
    "orthogonality", "rows", "counterexample", "toeplitz", "generate",
)
FORMATS = ("table", "csv", "json")


class RunConfig:
    """一次命令行运行的完整配置"""

    def __init__(self,
                 command: str,
                 params: Optional[Dict[str, Any]] = None,
                 fmt: str = "table",
                 out_path: Optional[str] = None,
                 threads: int = 1,
                 sieve_limit: int = DEFAULT_SIEVE_LIMIT,
                 max_horizon: int = DEFAULT_MAX_HORIZON,
                 witness_bound: int = DEFAULT_WITNESS_BOUND,
                 verbose: bool = False,
                 timing: bool = False):
        """
        初始化运行配置

        Args:
            command: 子命令名
            params: 子命令参数字典
            fmt: 输出格式 table / csv / json
            out_path: 输出文件路径，None 为标准输出
            threads: 相关计算使用的线程数
            sieve_limit: Möbius 筛容量上限
            max_horizon: 稠密序列窗口的长度上限
            witness_bound: 互斥见证搜索的 t 上界
            verbose: 是否输出INFO日志
            timing: 是否输出计时摘要
        """
        self.command = command
        self.params = dict(params or {})
        self.fmt = fmt
        self.out_path = out_path
        self.threads = threads
        self.sieve_limit = sieve_limit
        self.max_horizon = max_horizon
        self.witness_bound = witness_bound
        self.verbose = verbose
        self.timing = timing

    def get(self, key: str, default: Any = None) -> Any:
        """读取命令参数"""
        return self.params.get(key, default)

    def validate(self) -> "RunConfig":
        """校验全局参数与命令参数

        Returns:
            自身，便于链式调用

        Raises:
            ConfigError: 全局参数非法
            DomainError: 命令参数不在定义域内
        """
        if self.command not in COMMANDS:
            raise ConfigError(f"未知命令: {self.command}")
        if self.fmt not in FORMATS:
            raise ConfigError(f"不支持的输出格式: {self.fmt}")
        if self.threads < 1:
            raise ConfigError("--threads 必须 ≥ 1")
        if self.sieve_limit < 1:
            raise ConfigError("--sieve-limit 必须 ≥ 1")
        if self.max_horizon < 1:
            raise ConfigError("--max-horizon 必须 ≥ 1")

        for key in ("N", "horizon", "length"):
            value = self.params.get(key)
            if value is not None and value < 1:
                raise DomainError(f"{key} 必须 ≥ 1，收到 {value}")
        for key in ("k", "start", "stage", "K", "L"):
            value = self.params.get(key)
            if value is not None and value < 0:
                raise DomainError(f"{key} 必须 ≥ 0，收到 {value}")

        if self.command == "disjoint":
            r, s = self.params["r"], self.params["s"]
            _require_odd(r, "r")
            _require_odd(s, "s")
            if r == s:
                raise DomainError("r 与 s 必须不同")
        if self.command == "stabilize":
            _require_odd(self.params["s"], "s")
        if self.command == "counterexample":
            base = self.params.get("base", DEFAULT_CHAIN_BASE)
            # 显式前缀时 ρ 由整除链本身校验，这里只要求几何尾合法
            minimum = 2 if self.params.get("chain") else 5
            if base < minimum:
                raise ConfigError(f"反例序列要求 base ≥ {minimum}（ρ = Σ 1/a_n ≤ 1/4）")
        return self

    def describe(self) -> Dict[str, Any]:
        """返回写入报告的参数（不含输出路径等与结果无关的字段）"""
        described = {"command": self.command}
        described.update(self.params)
        return described


def _require_odd(value: int, name: str):
    if value < 1 or value % 2 == 0:
        raise DomainError(f"{name} 必须是正奇数，收到 {value}")
