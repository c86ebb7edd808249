"""
Thue-Morse 谱与 Möbius 正交性工具 - 主程序入口
功能：整合所有模块，按子命令派发计算、输出报告并转换退出码
"""

import sys
from typing import Dict, List, Optional, Tuple

import numpy as np

# 导入各个功能模块
from modules.cli import parse_config, parse_range
from modules.core import (CylinderFunction, DivisibilityChain, MoebiusExperiments, MoebiusSieve,
                          MorseSequence, SESequence, SpectralEngine, ThueMorseSequence,
                          ThueToeplitzSequence, ToeplitzBuilder, kakutani_spec_from_E,
                          pair_disjoint_expected, parse_morse_spec, window)
from modules.core.toeplitz_builder import HOLE
from modules.utils import (EXIT_CAPACITY, EXIT_OK, EXIT_USAGE, InvariantViolation,
                           MorseToolkitError, ReportWriter, ResourceMonitor, RunConfig, RunLogger,
                           SequenceRangeError, TimingRecorder, UnsupportedInputError,
                           WitnessNotFoundError, exit_code_for)

CommandResult = Tuple[Dict, List[str]]


class MorseToolkitApp:
    """Thue-Morse 谱与 Möbius 正交性工具主控制器"""

    def __init__(self, config: RunConfig, log_callback=None):
        """初始化应用程序

        Args:
            config: 运行配置
            log_callback: 日志回调函数，缺省写到 stderr
        """
        self.config = config

        # 初始化日志与资源检查
        self.logger = RunLogger(log_callback, verbose=config.verbose)
        self.monitor = ResourceMonitor(self.logger)
        self.timing_recorder = TimingRecorder(self.logger, self.monitor)

        # 初始化核心组件
        self.sieve = MoebiusSieve(self.logger, capacity=config.sieve_limit, monitor=self.monitor)
        self.spectral = SpectralEngine(self.logger, witness_bound=config.witness_bound,
                                       max_horizon=config.max_horizon, threads=config.threads,
                                       monitor=self.monitor)
        self.builder = ToeplitzBuilder(self.logger, self.monitor)
        self.experiments = MoebiusExperiments(self.logger, self.monitor)
        self.writer = ReportWriter(self.logger, config.out_path, config.fmt)

        self.commands = {
            "sigma": self.cmd_sigma,
            "valuations": self.cmd_valuations,
            "equiv": self.cmd_equiv,
            "disjoint": self.cmd_disjoint,
            "correlate": self.cmd_correlate,
            "stabilize": self.cmd_stabilize,
            "orthogonality": self.cmd_orthogonality,
            "rows": self.cmd_rows,
            "counterexample": self.cmd_counterexample,
            "toeplitz": self.cmd_toeplitz,
            "generate": self.cmd_generate,
        }

    def run(self) -> int:
        """执行配置中的命令

        Returns:
            退出码：0 正常，1 不变量违反，2 用法错误，3 容量错误
        """
        command = self.config.command
        try:
            self.config.validate()
            self.logger.log_message(f"执行命令: {command} {self.config.params}")

            self.timing_recorder.start_timing(command)
            record, violations = self.commands[command]()
            self.timing_recorder.end_timing(command)

            if not self.writer.write(record):
                return EXIT_USAGE
            if violations:
                raise InvariantViolation("; ".join(violations))
            return EXIT_OK

        except WitnessNotFoundError as e:
            self.logger.log_message(f"{e}，诊断信息: {e.diagnostics}", "ERROR")
            return exit_code_for(e)
        except MorseToolkitError as e:
            self.logger.log_message(f"{type(e).__name__}: {e}", "ERROR")
            return exit_code_for(e)
        except MemoryError as e:
            self.logger.log_message(f"内存不足: {e}", "ERROR")
            return EXIT_CAPACITY
        finally:
            if self.config.timing:
                self.timing_recorder.output_summary()

    # ------------------------------------------------------------------
    # 辅助
    # ------------------------------------------------------------------

    def _record(self, experiment: str, rows: List[Dict], summary: Optional[Dict] = None) -> Dict:
        record = {"experiment": experiment, "params": self.config.describe(), "rows": rows}
        if summary is not None:
            record["summary"] = summary
        return record

    def _check_horizon(self, extent: int, what: str):
        if extent > self.config.max_horizon:
            raise SequenceRangeError(
                f"{what} 需要 {extent} 个下标，超过横域上限 {self.config.max_horizon}")

    def resolve_sequence(self, selector: Tuple[str, str], extent: int):
        """把 (kind, argument) 选择器转换为序列访问器

        Args:
            selector: parse_sequence_selector 的结果
            extent: 需要覆盖的最大下标（反例序列与 Kakutani 序列按它确定横域）
        """
        kind, argument = selector
        if kind == "tm":
            return ThueMorseSequence()
        if kind == "thue":
            return ThueToeplitzSequence()
        if kind == "morse":
            return MorseSequence(parse_morse_spec(argument))
        if kind == "se":
            return SESequence(parse_range(argument))
        if kind == "kakutani":
            members = parse_range(argument)
            depth = max(max(members), extent.bit_length(), 1)
            return MorseSequence(kakutani_spec_from_E(members, depth))
        # counterexample
        base = int(argument)
        chain = DivisibilityChain.geometric(base)
        return self.builder.build_counterexample(chain, extent, self.sieve.build(extent))

    # ------------------------------------------------------------------
    # 谱命令
    # ------------------------------------------------------------------

    def cmd_sigma(self) -> CommandResult:
        ks = self.config.get("ks")
        if self.config.get("odd"):
            ks = [k for k in ks if k % 2 == 1]
        rows = [{"k": k, "sigma": value} for k, value in self.spectral.sigma_table(ks)]
        return self._record("sigma", rows), []

    def cmd_valuations(self) -> CommandResult:
        rows, violations, base_failures = [], [], []
        for K in self.config.get("Ks"):
            report = self.spectral.valuation_report(K)
            rows.append(report.to_dict())
            if not report.lemma_holds:
                (base_failures if report.base_case else violations).append(K)
        if base_failures:
            self.logger.log_message(f"基例 K = {base_failures} 不满足弱形式（已知例外）", "WARNING")
        summary = {"count": len(rows), "violations": len(violations),
                   "base_case_exceptions": base_failures}
        problems = [f"K = {violations[:10]} 不满足 σ̂ 赋值公式"] if violations else []
        return self._record("valuations", rows, summary), problems

    def cmd_equiv(self) -> CommandResult:
        K, L = self.config.get("K"), self.config.get("L")
        if K is not None:
            row = {"K": K, "L": L,
                   "sigma_K": self.spectral.sigma_hat(2 * K + 1),
                   "sigma_L": self.spectral.sigma_hat(2 * L + 1),
                   "equivalent": self.spectral.tm_equivalent(K, L)}
            return self._record("equiv", [row]), []
        classes = self.spectral.tm_equivalence_classes(self.config.get("Ks"))
        rows = [{"sigma": value, "size": len(members), "members": members}
                for value, members in classes]
        return self._record("equiv_classes", rows, {"classes": len(rows)}), []

    def cmd_disjoint(self) -> CommandResult:
        r, s = self.config.get("r"), self.config.get("s")
        witness = self.spectral.disjointness_witness(r, s)
        row = witness.to_dict()
        row["expected_disjoint"] = pair_disjoint_expected(r, s)
        problems = []
        if abs(witness.c1) == abs(witness.c2):
            problems.append(f"见证 t = {witness.t} 的 |c1| = |c2|")
        return self._record("disjoint", [row]), problems

    def cmd_correlate(self) -> CommandResult:
        k, N = self.config.get("k"), self.config.get("N")
        sequence = self.resolve_sequence(self.config.get("seq"), N + k)
        if not sequence.binary:
            raise UnsupportedInputError(f"{sequence.name} 不是 ±1 序列，无法计算相关")
        report = self.spectral.empirical_correlation(sequence, k, N)
        problems = []
        if abs(report.empirical) > 1:
            problems.append("经验相关的绝对值超过 1")
        return self._record("correlate", [report.to_dict()]), problems

    def cmd_stabilize(self) -> CommandResult:
        spec = parse_morse_spec(self.config.get("spec"))
        reports = self.spectral.stabilization_check(
            spec, self.config.get("s"), self.config.get("levels"), self.config.get("N"))
        return self._record("stabilize", [report.to_dict() for report in reports]), []

    # ------------------------------------------------------------------
    # Möbius 命令
    # ------------------------------------------------------------------

    def _cylinder(self) -> Optional[CylinderFunction]:
        word = self.config.get("word")
        if word is None:
            return None
        return CylinderFunction.indicator(word, self.config.get("offset", 0))

    def cmd_orthogonality(self) -> CommandResult:
        N = self.config.get("N")
        f = self._cylinder()
        extent = N + (f.offset + f.length if f else 0)
        self._check_horizon(extent, "正交性窗口")
        mu = self.sieve.build(N)
        sequence = self.resolve_sequence(self.config.get("seq"), extent)
        if f is not None and not sequence.binary:
            raise UnsupportedInputError("柱函数只能作用在 0/1 序列上")
        checkpoints = self.config.get("checkpoints")
        series = self.experiments.orthogonality_series(
            f, sequence, mu, [c for c in checkpoints if c <= N] + [N] if checkpoints else None)
        if not series.trend_ok:
            self.logger.log_message("|S_N| 的趋势超出 1.5 倍容差", "WARNING")
        return self._record("orthogonality", series.rows(), {"trend_ok": series.trend_ok}), []

    def cmd_rows(self) -> CommandResult:
        N, n = self.config.get("N"), self.config.get("stage")
        f = self._cylinder() or CylinderFunction.sign(self.config.get("offset", 0))
        self._check_horizon(N + f.offset + f.length, "行分解窗口")
        mu = self.sieve.build(N)
        sequence = self.resolve_sequence(self.config.get("seq"), N + f.offset + f.length)
        decomposition = self.experiments.row_decomposition(f, sequence, n, mu, N)
        hole_rows = set(decomposition.hole_rows)
        rows = [{"row": i, "value": value, "touches_hole": i in hole_rows}
                for i, value in enumerate(decomposition.rows, start=1)]
        summary = decomposition.summary()
        problems = [name for name in ("identity_ok", "boundary_ok", "rows_ok",
                                      "hole_free_rows_periodic") if not summary[name]]
        if decomposition.hole_free_count < decomposition.period - f.length:
            problems.append("无空洞行少于 2^n − ℓ")
        return self._record("rows", rows, summary), [f"行分解检查失败: {p}" for p in problems]

    def cmd_counterexample(self) -> CommandResult:
        N = self.config.get("N")
        explicit = self.config.get("chain")
        chain = DivisibilityChain(tuple(explicit or ()), self.config.get("base"))
        mu = self.sieve.build(N)
        sequence = self.builder.build_counterexample(chain, N, mu)
        checkpoints = self.config.get("checkpoints")
        report = self.experiments.inequality_chain(sequence, mu, N, checkpoints)
        rows = [point.to_dict() for point in report.checkpoints]
        summary = {"rho": report.rho, "inequality_holds": report.holds,
                   "first_violation": report.first_violation,
                   "non_initial_ok": report.non_initial_ok,
                   "first_non_initial_violation": report.first_non_initial_violation}
        problems = []
        if not report.holds:
            problems.append(f"Σ zμ ≥ Σ μ² − 2Nρ 在 N = {report.first_violation} 处不成立")
        if not report.non_initial_ok:
            problems.append(f"非初始元个数在 N = {report.first_non_initial_violation} 处不小于 Nρ")
        problems.extend(f"N = {point.N} 处下界不成立" for point in report.checkpoints
                        if not point.lower_bound_ok)
        return self._record("counterexample", rows, summary), problems

    # ------------------------------------------------------------------
    # 序列命令
    # ------------------------------------------------------------------

    def cmd_toeplitz(self) -> CommandResult:
        n, horizon = self.config.get("stage"), self.config.get("horizon")
        self._check_horizon(horizon, "Toeplitz 构造")
        partial = self.builder.thue_toeplitz_stage(n, horizon)
        holes = partial.hole_positions()
        period = 1 << n
        block_length = min(period - 1, horizon)
        block = "".join("?" if cell == HOLE else str(int(cell))
                        for cell in partial.cells[:block_length])
        row = {"stage": n, "block": block, "block_length": block_length,
               "holes": [int(h) for h in holes], "hole_density": partial.hole_density(),
               "pattern": str(partial)}

        problems = []
        if any(int(h) % period != period - 1 for h in holes):
            problems.append("空洞不在剩余类 2^n − 1 上")
        filled = partial.cells != HOLE
        expected = ThueToeplitzSequence().bits(0, horizon)
        mismatched = np.flatnonzero(filled & (partial.cells != expected))
        if mismatched.size:
            problems.append(f"逐阶填充与 x(i) XOR x(i+1) 在 {mismatched[:5].tolist()} 处不一致")
        return self._record("toeplitz", [row]), problems

    def cmd_generate(self) -> CommandResult:
        start, length = self.config.get("start"), self.config.get("length")
        self._check_horizon(start + length, "序列窗口")
        sequence = self.resolve_sequence(self.config.get("seq"), max(start + length - 1, 1))
        word = window(sequence, start, length)
        text = str(word) if sequence.binary else " ".join(str(v) for v in word)
        return self._record("generate", [{"start": start, "length": length, "word": text}]), []


def main(argv: Optional[List[str]] = None) -> int:
    """主函数"""
    try:
        config = parse_config(argv)
    except MorseToolkitError as e:
        RunLogger().log_message(f"{type(e).__name__}: {e}", "ERROR")
        return exit_code_for(e)
    app = MorseToolkitApp(config)
    return app.run()


if __name__ == "__main__":
    sys.exit(main())
