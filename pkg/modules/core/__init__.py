"""
核心计算模块包
包含精确算术、Möbius 筛、序列生成、Toeplitz 构造、谱计算与正交性实验
"""

# 导入核心模块
from .exact_arith import (ExactRational, OddChain, find_odd_t, floor_log2, format_rational,
                          lemma_t_candidates, odd_chain, parse_rational, v2)
from .moebius_sieve import MoebiusSieve, MoebiusTable, moebius_sieve, squarefree_count
from .sequence_generator import (Block, MorseSequence, MorseSpec, SESequence, SequenceAccessor,
                                 ThueMorseSequence, ThueToeplitzSequence, block_product,
                                 complement, is_thue_morse_type, kakutani_spec_from_E,
                                 morse_prefix, parse_morse_spec, s_E_bit, thue_morse_bit,
                                 thue_toeplitz_bit, window)
from .toeplitz_builder import (CounterexampleSequence, DivisibilityChain, FillStep,
                               PartialSequence, ToeplitzBuilder, build_counterexample,
                               regularity_profile, thue_toeplitz_stage, toeplitz_build)
from .spectral_engine import (CorrelationReport, DisjointnessWitness, SpectralEngine,
                              ValuationReport, get_default_spectral_engine,
                              pair_disjoint_expected)
from .moebius_experiments import (CylinderFunction, MoebiusExperiments, OrthogonalitySeries,
                                  RowDecomposition)

__all__ = [
    'ExactRational', 'OddChain', 'find_odd_t', 'floor_log2', 'format_rational',
    'lemma_t_candidates', 'odd_chain', 'parse_rational', 'v2',
    'MoebiusSieve', 'MoebiusTable', 'moebius_sieve', 'squarefree_count',
    'Block', 'MorseSequence', 'MorseSpec', 'SESequence', 'SequenceAccessor',
    'ThueMorseSequence', 'ThueToeplitzSequence', 'block_product', 'complement',
    'is_thue_morse_type', 'kakutani_spec_from_E', 'morse_prefix', 'parse_morse_spec',
    's_E_bit', 'thue_morse_bit', 'thue_toeplitz_bit', 'window',
    'CounterexampleSequence', 'DivisibilityChain', 'FillStep', 'PartialSequence',
    'ToeplitzBuilder', 'build_counterexample', 'regularity_profile', 'thue_toeplitz_stage',
    'toeplitz_build',
    'CorrelationReport', 'DisjointnessWitness', 'SpectralEngine', 'ValuationReport',
    'get_default_spectral_engine', 'pair_disjoint_expected',
    'CylinderFunction', 'MoebiusExperiments', 'OrthogonalitySeries', 'RowDecomposition',
]
