"""
共享 fixture：仓库根目录加入 sys.path，提供筛表与谱引擎
"""

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from modules.core import MoebiusSieve, SpectralEngine  # noqa: E402

SMALL_LIMIT = 10**5


@pytest.fixture(scope="session")
def sieve():
    return MoebiusSieve(capacity=10**7)


@pytest.fixture(scope="session")
def mu_small(sieve):
    """μ(0..10^5)"""
    return sieve.build(SMALL_LIMIT)


@pytest.fixture(scope="session")
def engine():
    return SpectralEngine()
