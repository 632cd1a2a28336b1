"""
测试配置
开启 SNF 逐次验证, 并把仓库根目录放到 sys.path
"""
import os
import sys
from pathlib import Path

os.environ.setdefault("QB_SNF_VERIFY", "1")

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

import pytest  # noqa: E402

from config import FIXTURES_DIR  # noqa: E402
from utils.categories import cyclic_group, poset, symmetric_group  # noqa: E402
from utils.sset import build_standard, point  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: 验收规模的检验")


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES_DIR


@pytest.fixture
def fixture_path():
    return lambda name: FIXTURES_DIR / name


@pytest.fixture
def circle():
    """∂Δ[2], 截断到 3"""
    return build_standard("boundary", 2, N=3)


@pytest.fixture
def pt():
    return point(3)


@pytest.fixture
def z2():
    return cyclic_group(2)


@pytest.fixture
def z3():
    return cyclic_group(3)


@pytest.fixture
def s3():
    return symmetric_group(3)


@pytest.fixture
def chain3():
    return poset([0, 1, 2], [(0, 1), (1, 2)])
