import sys
from pathlib import Path

import pytest

# 添加项目根目录到 Python 路径
sys.path.insert(0, str(Path(__file__).parent.parent))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: 桌面规模的 Monte Carlo 与素数普查（数分钟）")


def pytest_addoption(parser):
    parser.addoption("--run-slow", action="store_true", default=False, help="运行标记为 slow 的测试")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="需要 --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def small_params():
    from core.theory import TheoryParams
    return TheoryParams(n=4, g=2, h=2)
