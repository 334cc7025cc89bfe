from pathlib import Path

import numpy as np
import pytest

from ccr_lab.modules.report import load_config
from ccr_lab.modules.test_space import TestSpace
from ccr_lab.modules.wightman_functional import WightmanFunctional

CONFIG_DIR = Path(__file__).resolve().parent.parent / "ccr_lab" / "data" / "configs"
SHIPPED_CONFIGS = ("cfg1", "scalar", "block", "vector")

CFG1_KERNEL = 0.5 * np.array([[1, 1j], [-1j, 1]])
SCALAR_KERNEL = np.array([[0.5]])
BLOCK_KERNEL = np.array([[0.5, 0.5j, 0], [-0.5j, 0.5, 0], [0, 0, 0.5]])


@pytest.fixture(scope="module")
def config_dir() -> Path:
    return CONFIG_DIR


@pytest.fixture(scope="module")
def cfg1_space() -> TestSpace:
    return TestSpace(CFG1_KERNEL, name="cfg1")


@pytest.fixture(scope="module")
def scalar_space() -> TestSpace:
    return TestSpace(SCALAR_KERNEL, name="scalar")


@pytest.fixture(scope="module")
def block_space() -> TestSpace:
    return TestSpace(BLOCK_KERNEL, components=("chiral", "chiral", "neutral"), name="block")


@pytest.fixture(scope="module")
def vector_space() -> TestSpace:
    return load_config(CONFIG_DIR / "vector.json").space()


@pytest.fixture(scope="module")
def cfg1_functional(cfg1_space) -> WightmanFunctional:
    return WightmanFunctional(cfg1_space)


@pytest.fixture(scope="module")
def scalar_functional(scalar_space) -> WightmanFunctional:
    return WightmanFunctional(scalar_space)
