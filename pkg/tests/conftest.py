import numpy as np
import pytest

from moeda_lab.services.core import Population, RngStream
from moeda_lab.services.problems import ProblemSpec


@pytest.fixture
def rng() -> RngStream:
    return RngStream.of(20240611)


@pytest.fixture
def trap_m2() -> ProblemSpec:
    return ProblemSpec.trap_invtrap(m=2, k=3)


def make_population(
    genomes: list[str], objectives: list[tuple[float, float]] | None = None
) -> Population:
    """测试用：由 0/1 串与目标值构造种群"""
    matrix = np.array([[int(ch) for ch in g] for g in genomes], dtype=np.uint8)
    objs = None if objectives is None else np.array(objectives, dtype=np.float64)
    return Population(genomes=matrix, objectives=objs)


def points_population(points: list[tuple[float, float]]) -> Population:
    """只关心目标值时使用的种群（基因型全 0）"""
    return make_population(["0000"] * len(points), points)
