"""Shared fixtures: seeded generators and session-wide solver objects."""
import numpy as np
import pytest
from hypothesis import settings

from src.hs_pipeline.bell_classic import SettingOptimizer
from src.hs_pipeline.distance_solver import DistanceSolver
from src.hs_pipeline.product_oracle import ProductOracle
from src.hs_pipeline.witness import WitnessAnalyzer

settings.register_profile("hsgeo", max_examples=40, deadline=None)
settings.load_profile("hsgeo")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240607)


@pytest.fixture(scope="session")
def oracle() -> ProductOracle:
    return ProductOracle()


@pytest.fixture(scope="session")
def solver(oracle) -> DistanceSolver:
    return DistanceSolver(oracle=oracle)


@pytest.fixture(scope="session")
def analyzer(solver) -> WitnessAnalyzer:
    return WitnessAnalyzer(solver)


@pytest.fixture(scope="session")
def optimizer(oracle) -> SettingOptimizer:
    return SettingOptimizer(oracle=oracle)
