from pathlib import Path

import pytest

from benchvote import MetricSpec, Orientation, ScoreTable, kernels

DATA_DIR = Path(__file__).parent / "data"

# The formal-logic example: three models, three metrics, majority cycle
# GPT-4 > Qwen1.5 > GPT-3.5 > GPT-4 with buffer 0.08.
TABLE1_METRICS = (
    MetricSpec("accuracy", Orientation.HIGHER_IS_BETTER),
    MetricSpec("inference_time", Orientation.LOWER_IS_BETTER),
    MetricSpec("output_length", Orientation.LOWER_IS_BETTER),
)

TABLE1_RECORDS = (
    ("formal_logic", "GPT-4", "accuracy", 0.65),
    ("formal_logic", "Qwen1.5", "accuracy", 0.49),
    ("formal_logic", "GPT-3.5", "accuracy", 0.40),
    ("formal_logic", "Qwen1.5", "inference_time", 0.32),
    ("formal_logic", "GPT-3.5", "inference_time", 0.41),
    ("formal_logic", "GPT-4", "inference_time", 0.49),
    ("formal_logic", "GPT-3.5", "output_length", 1.00),
    ("formal_logic", "GPT-4", "output_length", 1.17),
    ("formal_logic", "Qwen1.5", "output_length", 2.00),
)


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # Compile the jitted kernels once so timed tests measure the algorithm,
    # not compilation.
    kernels.warmup()


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def table1() -> ScoreTable:
    return ScoreTable(records=TABLE1_RECORDS, metrics=TABLE1_METRICS)
