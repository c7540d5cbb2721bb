from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return REPO_ROOT / "data"


@pytest.fixture(scope="session")
def iris_csv(data_dir) -> Path:
    return data_dir / "iris.csv"


@pytest.fixture(scope="session")
def breast_cancer_csv(data_dir) -> Path:
    return data_dir / "breast_cancer.csv"
