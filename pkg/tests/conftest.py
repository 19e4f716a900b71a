import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for `oracles`

from rulewb.dataset import load_csv
from rulewb.mining import parse_rules
from rulewb.ontology import parse_ontology

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def casestudy_dataset():
    return load_csv((FIXTURES / "casestudy.csv").read_text())


@pytest.fixture(scope="session")
def casestudy_ontology():
    return parse_ontology((FIXTURES / "casestudy_ontology.json").read_text())


@pytest.fixture(scope="session")
def casestudy_rules(casestudy_dataset):
    return parse_rules(
        (FIXTURES / "table3_rules.txt").read_text(), casestudy_dataset
    )


@pytest.fixture(scope="session")
def table2_script():
    return (FIXTURES / "table2.rsl").read_text()


def random_dataset(rng: random.Random, max_attrs=10, max_values=6, max_rows=64):
    """Small random questionnaire table, as CSV text."""
    n_attrs = rng.randint(2, max_attrs)
    n_rows = rng.randint(1, max_rows)
    header = [f"q{i}" for i in range(1, n_attrs + 1)]
    lines = [",".join(header)]
    for _ in range(n_rows):
        cells = []
        for _ in header:
            if rng.random() < 0.15:
                cells.append("")  # missing answer
            else:
                cells.append(str(rng.randint(1, max_values)))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
