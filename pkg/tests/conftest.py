import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tcsmatch.catalog import builtin_paper_catalog
from tcsmatch.matching import check_matching


@pytest.fixture(scope="session")
def catalog():
    return builtin_paper_catalog()


@pytest.fixture(scope="session")
def block_plus(catalog):
    return catalog["MM2-13"].to_block()


@pytest.fixture(scope="session")
def block_minus(catalog):
    return catalog["MM2-14"].to_block()


@pytest.fixture(scope="session")
def paper_matching(block_plus, block_minus):
    return check_matching(block_plus, (1, 1), block_minus, (1, 2))
